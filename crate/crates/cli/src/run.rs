//! Job execution.

use std::sync::Arc;

use neron_core::birlaw::{weierstrass_equation, CheckReport, FiberedLaw, LawInputError, StrictLaw};
use neron_core::pipeline::{self, PipelineError, PipelineInput};
use neron_core::poly::{parse_poly, parse_ratfunc};
use neron_core::ratmap::AffineVariety;
use neron_core::smoothening::{delta, is_smooth_at, smoothen, DvrModel, Section};
use neron_core::volume::{fibre_components, minimal_components, normalize, ord_along, Component, ComponentOrder, VolumeForm};
use neron_core::weilgroup::{Letter, WeilGroup};
use neron_core::{
    DvrDescriptor, DvrElem, Field, Fp, FracElem, GroupError, MapError, ParseError, PolyRing, RatFunc,
    Rational, Ring, SmoothError, VolumeError,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::job::{Command, FormSpec, Job, LawSpec, LetterSpec, RingSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// A failure that stops a command.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    ResourceCap(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::ResourceCap(_) => "resource-cap",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::ResourceCap(m) => m,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::ResourceCap(_) => EXIT_CAP,
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                if e.is_resource_cap() {
                    Failure::ResourceCap(e.to_string())
                } else {
                    Failure::Input(e.to_string())
                }
            }
        }
    )*};
}

failure_from!(MapError, GroupError, SmoothError, VolumeError, PipelineError, LawInputError);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(format!("parse error: {e}"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorDoc {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub index: usize,
    pub command: &'static str,
    pub inputs: Vec<&'static str>,
    pub status: &'static str,
    pub details: Value,
    pub error: Option<ErrorDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub job: String,
    pub ring: String,
    pub caps: CapsDoc,
    pub results: Vec<CommandResult>,
    pub status: &'static str,
    pub exit_code: i32,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CapsDoc {
    pub max_degree: u32,
    pub max_basis: usize,
    pub word_bound: usize,
}

impl Report {
    /// Report for a job that could not be read or parsed.
    pub fn input_error(job: &str, message: String) -> Report {
        Report::setup_failure(job, "input", message, EXIT_INPUT)
    }

    fn setup_failure(job: &str, kind: &'static str, message: String, exit_code: i32) -> Report {
        Report {
            job: job.to_string(),
            ring: String::new(),
            caps: CapsDoc {
                max_degree: 0,
                max_basis: 0,
                word_bound: 0,
            },
            results: vec![CommandResult {
                index: 0,
                command: "setup",
                inputs: vec!["job"],
                status: "error",
                details: Value::Null,
                error: Some(ErrorDoc { kind, message }),
            }],
            status: "error",
            exit_code,
        }
    }

    pub fn summary(&self) -> String {
        let mut out = format!("job {} [{}]\n", self.job, self.ring);
        for r in &self.results {
            out.push_str(&format!("  [{}] {}: {}", r.index, r.command, r.status));
            if let Some(e) = &r.error {
                out.push_str(&format!(" ({}: {})", e.kind, e.message));
            }
            if let Some(fails) = r.details.get("failures").and_then(Value::as_array) {
                for f in fails.iter().filter_map(Value::as_str) {
                    out.push_str(&format!("\n      {f}"));
                }
            }
            out.push('\n');
        }
        out.push_str(&format!("status: {} (exit {})\n", self.status, self.exit_code));
        out
    }
}

type Outcome = Result<(bool, Value), Failure>;

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn reports_value(reports: &[CheckReport]) -> (bool, Value) {
    let passed = reports.iter().all(|r| r.passed);
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| format!("{}: {f}", r.check)))
        .collect();
    (passed, json!({ "checks": reports, "failures": failures }))
}

fn parse_scalar<F: Ring>(s: &str, ctx: &F::Ctx, consts: &[(String, F)]) -> Result<F, Failure> {
    let ring: Arc<PolyRing<F>> = PolyRing::new(&[] as &[String], ctx.clone());
    let p = parse_poly(s, &ring, consts)?;
    p.as_constant()
        .ok_or_else(|| Failure::Input(format!("'{s}' is not a constant")))
}

fn parse_point<F: Ring>(pt: &[String], ctx: &F::Ctx, consts: &[(String, F)]) -> Result<Vec<F>, Failure> {
    pt.iter().map(|s| parse_scalar(s, ctx, consts)).collect()
}

/// A law over one field with the form expressed on its variety.
struct LawBundle<F: Field> {
    law: Arc<StrictLaw<F>>,
    ctx: F::Ctx,
    consts: Vec<(String, F)>,
    form: Option<(RatFunc<F>, usize)>,
}

fn build_law<F: Field>(
    spec: &LawSpec,
    form: Option<&FormSpec>,
    ctx: &F::Ctx,
    consts: Vec<(String, F)>,
) -> Result<LawBundle<F>, Failure> {
    let ring: Arc<PolyRing<F>> = PolyRing::new(&spec.variables, ctx.clone());
    let eqs = spec
        .equations
        .iter()
        .map(|e| parse_poly(e, &ring, &consts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut x = AffineVariety::new(&ring, eqs).assume_irreducible();
    for h in &spec.localize {
        x = x.localized(&parse_poly(h, &ring, &consts)?);
    }
    let x = Arc::new(x);
    let slots = spec.slots.clone().unwrap_or_else(|| StrictLaw::default_slots(&x));
    let probes = spec
        .probes
        .iter()
        .map(|p| parse_point(p, ctx, &consts))
        .collect::<Result<Vec<_>, _>>()?;
    let w = &spec.witnesses;
    let law = StrictLaw::parse(
        x,
        slots,
        [spec.m12.clone(), spec.m13.clone(), spec.m23.clone()],
        [w.m12.clone(), w.m13.clone(), w.m23.clone()],
        probes,
        &consts,
    )?;
    let form = match form {
        Some(f) => Some(parse_form(f, &ring, &consts)?),
        None => None,
    };
    Ok(LawBundle {
        law: Arc::new(law),
        ctx: ctx.clone(),
        consts,
        form,
    })
}

fn parse_form<F: Ring>(
    f: &FormSpec,
    ring: &Arc<PolyRing<F>>,
    consts: &[(String, F)],
) -> Result<(RatFunc<F>, usize), Failure> {
    let c = parse_ratfunc(&f.coefficient, ring, consts)?;
    let i = ring
        .var_index(&f.differential)
        .ok_or_else(|| Failure::Input(format!("unknown differential d{}", f.differential)))?;
    Ok((c, i))
}

fn check_law<F: Field>(b: &LawBundle<F>) -> Outcome {
    let reports = b.law.check_all()?;
    Ok(reports_value(&reports))
}

fn group<F: Field>(
    b: &LawBundle<F>,
    words: &[Vec<LetterSpec>],
    generators: &[Vec<String>],
    bound: usize,
) -> Outcome {
    let g = WeilGroup::new(b.law.clone());
    let mut evaluated = Vec::new();
    for w in words {
        let letters = w
            .iter()
            .map(|l| {
                Ok(Letter {
                    point: parse_point(&l.point, &b.ctx, &b.consts)?,
                    inverse: l.inverse,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let e = g.evaluate_word(&letters)?;
        evaluated.push(json!({
            "word": e.word_string(),
            "forward": e.rep().forward.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "witness": e.rep().forward.witness().to_string(),
            "identity": g.is_identity(&e)?,
        }));
    }
    let mut passed = true;
    let mut atlas = Value::Null;
    if !generators.is_empty() {
        let gens = generators
            .iter()
            .map(|p| parse_point(p, &b.ctx, &b.consts))
            .collect::<Result<Vec<_>, _>>()?;
        let a = g.build_atlas(&gens, bound)?;
        passed = a.cocycle_holds();
        atlas = to_value(&a.document());
    }
    let failures: Vec<String> = if passed {
        Vec::new()
    } else {
        vec!["cocycle identity fails".into()]
    };
    Ok((passed, json!({ "words": evaluated, "atlas": atlas, "failures": failures })))
}

fn invariance<F: Field>(b: &LawBundle<F>) -> Outcome {
    let (c, i) = b
        .form
        .as_ref()
        .ok_or_else(|| Failure::Input("check-invariance needs a form block".into()))?;
    let r = neron_core::volume::check_invariance(&b.law, c, *i)?;
    Ok(reports_value(&[r]))
}

enum AnyLaw {
    Q(LawBundle<Rational>),
    Fp(LawBundle<Fp>),
    K(LawBundle<FracElem>, Box<FiberedLaw>),
}

/// Model data over a DVR.
struct ModelBundle {
    model: DvrModel,
    sections: Vec<Section>,
    form: Option<VolumeForm>,
    weierstrass: Option<[DvrElem; 5]>,
}

fn descriptor(ring: &RingSpec) -> Result<Option<DvrDescriptor>, Failure> {
    let d = match ring {
        RingSpec::Zp { p } => DvrDescriptor::integers(*p),
        RingSpec::FpT { p } => DvrDescriptor::polynomials(*p),
        _ => return Ok(None),
    };
    d.map(Some).map_err(|e| Failure::Input(e.to_string()))
}

fn build_model(job: &Job, d: DvrDescriptor) -> Result<Option<ModelBundle>, Failure> {
    let sym = d.uniformizer_symbol().to_string();
    let consts = vec![(sym, DvrElem::uniformizer(d))];
    if job.model.is_some() && job.weierstrass.is_some() {
        return Err(Failure::Input("give either a model or Weierstrass coefficients, not both".into()));
    }
    let mut weierstrass = None;
    let (ring, eqs) = match (&job.model, &job.weierstrass) {
        (Some(m), _) => {
            let ring: Arc<PolyRing<DvrElem>> = PolyRing::new(&m.variables, d);
            let eqs = m
                .equations
                .iter()
                .map(|e| parse_poly(e, &ring, &consts))
                .collect::<Result<Vec<_>, _>>()?;
            (ring, eqs)
        }
        (None, Some(a)) => {
            let ring: Arc<PolyRing<DvrElem>> = PolyRing::new(&["x", "y"], d);
            let coefs: Vec<DvrElem> = a
                .iter()
                .map(|s| parse_scalar(s, &d, &consts))
                .collect::<Result<_, _>>()?;
            let coefs: [DvrElem; 5] = coefs.try_into().expect("five coefficients");
            weierstrass = Some(coefs.clone());
            (ring.clone(), vec![weierstrass_equation(&ring, coefs)])
        }
        (None, None) => return Ok(None),
    };
    let model = DvrModel::new("A", &ring, eqs)?;
    let sections = job
        .sections
        .iter()
        .map(|s| Ok(Section::new(&model, parse_point(s, &d, &consts)?)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    let form = match (&job.form, &weierstrass) {
        (Some(f), _) => {
            let (c, i) = parse_form(f, &ring, &consts)?;
            Some(VolumeForm::new(c, i))
        }
        (_, Some([a1, _, a3, _, _])) => Some(VolumeForm::weierstrass(&ring, a1, a3)),
        _ => None,
    };
    Ok(Some(ModelBundle {
        model,
        sections,
        form,
        weierstrass,
    }))
}

fn build_any_law(job: &Job, d: Option<DvrDescriptor>) -> Result<Option<AnyLaw>, Failure> {
    let Some(spec) = &job.law else { return Ok(None) };
    let form = job.form.as_ref();
    Ok(Some(match job.ring {
        RingSpec::Q => AnyLaw::Q(build_law(spec, form, &(), vec![])?),
        RingSpec::Fp { p } => {
            if !neron_core::arith::is_prime(p) {
                return Err(Failure::Input(format!("{p} is not prime")));
            }
            AnyLaw::Fp(build_law(spec, form, &p, vec![])?)
        }
        RingSpec::Zp { .. } | RingSpec::FpT { .. } => {
            let d = d.expect("descriptor for a DVR");
            let sym = d.uniformizer_symbol().to_string();
            let k = build_law(spec, form, &d, vec![(sym.clone(), FracElem::uniformizer(d))])?;
            AnyLaw::K(k, Box::new(fibered(spec, d, &sym)?))
        }
    }))
}

fn fibered(spec: &LawSpec, d: DvrDescriptor, sym: &str) -> Result<FiberedLaw, Failure> {
    let consts = vec![(sym.to_string(), DvrElem::uniformizer(d))];
    let ring: Arc<PolyRing<DvrElem>> = PolyRing::new(&spec.variables, d);
    let eqs = spec
        .equations
        .iter()
        .map(|e| parse_poly(e, &ring, &consts))
        .collect::<Result<Vec<_>, _>>()?;
    let x = AffineVariety::affine_space(&PolyRing::<Rational>::new(&spec.variables, ()));
    let slots = spec.slots.clone().unwrap_or_else(|| StrictLaw::default_slots(&x));
    let mut coords: Vec<Vec<RatFunc<DvrElem>>> = Vec::new();
    for (k, cs) in [&spec.m12, &spec.m13, &spec.m23].into_iter().enumerate() {
        let (i, j) = [(0, 1), (0, 2), (1, 2)][k];
        let names = [slots[i].clone(), slots[j].clone()].concat();
        let r = ring.with_vars(&names);
        coords.push(
            cs.iter()
                .map(|c| parse_ratfunc(c, &r, &consts))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let probes = spec
        .probes
        .iter()
        .map(|p| parse_point(p, &d, &consts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiberedLaw::with_ring(
        &ring,
        &eqs,
        slots,
        coords.try_into().expect("three maps"),
        probes,
    )?)
}

fn need<'a, T>(x: &'a Option<T>, what: &str, cmd: &str) -> Result<&'a T, Failure> {
    x.as_ref()
        .ok_or_else(|| Failure::Input(format!("{cmd} needs a {what} block")))
}

fn orders_cmd(m: &ModelBundle, components: &[String], scale: i64) -> Outcome {
    let form = need(&m.form, "form", "orders")?.scale_pi(scale);
    let sring: Arc<PolyRing<Fp>> = PolyRing::new(m.model.ring().vars(), m.model.descriptor().prime());
    let comps = if components.is_empty() {
        fibre_components(&m.model)
    } else {
        components
            .iter()
            .map(|q| Ok(Component::Factor(parse_poly(q, &sring, &[])?)))
            .collect::<Result<Vec<_>, Failure>>()?
    };
    let mut orders = Vec::new();
    for c in comps {
        orders.push(ComponentOrder {
            chart: m.model.name().to_string(),
            component: c.to_string(),
            order: ord_along(&m.model, &c, &form)?,
        });
    }
    let (shift, normalized) = normalize(&orders)?;
    let minimal = minimal_components(&normalized);
    Ok((
        true,
        json!({
            "form": form.to_string(),
            "orders": orders,
            "normalization_shift": shift,
            "normalized": normalized,
            "minimal": minimal,
        }),
    ))
}

/// Runs every command of the job in order.
pub fn run_job(job: &Job, caps: crate::Caps) -> Report {
    let word_bound = caps.word_bound;
    let caps_doc = CapsDoc {
        max_degree: caps.max_degree,
        max_basis: caps.max_basis,
        word_bound,
    };
    let mut results = Vec::new();
    let mut exit = EXIT_PASS;
    let prepared = (|| -> Result<(Option<AnyLaw>, Option<ModelBundle>), Failure> {
        let d = descriptor(&job.ring)?;
        let law = build_any_law(job, d)?;
        let model = match d {
            Some(d) => build_model(job, d)?,
            None if job.model.is_some() || job.weierstrass.is_some() => {
                return Err(Failure::Input("models need a discrete valuation ring (Zp or FpT)".into()))
            }
            None => None,
        };
        Ok((law, model))
    })();
    let (law, model) = match prepared {
        Ok(x) => x,
        Err(f) => {
            let mut r = Report::setup_failure(&job.name, f.kind(), f.message().to_string(), f.exit_code());
            r.ring = job.ring.to_string();
            r.caps = caps_doc;
            return r;
        }
    };

    for (index, cmd) in job.commands.iter().enumerate() {
        let outcome: Outcome = (|| match cmd {
            Command::CheckLaw => match need(&law, "law", "check-law")? {
                AnyLaw::Q(b) => check_law(b),
                AnyLaw::Fp(b) => check_law(b),
                AnyLaw::K(_, f) => Ok(reports_value(&f.check_all()?)),
            },
            Command::Group {
                words,
                generators,
                bound,
            } => {
                let bound = bound.unwrap_or(word_bound);
                match need(&law, "law", "group")? {
                    AnyLaw::Q(b) => group(b, words, generators, bound),
                    AnyLaw::Fp(b) => group(b, words, generators, bound),
                    AnyLaw::K(b, _) => group(b, words, generators, bound),
                }
            }
            Command::CheckInvariance => match need(&law, "law", "check-invariance")? {
                AnyLaw::Q(b) => invariance(b),
                AnyLaw::Fp(b) => invariance(b),
                AnyLaw::K(b, _) => invariance(b),
            },
            Command::Delta => {
                let m = need(&model, "model", "delta")?;
                let mut rows = Vec::new();
                for s in &m.sections {
                    rows.push(json!({
                        "section": s.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "delta": delta(&m.model, s)?,
                        "smooth": is_smooth_at(&m.model, s)?,
                    }));
                }
                Ok((true, json!({ "sections": rows })))
            }
            Command::Smoothen => {
                let m = need(&model, "model", "smoothen")?;
                let sm = smoothen(&m.model, &m.sections)?;
                let mut failures = Vec::new();
                for t in &sm.sections {
                    if !is_smooth_at(&sm.charts[t.chart].model, &t.section)? {
                        failures.push(format!("section {} is not smooth", t.initial));
                    }
                }
                Ok((
                    failures.is_empty(),
                    json!({ "lineage": sm.document(), "failures": failures }),
                ))
            }
            Command::Orders { components, scale } => orders_cmd(need(&model, "model", "orders")?, components, *scale),
            Command::FilterMinimal => {
                let m = need(&model, "model", "filter-minimal")?;
                let form = need(&m.form, "form", "filter-minimal")?;
                let part = pipeline::minimal_part(&m.model, &m.sections, form)?;
                Ok((true, to_value(&part)))
            }
            Command::Pipeline { bound } => {
                let m = need(&model, "weierstrass", "pipeline")?;
                let coefficients = need(&m.weierstrass, "weierstrass", "pipeline")?.clone();
                let input = PipelineInput {
                    ring: m.model.ring().clone(),
                    coefficients,
                    sections: m.sections.iter().map(|s| s.coords().to_vec()).collect(),
                    atlas_bound: Some(bound.unwrap_or(word_bound)),
                    check_laws: true,
                };
                let r = pipeline::run(&input)?;
                let passed = r.passed();
                let failures: Vec<String> = r
                    .law_checks
                    .iter()
                    .flat_map(|c| c.failures.iter().map(move |f| format!("{}: {f}", c.check)))
                    .collect();
                let mut v = to_value(&r);
                v["failures"] = json!(failures);
                Ok((passed, v))
            }
        })();
        let (status, details, error) = match outcome {
            Ok((true, v)) => ("pass", v, None),
            Ok((false, v)) => {
                exit = exit.max(EXIT_FAIL);
                ("fail", v, None)
            }
            Err(f) => {
                exit = exit.max(f.exit_code());
                (
                    "error",
                    Value::Null,
                    Some(ErrorDoc {
                        kind: f.kind(),
                        message: f.message().to_string(),
                    }),
                )
            }
        };
        results.push(CommandResult {
            index,
            command: cmd.name(),
            inputs: cmd.inputs(),
            status,
            details,
            error,
        });
    }
    // input errors outrank resource caps, which outrank failed checks
    if results.iter().any(|r| r.error.as_ref().is_some_and(|e| e.kind == "input")) {
        exit = EXIT_INPUT;
    }
    Report {
        job: job.name.clone(),
        ring: job.ring.to_string(),
        caps: caps_doc,
        results,
        status: match exit {
            EXIT_PASS => "pass",
            EXIT_FAIL => "fail",
            _ => "error",
        },
        exit_code: exit,
    }
}
