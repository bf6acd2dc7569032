//! Strict birational group laws and their validation, plus rational
//! factor systems between commutative groups.
//!
//! A law on `X` is given by three partial maps on `X × X`:
//! `m12(a, b) = ab`, `m13(a, c) = a⁻¹c` and `m23(b, c) = cb⁻¹`, all of
//! which must describe the same graph `W ⊂ X³`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{DvrElem, Field, Fp, FracElem, Ring};
use crate::error::{MapError, ParseError};
use crate::poly::{parse_ratfunc, Poly, PolyRing, RatFunc};
use crate::ratmap::{AffineVariety, RationalMap};

/// Outcome of one validation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            passed: true,
            failures: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.passed = false;
        self.failures.push(msg);
    }

    /// Merges reports of the same check on different fibres.
    pub fn merged(check: &str, parts: &[(&str, CheckReport)]) -> CheckReport {
        let mut out = CheckReport::new(check);
        for (label, r) in parts {
            out.passed &= r.passed;
            out.failures.extend(r.failures.iter().map(|f| format!("{label}: {f}")));
            out.warnings.extend(r.warnings.iter().map(|w| format!("{label}: {w}")));
        }
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, if self.passed { "pass" } else { "FAIL" })?;
        for x in &self.failures {
            write!(f, "\n  failure: {x}")?;
        }
        for w in &self.warnings {
            write!(f, "\n  warning: {w}")?;
        }
        Ok(())
    }
}

/// Which of the three partial maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LawMap {
    M12,
    M13,
    M23,
}

impl LawMap {
    pub const ALL: [LawMap; 3] = [LawMap::M12, LawMap::M13, LawMap::M23];

    fn index(self) -> usize {
        self as usize
    }

    /// The two slots of `X³` the map takes as arguments.
    pub fn slots(self) -> (usize, usize) {
        match self {
            LawMap::M12 => (0, 1),
            LawMap::M13 => (0, 2),
            LawMap::M23 => (1, 2),
        }
    }

    /// The slot of `X³` the map computes.
    pub fn output_slot(self) -> usize {
        match self {
            LawMap::M12 => 2,
            LawMap::M13 => 1,
            LawMap::M23 => 0,
        }
    }
}

impl fmt::Display for LawMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawMap::M12 => "m12",
            LawMap::M13 => "m13",
            LawMap::M23 => "m23",
        })
    }
}

/// A strict birational group law over a field.
#[derive(Clone, Debug)]
pub struct StrictLaw<F: Field> {
    x: Arc<AffineVariety<F>>,
    slots: [Vec<String>; 3],
    pairs: [Arc<AffineVariety<F>>; 3],
    triple: Arc<AffineVariety<F>>,
    maps: [RationalMap<F>; 3],
    probes: Vec<Vec<F>>,
}

fn pair_names(slots: &[Vec<String>; 3], m: LawMap) -> Vec<Vec<String>> {
    let (i, j) = m.slots();
    vec![slots[i].clone(), slots[j].clone()]
}

impl<F: Field> StrictLaw<F> {
    /// Default slot names: the variables of `X` suffixed by 1, 2, 3.
    pub fn default_slots(x: &AffineVariety<F>) -> [Vec<String>; 3] {
        let mk = |k: usize| x.ring().vars().iter().map(|v| format!("{v}{k}")).collect();
        [mk(1), mk(2), mk(3)]
    }

    /// Builds a law. Coordinates may live in any ring whose variables are
    /// among the names of the map's two argument slots; they are moved into
    /// the pair ring by name. Missing witnesses default to the product of
    /// the coordinate denominators.
    pub fn new(
        x: Arc<AffineVariety<F>>,
        slots: [Vec<String>; 3],
        coords: [Vec<RatFunc<F>>; 3],
        witnesses: [Option<Poly<F>>; 3],
        probes: Vec<Vec<F>>,
    ) -> Result<Self, MapError> {
        let mk_pair = |m: LawMap| x.power(&pair_names(&slots, m)).map(Arc::new);
        let pairs = [mk_pair(LawMap::M12)?, mk_pair(LawMap::M13)?, mk_pair(LawMap::M23)?];
        let triple = Arc::new(x.power(slots.as_ref())?);
        let mut maps = Vec::with_capacity(3);
        for (m, (cs, w)) in LawMap::ALL.iter().zip(coords.iter().zip(witnesses)) {
            let src = &pairs[m.index()];
            let cs = cs
                .iter()
                .map(|c| move_by_name(c, src.ring()))
                .collect::<Result<Vec<_>, _>>()?;
            let w = w.map(|w| move_poly_by_name(&w, src.ring())).transpose()?;
            maps.push(RationalMap::new(src, &x, cs, w)?);
        }
        let maps: [RationalMap<F>; 3] = maps.try_into().expect("three maps");
        Ok(StrictLaw {
            x,
            slots,
            pairs,
            triple,
            maps,
            probes,
        })
    }

    /// Parses the three maps (and optional witnesses) from text.
    pub fn parse(
        x: Arc<AffineVariety<F>>,
        slots: [Vec<String>; 3],
        coords: [Vec<String>; 3],
        witnesses: [Option<String>; 3],
        probes: Vec<Vec<F>>,
        constants: &[(String, F)],
    ) -> Result<Self, LawInputError> {
        let mut cs: Vec<Vec<RatFunc<F>>> = Vec::new();
        let mut ws: Vec<Option<Poly<F>>> = Vec::new();
        for (m, (c, w)) in LawMap::ALL.iter().zip(coords.iter().zip(witnesses.iter())) {
            let names: Vec<String> = pair_names(&slots, *m).concat();
            let ring = x.ring().with_vars(&names);
            cs.push(
                c.iter()
                    .map(|s| parse_ratfunc(s, &ring, constants))
                    .collect::<Result<_, _>>()?,
            );
            ws.push(match w {
                Some(s) => Some(crate::poly::parse_poly(s, &ring, constants)?),
                None => None,
            });
        }
        let coords: [Vec<RatFunc<F>>; 3] = cs.try_into().expect("three");
        let witnesses: [Option<Poly<F>>; 3] = ws.try_into().expect("three");
        Ok(StrictLaw::new(x, slots, coords, witnesses, probes)?)
    }

    pub fn variety(&self) -> &Arc<AffineVariety<F>> {
        &self.x
    }

    pub fn slots(&self) -> &[Vec<String>; 3] {
        &self.slots
    }

    pub fn map(&self, m: LawMap) -> &RationalMap<F> {
        &self.maps[m.index()]
    }

    pub fn pair(&self, m: LawMap) -> &Arc<AffineVariety<F>> {
        &self.pairs[m.index()]
    }

    pub fn triple(&self) -> &Arc<AffineVariety<F>> {
        &self.triple
    }

    pub fn probes(&self) -> &[Vec<F>] {
        &self.probes
    }

    pub fn with_probes(mut self, probes: Vec<Vec<F>>) -> Self {
        self.probes = probes;
        self
    }

    /// Applies map `m` to rational-function arguments living in `target`.
    pub fn apply(
        &self,
        m: LawMap,
        target: &Arc<PolyRing<F>>,
        first: &[RatFunc<F>],
        second: &[RatFunc<F>],
    ) -> (Vec<RatFunc<F>>, Poly<F>) {
        let map = self.map(m);
        let args: Vec<RatFunc<F>> = first.iter().chain(second).cloned().collect();
        let coords = map.coords().iter().map(|c| c.substitute(target, &args)).collect();
        let w = RatFunc::from(map.witness().clone()).substitute(target, &args);
        (coords, w.numerator().clone())
    }

    /// Map `m` with one argument slot fixed to a point; a self-map of `X`
    /// in the remaining slot.
    pub fn specialize(&self, m: LawMap, fixed_slot: usize, pt: &[F]) -> RationalMap<F> {
        let ring = self.x.ring();
        let consts: Vec<RatFunc<F>> = pt.iter().map(|c| RatFunc::constant(ring, c.clone())).collect();
        let vars: Vec<RatFunc<F>> = (0..ring.nvars()).map(|i| RatFunc::var(ring, i)).collect();
        let (first, second) = if fixed_slot == 0 { (&consts, &vars) } else { (&vars, &consts) };
        let (coords, w) = self.apply(m, ring, first, second);
        RationalMap::new(&self.x, &self.x, coords, Some(w)).expect("dimensions match")
    }

    fn vars_of_slot(&self, src: &Arc<AffineVariety<F>>, slot: usize) -> Vec<RatFunc<F>> {
        self.slots[slot]
            .iter()
            .map(|v| RatFunc::var(src.ring(), src.ring().var_index(v).expect("slot variable present")))
            .collect()
    }

    /// The map `src → pair(m_out)` sending a point to `(p, q)` where each
    /// component is a slot of `src` or the value of a law map.
    fn assemble(&self, src: &Arc<AffineVariety<F>>, parts: [Part; 2], out: LawMap) -> RationalMap<F> {
        let mut coords = Vec::new();
        let mut witness = Poly::one(src.ring());
        for part in parts {
            match part {
                Part::Slot(s) => coords.extend(self.vars_of_slot(src, s)),
                Part::Law(m, i, j) => {
                    let first = self.vars_of_slot(src, i);
                    let second = self.vars_of_slot(src, j);
                    let (c, w) = self.apply(m, src.ring(), &first, &second);
                    coords.extend(c);
                    witness = witness.mul(&w);
                }
            }
        }
        let target = &self.pairs[out.index()];
        RationalMap::new(src, target, coords, Some(witness)).expect("dimensions match")
    }

    fn projection(&self, src: &Arc<AffineVariety<F>>, slot: usize) -> RationalMap<F> {
        let coords = self.vars_of_slot(src, slot);
        RationalMap::new(src, &self.x, coords, None).expect("dimensions match")
    }

    /// The six identities saying the three maps present one graph.
    pub fn check_graph_consistency(&self) -> Result<CheckReport, MapError> {
        let mut report = CheckReport::new("graph-consistency");
        // (source pair, inner map, outer map) with outputs placed by slot
        let cases: [(LawMap, LawMap); 6] = [
            (LawMap::M12, LawMap::M13),
            (LawMap::M12, LawMap::M23),
            (LawMap::M13, LawMap::M12),
            (LawMap::M13, LawMap::M23),
            (LawMap::M23, LawMap::M12),
            (LawMap::M23, LawMap::M13),
        ];
        for (k, (src_map, outer)) in cases.iter().enumerate() {
            let src = self.pairs[src_map.index()].clone();
            let (i, j) = src_map.slots();
            let inner_out = src_map.output_slot();
            let (oi, oj) = outer.slots();
            let part = |s: usize| {
                if s == inner_out {
                    Part::Law(*src_map, i, j)
                } else {
                    Part::Slot(s)
                }
            };
            let feed = self.assemble(&src, [part(oi), part(oj)], *outer);
            let lhs = self.maps[outer.index()].compose(&feed)?;
            let rhs = self.projection(&src, outer.output_slot());
            if let Some((c, res)) = lhs.first_disagreement(&rhs)? {
                report.fail(format!(
                    "identity {} ({outer} after {src_map}) fails in coordinate {c}: residue {res}",
                    k + 1
                ));
                break;
            }
        }
        Ok(report)
    }

    /// Density of the witness opens, generically and on probe slices.
    pub fn check_translation_density(&self) -> Result<CheckReport, MapError> {
        let mut report = CheckReport::new("translation-density");
        for m in LawMap::ALL {
            if !self.pairs[m.index()].is_dense_open(self.maps[m.index()].witness())? {
                report.fail(format!("witness of {m} is not dense in X × X"));
            }
        }
        if self.probes.is_empty() {
            report
                .warnings
                .push("no probe points: only the generic slice was checked".into());
        }
        for (k, pt) in self.probes.iter().enumerate() {
            if !self.x.contains_point(pt) {
                report.fail(format!("probe {k} {} is not a point of X", fmt_point(pt)));
                continue;
            }
            for m in LawMap::ALL {
                for slot in 0..2 {
                    let s = self.specialize(m, slot, pt);
                    if !self.x.is_dense_open(s.witness())? {
                        report.fail(format!(
                            "probe {k} {}: slice of {m} with argument {} fixed is empty",
                            fmt_point(pt),
                            slot + 1
                        ));
                    }
                }
            }
        }
        if !report.passed || !self.probes.is_empty() {
            report
                .warnings
                .push("density for all points is only certified generically and at the probes".into());
        }
        Ok(report)
    }

    /// `a(bc) = (ab)c` on a dense open of `X³`.
    pub fn check_associativity(&self) -> Result<CheckReport, MapError> {
        let mut report = CheckReport::new("associativity");
        let t = self.triple.clone();
        let left_feed = self.assemble(&t, [Part::Slot(0), Part::Law(LawMap::M12, 1, 2)], LawMap::M12);
        let right_feed = self.assemble(&t, [Part::Law(LawMap::M12, 0, 1), Part::Slot(2)], LawMap::M12);
        let m12 = &self.maps[0];
        let left = m12.compose(&left_feed)?;
        let right = m12.compose(&right_feed)?;
        if let Some((c, res)) = left.first_disagreement(&right)? {
            report.fail(format!("a(bc) and (ab)c differ in coordinate {c}: residue {res}"));
        }
        Ok(report)
    }

    /// All three checks.
    pub fn check_all(&self) -> Result<Vec<CheckReport>, MapError> {
        Ok(vec![
            self.check_graph_consistency()?,
            self.check_translation_density()?,
            self.check_associativity()?,
        ])
    }
}

#[derive(Clone, Copy)]
enum Part {
    Slot(usize),
    Law(LawMap, usize, usize),
}

fn fmt_point<F: Field>(pt: &[F]) -> String {
    let parts: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn var_map_by_name<F: Field>(from: &Arc<PolyRing<F>>, to: &Arc<PolyRing<F>>) -> Result<Vec<usize>, MapError> {
    from.vars()
        .iter()
        .map(|v| {
            to.var_index(v)
                .ok_or_else(|| MapError::Mismatch(format!("variable {v} is not an argument of the map")))
        })
        .collect()
}

fn move_by_name<F: Field>(c: &RatFunc<F>, to: &Arc<PolyRing<F>>) -> Result<RatFunc<F>, MapError> {
    Ok(c.embed(to, &var_map_by_name(c.ring(), to)?))
}

fn move_poly_by_name<F: Field>(c: &Poly<F>, to: &Arc<PolyRing<F>>) -> Result<Poly<F>, MapError> {
    Ok(c.embed(to, &var_map_by_name(c.ring(), to)?))
}

/// Errors while building a law from text.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LawInputError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Map(#[from] MapError),
}

impl LawInputError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, LawInputError::Map(e) if e.is_resource_cap())
    }
}

/// A law over a DVR, checked on the generic and the special fibre.
#[derive(Clone, Debug)]
pub struct FiberedLaw {
    pub generic: StrictLaw<FracElem>,
    pub special: StrictLaw<Fp>,
}

impl FiberedLaw {
    /// Builds both fibres from integral data. Probes are `R`-points; their
    /// reductions serve as special-fibre probes.
    pub fn new(
        equations: &[Poly<DvrElem>],
        slots: [Vec<String>; 3],
        coords: [Vec<RatFunc<DvrElem>>; 3],
        probes: Vec<Vec<DvrElem>>,
    ) -> Result<Self, MapError> {
        let ring = equations
            .first()
            .map(|e| e.ring().clone())
            .ok_or_else(|| MapError::Invalid("fibred law needs at least one equation ring".into()))?;
        Self::with_ring(&ring, equations, slots, coords, probes)
    }

    pub fn with_ring(
        ring: &Arc<PolyRing<DvrElem>>,
        equations: &[Poly<DvrElem>],
        slots: [Vec<String>; 3],
        coords: [Vec<RatFunc<DvrElem>>; 3],
        probes: Vec<Vec<DvrElem>>,
    ) -> Result<Self, MapError> {
        let d = *ring.ctx();
        let kring: Arc<PolyRing<FracElem>> = PolyRing::new(ring.vars(), d);
        let sring: Arc<PolyRing<Fp>> = PolyRing::new(ring.vars(), d.prime());
        let kx = Arc::new(
            AffineVariety::new(&kring, equations.iter().map(|e| e.map_coeffs(&kring, DvrElem::to_frac)).collect())
                .assume_irreducible(),
        );
        let sx = Arc::new(
            AffineVariety::new(&sring, equations.iter().map(|e| e.map_coeffs(&sring, DvrElem::residue)).collect())
                .assume_irreducible(),
        );
        let mut kc: Vec<Vec<RatFunc<FracElem>>> = Vec::new();
        let mut sc: Vec<Vec<RatFunc<Fp>>> = Vec::new();
        for cs in &coords {
            let mut kv = Vec::new();
            let mut sv = Vec::new();
            for c in cs {
                let r = c.ring();
                let kr: Arc<PolyRing<FracElem>> = PolyRing::new(r.vars(), d);
                let sr: Arc<PolyRing<Fp>> = PolyRing::new(r.vars(), d.prime());
                kv.push(c.map_coeffs(&kr, DvrElem::to_frac));
                let den = c.denominator().map_coeffs(&sr, DvrElem::residue);
                if den.is_zero() {
                    return Err(MapError::Invalid(format!(
                        "denominator {} vanishes on the special fibre",
                        c.denominator()
                    )));
                }
                sv.push(RatFunc::new(c.numerator().map_coeffs(&sr, DvrElem::residue), den).expect("nonzero"));
            }
            kc.push(kv);
            sc.push(sv);
        }
        let kprobes = probes.iter().map(|p| p.iter().map(DvrElem::to_frac).collect()).collect();
        let sprobes = probes.iter().map(|p| p.iter().map(DvrElem::residue).collect()).collect();
        let generic = StrictLaw::new(
            kx,
            slots.clone(),
            kc.try_into().expect("three"),
            [None, None, None],
            kprobes,
        )?;
        let special = StrictLaw::new(
            sx,
            slots,
            sc.try_into().expect("three"),
            [None, None, None],
            sprobes,
        )?;
        Ok(FiberedLaw { generic, special })
    }

    pub fn check_all(&self) -> Result<Vec<CheckReport>, MapError> {
        let g = self.generic.check_all()?;
        let s = self.special.check_all()?;
        Ok(g.into_iter()
            .zip(s)
            .map(|(a, b)| {
                let name = a.check.clone();
                CheckReport::merged(&name, &[("generic fibre", a), ("special fibre", b)])
            })
            .collect())
    }
}

/// Chord-tangent law on the affine part of a Weierstrass curve
/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`, slots `(x1,y1)`, `(x2,y2)`,
/// `(x3,y3)`.
pub fn chord_law<F: Field>(
    ring: &Arc<PolyRing<F>>,
    a: [F; 5],
    probes: Vec<Vec<F>>,
) -> Result<StrictLaw<F>, MapError> {
    assert_eq!(ring.nvars(), 2, "Weierstrass curves live in two variables");
    let [a1, a2, a3, a4, a6] = a;
    let eq = weierstrass_equation(ring, [a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone()]);
    let x = Arc::new(AffineVariety::new(ring, vec![eq]).assume_irreducible());
    let slots = [
        vec!["x1".to_string(), "y1".to_string()],
        vec!["x2".to_string(), "y2".to_string()],
        vec!["x3".to_string(), "y3".to_string()],
    ];
    let mk = |names: [&str; 4]| ring.with_vars(&names);
    let add = |r: &Arc<PolyRing<F>>, neg_first: bool, neg_second: bool| {
        let v = |i: usize| RatFunc::var(r, i);
        let k = |c: &F| RatFunc::constant(r, c.clone());
        let negate = |x: RatFunc<F>, y: RatFunc<F>| {
            let ny = y.neg().sub(&k(&a1).mul(&x)).sub(&k(&a3));
            (x, ny)
        };
        let (x1, y1) = if neg_first { negate(v(0), v(1)) } else { (v(0), v(1)) };
        let (x2, y2) = if neg_second { negate(v(2), v(3)) } else { (v(2), v(3)) };
        let lambda = y2.sub(&y1).div(&x2.sub(&x1)).expect("distinct variables");
        let nu = y1.sub(&lambda.mul(&x1));
        let x3 = lambda
            .mul(&lambda)
            .add(&k(&a1).mul(&lambda))
            .sub(&k(&a2))
            .sub(&x1)
            .sub(&x2);
        let y3 = lambda.add(&k(&a1)).mul(&x3).neg().sub(&nu).sub(&k(&a3));
        vec![x3, y3]
    };
    let m12 = add(&mk(["x1", "y1", "x2", "y2"]), false, false);
    // a⁻¹c = (-a) + c
    let m13 = add(&mk(["x1", "y1", "x3", "y3"]), true, false);
    // c b⁻¹ = c + (-b); the chord formula is symmetric in its arguments
    let m23 = add(&mk(["x2", "y2", "x3", "y3"]), true, false);
    let diff = |names: [&str; 4]| {
        let r = mk(names);
        Some(Poly::var(&r, 2).sub(&Poly::var(&r, 0)))
    };
    let witnesses = [
        diff(["x1", "y1", "x2", "y2"]),
        diff(["x1", "y1", "x3", "y3"]),
        diff(["x2", "y2", "x3", "y3"]),
    ];
    StrictLaw::new(x, slots, [m12, m13, m23], witnesses, probes)
}

/// `y² + a1·xy + a3·y − x³ − a2·x² − a4·x − a6`.
pub fn weierstrass_equation<F: Ring>(ring: &Arc<PolyRing<F>>, a: [F; 5]) -> Poly<F> {
    let [a1, a2, a3, a4, a6] = a;
    let x = Poly::var(ring, 0);
    let y = Poly::var(ring, 1);
    let k = |c: F| Poly::constant(ring, c);
    y.mul(&y)
        .add(&k(a1).mul(&x).mul(&y))
        .add(&k(a3).mul(&y))
        .sub(&x.pow(3))
        .sub(&k(a2).mul(&x).mul(&x))
        .sub(&k(a4).mul(&x))
        .sub(&k(a6))
}

/// The law `ab = a + b + ab` on `A¹ ∖ {−1}` (the multiplicative group in
/// the coordinate `t = 1 + x`), slots `a`, `b`, `c`.
pub fn shifted_multiplicative_law<F: Field>(ctx: &F::Ctx, probes: Vec<Vec<F>>) -> StrictLaw<F> {
    let ring: Arc<PolyRing<F>> = PolyRing::new(&["x"], ctx.clone());
    let unit = Poly::one(&ring).add(&Poly::var(&ring, 0));
    let x = Arc::new(AffineVariety::affine_space(&ring).localized(&unit));
    let slots = [vec!["a".into()], vec!["b".into()], vec!["c".into()]];
    StrictLaw::parse(
        x,
        slots,
        [
            vec!["a + b + a*b".into()],
            vec!["(c - a)/(1 + a)".into()],
            vec!["(c - b)/(1 + b)".into()],
        ],
        [None, None, None],
        probes,
        &[],
    )
    .expect("well-formed law")
}

/// The additive group on `A¹`, slots `a`, `b`, `c`.
pub fn additive_law<F: Field>(ctx: &F::Ctx, probes: Vec<Vec<F>>) -> StrictLaw<F> {
    let ring: Arc<PolyRing<F>> = PolyRing::new(&["x"], ctx.clone());
    let x = Arc::new(AffineVariety::affine_space(&ring));
    let slots = [vec!["a".into()], vec!["b".into()], vec!["c".into()]];
    StrictLaw::parse(
        x,
        slots,
        [vec!["a + b".into()], vec!["c - a".into()], vec!["c - b".into()]],
        [None, None, None],
        probes,
        &[],
    )
    .expect("well-formed law")
}

/// A commutative algebraic group given by total maps.
#[derive(Clone, Debug)]
pub struct CommutativeGroupLaw<F: Field> {
    variety: Arc<AffineVariety<F>>,
    /// Coordinates of `u + v` in the ring with variables `u ++ v`.
    add: Vec<RatFunc<F>>,
    /// Coordinates of `−u`.
    neg: Vec<RatFunc<F>>,
    zero: Vec<F>,
}

impl<F: Field> CommutativeGroupLaw<F> {
    pub fn new(variety: Arc<AffineVariety<F>>, add: Vec<RatFunc<F>>, neg: Vec<RatFunc<F>>, zero: Vec<F>) -> Self {
        CommutativeGroupLaw { variety, add, neg, zero }
    }

    /// The additive group on the given ring's variables.
    pub fn additive(ring: &Arc<PolyRing<F>>) -> Self {
        let n = ring.nvars();
        let mut names: Vec<String> = ring.vars().to_vec();
        names.extend(ring.vars().iter().map(|v| format!("{v}'")));
        let pr = ring.with_vars(&names);
        let add = (0..n)
            .map(|i| RatFunc::var(&pr, i).add(&RatFunc::var(&pr, n + i)))
            .collect();
        let neg = (0..n).map(|i| RatFunc::var(ring, i).neg()).collect();
        let zero = vec![F::zero(ring.ctx()); n];
        CommutativeGroupLaw {
            variety: Arc::new(AffineVariety::affine_space(ring)),
            add,
            neg,
            zero,
        }
    }

    pub fn variety(&self) -> &Arc<AffineVariety<F>> {
        &self.variety
    }

    pub fn sum(&self, target: &Arc<PolyRing<F>>, u: &[RatFunc<F>], v: &[RatFunc<F>]) -> Vec<RatFunc<F>> {
        let args: Vec<RatFunc<F>> = u.iter().chain(v).cloned().collect();
        self.add.iter().map(|c| c.substitute(target, &args)).collect()
    }

    pub fn negate(&self, target: &Arc<PolyRing<F>>, u: &[RatFunc<F>]) -> Vec<RatFunc<F>> {
        self.neg.iter().map(|c| c.substitute(target, u)).collect()
    }

    fn zero_in(&self, target: &Arc<PolyRing<F>>) -> Vec<RatFunc<F>> {
        self.zero.iter().map(|c| RatFunc::constant(target, c.clone())).collect()
    }
}

fn slot_vars<F: Field>(ring: &Arc<PolyRing<F>>, n: usize, slot: usize) -> Vec<RatFunc<F>> {
    (slot * n..(slot + 1) * n).map(|i| RatFunc::var(ring, i)).collect()
}

fn power_names(ring: &[String], k: usize) -> Vec<Vec<String>> {
    (1..=k).map(|s| ring.iter().map(|v| format!("{v}{s}")).collect()).collect()
}

/// Checks `f(y,z) − f(x+y,z) + f(x,y+z) − f(x,y) = 0` (and `f(x,y) = f(y,x)`
/// when `symmetric`) for `f: A × A ⇢ B` given by coordinates in the ring of
/// `A × A` (variables of `A` suffixed 1 and 2).
pub fn check_factor_system<F: Field>(
    a: &CommutativeGroupLaw<F>,
    b: &CommutativeGroupLaw<F>,
    f: &[RatFunc<F>],
    symmetric: bool,
) -> Result<CheckReport, MapError> {
    let mut report = CheckReport::new("factor-system");
    let n = a.variety.dim_ambient();
    let a3 = Arc::new(a.variety.power(&power_names(a.variety.ring().vars(), 3))?);
    let r = a3.ring().clone();
    let (x, y, z) = (slot_vars(&r, n, 0), slot_vars(&r, n, 1), slot_vars(&r, n, 2));
    let at = |u: &[RatFunc<F>], v: &[RatFunc<F>]| -> Vec<RatFunc<F>> {
        let args: Vec<RatFunc<F>> = u.iter().chain(v).cloned().collect();
        f.iter().map(|c| c.substitute(&r, &args)).collect()
    };
    let xy = a.sum(&r, &x, &y);
    let yz = a.sum(&r, &y, &z);
    let t1 = at(&y, &z);
    let t2 = b.negate(&r, &at(&xy, &z));
    let t3 = at(&x, &yz);
    let t4 = b.negate(&r, &at(&x, &y));
    let s = b.sum(&r, &b.sum(&r, &b.sum(&r, &t1, &t2), &t3), &t4);
    let zero = b.zero_in(&r);
    let h = s
        .iter()
        .fold(Poly::one(&r), |acc, c| acc.mul(c.denominator()));
    for (i, (c, z0)) in s.iter().zip(&zero).enumerate() {
        if !a3.functions_agree(&h, c, z0)? {
            report.fail(format!("cocycle identity fails in coordinate {i}: {c}"));
        }
    }
    if symmetric {
        let a2 = Arc::new(a.variety.power(&power_names(a.variety.ring().vars(), 2))?);
        let r2 = a2.ring().clone();
        let (u, v) = (slot_vars(&r2, n, 0), slot_vars(&r2, n, 1));
        let args_uv: Vec<RatFunc<F>> = u.iter().chain(&v).cloned().collect();
        let args_vu: Vec<RatFunc<F>> = v.iter().chain(&u).cloned().collect();
        for (i, c) in f.iter().enumerate() {
            let p = c.substitute(&r2, &args_uv);
            let q = c.substitute(&r2, &args_vu);
            let h = p.denominator().mul(q.denominator());
            if !a2.functions_agree(&h, &p, &q)? {
                report.fail(format!("symmetry fails in coordinate {i}"));
            }
        }
    }
    Ok(report)
}

/// `δg(x, y) = g(x + y) − g(x) − g(y)`, with coordinates in the ring of
/// `A × A` (variables of `A` suffixed 1 and 2).
pub fn coboundary<F: Field>(
    a: &CommutativeGroupLaw<F>,
    b: &CommutativeGroupLaw<F>,
    g: &[RatFunc<F>],
) -> Result<Vec<RatFunc<F>>, MapError> {
    let n = a.variety.dim_ambient();
    let a2 = a.variety.power(&power_names(a.variety.ring().vars(), 2))?;
    let r = a2.ring().clone();
    let (x, y) = (slot_vars(&r, n, 0), slot_vars(&r, n, 1));
    let at = |u: &[RatFunc<F>]| -> Vec<RatFunc<F>> { g.iter().map(|c| c.substitute(&r, u)).collect() };
    let gxy = at(&a.sum(&r, &x, &y));
    let gx = b.negate(&r, &at(&x));
    let gy = b.negate(&r, &at(&y));
    Ok(b.sum(&r, &b.sum(&r, &gxy, &gx), &gy))
}

/// Ring of `A × A` as used by [`check_factor_system`] and [`coboundary`].
pub fn pair_ring<F: Field>(a: &CommutativeGroupLaw<F>) -> Result<Arc<PolyRing<F>>, MapError> {
    Ok(a.variety.power(&power_names(a.variety.ring().vars(), 2))?.ring().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::poly::parse_poly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn shifted(probes: &[i64]) -> StrictLaw<Rational> {
        shifted_multiplicative_law(&(), probes.iter().map(|&p| vec![q(p)]).collect())
    }

    #[test]
    fn shifted_law_passes() {
        let law = shifted(&[0, 1, 2]);
        for r in law.check_all().unwrap() {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn wrong_inverse_fails_identity_one() {
        let base = shifted(&[]);
        let law = StrictLaw::parse(
            base.variety().clone(),
            base.slots().clone(),
            [
                vec!["a + b + a*b".into()],
                vec!["(c - a)/(1 - a)".into()],
                vec!["(c - b)/(1 + b)".into()],
            ],
            [None, None, None],
            vec![],
            &[],
        )
        .unwrap();
        let r = law.check_graph_consistency().unwrap();
        assert!(!r.passed);
        assert!(r.failures[0].starts_with("identity 1 "), "{r}");
    }

    #[test]
    fn perturbed_law_not_associative() {
        let base = shifted(&[]);
        let law = StrictLaw::parse(
            base.variety().clone(),
            base.slots().clone(),
            [
                vec!["a + b + a*b^2".into()],
                vec!["(c - a)/(1 + a)".into()],
                vec!["(c - b)/(1 + b)".into()],
            ],
            [None, None, None],
            vec![],
            &[],
        )
        .unwrap();
        assert!(!law.check_associativity().unwrap().passed);
    }

    #[test]
    fn probe_at_minus_one_on_the_line() {
        let ring: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let x = Arc::new(AffineVariety::affine_space(&ring));
        let law = StrictLaw::parse(
            x,
            [vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            [
                vec!["a + b + a*b".into()],
                vec!["(c - a)/(1 + a)".into()],
                vec!["(c - b)/(1 + b)".into()],
            ],
            [None, None, None],
            vec![vec![q(-1)]],
            &[],
        )
        .unwrap();
        let r = law.check_translation_density().unwrap();
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.contains("m13")), "{r}");
    }

    #[test]
    fn empty_probes_warn() {
        let r = shifted(&[]).check_translation_density().unwrap();
        assert!(r.passed);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn trivial_law_on_a_point() {
        let ring: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let pt = Arc::new(AffineVariety::new(&ring, vec![Poly::var(&ring, 0)]).assume_irreducible());
        let law = StrictLaw::parse(
            pt,
            [vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            [vec!["0".into()], vec!["0".into()], vec!["0".into()]],
            [None, None, None],
            vec![vec![q(0)]],
            &[],
        )
        .unwrap();
        for r in law.check_all().unwrap() {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn additive_factor_systems() {
        let ring: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let ga = CommutativeGroupLaw::additive(&ring);
        let pr = pair_ring(&ga).unwrap();
        let zero = vec![RatFunc::zero(&pr)];
        assert!(check_factor_system(&ga, &ga, &zero, true).unwrap().passed);
        let g = vec![RatFunc::from(parse_poly("x^2", &ring, &[]).unwrap())];
        let dg = coboundary(&ga, &ga, &g).unwrap();
        assert_eq!(dg[0].to_string(), "2*x1*x2");
        assert!(check_factor_system(&ga, &ga, &dg, true).unwrap().passed);
        let bad = vec![RatFunc::var(&pr, 0)];
        assert!(!check_factor_system(&ga, &ga, &bad, false).unwrap().passed);
    }

    #[test]
    fn fibred_shifted_law() {
        let d = crate::arith::DvrDescriptor::integers(5).unwrap();
        let ring: Arc<PolyRing<DvrElem>> = PolyRing::new(&["x"], d);
        let slots = [vec!["a".to_string()], vec!["b".to_string()], vec!["c".to_string()]];
        let parse = |vars: [&str; 2], s: &str| {
            let r: Arc<PolyRing<DvrElem>> = PolyRing::new(&vars, d);
            parse_ratfunc(s, &r, &[]).unwrap()
        };
        let law = FiberedLaw::with_ring(
            &ring,
            &[],
            slots,
            [
                vec![parse(["a", "b"], "a + b + a*b")],
                vec![parse(["a", "c"], "(c - a)/(1 + a)")],
                vec![parse(["b", "c"], "(c - b)/(1 + b)")],
            ],
            vec![vec![DvrElem::from_ratio(d, 1, 1).unwrap()]],
        )
        .unwrap();
        for r in law.check_all().unwrap() {
            assert!(r.passed, "{r}");
        }
    }
}
