//! Néron's smoothening process for finitely many integral sections of an
//! affine complete-intersection model over a discrete valuation ring.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{torsion_length, DvrDescriptor, DvrElem, Field, Fp, FracElem, Ring};
use crate::error::{ArithError, SmoothError};
use crate::poly::{Monomial, Poly, PolyRing, RatFunc};
use crate::ratmap::AffineVariety;

/// An affine chart `R[x₁..x_n]/(f₁..f_c)` of a model over `R`.
#[derive(Clone, Debug)]
pub struct DvrModel {
    name: String,
    ring: Arc<PolyRing<DvrElem>>,
    equations: Vec<Poly<DvrElem>>,
}

impl DvrModel {
    /// Builds a model and checks that its generic fibre is smooth of the
    /// expected dimension at the generic point.
    pub fn new(name: &str, ring: &Arc<PolyRing<DvrElem>>, equations: Vec<Poly<DvrElem>>) -> Result<Self, SmoothError> {
        let m = DvrModel::unchecked(name, ring, equations);
        if m.equations.len() > m.ring.nvars() {
            return Err(SmoothError::Invalid(format!(
                "{} equations in {} variables",
                m.equations.len(),
                m.ring.nvars()
            )));
        }
        if !m.generic_fibre_is_smooth()? {
            return Err(SmoothError::Invalid(format!(
                "generic fibre of {name} is not smooth of relative dimension {}",
                m.relative_dimension()
            )));
        }
        Ok(m)
    }

    fn unchecked(name: &str, ring: &Arc<PolyRing<DvrElem>>, equations: Vec<Poly<DvrElem>>) -> Self {
        DvrModel {
            name: name.to_string(),
            ring: ring.clone(),
            equations,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<PolyRing<DvrElem>> {
        &self.ring
    }

    pub fn equations(&self) -> &[Poly<DvrElem>] {
        &self.equations
    }

    pub fn descriptor(&self) -> DvrDescriptor {
        *self.ring.ctx()
    }

    pub fn relative_dimension(&self) -> usize {
        self.ring.nvars() - self.equations.len()
    }

    /// `∂f_j/∂x_i` as a `c × n` matrix.
    pub fn jacobian(&self) -> Vec<Vec<Poly<DvrElem>>> {
        self.equations
            .iter()
            .map(|f| (0..self.ring.nvars()).map(|i| f.partial_derivative(i)).collect())
            .collect()
    }

    pub fn jacobian_at(&self, a: &Section) -> Vec<Vec<DvrElem>> {
        self.jacobian()
            .iter()
            .map(|row| row.iter().map(|d| d.eval(&a.coords)).collect())
            .collect()
    }

    pub fn generic_fibre(&self) -> AffineVariety<FracElem> {
        let kring: Arc<PolyRing<FracElem>> = PolyRing::new(self.ring.vars(), self.descriptor());
        AffineVariety::new(
            &kring,
            self.equations.iter().map(|f| f.map_coeffs(&kring, DvrElem::to_frac)).collect(),
        )
    }

    pub fn special_fibre(&self) -> AffineVariety<Fp> {
        let sring: Arc<PolyRing<Fp>> = PolyRing::new(self.ring.vars(), self.descriptor().prime());
        AffineVariety::new(
            &sring,
            self.equations.iter().map(|f| f.map_coeffs(&sring, DvrElem::residue)).collect(),
        )
    }

    /// Some maximal minor of the Jacobian is not nilpotent on the generic
    /// fibre.
    pub fn generic_fibre_is_smooth(&self) -> Result<bool, SmoothError> {
        let x = self.generic_fibre();
        let kring = x.ring().clone();
        let jac: Vec<Vec<Poly<FracElem>>> = self
            .jacobian()
            .iter()
            .map(|row| row.iter().map(|d| d.map_coeffs(&kring, DvrElem::to_frac)).collect())
            .collect();
        for minor in maximal_minors(&jac, &kring) {
            if !x.ideal().radical_contains(&minor)? {
                return Ok(true);
            }
        }
        Ok(jac.is_empty())
    }

    fn check_section(&self, coords: &[DvrElem]) -> Result<(), SmoothError> {
        if coords.len() != self.ring.nvars() {
            return Err(SmoothError::Invalid(format!(
                "section has {} coordinates, {} has {} variables",
                coords.len(),
                self.name,
                self.ring.nvars()
            )));
        }
        for f in &self.equations {
            if !Ring::is_zero(&f.eval(coords)) {
                return Err(SmoothError::Invalid(format!(
                    "section {} does not satisfy {f} on {}",
                    fmt_coords(coords),
                    self.name
                )));
            }
        }
        Ok(())
    }
}

fn maximal_minors<F: Field>(m: &[Vec<Poly<F>>], ring: &Arc<PolyRing<F>>) -> Vec<Poly<F>> {
    let c = m.len();
    let n = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for cols in combinations(n, c) {
        let sub: Vec<Vec<Poly<F>>> = m.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        out.push(determinant(&sub, ring));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

fn determinant<F: Field>(m: &[Vec<Poly<F>>], ring: &Arc<PolyRing<F>>) -> Poly<F> {
    match m.len() {
        0 => Poly::one(ring),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(ring);
            for j in 0..n {
                let minor: Vec<Vec<Poly<F>>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = m[0][j].mul(&determinant(&minor, ring));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn fmt_coords<T: fmt::Display>(c: &[T]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// An `R`-point of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    coords: Vec<DvrElem>,
}

impl Section {
    pub fn new(model: &DvrModel, coords: Vec<DvrElem>) -> Result<Self, SmoothError> {
        model.check_section(&coords)?;
        Ok(Section { coords })
    }

    pub fn coords(&self) -> &[DvrElem] {
        &self.coords
    }

    pub fn specialization(&self) -> Vec<Fp> {
        self.coords.iter().map(DvrElem::residue).collect()
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_coords(&self.coords))
    }
}

/// Length of the torsion of `a*Ω¹`, presented by the Jacobian at `a`.
pub fn delta(model: &DvrModel, a: &Section) -> Result<u32, SmoothError> {
    let c = model.equations.len();
    torsion_length(&model.jacobian_at(a), c).map_err(|e| match e {
        ArithError::RankDeficient { rank, expected } => SmoothError::RankDeficient {
            section: a.to_string(),
            rank,
            expected,
        },
        e => SmoothError::Arith(e),
    })
}

/// Whether the Jacobian at `a` has full rank modulo `π`. Cross-checked
/// against `δ = 0`.
pub fn is_smooth_at(model: &DvrModel, a: &Section) -> Result<bool, SmoothError> {
    let c = model.equations.len();
    let reduced: Vec<Vec<Fp>> = model
        .jacobian_at(a)
        .iter()
        .map(|row| row.iter().map(DvrElem::residue).collect())
        .collect();
    let smooth = rank_over_field(reduced) == c;
    let d = delta(model, a)?;
    if smooth != (d == 0) {
        return Err(SmoothError::Invariant(format!(
            "smoothness at {a} is {smooth} but delta is {d}"
        )));
    }
    Ok(smooth)
}

fn rank_over_field<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !Ring::is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inv();
        for r in 0..rows {
            if r != rank && !Ring::is_zero(&m[r][col]) {
                let k = m[r][col].mul(&inv);
                for j in col..cols {
                    let t = m[rank][j].mul(&k);
                    m[r][j] = m[r][j].sub(&t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// One stratum `Eⁱ` of the canonical partition with its centre `Yⁱ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub sections: Vec<usize>,
    pub points: Vec<Vec<Fp>>,
}

/// Runs the defining loop of the canonical partition. For finitely many
/// sections each `Yⁱ` is a finite reduced set of rational points, which is
/// smooth and carries a locally free restriction of `Ω¹`, so a single
/// stratum results.
pub fn canonical_partition(sections: &[Section]) -> Vec<Stratum> {
    let mut rest: Vec<usize> = (0..sections.len()).collect();
    let mut strata = Vec::new();
    while !rest.is_empty() {
        let mut y: Vec<Vec<Fp>> = rest.iter().map(|&i| sections[i].specialization()).collect();
        y.sort_by_key(|p| p.iter().map(Fp::value).collect::<Vec<_>>());
        y.dedup();
        // the open part of Y where Y is smooth and Ω¹ restricts to a locally
        // free sheaf: all of Y for a finite reduced set of points
        let good = y.clone();
        let (take, keep): (Vec<usize>, Vec<usize>) =
            rest.iter().partition(|&&i| good.contains(&sections[i].specialization()));
        strata.push(Stratum {
            sections: take,
            points: good,
        });
        rest = keep;
    }
    strata
}

/// Which chart of a blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    /// `xᵢ = c̃ᵢ + π·uᵢ`.
    Uniformizer,
    /// `x_j = c̃_j + w`, `xᵢ = c̃ᵢ + w·uᵢ`, `w·s = π`.
    Coordinate(usize),
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartKind::Uniformizer => f.write_str("pi"),
            ChartKind::Coordinate(j) => write!(f, "coordinate {j}"),
        }
    }
}

/// One chart of a blow-up with the exceptional powers divided out of each
/// equation.
#[derive(Clone, Debug)]
pub struct BlowUpChart {
    pub kind: ChartKind,
    pub model: DvrModel,
    pub exponents: Vec<u32>,
    /// Expression of the old coordinates in the chart's variables.
    pub substitution: Vec<Poly<DvrElem>>,
}

/// Blow-up of a chart at a rational point of its special fibre.
#[derive(Clone, Debug)]
pub struct BlowUpRecord {
    pub center: Vec<Fp>,
    pub lift: Vec<DvrElem>,
    pub charts: Vec<BlowUpChart>,
}

impl BlowUpRecord {
    pub fn pi_chart(&self) -> &BlowUpChart {
        &self.charts[0]
    }
}

fn pi_content(f: &Poly<DvrElem>) -> u32 {
    f.terms()
        .iter()
        .filter_map(|(_, c)| c.valuation().finite())
        .min()
        .unwrap_or(0) as u32
}

fn divide_by_pi(f: &Poly<DvrElem>, e: u32) -> Poly<DvrElem> {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| (m.clone(), c.div_uniformizer_pow(e).expect("content divides")))
        .collect();
    Poly::from_terms(f.ring(), terms)
}

/// Blows up `model` at the rational point `center` of its special fibre.
pub fn blow_up(model: &DvrModel, center: &[Fp]) -> Result<BlowUpRecord, SmoothError> {
    let n = model.ring.nvars();
    if center.len() != n || model.equations.iter().any(|f| !Ring::is_zero(&f.eval(&lift_point(model, center)).residue())) {
        return Err(SmoothError::NotOnSpecialFiber(fmt_coords(center)));
    }
    let desc = model.descriptor();
    let lift = lift_point(model, center);
    let pi = DvrElem::uniformizer(desc);
    let mut charts = Vec::with_capacity(n + 1);

    // x_i = c_i + π u_i, keeping the variable names
    let ring = model.ring.clone();
    let subst: Vec<Poly<DvrElem>> = (0..n)
        .map(|i| Poly::constant(&ring, lift[i].clone()).add(&Poly::var(&ring, i).scale(&pi)))
        .collect();
    let mut eqs = Vec::new();
    let mut exps = Vec::new();
    for f in &model.equations {
        let t = f.compose(&ring, &subst);
        let e = pi_content(&t);
        eqs.push(divide_by_pi(&t, e));
        exps.push(e);
    }
    charts.push(BlowUpChart {
        kind: ChartKind::Uniformizer,
        model: DvrModel::unchecked(&format!("{}/pi", model.name), &ring, eqs),
        exponents: exps,
        substitution: subst,
    });

    // x_j = c_j + w, x_i = c_i + w u_i, with a new variable s and w s = π
    for j in 0..n {
        let s = model.ring.fresh_var("s");
        let cring = model.ring.extend(&[s]);
        let w = Poly::var(&cring, j);
        let sv = Poly::var(&cring, n);
        let subst: Vec<Poly<DvrElem>> = (0..n)
            .map(|i| {
                let shift = Poly::constant(&cring, lift[i].clone());
                if i == j {
                    shift.add(&w)
                } else {
                    shift.add(&w.mul(&Poly::var(&cring, i)))
                }
            })
            .collect();
        let mut eqs = Vec::new();
        let mut exps = Vec::new();
        for f in &model.equations {
            let t = replace_pi(&f.compose(&cring, &subst), j, n);
            let e = t.monomial_content().0[j];
            let mut d = Monomial::one(n + 1);
            d.0[j] = e;
            eqs.push(t.div_monomial(&d));
            exps.push(e);
        }
        eqs.push(w.mul(&sv).sub(&Poly::constant(&cring, pi.clone())));
        charts.push(BlowUpChart {
            kind: ChartKind::Coordinate(j),
            model: DvrModel::unchecked(&format!("{}/{}", model.name, model.ring.vars()[j]), &cring, eqs),
            exponents: exps,
            substitution: subst,
        });
    }
    Ok(BlowUpRecord {
        center: center.to_vec(),
        lift,
        charts,
    })
}

impl BlowUpRecord {
    /// Over `K` each chart is an open of the original model: pulling the
    /// chart equations back along the inverse substitution must land in the
    /// original ideal, saturated by the exceptional coordinate.
    pub fn generic_fibre_preserved(&self, model: &DvrModel) -> Result<bool, SmoothError> {
        let x = model.generic_fibre();
        let kring = x.ring().clone();
        let n = kring.nvars();
        let desc = model.descriptor();
        let pi = RatFunc::constant(&kring, FracElem::uniformizer(desc));
        let shifted: Vec<RatFunc<FracElem>> = (0..n)
            .map(|i| RatFunc::var(&kring, i).sub(&RatFunc::constant(&kring, self.lift[i].to_frac())))
            .collect();
        for ch in &self.charts {
            let (inverse, h) = match ch.kind {
                ChartKind::Uniformizer => (
                    shifted.iter().map(|d| d.div(&pi).expect("π ≠ 0")).collect::<Vec<_>>(),
                    Poly::one(&kring),
                ),
                ChartKind::Coordinate(j) => {
                    let w = &shifted[j];
                    let mut v: Vec<RatFunc<FracElem>> = (0..n)
                        .map(|i| if i == j { w.clone() } else { shifted[i].div(w).expect("w ≠ 0") })
                        .collect();
                    v.push(pi.div(w).expect("w ≠ 0"));
                    (v, w.numerator().clone())
                }
            };
            let cring: Arc<PolyRing<FracElem>> = PolyRing::new(ch.model.ring.vars(), desc);
            for g in &ch.model.equations {
                let back = RatFunc::from(g.map_coeffs(&cring, DvrElem::to_frac)).substitute(&kring, &inverse);
                if !x.ideal().saturation_contains(&h, back.numerator())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Rewrites each coefficient `π^v·u` as `u·w^v·s^v`.
fn replace_pi(f: &Poly<DvrElem>, w: usize, s: usize) -> Poly<DvrElem> {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let v = c.valuation().finite().unwrap_or(0) as u32;
            let mut m = m.clone();
            m.0[w] += v;
            m.0[s] += v;
            (m, c.div_uniformizer_pow(v).expect("valuation"))
        })
        .collect();
    Poly::from_terms(f.ring(), terms)
}

fn lift_point(model: &DvrModel, c: &[Fp]) -> Vec<DvrElem> {
    c.iter().map(|&r| DvrElem::lift(model.descriptor(), r)).collect()
}

/// Lifts a section through the centre to the `π`-chart.
pub fn lift_section(record: &BlowUpRecord, a: &Section) -> Result<Section, SmoothError> {
    let mut u = Vec::with_capacity(a.coords.len());
    for (ai, ci) in a.coords.iter().zip(&record.lift) {
        let d = ai.sub(ci);
        match d.div_uniformizer_pow(1) {
            Some(q) => u.push(q),
            None => return Err(SmoothError::NotThroughCenter(a.to_string())),
        }
    }
    let chart = &record.pi_chart().model;
    Section::new(chart, u).map_err(|e| SmoothError::Invariant(format!("lifted section is invalid: {e}")))
}

/// A node of the blow-up tree.
#[derive(Clone, Debug)]
pub struct ChartNode {
    pub model: DvrModel,
    pub parent: Option<usize>,
    pub center: Option<Vec<Fp>>,
    pub kind: Option<ChartKind>,
    pub exponents: Vec<u32>,
    /// Old coordinates in terms of this chart's variables.
    pub substitution: Vec<Poly<DvrElem>>,
}

/// History of one section through the smoothening.
#[derive(Clone, Debug)]
pub struct SectionTrace {
    pub initial: Section,
    pub chart: usize,
    pub section: Section,
    pub deltas: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Smoothening {
    pub charts: Vec<ChartNode>,
    pub sections: Vec<SectionTrace>,
    pub rounds: usize,
    pub blow_ups: usize,
}

/// Blows up the specialization points of singular sections until every
/// section is smooth. Each round uses the canonical partition of the
/// singular sections of each chart; centres are processed in lexicographic
/// order of their lifts.
pub fn smoothen(model: &DvrModel, sections: &[Section]) -> Result<Smoothening, SmoothError> {
    let mut charts = vec![ChartNode {
        model: model.clone(),
        parent: None,
        center: None,
        kind: None,
        exponents: Vec::new(),
        substitution: Vec::new(),
    }];
    let mut traces = Vec::with_capacity(sections.len());
    let mut cap = sections.len();
    for a in sections {
        let d = delta(model, a)?;
        cap += d as usize;
        traces.push(SectionTrace {
            initial: a.clone(),
            chart: 0,
            section: a.clone(),
            deltas: vec![d],
        });
    }
    let mut rounds = 0;
    let mut blow_ups = 0;
    loop {
        let singular: Vec<usize> = (0..traces.len())
            .filter(|&i| *traces[i].deltas.last().unwrap() > 0)
            .collect();
        if singular.is_empty() {
            break;
        }
        if rounds >= cap {
            return Err(SmoothError::IterationCap(cap));
        }
        let mut chart_ids: Vec<usize> = singular.iter().map(|&i| traces[i].chart).collect();
        chart_ids.sort_unstable();
        chart_ids.dedup();
        for cid in chart_ids {
            let here: Vec<usize> = singular.iter().copied().filter(|&i| traces[i].chart == cid).collect();
            let secs: Vec<Section> = here.iter().map(|&i| traces[i].section.clone()).collect();
            for stratum in canonical_partition(&secs) {
                for center in &stratum.points {
                    let parent = charts[cid].model.clone();
                    let record = blow_up(&parent, center)?;
                    blow_ups += 1;
                    let first = charts.len();
                    for ch in &record.charts {
                        charts.push(ChartNode {
                            model: ch.model.clone(),
                            parent: Some(cid),
                            center: Some(center.clone()),
                            kind: Some(ch.kind),
                            exponents: ch.exponents.clone(),
                            substitution: ch.substitution.clone(),
                        });
                    }
                    for &k in &stratum.sections {
                        let i = here[k];
                        if &traces[i].section.specialization() != center {
                            continue;
                        }
                        let lifted = lift_section(&record, &traces[i].section)?;
                        let d_new = delta(&record.pi_chart().model, &lifted)?;
                        let d_old = *traces[i].deltas.last().unwrap();
                        if d_new >= d_old {
                            return Err(SmoothError::Invariant(format!(
                                "delta did not drop at {}: {d_old} -> {d_new}",
                                traces[i].section
                            )));
                        }
                        let t = &mut traces[i];
                        t.chart = first;
                        t.section = lifted;
                        t.deltas.push(d_new);
                    }
                }
            }
        }
        rounds += 1;
    }
    Ok(Smoothening {
        charts,
        sections: traces,
        rounds,
        blow_ups,
    })
}

/// Serializable lineage of a smoothening.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineageDocument {
    pub charts: Vec<ChartDocument>,
    pub sections: Vec<SectionDocument>,
    pub rounds: usize,
    pub blow_ups: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartDocument {
    pub id: usize,
    pub name: String,
    pub parent: Option<usize>,
    pub center: Option<Vec<u64>>,
    pub chart: Option<String>,
    pub variables: Vec<String>,
    pub equations: Vec<String>,
    pub substitution: Vec<String>,
    pub division_exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionDocument {
    pub initial: Vec<String>,
    pub chart: usize,
    pub lifted: Vec<String>,
    pub delta_trace: Vec<u32>,
}

impl Smoothening {
    pub fn document(&self) -> LineageDocument {
        LineageDocument {
            charts: self
                .charts
                .iter()
                .enumerate()
                .map(|(id, c)| ChartDocument {
                    id,
                    name: c.model.name.clone(),
                    parent: c.parent,
                    center: c.center.as_ref().map(|p| p.iter().map(Fp::value).collect()),
                    chart: c.kind.map(|k| k.to_string()),
                    variables: c.model.ring.vars().to_vec(),
                    equations: c.model.equations.iter().map(|f| f.to_string()).collect(),
                    substitution: c.substitution.iter().map(|p| p.to_string()).collect(),
                    division_exponents: c.exponents.clone(),
                })
                .collect(),
            sections: self
                .sections
                .iter()
                .map(|t| SectionDocument {
                    initial: t.initial.coords.iter().map(|c| c.to_string()).collect(),
                    chart: t.chart,
                    lifted: t.section.coords.iter().map(|c| c.to_string()).collect(),
                    delta_trace: t.deltas.clone(),
                })
                .collect(),
            rounds: self.rounds,
            blow_ups: self.blow_ups,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn setup(p: u64, eqs: &[&str]) -> DvrModel {
        let d = DvrDescriptor::integers(p).unwrap();
        let ring = PolyRing::new(&["x", "y"], d);
        let pc = [("p".to_string(), DvrElem::uniformizer(d))];
        let eqs = eqs.iter().map(|s| parse_poly(s, &ring, &pc).unwrap()).collect();
        DvrModel::new("A", &ring, eqs).unwrap()
    }

    fn sec(m: &DvrModel, c: &[i64]) -> Section {
        let d = m.descriptor();
        Section::new(m, c.iter().map(|&n| DvrElem::from_ratio(d, n, 1).unwrap()).collect()).unwrap()
    }

    #[test]
    fn delta_examples() {
        let m = setup(5, &["y - x^2"]);
        assert_eq!(delta(&m, &sec(&m, &[2, 4])).unwrap(), 0);
        let m = setup(5, &["y^2 - x^3 - p^2"]);
        let a = sec(&m, &[0, 5]);
        assert_eq!(delta(&m, &a).unwrap(), 1);
        assert!(!is_smooth_at(&m, &a).unwrap());
        let m = setup(7, &["y^2 - x^3 - p^6"]);
        assert_eq!(delta(&m, &sec(&m, &[0, 343])).unwrap(), 3);
    }

    #[test]
    fn pi_chart_of_cusp() {
        let m = setup(5, &["y^2 - x^3 - p^2"]);
        let r = blow_up(&m, &[Fp::new(0, 5), Fp::new(0, 5)]).unwrap();
        assert_eq!(r.charts.len(), 3);
        assert_eq!(r.pi_chart().exponents, vec![2]);
        assert_eq!(r.pi_chart().model.equations()[0].to_string(), "-5*x^3 + y^2 - 1");
        let lifted = lift_section(&r, &sec(&m, &[0, 5])).unwrap();
        assert_eq!(lifted.to_string(), "(0, 1)");
        assert!(is_smooth_at(&r.pi_chart().model, &lifted).unwrap());
        // coordinate chart in x: y = x u, p = x s
        let cx = &r.charts[1];
        assert_eq!(cx.exponents, vec![2]);
        assert_eq!(cx.model.equations()[1].to_string(), "x*s - 5");
        assert!(r.generic_fibre_preserved(&m).unwrap());
    }

    #[test]
    fn pi_chart_of_parabola() {
        let m = setup(5, &["y - x^2"]);
        let r = blow_up(&m, &[Fp::new(0, 5), Fp::new(0, 5)]).unwrap();
        assert_eq!(r.pi_chart().exponents, vec![1]);
        assert_eq!(r.pi_chart().model.equations()[0].to_string(), "-5*x^2 + y");
    }

    #[test]
    fn off_centre() {
        let m = setup(5, &["y - x^2"]);
        assert!(matches!(
            blow_up(&m, &[Fp::new(1, 5), Fp::new(0, 5)]),
            Err(SmoothError::NotOnSpecialFiber(_))
        ));
        let r = blow_up(&m, &[Fp::new(0, 5), Fp::new(0, 5)]).unwrap();
        assert!(matches!(lift_section(&r, &sec(&m, &[1, 1])), Err(SmoothError::NotThroughCenter(_))));
    }

    #[test]
    fn partition() {
        let m = setup(5, &["y^2 - x^3 - p^2"]);
        assert!(canonical_partition(&[]).is_empty());
        let s = canonical_partition(&[sec(&m, &[0, 5])]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].points, vec![vec![Fp::new(0, 5), Fp::new(0, 5)]]);
        let s = canonical_partition(&[sec(&m, &[0, 5]), sec(&m, &[0, -5])]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sections, vec![0, 1]);
        assert_eq!(s[0].points.len(), 1);
        let m = setup(5, &["y - x^2"]);
        let s = canonical_partition(&[sec(&m, &[1, 1]), sec(&m, &[2, 4])]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].points.len(), 2);
    }

    #[test]
    fn smoothen_family() {
        for m in 1..=3u32 {
            let eq = format!("y^2 - x^3 - p^{}", 2 * m);
            let model = setup(7, &[eq.as_str()]);
            let a = sec(&model, &[0, 7i64.pow(m)]);
            let s = smoothen(&model, &[a]).unwrap();
            assert_eq!(s.blow_ups, m as usize);
            let expect: Vec<u32> = (0..=m).rev().collect();
            assert_eq!(s.sections[0].deltas, expect);
        }
    }

    #[test]
    fn smooth_sections_need_nothing() {
        let model = setup(5, &["y - x^2"]);
        let s = smoothen(&model, &[sec(&model, &[1, 1]), sec(&model, &[0, 0])]).unwrap();
        assert_eq!(s.blow_ups, 0);
        assert_eq!(s.charts.len(), 1);
    }

    #[test]
    fn generic_singularity_is_rejected() {
        let d = DvrDescriptor::integers(5).unwrap();
        let ring = PolyRing::new(&["x", "y"], d);
        let f = parse_poly("y^2 - x^2", &ring, &[]).unwrap();
        let g = f.mul(&f);
        assert!(DvrModel::new("A", &ring, vec![g]).is_err());
    }
}
