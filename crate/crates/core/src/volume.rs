//! Orders of an invariant 1-form along the special-fibre components of
//! smooth curve charts, normalization, minimal components, and the
//! translation-invariance identity for a strict law.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{DvrElem, Field, Fp, Ring, UniPoly};
use crate::birlaw::{CheckReport, LawMap, StrictLaw};
use crate::error::{MapError, VolumeError};
use crate::ratmap::cross_difference;
use crate::poly::{Poly, PolyRing, RatFunc};
use crate::smoothening::{ChartKind, ChartNode, DvrModel};

/// Safety bound on the order of a polynomial along a component.
const MAX_ORDER: i64 = 256;

/// `ω = c·dx_i` on one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm {
    coefficient: RatFunc<DvrElem>,
    differential: usize,
}

impl VolumeForm {
    pub fn new(coefficient: RatFunc<DvrElem>, differential: usize) -> Self {
        VolumeForm {
            coefficient,
            differential,
        }
    }

    /// `dx / (2y + a1·x + a3)` on a Weierstrass chart in `x, y`.
    pub fn weierstrass(ring: &Arc<PolyRing<DvrElem>>, a1: &DvrElem, a3: &DvrElem) -> Self {
        let x = Poly::var(ring, 0);
        let y = Poly::var(ring, 1);
        let den = y
            .scale(&DvrElem::from_i64(ring.ctx(), 2))
            .add(&x.scale(a1))
            .add(&Poly::constant(ring, a3.clone()));
        VolumeForm::new(RatFunc::new(Poly::one(ring), den).expect("nonzero"), 0)
    }

    pub fn coefficient(&self) -> &RatFunc<DvrElem> {
        &self.coefficient
    }

    pub fn differential(&self) -> usize {
        self.differential
    }

    /// `π^m·ω`.
    pub fn scale_pi(&self, m: i64) -> Self {
        let ring = self.coefficient.ring();
        let pi = DvrElem::uniformizer(*ring.ctx());
        let pm = Poly::constant(ring, pi.pow(m.unsigned_abs() as u32));
        let (num, den) = self.coefficient.clone().into_parts();
        let c = if m >= 0 {
            RatFunc::new(num.mul(&pm), den)
        } else {
            RatFunc::new(num, den.mul(&pm))
        };
        VolumeForm::new(c.expect("nonzero"), self.differential)
    }

    /// Pullback to a `π`-chart of a blow-up: `xᵢ = c̃ᵢ + π·uᵢ`, so
    /// `dxᵢ = π·duᵢ`.
    pub fn pullback(&self, node: &ChartNode) -> Result<Self, VolumeError> {
        if node.kind != Some(ChartKind::Uniformizer) {
            return Err(VolumeError::Unsupported(format!(
                "forms can only be pulled back to pi-charts, not to {}",
                node.model.name()
            )));
        }
        let ring = node.model.ring();
        let values: Vec<RatFunc<DvrElem>> = node.substitution.iter().map(|p| RatFunc::from(p.clone())).collect();
        let c = self.coefficient.substitute(ring, &values);
        let pulled = VolumeForm::new(c, self.differential).scale_pi(1);
        Ok(pulled)
    }
}

impl fmt::Display for VolumeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.coefficient.ring().vars()[self.differential];
        write!(f, "({}) d{v}", self.coefficient)
    }
}

/// A component of the special fibre of a chart: the whole fibre `(π)`, or
/// `(π, q)` for a reduced factor `q` of the fibre equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Whole,
    Factor(Poly<Fp>),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Whole => f.write_str("(pi)"),
            Component::Factor(q) => write!(f, "(pi, {q})"),
        }
    }
}

impl Component {
    /// Whether a point of the special fibre lies on the component.
    pub fn contains(&self, pt: &[Fp]) -> bool {
        match self {
            Component::Whole => true,
            Component::Factor(q) => q.eval(pt).is_zero(),
        }
    }
}

/// Largest prime for which fibre components are split by trying every
/// residue as a root.
const MAX_ROOT_SEARCH: u64 = 10_007;

/// Components of the special fibre of a chart. A fibre cut out by a
/// polynomial in one variable is split into its linear factors over `F_p`
/// and the remaining factor; any other fibre is one component.
pub fn fibre_components(model: &DvrModel) -> Vec<Component> {
    let [f] = model.equations() else {
        return vec![Component::Whole];
    };
    let p = model.descriptor().prime();
    let sring: Arc<PolyRing<Fp>> = PolyRing::new(model.ring().vars(), p);
    let fbar = residue_poly(f, &sring);
    let support = fbar.support();
    if support.len() != 1 || p > MAX_ROOT_SEARCH {
        return vec![Component::Whole];
    }
    let v = support[0];
    let mut coeffs = vec![0u64; fbar.degree_in(v) as usize + 1];
    for (m, c) in fbar.terms() {
        coeffs[m.0[v] as usize] = c.value();
    }
    let mut rest = UniPoly::new(coeffs, p);
    let mut factors = Vec::new();
    for a in 0..p {
        let a = Fp::new(a as i64, p);
        let lin = UniPoly::new(vec![a.neg().value(), 1], p);
        let mut found = false;
        while rest.degree().unwrap_or(0) > 0 && rest.eval(a).is_zero() {
            rest = rest.div_rem(&lin).0;
            found = true;
        }
        if found {
            let x = Poly::var(&sring, v);
            factors.push(Component::Factor(x.sub(&Poly::constant(&sring, a))));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let x = Poly::var(&sring, v);
        let q = (0..=rest.degree().unwrap()).fold(Poly::zero(&sring), |acc, i| {
            acc.add(&x.pow(i as u32).scale(&rest.coeff(i)))
        });
        factors.push(Component::Factor(q));
    }
    if factors.len() <= 1 {
        return vec![Component::Whole];
    }
    factors
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentOrder {
    pub chart: String,
    pub component: String,
    pub order: i64,
}

/// Data for the order computation along one component: `f = q̃·s̃ + π·r`
/// with `s̃` a unit at the generic point of the component.
struct Local {
    q: Poly<Fp>,
    q_lift: Poly<DvrElem>,
    s_lift: Poly<DvrElem>,
    r: Poly<DvrElem>,
}

fn residue_poly(f: &Poly<DvrElem>, sring: &Arc<PolyRing<Fp>>) -> Poly<Fp> {
    f.map_coeffs(sring, DvrElem::residue)
}

fn lift_poly(f: &Poly<Fp>, ring: &Arc<PolyRing<DvrElem>>) -> Poly<DvrElem> {
    let d = *ring.ctx();
    f.map_coeffs(ring, |c| DvrElem::lift(d, *c))
}

fn divide_pi(f: &Poly<DvrElem>) -> Option<Poly<DvrElem>> {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| c.div_uniformizer_pow(1).map(|q| (m.clone(), q)))
        .collect::<Option<Vec<_>>>()?;
    Some(Poly::from_terms(f.ring(), terms))
}

fn local_data(model: &DvrModel, comp: &Component) -> Result<Local, VolumeError> {
    let ring = model.ring();
    let sring: Arc<PolyRing<Fp>> = PolyRing::new(ring.vars(), model.descriptor().prime());
    match model.equations() {
        [] => {
            let q = Poly::zero(&sring);
            if let Component::Factor(_) = comp {
                return Err(VolumeError::Unsupported("affine space has an irreducible special fibre".into()));
            }
            Ok(Local {
                q,
                q_lift: Poly::zero(ring),
                s_lift: Poly::one(ring),
                r: Poly::zero(ring),
            })
        }
        [f] => {
            let fbar = residue_poly(f, &sring);
            if fbar.is_zero() {
                return Err(VolumeError::Unsupported(format!("special fibre of {} is not a curve", model.name())));
            }
            let (q, s) = match comp {
                Component::Whole => (fbar.clone(), Poly::one(&sring)),
                Component::Factor(q) => {
                    let s = fbar
                        .divide_exact(q)
                        .ok_or_else(|| VolumeError::Unsupported(format!("{q} does not divide {fbar}")))?;
                    if s.divide_exact(q).is_some() {
                        return Err(VolumeError::Unsupported(format!("{q} is a multiple component")));
                    }
                    (q.clone(), s)
                }
            };
            let q_lift = lift_poly(&q, ring);
            let s_lift = lift_poly(&s, ring);
            let r = divide_pi(&f.sub(&q_lift.mul(&s_lift))).expect("agrees modulo pi");
            Ok(Local { q, q_lift, s_lift, r })
        }
        _ => Err(VolumeError::Unsupported(format!(
            "orders are implemented for plane curve charts; {} has {} equations",
            model.name(),
            model.equations().len()
        ))),
    }
}

/// Order of a polynomial along the component: repeatedly strips one
/// factor of the uniformizer while the residue vanishes on the component.
fn ord_poly(g: &Poly<DvrElem>, loc: &Local) -> Result<i64, VolumeError> {
    let sring: Arc<PolyRing<Fp>> = PolyRing::new(g.ring().vars(), g.ring().ctx().prime());
    let mut g = g.clone();
    let mut k = 0;
    while k <= MAX_ORDER {
        if g.is_zero() {
            break;
        }
        let gbar = residue_poly(&g, &sring);
        if gbar.is_zero() {
            g = divide_pi(&g).expect("vanishes modulo pi");
        } else if loc.q.is_zero() {
            return Ok(k);
        } else if let Some(qq) = gbar.divide_exact(&loc.q) {
            // g = q̃Q̃ + πt and q̃ = −πr/s̃ locally, so g = (π/s̃)(t·s̃ − r·Q̃)
            let qq = lift_poly(&qq, g.ring());
            let t = divide_pi(&g.sub(&loc.q_lift.mul(&qq))).expect("agrees modulo pi");
            g = t.mul(&loc.s_lift).sub(&loc.r.mul(&qq));
        } else {
            return Ok(k);
        }
        k += 1;
    }
    Err(VolumeError::NotRegular(format!("{g} vanishes along the component")))
}

/// `ord_W(ω)`: for `ω = c·dx` on a chart `f(x, y) = 0` this is
/// `ord_W(c) + ord_W(∂f/∂y)`, since `dx/f_y` generates `Ω¹` wherever the
/// chart is smooth.
pub fn ord_along(model: &DvrModel, comp: &Component, form: &VolumeForm) -> Result<i64, VolumeError> {
    let loc = local_data(model, comp)?;
    let c = form.coefficient();
    let mut ord = ord_poly(c.numerator(), &loc)? - ord_poly(c.denominator(), &loc)?;
    if let [f] = model.equations() {
        if model.ring().nvars() != 2 {
            return Err(VolumeError::Unsupported("curve charts must be plane curves".into()));
        }
        let other = 1 - form.differential();
        ord += ord_poly(&f.partial_derivative(other), &loc)?;
    } else if model.ring().nvars() != 1 {
        return Err(VolumeError::Unsupported("relative dimension one only".into()));
    }
    Ok(ord)
}

/// `ρ = min ord`, and the orders after replacing `ω` by `π^{−ρ}ω`.
pub fn normalize(orders: &[ComponentOrder]) -> Result<(i64, Vec<ComponentOrder>), VolumeError> {
    let rho = orders.iter().map(|o| o.order).min().ok_or(VolumeError::NoComponents)?;
    let shifted = orders
        .iter()
        .map(|o| ComponentOrder {
            order: o.order - rho,
            ..o.clone()
        })
        .collect();
    Ok((rho, shifted))
}

pub fn minimal_components(orders: &[ComponentOrder]) -> Vec<ComponentOrder> {
    orders.iter().filter(|o| o.order == 0).cloned().collect()
}

/// A chart of the minimal part: the chart, the components kept, and the
/// product of the equations of the excised components.
#[derive(Clone, Debug)]
pub struct MinimalChart {
    pub model: DvrModel,
    pub components: Vec<Component>,
    pub localization: Poly<DvrElem>,
}

/// Drops charts with no minimal component and localizes the remaining
/// ones away from their non-minimal components.
pub fn filter_non_minimal(charts: &[(DvrModel, Vec<(Component, i64)>)]) -> Vec<MinimalChart> {
    let mut out = Vec::new();
    for (model, comps) in charts {
        if !comps.iter().any(|(_, o)| *o == 0) {
            continue;
        }
        let mut loc = Poly::one(model.ring());
        let mut keep = Vec::new();
        for (c, o) in comps {
            if *o == 0 {
                keep.push(c.clone());
            } else if let Component::Factor(q) = c {
                loc = loc.mul(&lift_poly(q, model.ring()));
            }
        }
        out.push(MinimalChart {
            model: model.clone(),
            components: keep,
            localization: loc,
        });
    }
    out
}

/// Checks `φ_a*ω = ω` for the left translations of `law`, with `a`
/// symbolic: the coefficient of the pullback, rewritten in the
/// differential of the form, must agree with the coefficient of `ω`.
pub fn check_invariance<F: Field>(
    law: &StrictLaw<F>,
    coefficient: &RatFunc<F>,
    differential: usize,
) -> Result<CheckReport, MapError> {
    let mut report = CheckReport::new("invariance");
    let x = law.variety();
    let n = x.ring().nvars();
    let eqs = x.equations();
    if !(n == 1 && eqs.is_empty() || n == 2 && eqs.len() == 1) {
        return Err(MapError::Invalid("invariance is checked on curves in one or two variables".into()));
    }
    let pair = law.pair(LawMap::M12);
    let pr = pair.ring();
    let second: Vec<usize> = law.slots()[1]
        .iter()
        .map(|v| pr.var_index(v).expect("slot variable"))
        .collect();
    let phi = law.map(LawMap::M12);
    let moved = |c: &RatFunc<F>, offset_slot: usize| -> RatFunc<F> {
        let vars: Vec<usize> = law.slots()[offset_slot]
            .iter()
            .map(|v| pr.var_index(v).expect("slot variable"))
            .collect();
        c.embed(pr, &vars)
    };
    let c_at_phi = coefficient.substitute(pr, phi.coords());
    let i = differential;
    let mut dphi = phi.coords()[i].partial_derivative(second[i]);
    let mut witness = phi.witness().clone();
    if n == 2 {
        let j = 1 - i;
        let f = moved(&RatFunc::from(eqs[0].clone()), 1);
        let fi = f.partial_derivative(second[i]);
        let fj = f.partial_derivative(second[j]);
        let ratio = fi.div(&fj).map_err(|_| MapError::Invalid("curve equation has no partial".into()))?;
        dphi = dphi.sub(&phi.coords()[i].partial_derivative(second[j]).mul(&ratio));
        witness = witness.mul(fj.numerator());
    }
    let pulled = c_at_phi.mul(&dphi);
    let original = moved(coefficient, 1);
    if !pair.functions_agree(&witness, &pulled, &original)? {
        let res = pair.residue_on(&witness, &cross_difference(&pulled, &original))?;
        report.fail(format!("pullback {pulled} differs from {original}: residue {res}"));
    }
    Ok(report)
}
