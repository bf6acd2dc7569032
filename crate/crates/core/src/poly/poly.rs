use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::monomial::{grevlex, Monomial};
use crate::arith::Ring;

/// Ordered variable names plus the coefficient context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing<C: Ring> {
    vars: Vec<String>,
    ctx: C::Ctx,
}

impl<C: Ring> PolyRing<C> {
    pub fn new<S: AsRef<str>>(vars: &[S], ctx: C::Ctx) -> Arc<Self> {
        Arc::new(PolyRing {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            ctx,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same coefficient context, new variable list.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Arc<Self> {
        PolyRing::new(vars, self.ctx.clone())
    }

    /// This ring's variables with extra ones appended.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Self> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        PolyRing::new(&vars, self.ctx.clone())
    }

    /// A variable name not yet used in this ring.
    pub fn fresh_var(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() {
            return stem.to_string();
        }
        (0..)
            .map(|i| format!("{stem}{i}"))
            .find(|s| self.var_index(s).is_none())
            .unwrap()
    }
}

pub fn same_ring<C: Ring>(a: &Arc<PolyRing<C>>, b: &Arc<PolyRing<C>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sparse multivariate polynomial. Terms are kept sorted by decreasing
/// grevlex order with no zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly<C: Ring> {
    ring: Arc<PolyRing<C>>,
    terms: Vec<(Monomial, C)>,
}

impl<C: Ring> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<C: Ring> Eq for Poly<C> {}

impl<C: Ring> Poly<C> {
    pub fn zero(ring: &Arc<PolyRing<C>>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<C>>, c: C) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<PolyRing<C>>) -> Self {
        Self::constant(ring, C::one(ring.ctx()))
    }

    pub fn from_i64(ring: &Arc<PolyRing<C>>, n: i64) -> Self {
        Self::constant(ring, C::from_i64(ring.ctx(), n))
    }

    pub fn var(ring: &Arc<PolyRing<C>>, i: usize) -> Self {
        assert!(i < ring.nvars());
        Poly {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i), C::one(ring.ctx()))],
        }
    }

    pub fn var_named(ring: &Arc<PolyRing<C>>, name: &str) -> Option<Self> {
        ring.var_index(name).map(|i| Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing<C>>, m: Monomial, c: C) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing<C>>, terms: Vec<(Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(e) => e.add_assign(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<PolyRing<C>>, acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grevlex(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusts that `terms` are sorted, distinct and nonzero.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing<C>>, terms: Vec<(Monomial, C)>) -> Self {
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<C>> {
        &self.ring
    }

    pub fn ctx(&self) -> &C::Ctx {
        self.ring.ctx()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero(self.ctx())),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Leading term in grevlex.
    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> C {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(|| C::zero(self.ctx()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials from different rings: {:?} vs {:?}",
            self.ring.vars,
            other.ring.vars
        );
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        self.check_ring(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grevlex(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        a[i].1.sub(&b[j].1)
                    } else {
                        a[i].1.add(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            (m.clone(), if negate_other { c.neg() } else { c.clone() })
        }));
        Poly::from_sorted(&self.ring, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Poly::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity((self.terms.len() * other.terms.len()).min(1 << 14));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => e.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(&self.ring, acc)
    }

    /// Multiplication by a single term; preserves term order.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly::from_sorted(
            &self.ring,
            self.terms
                .iter()
                .filter_map(|(mm, cc)| {
                    let x = cc.mul(c);
                    (!x.is_zero()).then(|| (mm.mul(m), x))
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &C) -> Self {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let e = m.0[var];
                let mut m2 = m.clone();
                m2.0[var] -= 1;
                (m2, c.mul(&C::from_i64(self.ctx(), e as i64)))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = C::zero(self.ctx());
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = t.mul(&x.pow(e));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Applies `f` to every coefficient, landing in a ring with the same
    /// number of variables.
    pub fn map_coeffs<D: Ring>(&self, target: &Arc<PolyRing<D>>, f: impl Fn(&C) -> D) -> Poly<D> {
        assert_eq!(target.nvars(), self.ring.nvars());
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let d = f(c);
                (!d.is_zero()).then(|| (m.clone(), d))
            })
            .collect();
        Poly::from_sorted(target, terms)
    }

    /// Fallible variant of [`Poly::map_coeffs`].
    pub fn try_map_coeffs<D: Ring, E>(
        &self,
        target: &Arc<PolyRing<D>>,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<Poly<D>, E> {
        assert_eq!(target.nvars(), self.ring.nvars());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.push((m.clone(), d));
            }
        }
        Ok(Poly::from_sorted(target, terms))
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `var_map[i]`.
    pub fn embed(&self, target: &Arc<PolyRing<C>>, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, &k) in m.0.iter().enumerate() {
                    e.0[var_map[i]] += k;
                }
                (e, c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Moves the polynomial into a ring whose variable names include all of
    /// this ring's, matching by name.
    pub fn embed_by_name(&self, target: &Arc<PolyRing<C>>) -> Self {
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                target
                    .var_index(v)
                    .unwrap_or_else(|| panic!("variable {v} missing in target ring"))
            })
            .collect();
        self.embed(target, &map)
    }

    /// Drops variables that do not occur, mapping into `target` by
    /// `var_map[i]` for occurring `i` only.
    pub fn restrict(&self, target: &Arc<PolyRing<C>>, var_map: &[Option<usize>]) -> Option<Self> {
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = Monomial::one(n);
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e.0[var_map[i]?] += k;
                }
            }
            terms.push((e, c.clone()));
        }
        Some(Poly::from_terms(target, terms))
    }

    /// Divides every coefficient exactly by `c`; `None` if some quotient
    /// leaves the coefficient ring.
    pub fn try_div_scalar(&self, c: &C) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            terms.push((m.clone(), a.try_div(c)?));
        }
        Some(Poly::from_sorted(&self.ring, terms))
    }

    /// Greatest common divisor of the coefficients, as computed by
    /// [`Ring::common_divisor`].
    pub fn content(&self) -> C {
        let mut it = self.terms.iter();
        let Some((_, first)) = it.next() else {
            return C::zero(self.ctx());
        };
        let mut g = first.common_divisor(first);
        for (_, c) in it {
            g = g.common_divisor(c);
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one(self.ring.nvars());
        };
        it.fold(first.clone(), |g, (m, _)| g.gcd(m))
    }

    pub fn div_monomial(&self, d: &Monomial) -> Self {
        Poly::from_sorted(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, c)| (d.quotient_of(m), c.clone()))
                .collect(),
        )
    }

    /// Exact division `self / d` when `d` divides `self` and every leading
    /// coefficient division is exact in `C`.
    pub fn divide_exact(&self, d: &Self) -> Option<Self> {
        self.check_ring(d);
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return self.try_div_scalar(&c);
        }
        let (dm, dc) = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = c.try_div(&dc)?;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_sorted(&self.ring, quot))
    }

    /// Substitutes polynomials for the variables.
    pub fn compose(&self, target: &Arc<PolyRing<C>>, values: &[Poly<C>]) -> Poly<C> {
        assert_eq!(values.len(), self.ring.nvars());
        let mut powers: Vec<Vec<Poly<C>>> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let d = self.degree_in(i) as usize;
                let mut p = Vec::with_capacity(d + 1);
                p.push(Poly::one(target));
                for k in 1..=d {
                    let next = p[k - 1].mul(v);
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        powers.clear();
        acc
    }
}

impl<C: Ring> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_display();
            let c = if negative { c.neg() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = format_monomial(&self.ring.vars, m);
            let coeff = if c.is_compound() {
                format!("({c})")
            } else {
                c.to_string()
            };
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coeff}*{mono}")?,
            }
        }
        Ok(())
    }
}

fn format_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(m.0.iter()) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            e => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, Rational};

    fn qring(vars: &[&str]) -> Arc<PolyRing<Rational>> {
        PolyRing::new(vars, ())
    }

    #[test]
    fn binomial_identity() {
        let r = qring(&["x", "y"]);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let lhs = x.add(&y).pow(2);
        let rhs = x.mul(&x).add(&x.mul(&y).scale(&Rational::from_integer(2.into()))).add(&y.mul(&y));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn frobenius_over_f5() {
        let r: Arc<PolyRing<Fp>> = PolyRing::new(&["x"], 5);
        let x = Poly::var(&r, 0);
        let lhs = x.add(&Poly::one(&r)).pow(5);
        let rhs = x.pow(5).add(&Poly::one(&r));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivatives() {
        let r: Arc<PolyRing<Fp>> = PolyRing::new(&["x"], 3);
        let x = Poly::var(&r, 0);
        assert!(x.pow(3).partial_derivative(0).is_zero());
        let q = qring(&["x"]);
        assert!(Poly::from_i64(&q, 7).partial_derivative(0).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = qring(&["x", "y"]);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let a = x.add(&y);
        let b = x.sub(&y);
        assert_eq!(a.mul(&b).divide_exact(&b), Some(a.clone()));
        assert_eq!(a.mul(&b).add(&Poly::one(&r)).divide_exact(&b), None);
    }

    #[test]
    fn display() {
        let r = qring(&["x", "y"]);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = y.pow(2).sub(&x.pow(3)).sub(&Poly::from_i64(&r, 25));
        assert_eq!(p.to_string(), "-x^3 + y^2 - 25");
    }
}
