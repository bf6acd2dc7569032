use std::fmt;
use std::sync::Arc;

use super::monomial::Monomial;
use super::poly::{Poly, PolyRing};
use crate::arith::Ring;
use crate::error::PolyError;

/// Quotient of two polynomials over the same ring.
///
/// Normalisation cancels common monomial factors and common coefficient
/// content, scales the denominator to a canonical associate, and cancels
/// the gcd whenever numerator and denominator involve a single common
/// variable. Multivariate gcds are not computed, so equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc<C: Ring> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Ring> PartialEq for RatFunc<C> {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<C: Ring> Eq for RatFunc<C> {}

impl<C: Ring> From<Poly<C>> for RatFunc<C> {
    fn from(p: Poly<C>) -> Self {
        let den = Poly::one(p.ring());
        RatFunc { num: p, den }
    }
}

impl<C: Ring> RatFunc<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn zero(ring: &Arc<PolyRing<C>>) -> Self {
        Poly::zero(ring).into()
    }

    pub fn one(ring: &Arc<PolyRing<C>>) -> Self {
        Poly::one(ring).into()
    }

    pub fn var(ring: &Arc<PolyRing<C>>, i: usize) -> Self {
        Poly::var(ring, i).into()
    }

    pub fn constant(ring: &Arc<PolyRing<C>>, c: C) -> Self {
        Poly::constant(ring, c).into()
    }

    pub fn numerator(&self) -> &Poly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<C> {
        &self.den
    }

    pub fn into_parts(self) -> (Poly<C>, Poly<C>) {
        (self.num, self.den)
    }

    pub fn ring(&self) -> &Arc<PolyRing<C>> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.try_inverse().is_some())
    }

    /// The polynomial this function equals, when the denominator is a unit
    /// constant.
    pub fn to_poly(&self) -> Option<Poly<C>> {
        let c = self.den.as_constant()?;
        self.num.scale(&c.try_inverse()?).into()
    }

    fn normalized(mut num: Poly<C>, mut den: Poly<C>) -> Self {
        let ring = num.ring().clone();
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(&ring),
            };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        let cd = num.content().common_divisor(&den.content());
        if !cd.is_one() && !cd.is_zero() {
            num = num.try_div_scalar(&cd).expect("content divides");
            den = den.try_div_scalar(&cd).expect("content divides");
        }
        if !den.is_constant() {
            if let Some(g) = univariate_gcd(&num, &den) {
                if !g.is_constant() {
                    num = num.divide_exact(&g).expect("gcd divides numerator");
                    den = den.divide_exact(&g).expect("gcd divides denominator");
                }
            }
        }
        let u = den.leading_coeff().unit_part();
        if !u.is_one() {
            let ui = u.try_inverse().expect("unit part is invertible");
            num = num.scale(&ui);
            den = den.scale(&ui);
        }
        RatFunc { num, den }
    }

    /// Divides numerator and denominator by `f` as often as both allow.
    pub fn cancel_factor(&self, f: &Poly<C>) -> Self {
        if f.is_constant() {
            return self.clone();
        }
        let (mut n, mut d) = (self.num.clone(), self.den.clone());
        loop {
            match (n.divide_exact(f), d.divide_exact(f)) {
                (Some(a), Some(b)) => {
                    n = a;
                    d = b;
                }
                _ => break,
            }
        }
        Self::normalized(n, d)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_poly(&self, p: &Poly<C>) -> Self {
        Self::normalized(self.num.mul(p), self.den.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, PolyError> {
        if o.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        RatFunc::one(self.ring()).div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Self, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let dn = self.num.partial_derivative(var);
        let dd = self.den.partial_derivative(var);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Value at a point; `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[C]) -> Option<C> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        let n = self.num.eval(point);
        n.try_div(&d)
    }

    /// Substitutes rational functions (all living in `target`) for the
    /// variables. The common denominator is the product of the input
    /// denominators raised to the degrees occurring in `self`.
    pub fn substitute(&self, target: &Arc<PolyRing<C>>, values: &[RatFunc<C>]) -> Self {
        assert_eq!(values.len(), self.ring().nvars());
        let n = values.len();
        let degs: Vec<u32> = (0..n)
            .map(|i| self.num.degree_in(i).max(self.den.degree_in(i)))
            .collect();
        let num = substitute_homogenized(&self.num, target, values, &degs);
        let den = substitute_homogenized(&self.den, target, values, &degs);
        let mut out = Self::normalized(num, den);
        for v in values {
            if !v.den.is_constant() {
                out = out.cancel_factor(&v.den);
            }
        }
        out
    }

    /// Moves both parts to another ring, variable `i` going to `var_map[i]`.
    pub fn embed(&self, target: &Arc<PolyRing<C>>, var_map: &[usize]) -> Self {
        RatFunc {
            num: self.num.embed(target, var_map),
            den: self.den.embed(target, var_map),
        }
    }

    pub fn map_coeffs<D: Ring>(&self, target: &Arc<PolyRing<D>>, f: impl Fn(&C) -> D) -> RatFunc<D> {
        RatFunc::<D>::normalized(self.num.map_coeffs(target, &f), self.den.map_coeffs(target, &f))
    }

    /// Replaces numerator and denominator by the given polynomials without
    /// any normalisation beyond the zero-denominator check. Used when a
    /// representative is reduced modulo an ideal.
    pub fn from_parts_raw(num: Poly<C>, den: Poly<C>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }
}

fn substitute_homogenized<C: Ring>(
    p: &Poly<C>,
    target: &Arc<PolyRing<C>>,
    values: &[RatFunc<C>],
    degs: &[u32],
) -> Poly<C> {
    let n = values.len();
    let cache_pow = |base: &Poly<C>, d: u32| -> Vec<Poly<C>> {
        let mut v = Vec::with_capacity(d as usize + 1);
        v.push(Poly::one(target));
        for k in 1..=d as usize {
            let next = v[k - 1].mul(base);
            v.push(next);
        }
        v
    };
    let num_pows: Vec<Vec<Poly<C>>> = (0..n).map(|i| cache_pow(&values[i].num, degs[i])).collect();
    let den_pows: Vec<Vec<Poly<C>>> = (0..n)
        .map(|i| {
            if values[i].den.is_one() {
                Vec::new()
            } else {
                cache_pow(&values[i].den, degs[i])
            }
        })
        .collect();
    let mut acc = Poly::zero(target);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(target, c.clone());
        for i in 0..n {
            let e = m.0[i];
            if e > 0 {
                t = t.mul(&num_pows[i][e as usize]);
            }
            if !den_pows[i].is_empty() && degs[i] > e {
                t = t.mul(&den_pows[i][(degs[i] - e) as usize]);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// gcd of two polynomials whose combined support is a single variable, over
/// coefficients where every needed leading coefficient is invertible.
fn univariate_gcd<C: Ring>(a: &Poly<C>, b: &Poly<C>) -> Option<Poly<C>> {
    let mut sa = a.support();
    sa.extend(b.support());
    sa.sort_unstable();
    sa.dedup();
    if sa.len() != 1 {
        return None;
    }
    let v = sa[0];
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = univariate_rem(&x, &y, v)?;
        x = y;
        y = r;
    }
    let l = x.leading_coeff().try_inverse()?;
    Some(x.scale(&l))
}

fn univariate_rem<C: Ring>(a: &Poly<C>, b: &Poly<C>, v: usize) -> Option<Poly<C>> {
    let ring = a.ring().clone();
    let n = ring.nvars();
    let db = b.degree_in(v);
    let lb_inv = b.leading_coeff().try_inverse()?;
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let mut m = Monomial::one(n);
        m.0[v] = dr - db;
        let c = r.leading_coeff().mul(&lb_inv);
        r = r.sub(&b.mul_term(&m, &c));
    }
    Some(r)
}

impl<C: Ring> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn cancels_univariate_gcd() {
        let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let x = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let f = RatFunc::new(x.pow(2).sub(&one), x.sub(&one)).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numerator(), &x.add(&one));
    }

    #[test]
    fn substitution() {
        let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let x = RatFunc::var(&r, 0);
        let f: RatFunc<Rational> = RatFunc::var(&r, 0).mul(&x).add(&RatFunc::zero(&r));
        let t: Arc<PolyRing<Rational>> = PolyRing::new(&["t"], ());
        let tt = RatFunc::var(&t, 0);
        let val = RatFunc::one(&t).add(&tt).div(&tt).unwrap();
        let out = f.substitute(&t, &[val]);
        let expected = RatFunc::one(&t).add(&tt).pow(2).unwrap().div(&tt.pow(2).unwrap()).unwrap();
        assert_eq!(out, expected);

        // 2x + 1 composed with itself is 4x + 3
        let g = RatFunc::constant(&r, q(2)).mul(&x).add(&RatFunc::one(&r));
        let gg = g.substitute(&r, std::slice::from_ref(&g));
        let h = RatFunc::constant(&r, q(4)).mul(&x).add(&RatFunc::constant(&r, q(3)));
        assert_eq!(gg, h);
        assert!(gg.is_polynomial());
    }

    #[test]
    fn division_by_zero() {
        let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        assert!(RatFunc::one(&r).div(&RatFunc::zero(&r)).is_err());
    }

    #[test]
    fn x_over_x() {
        let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x"], ());
        let x = RatFunc::var(&r, 0);
        assert!(x.div(&x).unwrap().numerator().is_one());
    }
}
