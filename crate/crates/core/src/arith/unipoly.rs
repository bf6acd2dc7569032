//! Univariate polynomials over `F_p` in the symbol `t`, and the rational
//! function field `F_p(t)`.

use std::fmt;

use num_bigint::BigInt;

use super::fp::{inv_mod, Fp};
use super::traits::{Field, Ring};

/// Dense polynomial in `t`, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { coeffs, p }
    }

    pub fn zero(p: u64) -> Self {
        UniPoly { coeffs: vec![], p }
    }

    pub fn constant(c: Fp) -> Self {
        UniPoly::new(vec![c.value()], c.modulus())
    }

    /// `t^k`.
    pub fn monomial(k: usize, p: u64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1 % p;
        UniPoly::new(coeffs, p)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Fp {
        Fp::new(*self.coeffs.get(i).unwrap_or(&0) as i64, self.p)
    }

    pub fn leading(&self) -> Fp {
        self.coeff(self.coeffs.len().saturating_sub(1))
    }

    /// Order of vanishing at `t = 0`.
    pub fn t_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| (self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0)) % self.p)
            .collect();
        UniPoly::new(v, self.p)
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(
            self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
            self.p,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut v = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a as u128 * b as u128) % p;
            }
        }
        UniPoly::new(v.into_iter().map(|c| c as u64).collect(), self.p)
    }

    pub fn scale(&self, c: Fp) -> Self {
        self.mul(&UniPoly::constant(c))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let lead_inv = inv_mod(*d.coeffs.last().unwrap(), p).unwrap();
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if rem.len() < d.coeffs.len() {
            return (UniPoly::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = (rem[k + dd] as u128 * lead_inv as u128 % p as u128) as u64;
            quot[k] = c;
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    let sub = (c as u128 * dc as u128 % p as u128) as u64;
                    rem[k + j] = (rem[k + j] + p - sub) % p;
                }
            }
        }
        (UniPoly::new(quot, p), UniPoly::new(rem, p))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.leading().inv())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: Fp) -> Fp {
        let mut acc = Fp::new(0, self.p);
        for &c in self.coeffs.iter().rev() {
            acc = Ring::add(&Ring::mul(&acc, &x), &Fp::new(c as i64, self.p));
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Element of `F_p(t)`: reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpRatFn {
    num: UniPoly,
    den: UniPoly,
}

impl FpRatFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in F_p(t)");
        let p = num.modulus();
        if num.is_zero() {
            return FpRatFn {
                num,
                den: UniPoly::new(vec![1], p),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let l = den.leading().inv();
        FpRatFn {
            num: num.scale(l),
            den: den.scale(l),
        }
    }

    pub fn from_poly(num: UniPoly) -> Self {
        let p = num.modulus();
        FpRatFn::new(num, UniPoly::new(vec![1], p))
    }

    pub fn t(p: u64) -> Self {
        FpRatFn::from_poly(UniPoly::monomial(1, p))
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn modulus(&self) -> u64 {
        self.num.modulus()
    }

    /// Valuation at `t = 0`; `None` for zero.
    pub fn t_valuation(&self) -> Option<i64> {
        let a = self.num.t_order()? as i64;
        let b = self.den.t_order().unwrap() as i64;
        Some(a - b)
    }
}

impl fmt::Display for FpRatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_den = self.den.degree() == Some(0);
        let num_compound = self.num.coeffs.iter().filter(|&&c| c != 0).count() > 1;
        match (one_den, num_compound) {
            (true, _) => write!(f, "{}", self.num),
            (false, true) => write!(f, "({})/({})", self.num, self.den),
            (false, false) => write!(f, "{}/({})", self.num, self.den),
        }
    }
}

impl Ring for FpRatFn {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.modulus()
    }

    fn zero(p: &u64) -> Self {
        FpRatFn::from_poly(UniPoly::zero(*p))
    }

    fn one(p: &u64) -> Self {
        FpRatFn::from_poly(UniPoly::new(vec![1], *p))
    }

    fn from_bigint(p: &u64, n: &BigInt) -> Self {
        FpRatFn::from_poly(UniPoly::constant(Fp::from_bigint(p, n)))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.degree() == Some(0) && self.den.degree() == Some(0) && self.num.coeffs[0] == 1
    }

    fn add(&self, o: &Self) -> Self {
        FpRatFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    fn sub(&self, o: &Self) -> Self {
        Ring::add(self, &Ring::neg(o))
    }

    fn mul(&self, o: &Self) -> Self {
        FpRatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn neg(&self) -> Self {
        FpRatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(FpRatFn::new(self.den.clone(), self.num.clone()))
        }
    }

    fn try_div(&self, o: &Self) -> Option<Self> {
        o.try_inverse().map(|i| Ring::mul(self, &i))
    }

    fn characteristic(p: &u64) -> u64 {
        *p
    }

    fn unit_part(&self) -> Self {
        if self.is_zero() {
            Self::one(&self.modulus())
        } else {
            self.clone()
        }
    }

    fn common_divisor(&self, o: &Self) -> Self {
        if self.is_zero() && o.is_zero() {
            self.clone()
        } else {
            Self::one(&self.modulus())
        }
    }

    fn is_compound(&self) -> bool {
        self.den.degree() != Some(0) || self.num.coeffs.iter().filter(|&&c| c != 0).count() > 1
    }
}

impl Field for FpRatFn {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_reduction() {
        // (t^2 - 1) / (t - 1) = t + 1 over F_7
        let num = UniPoly::new(vec![6, 0, 1], 7);
        let den = UniPoly::new(vec![6, 1], 7);
        let r = FpRatFn::new(num, den);
        assert_eq!(r.numerator(), &UniPoly::new(vec![1, 1], 7));
        assert_eq!(r.denominator().degree(), Some(0));
    }

    #[test]
    fn t_valuation() {
        let t = FpRatFn::t(7);
        let x = Ring::mul(&Ring::pow(&t, 3), &Ring::add(&t, &FpRatFn::one(&7)));
        assert_eq!(x.t_valuation(), Some(3));
        assert_eq!(t.inv().t_valuation(), Some(-1));
    }
}
