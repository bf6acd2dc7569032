//! The two discrete valuation rings supported by the toolkit: `Z_(p)` and
//! `F_p[t]_(t)`, their fraction fields and residue field `F_p`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fp::{is_prime, Fp};
use super::rational::int_valuation;
use super::traits::{Field, Ring};
use super::unipoly::{FpRatFn, UniPoly};
use crate::error::ArithError;

/// Which valuation ring, together with its prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DvrDescriptor {
    /// `Z` localized at the prime `p`; uniformizer `p`, residue field `F_p`.
    LocalizedIntegers { p: u64 },
    /// `F_p[t]` localized at `t`; uniformizer `t`, residue field `F_p`.
    LocalizedPolynomials { p: u64 },
}

impl DvrDescriptor {
    pub fn integers(p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(DvrDescriptor::LocalizedIntegers { p })
    }

    pub fn polynomials(p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(DvrDescriptor::LocalizedPolynomials { p })
    }

    /// The residue characteristic.
    pub fn prime(&self) -> u64 {
        match *self {
            DvrDescriptor::LocalizedIntegers { p } | DvrDescriptor::LocalizedPolynomials { p } => p,
        }
    }

    /// Name of the uniformizer in polynomial text.
    pub fn uniformizer_symbol(&self) -> &'static str {
        match self {
            DvrDescriptor::LocalizedIntegers { .. } => "p",
            DvrDescriptor::LocalizedPolynomials { .. } => "t",
        }
    }
}

impl fmt::Display for DvrDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DvrDescriptor::LocalizedIntegers { p } => write!(f, "Z_({p})"),
            DvrDescriptor::LocalizedPolynomials { p } => write!(f, "F_{p}[t]_(t)"),
        }
    }
}

/// Valuation with a point at infinity for zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum FracValue {
    Rational(BigRational),
    Function(FpRatFn),
}

/// Element of the fraction field `K` of a [`DvrDescriptor`] ring: `Q` or
/// `F_p(t)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FracElem {
    desc: DvrDescriptor,
    value: FracValue,
}

impl FracElem {
    pub fn from_rational(desc: DvrDescriptor, q: BigRational) -> Self {
        assert!(matches!(desc, DvrDescriptor::LocalizedIntegers { .. }));
        FracElem {
            desc,
            value: FracValue::Rational(q),
        }
    }

    pub fn from_function(desc: DvrDescriptor, f: FpRatFn) -> Self {
        assert!(matches!(desc, DvrDescriptor::LocalizedPolynomials { .. }));
        FracElem {
            desc,
            value: FracValue::Function(f),
        }
    }

    pub fn descriptor(&self) -> DvrDescriptor {
        self.desc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            FracValue::Rational(q) => Some(q),
            FracValue::Function(_) => None,
        }
    }

    pub fn as_function(&self) -> Option<&FpRatFn> {
        match &self.value {
            FracValue::Function(f) => Some(f),
            FracValue::Rational(_) => None,
        }
    }

    pub fn uniformizer(desc: DvrDescriptor) -> Self {
        match desc {
            DvrDescriptor::LocalizedIntegers { p } => {
                FracElem::from_rational(desc, BigRational::from_integer(BigInt::from(p)))
            }
            DvrDescriptor::LocalizedPolynomials { p } => FracElem::from_function(desc, FpRatFn::t(p)),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.value {
            FracValue::Rational(q) => {
                if Ring::is_zero(q) {
                    Valuation::Infinite
                } else {
                    let p = self.desc.prime();
                    Valuation::Finite(
                        int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64,
                    )
                }
            }
            FracValue::Function(f) => match f.t_valuation() {
                Some(v) => Valuation::Finite(v),
                None => Valuation::Infinite,
            },
        }
    }

    /// Residue class of an element of valuation at least zero.
    pub fn residue(&self) -> Option<Fp> {
        let p = self.desc.prime();
        match self.valuation() {
            Valuation::Infinite => Some(Fp::new(0, p)),
            Valuation::Finite(v) if v > 0 => Some(Fp::new(0, p)),
            Valuation::Finite(v) if v < 0 => None,
            _ => Some(match &self.value {
                FracValue::Rational(q) => {
                    let n = Fp::from_bigint(&p, q.numer());
                    let d = Fp::from_bigint(&p, q.denom());
                    Field::div(&n, &d)
                }
                FracValue::Function(f) => {
                    let z = Fp::new(0, p);
                    Field::div(&f.numerator().eval(z), &f.denominator().eval(z))
                }
            }),
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.desc, other.desc, "mixed valuation rings {} and {}", self.desc, other.desc);
    }

    fn map2(
        &self,
        other: &Self,
        fq: impl Fn(&BigRational, &BigRational) -> BigRational,
        ff: impl Fn(&FpRatFn, &FpRatFn) -> FpRatFn,
    ) -> Self {
        self.check(other);
        let value = match (&self.value, &other.value) {
            (FracValue::Rational(a), FracValue::Rational(b)) => FracValue::Rational(fq(a, b)),
            (FracValue::Function(a), FracValue::Function(b)) => FracValue::Function(ff(a, b)),
            _ => unreachable!("descriptor mismatch"),
        };
        FracElem {
            desc: self.desc,
            value,
        }
    }
}

impl fmt::Display for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            FracValue::Rational(q) => write!(f, "{q}"),
            FracValue::Function(r) => write!(f, "{r}"),
        }
    }
}

impl Ring for FracElem {
    type Ctx = DvrDescriptor;

    fn ctx(&self) -> DvrDescriptor {
        self.desc
    }

    fn zero(desc: &DvrDescriptor) -> Self {
        Self::from_bigint(desc, &BigInt::zero())
    }

    fn one(desc: &DvrDescriptor) -> Self {
        Self::from_bigint(desc, &BigInt::one())
    }

    fn from_bigint(desc: &DvrDescriptor, n: &BigInt) -> Self {
        match *desc {
            DvrDescriptor::LocalizedIntegers { .. } => {
                FracElem::from_rational(*desc, BigRational::from_integer(n.clone()))
            }
            DvrDescriptor::LocalizedPolynomials { p } => {
                FracElem::from_function(*desc, FpRatFn::from_bigint(&p, n))
            }
        }
    }

    fn is_zero(&self) -> bool {
        match &self.value {
            FracValue::Rational(q) => Ring::is_zero(q),
            FracValue::Function(f) => Ring::is_zero(f),
        }
    }

    fn is_one(&self) -> bool {
        match &self.value {
            FracValue::Rational(q) => Ring::is_one(q),
            FracValue::Function(f) => Ring::is_one(f),
        }
    }

    fn add(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a + b, Ring::add)
    }

    fn sub(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a - b, Ring::sub)
    }

    fn mul(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a * b, Ring::mul)
    }

    fn neg(&self) -> Self {
        let value = match &self.value {
            FracValue::Rational(q) => FracValue::Rational(-q),
            FracValue::Function(f) => FracValue::Function(Ring::neg(f)),
        };
        FracElem {
            desc: self.desc,
            value,
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        let value = match &self.value {
            FracValue::Rational(q) => FracValue::Rational(q.recip()),
            FracValue::Function(f) => FracValue::Function(f.inv()),
        };
        Some(FracElem {
            desc: self.desc,
            value,
        })
    }

    fn try_div(&self, o: &Self) -> Option<Self> {
        o.try_inverse().map(|i| Ring::mul(self, &i))
    }

    fn characteristic(desc: &DvrDescriptor) -> u64 {
        match desc {
            DvrDescriptor::LocalizedIntegers { .. } => 0,
            DvrDescriptor::LocalizedPolynomials { p } => *p,
        }
    }

    fn unit_part(&self) -> Self {
        if Ring::is_zero(self) {
            Self::one(&self.desc)
        } else {
            self.clone()
        }
    }

    fn common_divisor(&self, o: &Self) -> Self {
        if Ring::is_zero(self) && Ring::is_zero(o) {
            self.clone()
        } else {
            Self::one(&self.desc)
        }
    }

    fn is_compound(&self) -> bool {
        match &self.value {
            FracValue::Rational(_) => false,
            FracValue::Function(f) => f.is_compound(),
        }
    }

    fn is_negative_display(&self) -> bool {
        match &self.value {
            FracValue::Rational(q) => q.is_negative(),
            FracValue::Function(_) => false,
        }
    }
}

impl Field for FracElem {}

/// Element of the valuation ring `R` itself: a fraction whose denominator is
/// a unit, with its valuation cached.
#[derive(Clone, Debug)]
pub struct DvrElem {
    value: FracElem,
    valuation: Valuation,
}

impl PartialEq for DvrElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for DvrElem {}

impl std::hash::Hash for DvrElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl DvrElem {
    /// Fails if `x` is not integral.
    pub fn from_frac(x: FracElem) -> Result<Self, ArithError> {
        let valuation = x.valuation();
        if let Valuation::Finite(v) = valuation {
            if v < 0 {
                return Err(ArithError::NotIntegral(x.to_string()));
            }
        }
        Ok(DvrElem { value: x, valuation })
    }

    fn from_frac_unchecked(x: FracElem) -> Self {
        let valuation = x.valuation();
        debug_assert!(valuation >= Valuation::Finite(0));
        DvrElem { value: x, valuation }
    }

    pub fn from_ratio(desc: DvrDescriptor, num: i64, den: i64) -> Result<Self, ArithError> {
        match desc {
            DvrDescriptor::LocalizedIntegers { .. } => DvrElem::from_frac(FracElem::from_rational(
                desc,
                BigRational::new(BigInt::from(num), BigInt::from(den)),
            )),
            DvrDescriptor::LocalizedPolynomials { p } => {
                let n = FracElem::from_i64(&desc, num);
                let d = FracElem::from_i64(&desc, den);
                if Ring::is_zero(&d) {
                    return Err(ArithError::NotIntegral(format!("{num}/{den} mod {p}")));
                }
                DvrElem::from_frac(Field::div(&n, &d))
            }
        }
    }

    pub fn uniformizer(desc: DvrDescriptor) -> Self {
        Self::from_frac_unchecked(FracElem::uniformizer(desc))
    }

    pub fn descriptor(&self) -> DvrDescriptor {
        self.value.desc
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn is_unit(&self) -> bool {
        self.valuation == Valuation::Finite(0)
    }

    pub fn to_frac(&self) -> FracElem {
        self.value.clone()
    }

    pub fn as_frac(&self) -> &FracElem {
        &self.value
    }

    pub fn residue(&self) -> Fp {
        self.value.residue().expect("integral element")
    }

    /// Canonical lift of a residue class: the integer in `[0, p)`, resp. the
    /// constant polynomial.
    pub fn lift(desc: DvrDescriptor, r: Fp) -> Self {
        Self::from_frac_unchecked(FracElem::from_i64(&desc, r.value() as i64))
    }

    /// Exact division by `pi^k`, if the result stays integral.
    pub fn div_uniformizer_pow(&self, k: u32) -> Option<Self> {
        let pk = Ring::pow(&FracElem::uniformizer(self.descriptor()), k);
        DvrElem::from_frac(Field::div(&self.value, &pk)).ok()
    }
}

impl fmt::Display for DvrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Ring for DvrElem {
    type Ctx = DvrDescriptor;

    fn ctx(&self) -> DvrDescriptor {
        self.value.desc
    }

    fn zero(desc: &DvrDescriptor) -> Self {
        Self::from_frac_unchecked(FracElem::zero(desc))
    }

    fn one(desc: &DvrDescriptor) -> Self {
        Self::from_frac_unchecked(FracElem::one(desc))
    }

    fn from_bigint(desc: &DvrDescriptor, n: &BigInt) -> Self {
        Self::from_frac_unchecked(FracElem::from_bigint(desc, n))
    }

    fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn add(&self, o: &Self) -> Self {
        Self::from_frac_unchecked(Ring::add(&self.value, &o.value))
    }

    fn sub(&self, o: &Self) -> Self {
        Self::from_frac_unchecked(Ring::sub(&self.value, &o.value))
    }

    fn mul(&self, o: &Self) -> Self {
        let value = Ring::mul(&self.value, &o.value);
        let valuation = match (self.valuation, o.valuation) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        };
        DvrElem { value, valuation }
    }

    fn neg(&self) -> Self {
        DvrElem {
            value: Ring::neg(&self.value),
            valuation: self.valuation,
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_unit() {
            Some(Self::from_frac_unchecked(self.value.inv()))
        } else {
            None
        }
    }

    fn try_div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() || self.valuation < o.valuation {
            return None;
        }
        Some(Self::from_frac_unchecked(Field::div(&self.value, &o.value)))
    }

    fn characteristic(desc: &DvrDescriptor) -> u64 {
        FracElem::characteristic(desc)
    }

    fn unit_part(&self) -> Self {
        match self.valuation {
            Valuation::Infinite => Self::one(&self.descriptor()),
            Valuation::Finite(v) => self.div_uniformizer_pow(v as u32).unwrap(),
        }
    }

    fn common_divisor(&self, o: &Self) -> Self {
        match self.valuation.min(o.valuation) {
            Valuation::Infinite => Self::zero(&self.descriptor()),
            Valuation::Finite(v) => Ring::pow(&Self::uniformizer(self.descriptor()), v as u32),
        }
    }

    fn is_compound(&self) -> bool {
        self.value.is_compound()
    }

    fn is_negative_display(&self) -> bool {
        self.value.is_negative_display()
    }
}

/// Builds a `F_p[t]_(t)` element from a polynomial in `t`.
pub fn t_poly(desc: DvrDescriptor, coeffs: &[i64]) -> DvrElem {
    let p = desc.prime();
    let poly = UniPoly::new(
        coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect(),
        p,
    );
    DvrElem::from_frac_unchecked(FracElem::from_function(desc, FpRatFn::from_poly(poly)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        let z5 = DvrDescriptor::integers(5).unwrap();
        assert_eq!(DvrElem::zero(&z5).valuation(), Valuation::Infinite);
        let x = DvrElem::from_ratio(z5, 50, 3).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(2));

        let f7t = DvrDescriptor::polynomials(7).unwrap();
        // t^3 (t + 1) = t^4 + t^3
        let y = t_poly(f7t, &[0, 0, 0, 1, 1]);
        assert_eq!(y.valuation(), Valuation::Finite(3));
    }

    #[test]
    fn non_integral_rejected() {
        let z5 = DvrDescriptor::integers(5).unwrap();
        assert!(DvrElem::from_ratio(z5, 1, 5).is_err());
        assert!(DvrDescriptor::integers(6).is_err());
    }

    #[test]
    fn unit_part_and_division() {
        let z7 = DvrDescriptor::integers(7).unwrap();
        let x = DvrElem::from_ratio(z7, 98, 5).unwrap();
        let u = x.unit_part();
        assert!(u.is_unit());
        assert_eq!(Ring::mul(&u, &Ring::pow(&DvrElem::uniformizer(z7), 2)), x);
        let p = DvrElem::uniformizer(z7);
        assert!(p.try_div(&x).is_none());
        assert_eq!(x.try_div(&p).unwrap().valuation(), Valuation::Finite(1));
    }

    #[test]
    fn residues() {
        let z5 = DvrDescriptor::integers(5).unwrap();
        let x = DvrElem::from_ratio(z5, 7, 3).unwrap();
        // 7/3 = 2 * 2 = 4 mod 5
        assert_eq!(x.residue().value(), 4);
        assert_eq!(DvrElem::lift(z5, Fp::new(4, 5)).residue().value(), 4);
    }
}
