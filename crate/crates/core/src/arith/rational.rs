use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::traits::{Field, Ring};

/// Exact rationals.
pub type Rational = BigRational;

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}

    fn zero(_: &()) -> Self {
        Zero::zero()
    }

    fn one(_: &()) -> Self {
        One::one()
    }

    fn from_bigint(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn try_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }

    fn characteristic(_: &()) -> u64 {
        0
    }

    fn unit_part(&self) -> Self {
        if Zero::is_zero(self) {
            One::one()
        } else {
            self.clone()
        }
    }

    fn common_divisor(&self, other: &Self) -> Self {
        if Zero::is_zero(self) && Zero::is_zero(other) {
            Zero::zero()
        } else {
            One::one()
        }
    }

    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }
}

impl Field for BigRational {}

/// `p`-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_valuation() {
        assert_eq!(int_valuation(&BigInt::from(50), 5), 2);
        assert_eq!(int_valuation(&BigInt::from(-49), 7), 2);
        assert_eq!(int_valuation(&BigInt::from(3), 5), 0);
    }
}
