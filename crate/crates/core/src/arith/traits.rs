use std::fmt::{Debug, Display};

use num_bigint::BigInt;

/// Coefficient ring of a polynomial.
///
/// Elements carry whatever runtime context they need (a prime modulus, a
/// valuation-ring descriptor), so constants are always built from a
/// [`Ring::Ctx`]. Binary operations on elements from different contexts are
/// a programming error and panic.
pub trait Ring: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self;

    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = Ring::add(self, other);
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = Ring::mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = Ring::mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse if `self` is a unit of the ring.
    fn try_inverse(&self) -> Option<Self>;

    /// `self / other` if the quotient lies in the ring.
    fn try_div(&self, other: &Self) -> Option<Self>;

    /// 0 for characteristic zero.
    fn characteristic(ctx: &Self::Ctx) -> u64;

    /// A unit `u` such that `self / u` is the canonical associate of `self`.
    /// Used to normalise denominators of rational functions.
    fn unit_part(&self) -> Self;

    /// A common divisor of the two elements (a gcd for the rings in this
    /// crate). Fields return one unless both arguments vanish.
    fn common_divisor(&self, other: &Self) -> Self;

    /// True when printing needs parentheses to be used as a factor.
    fn is_compound(&self) -> bool {
        false
    }

    /// True when the printed form starts with a minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.try_inverse().expect("inverse of zero")
    }

    fn div(&self, other: &Self) -> Self {
        Ring::mul(self, &other.inv())
    }
}
