use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::traits::{Field, Ring};

/// Element of the prime field `F_p`, stored as its least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Self {
        Fp {
            value: value.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed prime fields F_{} and F_{}", self.p, other.p);
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Returns true if `n` is prime (trial division; moduli here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(p as i128));
    Some(e.x.rem_euclid(p as i128) as u64)
}

impl Ring for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.p
    }

    fn zero(p: &u64) -> Self {
        Fp { value: 0, p: *p }
    }

    fn one(p: &u64) -> Self {
        Fp { value: 1 % *p, p: *p }
    }

    fn from_bigint(p: &u64, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(*p));
        Fp {
            value: r.to_u64().expect("residue fits"),
            p: *p,
        }
    }

    fn from_i64(p: &u64, n: i64) -> Self {
        Fp::new(n, *p)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn is_one(&self) -> bool {
        self.value == 1
    }

    fn add(&self, other: &Self) -> Self {
        self.check(other);
        let s = self.value + other.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Fp {
            value: if self.value >= other.value {
                self.value - other.value
            } else {
                self.value + self.p - other.value
            },
            p: self.p,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        self.check(other);
        Fp {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        inv_mod(self.value, self.p).map(|value| Fp { value, p: self.p })
    }

    fn try_div(&self, other: &Self) -> Option<Self> {
        other.try_inverse().map(|i| Ring::mul(self, &i))
    }

    fn characteristic(p: &u64) -> u64 {
        *p
    }

    fn unit_part(&self) -> Self {
        if self.value == 0 {
            Self::one(&self.p)
        } else {
            *self
        }
    }

    fn common_divisor(&self, other: &Self) -> Self {
        if self.value == 0 && other.value == 0 {
            *self
        } else {
            Self::one(&self.p)
        }
    }
}

impl Field for Fp {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Fp::new(3, 7);
        let b = Fp::new(5, 7);
        assert_eq!(Ring::add(&a, &b).value(), 1);
        assert_eq!(Ring::sub(&a, &b).value(), 5);
        assert_eq!(Ring::mul(&a, &b).value(), 1);
        assert_eq!(a.inv(), b);
        assert_eq!(Fp::new(-1, 7).value(), 6);
        assert!(Fp::new(14, 7).try_inverse().is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(7) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
