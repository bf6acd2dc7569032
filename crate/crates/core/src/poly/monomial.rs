use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic comparison.
pub fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

pub fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    a.0.cmp(&b.0)
}

/// Monomial orders available to the Gröbner engine.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Block order eliminating the first `k` variables: grevlex on the first
    /// block, ties broken by grevlex on the rest.
    Elimination(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Elimination(k) => {
                let (a1, a2) = a.0.split_at(k);
                let (b1, b2) = b.0.split_at(k);
                grevlex(&Monomial::from_exponents(a1), &Monomial::from_exponents(b1))
                    .then_with(|| grevlex(&Monomial::from_exponents(a2), &Monomial::from_exponents(b2)))
            }
        }
    }

    /// A vector whose lexicographic order agrees with this monomial order.
    pub fn sort_key(&self, m: &Monomial) -> SmallVec<[i64; 12]> {
        fn grevlex_key(e: &[u32], out: &mut SmallVec<[i64; 12]>) {
            out.push(e.iter().map(|&x| x as i64).sum());
            out.extend(e.iter().rev().map(|&x| -(x as i64)));
        }
        let mut out = SmallVec::new();
        match *self {
            MonomialOrder::Grevlex => grevlex_key(&m.0, &mut out),
            MonomialOrder::Lex => out.extend(m.0.iter().map(|&x| x as i64)),
            MonomialOrder::Elimination(k) => {
                let (a, b) = m.0.split_at(k);
                grevlex_key(a, &mut out);
                grevlex_key(b, &mut out);
            }
        }
        out
    }
}
