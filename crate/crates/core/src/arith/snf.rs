//! Smith normal form over a discrete valuation ring.

use super::dvr::{DvrElem, Valuation};
use super::traits::Ring;
use crate::error::ArithError;

/// Elementary divisors, recorded by valuation, and the rank over `Frac(R)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SnfResult {
    pub divisor_valuations: Vec<u32>,
    pub rank: usize,
}

/// Diagonalises `m` by unimodular row and column operations.
///
/// The pivot at each step is an entry of minimal valuation in the remaining
/// block; ties go to the first one in row-major order. A minimal-valuation
/// pivot divides every entry of its row and column, so elimination never
/// leaves `R`.
pub fn smith_normal_form(m: &[Vec<DvrElem>]) -> SnfResult {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<DvrElem>> = m.to_vec();
    let mut vals = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, Valuation)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                let v = x.valuation();
                if !v.is_infinite() && best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..rows {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].try_div(&pivot).expect("pivot has minimal valuation");
            for j in k..cols {
                let t = Ring::mul(&f, &a[k][j]);
                a[i][j] = Ring::sub(&a[i][j], &t);
            }
        }
        for j in (k + 1)..cols {
            if a[k][j].is_zero() {
                continue;
            }
            let f = a[k][j].try_div(&pivot).expect("pivot has minimal valuation");
            for i in k..rows {
                let t = Ring::mul(&f, &a[i][k]);
                a[i][j] = Ring::sub(&a[i][j], &t);
            }
        }
        vals.push(pv.finite().unwrap() as u32);
    }
    vals.sort_unstable();
    SnfResult {
        rank: vals.len(),
        divisor_valuations: vals,
    }
}

/// Length of the torsion part of `R^n / rowspace(m)`.
pub fn torsion_length(m: &[Vec<DvrElem>], expected_rank: usize) -> Result<u32, ArithError> {
    let snf = smith_normal_form(m);
    if snf.rank < expected_rank {
        return Err(ArithError::RankDeficient {
            rank: snf.rank,
            expected: expected_rank,
        });
    }
    Ok(snf.divisor_valuations.iter().sum())
}
