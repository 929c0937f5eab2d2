//! Non-negative integer solutions of linear Diophantine systems.
//!
//! The solution set of `A x = b, x ∈ N^n` is `⋃_m (m + H*)` where `m` ranges
//! over the minimal inhomogeneous solutions and `H` is the Hilbert basis of
//! the homogeneous system. Both are computed together by the Contejean–Devie
//! completion procedure on the extended system `[A | -b] (x, x₀) = 0` with the
//! extra coordinate bounded by one.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{IntMatrix, IntVec};
use crate::error::{check_dim, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NonnegSolutions {
    /// Minimal solutions of `A x = b`.
    pub minimal: Vec<IntVec>,
    /// Minimal nonzero solutions of `A x = 0`.
    pub hilbert: Vec<IntVec>,
}

struct Search<'a> {
    cols: Vec<Vec<BigInt>>,
    n: usize,
    stop_at_first: bool,
    found: &'a mut Vec<Vec<u32>>,
}

impl Search<'_> {
    fn dominated(&self, y: &[u32]) -> bool {
        self.found.iter().any(|s| s.iter().zip(y).all(|(a, b)| a <= b))
    }

    fn run(&mut self) {
        let total = self.n + 1;
        let rows = self.cols.first().map_or(0, Vec::len);
        let mut level: Vec<(Vec<u32>, Vec<BigInt>)> = (0..total)
            .map(|j| {
                let mut x = vec![0u32; total];
                x[j] = 1;
                (x, self.cols[j].clone())
            })
            .collect();
        while !level.is_empty() {
            let mut rest = Vec::new();
            for (x, ax) in level {
                if ax.iter().all(Zero::is_zero) {
                    let inhom = x[self.n] == 1;
                    self.found.push(x);
                    if inhom && self.stop_at_first {
                        return;
                    }
                } else {
                    rest.push((x, ax));
                }
            }
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for (x, ax) in &rest {
                for j in 0..total {
                    if j == self.n && x[j] >= 1 {
                        continue;
                    }
                    let dot: BigInt = (0..rows).map(|i| &ax[i] * &self.cols[j][i]).sum();
                    if !dot.is_negative() {
                        continue;
                    }
                    let mut y = x.clone();
                    y[j] += 1;
                    if self.dominated(&y) || !seen.insert(y.clone()) {
                        continue;
                    }
                    let ay: Vec<BigInt> = ax.iter().zip(&self.cols[j]).map(|(a, c)| a + c).collect();
                    next.push((y, ay));
                }
            }
            level = next;
        }
    }
}

fn extended_columns(a: &IntMatrix, b: &IntVec) -> Vec<Vec<BigInt>> {
    let mut cols: Vec<Vec<BigInt>> = a.columns().into_iter().map(|c| c.0).collect();
    cols.push(b.0.iter().map(|x| -x).collect());
    cols
}

fn to_intvec(x: &[u32]) -> IntVec {
    IntVec(x.iter().map(|&c| BigInt::from(c)).collect())
}

/// All minimal solutions of `A x = b` and the Hilbert basis of `A x = 0`, `x ≥ 0`.
pub fn nonneg_solve(a: &IntMatrix, b: &IntVec) -> Result<NonnegSolutions> {
    check_dim(a.nrows(), b.dim())?;
    let n = a.ncols();
    let mut found = Vec::new();
    Search { cols: extended_columns(a, b), n, stop_at_first: false, found: &mut found }.run();
    let mut out = NonnegSolutions::default();
    for x in found {
        let v = to_intvec(&x[..n]);
        if x[n] == 1 {
            out.minimal.push(v);
        } else {
            out.hilbert.push(v);
        }
    }
    out.minimal.sort();
    out.hilbert.sort();
    Ok(out)
}

/// Whether `A x = b` has a solution in `N^n`.
pub fn nonneg_feasible(a: &IntMatrix, b: &IntVec) -> Result<bool> {
    check_dim(a.nrows(), b.dim())?;
    let n = a.ncols();
    let mut found = Vec::new();
    Search { cols: extended_columns(a, b), n, stop_at_first: true, found: &mut found }.run();
    Ok(found.iter().any(|x| x[n] == 1))
}

/// Whether `v` is a non-negative integer combination of `gens`.
pub fn in_monoid(v: &IntVec, gens: &[IntVec]) -> Result<bool> {
    if v.is_zero() {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let m = IntMatrix::from_columns(gens, v.dim())?;
    nonneg_feasible(&m, v)
}
