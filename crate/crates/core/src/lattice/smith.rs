//! Smith normal form over `Z` and linear Diophantine solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, IntVec};
use crate::error::{check_dim, Result};

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Nonzero, positive invariant factors; `diagonal.len()` is the rank.
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (src, dst) = pick(m, t, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d -= q * s;
            }
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[t].clone();
                row[j] -= q * s;
            }
        }
    }
}

fn pick(m: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let vecs: Vec<IntVec> = rows.into_iter().map(IntVec).collect();
    IntMatrix::from_rows(&vecs, cols).expect("consistent shape")
}

/// Deterministic Smith normal form by row/column reduction, always pivoting on
/// the entry of least magnitude (first in row-major order on ties).
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut w = Work {
        a: (0..rows).map(|i| m.row(i).0).collect(),
        u: (0..rows).map(|i| IntMatrix::identity(rows).row(i).0).collect(),
        v: (0..cols).map(|i| IntMatrix::identity(cols).row(i).0).collect(),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&w.a, t, |_, _| true) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_axpy(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_axpy(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = min_entry(&w.a, t, |i, j| i == t || j == t)
                    .expect("pivot row/column still has a nonzero entry");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            let p = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            for x in w.a[t].iter_mut().chain(w.u[t].iter_mut()) {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..t).map(|i| w.a[i][i].clone()).collect();
    SmithForm { left: to_matrix(w.u, rows), right: to_matrix(w.v, cols), diagonal }
}

fn min_entry(
    a: &[Vec<BigInt>],
    t: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() || !allowed(i, j) {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Integer solution set of `A x = b`: `particular + span_Z(kernel_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub particular: IntVec,
    pub kernel_basis: Vec<IntVec>,
}

/// Solves `A x = b` over the integers. `Ok(None)` means infeasible.
pub fn snf_solve(a: &IntMatrix, b: &IntVec) -> Result<Option<DiophantineSolution>> {
    check_dim(a.nrows(), b.dim())?;
    let snf = smith_normal_form(a);
    let c = snf.left.mul_vec(b)?;
    let r = snf.rank();
    let mut y = IntVec::zeros(a.ncols());
    for i in 0..a.nrows() {
        if i < r {
            let (q, rem) = c[i].div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return Ok(None);
        }
    }
    let particular = snf.right.mul_vec(&y)?;
    let kernel: Vec<IntVec> = (r..a.ncols()).map(|j| snf.right.column(j)).collect();
    Ok(Some(DiophantineSolution { particular, kernel_basis: size_reduce(kernel) }))
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// A basis of the sublattice of `Z^dim` spanned by `gens`.
pub fn lattice_basis(gens: &[IntVec], dim: usize) -> Result<Vec<IntVec>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let g = IntMatrix::from_columns(gens, dim)?;
    let snf = smith_normal_form(&g);
    let gv = g.mul(&snf.right)?;
    Ok(size_reduce((0..snf.rank()).map(|j| gv.column(j)).collect()))
}

/// Column Hermite form of a lattice basis: each vector has a leading row
/// where all later vectors vanish, its entry there is positive, and earlier
/// vectors are reduced modulo it in that row. Coordinates whose row is a
/// pivot row with unit pivot then depend on a single basis vector.
pub fn hermite_basis(basis: &[IntVec]) -> Vec<IntVec> {
    let Some(first) = basis.first() else { return Vec::new() };
    let k = first.dim();
    let mut cols: Vec<IntVec> = basis.to_vec();
    let mut done = 0;
    for row in 0..k {
        if done == cols.len() {
            break;
        }
        // Euclid on the entries of this row among the remaining columns
        loop {
            let nonzero: Vec<usize> = (done..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&j| cols[j][row].abs()).expect("nonempty");
            for &j in &nonzero {
                if j != p {
                    let q = cols[j][row].div_floor(&cols[p][row]);
                    cols[j] = &cols[j] - &cols[p].scale(&q);
                }
            }
        }
        let Some(p) = (done..cols.len()).find(|&j| !cols[j][row].is_zero()) else { continue };
        cols.swap(done, p);
        if cols[done][row].is_negative() {
            cols[done] = -&cols[done];
        }
        for j in 0..done {
            let q = cols[j][row].div_floor(&cols[done][row]);
            if !q.is_zero() {
                cols[j] = &cols[j] - &cols[done].scale(&q);
            }
        }
        done += 1;
    }
    cols
}

/// Pairwise (Gauss-style) size reduction: keeps the lattice, shrinks entries.
pub fn size_reduce(mut basis: Vec<IntVec>) -> Vec<IntVec> {
    let norm2 = |v: &IntVec| v.dot(v);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm2(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let num = basis[i].dot(&basis[j]);
                // nearest integer to num / nj
                let twice: BigInt = &num * 2 + &nj;
                let q = twice.div_floor(&(&nj * 2));
                if q.is_zero() {
                    continue;
                }
                let cand = &basis[i] - &basis[j].scale(&q);
                if norm2(&cand) < norm2(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
    }
    basis.into_iter().map(IntVec::sign_normalized).collect()
}

/// Whether `v` lies in the `Z`-span of `gens`.
pub fn in_lattice(v: &IntVec, gens: &[IntVec]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(v.is_zero());
    }
    let m = IntMatrix::from_columns(gens, v.dim())?;
    Ok(snf_solve(&m, v)?.is_some())
}
