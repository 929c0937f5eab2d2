//! Integer points of `{x ∈ R^n : x ≥ 0, u·x ≥ r for each row}`.
//!
//! The polyhedron is pointed, so it is the convex hull of its vertices plus
//! the cone spanned by its extreme rays. Every irreducible lattice point of
//! the recession cone and every minimal point of the polyhedron lies within
//! `n` fractional ray steps of the vertex hull, which bounds a box that is
//! scanned directly. This works in `n` dimensions, without slack variables.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::nonneg::NonnegSolutions;
use super::IntVec;

type Row = (IntVec, BigInt);

/// Minimal points and the Hilbert basis of the recession monoid.
pub fn nonneg_inequalities(rows: &[Row], n: usize) -> NonnegSolutions {
    let mut all: Vec<Row> = rows.to_vec();
    all.extend((0..n).map(|j| (IntVec::unit(n, j), BigInt::zero())));
    let vertices = vertices(&all, n);
    if vertices.is_empty() {
        return NonnegSolutions::default();
    }
    let homogeneous: Vec<Row> = all.iter().map(|(u, _)| (u.clone(), BigInt::zero())).collect();
    let rays = extreme_rays(&homogeneous, n);

    // Largest total of n ray coordinates, per coordinate.
    let reach: Vec<BigInt> = (0..n)
        .map(|c| {
            let mut col: Vec<BigInt> = rays.iter().map(|g| g[c].clone()).collect();
            col.sort_by(|a, b| b.cmp(a));
            col.into_iter().take(n).sum()
        })
        .collect();

    let mut cands = Vec::new();
    scan(&vec![BigInt::zero(); n], &reach, &mut |x| {
        if !x.is_zero() && satisfies(&homogeneous, x) {
            cands.push(x.clone());
        }
    });
    cands.sort_by_key(IntVec::l1);
    let mut hilbert: Vec<IntVec> = Vec::new();
    for x in cands {
        if !hilbert.iter().any(|h| satisfies(&homogeneous, &(&x - h))) {
            hilbert.push(x);
        }
    }

    let lo: Vec<BigInt> = (0..n).map(|c| vertices.iter().map(|v| v[c].floor().to_integer()).min().expect("a vertex")).collect();
    let hi: Vec<BigInt> = (0..n)
        .map(|c| vertices.iter().map(|v| v[c].floor().to_integer()).max().expect("a vertex") + &reach[c])
        .collect();
    let mut minimal = Vec::new();
    scan(&lo, &hi, &mut |y| {
        if satisfies(&all, y) && !hilbert.iter().any(|h| satisfies(&all, &(y - h))) {
            minimal.push(y.clone());
        }
    });
    minimal.sort();
    hilbert.sort();
    NonnegSolutions { minimal, hilbert }
}

fn satisfies(rows: &[Row], x: &IntVec) -> bool {
    rows.iter().all(|(u, r)| &u.dot(x) >= r)
}

fn scan(lo: &[BigInt], hi: &[BigInt], f: &mut impl FnMut(&IntVec)) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut x = IntVec(lo.to_vec());
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == lo.len() {
                return;
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i].clone();
            i += 1;
        }
    }
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Reduced row echelon form of `m`, returning the pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..m[i].len() {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Calls `f` on every `size`-subset of `0..n`.
fn subsets(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < n - size + p) else { return };
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn vertices(rows: &[Row], n: usize) -> Vec<Vec<BigRational>> {
    let mut out = BTreeSet::new();
    subsets(rows.len(), n, &mut |s| {
        let mut m: Vec<Vec<BigRational>> = s
            .iter()
            .map(|&i| rows[i].0.iter().map(rat).chain(std::iter::once(rat(&rows[i].1))).collect())
            .collect();
        if rref(&mut m, n).len() < n {
            return;
        }
        let v: Vec<BigRational> = m.iter().map(|row| row[n].clone()).collect();
        let ok = rows.iter().all(|(u, r)| u.iter().zip(&v).map(|(a, x)| rat(a) * x).sum::<BigRational>() >= rat(r));
        if ok {
            out.insert(v);
        }
    });
    out.into_iter().collect()
}

/// Primitive integer generators of the extreme rays of the pointed cone
/// `{u·x ≥ 0}`.
fn extreme_rays(rows: &[Row], n: usize) -> Vec<IntVec> {
    let mut out = BTreeSet::new();
    subsets(rows.len(), n - 1, &mut |s| {
        let mut m: Vec<Vec<BigRational>> = s.iter().map(|&i| rows[i].0.iter().map(rat).collect()).collect();
        let pivots = rref(&mut m, n);
        if pivots.len() != n - 1 {
            return;
        }
        let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
        let mut d = vec![BigRational::zero(); n];
        d[free] = BigRational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            d[p] = -row[free].clone();
        }
        let den = d.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let v = IntVec(d.iter().map(|x| (x * rat(&den)).to_integer()).collect());
        let g = v.content();
        let v = IntVec(v.0.iter().map(|x| x / &g).collect());
        let signs: Vec<BigInt> = rows.iter().map(|(u, _)| u.dot(&v)).collect();
        if signs.iter().all(|x| !x.is_negative()) {
            out.insert(v);
        } else if signs.iter().all(|x| !x.is_positive()) {
            out.insert(-&v);
        }
    });
    out.into_iter().collect()
}
