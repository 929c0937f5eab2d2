//! Exact integer vectors, matrices, weight functions and integer affine maps.
//!
//! Everything here uses arbitrary-precision integers. Lattice algorithms live in
//! the [`smith`] (Smith normal form, Diophantine solving) and [`nonneg`]
//! (non-negative solutions, Hilbert bases) submodules.

pub mod inequalities;
pub mod nonneg;
pub mod smith;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

pub use smith::{snf_solve, DiophantineSolution, SmithForm};

/// A vector in `Z^k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVec(pub Vec<BigInt>);

impl IntVec {
    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        IntVec(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, c: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn concat(&self, other: &IntVec) -> IntVec {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        IntVec(v)
    }

    /// Sum of absolute values.
    pub fn l1(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Flips the sign so that the first nonzero entry is positive.
    pub fn sign_normalized(self) -> IntVec {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -self,
            _ => self,
        }
    }

    /// Entries as machine integers, when they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| x.to_i64()).collect()
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVec {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl Add<&IntVec> for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&IntVec> for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.into_iter().map(|x| -x).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x).collect())
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec::from_i64s(&v)
    }
}

impl From<Vec<BigInt>> for IntVec {
    fn from(v: Vec<BigInt>) -> Self {
        IntVec(v)
    }
}

/// JSON integers that fit in an `i64` are written as numbers, larger ones as
/// decimal strings.
pub(crate) mod bigint_json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => v.serialize(s),
            None => x.to_string().serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Small(v) => Ok(BigInt::from(v)),
            Repr::Big(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    pub(crate) struct Wrapped(#[serde(with = "self")] pub BigInt);
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for x in &self.0 {
            seq.serialize_element(&bigint_json::Wrapped(x.clone()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<bigint_json::Wrapped> = Vec::deserialize(d)?;
        Ok(IntVec(raw.into_iter().map(|w| w.0).collect()))
    }
}

/// A dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[IntVec], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.dim())?;
            data.extend(r.0.iter().cloned());
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let vecs: Vec<IntVec> = rows.iter().map(|r| IntVec::from_i64s(r)).collect();
        Self::from_rows(&vecs, cols).expect("ragged matrix literal")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVec], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_dim(rows, c.dim())?;
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn rows_vec(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &IntVec) -> Result<IntVec> {
        check_dim(self.cols, v.dim())?;
        Ok(IntVec(
            (0..self.rows)
                .map(|i| {
                    let row = &self.data[i * self.cols..(i + 1) * self.cols];
                    row.iter().zip(&v.0).map(|(a, b)| a * b).sum()
                })
                .collect(),
        ))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.rows) && self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).0).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows_vec().iter().map(IntVec::to_i64s).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Positive weights `‖e_i‖` on the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WeightFn(Vec<u64>);

impl WeightFn {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::Precondition("weights must be at least 1".into()));
        }
        Ok(WeightFn(weights))
    }

    pub fn unit(dim: usize) -> Self {
        WeightFn(vec![1; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }

    pub fn min_weight(&self) -> u64 {
        self.0.iter().copied().min().unwrap_or(1)
    }

    /// Weighted ℓ1 norm `Σ |z_i| ‖e_i‖`.
    pub fn norm(&self, z: &IntVec) -> Result<BigInt> {
        check_dim(self.dim(), z.dim())?;
        Ok(z.iter().zip(&self.0).map(|(x, &w)| x.abs() * BigInt::from(w)).sum())
    }
}

impl TryFrom<Vec<u64>> for WeightFn {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        WeightFn::new(v)
    }
}

impl From<WeightFn> for Vec<u64> {
    fn from(w: WeightFn) -> Vec<u64> {
        w.0
    }
}

/// Convenience wrapper for [`WeightFn::norm`].
pub fn weighted_norm(w: &WeightFn, z: &IntVec) -> Result<BigInt> {
    w.norm(z)
}

/// An integer affine map `z ↦ Mz + q` from `Z^source` to `Z^target`.
///
/// `matrix` has `target` rows and `source` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: IntMatrix,
    offset: IntVec,
}

impl AffineMap {
    pub fn new(matrix: IntMatrix, offset: IntVec) -> Result<Self> {
        check_dim(matrix.nrows(), offset.dim())?;
        Ok(AffineMap { matrix, offset })
    }

    pub fn linear(matrix: IntMatrix) -> Self {
        let offset = IntVec::zeros(matrix.nrows());
        AffineMap { matrix, offset }
    }

    pub fn identity(dim: usize) -> Self {
        Self::linear(IntMatrix::identity(dim))
    }

    pub fn translation(q: IntVec) -> Self {
        AffineMap { matrix: IntMatrix::identity(q.dim()), offset: q }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn offset(&self) -> &IntVec {
        &self.offset
    }

    pub fn apply(&self, z: &IntVec) -> Result<IntVec> {
        Ok(&self.matrix.mul_vec(z)? + &self.offset)
    }

    /// Applies only the linear part.
    pub fn apply_linear(&self, z: &IntVec) -> Result<IntVec> {
        self.matrix.mul_vec(z)
    }

    /// `self ∘ inner`: applies `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        check_dim(self.source_dim(), inner.target_dim())?;
        let matrix = self.matrix.mul(&inner.matrix)?;
        let offset = &self.matrix.mul_vec(&inner.offset)? + &self.offset;
        Ok(AffineMap { matrix, offset })
    }
}

pub fn affine_apply(a: &AffineMap, z: &IntVec) -> Result<IntVec> {
    a.apply(z)
}

pub fn affine_compose(outer: &AffineMap, inner: &AffineMap) -> Result<AffineMap> {
    outer.compose(inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> IntVec {
        IntVec::from_i64s(xs)
    }

    #[test]
    fn affine_apply_examples() {
        let id = AffineMap::identity(2);
        assert_eq!(id.apply(&v(&[5, -2])).unwrap(), v(&[5, -2]));

        let swap = AffineMap::linear(IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(swap.apply(&v(&[3, 7])).unwrap(), v(&[7, 3]));

        let dbl = AffineMap::new(IntMatrix::from_i64_rows(&[vec![2]]), v(&[1])).unwrap();
        assert_eq!(dbl.apply(&v(&[3])).unwrap(), v(&[7]));

        assert!(matches!(id.apply(&v(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn affine_compose_examples() {
        let a = AffineMap::new(IntMatrix::from_i64_rows(&[vec![2]]), v(&[1])).unwrap();
        let b = AffineMap::new(IntMatrix::from_i64_rows(&[vec![3]]), v(&[0])).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.matrix(), &IntMatrix::from_i64_rows(&[vec![6]]));
        assert_eq!(ab.offset(), &v(&[1]));

        assert_eq!(AffineMap::identity(1).compose(&a).unwrap(), a);

        let t1 = AffineMap::translation(v(&[1, 2]));
        let t2 = AffineMap::translation(v(&[-4, 5]));
        assert_eq!(t1.compose(&t2).unwrap(), AffineMap::translation(v(&[-3, 7])));

        assert!(AffineMap::identity(2).compose(&a).is_err());
    }

    #[test]
    fn weighted_norm_examples() {
        assert_eq!(WeightFn::unit(2).norm(&v(&[3, -4])).unwrap(), BigInt::from(7));
        let w = WeightFn::new(vec![2, 3]).unwrap();
        assert_eq!(w.norm(&v(&[1, 1])).unwrap(), BigInt::from(5));
        assert_eq!(w.norm(&v(&[0, 0])).unwrap(), BigInt::zero());
        assert!(WeightFn::new(vec![1, 0]).is_err());
        assert!(w.norm(&v(&[1])).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(18));
        let s = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.determinant().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn intvec_json_uses_plain_numbers() {
        let x = v(&[1, -2, 3]);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[1,-2,3]");
        let big: IntVec = serde_json::from_str(r#"[1, "123456789012345678901234567890"]"#).unwrap();
        assert_eq!(big[1].to_string(), "123456789012345678901234567890");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_map(src: usize, tgt: usize) -> impl Strategy<Value = AffineMap> {
            (
                proptest::collection::vec(-4i64..=4, src * tgt),
                proptest::collection::vec(-4i64..=4, tgt),
            )
                .prop_map(move |(m, q)| {
                    let rows: Vec<Vec<i64>> = m.chunks(src).map(|c| c.to_vec()).collect();
                    let mut mat = IntMatrix::zeros(tgt, src);
                    for (i, r) in rows.iter().enumerate() {
                        for (j, x) in r.iter().enumerate() {
                            mat[(i, j)] = BigInt::from(*x);
                        }
                    }
                    AffineMap::new(mat, IntVec::from_i64s(&q)).unwrap()
                })
        }

        proptest! {
            #[test]
            fn compose_is_associative(a in small_map(2, 3), b in small_map(3, 2), c in small_map(2, 3)) {
                let left = a.compose(&b.compose(&c).unwrap()).unwrap();
                let right = a.compose(&b).unwrap().compose(&c).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn norm_triangle_inequality(
                x in proptest::collection::vec(-50i64..=50, 3),
                y in proptest::collection::vec(-50i64..=50, 3),
                w in proptest::collection::vec(1u64..=5, 3),
            ) {
                let w = WeightFn::new(w).unwrap();
                let (x, y) = (IntVec::from_i64s(&x), IntVec::from_i64s(&y));
                let lhs = w.norm(&(&x + &y)).unwrap();
                prop_assert!(lhs <= w.norm(&x).unwrap() + w.norm(&y).unwrap());
            }
        }
    }
}
