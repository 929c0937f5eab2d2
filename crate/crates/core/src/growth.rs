//! Weighted growth series of subsets of `Z^k` as exact rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{IntVec, WeightFn};
use crate::polyhedral::PolyhedralSet;
use crate::semilinear::{LinearSet, SemilinearSet};

/// `sigma[n]` = number of elements of weighted norm `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientTable {
    pub sigma: Vec<u64>,
}

impl CoefficientTable {
    pub fn new(sigma: Vec<u64>) -> Self {
        CoefficientTable { sigma }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Rows `n<TAB>sigma(n)`.
    pub fn to_tsv(&self) -> String {
        self.sigma.iter().enumerate().map(|(n, s)| format!("{n}\t{s}\n")).collect()
    }
}

/// Integer polynomials as ascending coefficient lists.
pub mod poly {
    use super::*;

    pub fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[BigInt]) -> usize {
        p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trim(out)
    }

    pub fn add(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
        let n = p.len().max(q.len());
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        trim((0..n).map(|i| get(p, i) + get(q, i)).collect())
    }

    pub fn monomial(d: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); d + 1];
        v[d] = BigInt::one();
        v
    }

    /// `1 - z^d`
    pub fn one_minus(d: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); d + 1];
        v[0] = BigInt::one();
        v[d] -= 1;
        trim(v)
    }

    pub fn from_i64s(xs: &[i64]) -> Vec<BigInt> {
        trim(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn rat(p: &[BigInt]) -> Vec<BigRational> {
        p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    fn rtrim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn rrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        let lead = b.last().expect("nonzero divisor");
        while r.len() >= b.len() && !r.is_empty() {
            let c = r.last().unwrap() / lead;
            let shift = r.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
            r.pop();
            r = rtrim(r);
        }
        r
    }

    fn rdiv(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        let lead = b.last().expect("nonzero divisor");
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let c = r.last().unwrap() / lead;
            let shift = r.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
            q[shift] = c;
            r.pop();
            r = rtrim(r);
        }
        q
    }

    /// Primitive integer multiple with positive constant term (or leading term
    /// if the constant term vanishes).
    fn primitive(p: &[BigRational]) -> (Vec<BigInt>, BigRational) {
        let den = p.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let ints: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
        // scale factor s with ints = s * p
        (trim(ints), BigRational::new(den, g))
    }

    /// `p/q` in lowest terms with integer coefficients and `q(0) > 0`.
    pub fn reduce(p: &[BigInt], q: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let (pr, qr) = (rtrim(rat(p)), rtrim(rat(q)));
        if pr.is_empty() {
            return (Vec::new(), vec![BigInt::one()]);
        }
        let (mut a, mut b) = (pr.clone(), qr.clone());
        while !b.is_empty() {
            let r = rrem(&a, &b);
            a = b;
            b = r;
        }
        let (p2, q2) = (rdiv(&pr, &a), rdiv(&qr, &a));
        let (qi, s) = primitive(&q2);
        let p2: Vec<BigRational> = p2.iter().map(|c| c * &s).collect();
        let pi: Vec<BigInt> = p2.iter().map(|c| c.to_integer()).collect();
        debug_assert!(p2.iter().all(|c| c.is_integer()));
        let sign = if qi.first().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
        (trim(pi.into_iter().map(|c| c * &sign).collect()), qi.into_iter().map(|c| c * &sign).collect())
    }

    /// First `n` Taylor coefficients of `p/q`; `None` unless all are integers.
    pub fn expand(p: &[BigInt], q: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
        let q0 = q.first().filter(|c| !c.is_zero())?;
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = p.get(i).cloned().unwrap_or_default();
            for j in 1..q.len().min(i + 1) {
                acc -= &q[j] * &out[i - j];
            }
            if !(&acc % q0).is_zero() {
                return None;
            }
            out.push(acc / q0);
        }
        Some(out)
    }

    /// Human-readable form, e.g. `1 + 2z - z^3`.
    pub fn format(p: &[BigInt]) -> String {
        let mut s = String::new();
        for (i, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let var = match i {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{i}"),
            };
            if var.is_empty() || !mag.is_one() {
                s.push_str(&mag.to_string());
            }
            s.push_str(&var);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// `numerator / denominator` with a checked prefix of Taylor coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSeries {
    #[serde(with = "bigvec")]
    pub numerator: Vec<BigInt>,
    #[serde(with = "bigvec")]
    pub denominator: Vec<BigInt>,
    pub verified_prefix: Vec<u64>,
}

mod bigvec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        IntVec(v.to_vec()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        Ok(IntVec::deserialize(d)?.0)
    }
}

impl GrowthSeries {
    /// Reduces `p/q` and checks it against `table`.
    pub fn new(p: &[BigInt], q: &[BigInt], table: &CoefficientTable) -> Result<Self> {
        let (numerator, denominator) = poly::reduce(p, q);
        let s = GrowthSeries { numerator, denominator, verified_prefix: table.sigma.clone() };
        if !s.matches(table) {
            return Err(Error::Precondition(format!("series {s} disagrees with its coefficient table")));
        }
        Ok(s)
    }

    pub fn expand(&self, n: usize) -> Option<Vec<BigInt>> {
        poly::expand(&self.numerator, &self.denominator, n)
    }

    pub fn matches(&self, table: &CoefficientTable) -> bool {
        self.expand(table.len())
            .is_some_and(|e| e.iter().zip(&table.sigma).all(|(a, b)| *a == BigInt::from(*b)))
    }

    /// Equality as rational functions.
    pub fn same_function(&self, p: &[BigInt], q: &[BigInt]) -> bool {
        poly::mul(&self.numerator, q) == poly::mul(p, &self.denominator)
    }

    pub fn numerator_degree(&self) -> usize {
        poly::degree(&self.numerator)
    }

    pub fn denominator_degree(&self) -> usize {
        poly::degree(&self.denominator)
    }

    /// The horizon `2·deg q + deg p + 5` up to which a series must be checked.
    pub fn required_horizon(&self) -> usize {
        2 * self.denominator_degree() + self.numerator_degree() + 5
    }
}

impl fmt::Display for GrowthSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", poly::format(&self.numerator), poly::format(&self.denominator))
    }
}

/// Sets whose growth can be enumerated.
#[derive(Clone, Copy)]
pub enum SetRef<'a> {
    Semilinear(&'a SemilinearSet),
    Polyhedral(&'a PolyhedralSet),
}

impl<'a> From<&'a SemilinearSet> for SetRef<'a> {
    fn from(s: &'a SemilinearSet) -> Self {
        SetRef::Semilinear(s)
    }
}

impl<'a> From<&'a PolyhedralSet> for SetRef<'a> {
    fn from(p: &'a PolyhedralSet) -> Self {
        SetRef::Polyhedral(p)
    }
}

/// Calls `f(z, ‖z‖)` for every `z` with weighted norm at most `n`.
pub fn for_each_in_ball(w: &WeightFn, n: u64, mut f: impl FnMut(&IntVec, u64)) {
    fn go(w: &[u64], i: usize, rem: u64, used: u64, z: &mut IntVec, f: &mut dyn FnMut(&IntVec, u64)) {
        if i == w.len() {
            f(z, used);
            return;
        }
        let r = (rem / w[i]) as i64;
        for x in -r..=r {
            let cost = x.unsigned_abs() * w[i];
            z[i] = BigInt::from(x);
            go(w, i + 1, rem - cost, used + cost, z, f);
        }
        z[i] = BigInt::zero();
    }
    let mut z = IntVec::zeros(w.dim());
    go(w.weights(), 0, n, 0, &mut z, &mut f);
}

/// `sigma(0..=n)` by exhaustive enumeration of the weighted ball.
pub fn growth_enumerate<'a>(set: impl Into<SetRef<'a>>, w: &WeightFn, n: usize) -> Result<CoefficientTable> {
    let owned;
    let p = match set.into() {
        SetRef::Polyhedral(p) => p,
        SetRef::Semilinear(s) => {
            owned = s.to_polyhedral();
            &owned
        }
    };
    check_dim(p.dim(), w.dim())?;
    let mut sigma = vec![0u64; n + 1];
    for_each_in_ball(w, n as u64, |z, norm| {
        if p.contains(z).expect("dimension checked") {
            sigma[norm as usize] += 1;
        }
    });
    Ok(CoefficientTable::new(sigma))
}

fn norm_u(w: &WeightFn, z: &IntVec) -> usize {
    w.norm(z).expect("dimension checked").to_usize().expect("norm fits in usize")
}

fn monotone_closed_form(l: &LinearSet, w: &WeightFn) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = poly::monomial(norm_u(w, &l.offset));
    let q = l.periods.iter().fold(vec![BigInt::one()], |acc, b| poly::mul(&acc, &poly::one_minus(norm_u(w, b))));
    (p, q)
}

/// `z^{‖a‖} / Π (1 - z^{‖b_i‖})` for a linear set inside one orthant with
/// independent periods.
pub fn growth_series_monotone_linear(l: &LinearSet, w: &WeightFn) -> Result<GrowthSeries> {
    check_dim(w.dim(), l.dim())?;
    if !l.has_independent_periods() {
        return Err(Error::Precondition("periods are linearly dependent".into()));
    }
    if !l.is_monotone() {
        return Err(Error::Precondition("offset and periods span several orthants".into()));
    }
    let (p, q) = monotone_closed_form(l, w);
    let (p, q) = poly::reduce(&p, &q);
    let horizon = 2 * poly::degree(&q) + poly::degree(&p) + 5;
    let table = growth_enumerate(&SemilinearSet::linear(l.clone()), w, horizon)?;
    GrowthSeries::new(&p, &q, &table)
}

/// Exact growth series of a semilinear set.
///
/// Closed forms of the monotone, independent components are summed and the
/// sum is accepted if it reproduces the enumerated coefficients; overlapping
/// components make it overcount, in which case the coefficients are fitted.
pub fn growth_series(s: &SemilinearSet, w: &WeightFn) -> Result<GrowthSeries> {
    check_dim(s.dim(), w.dim())?;
    let poly_form = s.to_polyhedral();
    let mut components = Vec::new();
    for (_, piece) in s.monotone_decompose() {
        components.extend(piece.decompose_linindep().components().iter().cloned());
    }
    let (mut p, mut q) = (Vec::new(), vec![BigInt::one()]);
    for c in &components {
        let (cp, cq) = monotone_closed_form(c, w);
        // p/q + cp/cq
        p = poly::add(&poly::mul(&p, &cq), &poly::mul(&cp, &q));
        q = poly::mul(&q, &cq);
        let (rp, rq) = poly::reduce(&p, &q);
        p = rp;
        q = rq;
    }
    let horizon = 2 * poly::degree(&q) + poly::degree(&p) + 5;
    let table = growth_enumerate(&poly_form, w, horizon)?;
    if let Ok(series) = GrowthSeries::new(&p, &q, &table) {
        return Ok(series);
    }

    let bound: usize = components
        .iter()
        .map(|c| norm_u(w, &c.offset) + c.periods.iter().map(|b| norm_u(w, b)).sum::<usize>())
        .sum::<usize>()
        .clamp(2, 48);
    let margin = 6;
    let mut deg = 2;
    loop {
        let d = deg.min(bound);
        let table = growth_enumerate(&poly_form, w, 2 * d + margin)?;
        match growth_fit(&table, d, margin) {
            Ok(mut series) => {
                let need = series.required_horizon();
                if need > table.len() {
                    let longer = growth_enumerate(&poly_form, w, need)?;
                    if !series.matches(&longer) {
                        return Err(Error::FitFailed { max_deg: d });
                    }
                    series.verified_prefix = longer.sigma;
                }
                return Ok(series);
            }
            Err(e) if d >= bound => return Err(e),
            Err(_) => deg *= 2,
        }
    }
}

/// Solves `A x = b` over `Q` by Gaussian elimination; free variables are set to
/// zero. `None` if inconsistent.
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>, n: usize) -> Option<Vec<BigRational>> {
    let m = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..n {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let t = &f * &a[row][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[row];
                b[r] -= t;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if (row..m).any(|r| !b[r].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// Smallest-degree `p/q` with `deg p, deg q ≤ max_deg` reproducing `table`.
///
/// Candidates are solved from the leading entries; every entry of the table
/// (at least `margin` of them unused by the solve) must then match.
pub fn growth_fit(table: &CoefficientTable, max_deg: usize, margin: usize) -> Result<GrowthSeries> {
    if table.len() < 2 * max_deg + margin {
        return Err(Error::Precondition(format!(
            "table of length {} is shorter than 2·{max_deg} + {margin}",
            table.len()
        )));
    }
    let sigma: Vec<BigRational> = table.sigma.iter().map(|&s| BigRational::from_integer(BigInt::from(s))).collect();
    let at = |i: isize| if i < 0 { BigRational::zero() } else { sigma[i as usize].clone() };
    for total in 0..=2 * max_deg {
        for dq in 0..=total.min(max_deg) {
            let dp = total - dq;
            if dp > max_deg || dp + dq + 1 + margin > table.len() {
                continue;
            }
            // q_0 = 1; for n in dp+1..=dp+dq: σ_n + Σ_{i=1}^{dq} q_i σ_{n-i} = 0
            let rows: Vec<Vec<BigRational>> =
                (dp + 1..=dp + dq).map(|n| (1..=dq).map(|i| at(n as isize - i as isize)).collect()).collect();
            let rhs: Vec<BigRational> = (dp + 1..=dp + dq).map(|n| -at(n as isize)).collect();
            let Some(qs) = solve_rational(rows, rhs, dq) else { continue };
            let mut q = vec![BigRational::one()];
            q.extend(qs);
            let p: Vec<BigRational> = (0..=dp)
                .map(|n| (0..=dq.min(n)).map(|i| &q[i] * at(n as isize - i as isize)).sum())
                .collect();
            // clear denominators
            let den = q.iter().chain(&p).fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
            let scale = BigRational::from_integer(den);
            let qi: Vec<BigInt> = q.iter().map(|c| (c * &scale).to_integer()).collect();
            let pi: Vec<BigInt> = p.iter().map(|c| (c * &scale).to_integer()).collect();
            if let Ok(series) = GrowthSeries::new(&pi, &qi, table) {
                return Ok(series);
            }
        }
    }
    Err(Error::FitFailed { max_deg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::ElementaryRegion;

    fn v(xs: &[i64]) -> IntVec {
        IntVec::from_i64s(xs)
    }

    fn p(xs: &[i64]) -> Vec<BigInt> {
        poly::from_i64s(xs)
    }

    fn lin(a: &[i64], ps: &[&[i64]]) -> LinearSet {
        LinearSet::new(v(a), ps.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let z1 = SemilinearSet::full(1);
        assert_eq!(growth_enumerate(&z1, &WeightFn::unit(1), 3).unwrap().sigma, vec![1, 2, 2, 2]);
        let z2 = SemilinearSet::full(2);
        assert_eq!(growth_enumerate(&z2, &WeightFn::unit(2), 3).unwrap().sigma, vec![1, 4, 8, 12]);
        let pos = PolyhedralSet::basic(1, vec![ElementaryRegion::at_least(v(&[1]), 1)]).unwrap();
        assert_eq!(growth_enumerate(&pos, &WeightFn::unit(1), 4).unwrap().sigma, vec![0, 1, 1, 1, 1]);
        let weighted = WeightFn::new(vec![2]).unwrap();
        assert_eq!(growth_enumerate(&z1, &weighted, 4).unwrap().sigma, vec![1, 0, 2, 0, 2]);
    }

    #[test]
    fn monotone_linear_examples() {
        let s = growth_series_monotone_linear(&lin(&[1], &[&[1]]), &WeightFn::unit(1)).unwrap();
        assert!(s.same_function(&p(&[0, 1]), &p(&[1, -1])));
        let s = growth_series_monotone_linear(&lin(&[0, 0], &[&[1, 0], &[0, 1]]), &WeightFn::unit(2)).unwrap();
        assert!(s.same_function(&p(&[1]), &p(&[1, -2, 1])));
        let e = s.expand(16).unwrap();
        assert!(e.iter().enumerate().all(|(n, c)| *c == BigInt::from(n + 1)));
        let s = growth_series_monotone_linear(&lin(&[0], &[&[2]]), &WeightFn::unit(1)).unwrap();
        assert!(s.same_function(&p(&[1]), &p(&[1, 0, -1])));

        let mixed = lin(&[0], &[&[1], &[-1]]);
        assert!(growth_series_monotone_linear(&mixed, &WeightFn::unit(1)).is_err());
        let dep = lin(&[0], &[&[1], &[2]]);
        assert!(growth_series_monotone_linear(&dep, &WeightFn::unit(1)).is_err());
    }

    #[test]
    fn series_examples() {
        let s = growth_series(&SemilinearSet::full(1), &WeightFn::unit(1)).unwrap();
        assert!(s.same_function(&p(&[1, 1]), &p(&[1, -1])));
        assert_eq!(s.to_string(), "(1 + z) / (1 - z)");
        let s = growth_series(&SemilinearSet::full(2), &WeightFn::unit(2)).unwrap();
        assert!(s.same_function(&p(&[1, 2, 1]), &p(&[1, -2, 1])));
        let evens = SemilinearSet::linear(lin(&[0], &[&[2], &[-2]]));
        let s = growth_series(&evens, &WeightFn::unit(1)).unwrap();
        assert!(s.same_function(&p(&[1, 0, 1]), &p(&[1, 0, -1])));
    }

    #[test]
    fn overlapping_components_counted_once() {
        let s = SemilinearSet::new(1, vec![lin(&[0], &[&[1]]), lin(&[2], &[&[1]]), lin(&[-3], &[])]).unwrap();
        let g = growth_series(&s, &WeightFn::unit(1)).unwrap();
        assert!(g.same_function(&p(&[1, 0, 0, 1, -1]), &p(&[1, -1])));
        assert!(g.verified_prefix.len() >= g.required_horizon());
    }

    #[test]
    fn fit_examples() {
        let mut t = vec![1u64];
        t.extend(std::iter::repeat_n(2, 19));
        let s = growth_fit(&CoefficientTable::new(t), 4, 5).unwrap();
        assert!(s.same_function(&p(&[1, 1]), &p(&[1, -1])));

        let mut t = vec![1u64];
        t.extend(std::iter::repeat_n(0, 15));
        let s = growth_fit(&CoefficientTable::new(t), 4, 5).unwrap();
        assert_eq!((s.numerator.clone(), s.denominator.clone()), (p(&[1]), p(&[1])));

        let mut t = vec![1u64, 3];
        t.extend(std::iter::repeat_n(4, 18));
        let s = growth_fit(&CoefficientTable::new(t), 4, 5).unwrap();
        assert!(s.same_function(&p(&[1, 2, 1]), &p(&[1, -1])));

        let fib = CoefficientTable::new(vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        let s = growth_fit(&fib, 2, 5).unwrap();
        assert!(s.same_function(&p(&[1]), &p(&[1, -1, -1])));

        let squares = CoefficientTable::new((0..12).map(|n| n * n).collect());
        assert_eq!(growth_fit(&squares, 1, 5), Err(Error::FitFailed { max_deg: 1 }));
        assert!(matches!(growth_fit(&squares, 8, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn formatting_and_tsv() {
        assert_eq!(poly::format(&p(&[1, 2, 1])), "1 + 2z + z^2");
        assert_eq!(poly::format(&p(&[0, -1, 0, 3])), "-z + 3z^3");
        assert_eq!(poly::format(&[]), "0");
        assert_eq!(CoefficientTable::new(vec![1, 2]).to_tsv(), "0\t1\n1\t2\n");
    }

    #[test]
    fn reduce_cancels_common_factors() {
        // (1 - z^2) / (1 - z)^2 = (1 + z) / (1 - z)
        let (a, b) = poly::reduce(&p(&[1, 0, -1]), &p(&[1, -2, 1]));
        assert_eq!((a, b), (p(&[1, 1]), p(&[1, -1])));
        let (a, b) = poly::reduce(&p(&[-2, 0, 2]), &p(&[-2]));
        assert_eq!((a, b), (p(&[1, 0, -1]), p(&[1])));
    }

    #[test]
    fn series_is_additive_over_disjoint_unions() {
        let a = SemilinearSet::linear(lin(&[0, 0], &[&[1, 0], &[0, 1]]));
        let b = SemilinearSet::linear(lin(&[-1, 0], &[&[-1, 0]]));
        let w = WeightFn::unit(2);
        let (sa, sb) = (growth_series(&a, &w).unwrap(), growth_series(&b, &w).unwrap());
        let su = growth_series(&a.union(&b).unwrap(), &w).unwrap();
        let n = 25;
        let (ea, eb, eu) = (sa.expand(n).unwrap(), sb.expand(n).unwrap(), su.expand(n).unwrap());
        for i in 0..n {
            assert_eq!(&ea[i] + &eb[i], eu[i]);
        }
    }
}
