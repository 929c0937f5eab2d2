//! Polyhedral subsets of `Z^k`: finite unions of finite intersections of
//! elementary regions `u·z = a`, `u·z ≡ a (mod b)` and `u·z > a`.
//!
//! Boolean operations and affine preimages are purely syntactic. Equality of
//! two polyhedral sets is never decided here; compare memberships on a box or
//! convert to semilinear form.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{bigint_json, AffineMap, IntVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ElementaryRegion {
    /// `u·z = a`
    Equation {
        u: IntVec,
        #[serde(with = "bigint_json")]
        a: BigInt,
    },
    /// `u·z ≡ a (mod b)`, `b ≥ 1`
    Congruence {
        u: IntVec,
        #[serde(with = "bigint_json")]
        a: BigInt,
        #[serde(with = "bigint_json")]
        b: BigInt,
    },
    /// `u·z > a`
    Inequality {
        u: IntVec,
        #[serde(with = "bigint_json")]
        a: BigInt,
    },
}

/// Outcome of normalizing a region: it may collapse to a constant.
enum Normalized {
    Always,
    Never,
    Region(ElementaryRegion),
}

impl ElementaryRegion {
    pub fn equation(u: IntVec, a: impl Into<BigInt>) -> Self {
        ElementaryRegion::Equation { u, a: a.into() }
    }

    pub fn congruence(u: IntVec, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        ElementaryRegion::Congruence { u, a: a.into(), b: b.into() }
    }

    pub fn inequality(u: IntVec, a: impl Into<BigInt>) -> Self {
        ElementaryRegion::Inequality { u, a: a.into() }
    }

    /// `u·z ≥ a`, encoded as `u·z > a - 1`.
    pub fn at_least(u: IntVec, a: impl Into<BigInt>) -> Self {
        ElementaryRegion::Inequality { u, a: a.into() - 1 }
    }

    pub fn normal(&self) -> &IntVec {
        match self {
            ElementaryRegion::Equation { u, .. }
            | ElementaryRegion::Congruence { u, .. }
            | ElementaryRegion::Inequality { u, .. } => u,
        }
    }

    pub fn dim(&self) -> usize {
        self.normal().dim()
    }

    fn validate(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.dim())?;
        if let ElementaryRegion::Congruence { b, .. } = self {
            if *b < BigInt::one() {
                return Err(Error::Precondition(format!("congruence modulus {b} must be >= 1")));
            }
        }
        Ok(())
    }

    pub fn contains(&self, z: &IntVec) -> bool {
        match self {
            ElementaryRegion::Equation { u, a } => u.dot(z) == *a,
            ElementaryRegion::Congruence { u, a, b } => (u.dot(z) - a).is_multiple_of(b),
            ElementaryRegion::Inequality { u, a } => u.dot(z) > *a,
        }
    }

    /// Divides out the content of `u`, reduces residues into `[0, b)` and
    /// detects regions that are constant.
    fn normalize(self) -> Normalized {
        match self {
            ElementaryRegion::Equation { u, a } => {
                let g = u.content();
                if g.is_zero() {
                    return if a.is_zero() { Normalized::Always } else { Normalized::Never };
                }
                if !a.is_multiple_of(&g) {
                    return Normalized::Never;
                }
                let (u, a) = if u.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
                    (-u, -a)
                } else {
                    (u, a)
                };
                Normalized::Region(ElementaryRegion::Equation {
                    u: IntVec(u.0.into_iter().map(|x| x / &g).collect()),
                    a: a / &g,
                })
            }
            ElementaryRegion::Congruence { u, a, b } => {
                let u = IntVec(u.0.into_iter().map(|x| x.mod_floor(&b)).collect());
                let g = u.content().gcd(&b);
                if !a.is_multiple_of(&g) {
                    return Normalized::Never;
                }
                let b = &b / &g;
                if b.is_one() {
                    return Normalized::Always;
                }
                let u = IntVec(u.0.into_iter().map(|x| x / &g).collect());
                let a = (a / &g).mod_floor(&b);
                Normalized::Region(ElementaryRegion::Congruence { u, a, b })
            }
            ElementaryRegion::Inequality { u, a } => {
                let g = u.content();
                if g.is_zero() {
                    return if a.is_negative() { Normalized::Always } else { Normalized::Never };
                }
                Normalized::Region(ElementaryRegion::Inequality {
                    u: IntVec(u.0.into_iter().map(|x| x / &g).collect()),
                    a: a.div_floor(&g),
                })
            }
        }
    }

    /// The complement as a union of regions.
    pub fn negate(&self) -> Vec<ElementaryRegion> {
        match self {
            ElementaryRegion::Equation { u, a } => vec![
                ElementaryRegion::Inequality { u: u.clone(), a: a.clone() },
                ElementaryRegion::Inequality { u: -u, a: -a },
            ],
            // u·z ≤ a  ⇔  -u·z > -a - 1
            ElementaryRegion::Inequality { u, a } => {
                vec![ElementaryRegion::Inequality { u: -u, a: -a - 1 }]
            }
            ElementaryRegion::Congruence { u, a, b } => {
                let b_small = b.to_u64().expect("congruence modulus fits in u64");
                let a_red = a.mod_floor(b);
                (0..b_small)
                    .map(BigInt::from)
                    .filter(|r| *r != a_red)
                    .map(|r| ElementaryRegion::Congruence { u: u.clone(), a: r, b: b.clone() })
                    .collect()
            }
        }
    }

    /// `{z : A(z) ∈ region}`.
    fn preimage(&self, map: &AffineMap) -> ElementaryRegion {
        let u = self.normal();
        let new_u = map.matrix().transpose().mul_vec(u).expect("dimension checked by caller");
        let shift = u.dot(map.offset());
        match self {
            ElementaryRegion::Equation { a, .. } => ElementaryRegion::Equation { u: new_u, a: a - shift },
            ElementaryRegion::Inequality { a, .. } => {
                ElementaryRegion::Inequality { u: new_u, a: a - shift }
            }
            ElementaryRegion::Congruence { a, b, .. } => {
                ElementaryRegion::Congruence { u: new_u, a: a - shift, b: b.clone() }
            }
        }
    }

    fn padded(&self, before: usize, after: usize) -> ElementaryRegion {
        let pad = |u: &IntVec| {
            let mut v = vec![BigInt::zero(); before];
            v.extend(u.0.iter().cloned());
            v.extend(std::iter::repeat_n(BigInt::zero(), after));
            IntVec(v)
        };
        match self {
            ElementaryRegion::Equation { u, a } => ElementaryRegion::Equation { u: pad(u), a: a.clone() },
            ElementaryRegion::Inequality { u, a } => {
                ElementaryRegion::Inequality { u: pad(u), a: a.clone() }
            }
            ElementaryRegion::Congruence { u, a, b } => {
                ElementaryRegion::Congruence { u: pad(u), a: a.clone(), b: b.clone() }
            }
        }
    }

    /// Largest coefficient magnitude among `u` and `a`.
    pub fn magnitude(&self) -> BigInt {
        let a = match self {
            ElementaryRegion::Equation { a, .. } | ElementaryRegion::Inequality { a, .. } => a.abs(),
            ElementaryRegion::Congruence { a, b, .. } => a.abs().max(b.clone()),
        };
        a.max(self.normal().max_abs())
    }
}

/// A conjunction of elementary regions; the empty conjunction is all of `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct BasicPolyhedral {
    pub regions: Vec<ElementaryRegion>,
}

impl BasicPolyhedral {
    pub fn new(regions: Vec<ElementaryRegion>) -> Self {
        BasicPolyhedral { regions }
    }

    pub fn contains(&self, z: &IntVec) -> bool {
        self.regions.iter().all(|r| r.contains(z))
    }

    /// Normalized, sorted and deduplicated; `None` if trivially empty.
    fn simplified(self) -> Option<BasicPolyhedral> {
        let mut set = BTreeSet::new();
        for r in self.regions {
            match r.normalize() {
                Normalized::Always => {}
                Normalized::Never => return None,
                Normalized::Region(r) => {
                    set.insert(r);
                }
            }
        }
        // u·z = a together with u·z = a' for a ≠ a' is empty.
        let eqs: Vec<_> = set
            .iter()
            .filter_map(|r| match r {
                ElementaryRegion::Equation { u, a } => Some((u, a)),
                _ => None,
            })
            .collect();
        for (i, (u, a)) in eqs.iter().enumerate() {
            if eqs[i + 1..].iter().any(|(v, c)| u == v && a != c) {
                return None;
            }
        }
        Some(BasicPolyhedral { regions: set.into_iter().collect() })
    }
}

/// A finite union of basic polyhedral sets in `Z^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyhedralSet {
    dim: usize,
    basics: Vec<BasicPolyhedral>,
}

/// Boolean and product operations accepted by [`poly_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Union,
    Intersect,
    Complement,
    Product,
}

impl PolyhedralSet {
    pub fn new(dim: usize, basics: Vec<BasicPolyhedral>) -> Result<Self> {
        for b in &basics {
            for r in &b.regions {
                r.validate(dim)?;
            }
        }
        Ok(PolyhedralSet { dim, basics })
    }

    pub fn empty(dim: usize) -> Self {
        PolyhedralSet { dim, basics: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        PolyhedralSet { dim, basics: vec![BasicPolyhedral::default()] }
    }

    /// A single basic set.
    pub fn basic(dim: usize, regions: Vec<ElementaryRegion>) -> Result<Self> {
        Self::new(dim, vec![BasicPolyhedral::new(regions)])
    }

    /// The orthant `Q_I`: `z_i ≥ 0` for `i ∈ I`, `z_i < 0` otherwise.
    pub fn orthant(dim: usize, nonneg: &[bool]) -> Self {
        let regions = (0..dim)
            .map(|i| {
                let e = IntVec::unit(dim, i);
                if nonneg[i] {
                    ElementaryRegion::at_least(e, 0)
                } else {
                    ElementaryRegion::inequality(-e, 0)
                }
            })
            .collect();
        PolyhedralSet { dim, basics: vec![BasicPolyhedral::new(regions)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basics(&self) -> &[BasicPolyhedral] {
        &self.basics
    }

    /// True when the union has no basic sets (which denotes the empty set).
    pub fn is_syntactically_empty(&self) -> bool {
        self.basics.is_empty()
    }

    pub fn contains(&self, z: &IntVec) -> Result<bool> {
        check_dim(self.dim, z.dim())?;
        Ok(self.basics.iter().any(|b| b.contains(z)))
    }

    /// Drops trivially empty basics and duplicate regions/basics.
    pub fn simplified(&self) -> PolyhedralSet {
        let mut seen = BTreeSet::new();
        for b in self.basics.iter().cloned() {
            if let Some(b) = b.simplified() {
                seen.insert(b);
            }
        }
        // The full set absorbs everything else.
        if seen.iter().any(|b| b.regions.is_empty()) {
            return PolyhedralSet::full(self.dim);
        }
        // A basic whose regions include all regions of another is redundant.
        let all: Vec<BasicPolyhedral> = seen.into_iter().collect();
        let basics = all
            .iter()
            .enumerate()
            .filter(|(i, b)| {
                !all.iter().enumerate().any(|(j, c)| {
                    j != *i
                        && c.regions.iter().all(|r| b.regions.binary_search(r).is_ok())
                        && (c.regions.len() < b.regions.len() || j < *i)
                })
            })
            .map(|(_, b)| b.clone())
            .collect();
        PolyhedralSet { dim: self.dim, basics }
    }

    pub fn union(&self, other: &PolyhedralSet) -> Result<PolyhedralSet> {
        check_dim(self.dim, other.dim)?;
        let mut basics = self.basics.clone();
        basics.extend(other.basics.iter().cloned());
        Ok(PolyhedralSet { dim: self.dim, basics }.simplified())
    }

    pub fn intersect(&self, other: &PolyhedralSet) -> Result<PolyhedralSet> {
        check_dim(self.dim, other.dim)?;
        let mut basics = Vec::with_capacity(self.basics.len() * other.basics.len());
        for p in &self.basics {
            for q in &other.basics {
                let mut regions = p.regions.clone();
                regions.extend(q.regions.iter().cloned());
                basics.push(BasicPolyhedral { regions });
            }
        }
        Ok(PolyhedralSet { dim: self.dim, basics }.simplified())
    }

    pub fn complement(&self) -> PolyhedralSet {
        let mut acc = PolyhedralSet::full(self.dim);
        for b in &self.basics {
            let negated = PolyhedralSet {
                dim: self.dim,
                basics: b
                    .regions
                    .iter()
                    .flat_map(ElementaryRegion::negate)
                    .map(|r| BasicPolyhedral { regions: vec![r] })
                    .collect(),
            }
            .simplified();
            acc = acc.intersect(&negated).expect("same dimension");
            if acc.basics.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn difference(&self, other: &PolyhedralSet) -> Result<PolyhedralSet> {
        check_dim(self.dim, other.dim)?;
        self.intersect(&other.complement())
    }

    /// `self × other ⊆ Z^{k+l}`.
    pub fn product(&self, other: &PolyhedralSet) -> PolyhedralSet {
        let (k, l) = (self.dim, other.dim);
        let mut basics = Vec::new();
        for p in &self.basics {
            for q in &other.basics {
                let mut regions: Vec<_> = p.regions.iter().map(|r| r.padded(0, l)).collect();
                regions.extend(q.regions.iter().map(|r| r.padded(k, 0)));
                basics.push(BasicPolyhedral { regions });
            }
        }
        PolyhedralSet { dim: k + l, basics }.simplified()
    }

    /// `A^{-1}(self)`.
    pub fn preimage(&self, map: &AffineMap) -> Result<PolyhedralSet> {
        check_dim(self.dim, map.target_dim())?;
        let basics = self
            .basics
            .iter()
            .map(|b| BasicPolyhedral { regions: b.regions.iter().map(|r| r.preimage(map)).collect() })
            .collect();
        Ok(PolyhedralSet { dim: map.source_dim(), basics }.simplified())
    }

    /// Translate: `{z + t : z ∈ self}`.
    pub fn translate(&self, t: &IntVec) -> Result<PolyhedralSet> {
        check_dim(self.dim, t.dim())?;
        self.preimage(&AffineMap::translation(-t))
    }

    /// All points in the box `[lo, hi]`, in lexicographic order.
    pub fn enumerate_box(&self, lo: &IntVec, hi: &IntVec) -> Result<Vec<IntVec>> {
        check_dim(self.dim, lo.dim())?;
        check_dim(self.dim, hi.dim())?;
        let mut out = Vec::new();
        for_each_in_box(lo, hi, |z| {
            if self.basics.iter().any(|b| b.contains(z)) {
                out.push(z.clone());
            }
        });
        Ok(out)
    }

    /// Largest coefficient magnitude over all regions.
    pub fn magnitude(&self) -> BigInt {
        self.basics
            .iter()
            .flat_map(|b| b.regions.iter().map(ElementaryRegion::magnitude))
            .max()
            .unwrap_or_default()
    }
}

/// Visits every integer point of the box `[lo, hi]` in lexicographic order.
pub fn for_each_in_box(lo: &IntVec, hi: &IntVec, mut f: impl FnMut(&IntVec)) {
    let k = lo.dim();
    if (0..k).any(|i| lo[i] > hi[i]) {
        return;
    }
    let mut z = lo.clone();
    loop {
        f(&z);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if z[i] < hi[i] {
                z[i] += 1;
                break;
            }
            z[i] = lo[i].clone();
        }
    }
}

/// The symmetric box `[-r, r]^dim`.
pub fn cube(dim: usize, r: i64) -> (IntVec, IntVec) {
    (IntVec(vec![BigInt::from(-r); dim]), IntVec(vec![BigInt::from(r); dim]))
}

pub fn poly_contains(p: &PolyhedralSet, z: &IntVec) -> Result<bool> {
    p.contains(z)
}

pub fn poly_combine(op: PolyOp, p: &PolyhedralSet, q: Option<&PolyhedralSet>) -> Result<PolyhedralSet> {
    let need = |name| q.ok_or(Error::MissingOperand(name));
    match op {
        PolyOp::Union => p.union(need("union")?),
        PolyOp::Intersect => p.intersect(need("intersect")?),
        PolyOp::Product => Ok(p.product(need("product")?)),
        PolyOp::Complement => Ok(p.complement()),
    }
}

pub fn poly_preimage(map: &AffineMap, q: &PolyhedralSet) -> Result<PolyhedralSet> {
    q.preimage(map)
}

pub fn poly_enumerate_box(p: &PolyhedralSet, lo: &IntVec, hi: &IntVec) -> Result<Vec<IntVec>> {
    p.enumerate_box(lo, hi)
}
