//! Linear and semilinear subsets of `Z^k`.
//!
//! A linear set `a + B*` is `{a + Σ n_i b_i : n_i ∈ N}`; a semilinear set is a
//! finite union of them. Conversions to and from [`PolyhedralSet`] are exact,
//! which makes intersection and orthant splitting available here.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::inequalities::nonneg_inequalities;
use crate::lattice::nonneg::in_monoid;
use crate::lattice::smith::{hermite_basis, lattice_basis, rank, smith_normal_form};
use crate::lattice::{snf_solve, AffineMap, IntMatrix, IntVec};
use crate::polyhedral::{cube, for_each_in_box, BasicPolyhedral, ElementaryRegion, PolyhedralSet};

/// `offset + periods*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearSet {
    pub offset: IntVec,
    #[serde(default)]
    pub periods: Vec<IntVec>,
}

impl LinearSet {
    pub fn new(offset: IntVec, periods: Vec<IntVec>) -> Result<Self> {
        for p in &periods {
            check_dim(offset.dim(), p.dim())?;
            if p.is_zero() {
                return Err(Error::Precondition("periods must be nonzero".into()));
            }
        }
        Ok(LinearSet { offset, periods })
    }

    pub fn point(offset: IntVec) -> Self {
        LinearSet { offset, periods: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    fn period_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.periods, self.dim()).expect("dimension-consistent periods")
    }

    pub fn has_independent_periods(&self) -> bool {
        self.periods.is_empty() || rank(&self.period_matrix()) == self.periods.len()
    }

    pub fn contains(&self, z: &IntVec) -> Result<bool> {
        check_dim(self.dim(), z.dim())?;
        let d = z - &self.offset;
        if self.periods.is_empty() {
            return Ok(d.is_zero());
        }
        Ok(match &*self.plan() {
            Plan::Saturated(b) => b.contains(z),
            Plan::Parts(parts) => parts.iter().any(|c| c.contains_independent(z)),
        })
    }

    fn contains_independent(&self, z: &IntVec) -> bool {
        let d = z - &self.offset;
        if self.periods.is_empty() {
            return d.is_zero();
        }
        // the integer preimage is unique when it exists
        snf_solve(&self.period_matrix(), &d)
            .expect("dimensions agree")
            .is_some_and(|s| s.particular.iter().all(|x| !x.is_negative()))
    }

    /// Duplicate periods removed, periods sorted.
    fn canonical(mut self) -> LinearSet {
        self.periods.sort();
        self.periods.dedup();
        self
    }

    pub fn affine_image(&self, map: &AffineMap) -> Result<LinearSet> {
        check_dim(map.source_dim(), self.dim())?;
        let offset = map.apply(&self.offset)?;
        let mut periods = Vec::new();
        for p in &self.periods {
            let q = map.apply_linear(p)?;
            if !q.is_zero() {
                periods.push(q);
            }
        }
        Ok(LinearSet { offset, periods })
    }

    /// Splits into linear sets whose periods are linearly independent.
    ///
    /// Given an integer relation `Σ_{i∈P} λ_i b_i = Σ_{j∈N} μ_j b_j` with `λ, μ > 0`,
    /// any representation with `n_i ≥ λ_i` for every `i ∈ P` can be rewritten
    /// with a smaller `Σ_P n_i`. So some `i ∈ P` has `n_i < λ_i`, and the set is
    /// `⋃_{i∈P} ⋃_{r<λ_i} (a + r b_i + (B ∖ b_i)*)`.
    pub fn decompose_linindep(&self) -> Vec<LinearSet> {
        if self.has_independent_periods() {
            return vec![self.clone()];
        }
        let mut out = BTreeSet::new();
        decompose_into(self.clone().canonical(), &mut BTreeSet::new(), &mut out);
        out.into_iter().collect()
    }

    /// `self ∩ Q_I` for a set with independent periods: the `y ∈ N^m` with
    /// `a + B y` in the orthant.
    fn orthant_part(&self, q: &OrthantIndex) -> Vec<LinearSet> {
        let k = self.dim();
        let m = self.periods.len();
        if m == 0 {
            return if q.contains(&self.offset) { vec![self.clone()] } else { Vec::new() };
        }
        let rows: Vec<(IntVec, BigInt)> = (0..k)
            .map(|i| {
                // x_i ≥ 0, or -x_i ≥ 1
                let (sign, need) = if q.0.contains(&i) { (BigInt::one(), BigInt::zero()) } else { (-BigInt::one(), BigInt::one()) };
                let row = IntVec(self.periods.iter().map(|b| &b[i] * &sign).collect());
                let rhs = need - &self.offset[i] * &sign;
                (row, rhs)
            })
            .collect();
        let sol = nonneg_inequalities(&rows, m);
        let lift = |y: &IntVec| {
            (0..m).filter(|&j| !y[j].is_zero()).fold(IntVec::zeros(k), |z, j| &z + &self.periods[j].scale(&y[j]))
        };
        let periods: BTreeSet<IntVec> = sol.hilbert.iter().map(lift).filter(|p| !p.is_zero()).collect();
        let periods: Vec<IntVec> = periods.into_iter().collect();
        sol.minimal
            .iter()
            .map(|y| {
                let l = LinearSet { offset: &self.offset + &lift(y), periods: periods.clone() }.canonical();
                mark_saturated(&l);
                l
            })
            .collect()
    }

    fn to_basic(&self) -> BasicPolyhedral {
        let m = self.periods.len();
        let facets: Vec<IntVec> = (0..m).map(|j| IntVec::unit(m, j)).collect();
        cone_basic(&self.offset, &self.periods, &facets)
    }

    /// How membership and the polyhedral form are computed; memoized.
    fn plan(&self) -> Arc<Plan> {
        if let Some(p) = plan_cache().lock().expect("plan cache").get(self) {
            return p.clone();
        }
        let plan = Arc::new(if self.has_independent_periods() {
            Plan::Parts(vec![self.clone()])
        } else if let Some(b) = self.saturated_basic() {
            Plan::Saturated(b)
        } else {
            Plan::Parts(self.decompose_linindep())
        });
        remember_plan(self.clone(), plan.clone());
        plan
    }

    /// When `B* = cone(B) ∩ ZB`, the set is `a + (cone ∩ lattice)`: a single
    /// basic polyhedral set cut out by the facets of the cone.
    fn saturated_basic(&self) -> Option<BasicPolyhedral> {
        let k = self.dim();
        let lattice = lattice_basis(&self.periods, k).expect("dimensions agree");
        let r = lattice.len();
        let lm = IntMatrix::from_columns(&lattice, k).expect("dimensions agree");
        let coords: Vec<IntVec> = self
            .periods
            .iter()
            .map(|b| snf_solve(&lm, b).expect("dimensions agree").expect("period in its own lattice").particular)
            .collect();
        let facets = cone_facets(&coords, r);
        if known_saturated().lock().expect("saturation cache").contains(self) {
            return Some(cone_basic(&self.offset, &lattice, &facets));
        }
        // every lattice point of the cone must be a combination of the periods
        let cone = BasicPolyhedral::new(facets.iter().map(|f| ElementaryRegion::at_least(f.clone(), 0)).collect());
        for piece in basic_to_linear(r, &cone) {
            let gens = std::iter::once(&piece.offset).chain(&piece.periods);
            for g in gens {
                if !in_monoid(g, &coords).expect("dimensions agree") {
                    return None;
                }
            }
        }
        Some(cone_basic(&self.offset, &lattice, &facets))
    }

    /// Whether the offset and all periods lie in one closed orthant, so that
    /// every coordinate keeps a constant sign along the set.
    pub fn is_monotone(&self) -> bool {
        (0..self.dim()).all(|i| {
            let signs = || std::iter::once(&self.offset).chain(&self.periods).map(|v| v[i].sign());
            !(signs().any(|s| s == num_bigint::Sign::Plus) && signs().any(|s| s == num_bigint::Sign::Minus))
        })
    }

    /// Largest coefficient magnitude of the offset and periods.
    pub fn magnitude(&self) -> BigInt {
        self.periods.iter().map(IntVec::max_abs).fold(self.offset.max_abs(), BigInt::max)
    }
}

fn decompose_into(l: LinearSet, seen: &mut BTreeSet<LinearSet>, out: &mut BTreeSet<LinearSet>) {
    if !seen.insert(l.clone()) {
        return;
    }
    if l.has_independent_periods() {
        out.insert(l);
        return;
    }
    let m = l.period_matrix();
    let kernel = snf_solve(&m, &IntVec::zeros(l.dim())).expect("dimensions agree").expect("homogeneous");
    // Among kernel vectors and both orientations pick the relation with the
    // fewest resulting pieces.
    let best = kernel
        .kernel_basis
        .iter()
        .flat_map(|v| [v.clone(), -v])
        .filter(|v| v.iter().any(Signed::is_positive))
        .min_by_key(|v| v.iter().filter(|x| x.is_positive()).sum::<BigInt>());
    let Some(rel) = best else {
        out.insert(l);
        return;
    };
    for (i, lam) in rel.iter().enumerate() {
        if !lam.is_positive() {
            continue;
        }
        let rest: Vec<IntVec> = l.periods.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        let mut r = BigInt::zero();
        while &r < lam {
            let offset = &l.offset + &l.periods[i].scale(&r);
            decompose_into(LinearSet { offset, periods: rest.clone() }.canonical(), seen, out);
            r += 1;
        }
    }
}

/// Entries above this many make the plan cache start over.
const PLAN_CACHE_LIMIT: usize = 4096;

fn plan_cache() -> &'static Mutex<HashMap<LinearSet, Arc<Plan>>> {
    static PLANS: OnceLock<Mutex<HashMap<LinearSet, Arc<Plan>>>> = OnceLock::new();
    PLANS.get_or_init(Default::default)
}

fn remember_plan(l: LinearSet, plan: Arc<Plan>) {
    let mut map = plan_cache().lock().expect("plan cache");
    if map.len() >= PLAN_CACHE_LIMIT {
        map.clear();
    }
    map.insert(l, plan);
}

fn known_saturated() -> &'static Mutex<HashSet<LinearSet>> {
    static KNOWN: OnceLock<Mutex<HashSet<LinearSet>>> = OnceLock::new();
    KNOWN.get_or_init(Default::default)
}

/// Records that `l` is saturated, so its plan can skip the monoid check.
fn mark_saturated(l: &LinearSet) {
    if l.has_independent_periods() {
        return;
    }
    let mut set = known_saturated().lock().expect("saturation cache");
    if set.len() >= PLAN_CACHE_LIMIT {
        set.clear();
    }
    set.insert(l.clone());
}

enum Plan {
    /// Linear sets with independent periods whose union is the set.
    Parts(Vec<LinearSet>),
    Saturated(BasicPolyhedral),
}

/// `a + {L c : c ∈ Z^r, f·c ≥ 0 for f in facets}` for independent columns `L`.
fn cone_basic(a: &IntVec, lattice: &[IntVec], facets: &[IntVec]) -> BasicPolyhedral {
    let k = a.dim();
    let r = lattice.len();
    if r == 0 {
        return BasicPolyhedral::new((0..k).map(|i| ElementaryRegion::equation(IntVec::unit(k, i), a[i].clone())).collect());
    }
    // U L V = D; z - a = L c  ⇔  w = U(z - a) has w_i ≡ 0 (mod d_i) for i < r,
    // w_i = 0 otherwise, and then c = V (w_i / d_i).
    let snf = smith_normal_form(&IntMatrix::from_columns(lattice, k).expect("dimensions agree"));
    let u = snf.left.rows_vec();
    let lcm = snf.diagonal.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let mut regions = Vec::new();
    for (i, row) in u.iter().enumerate() {
        let ra = row.dot(a);
        if i >= r {
            regions.push(ElementaryRegion::equation(row.clone(), ra));
        } else if !snf.diagonal[i].is_one() {
            regions.push(ElementaryRegion::congruence(row.clone(), ra, snf.diagonal[i].clone()));
        }
    }
    for f in facets {
        // lcm · f·c as an integer functional of z - a
        let mut n = IntVec::zeros(k);
        for i in 0..r {
            let fv: BigInt = (0..r).map(|j| &f[j] * &snf.right[(j, i)]).sum();
            let c = fv * (&lcm / &snf.diagonal[i]);
            if !c.is_zero() {
                n = &n + &u[i].scale(&c);
            }
        }
        let g = n.content().max(BigInt::one());
        let n = IntVec(n.0.iter().map(|x| x / &g).collect());
        let na = n.dot(a);
        regions.push(ElementaryRegion::at_least(n, na));
    }
    BasicPolyhedral::new(regions)
}

/// Primitive inner normals of the facets of the full-dimensional cone in
/// `R^r` spanned by `gens`. Every facet contains `r - 1` independent
/// generators, so candidates come from those subsets.
fn cone_facets(gens: &[IntVec], r: usize) -> Vec<IntVec> {
    let mut out = BTreeSet::new();
    let mut keep = |n: IntVec| {
        let signs: Vec<i8> = gens.iter().map(|g| g.dot(&n).signum().to_i8().unwrap_or(0)).collect();
        if signs.iter().all(|&x| x >= 0) {
            out.insert(n);
        } else if signs.iter().all(|&x| x <= 0) {
            out.insert(-&n);
        }
    };
    if r == 1 {
        keep(IntVec::unit(1, 0));
        return out.into_iter().collect();
    }
    let mut idx: Vec<usize> = (0..r - 1).collect();
    if gens.len() < r - 1 {
        return Vec::new();
    }
    loop {
        let rows: Vec<IntVec> = idx.iter().map(|&i| gens[i].clone()).collect();
        let m = IntMatrix::from_rows(&rows, r).expect("dimensions agree");
        let sol = snf_solve(&m, &IntVec::zeros(r - 1)).expect("dimensions agree").expect("homogeneous");
        if let [n] = sol.kernel_basis.as_slice() {
            let c = n.content();
            keep(IntVec(n.0.iter().map(|x| x / &c).collect()));
        }
        // next combination in lexicographic order
        let Some(pos) = (0..r - 1).rev().find(|&p| idx[p] < gens.len() - (r - 1) + p) else { break };
        idx[pos] += 1;
        for q in pos + 1..r - 1 {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out.into_iter().collect()
}

impl fmt::Display for LinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {{", self.offset)?;
        for (i, p) in self.periods.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}*")
    }
}

/// A finite union of linear sets in `Z^dim`; no components means empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemilinearSet {
    dim: usize,
    components: Vec<LinearSet>,
}

/// An orthant `Q_I`: coordinates in `I` are `≥ 0`, the others `< 0`.
/// Indices are zero-based; `Display` prints them one-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrthantIndex(pub BTreeSet<usize>);

impl OrthantIndex {
    /// All `2^dim` orthants, ordered by bitmask.
    pub fn all(dim: usize) -> Vec<OrthantIndex> {
        (0..1u64 << dim).map(|mask| OrthantIndex((0..dim).filter(|i| mask >> i & 1 == 1).collect())).collect()
    }

    pub fn of_point(z: &IntVec) -> OrthantIndex {
        OrthantIndex((0..z.dim()).filter(|&i| !z[i].is_negative()).collect())
    }

    pub fn mask(&self, dim: usize) -> Vec<bool> {
        (0..dim).map(|i| self.0.contains(&i)).collect()
    }

    pub fn contains(&self, z: &IntVec) -> bool {
        (0..z.dim()).all(|i| self.0.contains(&i) != z[i].is_negative())
    }

    pub fn polyhedral(&self, dim: usize) -> PolyhedralSet {
        PolyhedralSet::orthant(dim, &self.mask(dim))
    }
}

impl fmt::Display for OrthantIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

impl SemilinearSet {
    pub fn new(dim: usize, components: Vec<LinearSet>) -> Result<Self> {
        for c in &components {
            check_dim(dim, c.dim())?;
            LinearSet::new(c.offset.clone(), c.periods.clone())?;
        }
        Ok(SemilinearSet { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        SemilinearSet { dim, components: Vec::new() }
    }

    pub fn point(z: IntVec) -> Self {
        SemilinearSet { dim: z.dim(), components: vec![LinearSet::point(z)] }
    }

    pub fn linear(l: LinearSet) -> Self {
        SemilinearSet { dim: l.dim(), components: vec![l] }
    }

    /// All of `Z^dim`.
    pub fn full(dim: usize) -> Self {
        let periods = (0..dim).flat_map(|i| [IntVec::unit(dim, i), -IntVec::unit(dim, i)]).collect();
        SemilinearSet { dim, components: vec![LinearSet { offset: IntVec::zeros(dim), periods }] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    /// Exact: every linear set contains its offset.
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, z: &IntVec) -> Result<bool> {
        check_dim(self.dim, z.dim())?;
        for c in &self.components {
            if c.contains(z)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Components with sorted, deduplicated periods, deduplicated and sorted.
    pub fn simplified(&self) -> SemilinearSet {
        let set: BTreeSet<LinearSet> = self.components.iter().cloned().map(LinearSet::canonical).collect();
        SemilinearSet { dim: self.dim, components: set.into_iter().collect() }
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.dim, other.dim)?;
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Ok(SemilinearSet { dim: self.dim, components }.simplified())
    }

    /// Minkowski sum `{x + y}`.
    pub fn sum(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.dim, other.dim)?;
        let mut components = Vec::new();
        for p in &self.components {
            for q in &other.components {
                let mut periods = p.periods.clone();
                periods.extend(q.periods.iter().cloned());
                components.push(LinearSet { offset: &p.offset + &q.offset, periods });
            }
        }
        Ok(SemilinearSet { dim: self.dim, components }.simplified())
    }

    /// The submonoid generated. Points `p_j` collapse into one linear set
    /// `{p_j}*`; every other component contributes `{0} ∪ (a + ({a} ∪ B)*)`,
    /// and the factors are summed.
    pub fn star(&self) -> SemilinearSet {
        let zero = IntVec::zeros(self.dim);
        let points: Vec<IntVec> = self
            .components
            .iter()
            .filter(|c| c.periods.is_empty() && !c.offset.is_zero())
            .map(|c| c.offset.clone())
            .collect();
        let mut acc = SemilinearSet::linear(LinearSet { offset: zero.clone(), periods: points });
        for c in self.components.iter().filter(|c| !c.periods.is_empty()) {
            let mut periods = c.periods.clone();
            if !c.offset.is_zero() {
                periods.push(c.offset.clone());
            }
            let factor = SemilinearSet {
                dim: self.dim,
                components: vec![LinearSet::point(zero.clone()), LinearSet { offset: c.offset.clone(), periods }],
            };
            acc = acc.sum(&factor).expect("same dimension").pruned();
        }
        acc.simplified()
    }

    /// Drops components contained in another one. Containment is checked by
    /// the sufficient test `a ∈ L'` and `B ⊆ B'*`.
    pub fn pruned(&self) -> SemilinearSet {
        let comps = self.simplified().components;
        let covers = |big: &LinearSet, small: &LinearSet| -> bool {
            big.contains(&small.offset).unwrap_or(false)
                && small.periods.iter().all(|b| in_monoid(b, &big.periods).unwrap_or(false))
        };
        let mut keep: Vec<LinearSet> = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let dominated = comps.iter().enumerate().any(|(j, d)| {
                // ties between mutually covering components keep the earlier one
                j != i && covers(d, c) && (j < i || !covers(c, d))
            });
            if !dominated {
                keep.push(c.clone());
            }
        }
        SemilinearSet { dim: self.dim, components: keep }
    }

    pub fn affine_image(&self, map: &AffineMap) -> Result<SemilinearSet> {
        check_dim(map.source_dim(), self.dim)?;
        let components = self.components.iter().map(|c| c.affine_image(map)).collect::<Result<_>>()?;
        Ok(SemilinearSet { dim: map.target_dim(), components })
    }

    pub fn translate(&self, t: &IntVec) -> Result<SemilinearSet> {
        check_dim(self.dim, t.dim())?;
        self.affine_image(&AffineMap::translation(t.clone()))
    }

    pub fn decompose_linindep(&self) -> SemilinearSet {
        let set: BTreeSet<LinearSet> = self.components.iter().flat_map(LinearSet::decompose_linindep).collect();
        SemilinearSet { dim: self.dim, components: set.into_iter().collect() }
    }

    pub fn to_polyhedral(&self) -> PolyhedralSet {
        let basics = self
            .components
            .iter()
            .flat_map(|c| match &*c.plan() {
                Plan::Saturated(b) => vec![b.clone()],
                Plan::Parts(parts) => parts.iter().map(LinearSet::to_basic).collect(),
            })
            .collect();
        PolyhedralSet::new(self.dim, basics).expect("regions built in the right dimension").simplified()
    }

    pub fn from_polyhedral(p: &PolyhedralSet) -> SemilinearSet {
        let mut set = BTreeSet::new();
        for b in p.simplified().basics() {
            for l in basic_to_linear(p.dim(), b) {
                set.insert(l.canonical());
            }
        }
        SemilinearSet { dim: p.dim(), components: set.into_iter().collect() }
    }

    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(SemilinearSet::empty(self.dim));
        }
        let p = self.to_polyhedral().intersect(&other.to_polyhedral())?;
        Ok(SemilinearSet::from_polyhedral(&p))
    }

    /// Nonempty pieces `S ∩ Q_I`, one per orthant, each a semilinear set
    /// contained in its orthant. The pieces are disjoint since the orthants are.
    pub fn monotone_decompose(&self) -> Vec<(OrthantIndex, SemilinearSet)> {
        if self.is_empty() {
            return Vec::new();
        }
        // Each component with independent periods is the injective image of
        // N^m under y ↦ a + B y, so S ∩ Q_I is cut out in parameter space,
        // where the constraints only involve entries of B.
        let parts: Vec<Arc<Plan>> = self.components.iter().map(LinearSet::plan).collect();
        OrthantIndex::all(self.dim)
            .into_iter()
            .filter_map(|q| {
                let mut set = BTreeSet::new();
                for piece in &parts {
                    match &**piece {
                        Plan::Saturated(b) => {
                            let cut = PolyhedralSet::new(self.dim, vec![b.clone()])
                                .and_then(|p| p.intersect(&q.polyhedral(self.dim)))
                                .expect("same dimension");
                            set.extend(SemilinearSet::from_polyhedral(&cut).components);
                        }
                        Plan::Parts(ls) => {
                            for l in ls {
                                set.extend(l.orthant_part(&q).into_iter().map(LinearSet::canonical));
                            }
                        }
                    }
                }
                let s = SemilinearSet { dim: self.dim, components: set.into_iter().collect() };
                (!s.is_empty()).then_some((q, s))
            })
            .collect()
    }

    pub fn magnitude(&self) -> BigInt {
        self.components.iter().map(LinearSet::magnitude).max().unwrap_or_default()
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "({c})")?;
        }
        Ok(())
    }
}

/// Linear sets whose union is the basic polyhedral set `b ⊆ Z^k`.
///
/// Equations and congruences cut out a coset `z0 + N Z^s` with `N` injective.
/// Inequalities become `H y ≥ r` on the coordinates `y`. Each sign orthant of
/// the constrained coordinates is solved as a pointed polyhedron, and
/// unconstrained coordinates contribute `±` periods.
fn basic_to_linear(k: usize, b: &BasicPolyhedral) -> Vec<LinearSet> {
    let mut eqs = Vec::new();
    let mut congs = Vec::new();
    let mut ineqs = Vec::new();
    for r in &b.regions {
        match r {
            ElementaryRegion::Equation { u, a } => eqs.push((u.clone(), a.clone())),
            ElementaryRegion::Congruence { u, a, b } => congs.push((u.clone(), a.clone(), b.clone())),
            ElementaryRegion::Inequality { u, a } => ineqs.push((u.clone(), a.clone())),
        }
    }

    let (z0, basis) = if eqs.is_empty() && congs.is_empty() {
        (IntVec::zeros(k), (0..k).map(|i| IntVec::unit(k, i)).collect::<Vec<_>>())
    } else {
        let nc = congs.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (u, a) in &eqs {
            rows.push(u.concat(&IntVec::zeros(nc)));
            rhs.push(a.clone());
        }
        for (i, (u, a, m)) in congs.iter().enumerate() {
            let mut t = IntVec::zeros(nc);
            t[i] = -m.clone();
            rows.push(u.concat(&t));
            rhs.push(a.clone());
        }
        let a = IntMatrix::from_rows(&rows, k + nc).expect("region dimensions agree");
        let Some(sol) = snf_solve(&a, &IntVec(rhs)).expect("dimensions agree") else {
            return Vec::new();
        };
        let head = |v: &IntVec| IntVec(v.0[..k].to_vec());
        let gens: Vec<IntVec> = sol.kernel_basis.iter().map(head).filter(|v| !v.is_zero()).collect();
        let basis = hermite_basis(&lattice_basis(&gens, k).expect("dimensions agree"));
        (head(&sol.particular), basis)
    };
    let s = basis.len();

    // g·(z0 + N y) > h  ⇔  (gᵀN)·y ≥ h + 1 - g·z0
    let mut h_rows: Vec<IntVec> =
        ineqs.iter().map(|(g, _)| IntVec(basis.iter().map(|n| g.dot(n)).collect())).collect();
    let r: Vec<BigInt> = ineqs.iter().map(|(g, h)| h + 1 - g.dot(&z0)).collect();

    // When the rows have lower rank than the coordinates they touch, a
    // unimodular change y = V x leaves only `rank` constrained coordinates,
    // so fewer of them are split by sign below.
    let mut basis = basis;
    if !h_rows.is_empty() {
        let hm = IntMatrix::from_rows(&h_rows, s).expect("consistent rows");
        let touched = (0..s).filter(|&j| h_rows.iter().any(|row| !row[j].is_zero())).count();
        let snf = smith_normal_form(&hm);
        if snf.rank() < touched {
            let hv = hm.mul(&snf.right).expect("conformable");
            h_rows = hv.rows_vec();
            basis = (0..s)
                .map(|j| (0..s).fold(IntVec::zeros(k), |acc, i| &acc + &basis[i].scale(&snf.right[(i, j)])))
                .collect();
        }
    }

    // Rows touching a single coordinate are bounds on it.
    let mut lower: Vec<Option<BigInt>> = vec![None; s];
    let mut upper: Vec<Option<BigInt>> = vec![None; s];
    let mut rows: Vec<(IntVec, BigInt)> = Vec::new();
    for (row, ri) in h_rows.into_iter().zip(r) {
        let support: Vec<usize> = (0..s).filter(|&j| !row[j].is_zero()).collect();
        match support.as_slice() {
            [] if ri.is_positive() => return Vec::new(),
            [] => {}
            &[j] => {
                let h = &row[j];
                if h.is_positive() {
                    let lb = -(-&ri).div_floor(h);
                    lower[j] = Some(lower[j].take().map_or(lb.clone(), |x| x.max(lb)));
                } else {
                    let ub = ri.div_floor(h);
                    upper[j] = Some(upper[j].take().map_or(ub.clone(), |x| x.min(ub)));
                }
            }
            _ => rows.push((row, ri)),
        }
    }
    if (0..s).any(|j| matches!((&lower[j], &upper[j]), (Some(l), Some(u)) if l > u)) {
        return Vec::new();
    }

    // y_j = base_j + dir_j x_j with x_j ≥ 0; unbounded coordinates that occur
    // in some row are split by sign, those that occur nowhere are free.
    let in_rows = |j: usize| rows.iter().any(|(row, _)| !row[j].is_zero());
    let free: Vec<usize> = (0..s).filter(|&j| lower[j].is_none() && upper[j].is_none() && !in_rows(j)).collect();
    let split: Vec<usize> = (0..s).filter(|&j| lower[j].is_none() && upper[j].is_none() && in_rows(j)).collect();
    let mut free_periods = Vec::new();
    for &j in &free {
        free_periods.push(basis[j].clone());
        free_periods.push(-&basis[j]);
    }
    let vars: Vec<usize> = (0..s).filter(|j| !free.contains(j)).collect();
    let nv = vars.len();

    let mut out = Vec::new();
    for mask in 0..1u64 << split.len() {
        let mut base = Vec::with_capacity(nv);
        let mut dir = Vec::with_capacity(nv);
        let mut extra: Vec<(IntVec, BigInt)> = Vec::new();
        for (t, &j) in vars.iter().enumerate() {
            let (b0, d0) = match (&lower[j], &upper[j]) {
                (Some(l), Some(u)) => {
                    // x_t ≤ u - l
                    let mut row = IntVec::zeros(nv);
                    row[t] = -BigInt::one();
                    extra.push((row, l - u));
                    (l.clone(), BigInt::one())
                }
                (Some(l), None) => (l.clone(), BigInt::one()),
                (None, Some(u)) => (u.clone(), -BigInt::one()),
                (None, None) => {
                    let neg = mask >> split.iter().position(|&x| x == j).expect("split coordinate") & 1 == 1;
                    if neg {
                        (-BigInt::one(), -BigInt::one())
                    } else {
                        (BigInt::zero(), BigInt::one())
                    }
                }
            };
            base.push(b0);
            dir.push(d0);
        }
        // h·(base + dir∘x) ≥ r  ⇔  (h∘dir)·x ≥ r - h·base
        let mut sys: Vec<(IntVec, BigInt)> = rows
            .iter()
            .map(|(row, ri)| {
                let coeffs = IntVec(vars.iter().enumerate().map(|(t, &j)| &row[j] * &dir[t]).collect());
                let shift: BigInt = vars.iter().enumerate().map(|(t, &j)| &row[j] * &base[t]).sum();
                (coeffs, ri - shift)
            })
            .collect();
        sys.extend(extra);

        let lift = |x: &IntVec, with_base: bool| -> IntVec {
            let mut z = IntVec::zeros(k);
            for (t, &j) in vars.iter().enumerate() {
                let mut c = &x[t] * &dir[t];
                if with_base {
                    c += &base[t];
                }
                if !c.is_zero() {
                    z = &z + &basis[j].scale(&c);
                }
            }
            z
        };
        // The periods generate every lattice point of the recession cone, so
        // each piece is saturated.
        let mut emit = |l: LinearSet| {
            let l = l.canonical();
            mark_saturated(&l);
            out.push(l);
        };
        if sys.is_empty() {
            let mut periods: Vec<IntVec> = (0..nv).map(|t| lift(&IntVec::unit(nv, t), false)).collect();
            periods.extend(free_periods.iter().cloned());
            emit(LinearSet { offset: &z0 + &lift(&IntVec::zeros(nv), true), periods });
            continue;
        }
        let sol = nonneg_inequalities(&sys, nv);
        if sol.minimal.is_empty() {
            continue;
        }
        let mut periods: BTreeSet<IntVec> =
            sol.hilbert.iter().map(|h| lift(h, false)).filter(|p| !p.is_zero()).collect();
        periods.extend(free_periods.iter().cloned());
        let periods: Vec<IntVec> = periods.into_iter().collect();
        let offsets: BTreeSet<IntVec> = sol.minimal.iter().map(|m| &z0 + &lift(m, true)).collect();
        for offset in offsets {
            emit(LinearSet { offset, periods: periods.clone() });
        }
    }
    out
}

pub fn sl_contains(s: &SemilinearSet, z: &IntVec) -> Result<bool> {
    s.contains(z)
}

pub fn sl_affine_image(map: &AffineMap, s: &SemilinearSet) -> Result<SemilinearSet> {
    s.affine_image(map)
}

pub fn sl_decompose_linindep(l: &LinearSet) -> SemilinearSet {
    SemilinearSet { dim: l.dim(), components: l.decompose_linindep() }
}

pub fn sl_to_polyhedral(s: &SemilinearSet) -> PolyhedralSet {
    s.to_polyhedral()
}

pub fn poly_to_semilinear(p: &PolyhedralSet) -> SemilinearSet {
    SemilinearSet::from_polyhedral(p)
}

pub fn sl_intersect(a: &SemilinearSet, b: &SemilinearSet) -> Result<SemilinearSet> {
    a.intersect(b)
}

pub fn sl_monotone_decompose(s: &SemilinearSet) -> Vec<(OrthantIndex, SemilinearSet)> {
    s.monotone_decompose()
}

/// Membership predicate shared by the set representations, used for
/// box-and-probe equality checks.
pub trait Membership {
    fn dim(&self) -> usize;
    fn member(&self, z: &IntVec) -> bool;
    fn magnitude(&self) -> BigInt;
}

impl Membership for SemilinearSet {
    fn dim(&self) -> usize {
        self.dim
    }
    fn member(&self, z: &IntVec) -> bool {
        self.contains(z).expect("dimension checked")
    }
    fn magnitude(&self) -> BigInt {
        SemilinearSet::magnitude(self)
    }
}

impl Membership for PolyhedralSet {
    fn dim(&self) -> usize {
        PolyhedralSet::dim(self)
    }
    fn member(&self, z: &IntVec) -> bool {
        self.contains(z).expect("dimension checked")
    }
    fn magnitude(&self) -> BigInt {
        PolyhedralSet::magnitude(self)
    }
}

/// First point of disagreement between two sets, if any, found on a box whose
/// radius grows with the coefficient magnitudes, followed by seeded random
/// probes farther out. Agreement is evidence, not proof.
pub fn probe_difference(a: &dyn Membership, b: &dyn Membership, seed: u64) -> Result<Option<IntVec>> {
    check_dim(a.dim(), b.dim())?;
    let k = a.dim();
    let mag = a.magnitude().max(b.magnitude());
    let cap: i64 = match k {
        0 | 1 => 200,
        2 => 30,
        3 => 10,
        _ => 4,
    };
    let radius = i64::try_from(&mag).map_or(cap, |m| (2 * m + 4).min(cap));
    let (lo, hi) = cube(k, radius);
    let mut found = None;
    for_each_in_box(&lo, &hi, |z| {
        if found.is_none() && a.member(z) != b.member(z) {
            found = Some(z.clone());
        }
    });
    if found.is_some() {
        return Ok(found);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let far = 8 * radius.max(1);
    for _ in 0..256 {
        let z = IntVec((0..k).map(|_| BigInt::from(rng.gen_range(-far..=far))).collect());
        if a.member(&z) != b.member(&z) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::linear_points_in_box_big;
    use crate::polyhedral::PolyhedralSet;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> IntVec {
        IntVec::from_i64s(xs)
    }

    fn lin(a: &[i64], ps: &[&[i64]]) -> LinearSet {
        LinearSet::new(v(a), ps.iter().map(|p| v(p)).collect()).unwrap()
    }

    fn oracle_points(s: &SemilinearSet, r: i64) -> BTreeSet<IntVec> {
        let (lo, hi) = cube(s.dim(), r);
        s.components().iter().flat_map(|c| linear_points_in_box_big(&c.offset, &c.periods, &lo, &hi)).collect()
    }

    fn member_points(m: &dyn Membership, r: i64) -> BTreeSet<IntVec> {
        let (lo, hi) = cube(m.dim(), r);
        let mut out = BTreeSet::new();
        for_each_in_box(&lo, &hi, |z| {
            if m.member(z) {
                out.insert(z.clone());
            }
        });
        out
    }

    #[test]
    fn contains_examples() {
        let s = SemilinearSet::linear(lin(&[0], &[&[2]]));
        assert!(s.contains(&v(&[6])).unwrap());
        let s = SemilinearSet::linear(lin(&[1, 0], &[&[1, 1]]));
        assert!(s.contains(&v(&[3, 2])).unwrap());
        assert!(!s.contains(&v(&[3, 3])).unwrap());
        assert!(!SemilinearSet::empty(2).contains(&v(&[0, 0])).unwrap());
        let dependent = SemilinearSet::linear(lin(&[0], &[&[2], &[-3]]));
        assert!(dependent.contains(&v(&[1])).unwrap());
        assert_eq!(oracle_points(&dependent, 8), member_points(&dependent, 8));
    }

    #[test]
    fn affine_image_examples() {
        let s = SemilinearSet::linear(lin(&[1, 0], &[&[0, 1]]));
        assert_eq!(s.affine_image(&AffineMap::identity(2)).unwrap(), s);
        let swap = AffineMap::linear(IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(s.affine_image(&swap).unwrap(), SemilinearSet::linear(lin(&[0, 1], &[&[1, 0]])));
        let sum = AffineMap::linear(IntMatrix::from_i64_rows(&[vec![1, 1]]));
        let diag = SemilinearSet::linear(lin(&[0, 0], &[&[1, 1]]));
        assert_eq!(diag.affine_image(&sum).unwrap(), SemilinearSet::linear(lin(&[0], &[&[2]])));
        let kills = AffineMap::linear(IntMatrix::from_i64_rows(&[vec![1, -1]]));
        assert_eq!(diag.affine_image(&kills).unwrap(), SemilinearSet::point(v(&[0])));
    }

    #[test]
    fn linindep_examples() {
        let l = lin(&[0], &[&[2], &[3]]);
        let d = sl_decompose_linindep(&l);
        assert_eq!(d.components(), &[lin(&[0], &[&[2]]), lin(&[3], &[&[2]])]);

        let ind = lin(&[1, 1], &[&[1, 0], &[0, 1]]);
        assert_eq!(sl_decompose_linindep(&ind).components(), std::slice::from_ref(&ind));

        let both = lin(&[0], &[&[1], &[-1]]);
        let d = sl_decompose_linindep(&both);
        assert!(d.components().iter().all(|c| c.periods.len() == 1));
        assert_eq!(member_points(&d, 15).len(), 31);
    }

    #[test]
    fn to_polyhedral_examples() {
        let s = SemilinearSet::linear(lin(&[0, 0], &[&[1, 1]]));
        let p = s.to_polyhedral();
        let expect = PolyhedralSet::basic(
            2,
            vec![ElementaryRegion::equation(v(&[1, -1]), 0), ElementaryRegion::at_least(v(&[1, 0]), 0)],
        )
        .unwrap();
        assert_eq!(member_points(&p, 5), member_points(&expect, 5));

        let p = SemilinearSet::point(v(&[7])).to_polyhedral();
        assert_eq!(member_points(&p, 10), [v(&[7])].into_iter().collect());

        let p = SemilinearSet::linear(lin(&[0], &[&[2]])).to_polyhedral();
        assert_eq!(member_points(&p, 6), [0, 2, 4, 6].iter().map(|&x| v(&[x])).collect());
    }

    #[test]
    fn from_polyhedral_examples() {
        let evens = PolyhedralSet::basic(1, vec![ElementaryRegion::congruence(v(&[1]), 0, 2)]).unwrap();
        let s = poly_to_semilinear(&evens);
        assert_eq!(s, SemilinearSet::linear(lin(&[0], &[&[-2], &[2]])));

        let axis = PolyhedralSet::basic(2, vec![ElementaryRegion::equation(v(&[1, 0]), 0)]).unwrap();
        assert_eq!(poly_to_semilinear(&axis), SemilinearSet::linear(lin(&[0, 0], &[&[0, -1], &[0, 1]])));

        let pos = PolyhedralSet::basic(1, vec![ElementaryRegion::inequality(v(&[1]), 0)]).unwrap();
        assert_eq!(poly_to_semilinear(&pos), SemilinearSet::linear(lin(&[1], &[&[1]])));

        assert!(poly_to_semilinear(&PolyhedralSet::empty(2)).is_empty());
        let full = poly_to_semilinear(&PolyhedralSet::full(2));
        assert_eq!(member_points(&full, 3).len(), 49);
    }

    #[test]
    fn intersect_examples() {
        let evens = SemilinearSet::linear(lin(&[0], &[&[2]]));
        let threes = SemilinearSet::linear(lin(&[0], &[&[3]]));
        let sixes = sl_intersect(&evens, &threes).unwrap();
        assert_eq!(member_points(&sixes, 30), (0..=5).map(|i| v(&[6 * i])).collect());
        let full = SemilinearSet::full(1);
        assert_eq!(member_points(&sl_intersect(&evens, &full).unwrap(), 20), member_points(&evens, 20));
        assert!(sl_intersect(&evens, &SemilinearSet::empty(1)).unwrap().is_empty());
    }

    #[test]
    fn monotone_examples() {
        let pieces = sl_monotone_decompose(&SemilinearSet::full(1));
        assert_eq!(pieces.len(), 2);
        let neg = &pieces[0];
        assert_eq!(neg.0, OrthantIndex(BTreeSet::new()));
        assert_eq!(member_points(&neg.1, 5), (-5..0).map(|x| v(&[x])).collect());

        let evens = SemilinearSet::linear(lin(&[0], &[&[2], &[-2]]));
        let pieces = sl_monotone_decompose(&evens);
        assert_eq!(member_points(&pieces[0].1, 6), [-6, -4, -2].iter().map(|&x| v(&[x])).collect());
        assert_eq!(member_points(&pieces[1].1, 6), [0, 2, 4, 6].iter().map(|&x| v(&[x])).collect());
        assert!(sl_monotone_decompose(&SemilinearSet::empty(3)).is_empty());
    }

    #[test]
    fn star_and_sum() {
        let s = SemilinearSet::new(1, vec![LinearSet::point(v(&[3])), LinearSet::point(v(&[5]))]).unwrap();
        let st = s.star();
        let pts: Vec<i64> = member_points(&st, 12).iter().map(|z| z.to_i64s().unwrap()[0]).collect();
        assert_eq!(pts, vec![0, 3, 5, 6, 8, 9, 10, 11, 12]);
        let sum = s.sum(&s).unwrap();
        let pts: Vec<i64> = member_points(&sum, 12).iter().map(|z| z.to_i64s().unwrap()[0]).collect();
        assert_eq!(pts, vec![6, 8, 10]);
    }

    #[test]
    fn probe_detects_difference() {
        let a = SemilinearSet::linear(lin(&[0], &[&[2]]));
        let b = SemilinearSet::linear(lin(&[0], &[&[4], &[2]]));
        assert_eq!(probe_difference(&a, &b, 1).unwrap(), None);
        let c = SemilinearSet::linear(lin(&[2], &[&[2]]));
        assert_eq!(probe_difference(&a, &c, 1).unwrap(), Some(v(&[0])));
    }

    fn linear_strategy(dim: usize) -> impl Strategy<Value = LinearSet> {
        (
            proptest::collection::vec(-3i64..=3, dim),
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, dim), 0..=4),
        )
            .prop_map(|(a, ps)| {
                let ps: Vec<IntVec> = ps.into_iter().map(|p| IntVec::from_i64s(&p)).filter(|p| !p.is_zero()).collect();
                LinearSet::new(IntVec::from_i64s(&a), ps).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn linindep_preserves_set(l in linear_strategy(2)) {
            let d = sl_decompose_linindep(&l);
            for c in d.components() {
                prop_assert!(c.has_independent_periods());
            }
            let s = SemilinearSet::linear(l);
            prop_assert_eq!(oracle_points(&d, 10), oracle_points(&s, 10));
        }

        #[test]
        fn to_polyhedral_matches_oracle(l in linear_strategy(2)) {
            let s = SemilinearSet::linear(l);
            prop_assert_eq!(member_points(&s.to_polyhedral(), 8), oracle_points(&s, 8));
        }

        #[test]
        fn polyhedral_round_trip(p in crate::polyhedral::tests::poly_strategy(2)) {
            let s = poly_to_semilinear(&p);
            prop_assert_eq!(member_points(&s, 6), member_points(&p, 6));
            prop_assert_eq!(member_points(&s.to_polyhedral(), 8), member_points(&p, 8));
        }

        #[test]
        fn affine_image_law(l in linear_strategy(2), m in proptest::collection::vec(-2i64..=2, 2)) {
            let map = AffineMap::linear(IntMatrix::from_i64_rows(&[m]));
            let s = SemilinearSet::linear(l);
            let img = s.affine_image(&map).unwrap();
            let src = oracle_points(&s, 6);
            for z in &src {
                prop_assert!(img.contains(&map.apply(z).unwrap()).unwrap());
            }
        }
    }
}
