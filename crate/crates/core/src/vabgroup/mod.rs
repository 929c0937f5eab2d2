//! Finitely generated virtually abelian groups given as extensions
//! `1 → Z^k → G → Δ → 1` with a transversal `T` of `Z^k` in `G`.
//!
//! An element is a pair `(v, t)` standing for `v·t` with `v ∈ Z^k`, `t ∈ T`.
//! The group law is `(v, s)(u, t) = (v + M_s u + c(s, t), σ(s, t))`, where
//! `M_s` is the conjugation action of `s` on `Z^k`, `st = c(s,t)·σ(s,t)`.

pub mod cwp;
pub mod patterns;

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::smith::lattice_basis;
use crate::lattice::{snf_solve, IntMatrix, IntVec};

pub use cwp::{
    cwp_to_regular, nf_edt0l, rational_to_cwp, relative_growth, relative_growth_table, CWPSet, RawCWPSet,
    RelativeGrowth,
};
pub use patterns::{
    conjugacy_test, derive_a_pi, extended_generators, geodesic_reps_oracle, ExtendedGenerators, GeodesicRepSet,
    PatternMap, RepKind, Representative, SWord,
};

/// `v·t` for `v ∈ Z^k` and the transversal element with index `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub v: IntVec,
    pub t: usize,
}

impl GroupElement {
    pub fn new(v: IntVec, t: usize) -> Self {
        GroupElement { v, t }
    }
}

/// A named generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub element: GroupElement,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct VAGroup {
    rank: usize,
    labels: Vec<String>,
    action: Vec<IntMatrix>,
    cocycle: Vec<Vec<IntVec>>,
    product: Vec<Vec<usize>>,
    /// Names of `e_i` and `-e_i`.
    basis_letters: Vec<(String, String)>,
    generators: Vec<Generator>,
}

/// Extension data; everything not listed is trivial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawGroup {
    #[serde(rename = "k", alias = "rank")]
    pub rank: usize,
    /// Transversal labels; the first one is the identity coset.
    #[serde(rename = "transversal", alias = "cosets")]
    pub cosets: Vec<String>,
    /// `M_t` by label; missing labels act trivially.
    #[serde(default)]
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
    /// `σ(s, t)` as `sigma[s][t]`; products with the identity coset are implied.
    #[serde(default, rename = "sigma", alias = "product")]
    pub product: BTreeMap<String, BTreeMap<String, String>>,
    /// Nonzero values `c(s, t)`.
    #[serde(default)]
    pub cocycle: Vec<CocycleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_letters: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<RawGenerator>>,
    /// Generator weights in generator order, overriding per-generator weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub left: String,
    pub right: String,
    pub value: IntVec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawGenerator {
    pub name: String,
    pub vector: IntVec,
    pub coset: String,
    #[serde(default = "one_u64")]
    pub weight: u64,
}

fn one_u64() -> u64 {
    1
}

impl TryFrom<RawGroup> for VAGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        let k = raw.rank;
        let d = raw.cosets.len();
        if d == 0 {
            return Err(Error::InvalidGroup("transversal must contain the identity coset".into()));
        }
        let idx = |name: &str| {
            raw.cosets.iter().position(|c| c == name).ok_or_else(|| Error::InvalidGroup(format!("unknown coset {name}")))
        };
        let mut action = vec![IntMatrix::identity(k); d];
        for (name, rows) in &raw.action {
            let m = IntMatrix::from_rows(&rows.iter().map(|r| IntVec::from_i64s(r)).collect::<Vec<_>>(), k)
                .map_err(|e| Error::InvalidGroup(format!("action of {name}: {e}")))?;
            if m.nrows() != k {
                return Err(Error::InvalidGroup(format!("action of {name} is not {k}×{k}")));
            }
            action[idx(name)?] = m;
        }
        let mut product = vec![vec![usize::MAX; d]; d];
        if raw.product.is_empty() && d == 1 {
            product[0][0] = 0;
        }
        for (s, row) in &raw.product {
            for (t, st) in row {
                product[idx(s)?][idx(t)?] = idx(st)?;
            }
        }
        // products with the identity coset are implied
        for t in 0..d {
            product[0][t] = t;
            product[t][0] = t;
        }
        if product.iter().flatten().any(|&x| x == usize::MAX) {
            return Err(Error::InvalidGroup("coset product table is incomplete".into()));
        }
        let mut cocycle = vec![vec![IntVec::zeros(k); d]; d];
        for e in &raw.cocycle {
            check_dim(k, e.value.dim()).map_err(|err| Error::InvalidGroup(err.to_string()))?;
            cocycle[idx(&e.left)?][idx(&e.right)?] = e.value.clone();
        }
        let basis_letters = raw.basis_letters.clone().unwrap_or_else(|| default_basis_letters(k));
        let generators = match &raw.generators {
            None => None,
            Some(gs) => Some(
                gs.iter()
                    .map(|g| {
                        check_dim(k, g.vector.dim()).map_err(|err| Error::InvalidGroup(err.to_string()))?;
                        Ok(Generator {
                            name: g.name.clone(),
                            element: GroupElement::new(g.vector.clone(), idx(&g.coset)?),
                            weight: g.weight,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut g = VAGroup::new(k, raw.cosets, action, cocycle, product, basis_letters, generators)?;
        if let Some(ws) = raw.weights {
            if ws.len() != g.generators.len() {
                return Err(Error::InvalidGroup(format!("{} weights for {} generators", ws.len(), g.generators.len())));
            }
            let gens = g.generators.iter().zip(ws).map(|(x, w)| Generator { weight: w, ..x.clone() }).collect();
            g = g.with_generators(gens)?;
        }
        Ok(g)
    }
}

impl From<VAGroup> for RawGroup {
    fn from(g: VAGroup) -> Self {
        let d = g.labels.len();
        let mut action = BTreeMap::new();
        let mut product = BTreeMap::new();
        let mut cocycle = Vec::new();
        for s in 0..d {
            if !g.action[s].is_identity() {
                action.insert(g.labels[s].clone(), g.action[s].to_i64_rows().expect("action entries fit in i64"));
            }
            if s > 0 {
                let row: BTreeMap<String, String> =
                    (1..d).map(|t| (g.labels[t].clone(), g.labels[g.product[s][t]].clone())).collect();
                product.insert(g.labels[s].clone(), row);
            }
            for t in 0..d {
                if !g.cocycle[s][t].is_zero() {
                    cocycle.push(CocycleEntry {
                        left: g.labels[s].clone(),
                        right: g.labels[t].clone(),
                        value: g.cocycle[s][t].clone(),
                    });
                }
            }
        }
        RawGroup {
            rank: g.rank,
            generators: Some(
                g.generators
                    .iter()
                    .map(|x| RawGenerator {
                        name: x.name.clone(),
                        vector: x.element.v.clone(),
                        coset: g.labels[x.element.t].clone(),
                        weight: x.weight,
                    })
                    .collect(),
            ),
            basis_letters: Some(g.basis_letters.clone()),
            cosets: g.labels,
            action,
            product,
            cocycle,
            weights: None,
        }
    }
}

fn default_basis_letters(k: usize) -> Vec<(String, String)> {
    if k == 1 {
        vec![("a".into(), "A".into())]
    } else {
        (1..=k).map(|i| (format!("a{i}"), format!("A{i}"))).collect()
    }
}

impl VAGroup {
    /// Validates the extension data. Without explicit generators the group is
    /// generated by `±e_i` and the non-identity transversal elements.
    pub fn new(
        rank: usize,
        labels: Vec<String>,
        action: Vec<IntMatrix>,
        cocycle: Vec<Vec<IntVec>>,
        product: Vec<Vec<usize>>,
        basis_letters: Vec<(String, String)>,
        generators: Option<Vec<Generator>>,
    ) -> Result<Self> {
        let d = labels.len();
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        if d == 0 || action.len() != d || cocycle.len() != d || product.len() != d {
            return bad("extension data sizes disagree with the transversal".into());
        }
        if basis_letters.len() != rank {
            return bad(format!("need {rank} basis letter pairs"));
        }
        for s in 0..d {
            if action[s].nrows() != rank || action[s].ncols() != rank {
                return bad(format!("action of {} is not {rank}×{rank}", labels[s]));
            }
            if !action[s].determinant()?.abs().is_one() {
                return bad(format!("action of {} is not invertible over Z", labels[s]));
            }
            if cocycle[s].len() != d || product[s].len() != d {
                return bad("cocycle or product table has the wrong shape".into());
            }
            for t in 0..d {
                if product[s][t] >= d {
                    return bad("coset product out of range".into());
                }
                check_dim(rank, cocycle[s][t].dim()).map_err(|e| Error::InvalidGroup(e.to_string()))?;
            }
        }
        if !action[0].is_identity() {
            return bad("the identity coset must act trivially".into());
        }
        for t in 0..d {
            if product[0][t] != t || product[t][0] != t {
                return bad("the first coset must be the identity".into());
            }
            if !cocycle[0][t].is_zero() || !cocycle[t][0].is_zero() {
                return bad("the cocycle must vanish on the identity coset".into());
            }
            let mut row: Vec<usize> = product[t].clone();
            row.sort_unstable();
            row.dedup();
            if row.len() != d {
                return bad(format!("row {} of the coset product is not a permutation", labels[t]));
            }
        }
        let mut g = VAGroup { rank, labels, action, cocycle, product, basis_letters, generators: Vec::new() };
        for r in 0..d {
            for s in 0..d {
                if g.action[r].mul(&g.action[s])? != g.action[g.product[r][s]] {
                    return bad(format!("M_{} M_{} ≠ M_{}", g.labels[r], g.labels[s], g.labels[g.product[r][s]]));
                }
                for t in 0..d {
                    let e = |x| GroupElement::new(IntVec::zeros(rank), x);
                    let lhs = g.mul(&g.mul(&e(r), &e(s)), &e(t));
                    let rhs = g.mul(&e(r), &g.mul(&e(s), &e(t)));
                    if lhs != rhs {
                        return bad(format!(
                            "associativity fails on ({}, {}, {})",
                            g.labels[r], g.labels[s], g.labels[t]
                        ));
                    }
                }
            }
        }
        g.generators = match generators {
            Some(gens) => gens,
            None => g.default_generators(),
        };
        let mut names: Vec<&String> = g.generators.iter().map(|x| &x.name).collect();
        names.sort();
        names.dedup();
        if names.len() != g.generators.len() {
            return bad("generator names must be distinct".into());
        }
        if g.generators.iter().any(|x| x.weight == 0) {
            return bad("generator weights must be positive".into());
        }
        Ok(g)
    }

    fn default_generators(&self) -> Vec<Generator> {
        let mut gens = Vec::new();
        for (i, (pos, neg)) in self.basis_letters.iter().enumerate() {
            let e = IntVec::unit(self.rank, i);
            gens.push(Generator { name: pos.clone(), element: GroupElement::new(e.clone(), 0), weight: 1 });
            gens.push(Generator { name: neg.clone(), element: GroupElement::new(-e, 0), weight: 1 });
        }
        for t in 1..self.labels.len() {
            gens.push(Generator {
                name: self.labels[t].clone(),
                element: GroupElement::new(IntVec::zeros(self.rank), t),
                weight: 1,
            });
        }
        gens
    }

    /// `Z^k` with generators `a_i, A_i`.
    pub fn free_abelian(k: usize) -> Self {
        VAGroup::new(
            k,
            vec!["e".into()],
            vec![IntMatrix::identity(k)],
            vec![vec![IntVec::zeros(k)]],
            vec![vec![0]],
            default_basis_letters(k),
            None,
        )
        .expect("valid extension data")
    }

    /// `Z ⋊ C_2` with `t a t = A`, generators `a, A, t`.
    pub fn infinite_dihedral() -> Self {
        VAGroup::new(
            1,
            vec!["e".into(), "t".into()],
            vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[vec![-1]])],
            vec![vec![IntVec::zeros(1); 2]; 2],
            vec![vec![0, 1], vec![1, 0]],
            default_basis_letters(1),
            None,
        )
        .expect("valid extension data")
    }

    /// The Klein bottle group `⟨a1, a2, s | s a1 s⁻¹ = A1, s a2 s⁻¹ = a2, s² = a2⟩`.
    pub fn klein_bottle() -> Self {
        VAGroup::new(
            2,
            vec!["e".into(), "s".into()],
            vec![IntMatrix::identity(2), IntMatrix::from_i64_rows(&[vec![-1, 0], vec![0, 1]])],
            vec![vec![IntVec::zeros(2), IntVec::zeros(2)], vec![IntVec::zeros(2), IntVec::from_i64s(&[0, 1])]],
            vec![vec![0, 1], vec![1, 0]],
            default_basis_letters(2),
            None,
        )
        .expect("valid extension data")
    }

    /// Built-in groups by name: `z<k>`, `dinf`, `klein`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "dinf" | "dihedral" => Some(Self::infinite_dihedral()),
            "klein" => Some(Self::klein_bottle()),
            _ => name.strip_prefix('z').and_then(|k| k.parse().ok()).map(Self::free_abelian),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn index(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == name).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    pub fn action(&self, t: usize) -> &IntMatrix {
        &self.action[t]
    }

    pub fn cocycle(&self, s: usize, t: usize) -> &IntVec {
        &self.cocycle[s][t]
    }

    pub fn coset_product(&self, s: usize, t: usize) -> usize {
        self.product[s][t]
    }

    pub fn basis_letters(&self) -> &[(String, String)] {
        &self.basis_letters
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The same group with another generating list.
    pub fn with_generators(&self, generators: Vec<Generator>) -> Result<Self> {
        let mut g = self.clone();
        g.generators = generators;
        VAGroup::new(g.rank, g.labels, g.action, g.cocycle, g.product, g.basis_letters, Some(g.generators))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(IntVec::zeros(self.rank), 0)
    }

    pub fn transversal_element(&self, t: usize) -> GroupElement {
        GroupElement::new(IntVec::zeros(self.rank), t)
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let mv = self.action[g.t].mul_vec(&h.v).expect("rank-consistent");
        GroupElement::new(&(&g.v + &mv) + &self.cocycle[g.t][h.t], self.product[g.t][h.t])
    }

    pub fn inverse_label(&self, t: usize) -> usize {
        (0..self.index()).find(|&s| self.product[t][s] == 0).expect("coset product is a group")
    }

    /// `(v, s)^{-1} = (w, s')` with `σ(s, s') = t_0` and `v + M_s w + c(s, s') = 0`;
    /// since `M_s^{-1} = M_{s'}`, `w = -M_{s'}(v + c(s, s'))`.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let s2 = self.inverse_label(g.t);
        let rhs = &g.v + &self.cocycle[g.t][s2];
        GroupElement::new(-self.action[s2].mul_vec(&rhs).expect("rank-consistent"), s2)
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        check_dim(self.rank, g.v.dim())?;
        if g.t >= self.index() {
            return Err(Error::UnknownObject(format!("coset index {}", g.t)));
        }
        Ok(())
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators.iter().position(|x| x.name == name).ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    /// Splits a word into generator names, whitespace-separated or by greedy
    /// longest match.
    pub fn parse_word(&self, word: &str) -> Result<Vec<usize>> {
        let names: Vec<String> = self.generators.iter().map(|x| x.name.clone()).collect();
        crate::automata::parse_word(&names, word)
            .map(|w| w.into_iter().map(|x| x as usize).collect())
            .map_err(|e| match e {
                Error::AlphabetMismatch(x) => Error::UnknownGenerator(x),
                other => other,
            })
    }

    pub fn eval_indices(&self, word: &[usize]) -> GroupElement {
        word.iter().fold(self.identity(), |acc, &i| self.mul(&acc, &self.generators[i].element))
    }

    pub fn eval(&self, word: &[&str]) -> Result<GroupElement> {
        let idx = word.iter().map(|w| self.generator_index(w)).collect::<Result<Vec<_>>>()?;
        Ok(self.eval_indices(&idx))
    }

    pub fn word_weight(&self, word: &[usize]) -> u64 {
        word.iter().map(|&i| self.generators[i].weight).sum()
    }

    pub fn render_word(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.generators[i].name.as_str()).collect::<Vec<_>>().join(" ")
    }

    /// `g^n` for `n ≥ 0`.
    pub fn pow(&self, g: &GroupElement, n: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = g.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn fmt_element(&self, g: &GroupElement) -> String {
        format!("({}, {})", g.v, self.labels[g.t])
    }

    /// The normal form `a_1^{v_1} ⋯ a_k^{v_k} t` as letter names; the
    /// identity coset contributes no letter.
    pub fn normal_form(&self, g: &GroupElement) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (pos, neg)) in self.basis_letters.iter().enumerate() {
            let n: usize = g.v[i].abs().try_into().expect("exponent fits in usize");
            let letter = if g.v[i].is_negative() { neg } else { pos };
            out.extend(std::iter::repeat_n(letter.clone(), n));
        }
        if g.t != 0 {
            out.push(self.labels[g.t].clone());
        }
        out
    }

    /// `G_1 × G_2` with transversal `T_1 × T_2` and block-diagonal action.
    pub fn direct_product(&self, other: &VAGroup) -> Result<VAGroup> {
        let (k1, k2) = (self.rank, other.rank);
        let (d1, d2) = (self.index(), other.index());
        let pair = |i: usize, j: usize| i * d2 + j;
        let mut labels = Vec::with_capacity(d1 * d2);
        for i in 0..d1 {
            for j in 0..d2 {
                labels.push(match (i, j) {
                    (0, 0) => "e".to_string(),
                    _ => format!("{}.{}", self.labels[i], other.labels[j]),
                });
            }
        }
        let mut action = Vec::new();
        for i in 0..d1 {
            for j in 0..d2 {
                let mut m = IntMatrix::zeros(k1 + k2, k1 + k2);
                for r in 0..k1 {
                    for c in 0..k1 {
                        m[(r, c)] = self.action[i][(r, c)].clone();
                    }
                }
                for r in 0..k2 {
                    for c in 0..k2 {
                        m[(k1 + r, k1 + c)] = other.action[j][(r, c)].clone();
                    }
                }
                action.push(m);
            }
        }
        let mut cocycle = vec![vec![IntVec::zeros(k1 + k2); d1 * d2]; d1 * d2];
        let mut product = vec![vec![0; d1 * d2]; d1 * d2];
        for i in 0..d1 {
            for j in 0..d2 {
                for i2 in 0..d1 {
                    for j2 in 0..d2 {
                        cocycle[pair(i, j)][pair(i2, j2)] = self.cocycle[i][i2].concat(&other.cocycle[j][j2]);
                        product[pair(i, j)][pair(i2, j2)] = pair(self.product[i][i2], other.product[j][j2]);
                    }
                }
            }
        }
        let mut basis_letters = self.basis_letters.clone();
        for (p, n) in &other.basis_letters {
            let clash = basis_letters.iter().any(|(a, b)| a == p || b == n || a == n || b == p);
            basis_letters.push(if clash { (format!("{p}'"), format!("{n}'")) } else { (p.clone(), n.clone()) });
        }
        VAGroup::new(k1 + k2, labels, action, cocycle, product, basis_letters, None)
    }

    /// Distances `‖g‖` from the identity for all `g` with `‖g‖ ≤ radius`,
    /// by Dijkstra over the generators.
    pub fn ball(&self, radius: u64) -> HashMap<GroupElement, u64> {
        let mut dist: HashMap<GroupElement, u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(self.identity(), 0);
        heap.push(Reverse((0u64, self.identity())));
        while let Some(Reverse((d, g))) = heap.pop() {
            if dist.get(&g).is_some_and(|&best| best < d) {
                continue;
            }
            for x in &self.generators {
                let nd = d + x.weight;
                if nd > radius {
                    continue;
                }
                let h = self.mul(&g, &x.element);
                if dist.get(&h).is_none_or(|&best| nd < best) {
                    dist.insert(h.clone(), nd);
                    heap.push(Reverse((nd, h)));
                }
            }
        }
        dist
    }

    /// Structure of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[GroupElement]) -> Subgroup {
        Subgroup::generated(self, gens)
    }

    /// Whether the generators generate `G`: the subgroup they generate meets
    /// every coset and contains all of `Z^k`.
    pub fn check_generation(&self) -> Result<()> {
        let h = self.subgroup(&self.generators.iter().map(|x| x.element.clone()).collect::<Vec<_>>());
        if let Some(t) = (0..self.index()).find(|&t| h.coset_rep[t].is_none()) {
            return Err(Error::GenerationProbe(format!("coset {} is never reached", self.labels[t])));
        }
        if h.lattice.len() != self.rank {
            return Err(Error::GenerationProbe("the translation subgroup has lower rank".into()));
        }
        let m = IntMatrix::from_columns(&h.lattice, self.rank)?;
        if !m.determinant()?.abs().is_one() {
            return Err(Error::GenerationProbe(format!("the translation subgroup has index {}", m.determinant()?.abs())));
        }
        Ok(())
    }
}

impl fmt::Display for VAGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{} extended by {{{}}}", self.rank, self.labels.join(", "))
    }
}

/// A subgroup `H ≤ G` as `⋃_{t ∈ Δ_H} (r_t + L)·t` where `L = H ∩ Z^k`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    /// `coset_rep[t]` is an element of `H` in coset `t`, if any.
    pub coset_rep: Vec<Option<GroupElement>>,
    /// A basis of `H ∩ Z^k`.
    pub lattice: Vec<IntVec>,
}

impl Subgroup {
    /// Schreier's lemma: with transversal elements `r_t` of `H ∩ Z^k` in `H`,
    /// the elements `r_t h r_{σ(t,h)}^{-1}` generate `H ∩ Z^k`.
    fn generated(g: &VAGroup, gens: &[GroupElement]) -> Subgroup {
        let d = g.index();
        let mut all: Vec<GroupElement> = gens.to_vec();
        all.extend(gens.iter().map(|x| g.inverse(x)));
        let mut coset_rep: Vec<Option<GroupElement>> = vec![None; d];
        coset_rep[0] = Some(g.identity());
        let mut queue = vec![0usize];
        let mut schreier = Vec::new();
        while let Some(t) = queue.pop() {
            let r = coset_rep[t].clone().unwrap();
            for h in &all {
                let p = g.mul(&r, h);
                match &coset_rep[p.t] {
                    None => {
                        coset_rep[p.t] = Some(p.clone());
                        queue.push(p.t);
                    }
                    Some(rep) => schreier.push(g.mul(&p, &g.inverse(rep))),
                }
            }
        }
        // generators whose coset was discovered later still contribute
        for t in 0..d {
            if let Some(r) = coset_rep[t].clone() {
                for h in &all {
                    let p = g.mul(&r, h);
                    let rep = coset_rep[p.t].clone().unwrap();
                    schreier.push(g.mul(&p, &g.inverse(&rep)));
                }
            }
        }
        let vecs: Vec<IntVec> = schreier.into_iter().map(|x| x.v).filter(|v| !v.is_zero()).collect();
        let lattice = lattice_basis(&vecs, g.rank()).expect("rank-consistent");
        Subgroup { coset_rep, lattice }
    }

    pub fn contains(&self, g: &VAGroup, x: &GroupElement) -> bool {
        let Some(rep) = &self.coset_rep[x.t] else { return false };
        let diff = g.mul(x, &g.inverse(rep));
        debug_assert_eq!(diff.t, 0);
        if self.lattice.is_empty() {
            return diff.v.is_zero();
        }
        let m = IntMatrix::from_columns(&self.lattice, g.rank()).expect("rank-consistent");
        snf_solve(&m, &diff.v).expect("rank-consistent").is_some()
    }
}

/// Evaluates a word given as generator names.
pub fn group_eval(g: &VAGroup, word: &[&str]) -> Result<GroupElement> {
    g.eval(word)
}
