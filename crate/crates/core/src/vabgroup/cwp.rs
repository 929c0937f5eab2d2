//! Coset-wise polyhedral sets `U = ⋃_t V_t·t`, their conversion to and from
//! rational sets, normal-form EDT0L systems and relative growth.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GroupElement, VAGroup};
use crate::automata::edt0l::{edt0l_from_nfsa, edt0l_union, EDT0LSystem, TerminalMode};
use crate::automata::{nfk_from_monotone, NFsa};
use crate::error::{check_dim, Error, Result};
use crate::growth::{growth_fit, CoefficientTable, GrowthSeries};
use crate::lattice::{AffineMap, IntVec};
use crate::polyhedral::PolyhedralSet;
use crate::semilinear::SemilinearSet;

/// `U = ⋃_t V_t·t` with each `V_t ⊆ Z^k` polyhedral.
#[derive(Clone, Debug)]
pub struct CWPSet {
    group: Arc<VAGroup>,
    pieces: Vec<PolyhedralSet>,
}

/// File form: polyhedral sets keyed by coset label; missing labels are empty.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RawCWPSet {
    pub cosets: BTreeMap<String, PolyhedralSet>,
}

impl CWPSet {
    pub fn new(group: Arc<VAGroup>, pieces: Vec<PolyhedralSet>) -> Result<Self> {
        if pieces.len() != group.index() {
            return Err(Error::InvalidGroup(format!("need {} coset pieces, got {}", group.index(), pieces.len())));
        }
        for p in &pieces {
            check_dim(group.rank(), p.dim())?;
        }
        Ok(CWPSet { group, pieces })
    }

    pub fn empty(group: Arc<VAGroup>) -> Self {
        let pieces = vec![PolyhedralSet::empty(group.rank()); group.index()];
        CWPSet { group, pieces }
    }

    pub fn full(group: Arc<VAGroup>) -> Self {
        let pieces = vec![PolyhedralSet::full(group.rank()); group.index()];
        CWPSet { group, pieces }
    }

    /// The subgroup `Z^k`, i.e. `V_{t_0} = Z^k` and nothing else.
    pub fn translations(group: Arc<VAGroup>) -> Self {
        let mut u = CWPSet::empty(group);
        u.pieces[0] = PolyhedralSet::full(u.group.rank());
        u
    }

    pub fn singleton(group: Arc<VAGroup>, g: &GroupElement) -> Result<Self> {
        group.check_element(g)?;
        let mut u = CWPSet::empty(group);
        u.pieces[g.t] = point_set(&g.v);
        Ok(u)
    }

    /// `V_t = piece` for a single coset.
    pub fn on_coset(group: Arc<VAGroup>, t: usize, piece: PolyhedralSet) -> Result<Self> {
        check_dim(group.rank(), piece.dim())?;
        let mut u = CWPSet::empty(group);
        u.pieces[t] = piece;
        Ok(u)
    }

    pub fn from_raw(group: Arc<VAGroup>, raw: &RawCWPSet) -> Result<Self> {
        let mut u = CWPSet::empty(group);
        for (label, p) in &raw.cosets {
            let t = u.group.label_index(label)?;
            check_dim(u.group.rank(), p.dim())?;
            u.pieces[t] = p.clone();
        }
        Ok(u)
    }

    pub fn to_raw(&self) -> RawCWPSet {
        RawCWPSet {
            cosets: self
                .pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_syntactically_empty())
                .map(|(t, p)| (self.group.labels()[t].clone(), p.clone()))
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<VAGroup> {
        &self.group
    }

    pub fn piece(&self, t: usize) -> &PolyhedralSet {
        &self.pieces[t]
    }

    pub fn pieces(&self) -> &[PolyhedralSet] {
        &self.pieces
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        self.group.check_element(g)?;
        self.pieces[g.t].contains(&g.v)
    }

    fn same_group(&self, other: &CWPSet) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn zip(&self, other: &CWPSet, f: impl Fn(&PolyhedralSet, &PolyhedralSet) -> Result<PolyhedralSet>) -> Result<Self> {
        self.same_group(other)?;
        let pieces = self.pieces.iter().zip(&other.pieces).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(CWPSet { group: self.group.clone(), pieces })
    }

    pub fn union(&self, other: &CWPSet) -> Result<Self> {
        self.zip(other, PolyhedralSet::union)
    }

    pub fn intersect(&self, other: &CWPSet) -> Result<Self> {
        self.zip(other, PolyhedralSet::intersect)
    }

    pub fn difference(&self, other: &CWPSet) -> Result<Self> {
        self.zip(other, PolyhedralSet::difference)
    }

    pub fn complement(&self) -> Self {
        CWPSet { group: self.group.clone(), pieces: self.pieces.iter().map(PolyhedralSet::complement).collect() }
    }

    /// `U·g`. With `g = (w, s)`, `(v, t)·g = (v + M_t w + c(t, s), σ(t, s))`,
    /// so `V_t` moves to coset `σ(t, s)` shifted by `M_t w + c(t, s)`.
    pub fn translate(&self, g: &GroupElement) -> Result<Self> {
        self.group.check_element(g)?;
        let mut pieces = vec![PolyhedralSet::empty(self.group.rank()); self.group.index()];
        for (t, p) in self.pieces.iter().enumerate() {
            let shift = self.group.mul(&self.group.transversal_element(t), g);
            pieces[shift.t] = p.translate(&shift.v)?;
        }
        Ok(CWPSet { group: self.group.clone(), pieces })
    }

    /// `g·U`. With `g = (w, s)`, `g·(v, t) = (M_s v + w + c(s, t), σ(s, t))`;
    /// the new piece is the preimage of `V_t` under the inverse affine map.
    pub fn translate_left(&self, g: &GroupElement) -> Result<Self> {
        self.group.check_element(g)?;
        let gi = self.group.inverse(g);
        let mut pieces = vec![PolyhedralSet::empty(self.group.rank()); self.group.index()];
        for (t, p) in self.pieces.iter().enumerate() {
            // y ↦ the vector part of g^{-1}·(y, σ(s,t)), which lands in coset t
            let target = self.group.coset_product(g.t, t);
            let base = self.group.mul(&gi, &self.group.transversal_element(target));
            debug_assert_eq!(base.t, t);
            let inverse = AffineMap::new(self.group.action(gi.t).clone(), base.v)?;
            pieces[target] = p.preimage(&inverse)?;
        }
        Ok(CWPSet { group: self.group.clone(), pieces })
    }

    /// Elements with `‖v‖_∞ ≤ r`, in every coset.
    pub fn elements_in_box(&self, r: i64) -> Result<Vec<GroupElement>> {
        let (lo, hi) = crate::polyhedral::cube(self.group.rank(), r);
        let mut out = Vec::new();
        for (t, p) in self.pieces.iter().enumerate() {
            out.extend(p.enumerate_box(&lo, &hi)?.into_iter().map(|v| GroupElement::new(v, t)));
        }
        Ok(out)
    }
}

fn point_set(v: &IntVec) -> PolyhedralSet {
    SemilinearSet::point(v.clone()).to_polyhedral()
}

/// The image of a rational language in `G`.
///
/// Reading generator `(u, t_g)` at coset `t` adds `M_t u + c(t, t_g)` to the
/// vector part and moves to coset `σ(t, t_g)`. Path sums over the product graph
/// `states × T` commute, so state elimination with Minkowski sum for
/// concatenation and the monoid closure for loops yields one semilinear set per
/// target coset.
pub fn rational_to_cwp(group: &Arc<VAGroup>, lang: &NFsa) -> Result<CWPSet> {
    if lang.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: lang.arity() });
    }
    let k = group.rank();
    let d = group.index();
    let gens: Vec<usize> = lang.alphabet().iter().map(|a| group.generator_index(a)).collect::<Result<_>>().map_err(
        |e| match e {
            Error::UnknownGenerator(x) => Error::AlphabetMismatch(x),
            other => other,
        },
    )?;

    // product graph restricted to nodes reachable from (start, t_0)
    let node = |q: usize, t: usize| q * d + t;
    let mut out: HashMap<usize, Vec<(usize, IntVec)>> = HashMap::new();
    let mut seen = vec![false; lang.num_states() * d];
    let mut stack = vec![node(lang.start(), 0)];
    seen[node(lang.start(), 0)] = true;
    while let Some(n) = stack.pop() {
        let (q, t) = (n / d, n % d);
        for e in lang.edges().iter().filter(|e| e.from == q) {
            let (delta, t2) = match e.label {
                None => (IntVec::zeros(k), t),
                Some((_, x)) => {
                    let step = group.mul(&group.transversal_element(t), &group.generators()[gens[x as usize]].element);
                    (step.v, step.t)
                }
            };
            let m = node(e.to, t2);
            out.entry(n).or_default().push((m, delta));
            if !seen[m] {
                seen[m] = true;
                stack.push(m);
            }
        }
    }

    // dense labels over: internal nodes, source, one sink per coset
    let internal: Vec<usize> = (0..seen.len()).filter(|&n| seen[n]).collect();
    let pos: HashMap<usize, usize> = internal.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let source = internal.len();
    let sink = |t: usize| source + 1 + t;
    let size = source + 1 + d;
    let mut label: Vec<Vec<Option<SemilinearSet>>> = vec![vec![None; size]; size];
    let add = |label: &mut Vec<Vec<Option<SemilinearSet>>>, i: usize, j: usize, s: SemilinearSet| {
        label[i][j] = Some(match label[i][j].take() {
            None => s,
            Some(prev) => prev.union(&s).expect("same dimension").pruned(),
        });
    };
    let zero = SemilinearSet::point(IntVec::zeros(k));
    add(&mut label, source, pos[&node(lang.start(), 0)], zero.clone());
    for &n in &internal {
        for (m, delta) in out.get(&n).into_iter().flatten() {
            add(&mut label, pos[&n], pos[m], SemilinearSet::point(delta.clone()));
        }
        if lang.accept_states().contains(&(n / d)) {
            add(&mut label, pos[&n], sink(n % d), zero.clone());
        }
    }

    let mut alive: Vec<bool> = vec![true; internal.len()];
    for _ in 0..internal.len() {
        // eliminate the node with the fewest in/out combinations
        let cost = |x: usize| {
            let ins = (0..size).filter(|&i| i != x && label[i][x].is_some()).count();
            let outs = (0..size).filter(|&j| j != x && label[x][j].is_some()).count();
            ins * outs
        };
        let x = (0..internal.len()).filter(|&x| alive[x]).min_by_key(|&x| cost(x)).unwrap();
        alive[x] = false;
        let loop_star = label[x][x].take().map(|l| l.star());
        let ins: Vec<usize> = (0..size).filter(|&i| label[i][x].is_some()).collect();
        let outs: Vec<usize> = (0..size).filter(|&j| label[x][j].is_some()).collect();
        for &i in &ins {
            let head = match &loop_star {
                Some(s) => label[i][x].as_ref().unwrap().sum(s)?.pruned(),
                None => label[i][x].clone().unwrap(),
            };
            for &j in &outs {
                let path = head.sum(label[x][j].as_ref().unwrap())?.pruned();
                add(&mut label, i, j, path);
            }
        }
        for i in 0..size {
            label[i][x] = None;
            label[x][i] = None;
        }
    }

    let pieces = (0..d)
        .map(|t| match &label[source][sink(t)] {
            None => PolyhedralSet::empty(k),
            Some(s) => s.to_polyhedral(),
        })
        .collect();
    CWPSet::new(group.clone(), pieces)
}

/// Letters spelling `Z^k` and the cosets, checked against the generator list.
fn spelling_letters(group: &VAGroup) -> Result<Vec<(String, String)>> {
    for (i, (pos, neg)) in group.basis_letters().iter().enumerate() {
        let e = IntVec::unit(group.rank(), i);
        for (name, v) in [(pos, e.clone()), (neg, -e)] {
            let idx = group.generator_index(name)?;
            if group.generators()[idx].element != GroupElement::new(v, 0) {
                return Err(Error::Precondition(format!("generator {name} is not a basis vector")));
            }
        }
    }
    for t in 1..group.index() {
        let idx = group.generator_index(&group.labels()[t])?;
        if group.generators()[idx].element != group.transversal_element(t) {
            return Err(Error::Precondition(format!("generator {} is not a transversal element", group.labels()[t])));
        }
    }
    Ok(group.basis_letters().to_vec())
}

/// Per coset, the normal-form automata of the monotone pieces of `V_t`.
fn coset_automata(u: &CWPSet) -> Result<Vec<NFsa>> {
    let letters = spelling_letters(&u.group)?;
    let flat: Vec<String> = letters.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let k = u.group.rank();
    let mut out = Vec::with_capacity(u.group.index());
    for piece in &u.pieces {
        let mut a = NFsa::empty(k, flat.clone());
        let s = SemilinearSet::from_polyhedral(piece);
        for (_, part) in s.monotone_decompose() {
            for c in part.components() {
                a = a.union(&nfk_from_monotone(c, &letters)?);
            }
        }
        out.push(a);
    }
    Ok(out)
}

/// A 1-fsa over the generators whose image is `U`: per coset, words
/// `b_1^* ⋯ b_l^*` after an offset spelling, followed by the coset letter.
pub fn cwp_to_regular(u: &CWPSet) -> Result<NFsa> {
    let names: Vec<String> = u.group.generators().iter().map(|g| g.name.clone()).collect();
    let mut result = NFsa::empty(1, names);
    for (t, a) in coset_automata(u)?.into_iter().enumerate() {
        let mut flat = a.padded(a.arity().max(1)).flattened();
        if t != 0 {
            flat = flat.append_letter(0, &u.group.labels()[t])?;
        }
        result = result.union(&flat);
    }
    Ok(result)
}

/// An EDT0L system for `NF(U) = {a_1^{v_1} ⋯ a_k^{v_k} t : (v, t) ∈ U}`.
pub fn nf_edt0l(u: &CWPSet) -> Result<EDT0LSystem> {
    let mut systems = Vec::new();
    for (t, a) in coset_automata(u)?.into_iter().enumerate() {
        let arity = a.arity().max(1);
        let mut a = a.padded(arity);
        if t != 0 {
            a = a.append_letter(arity - 1, &u.group.labels()[t])?;
        }
        systems.push(edt0l_from_nfsa(&a, TerminalMode::Forget)?);
    }
    edt0l_union(&systems)
}

#[derive(Clone, Debug)]
pub enum RelativeGrowth {
    Table(CoefficientTable),
    Series(GrowthSeries),
}

/// `σ(n) = #{g ∈ U : ‖g‖ = n}` for `n ≤ radius`, optionally fitted by a
/// rational function leaving `margin` table entries unused by the solve.
pub fn relative_growth(u: &CWPSet, radius: u64, fit: Option<usize>) -> Result<RelativeGrowth> {
    let table = relative_growth_table(u, radius)?;
    match fit {
        None => Ok(RelativeGrowth::Table(table)),
        Some(margin) => {
            let max_deg = (table.len().saturating_sub(margin)) / 2;
            growth_fit(&table, max_deg, margin).map(RelativeGrowth::Series)
        }
    }
}

pub fn relative_growth_table(u: &CWPSet, radius: u64) -> Result<CoefficientTable> {
    let mut sigma = vec![0u64; radius as usize + 1];
    for (g, n) in u.group.ball(radius) {
        if u.contains(&g)? {
            sigma[n as usize] += 1;
        }
    }
    Ok(CoefficientTable::new(sigma))
}
