//! Extended generating sets, patterned words and their affine maps, and
//! desk-scale oracles for geodesic representatives.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{GroupElement, VAGroup};
use crate::error::{Error, Result};
use crate::lattice::{snf_solve, AffineMap, IntMatrix, IntVec};

/// A word over the generators, read as a letter of the extended alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWord {
    pub letters: Vec<usize>,
    pub element: GroupElement,
    pub weight: u64,
}

impl SWord {
    pub fn name(&self, g: &VAGroup) -> String {
        self.letters.iter().map(|&i| g.generators()[i].name.as_str()).collect()
    }
}

/// `S` = nontrivial products of `1..=d` generators, split into `X = S ∩ Z^k`
/// and `Y = S ∖ X`, with all patterns `π ∈ Y^{≤d}`.
#[derive(Clone, Debug)]
pub struct ExtendedGenerators {
    pub x: Vec<SWord>,
    pub y: Vec<SWord>,
    /// Patterns as index lists into `y`, by length then lexicographically.
    pub patterns: Vec<Vec<usize>>,
    pub max_len: usize,
}

/// Builds `S` for products of length at most `[G : Z^k]`.
pub fn extended_generators(g: &VAGroup) -> Result<ExtendedGenerators> {
    g.check_generation()?;
    let d = g.index();
    let n = g.generators().len();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |i| {
                    let mut w2 = w.clone();
                    w2.push(i);
                    w2
                })
            })
            .collect();
        for w in &next {
            let element = g.eval_indices(w);
            if element == g.identity() {
                continue;
            }
            let s = SWord { weight: g.word_weight(w), letters: w.clone(), element };
            if s.element.t == 0 {
                x.push(s);
            } else {
                y.push(s);
            }
        }
        layer = next;
    }
    let mut patterns: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = patterns.clone();
    for _ in 0..d {
        frontier = frontier
            .iter()
            .flat_map(|p| {
                (0..y.len()).map(move |i| {
                    let mut p2 = p.clone();
                    p2.push(i);
                    p2
                })
            })
            .collect();
        patterns.extend(frontier.iter().cloned());
    }
    Ok(ExtendedGenerators { x, y, patterns, max_len: d })
}

/// `w̄ = (A_π(φ_π(w)))·t_π` for `π`-patterned words
/// `w = x^{i_0} y_1 x^{i_1} ⋯ y_l x^{i_l}`, where each `x^{i_j}` runs over the
/// `r` letters of `X` in order. Exponent `j·r + i` belongs to block `j`.
#[derive(Clone, Debug)]
pub struct PatternMap {
    pub pattern: Vec<usize>,
    pub map: AffineMap,
    pub coset: usize,
}

impl PatternMap {
    pub fn exponent_dim(&self) -> usize {
        self.map.source_dim()
    }

    pub fn apply(&self, exps: &IntVec) -> Result<GroupElement> {
        Ok(GroupElement::new(self.map.apply(exps)?, self.coset))
    }

    /// Compares `apply` with group evaluation on `samples` random exponent
    /// vectors with entries in `0..=6`.
    pub fn certify(&self, g: &VAGroup, ext: &ExtendedGenerators, samples: usize, seed: u64) -> Result<()> {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = self.exponent_dim();
        for _ in 0..samples {
            let exps: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=6)).collect();
            let direct = eval_patterned(g, ext, &self.pattern, &exps);
            let v = IntVec(exps.iter().map(|&e| BigInt::from(e)).collect());
            let mapped = self.apply(&v)?;
            if mapped != direct {
                return Err(Error::AffinenessViolation {
                    pattern: pattern_name(g, ext, &self.pattern),
                    detail: format!(
                        "exponents {v}: map gives {}, evaluation gives {}",
                        g.fmt_element(&mapped),
                        g.fmt_element(&direct)
                    ),
                });
            }
        }
        Ok(())
    }
}

pub fn pattern_name(g: &VAGroup, ext: &ExtendedGenerators, pattern: &[usize]) -> String {
    if pattern.is_empty() {
        return "ε".into();
    }
    pattern.iter().map(|&i| ext.y[i].name(g)).collect::<Vec<_>>().join("·")
}

/// Evaluates `x^{i_0} y_1 ⋯ y_l x^{i_l}`; `X` lies in `Z^k`, so powers scale.
fn eval_patterned(g: &VAGroup, ext: &ExtendedGenerators, pattern: &[usize], exps: &[u64]) -> GroupElement {
    let r = ext.x.len();
    let mut acc = g.identity();
    for j in 0..=pattern.len() {
        let mut shift = IntVec::zeros(g.rank());
        for (i, x) in ext.x.iter().enumerate() {
            shift = &shift + &x.element.v.scale(&BigInt::from(exps[j * r + i]));
        }
        acc = g.mul(&acc, &GroupElement::new(shift, 0));
        if j < pattern.len() {
            acc = g.mul(&acc, &ext.y[pattern[j]].element);
        }
    }
    acc
}

/// Assembles `A_π` from evaluations at `0` and the unit vectors, then
/// certifies it on 50 random patterned words.
pub fn derive_a_pi(g: &VAGroup, ext: &ExtendedGenerators, pattern: &[usize]) -> Result<PatternMap> {
    if pattern.iter().any(|&i| i >= ext.y.len()) {
        return Err(Error::UnknownObject(format!("pattern letter out of range in {pattern:?}")));
    }
    let m = (pattern.len() + 1) * ext.x.len();
    let mut exps = vec![0u64; m];
    let base = eval_patterned(g, ext, pattern, &exps);
    let mut columns = Vec::with_capacity(m);
    for j in 0..m {
        exps[j] = 1;
        let e = eval_patterned(g, ext, pattern, &exps);
        exps[j] = 0;
        columns.push(&e.v - &base.v);
    }
    let matrix = if m == 0 { IntMatrix::zeros(g.rank(), 0) } else { IntMatrix::from_columns(&columns, g.rank())? };
    let pm = PatternMap { pattern: pattern.to_vec(), map: AffineMap::new(matrix, base.v)?, coset: base.t };
    let seed = pattern.iter().fold(0x5eed_u64, |h, &i| h.wrapping_mul(31).wrapping_add(i as u64 + 1));
    pm.certify(g, ext, 50, seed)?;
    Ok(pm)
}

/// Whether `h = x g x^{-1}` for some `x`. Writing `x = (w, t_0)(0, s)`, the
/// conjugate is `(v' + (I − M_{t'}) w, t')` where `(v', t') = s g s^{-1}`.
pub fn conjugacy_test(g: &VAGroup, a: &GroupElement, b: &GroupElement) -> Result<bool> {
    g.check_element(a)?;
    g.check_element(b)?;
    let k = g.rank();
    for s in 0..g.index() {
        let x = g.transversal_element(s);
        let c = g.mul(&g.mul(&x, a), &g.inverse(&x));
        if c.t != b.t {
            continue;
        }
        let mut m = IntMatrix::identity(k);
        let mt = g.action(c.t);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = &m[(i, j)] - &mt[(i, j)];
            }
        }
        if k == 0 || snf_solve(&m, &(&b.v - &c.v))?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepKind {
    Elements,
    /// Left cosets `gH` of the subgroup generated by these elements.
    Cosets(Vec<GroupElement>),
    ConjugacyClasses,
}

/// A retained representative: the least word under (weight, lexicographic
/// generator order) for its element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    pub word: Vec<usize>,
    pub element: GroupElement,
    pub length: u64,
}

#[derive(Clone, Debug)]
pub struct GeodesicRepSet {
    pub kind: RepKind,
    pub radius: u64,
    pub reps: Vec<Representative>,
    /// Representatives by pattern, i.e. the subsequence of letters outside `Z^k`.
    pub by_pattern: BTreeMap<String, Vec<usize>>,
}

impl GeodesicRepSet {
    /// One word per line, letters separated by spaces; the empty word is `ε`.
    pub fn to_text(&self, g: &VAGroup) -> String {
        self.reps
            .iter()
            .map(|r| if r.word.is_empty() { "ε".to_string() } else { g.render_word(&r.word) } + "\n")
            .collect()
    }
}

/// One geodesic representative per element, left coset or conjugacy class
/// meeting the ball of the given radius.
pub fn geodesic_reps_oracle(g: &VAGroup, kind: RepKind, radius: u64) -> Result<GeodesicRepSet> {
    let subgroup = match &kind {
        RepKind::Cosets(h) => {
            for x in h {
                g.check_element(x)?;
            }
            Some(g.subgroup(h))
        }
        _ => None,
    };
    let table = g.ball(radius);
    let mut settled: HashSet<GroupElement> = HashSet::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, Vec::<usize>::new(), g.identity())));
    let mut reps: Vec<Representative> = Vec::new();
    while let Some(Reverse((w, word, el))) = heap.pop() {
        if !settled.insert(el.clone()) {
            continue;
        }
        let fresh = match &kind {
            RepKind::Elements => true,
            RepKind::Cosets(_) => {
                let h = subgroup.as_ref().unwrap();
                !reps.iter().any(|r| h.contains(g, &g.mul(&g.inverse(&r.element), &el)))
            }
            RepKind::ConjugacyClasses => {
                let mut fresh = true;
                for r in &reps {
                    if conjugacy_test(g, &r.element, &el)? {
                        fresh = false;
                        break;
                    }
                }
                fresh
            }
        };
        if fresh {
            if table.get(&el) != Some(&w) {
                return Err(Error::Precondition(format!("word for {} is not geodesic", g.fmt_element(&el))));
            }
            reps.push(Representative { word: word.clone(), element: el.clone(), length: w });
        }
        for (i, x) in g.generators().iter().enumerate() {
            let nw = w + x.weight;
            if nw > radius {
                continue;
            }
            let next = g.mul(&el, &x.element);
            if !settled.contains(&next) {
                let mut word2 = word.clone();
                word2.push(i);
                heap.push(Reverse((nw, word2, next)));
            }
        }
    }
    let mut by_pattern: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, r) in reps.iter().enumerate() {
        let pattern: Vec<&str> = r
            .word
            .iter()
            .filter(|&&l| g.generators()[l].element.t != 0)
            .map(|&l| g.generators()[l].name.as_str())
            .collect();
        let key = if pattern.is_empty() { "ε".to_string() } else { pattern.join(" ") };
        by_pattern.entry(key).or_default().push(i);
    }
    Ok(GeodesicRepSet { kind, radius, reps, by_pattern })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vabgroup::tests::el;

    #[test]
    fn extended_generators_examples() {
        let z = VAGroup::free_abelian(1);
        let e = extended_generators(&z).unwrap();
        assert_eq!(e.x.len(), 2);
        assert!(e.y.is_empty());
        assert_eq!(e.patterns, vec![Vec::<usize>::new()]);

        let d = VAGroup::infinite_dihedral();
        let e = extended_generators(&d).unwrap();
        let xs: Vec<(String, u64)> = e.x.iter().map(|s| (s.name(&d), s.weight)).collect();
        assert_eq!(xs, vec![("a".into(), 1), ("A".into(), 1), ("aa".into(), 2), ("AA".into(), 2)]);
        let ys: Vec<String> = e.y.iter().map(|s| s.name(&d)).collect();
        assert_eq!(ys, vec!["t", "at", "At", "ta", "tA"]);
        assert_eq!(e.patterns.len(), 1 + 5 + 25);
        assert!(e.x.iter().chain(&e.y).all(|s| s.weight == s.letters.len() as u64));
    }

    #[test]
    fn a_pi_examples() {
        let z = VAGroup::free_abelian(1);
        let e = extended_generators(&z).unwrap();
        let pm = derive_a_pi(&z, &e, &[]).unwrap();
        assert_eq!(pm.map.matrix().to_i64_rows().unwrap(), vec![vec![1, -1]]);
        assert_eq!(pm.apply(&IntVec::from_i64s(&[5, 2])).unwrap(), el(&[3], 0));

        let d = VAGroup::infinite_dihedral();
        let e = extended_generators(&d).unwrap();
        let t = e.y.iter().position(|s| s.name(&d) == "t").unwrap();
        let pm = derive_a_pi(&d, &e, &[t]).unwrap();
        assert_eq!(pm.coset, 1);
        // a^i t a^j = (i - j, t)
        let row = pm.map.matrix().to_i64_rows().unwrap();
        assert_eq!(row[0][0], 1);
        assert_eq!(row[0][4], -1);
        assert!(pm.map.offset().is_zero());
        let at = e.y.iter().position(|s| s.name(&d) == "at").unwrap();
        let pm = derive_a_pi(&d, &e, &[at]).unwrap();
        assert_eq!(pm.map.offset(), &IntVec::from_i64s(&[1]));
    }

    #[test]
    fn corrupted_map_is_rejected() {
        let d = VAGroup::infinite_dihedral();
        let e = extended_generators(&d).unwrap();
        let mut pm = derive_a_pi(&d, &e, &[0]).unwrap();
        pm.map = AffineMap::new(IntMatrix::zeros(1, pm.exponent_dim()), IntVec::zeros(1)).unwrap();
        assert!(matches!(pm.certify(&d, &e, 50, 1), Err(Error::AffinenessViolation { .. })));
    }

    #[test]
    fn conjugacy_examples() {
        let d = VAGroup::infinite_dihedral();
        assert!(conjugacy_test(&d, &el(&[1], 1), &el(&[3], 1)).unwrap());
        assert!(!conjugacy_test(&d, &el(&[0], 1), &el(&[1], 1)).unwrap());
        assert!(conjugacy_test(&d, &el(&[2], 0), &el(&[-2], 0)).unwrap());
        assert!(!conjugacy_test(&d, &el(&[2], 0), &el(&[1], 0)).unwrap());
        assert!(conjugacy_test(&d, &el(&[5], 1), &el(&[5], 1)).unwrap());
    }

    #[test]
    fn representative_examples() {
        let d = VAGroup::infinite_dihedral();
        let reps = geodesic_reps_oracle(&d, RepKind::Elements, 3).unwrap();
        assert_eq!(reps.reps.len(), 1 + 3 + 4 + 4);
        let table = d.ball(3);
        assert!(reps.reps.iter().all(|r| table[&r.element] == r.length && d.eval_indices(&r.word) == r.element));

        let cosets = geodesic_reps_oracle(&d, RepKind::Cosets(vec![el(&[1], 0)]), 4).unwrap();
        let words: Vec<String> = cosets.reps.iter().map(|r| d.render_word(&r.word)).collect();
        assert_eq!(words, vec!["", "t"]);

        let classes = geodesic_reps_oracle(&d, RepKind::ConjugacyClasses, 3).unwrap();
        let found: Vec<(GroupElement, u64)> = classes.reps.iter().map(|r| (r.element.clone(), r.length)).collect();
        assert_eq!(
            found,
            vec![
                (el(&[0], 0), 0),
                (el(&[1], 0), 1),
                (el(&[0], 1), 1),
                (el(&[2], 0), 2),
                (el(&[1], 1), 2),
                (el(&[3], 0), 3)
            ]
        );
        assert_eq!(classes.by_pattern["t"].len(), 2);
        assert_eq!(classes.to_text(&d).lines().next(), Some("ε"));
    }
}
