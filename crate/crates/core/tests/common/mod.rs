//! Seeded random corpora and brute-force oracles shared by the integration
//! and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use vagrowth::automata::{Edge, NFsa};
use vagrowth::lattice::IntVec;
use vagrowth::polyhedral::{BasicPolyhedral, ElementaryRegion, PolyhedralSet};
use vagrowth::semilinear::{LinearSet, SemilinearSet};
use vagrowth::vabgroup::{CWPSet, GroupElement, VAGroup};

pub fn v(xs: &[i64]) -> IntVec {
    IntVec::from_i64s(xs)
}

pub fn random_region(rng: &mut StdRng, dim: usize, c: i64) -> ElementaryRegion {
    let u = IntVec::from_i64s(&(0..dim).map(|_| rng.gen_range(-c..=c)).collect::<Vec<_>>());
    let a = rng.gen_range(-c..=c);
    match rng.gen_range(0..3) {
        0 => ElementaryRegion::equation(u, a),
        1 => {
            let b = rng.gen_range(1..=c);
            ElementaryRegion::congruence(u, a.rem_euclid(b), b)
        }
        _ => ElementaryRegion::inequality(u, a),
    }
}

/// Up to `basics` basic sets, each with up to `regions` regions.
pub fn random_poly(rng: &mut StdRng, dim: usize, c: i64, basics: usize, regions: usize) -> PolyhedralSet {
    let nb = rng.gen_range(1..=basics);
    let bs = (0..nb)
        .map(|_| {
            let nr = rng.gen_range(0..=regions);
            BasicPolyhedral::new((0..nr).map(|_| random_region(rng, dim, c)).collect())
        })
        .collect();
    PolyhedralSet::new(dim, bs).unwrap()
}

/// A linear set with `1..=max_periods` nonzero periods and small entries.
pub fn random_linear(rng: &mut StdRng, dim: usize, max_periods: usize, c: i64) -> LinearSet {
    let n = rng.gen_range(1..=max_periods);
    let mut periods = Vec::with_capacity(n);
    while periods.len() < n {
        let x: Vec<i64> = (0..dim).map(|_| rng.gen_range(-c..=c)).collect();
        if x.iter().any(|&y| y != 0) {
            periods.push(IntVec::from_i64s(&x));
        }
    }
    let offset = IntVec::from_i64s(&(0..dim).map(|_| rng.gen_range(-c..=c)).collect::<Vec<_>>());
    LinearSet::new(offset, periods).unwrap()
}

/// Every point of `[-r, r]^k`.
pub fn box_points(dim: usize, r: i64) -> Vec<IntVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(|p| IntVec::from_i64s(&p)).collect()
}

/// Membership in a semilinear set through the brute-force linear-set oracle.
pub fn semilinear_points(s: &SemilinearSet, r: i64) -> BTreeSet<Vec<i64>> {
    let k = s.dim();
    let lo = vec![-r; k];
    let hi = vec![r; k];
    let mut out = BTreeSet::new();
    for c in s.components() {
        let off = c.offset.to_i64s().unwrap();
        let ps: Vec<Vec<i64>> = c.periods.iter().map(|p| p.to_i64s().unwrap()).collect();
        out.extend(vagrowth::oracle::linear_points_in_box(&off, &ps, &lo, &hi));
    }
    out
}

/// Word lengths by plain breadth-first search over the generators.
pub fn bfs_lengths(g: &VAGroup, radius: usize) -> HashMap<GroupElement, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(g.identity(), 0);
    queue.push_back(g.identity());
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for gen in g.generators() {
            let y = g.mul(&x, &gen.element);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Random coset-wise polyhedral set with small coefficients.
pub fn random_cwp(rng: &mut StdRng, g: &Arc<VAGroup>, c: i64) -> CWPSet {
    let pieces = (0..g.index())
        .map(|_| if rng.gen_bool(0.3) { PolyhedralSet::empty(g.rank()) } else { random_poly(rng, g.rank(), c, 2, 2) })
        .collect();
    CWPSet::new(g.clone(), pieces).unwrap()
}

/// Random 1-tape automaton over `alphabet`; roughly one in six edges is ε.
pub fn random_nfsa(rng: &mut StdRng, arity: usize, alphabet: &[&str], max_states: usize) -> NFsa {
    let states = rng.gen_range(1..=max_states);
    let n_edges = rng.gen_range(0..=2 * states + 1);
    let edges = (0..n_edges)
        .map(|_| Edge {
            from: rng.gen_range(0..states),
            to: rng.gen_range(0..states),
            label: if rng.gen_range(0..6) == 0 {
                None
            } else {
                Some((rng.gen_range(0..arity), rng.gen_range(0..alphabet.len()) as u32))
            },
        })
        .collect();
    let accept: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    NFsa::new(arity, alphabet.iter().map(|s| s.to_string()).collect(), states, 0, accept, edges).unwrap()
}
