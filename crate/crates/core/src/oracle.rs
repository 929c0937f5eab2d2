//! Brute-force enumeration oracles over small boxes.
//!
//! These are deliberately naive and use machine integers; they exist to
//! cross-check the exact algorithms on desk-sized instances.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::lattice::IntVec;

/// Points of the box `[lo, hi]` that lie in `offset + periods*`.
///
/// Breadth-first search over partial sums confined to the box hull of
/// `box ∪ {offset}` widened by `2·k·max|b|`. By the Steinitz lemma every
/// representation of a box point can be reordered so that all partial sums
/// stay inside that region, so the result is exact.
pub fn linear_points_in_box(offset: &[i64], periods: &[Vec<i64>], lo: &[i64], hi: &[i64]) -> BTreeSet<Vec<i64>> {
    let k = offset.len();
    let m = periods.iter().flat_map(|p| p.iter().map(|x| x.abs())).max().unwrap_or(0);
    let margin = 2 * k as i64 * m;
    let rlo: Vec<i64> = (0..k).map(|i| lo[i].min(offset[i]) - margin).collect();
    let rhi: Vec<i64> = (0..k).map(|i| hi[i].max(offset[i]) + margin).collect();
    let inside = |z: &[i64], a: &[i64], b: &[i64]| (0..k).all(|i| a[i] <= z[i] && z[i] <= b[i]);

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(offset.to_vec());
    queue.push_back(offset.to_vec());
    while let Some(z) = queue.pop_front() {
        for p in periods {
            let next: Vec<i64> = z.iter().zip(p).map(|(a, b)| a + b).collect();
            if inside(&next, &rlo, &rhi) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().filter(|z| inside(z, lo, hi)).collect()
}

/// [`linear_points_in_box`] for `IntVec` arguments that fit in `i64`.
pub fn linear_points_in_box_big(offset: &IntVec, periods: &[IntVec], lo: &IntVec, hi: &IntVec) -> BTreeSet<IntVec> {
    let small = |v: &IntVec| v.to_i64s().expect("oracle inputs fit in i64");
    let ps: Vec<Vec<i64>> = periods.iter().map(small).collect();
    linear_points_in_box(&small(offset), &ps, &small(lo), &small(hi))
        .into_iter()
        .map(|v| IntVec::from_i64s(&v))
        .collect()
}

/// All integer points of `[lo, hi]` in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (a..=b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}
