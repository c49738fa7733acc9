//! Small spaces up to isomorphism, for exhaustive sweeps.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{FinSpace, Kind, Point};
use crate::error::Result;

fn labels(n: usize) -> Vec<Point> {
    (0..n).map(|i| Point::label(&format!("p{i}"))).collect()
}

/// Bit `i * n + j` set means `i ≤ j`.
fn is_preorder(rel: u32, n: usize) -> bool {
    let le = |i: usize, j: usize| rel >> (i * n + j) & 1 == 1;
    (0..n).all(|i| le(i, i))
        && (0..n).all(|i| (0..n).all(|j| !le(i, j) || (0..n).all(|k| !le(j, k) || le(i, k))))
}

fn permuted(rel: u32, n: usize, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if rel >> (i * n + j) & 1 == 1 {
                out |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    out
}

/// All topologies on `n ≤ 4` points up to homeomorphism, as specialization
/// preorders in a canonical labelling.
pub fn topologies(n: usize) -> Result<Vec<FinSpace>> {
    assert!(n <= 4, "at most 4 points");
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let diag: u32 = (0..n).map(|i| 1 << (i * n + i)).sum();
    let off: Vec<usize> = (0..n * n).filter(|b| b % (n + 1) != 0).collect();
    let mut canon = BTreeSet::new();
    for mask in 0u32..(1 << off.len()) {
        let rel = off.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(diag, |r, (_, &b)| r | 1 << b);
        if is_preorder(rel, n) {
            canon.insert(perms.iter().map(|p| permuted(rel, n, p)).min().unwrap_or(rel));
        }
    }
    let pts = labels(n);
    canon
        .into_iter()
        .enumerate()
        .map(|(k, rel)| {
            FinSpace::from_preorder(&format!("top{n}_{k}"), pts.clone(), |a, b| {
                let i = pts.iter().position(|p| p == a).unwrap();
                let j = pts.iter().position(|p| p == b).unwrap();
                rel >> (i * n + j) & 1 == 1
            })
        })
        .collect()
}

/// Integer partitions of `n` in non-increasing order.
fn int_partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|k| {
            int_partitions(n - k, k).into_iter().map(move |mut rest| {
                rest.insert(0, k);
                rest
            })
        })
        .collect()
}

/// All finite measurable spaces on `n` points up to isomorphism: one per
/// integer partition of `n` into atom sizes.
pub fn measurable_spaces(n: usize) -> Result<Vec<FinSpace>> {
    let pts = labels(n);
    int_partitions(n, n)
        .into_iter()
        .enumerate()
        .map(|(k, sizes)| {
            let mut atoms = Vec::new();
            let mut start = 0;
            for s in sizes {
                atoms.push(pts[start..start + s].to_vec());
                start += s;
            }
            FinSpace::from_atoms(&format!("meas{n}_{k}"), pts.clone(), &atoms)
        })
        .collect()
}

/// Discrete set spaces `{p0, …, p(n-1)}`.
pub fn set_space(n: usize) -> FinSpace {
    FinSpace::discrete(&format!("set{n}"), Kind::Set, labels(n)).expect("distinct labels")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequences() {
        // preorders up to isomorphism: 1, 1, 3, 9, 33
        let counts: Vec<usize> = (0..=4).map(|n| topologies(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 3, 9, 33]);
        let t0: Vec<usize> = (0..=4).map(|n| topologies(n).unwrap().iter().filter(|s| s.is_t0()).count()).collect();
        // posets up to isomorphism: 1, 1, 2, 5, 16
        assert_eq!(t0, [1, 1, 2, 5, 16]);
        let parts: Vec<usize> = (0..=4).map(|n| measurable_spaces(n).unwrap().len()).collect();
        assert_eq!(parts, [1, 1, 2, 3, 5]);
    }
}
