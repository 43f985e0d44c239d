//! Alternating paths that no series-parallel 2-separation shelters: exact
//! packing and exact minimum hitting sets.

use std::ops::ControlFlow;

use crate::blocks::is_two_connected;
use crate::decomp::{sp2seps, SepMode, Sp2Separation};
use crate::digraph::{MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::thread::{for_each_thread, Ends, Thread};

/// A maximum family of pairwise vertex-disjoint unsheltered paths.
#[derive(Debug, Clone)]
pub struct AltPathPacking {
    pub size: usize,
    pub paths: Vec<Thread>,
}

fn sheltered(p: &Thread, seps: &[(Sp2Separation, Vec<bool>, Vec<bool>)]) -> bool {
    seps.iter().any(|(_, in_a, va)| {
        p.edges().iter().all(|&e| in_a[e]) && p.vertices().iter().all(|&v| va[v])
    })
}

/// Every thread with exactly `t` pivots that is not contained in the A-side
/// of any series-parallel 2-separation of `d`.
pub fn unsheltered_alt_paths(d: &MultiDigraph, t: usize) -> Result<Vec<Thread>> {
    if !is_two_connected(d) {
        return Err(Error::Structural("underlying graph is not 2-connected".into()));
    }
    let seps: Vec<_> = sp2seps(d, SepMode::Maximal)?
        .into_iter()
        .map(|s| {
            let mut in_a = vec![false; d.edge_count()];
            for &e in &s.separation.edges_a {
                in_a[e] = true;
            }
            let va = s.separation.vertices_a(d);
            (s, in_a, va)
        })
        .collect();
    let mut out = Vec::new();
    for_each_thread(d, &Ends::Any, |p| {
        if p.pivot_count(d) == t && !sheltered(p, &seps) {
            out.push(p.clone());
        }
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Vertex sets of the given threads with every non-minimal set removed.
fn minimal_vertex_sets(paths: &[Thread], n: usize) -> Vec<(u128, usize)> {
    assert!(n <= 128, "packing search supports at most 128 vertices");
    let mut sets: Vec<(u128, usize)> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.vertices().iter().fold(0u128, |m, &v| m | 1 << v), i))
        .collect();
    sets.sort_by_key(|&(m, i)| (m.count_ones(), m, i));
    sets.dedup_by_key(|&mut (m, _)| m);
    let mut out: Vec<(u128, usize)> = Vec::new();
    for (m, i) in sets {
        if !out.iter().any(|&(o, _)| o & m == o) {
            out.push((m, i));
        }
    }
    out
}

pub fn max_disjoint_unsheltered_alt_paths(d: &MultiDigraph, t: usize) -> Result<AltPathPacking> {
    let paths = unsheltered_alt_paths(d, t)?;
    let sets = minimal_vertex_sets(&paths, d.vertex_count());
    let masks: Vec<u128> = sets.iter().map(|&(m, _)| m).collect();
    let chosen = max_packing(&masks);
    Ok(AltPathPacking {
        size: chosen.len(),
        paths: chosen.into_iter().map(|i| paths[sets[i].1].clone()).collect(),
    })
}

/// Indices of a maximum family of pairwise disjoint masks.
pub(crate) fn max_packing(masks: &[u128]) -> Vec<usize> {
    fn go(masks: &[u128], universe: u128, i: usize, used: u128, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if i == masks.len() || cur.len() + (masks.len() - i) <= best.len() {
            return;
        }
        // all remaining sets need at least as many fresh vertices as the smallest one
        let free = (universe & !used).count_ones() as usize;
        let smallest = masks[i..].iter().map(|m| m.count_ones() as usize).min().unwrap_or(1).max(1);
        if cur.len() + free / smallest <= best.len() {
            return;
        }
        if masks[i] & used == 0 {
            cur.push(i);
            go(masks, universe, i + 1, used | masks[i], cur, best);
            cur.pop();
        }
        go(masks, universe, i + 1, used, cur, best);
    }
    let mut best = Vec::new();
    let universe = masks.iter().fold(0, |a, &m| a | m);
    go(masks, universe, 0, 0, &mut Vec::new(), &mut best);
    best
}

/// Minimum set of vertices meeting every given set (exact branch and bound).
/// Sets are vertex id lists; the result is sorted.
pub fn min_hitting_set_of(sets: &[Vec<VertexId>]) -> Vec<VertexId> {
    let masks: Vec<u128> = sets
        .iter()
        .map(|s| s.iter().fold(0u128, |m, &v| m | 1 << v))
        .collect();
    let z = min_hitting_mask(&masks);
    (0..128).filter(|&v| z >> v & 1 == 1).collect()
}

pub(crate) fn min_hitting_mask(masks: &[u128]) -> u128 {
    if masks.iter().any(|&m| m == 0) {
        panic!("an empty set cannot be hit");
    }
    // greedy upper bound
    let mut best = {
        let mut z = 0u128;
        let mut open: Vec<u128> = masks.to_vec();
        while !open.is_empty() {
            let mut counts = [0usize; 128];
            for m in &open {
                for (v, c) in counts.iter_mut().enumerate() {
                    if m >> v & 1 == 1 {
                        *c += 1;
                    }
                }
            }
            let v = (0..128).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).expect("nonempty");
            z |= 1 << v;
            open.retain(|m| m >> v & 1 == 0);
        }
        z
    };
    fn lower_bound(open: &[u128]) -> u32 {
        // number of pairwise disjoint open sets, greedily
        let mut used = 0u128;
        let mut count = 0;
        for &m in open {
            if m & used == 0 {
                used |= m;
                count += 1;
            }
        }
        count
    }
    fn go(open: Vec<u128>, z: u128, best: &mut u128) {
        if open.is_empty() {
            if z.count_ones() < best.count_ones() {
                *best = z;
            }
            return;
        }
        if z.count_ones() + lower_bound(&open) >= best.count_ones() {
            return;
        }
        let pick = *open.iter().min_by_key(|m| m.count_ones()).expect("nonempty");
        for v in 0..128 {
            if pick >> v & 1 == 1 {
                let rest: Vec<u128> = open.iter().copied().filter(|m| m >> v & 1 == 0).collect();
                go(rest, z | 1 << v, best);
            }
        }
    }
    let mut open = masks.to_vec();
    open.sort_by_key(|m| m.count_ones());
    go(open, 0, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hitting_set_small() {
        assert_eq!(min_hitting_set_of(&[vec![0, 1], vec![1, 2], vec![1, 3]]), vec![1]);
        assert_eq!(min_hitting_set_of(&[vec![0], vec![2]]).len(), 2);
        assert!(min_hitting_set_of(&[]).is_empty());
    }

    #[test]
    fn packing_small() {
        let masks = [0b011, 0b110, 0b100, 0b001];
        assert_eq!(max_packing(&masks).len(), 2);
    }

    #[test]
    fn non_two_connected_rejected() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            max_disjoint_unsheltered_alt_paths(&d, 1),
            Err(Error::Structural(_))
        ));
    }
}
