//! Membership tests for the rooted-digraph classes and the triple hierarchy.

use super::{has_alt_path, AltPathQuery};
use crate::blocks::{blocks_and_cuts, is_two_connected};
use crate::digraph::{MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::sp::{self, hierarchy};

/// Classes decided by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    /// Connected, no `t`-alternating path.
    F { t: usize },
    /// No `t`-alternating path, and 2-connected or connected on at most two
    /// vertices.
    FPrime { t: usize },
    /// No `t`-alternating path.
    FStar { t: usize },
    /// Connected, root not a cut vertex, no `(t+1)`-alternating path, no
    /// block with a `t`-alternating path, no `k`-alternating path ending at
    /// the root.
    FRooted { t: usize, k: usize },
    /// One-way series-parallel triple with no `k`-alternating path ending at
    /// either terminal (`k = 0`: a single edge).
    A { k: usize },
    /// The two-branch terminal condition (`k = 0`: a single edge).
    A0 { k: usize },
    /// Level `a` of the alternating parallel/series extension chain over
    /// `A0 { k }`.
    AExt { k: usize, a: usize },
}

/// What is being classified.
#[derive(Debug, Clone, Copy)]
pub enum Item<'a> {
    Rooted(&'a MultiDigraph, VertexId),
    Triple(&'a MultiDigraph, VertexId, VertexId),
}

/// `true` iff `d` has no `k`-alternating path; for `k = 0` this means `d`
/// has no vertex.
pub(crate) fn no_alt_path(d: &MultiDigraph, k: usize) -> bool {
    !has_alt_path(d, &AltPathQuery::new(k))
}

pub fn classify(item: Item<'_>, class: Class) -> Result<bool> {
    match (item, class) {
        (Item::Rooted(d, r), _) if r >= d.vertex_count() => {
            Err(Error::Domain(format!("root {r} is not a vertex")))
        }
        (Item::Rooted(d, _), Class::F { t }) => Ok(d.is_connected() && no_alt_path(d, t)),
        (Item::Rooted(d, _), Class::FPrime { t }) => Ok(no_alt_path(d, t)
            && (is_two_connected(d) || (d.is_connected() && d.vertex_count() <= 2))),
        (Item::Rooted(d, _), Class::FStar { t }) => Ok(no_alt_path(d, t)),
        (Item::Rooted(d, r), Class::FRooted { t, k }) => Ok(in_f_rooted(d, r, t, k)),
        (Item::Triple(d, s, t), Class::A { .. } | Class::A0 { .. } | Class::AExt { .. }) => {
            let tr = sp::recognize(d, s, t)?.ok_or_else(|| {
                Error::Precondition("not a series-parallel triple".into())
            })?;
            if !tr.direction.is_one_way() {
                return Err(Error::Precondition(
                    "series-parallel triple is not one-way".into(),
                ));
            }
            let shape = tr.shape();
            let mut memo = hierarchy::Memo::default();
            Ok(match class {
                Class::A { k } => hierarchy::in_a(&shape, k),
                Class::A0 { k } => hierarchy::in_a0(&shape, k),
                Class::AExt { k, a } => memo.in_ext(&shape, k, a),
                _ => unreachable!(),
            })
        }
        (Item::Triple(..), _) => Err(Error::Precondition(
            "rooted-digraph class asked of a triple".into(),
        )),
        (Item::Rooted(..), _) => Err(Error::Precondition(
            "triple class asked of a rooted digraph".into(),
        )),
    }
}

fn in_f_rooted(d: &MultiDigraph, r: VertexId, t: usize, k: usize) -> bool {
    if !d.is_connected() {
        return false;
    }
    let (blocks, is_cut) = blocks_and_cuts(d);
    if is_cut[r] || !no_alt_path(d, t + 1) {
        return false;
    }
    for b in &blocks {
        let (sub, _) = d.edge_subgraph(&b.edges, &b.vertices);
        if !no_alt_path(&sub, t) {
            return false;
        }
    }
    !has_alt_path(d, &AltPathQuery::new(k).ending_at(&[r]))
}

/// Branches of `(d, r)` at `v`: `v` together with one component of `d - v`
/// that avoids `r`. Each branch is returned as the extracted rooted digraph
/// (root `v`) and its source vertex ids.
pub fn branches(d: &MultiDigraph, r: VertexId, v: VertexId) -> Result<Vec<(MultiDigraph, VertexId, Vec<VertexId>)>> {
    if r >= d.vertex_count() || v >= d.vertex_count() {
        return Err(Error::Domain("vertex out of range".into()));
    }
    if v == r {
        return Err(Error::Domain("branches are taken at a non-root vertex".into()));
    }
    let mut blocked = vec![false; d.vertex_count()];
    blocked[v] = true;
    let mut out = Vec::new();
    for comp in d.components(&blocked) {
        if comp.contains(&r) {
            continue;
        }
        let mut keep = vec![false; d.vertex_count()];
        keep[v] = true;
        for &u in &comp {
            keep[u] = true;
        }
        let (sub, map) = d.induced(&keep);
        let root = map.vertices.iter().position(|&x| x == v).expect("kept");
        out.push((sub, root, map.vertices));
    }
    Ok(out)
}

/// Structure recogniser for connected digraphs with no 1-alternating path:
/// at most two vertices, or a directed path or directed cycle with edges
/// duplicated.
pub fn is_path_or_cycle_duplication(d: &MultiDigraph) -> bool {
    let n = d.vertex_count();
    if !d.is_connected() || d.has_loops() {
        return false;
    }
    if n <= 2 {
        return true;
    }
    let nbrs: Vec<Vec<VertexId>> = d.vertices().map(|v| d.neighbors(v)).collect();
    if nbrs.iter().any(|x| x.len() > 2) {
        return false;
    }
    let ends: Vec<VertexId> = d.vertices().filter(|&v| nbrs[v].len() == 1).collect();
    let (start, cyclic) = match ends.len() {
        0 => (0, true),
        2 => (ends[0], false),
        _ => return false,
    };
    // walk the underlying path or cycle
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = nbrs[cur].iter().copied().find(|&w| w != prev && !order.contains(&w));
        match next {
            Some(w) => {
                order.push(w);
                prev = cur;
                cur = w;
            }
            None => break,
        }
    }
    if order.len() != n {
        return false;
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let step = |a: VertexId, b: VertexId| -> bool {
        // is a -> b a forward step along the order?
        pos[b] == pos[a] + 1 || (cyclic && pos[a] == n - 1 && pos[b] == 0)
    };
    let forward = d.edges().iter().all(|e| step(e.tail, e.head));
    let backward = d.edges().iter().all(|e| step(e.head, e.tail));
    forward || backward
}
