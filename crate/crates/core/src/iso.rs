//! Backtracking isomorphism test for small labelled multidigraphs.

use crate::digraph::{MultiDigraph, VertexId};
use crate::labelled::LabelledDigraph;

/// Is there a bijection of vertices preserving every ordered edge
/// multiplicity (and, if `exact_labels`, label names)?
pub fn are_isomorphic(d1: &LabelledDigraph, d2: &LabelledDigraph, exact_labels: bool) -> bool {
    let colour = |l: &LabelledDigraph| -> Vec<String> {
        if exact_labels {
            l.digraph.vertices().map(|v| l.label_name(v).to_string()).collect()
        } else {
            vec![String::new(); l.digraph.vertex_count()]
        }
    };
    isomorphism(&d1.digraph, &d2.digraph, &colour(d1), &colour(d2), &[]).is_some()
}

/// Isomorphism of unlabelled digraphs that sends each `pins[i].0` to `pins[i].1`.
pub fn are_isomorphic_pinned(d1: &MultiDigraph, d2: &MultiDigraph, pins: &[(VertexId, VertexId)]) -> bool {
    let c1 = vec![(); d1.vertex_count()];
    let c2 = vec![(); d2.vertex_count()];
    isomorphism(d1, d2, &c1, &c2, pins).is_some()
}

fn matrix(d: &MultiDigraph) -> Vec<u32> {
    let n = d.vertex_count();
    let mut m = vec![0u32; n * n];
    for e in d.edges() {
        m[e.tail * n + e.head] += 1;
    }
    m
}

/// Returns a vertex bijection `d1 -> d2` if one exists.
pub fn isomorphism<C: PartialEq>(
    d1: &MultiDigraph,
    d2: &MultiDigraph,
    c1: &[C],
    c2: &[C],
    pins: &[(VertexId, VertexId)],
) -> Option<Vec<VertexId>> {
    let n = d1.vertex_count();
    if n != d2.vertex_count() || d1.edge_count() != d2.edge_count() {
        return None;
    }
    let (m1, m2) = (matrix(d1), matrix(d2));
    let sig = |d: &MultiDigraph, m: &[u32], v: VertexId| {
        let mut out: Vec<u32> = (0..n).map(|u| m[v * n + u]).filter(|&x| x > 0).collect();
        let mut inn: Vec<u32> = (0..n).map(|u| m[u * n + v]).filter(|&x| x > 0).collect();
        out.sort_unstable();
        inn.sort_unstable();
        (d.out_edges(v).len(), d.in_edges(v).len(), m[v * n + v], out, inn)
    };
    let s1: Vec<_> = (0..n).map(|v| sig(d1, &m1, v)).collect();
    let s2: Vec<_> = (0..n).map(|v| sig(d2, &m2, v)).collect();
    let mut a = s1.clone();
    let mut b = s2.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(x, y) in pins {
        if x >= n || y >= n || (map[x] != usize::MAX && map[x] != y) || (used[y] && map[x] != y) {
            return None;
        }
        map[x] = y;
        used[y] = true;
    }
    // order: pinned first, then by descending degree to prune early
    let mut order: Vec<VertexId> = (0..n).filter(|&v| map[v] == usize::MAX).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(d1.degree(v)));
    let pinned: Vec<VertexId> = (0..n).filter(|&v| map[v] != usize::MAX).collect();
    for &x in &pinned {
        if s1[x] != s2[map[x]] || c1[x] != c2[map[x]] {
            return None;
        }
        for &y in &pinned {
            if m1[x * n + y] != m2[map[x] * n + map[y]] {
                return None;
            }
        }
    }
    let mut placed = pinned;
    if extend(&order, 0, &mut map, &mut used, &mut placed, &m1, &m2, &s1, &s2, c1, c2, n) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<S: PartialEq, C: PartialEq>(
    order: &[VertexId],
    i: usize,
    map: &mut [VertexId],
    used: &mut [bool],
    placed: &mut Vec<VertexId>,
    m1: &[u32],
    m2: &[u32],
    s1: &[S],
    s2: &[S],
    c1: &[C],
    c2: &[C],
    n: usize,
) -> bool {
    if i == order.len() {
        return true;
    }
    let x = order[i];
    for y in 0..n {
        if used[y] || s1[x] != s2[y] || c1[x] != c2[y] {
            continue;
        }
        let ok = placed.iter().all(|&p| {
            m1[x * n + p] == m2[y * n + map[p]] && m1[p * n + x] == m2[map[p] * n + y]
        });
        if !ok {
            continue;
        }
        map[x] = y;
        used[y] = true;
        placed.push(x);
        if extend(order, i + 1, map, used, placed, m1, m2, s1, s2, c1, c2, n) {
            return true;
        }
        placed.pop();
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
