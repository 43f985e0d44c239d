//! Unit-capacity flows: edge-disjoint paths and minimum cuts.

use std::collections::VecDeque;

use crate::digraph::{EdgeId, MultiDigraph, VertexId};

/// Options for directed edge-disjoint path search.
#[derive(Clone, Copy)]
pub struct FlowLimits<'a> {
    /// Edges that may be used.
    pub allow: &'a dyn Fn(EdgeId) -> bool,
    /// Vertices that may not appear in the interior of a path.
    pub blocked: &'a [bool],
    /// Stop once this many paths are found.
    pub limit: usize,
}

fn always(_: EdgeId) -> bool {
    true
}

/// Maximum number of edge-disjoint directed `s -> t` paths.
pub fn max_flow(d: &MultiDigraph, s: VertexId, t: VertexId) -> usize {
    directed_flow(d, s, t, &FlowLimits { allow: &always, blocked: &[], limit: usize::MAX }).len()
}

/// Edge-disjoint directed `s -> t` paths of maximum number (capped by
/// `limit`), decomposed into simple paths with the smallest edge ids taken
/// first at every step.
pub fn directed_flow(d: &MultiDigraph, s: VertexId, t: VertexId, lim: &FlowLimits) -> Vec<Vec<EdgeId>> {
    if s == t {
        return Vec::new();
    }
    let n = d.vertex_count();
    let blocked = |v: VertexId| v != t && lim.blocked.get(v).copied().unwrap_or(false);
    let mut flow = vec![false; d.edge_count()];
    let mut value = 0;
    while value < lim.limit {
        let mut pred: Vec<Option<(EdgeId, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in d.out_edges(u) {
                let w = d.edge(e).head;
                if flow[e] || seen[w] || blocked(w) || !(lim.allow)(e) {
                    continue;
                }
                seen[w] = true;
                pred[w] = Some((e, true));
                if w == t {
                    break 'bfs;
                }
                queue.push_back(w);
            }
            for &e in d.in_edges(u) {
                let w = d.edge(e).tail;
                if !flow[e] || seen[w] || blocked(w) {
                    continue;
                }
                seen[w] = true;
                pred[w] = Some((e, false));
                queue.push_back(w);
            }
        }
        if !seen[t] {
            break;
        }
        let mut cur = t;
        while cur != s {
            let (e, fwd) = pred[cur].expect("augmenting path");
            flow[e] = fwd;
            cur = if fwd { d.edge(e).tail } else { d.edge(e).head };
        }
        value += 1;
    }
    decompose_directed(d, s, t, &mut flow, value)
}

fn decompose_directed(d: &MultiDigraph, s: VertexId, t: VertexId, flow: &mut [bool], value: usize) -> Vec<Vec<EdgeId>> {
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut path: Vec<EdgeId> = Vec::new();
        let mut pos: Vec<Option<usize>> = vec![None; d.vertex_count()];
        let mut cur = s;
        pos[s] = Some(0);
        while cur != t {
            let e = *d
                .out_edges(cur)
                .iter()
                .filter(|&&e| flow[e])
                .min()
                .expect("flow conservation");
            flow[e] = false;
            let w = d.edge(e).head;
            if let Some(p) = pos[w] {
                // loop erasure
                for &x in &path[p..] {
                    pos[d.edge(x).head] = None;
                }
                path.truncate(p);
                pos[w] = Some(p);
            } else {
                path.push(e);
                pos[w] = Some(path.len());
            }
            cur = w;
        }
        paths.push(path);
    }
    paths
}

/// Result of an undirected max-flow computation.
#[derive(Debug, Clone)]
pub struct UndirectedCut {
    pub value: usize,
    /// Vertices reachable from `s` in the final residual graph: the
    /// inclusion-minimal source side of a minimum cut.
    pub source_side: Vec<bool>,
    /// A maximum family of edge-disjoint `s`-`t` threads as walks
    /// `(vertices, edges)`.
    pub paths: Vec<(Vec<VertexId>, Vec<EdgeId>)>,
}

/// Maximum number of edge-disjoint `s`-`t` paths in the underlying
/// multigraph, with a minimum cut and a path family.
pub fn undirected_cut(d: &MultiDigraph, s: VertexId, t: VertexId) -> UndirectedCut {
    let n = d.vertex_count();
    // flow[e] in {-1, 0, 1}, positive meaning tail to head
    let mut flow = vec![0i8; d.edge_count()];
    let mut value = 0;
    loop {
        let (seen, pred) = undirected_bfs(d, s, &flow);
        if s == t || !seen[t] {
            let paths = decompose_undirected(d, s, t, &mut flow.clone(), value);
            return UndirectedCut {
                value,
                source_side: seen,
                paths,
            };
        }
        let mut cur = t;
        while cur != s {
            let e = pred[cur].expect("augmenting path");
            let edge = d.edge(e);
            if edge.head == cur {
                flow[e] += 1;
                cur = edge.tail;
            } else {
                flow[e] -= 1;
                cur = edge.head;
            }
        }
        value += 1;
        debug_assert!(value <= d.edge_count() && n > 0);
    }
}

fn undirected_bfs(d: &MultiDigraph, s: VertexId, flow: &[i8]) -> (Vec<bool>, Vec<Option<EdgeId>>) {
    let n = d.vertex_count();
    let mut seen = vec![false; n];
    let mut pred = vec![None; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for e in d.incident(u) {
            let edge = d.edge(e);
            if edge.is_loop() {
                continue;
            }
            let (w, ok) = if edge.tail == u {
                (edge.head, flow[e] < 1)
            } else {
                (edge.tail, flow[e] > -1)
            };
            if ok && !seen[w] {
                seen[w] = true;
                pred[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    (seen, pred)
}

fn decompose_undirected(
    d: &MultiDigraph,
    s: VertexId,
    t: VertexId,
    flow: &mut [i8],
    value: usize,
) -> Vec<(Vec<VertexId>, Vec<EdgeId>)> {
    let leaving = |flow: &[i8], u: VertexId, e: EdgeId| {
        let edge = d.edge(e);
        (edge.tail == u && flow[e] == 1) || (edge.head == u && flow[e] == -1)
    };
    let mut out = Vec::with_capacity(value);
    for _ in 0..value {
        let mut vs = vec![s];
        let mut es: Vec<EdgeId> = Vec::new();
        let mut pos: Vec<Option<usize>> = vec![None; d.vertex_count()];
        pos[s] = Some(0);
        let mut cur = s;
        while cur != t {
            let e = d
                .incident(cur)
                .into_iter()
                .find(|&e| leaving(flow, cur, e))
                .expect("flow conservation");
            flow[e] = 0;
            let w = d.edge(e).other(cur);
            if let Some(p) = pos[w] {
                for &x in &vs[p + 1..] {
                    pos[x] = None;
                }
                vs.truncate(p + 1);
                es.truncate(p);
            } else {
                vs.push(w);
                es.push(e);
                pos[w] = Some(vs.len() - 1);
            }
            cur = w;
        }
        out.push((vs, es));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disjoint_paths() {
        let d = MultiDigraph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        assert_eq!(max_flow(&d, 0, 3), 2);
        let c = undirected_cut(&d, 0, 3);
        assert_eq!(c.value, 2);
        assert_eq!(c.source_side, vec![true, false, false, false]);
    }

    #[test]
    fn bottleneck_vertex() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(max_flow(&d, 0, 2), 1);
        let c = undirected_cut(&d, 0, 2);
        assert_eq!(c.value, 1);
        assert_eq!(c.source_side, vec![true, true, false]);
    }

    #[test]
    fn blocked_interior() {
        let d = MultiDigraph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        let blocked = vec![false, true, false, false];
        let paths = directed_flow(&d, 0, 3, &FlowLimits { allow: &|_| true, blocked: &blocked, limit: 9 });
        assert_eq!(paths, vec![vec![2, 3]]);
    }

    #[test]
    fn undirected_counts_reverse_edges() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_flow(&d, 0, 1), 1);
        assert_eq!(undirected_cut(&d, 0, 1).value, 2);
    }
}
