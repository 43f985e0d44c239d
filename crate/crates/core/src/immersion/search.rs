use super::{Embedding, EmbeddingConstraints};
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::flow::{directed_flow, FlowLimits};
use crate::labelled::LabelledDigraph;
use crate::sp::recognize;

/// Size limits above which [`find_embedding`] refuses to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_guest_vertices: usize,
    pub max_host_edges: usize,
}

impl Default for SearchGuard {
    fn default() -> Self {
        Self {
            max_guest_vertices: 12,
            max_host_edges: 64,
        }
    }
}

/// Exhaustive search for a strong immersion of `h` into `g` respecting `c`.
/// Vertices are placed first, pruned by degrees, labels and per-pair flow
/// bounds; edges are then routed one at a time along edge-disjoint directed
/// paths that avoid the other images.
pub fn find_embedding(
    h: &LabelledDigraph,
    g: &LabelledDigraph,
    c: &EmbeddingConstraints,
    guard: &SearchGuard,
) -> Result<Option<Embedding>> {
    let (hd, gd) = (&h.digraph, &g.digraph);
    if hd.vertex_count() > guard.max_guest_vertices || gd.edge_count() > guard.max_host_edges {
        return Err(Error::Resource(format!(
            "guest has {} vertices (limit {}), host has {} edges (limit {})",
            hd.vertex_count(),
            guard.max_guest_vertices,
            gd.edge_count(),
            guard.max_host_edges
        )));
    }
    if c.use_labels && h.qo != g.qo {
        return Err(Error::Domain("guest and host use different label orders".into()));
    }
    let mut pin = vec![None; hd.vertex_count()];
    let mut pinned_target = vec![false; gd.vertex_count()];
    for &(a, b) in &c.pins {
        if a >= hd.vertex_count() || b >= gd.vertex_count() {
            return Err(Error::Structural("pin refers to a missing vertex".into()));
        }
        match pin[a] {
            Some(x) if x != b => return Ok(None),
            Some(_) => continue,
            None => {}
        }
        if pinned_target[b] {
            return Ok(None);
        }
        pin[a] = Some(b);
        pinned_target[b] = true;
    }
    if hd.vertex_count() > gd.vertex_count() || hd.edge_count() > gd.edge_count() {
        return Ok(None);
    }
    let mut s = Solver::new(h, g, c.use_labels, pin);
    Ok(s.place(0).then(|| Embedding {
        vertex_map: s.map.clone(),
        edge_map: s.paths.clone(),
    }))
}

/// Does the host triple simulate the guest triple? Searches for an
/// embedding of the guest pinning its terminals onto the host's.
pub fn simulates(
    host: &LabelledDigraph,
    host_terminals: (VertexId, VertexId),
    guest: &LabelledDigraph,
    guest_terminals: (VertexId, VertexId),
    use_labels: bool,
    guard: &SearchGuard,
) -> Result<Option<Embedding>> {
    for (d, (s, t)) in [(host, host_terminals), (guest, guest_terminals)] {
        if recognize(&d.digraph, s, t)?.is_none() {
            return Err(Error::Precondition("not a series-parallel triple".into()));
        }
    }
    let c = EmbeddingConstraints {
        use_labels,
        pins: vec![(guest_terminals.0, host_terminals.0), (guest_terminals.1, host_terminals.1)],
    };
    find_embedding(guest, host, &c, guard)
}

struct Solver<'a> {
    h: &'a MultiDigraph,
    g: &'a MultiDigraph,
    hl: &'a LabelledDigraph,
    gl: &'a LabelledDigraph,
    use_labels: bool,
    pin: Vec<Option<VertexId>>,
    order: Vec<VertexId>,
    map: Vec<VertexId>,
    owner: Vec<VertexId>,
    /// Non-loop guest edges grouped by ordered end pair.
    groups: Vec<(VertexId, VertexId, Vec<EdgeId>)>,
    route_order: Vec<EdgeId>,
    used: Vec<bool>,
    paths: Vec<Vec<EdgeId>>,
}

const NONE: usize = usize::MAX;

impl<'a> Solver<'a> {
    fn new(hl: &'a LabelledDigraph, gl: &'a LabelledDigraph, use_labels: bool, pin: Vec<Option<VertexId>>) -> Self {
        let (h, g) = (&hl.digraph, &gl.digraph);
        let n = h.vertex_count();
        // pinned vertices first, then greedily the vertex most tied to those placed
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for v in h.vertices() {
            if pin[v].is_some() {
                order.push(v);
                placed[v] = true;
            }
        }
        while order.len() < n {
            let next = h
                .vertices()
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let ties = h.neighbors(v).iter().filter(|&&w| placed[w]).count();
                    (ties, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            order.push(next);
            placed[next] = true;
        }
        let mut groups: Vec<(VertexId, VertexId, Vec<EdgeId>)> = Vec::new();
        for e in h.edge_ids() {
            let edge = h.edge(e);
            if edge.is_loop() {
                continue;
            }
            match groups.iter_mut().find(|g| g.0 == edge.tail && g.1 == edge.head) {
                Some(gr) => gr.2.push(e),
                None => groups.push((edge.tail, edge.head, vec![e])),
            }
        }
        // loops last, parallel edges adjacent, larger bundles first
        let mut route_order: Vec<EdgeId> = h.edge_ids().collect();
        route_order.sort_by_key(|&e| {
            let edge = h.edge(e);
            let m = h.multiplicity(edge.tail, edge.head);
            (edge.is_loop(), std::cmp::Reverse(m), edge.tail, edge.head, e)
        });
        Self {
            h,
            g,
            hl,
            gl,
            use_labels,
            pin,
            order,
            map: vec![NONE; n],
            owner: vec![NONE; g.vertex_count()],
            groups,
            route_order,
            used: vec![false; g.edge_count()],
            paths: vec![Vec::new(); h.edge_count()],
        }
    }

    fn candidate_ok(&self, v: VertexId, x: VertexId) -> bool {
        if self.owner[x] != NONE {
            return false;
        }
        if self.use_labels && !self.hl.qo.leq(self.hl.labels[v], self.gl.labels[x]) {
            return false;
        }
        self.g.out_edges(x).len() >= self.h.out_edges(v).len() && self.g.in_edges(x).len() >= self.h.in_edges(v).len()
    }

    fn blocked(&self) -> Vec<bool> {
        self.owner.iter().map(|&o| o != NONE).collect()
    }

    /// Enough edge-disjoint paths for every bundle whose ends are placed?
    fn flows_ok(&self, touching: Option<VertexId>) -> bool {
        let blocked = self.blocked();
        let used = &self.used;
        let allow = |e: EdgeId| !used[e];
        for (a, b, es) in &self.groups {
            if touching.is_some_and(|v| v != *a && v != *b) {
                continue;
            }
            if self.map[*a] == NONE || self.map[*b] == NONE {
                continue;
            }
            let remaining = es.iter().filter(|&&e| self.paths[e].is_empty()).count();
            if remaining == 0 {
                continue;
            }
            let lim = FlowLimits {
                allow: &allow,
                blocked: &blocked,
                limit: remaining,
            };
            if directed_flow(self.g, self.map[*a], self.map[*b], &lim).len() < remaining {
                return false;
            }
        }
        true
    }

    fn place(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return self.flows_ok(None) && self.route(0);
        }
        let v = self.order[i];
        let candidates: Vec<VertexId> = match self.pin[v] {
            Some(x) => vec![x],
            None => self.g.vertices().collect(),
        };
        for x in candidates {
            if !self.candidate_ok(v, x) {
                continue;
            }
            self.map[v] = x;
            self.owner[x] = v;
            if self.flows_ok(Some(v)) && self.place(i + 1) {
                return true;
            }
            self.owner[x] = NONE;
            self.map[v] = NONE;
        }
        false
    }

    fn route(&mut self, i: usize) -> bool {
        if i == self.route_order.len() {
            return true;
        }
        let e = self.route_order[i];
        let edge = self.h.edge(e);
        let (a, b) = (self.map[edge.tail], self.map[edge.head]);
        // parallel guest edges take paths in increasing order
        let floor: Option<Vec<EdgeId>> = (i > 0)
            .then(|| self.route_order[i - 1])
            .filter(|&p| {
                let pe = self.h.edge(p);
                pe.tail == edge.tail && pe.head == edge.head
            })
            .map(|p| self.paths[p].clone());
        let mut on_path = vec![false; self.g.vertex_count()];
        on_path[a] = true;
        let mut path = Vec::new();
        self.extend(i, e, a, b, floor.as_deref(), &mut on_path, &mut path)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        i: usize,
        e: EdgeId,
        cur: VertexId,
        target: VertexId,
        floor: Option<&[EdgeId]>,
        on_path: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
    ) -> bool {
        let out: Vec<EdgeId> = self.g.out_edges(cur).to_vec();
        for f in out {
            if self.used[f] {
                continue;
            }
            path.push(f);
            // prune by the lexicographic floor as soon as the prefix decides it
            if let Some(fl) = floor {
                let m = path.len().min(fl.len());
                if path[..m] < fl[..m] {
                    path.pop();
                    continue;
                }
            }
            let w = self.g.edge(f).head;
            if w == target {
                if floor.map_or(true, |fl| path.as_slice() > fl) {
                    self.used[f] = true;
                    self.paths[e] = path.clone();
                    for &x in path.iter() {
                        self.used[x] = true;
                    }
                    if self.flows_ok(None) && self.route(i + 1) {
                        return true;
                    }
                    for &x in path.iter() {
                        self.used[x] = false;
                    }
                    self.paths[e].clear();
                }
                path.pop();
                continue;
            }
            if on_path[w] || self.owner[w] != NONE {
                path.pop();
                continue;
            }
            self.used[f] = true;
            on_path[w] = true;
            let found = self.extend(i, e, w, target, floor, on_path, path);
            on_path[w] = false;
            self.used[f] = false;
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::check_embedding;
    use crate::qo::QuasiOrder;
    use std::sync::Arc;

    fn ld(n: usize, e: &[(usize, usize)]) -> LabelledDigraph {
        LabelledDigraph::unlabelled(MultiDigraph::from_edges(n, e).unwrap())
    }

    fn find(h: &LabelledDigraph, g: &LabelledDigraph, c: &EmbeddingConstraints) -> Option<Embedding> {
        let r = find_embedding(h, g, c, &SearchGuard::default()).unwrap();
        if let Some(emb) = &r {
            assert_eq!(check_embedding(h, g, emb, c).unwrap(), Ok(()));
        }
        r
    }

    #[test]
    fn single_labelled_vertex() {
        let q = Arc::new(QuasiOrder::chain(vec!["a".into(), "b".into()]).unwrap());
        let h = LabelledDigraph::new(MultiDigraph::from_edges(1, &[]).unwrap(), q.clone(), vec![0]).unwrap();
        let g = LabelledDigraph::new(MultiDigraph::from_edges(2, &[(0, 1)]).unwrap(), q.clone(), vec![0, 1]).unwrap();
        assert!(find(&h, &g, &EmbeddingConstraints::labelled()).is_some());
        let h2 = LabelledDigraph::new(MultiDigraph::from_edges(1, &[]).unwrap(), q, vec![1]).unwrap();
        let e = find(&h2, &g, &EmbeddingConstraints::labelled()).unwrap();
        assert_eq!(e.vertex_map, vec![1]);
    }

    #[test]
    fn digon_versus_parallel_pair() {
        let digon = ld(2, &[(0, 1), (1, 0)]);
        let pair = ld(2, &[(0, 1), (0, 1)]);
        assert!(find(&digon, &pair, &EmbeddingConstraints::default()).is_none());
        assert!(find(&pair, &digon, &EmbeddingConstraints::default()).is_none());
        let c4 = ld(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        // a digon immerses in a directed cycle by routing one edge round the rest
        assert!(find(&digon, &c4, &EmbeddingConstraints::default()).is_some());
    }

    #[test]
    fn pinned_triples() {
        let edge = ld(2, &[(0, 1)]);
        let two_path = ld(3, &[(0, 2), (2, 1)]);
        let pair = ld(2, &[(0, 1), (0, 1)]);
        let g = SearchGuard::default();
        assert!(simulates(&two_path, (0, 1), &edge, (0, 1), false, &g).unwrap().is_some());
        assert!(simulates(&pair, (0, 1), &edge, (0, 1), false, &g).unwrap().is_some());
        assert!(simulates(&edge, (0, 1), &edge, (1, 0), false, &g).unwrap().is_none());
    }

    #[test]
    fn loops_route_to_cycles() {
        let mut h = MultiDigraph::with_loops();
        let v = h.add_vertex("v").unwrap();
        h.add_edge(v, v).unwrap();
        let h = LabelledDigraph::unlabelled(h);
        let tri = ld(3, &[(0, 1), (1, 2), (2, 0)]);
        let e = find(&h, &tri, &EmbeddingConstraints::default()).unwrap();
        assert_eq!(e.edge_map[0].len(), 3);
        assert!(find(&h, &ld(2, &[(0, 1)]), &EmbeddingConstraints::default()).is_none());
    }

    #[test]
    fn guard_is_a_resource_error() {
        let g = ld(2, &[(0, 1)]);
        let tight = SearchGuard { max_guest_vertices: 1, max_host_edges: 64 };
        assert!(matches!(find_embedding(&g, &g, &EmbeddingConstraints::default(), &tight), Err(Error::Resource(_))));
    }
}
