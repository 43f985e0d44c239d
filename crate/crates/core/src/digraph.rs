//! Directed multigraphs with stable vertex and edge names.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The end of the edge opposite to `v`. For a loop this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.tail == a && self.head == b) || (self.tail == b && self.head == a)
    }
}

/// A finite directed multigraph. Vertices and edges are dense integer ids;
/// each carries a string name that survives serialization and subgraph
/// extraction.
#[derive(Debug, Clone, Default)]
pub struct MultiDigraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    loops_allowed: bool,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

/// Correspondence between a derived digraph and its source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubgraphMap {
    /// new vertex id -> source vertex id
    pub vertices: Vec<VertexId>,
    /// new edge id -> source edge id
    pub edges: Vec<EdgeId>,
}

impl SubgraphMap {
    /// Source vertex id -> new vertex id.
    pub fn vertex_lookup(&self, source_n: usize) -> Vec<Option<VertexId>> {
        let mut out = vec![None; source_n];
        for (new, &old) in self.vertices.iter().enumerate() {
            out[old] = Some(new);
        }
        out
    }

    pub fn edge_lookup(&self, source_m: usize) -> Vec<Option<EdgeId>> {
        let mut out = vec![None; source_m];
        for (new, &old) in self.edges.iter().enumerate() {
            out[old] = Some(new);
        }
        out
    }
}

impl MultiDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_loops() -> Self {
        Self {
            loops_allowed: true,
            ..Self::default()
        }
    }

    /// `n` vertices named `v0..`, edges named `e0..` in the given order.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut d = Self::new();
        if edges.iter().any(|&(a, b)| a == b) {
            d.loops_allowed = true;
        }
        for i in 0..n {
            d.add_vertex(format!("v{i}"))?;
        }
        for &(a, b) in edges {
            d.add_edge(a, b)?;
        }
        Ok(d)
    }

    pub fn loops_allowed(&self) -> bool {
        self.loops_allowed
    }

    pub fn set_loops_allowed(&mut self, allowed: bool) -> Result<()> {
        if !allowed && self.edges.iter().any(Edge::is_loop) {
            return Err(Error::Structural("digraph contains loops".into()));
        }
        self.loops_allowed = allowed;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count()
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.edge_count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.vertex_index.contains_key(&name) {
            return Err(Error::Structural(format!("duplicate vertex id {name:?}")));
        }
        let id = self.vertex_names.len();
        self.vertex_index.insert(name.clone(), id);
        self.vertex_names.push(name);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        Ok(id)
    }

    /// Adds a vertex with a fresh name derived from `stem`.
    pub fn add_fresh_vertex(&mut self, stem: &str) -> VertexId {
        let mut name = stem.to_string();
        let mut i = 0;
        while self.vertex_index.contains_key(&name) {
            name = format!("{stem}_{i}");
            i += 1;
        }
        self.add_vertex(name).expect("fresh name")
    }

    /// Adds an edge named `e{m}` (or the next free variant of it).
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId) -> Result<EdgeId> {
        let mut name = format!("e{}", self.edges.len());
        let mut i = 0;
        while self.edge_index.contains_key(&name) {
            name = format!("e{}_{i}", self.edges.len());
            i += 1;
        }
        self.add_named_edge(name, tail, head)
    }

    pub fn add_named_edge(
        &mut self,
        name: impl Into<String>,
        tail: VertexId,
        head: VertexId,
    ) -> Result<EdgeId> {
        let name = name.into();
        let n = self.vertex_count();
        if tail >= n || head >= n {
            return Err(Error::Structural(format!(
                "edge {name:?} references a missing vertex"
            )));
        }
        if tail == head && !self.loops_allowed {
            return Err(Error::Structural(format!(
                "edge {name:?} is a loop but loops are not allowed"
            )));
        }
        if self.edge_index.contains_key(&name) {
            return Err(Error::Structural(format!("duplicate edge id {name:?}")));
        }
        let id = self.edges.len();
        self.edge_index.insert(name.clone(), id);
        self.edge_names.push(name);
        self.edges.push(Edge { tail, head });
        self.out_adj[tail].push(id);
        self.in_adj[head].push(id);
        Ok(id)
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    /// Every edge incident with `v`, in increasing id order; loops appear once.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.out_adj[v]
            .iter()
            .chain(self.in_adj[v].iter())
            .copied()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Undirected degree, a loop counting twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out_adj[v].len() + self.in_adj[v].len()
    }

    /// Distinct neighbours in the underlying simple graph, sorted.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .incident(v)
            .into_iter()
            .map(|e| self.edges[e].other(v))
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Number of edges from `a` to `b`.
    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        self.out_adj[a]
            .iter()
            .filter(|&&e| self.edges[e].head == b)
            .count()
    }

    /// Subgraph formed by `edges` plus `extra` vertices; vertex and edge
    /// order follows the source ids.
    pub fn edge_subgraph(&self, edges: &[EdgeId], extra: &[VertexId]) -> (MultiDigraph, SubgraphMap) {
        let mut keep_v = vec![false; self.vertex_count()];
        for &e in edges {
            keep_v[self.edges[e].tail] = true;
            keep_v[self.edges[e].head] = true;
        }
        for &v in extra {
            keep_v[v] = true;
        }
        let mut keep_e = vec![false; self.edge_count()];
        for &e in edges {
            keep_e[e] = true;
        }
        self.filtered(&keep_v, &keep_e)
    }

    /// Subgraph induced by the vertices flagged in `keep`.
    pub fn induced(&self, keep: &[bool]) -> (MultiDigraph, SubgraphMap) {
        let keep_e: Vec<bool> = self
            .edges
            .iter()
            .map(|e| keep[e.tail] && keep[e.head])
            .collect();
        self.filtered(keep, &keep_e)
    }

    pub fn delete_vertices(&self, remove: &[VertexId]) -> (MultiDigraph, SubgraphMap) {
        let mut keep = vec![true; self.vertex_count()];
        for &v in remove {
            keep[v] = false;
        }
        self.induced(&keep)
    }

    pub fn delete_edges(&self, remove: &[EdgeId]) -> (MultiDigraph, SubgraphMap) {
        let keep_v = vec![true; self.vertex_count()];
        let mut keep_e = vec![true; self.edge_count()];
        for &e in remove {
            keep_e[e] = false;
        }
        self.filtered(&keep_v, &keep_e)
    }

    fn filtered(&self, keep_v: &[bool], keep_e: &[bool]) -> (MultiDigraph, SubgraphMap) {
        // names are unique in `self`, so they are copied without the
        // duplicate checks of `add_vertex` and `add_named_edge`
        let mut d = MultiDigraph {
            loops_allowed: self.loops_allowed,
            ..MultiDigraph::default()
        };
        let mut map = SubgraphMap::default();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for v in self.vertices() {
            if keep_v[v] {
                new_id[v] = map.vertices.len();
                map.vertices.push(v);
            }
        }
        let n = map.vertices.len();
        d.vertex_names = map.vertices.iter().map(|&v| self.vertex_names[v].clone()).collect();
        d.vertex_index = d.vertex_names.iter().cloned().zip(0..).collect();
        d.out_adj = vec![Vec::new(); n];
        d.in_adj = vec![Vec::new(); n];
        for e in self.edge_ids() {
            let Edge { tail, head } = self.edges[e];
            if keep_e[e] && keep_v[tail] && keep_v[head] {
                let id = d.edges.len();
                let (t, h) = (new_id[tail], new_id[head]);
                d.edges.push(Edge { tail: t, head: h });
                d.out_adj[t].push(id);
                d.in_adj[h].push(id);
                map.edges.push(e);
            }
        }
        d.edge_names = map.edges.iter().map(|&e| self.edge_names[e].clone()).collect();
        d.edge_index = d.edge_names.iter().cloned().zip(0..).collect();
        (d, map)
    }

    /// Identifies every vertex in `group` into one vertex named after
    /// `keep_name_of` (which must be in `group`), dropping edges that become
    /// loops. Returns the new digraph, the old-to-new vertex map and the
    /// new-to-old edge map.
    pub fn identify(
        &self,
        group: &[VertexId],
        keep_name_of: VertexId,
    ) -> (MultiDigraph, Vec<VertexId>, Vec<EdgeId>) {
        let mut in_group = vec![false; self.vertex_count()];
        for &v in group {
            in_group[v] = true;
        }
        debug_assert!(in_group[keep_name_of]);
        let mut d = MultiDigraph {
            loops_allowed: self.loops_allowed,
            ..MultiDigraph::default()
        };
        let mut vmap = vec![usize::MAX; self.vertex_count()];
        let mut merged = None;
        for v in self.vertices() {
            if in_group[v] {
                let id = *merged.get_or_insert_with(|| {
                    d.add_vertex(self.vertex_names[keep_name_of].clone()).expect("unique")
                });
                vmap[v] = id;
            } else {
                vmap[v] = d.add_vertex(self.vertex_names[v].clone()).expect("unique");
            }
        }
        let mut emap = Vec::new();
        for e in self.edge_ids() {
            let Edge { tail, head } = self.edges[e];
            let (a, b) = (vmap[tail], vmap[head]);
            if a == b && in_group[tail] && in_group[head] {
                continue;
            }
            d.add_named_edge(self.edge_names[e].clone(), a, b).expect("valid edge");
            emap.push(e);
        }
        (d, vmap, emap)
    }

    /// Same digraph with every edge reversed.
    pub fn reversed(&self) -> MultiDigraph {
        let mut d = MultiDigraph {
            loops_allowed: self.loops_allowed,
            ..MultiDigraph::default()
        };
        for v in self.vertices() {
            d.add_vertex(self.vertex_names[v].clone()).expect("unique");
        }
        for e in self.edge_ids() {
            let Edge { tail, head } = self.edges[e];
            d.add_named_edge(self.edge_names[e].clone(), head, tail).expect("valid");
        }
        d
    }

    /// Vertices reachable from `v` in the underlying graph, ignoring `blocked`.
    pub fn component_of(&self, v: VertexId, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        if blocked.get(v).copied().unwrap_or(false) {
            return seen;
        }
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &e in self.out_adj[u].iter().chain(self.in_adj[u].iter()) {
                let w = self.edges[e].other(u);
                if !seen[w] && !blocked.get(w).copied().unwrap_or(false) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Components of the underlying graph after removing `blocked`, each
    /// sorted, listed by smallest vertex.
    pub fn components(&self, blocked: &[bool]) -> Vec<Vec<VertexId>> {
        let mut assigned = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for v in self.vertices() {
            if assigned[v] || blocked.get(v).copied().unwrap_or(false) {
                continue;
            }
            let seen = self.component_of(v, blocked);
            let comp: Vec<VertexId> = self.vertices().filter(|&u| seen[u]).collect();
            for &u in &comp {
                assigned[u] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.components(&[]).len() == 1
    }

    /// Directed reachability from `v` along edges accepted by `allow`.
    pub fn reachable_from(&self, v: VertexId, allow: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.out_adj[u] {
                let w = self.edges[e].head;
                if allow(e) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Shortest directed path from `a` to `b` as an edge list (BFS, ties by
    /// edge id). `Some(vec![])` when `a == b`.
    pub fn directed_path(&self, a: VertexId, b: VertexId, allow: impl Fn(EdgeId) -> bool) -> Option<Vec<EdgeId>> {
        if a == b {
            return Some(Vec::new());
        }
        let n = self.vertex_count();
        let mut pred: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out_adj[u] {
                let w = self.edges[e].head;
                if !allow(e) || seen[w] {
                    continue;
                }
                seen[w] = true;
                pred[w] = Some(e);
                if w == b {
                    let mut path = Vec::new();
                    let mut cur = b;
                    while cur != a {
                        let e = pred[cur].expect("pred");
                        path.push(e);
                        cur = self.edges[e].tail;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Vertex names in id order.
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    /// Edge pairs `(tail, head)` in id order.
    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.edges.iter().map(|e| (e.tail, e.head)).collect()
    }

    /// Disjoint union; the second operand's names get `prefix`.
    pub fn disjoint_union(&self, other: &MultiDigraph, prefix: &str) -> (MultiDigraph, Vec<VertexId>) {
        let mut d = self.clone();
        d.loops_allowed |= other.loops_allowed;
        let mut map = Vec::with_capacity(other.vertex_count());
        for v in other.vertices() {
            map.push(d.add_fresh_vertex(&format!("{prefix}{}", other.vertex_name(v))));
        }
        for e in other.edge_ids() {
            let Edge { tail, head } = other.edge(e);
            let mut name = format!("{prefix}{}", other.edge_name(e));
            while d.edge_by_name(&name).is_some() {
                name.push('\'');
            }
            d.add_named_edge(name, map[tail], map[head]).expect("valid");
        }
        (d, map)
    }
}

impl PartialEq for MultiDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_names == other.vertex_names
            && self.edge_names == other.edge_names
            && self.edges == other.edges
            && self.loops_allowed == other.loops_allowed
    }
}

impl Eq for MultiDigraph {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_unless_allowed() {
        let mut d = MultiDigraph::new();
        let a = d.add_vertex("a").unwrap();
        assert!(d.add_edge(a, a).is_err());
        let mut d = MultiDigraph::with_loops();
        let a = d.add_vertex("a").unwrap();
        assert!(d.add_edge(a, a).is_ok());
    }

    #[test]
    fn parallel_edges_keep_distinct_ids() {
        let d = MultiDigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.multiplicity(0, 1), 2);
        assert_eq!(d.edge_name(1), "e1");
    }

    #[test]
    fn identify_drops_internal_edges() {
        // a -> b -> c, b -> c; merge {b, c}
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (1, 2)]).unwrap();
        let (m, vmap, emap) = d.identify(&[1, 2], 2);
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.edge_count(), 1);
        assert_eq!(emap, vec![0]);
        assert_eq!(m.vertex_name(vmap[1]), "v2");
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut d = MultiDigraph::new();
        d.add_vertex("a").unwrap();
        assert!(d.add_vertex("a").is_err());
    }
}
