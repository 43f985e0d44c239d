//! Strong immersion embeddings: certificates, the checker, exact search, and
//! homeomorphic embedding of gap-labelled rooted trees.

mod search;
mod tree;

pub use search::{find_embedding, simulates, SearchGuard};
pub use tree::{find_tree_homeo_embedding, find_tree_homeo_embedding_by, Gap, RootedTree, TreeEmbedding};

use serde::{Deserialize, Serialize};

use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::labelled::LabelledDigraph;

/// Vertex map plus one directed path (or directed cycle, for a loop) per
/// edge of the guest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<Vec<EdgeId>>,
}

impl Embedding {
    pub fn identity(d: &MultiDigraph) -> Self {
        Self {
            vertex_map: d.vertices().collect(),
            edge_map: d.edge_ids().map(|e| vec![e]).collect(),
        }
    }
}

/// Extra requirements on an embedding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingConstraints {
    /// Require `label(v) <= label(image(v))`.
    pub use_labels: bool,
    /// Guest vertex `h` must map to host vertex `g`.
    pub pins: Vec<(VertexId, VertexId)>,
}

impl EmbeddingConstraints {
    pub fn labelled() -> Self {
        Self {
            use_labels: true,
            pins: Vec::new(),
        }
    }

    pub fn pinned(mut self, pins: &[(VertexId, VertexId)]) -> Self {
        self.pins.extend_from_slice(pins);
        self
    }
}

/// First condition an embedding breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotInjective { a: VertexId, b: VertexId },
    /// The edge's image is not a directed path between the images of its
    /// ends (or a directed cycle through the image of a loop's end).
    BadPath { edge: EdgeId },
    /// Two edge images share a host edge.
    EdgeDisjointness { first: EdgeId, second: EdgeId, host_edge: EdgeId },
    /// An edge image passes through the image of a vertex not on the edge.
    PassesThroughImage { edge: EdgeId, vertex: VertexId },
    Pin { vertex: VertexId, expected: VertexId },
    Label { vertex: VertexId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotInjective { a, b } => write!(f, "injectivity: vertices {a} and {b} share an image"),
            Violation::BadPath { edge } => write!(f, "path: image of edge {edge} is not a directed path between its ends"),
            Violation::EdgeDisjointness { first, second, host_edge } => {
                write!(f, "edge-disjointness: edges {first} and {second} both use host edge {host_edge}")
            }
            Violation::PassesThroughImage { edge, vertex } => {
                write!(f, "image avoidance: image of edge {edge} meets the image of vertex {vertex}")
            }
            Violation::Pin { vertex, expected } => write!(f, "pin: vertex {vertex} must map to {expected}"),
            Violation::Label { vertex } => write!(f, "label: vertex {vertex} maps to a vertex with an incomparable label"),
        }
    }
}

/// Checks every condition of a strong immersion, plus pins and labels.
/// `Ok(Err(v))` is a false verdict; `Err` means the certificate does not
/// even refer to valid ids.
pub fn check_embedding(
    h: &LabelledDigraph,
    g: &LabelledDigraph,
    emb: &Embedding,
    c: &EmbeddingConstraints,
) -> Result<std::result::Result<(), Violation>> {
    let (hd, gd) = (&h.digraph, &g.digraph);
    if emb.vertex_map.len() != hd.vertex_count() || emb.edge_map.len() != hd.edge_count() {
        return Err(Error::Structural("embedding does not cover the guest".into()));
    }
    if emb.vertex_map.iter().any(|&v| v >= gd.vertex_count())
        || emb.edge_map.iter().flatten().any(|&e| e >= gd.edge_count())
    {
        return Err(Error::Structural("embedding refers to a missing host id".into()));
    }
    if c.pins.iter().any(|&(a, b)| a >= hd.vertex_count() || b >= gd.vertex_count()) {
        return Err(Error::Structural("pin refers to a missing vertex".into()));
    }
    if c.use_labels && h.qo != g.qo {
        return Err(Error::Domain("guest and host use different label orders".into()));
    }
    let mut owner = vec![usize::MAX; gd.vertex_count()];
    for (v, &img) in emb.vertex_map.iter().enumerate() {
        if owner[img] != usize::MAX {
            return Ok(Err(Violation::NotInjective { a: owner[img], b: v }));
        }
        owner[img] = v;
    }
    for e in hd.edge_ids() {
        let edge = hd.edge(e);
        let (a, b) = (emb.vertex_map[edge.tail], emb.vertex_map[edge.head]);
        let Some(verts) = walk(gd, a, &emb.edge_map[e]) else {
            return Ok(Err(Violation::BadPath { edge: e }));
        };
        if *verts.last().expect("nonempty") != b {
            return Ok(Err(Violation::BadPath { edge: e }));
        }
        // simple path, or a simple cycle for a loop
        let inner_end = if edge.is_loop() { verts.len() - 1 } else { verts.len() };
        let mut seen = vec![false; gd.vertex_count()];
        for &v in &verts[..inner_end] {
            if seen[v] {
                return Ok(Err(Violation::BadPath { edge: e }));
            }
            seen[v] = true;
        }
        if edge.is_loop() && emb.edge_map[e].is_empty() {
            return Ok(Err(Violation::BadPath { edge: e }));
        }
        for &v in &verts {
            let o = owner[v];
            if o != usize::MAX && o != edge.tail && o != edge.head {
                return Ok(Err(Violation::PassesThroughImage { edge: e, vertex: o }));
            }
        }
    }
    let mut user = vec![usize::MAX; gd.edge_count()];
    for e in hd.edge_ids() {
        for &f in &emb.edge_map[e] {
            if user[f] != usize::MAX {
                return Ok(Err(Violation::EdgeDisjointness { first: user[f], second: e, host_edge: f }));
            }
            user[f] = e;
        }
    }
    for &(a, b) in &c.pins {
        if emb.vertex_map[a] != b {
            return Ok(Err(Violation::Pin { vertex: a, expected: b }));
        }
    }
    if c.use_labels {
        for v in hd.vertices() {
            if !h.qo.leq(h.labels[v], g.labels[emb.vertex_map[v]]) {
                return Ok(Err(Violation::Label { vertex: v }));
            }
        }
    }
    Ok(Ok(()))
}

/// Vertices visited by following `edges` forward from `start`, or `None`
/// if some edge does not leave the current vertex.
fn walk(d: &MultiDigraph, start: VertexId, edges: &[EdgeId]) -> Option<Vec<VertexId>> {
    let mut out = Vec::with_capacity(edges.len() + 1);
    out.push(start);
    let mut cur = start;
    for &e in edges {
        let edge = d.edge(e);
        if edge.tail != cur {
            return None;
        }
        cur = edge.head;
        out.push(cur);
    }
    Some(out)
}

/// `second` after `first`: vertices map through both, and every edge path
/// is the concatenation of the images of the edges on its first-stage path.
pub fn compose(first: &Embedding, second: &Embedding) -> Result<Embedding> {
    if first.vertex_map.iter().any(|&v| v >= second.vertex_map.len())
        || first.edge_map.iter().flatten().any(|&e| e >= second.edge_map.len())
    {
        return Err(Error::Structural("embeddings do not chain".into()));
    }
    Ok(Embedding {
        vertex_map: first.vertex_map.iter().map(|&v| second.vertex_map[v]).collect(),
        edge_map: first
            .edge_map
            .iter()
            .map(|p| p.iter().flat_map(|&e| second.edge_map[e].iter().copied()).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ld(n: usize, e: &[(usize, usize)]) -> LabelledDigraph {
        LabelledDigraph::unlabelled(MultiDigraph::from_edges(n, e).unwrap())
    }

    #[test]
    fn identity_is_valid() {
        let d = ld(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]);
        let id = Embedding::identity(&d.digraph);
        assert_eq!(check_embedding(&d, &d, &id, &EmbeddingConstraints::default()).unwrap(), Ok(()));
    }

    #[test]
    fn edge_to_two_path() {
        let h = ld(2, &[(0, 1)]);
        let g = ld(3, &[(0, 1), (1, 2)]);
        let emb = Embedding { vertex_map: vec![0, 2], edge_map: vec![vec![0, 1]] };
        assert_eq!(check_embedding(&h, &g, &emb, &EmbeddingConstraints::default()).unwrap(), Ok(()));
        // the path may not pass through the image of another vertex
        let h3 = ld(3, &[(0, 1)]);
        let emb = Embedding { vertex_map: vec![0, 2, 1], edge_map: vec![vec![0, 1]] };
        assert!(matches!(
            check_embedding(&h3, &g, &emb, &EmbeddingConstraints::default()).unwrap(),
            Err(Violation::PassesThroughImage { .. })
        ));
    }

    #[test]
    fn shared_edge_reported() {
        let h = ld(3, &[(0, 1), (2, 1)]);
        let g = ld(4, &[(0, 3), (3, 1), (2, 3)]);
        let emb = Embedding { vertex_map: vec![0, 1, 2], edge_map: vec![vec![0, 1], vec![2, 1]] };
        let v = check_embedding(&h, &g, &emb, &EmbeddingConstraints::default()).unwrap().unwrap_err();
        assert!(matches!(v, Violation::EdgeDisjointness { .. }));
        assert!(v.to_string().starts_with("edge-disjointness"));
    }

    #[test]
    fn dangling_ids_are_errors() {
        let h = ld(2, &[(0, 1)]);
        let emb = Embedding { vertex_map: vec![0, 9], edge_map: vec![vec![0]] };
        assert!(check_embedding(&h, &h, &emb, &EmbeddingConstraints::default()).is_err());
    }

    #[test]
    fn compose_chains() {
        let a = Embedding { vertex_map: vec![0, 2], edge_map: vec![vec![0, 1]] };
        let b = Embedding { vertex_map: vec![0, 1, 3], edge_map: vec![vec![0], vec![1, 2]] };
        let c = compose(&a, &b).unwrap();
        assert_eq!(c.vertex_map, vec![0, 3]);
        assert_eq!(c.edge_map, vec![vec![0, 1, 2]]);
    }
}
