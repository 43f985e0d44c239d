use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};

/// An ordered pair of edge-disjoint subgraphs covering the digraph, given by
/// an edge partition. Vertices incident with no edge sit on side B unless
/// listed in `isolated_in_a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Separation {
    pub edges_a: Vec<EdgeId>,
    pub edges_b: Vec<EdgeId>,
    pub isolated_in_a: Vec<VertexId>,
}

impl Separation {
    /// Side A holds `edges_a`; every other edge goes to B.
    pub fn from_side_a(d: &MultiDigraph, mut edges_a: Vec<EdgeId>) -> Result<Self> {
        edges_a.sort_unstable();
        edges_a.dedup();
        if edges_a.iter().any(|&e| e >= d.edge_count()) {
            return Err(Error::Structural("separation references a missing edge".into()));
        }
        let mut in_a = vec![false; d.edge_count()];
        for &e in &edges_a {
            in_a[e] = true;
        }
        let edges_b = d.edge_ids().filter(|&e| !in_a[e]).collect();
        Ok(Self {
            edges_a,
            edges_b,
            isolated_in_a: Vec::new(),
        })
    }

    pub fn validate(&self, d: &MultiDigraph) -> Result<()> {
        let mut count = vec![0u8; d.edge_count()];
        for &e in self.edges_a.iter().chain(self.edges_b.iter()) {
            if e >= d.edge_count() {
                return Err(Error::Structural(format!("edge id {e} out of range")));
            }
            count[e] += 1;
        }
        if count.iter().any(|&c| c != 1) {
            return Err(Error::Structural(
                "separation sides must partition the edge set".into(),
            ));
        }
        for &v in &self.isolated_in_a {
            if v >= d.vertex_count() || d.degree(v) > 0 {
                return Err(Error::Structural(format!(
                    "vertex {v} is not isolated and cannot be assigned a side"
                )));
            }
        }
        Ok(())
    }

    fn side(&self, d: &MultiDigraph, edges: &[EdgeId], a: bool) -> Vec<bool> {
        let mut on = vec![false; d.vertex_count()];
        for &e in edges {
            on[d.edge(e).tail] = true;
            on[d.edge(e).head] = true;
        }
        for v in d.vertices() {
            if d.degree(v) == 0 {
                on[v] = self.isolated_in_a.contains(&v) == a;
            }
        }
        on
    }

    pub fn vertices_a(&self, d: &MultiDigraph) -> Vec<bool> {
        self.side(d, &self.edges_a, true)
    }

    pub fn vertices_b(&self, d: &MultiDigraph) -> Vec<bool> {
        self.side(d, &self.edges_b, false)
    }

    /// `V(A) ∩ V(B)` in id order.
    pub fn boundary(&self, d: &MultiDigraph) -> Vec<VertexId> {
        let (a, b) = (self.vertices_a(d), self.vertices_b(d));
        d.vertices().filter(|&v| a[v] && b[v]).collect()
    }

    pub fn order(&self, d: &MultiDigraph) -> usize {
        self.boundary(d).len()
    }

    /// `V(A) - V(B)`.
    pub fn a_only(&self, d: &MultiDigraph) -> Vec<VertexId> {
        let (a, b) = (self.vertices_a(d), self.vertices_b(d));
        d.vertices().filter(|&v| a[v] && !b[v]).collect()
    }
}
