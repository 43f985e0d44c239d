//! Threads (subdigraphs whose underlying graph is a path) and pivots.

use std::ops::ControlFlow;

use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};

/// A thread stored as its vertex walk and edge sequence;
/// `vertices.len() == edges.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Thread {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Thread {
    pub fn trivial(v: VertexId) -> Self {
        Self {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Builds a thread from an edge sequence, inferring the walk.
    pub fn from_edges(d: &MultiDigraph, edges: &[EdgeId]) -> Result<Self> {
        let Some(&first) = edges.first() else {
            return Err(Error::Structural(
                "an empty edge sequence does not determine a vertex".into(),
            ));
        };
        if first >= d.edge_count() {
            return Err(Error::Structural(format!("unknown edge id {first}")));
        }
        let e0 = d.edge(first);
        let start = if edges.len() == 1 {
            e0.tail.min(e0.head)
        } else {
            let &second = &edges[1];
            if second >= d.edge_count() {
                return Err(Error::Structural(format!("unknown edge id {second}")));
            }
            let e1 = d.edge(second);
            if e1.tail == e0.head || e1.head == e0.head {
                e0.tail
            } else if e1.tail == e0.tail || e1.head == e0.tail {
                e0.head
            } else {
                return Err(Error::Structural("consecutive edges do not meet".into()));
            }
        };
        Self::from_walk(d, start, edges)
    }

    /// Builds a thread starting at `start` and following `edges`.
    pub fn from_walk(d: &MultiDigraph, start: VertexId, edges: &[EdgeId]) -> Result<Self> {
        if start >= d.vertex_count() {
            return Err(Error::Structural(format!("unknown vertex id {start}")));
        }
        let mut seen = vec![false; d.vertex_count()];
        seen[start] = true;
        let mut vertices = vec![start];
        let mut cur = start;
        for &e in edges {
            if e >= d.edge_count() {
                return Err(Error::Structural(format!("unknown edge id {e}")));
            }
            let edge = d.edge(e);
            if edge.is_loop() || (edge.tail != cur && edge.head != cur) {
                return Err(Error::Structural("edge sequence is not a path".into()));
            }
            let next = edge.other(cur);
            if seen[next] {
                return Err(Error::Structural(
                    "edge sequence revisits a vertex; underlying graph is not a path".into(),
                ));
            }
            seen[next] = true;
            vertices.push(next);
            cur = next;
        }
        Ok(Self {
            vertices,
            edges: edges.to_vec(),
        })
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Self { vertices, edges }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn ends(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().expect("nonempty"))
    }

    pub fn has_end(&self, v: VertexId) -> bool {
        let (a, b) = self.ends();
        a == v || b == v
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// `true` at position `i` when edge `i` is traversed tail to head.
    fn forward(&self, d: &MultiDigraph, i: usize) -> bool {
        d.edge(self.edges[i]).tail == self.vertices[i]
    }

    /// Interior vertices where the traversal direction flips, i.e. vertices
    /// with in-degree two or out-degree two in the thread.
    pub fn pivots(&self, d: &MultiDigraph) -> Vec<VertexId> {
        (1..self.edges.len())
            .filter(|&i| self.forward(d, i - 1) != self.forward(d, i))
            .map(|i| self.vertices[i])
            .collect()
    }

    pub fn pivot_count(&self, d: &MultiDigraph) -> usize {
        (1..self.edges.len())
            .filter(|&i| self.forward(d, i - 1) != self.forward(d, i))
            .count()
    }

    /// A thread with no pivot is a directed path in one of its two directions.
    pub fn is_directed(&self, d: &MultiDigraph) -> bool {
        self.pivot_count(d) == 0
    }

    /// Directed from its first vertex to its last.
    pub fn is_directed_forward(&self, d: &MultiDigraph) -> bool {
        (0..self.edges.len()).all(|i| self.forward(d, i))
    }

    pub fn reversed(&self) -> Thread {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Thread { vertices, edges }
    }

    /// Orientation with the smaller end id first.
    pub fn canonical(self) -> Thread {
        let (a, b) = self.ends();
        if b < a {
            self.reversed()
        } else {
            self
        }
    }

    /// Sub-thread between positions `from` and `to` (vertex indices, inclusive).
    pub fn slice(&self, from: usize, to: usize) -> Thread {
        Thread {
            vertices: self.vertices[from..=to].to_vec(),
            edges: self.edges[from..to].to_vec(),
        }
    }
}

/// Pivot count of the thread given by `edges`.
pub fn thread_pivot_count(d: &MultiDigraph, edges: &[EdgeId]) -> Result<usize> {
    Ok(Thread::from_edges(d, edges)?.pivot_count(d))
}

/// Constraint on where a thread's ends lie.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Ends {
    #[default]
    Any,
    /// At least one end in the set.
    Touching(Vec<VertexId>),
    /// One end in the first set and the other in the second.
    Between(Vec<VertexId>, Vec<VertexId>),
}

impl Ends {
    pub fn accepts(&self, a: VertexId, b: VertexId) -> bool {
        match self {
            Ends::Any => true,
            Ends::Touching(s) => s.contains(&a) || s.contains(&b),
            Ends::Between(x, y) => {
                (x.contains(&a) && y.contains(&b)) || (y.contains(&a) && x.contains(&b))
            }
        }
    }
}

/// Visits every thread of `d` accepted by `ends` exactly once, oriented with
/// the smaller end first. Trivial threads come before longer ones from the
/// same start vertex; starts are visited in id order and edges in id order.
pub fn for_each_thread<F>(d: &MultiDigraph, ends: &Ends, mut f: F)
where
    F: FnMut(&Thread) -> ControlFlow<()>,
{
    let n = d.vertex_count();
    let mut on_path = vec![false; n];
    let mut vertices = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    for start in d.vertices() {
        on_path[start] = true;
        vertices.push(start);
        let flow = visit(d, ends, &mut on_path, &mut vertices, &mut edges, &mut f);
        vertices.pop();
        on_path[start] = false;
        if flow.is_break() {
            return;
        }
    }
}

fn visit<F>(
    d: &MultiDigraph,
    ends: &Ends,
    on_path: &mut [bool],
    vertices: &mut Vec<VertexId>,
    edges: &mut Vec<EdgeId>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Thread) -> ControlFlow<()>,
{
    let start = vertices[0];
    let cur = *vertices.last().expect("nonempty");
    if (edges.is_empty() || start < cur) && ends.accepts(start, cur) {
        let t = Thread::from_parts_unchecked(vertices.clone(), edges.clone());
        f(&t)?;
    }
    for e in d.incident(cur) {
        let next = d.edge(e).other(cur);
        if next == cur || on_path[next] {
            continue;
        }
        on_path[next] = true;
        vertices.push(next);
        edges.push(e);
        let flow = visit(d, ends, on_path, vertices, edges, f);
        edges.pop();
        vertices.pop();
        on_path[next] = false;
        flow?;
    }
    ControlFlow::Continue(())
}

pub fn enumerate_threads(d: &MultiDigraph, ends: &Ends) -> Vec<Thread> {
    let mut out = Vec::new();
    for_each_thread(d, ends, |t| {
        out.push(t.clone());
        ControlFlow::Continue(())
    });
    out
}
