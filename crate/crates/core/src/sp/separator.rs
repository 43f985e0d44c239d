use super::{recognize, SpTriple};
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::flow::{max_flow, undirected_cut};

/// An ordered vertex bipartition `[X, Y]` of a triple with `s` in `X`, `t`
/// in `Y`, whose crossing edges number the maximum count of edge-disjoint
/// `s`-`t` threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeparatorCut {
    /// `in_x[v]` is true for `v` in `X`.
    pub in_x: Vec<bool>,
    /// Edges with one end on each side, in id order.
    pub cut_edges: Vec<EdgeId>,
}

impl SeparatorCut {
    pub fn size(&self) -> usize {
        self.cut_edges.len()
    }

    pub fn x_side(&self) -> Vec<VertexId> {
        (0..self.in_x.len()).filter(|&v| self.in_x[v]).collect()
    }

    pub fn y_side(&self) -> Vec<VertexId> {
        (0..self.in_x.len()).filter(|&v| !self.in_x[v]).collect()
    }

    /// The partition given by `in_x` with its crossing edges; whether it is
    /// a separator is checked by [`is_separator`].
    pub fn new(d: &MultiDigraph, in_x: Vec<bool>) -> Self {
        Self::from_sides(d, in_x)
    }

    fn from_sides(d: &MultiDigraph, in_x: Vec<bool>) -> Self {
        let cut_edges = d
            .edge_ids()
            .filter(|&e| {
                let edge = d.edge(e);
                in_x[edge.tail] != in_x[edge.head]
            })
            .collect();
        Self { in_x, cut_edges }
    }
}

/// Which truncation to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Keep `X`, contract `Y` onto the second terminal.
    X,
    /// Keep `Y`, contract `X` onto the first terminal.
    Y,
}

/// A minimum `s`-`t` cut of the triple. `X` is the set of vertices reachable
/// from `s` in the final residual graph, the unique inclusion-minimal source
/// side among minimum cuts.
pub fn separator(tr: &SpTriple) -> SeparatorCut {
    let cut = undirected_cut(&tr.digraph, tr.s, tr.t);
    // every s-t thread is directed, so a directed flow sees the same value
    debug_assert!(
        !tr.direction.is_one_way()
            || cut.value
                == match tr.direction {
                    super::Direction::Forward => max_flow(&tr.digraph, tr.s, tr.t),
                    _ => max_flow(&tr.digraph, tr.t, tr.s),
                }
    );
    let sep = SeparatorCut::from_sides(&tr.digraph, cut.source_side);
    debug_assert_eq!(sep.size(), cut.value);
    sep
}

/// Is `in_x` the `X` side of a separator of `tr`?
pub fn is_separator(tr: &SpTriple, in_x: &[bool]) -> bool {
    let d = &tr.digraph;
    if in_x.len() != d.vertex_count() || !in_x[tr.s] || in_x[tr.t] {
        return false;
    }
    let crossing = d
        .edges()
        .iter()
        .filter(|e| in_x[e.tail] != in_x[e.head])
        .count();
    crossing == undirected_cut(d, tr.s, tr.t).value
}

/// Every separator of `tr`, by enumerating all bipartitions of the
/// non-terminal vertices. Refuses triples with more than 20 of them.
pub fn all_separators(tr: &SpTriple) -> Result<Vec<SeparatorCut>> {
    let d = &tr.digraph;
    let inner: Vec<VertexId> = d.vertices().filter(|&v| v != tr.s && v != tr.t).collect();
    if inner.len() > 20 {
        return Err(Error::Resource(format!(
            "{} non-terminal vertices exceed the separator enumeration limit of 20",
            inner.len()
        )));
    }
    let target = undirected_cut(d, tr.s, tr.t).value;
    let mut out = Vec::new();
    for mask in 0u32..1 << inner.len() {
        let mut in_x = vec![false; d.vertex_count()];
        in_x[tr.s] = true;
        for (i, &v) in inner.iter().enumerate() {
            in_x[v] = mask >> i & 1 == 1;
        }
        let sep = SeparatorCut::from_sides(d, in_x);
        if sep.size() == target {
            out.push(sep);
        }
    }
    Ok(out)
}

/// A truncation with its correspondence to the source triple.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub triple: SpTriple,
    /// Source vertex to truncation vertex; the contracted side maps onto
    /// the merged terminal.
    pub vertex_map: Vec<VertexId>,
    /// Truncation edge to source edge.
    pub edge_map: Vec<EdgeId>,
    /// Propagated labels: the merged vertex takes the label of the terminal
    /// it is named after.
    pub labels: Option<Vec<usize>>,
}

/// Contracts one side of a separator into a single vertex and removes the
/// resulting loops.
pub fn truncate(tr: &SpTriple, cut: &SeparatorCut, side: Side, labels: Option<&[usize]>) -> Result<Truncation> {
    let d = &tr.digraph;
    if !is_separator(tr, &cut.in_x) {
        return Err(Error::Precondition("partition is not a separator of the triple".into()));
    }
    if let Some(l) = labels {
        if l.len() != d.vertex_count() {
            return Err(Error::Precondition("label vector length differs from vertex count".into()));
        }
    }
    let (group, keep) = match side {
        Side::X => (cut.y_side(), tr.t),
        Side::Y => (cut.x_side(), tr.s),
    };
    let (out, vertex_map, edge_map) = d.identify(&group, keep);
    let (s, t) = (vertex_map[tr.s], vertex_map[tr.t]);
    let triple = recognize(&out, s, t)?
        .ok_or_else(|| Error::Internal("truncation is not a series-parallel triple".into()))?;
    if tr.direction.is_one_way() && triple.direction != tr.direction {
        return Err(Error::Internal("truncation changed the direction of the triple".into()));
    }
    let labels = labels.map(|l| {
        let mut new = vec![0; out.vertex_count()];
        let keep_side = |v: VertexId| match side {
            Side::X => cut.in_x[v],
            Side::Y => !cut.in_x[v],
        };
        for v in d.vertices() {
            if keep_side(v) || v == keep {
                new[vertex_map[v]] = l[v];
            }
        }
        new
    });
    Ok(Truncation {
        triple,
        vertex_map,
        edge_map,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(n: usize, e: &[(usize, usize)], s: usize, t: usize) -> SpTriple {
        recognize(&MultiDigraph::from_edges(n, e).unwrap(), s, t).unwrap().unwrap()
    }

    #[test]
    fn single_edge_cut() {
        let tr = triple(2, &[(0, 1)], 0, 1);
        let sep = separator(&tr);
        assert_eq!(sep.size(), 1);
        assert_eq!(sep.x_side(), vec![0]);
    }

    #[test]
    fn two_paths_and_a_chain() {
        let tr = triple(4, &[(0, 2), (2, 1), (0, 3), (3, 1)], 0, 1);
        assert_eq!(separator(&tr).size(), 2);
        let tr = triple(3, &[(0, 2), (2, 1)], 0, 1);
        assert_eq!(separator(&tr).size(), 1);
    }

    #[test]
    fn truncation_at_source_is_a_bundle() {
        // s has two edges into a diamond
        let tr = triple(4, &[(0, 2), (0, 3), (2, 1), (3, 1)], 0, 1);
        let sep = separator(&tr);
        assert_eq!(sep.x_side(), vec![0]);
        let b = truncate(&tr, &sep, Side::X, Some(&[7, 8, 9, 9])).unwrap();
        assert_eq!(b.triple.code(), "P(e+,e+)");
        let t_new = b.triple.t;
        assert_eq!(b.labels.unwrap()[t_new], 8);
    }

    #[test]
    fn bad_partition_rejected() {
        let tr = triple(3, &[(0, 2), (2, 1)], 0, 1);
        let cut = SeparatorCut { in_x: vec![false, false, true], cut_edges: vec![] };
        assert!(matches!(truncate(&tr, &cut, Side::X, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn all_separators_of_chain() {
        let tr = triple(3, &[(0, 2), (2, 1)], 0, 1);
        assert_eq!(all_separators(&tr).unwrap().len(), 2);
    }
}
