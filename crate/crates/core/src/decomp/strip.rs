use std::sync::Arc;

use crate::digraph::VertexId;
#[cfg(test)]
use crate::digraph::MultiDigraph;
use crate::error::{Error, Result};
use crate::labelled::LabelledDigraph;
use crate::qo::QuasiOrder;

/// What [`strip`] removes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StripKind {
    /// Delete these vertices, in this order; every other vertex records how
    /// many edges join it to each of them.
    Apex(Vec<VertexId>),
    /// Delete all loops; every vertex records its loop count.
    Loops,
}

/// Largest label alphabet [`strip`] will build.
const MAX_ELEMENTS: usize = 4096;

/// Removes the apex set or the loops, folding what was removed into the
/// vertex labels.
///
/// Apex counts range over `{0} ⊔ {1 < 2 < ... < bound}` with zero comparable
/// only to itself; loop counts over the chain `0 < 1 < ... < bound`. The new
/// order is the product of the old one with one count order per recorded
/// number. `bound` defaults to the largest count that occurs.
pub fn strip(d: &LabelledDigraph, kind: &StripKind, bound: Option<usize>) -> Result<LabelledDigraph> {
    match kind {
        StripKind::Apex(xs) => strip_apex(d, xs, bound),
        StripKind::Loops => strip_loops(d, bound),
    }
}

fn product_with(base: &QuasiOrder, count: &QuasiOrder, copies: usize) -> Result<QuasiOrder> {
    let size = (0..copies).try_fold(base.len(), |acc, _| acc.checked_mul(count.len()));
    match size {
        Some(s) if s <= MAX_ELEMENTS => {}
        _ => {
            return Err(Error::Resource(format!(
                "stripped label order would exceed {MAX_ELEMENTS} elements"
            )))
        }
    }
    let mut q = base.clone();
    for _ in 0..copies {
        q = QuasiOrder::product(&q, count);
    }
    Ok(q)
}

fn strip_apex(d: &LabelledDigraph, xs: &[VertexId], bound: Option<usize>) -> Result<LabelledDigraph> {
    let g = &d.digraph;
    let n = g.vertex_count();
    if let Some(&x) = xs.iter().find(|&&x| x >= n) {
        return Err(Error::Domain(format!("apex vertex {x} is not a vertex")));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != xs.len() {
        return Err(Error::Domain("apex set lists a vertex twice".into()));
    }
    let (rest, map) = g.delete_vertices(xs);
    // counts[v] = (a_1, b_1, ..., a_m, b_m): edges from x_j to v, then from v to x_j
    let counts: Vec<Vec<usize>> = map
        .vertices
        .iter()
        .map(|&v| {
            xs.iter()
                .flat_map(|&x| [g.multiplicity(x, v), g.multiplicity(v, x)])
                .collect()
        })
        .collect();
    let observed = counts.iter().flatten().copied().max().unwrap_or(0);
    let bound = resolve_bound(bound, observed)?;
    let names = (0..=bound).map(|c| c.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (1..=bound).flat_map(|i| (i..=bound).map(move |j| (i, j))).collect();
    let count_order = QuasiOrder::from_pairs(names, &pairs)?;
    let qo = product_with(&d.qo, &count_order, 2 * xs.len())?;
    let labels = relabel(&map.vertices, &counts, d, bound);
    LabelledDigraph::new(rest, Arc::new(qo), labels)
}

fn strip_loops(d: &LabelledDigraph, bound: Option<usize>) -> Result<LabelledDigraph> {
    let g = &d.digraph;
    let loops: Vec<_> = g.edge_ids().filter(|&e| g.edge(e).is_loop()).collect();
    let (mut rest, map) = g.delete_edges(&loops);
    rest.set_loops_allowed(false)?;
    let counts: Vec<Vec<usize>> = g.vertices().map(|v| vec![g.multiplicity(v, v)]).collect();
    let observed = counts.iter().flatten().copied().max().unwrap_or(0);
    let bound = resolve_bound(bound, observed)?;
    let count_order = QuasiOrder::chain((0..=bound).map(|c| c.to_string()).collect())?;
    let qo = product_with(&d.qo, &count_order, 1)?;
    let labels = relabel(&map.vertices, &counts, d, bound);
    LabelledDigraph::new(rest, Arc::new(qo), labels)
}

fn resolve_bound(bound: Option<usize>, observed: usize) -> Result<usize> {
    match bound {
        None => Ok(observed),
        Some(b) if b >= observed => Ok(b),
        Some(b) => Err(Error::Domain(format!("count {observed} exceeds the requested bound {b}"))),
    }
}

/// Index of `(label, c_1, ..., c_m)` in the left-nested product order.
fn relabel(old: &[VertexId], counts: &[Vec<usize>], d: &LabelledDigraph, bound: usize) -> Vec<usize> {
    old.iter()
        .zip(counts)
        .map(|(&v, cs)| cs.iter().fold(d.labels[v], |acc, &c| acc * (bound + 1) + c))
        .collect()
}

/// Adjacency counts the apex labels should record, computed directly.
#[cfg(test)]
fn apex_counts(g: &MultiDigraph, xs: &[VertexId], v: VertexId) -> Vec<usize> {
    let mut out = Vec::new();
    for &x in xs {
        out.push(g.edges().iter().filter(|e| e.tail == x && e.head == v).count());
        out.push(g.edges().iter().filter(|e| e.tail == v && e.head == x).count());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_become_counts() {
        let mut g = MultiDigraph::with_loops();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        g.add_edge(a, a).unwrap();
        g.add_edge(a, a).unwrap();
        g.add_edge(a, b).unwrap();
        let out = strip(&LabelledDigraph::unlabelled(g), &StripKind::Loops, None).unwrap();
        assert_eq!(out.digraph.edge_count(), 1);
        assert!(!out.digraph.has_loops());
        assert_eq!(out.label_name(0), "(*,2)");
        assert_eq!(out.label_name(1), "(*,0)");
    }

    #[test]
    fn empty_apex_keeps_digraph() {
        let g = MultiDigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let d = LabelledDigraph::unlabelled(g.clone());
        let out = strip(&d, &StripKind::Apex(vec![]), None).unwrap();
        assert_eq!(out.digraph, g);
        assert_eq!(out.qo.len(), 1);
    }

    #[test]
    fn apex_counts_and_order() {
        let g = MultiDigraph::from_edges(3, &[(0, 1), (0, 1), (2, 0)]).unwrap();
        let out = strip(&LabelledDigraph::unlabelled(g.clone()), &StripKind::Apex(vec![0]), None).unwrap();
        assert_eq!(out.digraph.vertex_count(), 2);
        assert_eq!(out.label_name(0), "((*,2),0)");
        assert_eq!(out.label_name(1), "((*,0),1)");
        assert_eq!(apex_counts(&g, &[0], 1), vec![2, 0]);
        // zero is incomparable with positive counts
        assert!(!out.qo.leq(out.labels[1], out.labels[0]));
        assert!(matches!(
            strip(&LabelledDigraph::unlabelled(g), &StripKind::Apex(vec![5]), None),
            Err(Error::Domain(_))
        ));
    }
}
