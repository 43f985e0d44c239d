use super::Sp2Separation;
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::flow::max_flow;

/// One replaced A-side: the directed spine `v0 -> left -> middle -> right -> v1`
/// with each step duplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    /// Index of the separation in the input family.
    pub separation: usize,
    pub v0: VertexId,
    pub left: VertexId,
    pub middle: VertexId,
    pub right: VertexId,
    pub v1: VertexId,
    /// Edge counts of the four spine steps: degree of `v0` in A, the
    /// directed `v0 -> v1` edge-disjoint path count in A (twice), degree of
    /// `v1` in A.
    pub multiplicities: [usize; 4],
    /// Edge ids of each spine step in the contracted digraph.
    pub spine: [Vec<EdgeId>; 4],
}

#[derive(Debug, Clone)]
pub struct Contracted {
    pub digraph: MultiDigraph,
    /// Source vertex to contracted vertex; `None` for deleted vertices.
    pub vertex_map: Vec<Option<VertexId>>,
    /// Contracted edge to source edge; `None` for gadget edges.
    pub edge_map: Vec<Option<EdgeId>>,
    pub gadgets: Vec<Gadget>,
}

/// Replaces the interior of every family member with at least two interior
/// vertices by a duplicated directed path of three new vertices. Edges of A
/// joining the two boundary vertices directly are kept.
pub fn gadget_contract(d: &MultiDigraph, family: &[Sp2Separation]) -> Result<Contracted> {
    let n = d.vertex_count();
    let mut sides = Vec::with_capacity(family.len());
    for sep in family {
        sep.separation.validate(d)?;
        let boundary = sep.separation.boundary(d);
        let mut expect = vec![sep.s, sep.t];
        expect.sort_unstable();
        if boundary != expect {
            return Err(Error::Precondition("family member is not an order-2 separation on its terminals".into()));
        }
        sides.push((sep.separation.vertices_a(d), sep.separation.vertices_b(d)));
    }
    // members must sit inside each other's B-sides
    for i in 0..family.len() {
        for j in 0..family.len() {
            if i == j {
                continue;
            }
            let edges_ok = family[i]
                .separation
                .edges_a
                .iter()
                .all(|e| family[j].separation.edges_a.binary_search(e).is_err());
            let verts_ok = (0..n).all(|v| !sides[i].0[v] || sides[j].1[v]);
            if !edges_ok || !verts_ok {
                return Err(Error::Precondition(format!(
                    "family members {i} and {j} overlap"
                )));
            }
        }
    }
    let chosen: Vec<usize> = (0..family.len())
        .filter(|&i| family[i].separation.a_only(d).len() >= 2)
        .collect();
    let doomed: Vec<VertexId> = chosen.iter().flat_map(|&i| family[i].separation.a_only(d)).collect();
    let (mut out, map) = d.delete_vertices(&doomed);
    let lookup = map.vertex_lookup(n);
    let mut edge_map: Vec<Option<EdgeId>> = map.edges.iter().map(|&e| Some(e)).collect();
    let mut gadgets = Vec::with_capacity(chosen.len());
    for &i in &chosen {
        let sep = &family[i];
        let a_edges = &sep.separation.edges_a;
        let deg_in_a = |v: VertexId| {
            a_edges
                .iter()
                .filter(|&&e| d.edge(e).tail == v || d.edge(e).head == v)
                .count()
        };
        let (sub, sub_map) = d.edge_subgraph(a_edges, &[sep.s, sep.t]);
        let sub_lookup = sub_map.vertex_lookup(n);
        let flow = max_flow(
            &sub,
            sub_lookup[sep.s].expect("terminal kept"),
            sub_lookup[sep.t].expect("terminal kept"),
        );
        let multiplicities = [deg_in_a(sep.s), flow, flow, deg_in_a(sep.t)];
        let v0 = lookup[sep.s].expect("boundary survives");
        let v1 = lookup[sep.t].expect("boundary survives");
        let left = out.add_fresh_vertex(&format!("gadget{i}.L"));
        let middle = out.add_fresh_vertex(&format!("gadget{i}.M"));
        let right = out.add_fresh_vertex(&format!("gadget{i}.R"));
        let steps = [(v0, left), (left, middle), (middle, right), (right, v1)];
        let mut spine: [Vec<EdgeId>; 4] = Default::default();
        for (k, &(a, b)) in steps.iter().enumerate() {
            for c in 0..multiplicities[k] {
                let mut name = format!("gadget{i}.s{k}.{c}");
                while out.edge_by_name(&name).is_some() {
                    name.push('\'');
                }
                spine[k].push(out.add_named_edge(name, a, b)?);
                edge_map.push(None);
            }
        }
        gadgets.push(Gadget {
            separation: i,
            v0,
            left,
            middle,
            right,
            v1,
            multiplicities,
            spine,
        });
    }
    Ok(Contracted {
        digraph: out,
        vertex_map: lookup,
        edge_map,
        gadgets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{sp2seps, SepMode};

    #[test]
    fn two_paths_give_all_twos() {
        // A: 0 -> 2 -> 1 and 0 -> 3 -> 1; B: the back edge 1 -> 0 and 1 -> 4 -> 0
        let g = MultiDigraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (1, 4), (4, 0)]).unwrap();
        let seps = sp2seps(&g, SepMode::All).unwrap();
        let a = seps
            .into_iter()
            .find(|s| s.separation.edges_a == vec![0, 1, 2, 3])
            .unwrap();
        let c = gadget_contract(&g, &[a]).unwrap();
        assert_eq!(c.gadgets[0].multiplicities, [2, 2, 2, 2]);
        assert_eq!(c.digraph.vertex_count(), 6);
        assert_eq!(c.digraph.edge_count(), 2 + 8);
    }

    #[test]
    fn small_side_untouched_and_empty_family() {
        let g = MultiDigraph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        let c = gadget_contract(&g, &[]).unwrap();
        assert_eq!(c.digraph, g);
        let seps = sp2seps(&g, SepMode::All).unwrap();
        let a = seps.into_iter().find(|s| s.separation.edges_a == vec![0, 1]).unwrap();
        let c = gadget_contract(&g, &[a]).unwrap();
        assert!(c.gadgets.is_empty());
        assert_eq!(c.digraph, g);
    }
}
