use std::ops::ControlFlow;

use crate::blocks::is_two_connected;
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::thread::{for_each_thread, Ends, Thread};

/// Outcome of [`three_cutvertex_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootWitness {
    /// `z` is reachable from the root and reaches it back.
    Return {
        z: VertexId,
        to_z: Vec<EdgeId>,
        from_z: Vec<EdgeId>,
    },
    /// A 1-alternating path with one end at the root and the other in
    /// `{x, y}`.
    AltPath(Thread),
}

/// For a 2-connected digraph and distinct `r, x, y`: a `z` in `{x, y}` on a
/// directed closed walk with `r`, or else a 1-alternating path from `r` to
/// `{x, y}`. One of the two always exists; failing to find either is an
/// internal error.
pub fn three_cutvertex_witness(d: &MultiDigraph, r: VertexId, x: VertexId, y: VertexId) -> Result<RootWitness> {
    let n = d.vertex_count();
    if r >= n || x >= n || y >= n {
        return Err(Error::Domain("vertex out of range".into()));
    }
    if r == x || r == y || x == y {
        return Err(Error::Precondition("the three vertices must be distinct".into()));
    }
    if !is_two_connected(d) {
        return Err(Error::Precondition("underlying graph is not 2-connected".into()));
    }
    for z in [x, y] {
        if let (Some(to_z), Some(from_z)) = (d.directed_path(r, z, |_| true), d.directed_path(z, r, |_| true)) {
            return Ok(RootWitness::Return { z, to_z, from_z });
        }
    }
    let mut found = None;
    for_each_thread(d, &Ends::Between(vec![r], vec![x, y]), |t| {
        if t.pivot_count(d) == 1 {
            found = Some(t.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
        .map(|t| {
            // orient from the root
            if t.ends().0 == r {
                RootWitness::AltPath(t)
            } else {
                RootWitness::AltPath(t.reversed())
            }
        })
        .ok_or_else(|| Error::Internal("neither witness shape exists".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bidirected_triangle_returns_x() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        match three_cutvertex_witness(&d, 0, 1, 2).unwrap() {
            RootWitness::Return { z, to_z, from_z } => {
                assert_eq!(z, 1);
                assert_eq!((to_z.len(), from_z.len()), (1, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn directed_triangle() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        match three_cutvertex_witness(&d, 0, 1, 2).unwrap() {
            RootWitness::Return { z, from_z, .. } => {
                assert_eq!(z, 1);
                assert_eq!(from_z, vec![1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alt_path_when_no_return() {
        // 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3: nothing returns to 0
        let d = MultiDigraph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        match three_cutvertex_witness(&d, 0, 1, 2).unwrap() {
            RootWitness::AltPath(t) => {
                assert_eq!(t.ends().0, 0);
                assert_eq!(t.pivot_count(&d), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
