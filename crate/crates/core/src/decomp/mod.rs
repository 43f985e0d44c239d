//! Series-parallel 2-separations of 2-connected digraphs and the surgery
//! built on them.

mod gadget;
mod strip;
mod witness;

pub use gadget::{gadget_contract, Contracted, Gadget};
pub use strip::{strip, StripKind};
pub use witness::{three_cutvertex_witness, RootWitness};

use std::collections::HashSet;

use crate::altpath::{has_alt_path, unsheltered_alt_paths, AltPathQuery};
use crate::blocks::is_two_connected;
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::separation::Separation;
use crate::sp::{one_way_degrees, parallel_groups, recognize, recognize_edges, Direction};

/// A cover of the digraph by two one-way triples on the same terminals:
/// `(X, s, t)` and `(Y, t, s)`. When `x_edges == y_edges` the whole digraph
/// is a one-way triple on `{s, t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWitness {
    pub s: VertexId,
    pub t: VertexId,
    pub x_edges: Vec<EdgeId>,
    pub y_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepMode {
    /// Every series-parallel 2-separation.
    All,
    /// Those whose A-side is inclusion-maximal.
    Maximal,
    /// The maximal ones, after checking that the digraph is 2-connected
    /// and admits no two-triple cover.
    CrossFree,
}

/// An order-2 separation whose A-side is a one-way series-parallel triple
/// on the boundary. Every thread of A between the boundary vertices runs
/// from `s` to `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sp2Separation {
    pub separation: Separation,
    pub s: VertexId,
    pub t: VertexId,
}

/// Largest number of same-direction groups at one boundary pair whose
/// subsets are enumerated.
const MAX_GROUPS: usize = 24;

/// Series-parallel 2-separations of `d`, ordered by boundary pair and then
/// by A-side edge list.
pub fn sp2seps(d: &MultiDigraph, mode: SepMode) -> Result<Vec<Sp2Separation>> {
    if mode == SepMode::CrossFree {
        if !is_two_connected(d) {
            return Err(Error::Precondition("underlying graph is not 2-connected".into()));
        }
        if let Some(w) = hypothesis_witness(d) {
            return Err(Error::CoverHypothesis(Box::new(w)));
        }
    }
    let all = all_sp2seps(d)?;
    Ok(match mode {
        SepMode::All => all,
        SepMode::Maximal | SepMode::CrossFree => maximal(all),
    })
}

fn all_sp2seps(d: &MultiDigraph) -> Result<Vec<Sp2Separation>> {
    let n = d.vertex_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            // A is a union of pieces meeting only at {a, b}
            let groups = parallel_groups(d, a, b);
            let dirs: Vec<Option<Direction>> = groups
                .iter()
                .map(|g| {
                    one_way_degrees(d, g, a, b)
                        .then(|| recognize_edges(d, g, a, b))
                        .flatten()
                        .map(|r| r.1)
                        .filter(|r| r.is_one_way())
                })
                .collect();
            for dir in [Direction::Forward, Direction::Backward] {
                let idx: Vec<usize> = (0..groups.len()).filter(|&i| dirs[i] == Some(dir)).collect();
                if idx.is_empty() {
                    continue;
                }
                if idx.len() > MAX_GROUPS {
                    return Err(Error::Resource(format!(
                        "{} parallel pieces at one boundary pair exceed the limit of {MAX_GROUPS}",
                        idx.len()
                    )));
                }
                for mask in 1u32..1 << idx.len() {
                    let mut edges_a: Vec<EdgeId> = idx
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> j & 1 == 1)
                        .flat_map(|(_, &i)| groups[i].iter().copied())
                        .collect();
                    edges_a.sort_unstable();
                    let sep = Separation::from_side_a(d, edges_a)?;
                    let vb = sep.vertices_b(d);
                    if !(vb[a] && vb[b]) {
                        continue;
                    }
                    let (s, t) = if dir == Direction::Forward { (a, b) } else { (b, a) };
                    out.push(Sp2Separation { separation: sep, s, t });
                }
            }
        }
    }
    out.sort_by(|x, y| {
        (x.s.min(x.t), x.s.max(x.t), &x.separation.edges_a).cmp(&(y.s.min(y.t), y.s.max(y.t), &y.separation.edges_a))
    });
    Ok(out)
}

fn is_subset(a: &[EdgeId], b: &[EdgeId]) -> bool {
    // both sorted
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn maximal(all: Vec<Sp2Separation>) -> Vec<Sp2Separation> {
    let keep: Vec<bool> = all
        .iter()
        .map(|x| {
            !all.iter().any(|y| {
                y.separation.edges_a.len() > x.separation.edges_a.len()
                    && is_subset(&x.separation.edges_a, &y.separation.edges_a)
            })
        })
        .collect();
    all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x).collect()
}

/// Looks for distinct `s, t` and one-way triples `(X, s, t)`, `(Y, t, s)`
/// with `D = X ∪ Y`. Two forms are searched: `X = Y = D`, and `X`, `Y` an
/// edge bipartition of `D`.
pub fn hypothesis_witness(d: &MultiDigraph) -> Option<CoverWitness> {
    let n = d.vertex_count();
    if n < 2 || d.has_loops() || d.vertices().any(|v| d.degree(v) == 0) {
        return None;
    }
    let all: Vec<EdgeId> = d.edge_ids().collect();
    // a one-way triple on all of D is acyclic with its terminals as the
    // only source and sink
    let sources: Vec<VertexId> = d.vertices().filter(|&v| d.in_edges(v).is_empty()).collect();
    let sinks: Vec<VertexId> = d.vertices().filter(|&v| d.out_edges(v).is_empty()).collect();
    let whole = (sources.len() == 1 && sinks.len() == 1).then(|| (sources[0].min(sinks[0]), sources[0].max(sinks[0])));
    for s in 0..n {
        for t in s + 1..n {
            if whole == Some((s, t)) {
                if let Ok(Some(tr)) = recognize(d, s, t) {
                    if tr.direction.is_one_way() {
                        return Some(CoverWitness { s, t, x_edges: all.clone(), y_edges: all });
                    }
                }
            }
            // (Backward, Backward) is (Forward, Forward) with X and Y swapped
            for (dx, dy) in [
                (Direction::Forward, Direction::Forward),
                (Direction::Forward, Direction::Backward),
                (Direction::Backward, Direction::Forward),
            ] {
                if let Some(w) = CoverSearch::new(d, s, t, dx, dy).run() {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Depth-first assignment of edges to X or Y with local feasibility checks.
struct CoverSearch<'a> {
    d: &'a MultiDigraph,
    s: VertexId,
    t: VertexId,
    dx: Direction,
    dy: Direction,
    order: Vec<EdgeId>,
    /// Vertices whose last incident edge sits at each position of `order`.
    completes: Vec<Vec<VertexId>>,
    in_x: Vec<bool>,
    // per vertex: [x_in, x_out, y_in, y_out]
    deg: Vec<[u16; 4]>,
}

impl<'a> CoverSearch<'a> {
    fn new(d: &'a MultiDigraph, s: VertexId, t: VertexId, dx: Direction, dy: Direction) -> Self {
        let n = d.vertex_count();
        let mut rank = vec![0usize; n];
        let mut next = 2;
        for v in d.vertices() {
            rank[v] = if v == s {
                0
            } else if v == t {
                1
            } else {
                next += 1;
                next - 1
            };
        }
        let mut order: Vec<EdgeId> = d.edge_ids().collect();
        order.sort_by_key(|&e| {
            let edge = d.edge(e);
            (rank[edge.tail].max(rank[edge.head]), rank[edge.tail].min(rank[edge.head]), e)
        });
        let mut last = vec![usize::MAX; n];
        for (i, &e) in order.iter().enumerate() {
            last[d.edge(e).tail] = i;
            last[d.edge(e).head] = i;
        }
        let mut completes = vec![Vec::new(); order.len()];
        for v in d.vertices() {
            if v != s && v != t && last[v] != usize::MAX {
                completes[last[v]].push(v);
            }
        }
        Self {
            d,
            s,
            t,
            dx,
            dy,
            order,
            completes,
            in_x: vec![false; d.edge_count()],
            deg: vec![[0; 4]; n],
        }
    }

    /// May edge `e` join the triple running `dir` from `a` to `b`?
    fn allowed(&self, e: EdgeId, a: VertexId, b: VertexId, dir: Direction) -> bool {
        let edge = self.d.edge(e);
        let (src, dst) = if dir == Direction::Forward { (a, b) } else { (b, a) };
        // the source only emits, the sink only absorbs
        edge.head != src && edge.tail != dst
    }

    fn run(mut self) -> Option<CoverWitness> {
        if self.go(0) {
            let x_edges = self.d.edge_ids().filter(|&e| self.in_x[e]).collect();
            let y_edges = self.d.edge_ids().filter(|&e| !self.in_x[e]).collect();
            Some(CoverWitness { s: self.s, t: self.t, x_edges, y_edges })
        } else {
            None
        }
    }

    fn go(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return self.finish();
        }
        let e = self.order[i];
        let edge = self.d.edge(e);
        for to_x in [true, false] {
            let ok = if to_x {
                self.allowed(e, self.s, self.t, self.dx)
            } else {
                self.allowed(e, self.t, self.s, self.dy)
            };
            if !ok {
                continue;
            }
            let k = if to_x { 0 } else { 2 };
            self.in_x[e] = to_x;
            self.deg[edge.head][k] += 1;
            self.deg[edge.tail][k + 1] += 1;
            let fine = self.completes[i].iter().all(|&v| {
                let dg = self.deg[v];
                let x_ok = dg[0] + dg[1] == 0 || (dg[0] > 0 && dg[1] > 0);
                let y_ok = dg[2] + dg[3] == 0 || (dg[2] > 0 && dg[3] > 0);
                x_ok && y_ok
            });
            let found = fine && self.go(i + 1);
            self.deg[edge.head][k] -= 1;
            self.deg[edge.tail][k + 1] -= 1;
            if found {
                return true;
            }
        }
        false
    }

    fn finish(&self) -> bool {
        // one-way triples are acyclic; this cheap test spares most
        // recognitions
        if !self.acyclic(true) || !self.acyclic(false) {
            return false;
        }
        let x: Vec<EdgeId> = self.d.edge_ids().filter(|&e| self.in_x[e]).collect();
        let y: Vec<EdgeId> = self.d.edge_ids().filter(|&e| !self.in_x[e]).collect();
        let fits = |edges: &[EdgeId], a, b, dir| {
            one_way_degrees(self.d, edges, a, b) && recognize_edges(self.d, edges, a, b).is_some_and(|r| r.1 == dir)
        };
        fits(&x, self.s, self.t, self.dx) && fits(&y, self.t, self.s, self.dy)
    }
}

impl CoverSearch<'_> {
    /// Kahn's algorithm on the edges of one side.
    fn acyclic(&self, x_side: bool) -> bool {
        let d = self.d;
        let mut indeg = vec![0usize; d.vertex_count()];
        let mut count = 0;
        for e in d.edge_ids().filter(|&e| self.in_x[e] == x_side) {
            indeg[d.edge(e).head] += 1;
            count += 1;
        }
        let mut stack: Vec<VertexId> = d.vertices().filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            for &e in d.out_edges(v) {
                if self.in_x[e] == x_side {
                    count -= 1;
                    let h = d.edge(e).head;
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        count == 0
    }
}

/// A minimum vertex set meeting every unsheltered `t`-alternating path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    pub vertices: Vec<VertexId>,
    /// Number of unsheltered paths the set was computed against.
    pub paths: usize,
}

/// Exact minimum hitting set of the unsheltered `t`-alternating paths of a
/// 2-connected digraph with no `(t + 1)`-alternating path.
pub fn min_hitting_set(d: &MultiDigraph, t: usize) -> Result<HittingSet> {
    if !is_two_connected(d) {
        return Err(Error::Precondition("underlying graph is not 2-connected".into()));
    }
    if has_alt_path(d, &AltPathQuery::new(t + 1)) {
        return Err(Error::Precondition(format!("digraph has a {}-alternating path", t + 1)));
    }
    let paths = unsheltered_alt_paths(d, t)?;
    let sets: HashSet<Vec<VertexId>> = paths
        .iter()
        .map(|p| {
            let mut v = p.vertices().to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    let mut sets: Vec<Vec<VertexId>> = sets.into_iter().collect();
    sets.sort();
    Ok(HittingSet {
        vertices: crate::altpath::min_hitting_set_of(&sets),
        paths: paths.len(),
    })
}
