//! Exact alternating-path search.

mod classes;
mod packing;

pub use classes::{branches, classify, is_path_or_cycle_duplication, Class, Item};
pub use packing::{
    max_disjoint_unsheltered_alt_paths, min_hitting_set_of, unsheltered_alt_paths,
    AltPathPacking,
};

use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::thread::Thread;

/// Constraints on the threads considered by [`max_pivots`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AltPathQuery {
    /// Pivot target used by [`has_alt_path`].
    pub k: usize,
    /// The thread must have at least one end in this set.
    pub end_in: Option<Vec<VertexId>>,
    /// The thread must contain a vertex of this set.
    pub must_hit: Option<Vec<VertexId>>,
    /// The thread may not contain these vertices.
    pub forbidden: Vec<VertexId>,
}

impl AltPathQuery {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn ending_at(mut self, vs: &[VertexId]) -> Self {
        self.end_in = Some(vs.to_vec());
        self
    }

    pub fn hitting(mut self, vs: &[VertexId]) -> Self {
        self.must_hit = Some(vs.to_vec());
        self
    }

    pub fn avoiding(mut self, vs: &[VertexId]) -> Self {
        self.forbidden.extend_from_slice(vs);
        self
    }
}

struct Search<'a> {
    adj: Vec<Vec<(EdgeId, VertexId, bool)>>,
    allowed: Vec<bool>,
    hit: Option<Vec<bool>>,
    cap: usize,
    best: Option<usize>,
    best_thread: Option<(Vec<VertexId>, Vec<EdgeId>)>,
    want_witness: bool,
    on_path: Vec<bool>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    remaining: usize,
    _d: &'a MultiDigraph,
}

impl Search<'_> {
    fn record(&mut self, pivots: usize, hits: usize) {
        if self.hit.is_some() && hits == 0 {
            return;
        }
        if self.best.map_or(true, |b| pivots > b) {
            self.best = Some(pivots);
            if self.want_witness {
                self.best_thread = Some((self.vertices.clone(), self.edges.clone()));
            }
        }
    }

    fn done(&self) -> bool {
        self.best.is_some_and(|b| b >= self.cap)
    }

    /// `last` is the traversal direction of the previous edge.
    fn dfs(&mut self, cur: VertexId, last: Option<bool>, pivots: usize, hits: usize) {
        self.record(pivots, hits);
        if self.done() {
            return;
        }
        // every further vertex can add at most one pivot
        if self.best.is_some_and(|b| pivots + self.remaining <= b) {
            return;
        }
        for i in 0..self.adj[cur].len() {
            let (e, w, fwd) = self.adj[cur][i];
            if self.on_path[w] {
                continue;
            }
            let p = pivots + usize::from(last.is_some_and(|l| l != fwd));
            let h = hits + usize::from(self.hit.as_ref().is_some_and(|hs| hs[w]));
            self.on_path[w] = true;
            self.remaining -= 1;
            self.vertices.push(w);
            self.edges.push(e);
            self.dfs(w, Some(fwd), p, h);
            self.edges.pop();
            self.vertices.pop();
            self.remaining += 1;
            self.on_path[w] = false;
            if self.done() {
                return;
            }
        }
    }
}

fn run(d: &MultiDigraph, q: &AltPathQuery, cap: usize, want_witness: bool) -> (Option<usize>, Option<Thread>) {
    let n = d.vertex_count();
    let mut allowed = vec![true; n];
    for &v in &q.forbidden {
        if v < n {
            allowed[v] = false;
        }
    }
    let hit = q.must_hit.as_ref().map(|hs| {
        let mut m = vec![false; n];
        for &v in hs {
            if v < n {
                m[v] = true;
            }
        }
        m
    });
    // Parallel edges with the same orientation behave identically; keep the
    // smallest id.
    let mut adj = vec![Vec::new(); n];
    for (v, list) in adj.iter_mut().enumerate() {
        if !allowed[v] {
            continue;
        }
        for e in d.incident(v) {
            let edge = d.edge(e);
            if edge.is_loop() {
                continue;
            }
            let w = edge.other(v);
            let fwd = edge.tail == v;
            if allowed[w] && !list.iter().any(|&(_, x, f)| x == w && f == fwd) {
                list.push((e, w, fwd));
            }
        }
    }
    let starts: Vec<VertexId> = match &q.end_in {
        Some(vs) => {
            let mut vs: Vec<VertexId> = vs.iter().copied().filter(|&v| v < n && allowed[v]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        }
        None => (0..n).filter(|&v| allowed[v]).collect(),
    };
    let total = allowed.iter().filter(|&&a| a).count();
    let mut s = Search {
        adj,
        allowed,
        hit,
        cap,
        best: None,
        best_thread: None,
        want_witness,
        on_path: vec![false; n],
        vertices: Vec::new(),
        edges: Vec::new(),
        remaining: total,
        _d: d,
    };
    for v in starts {
        debug_assert!(s.allowed[v]);
        s.on_path[v] = true;
        s.remaining -= 1;
        s.vertices.push(v);
        let h = usize::from(s.hit.as_ref().is_some_and(|hs| hs[v]));
        s.dfs(v, None, 0, h);
        s.vertices.pop();
        s.remaining += 1;
        s.on_path[v] = false;
        if s.done() {
            break;
        }
    }
    let witness = s
        .best_thread
        .map(|(vs, es)| Thread::from_parts_unchecked(vs, es));
    (s.best, witness)
}

/// Largest pivot count over threads satisfying `q` (`q.k` is ignored), or
/// `None` when no thread satisfies the constraints.
pub fn max_pivots(d: &MultiDigraph, q: &AltPathQuery) -> Option<usize> {
    run(d, q, usize::MAX, false).0
}

/// Like [`max_pivots`] but stops as soon as `cap` pivots are reached.
pub fn max_pivots_capped(d: &MultiDigraph, q: &AltPathQuery, cap: usize) -> Option<usize> {
    run(d, q, cap, false).0
}

/// A thread achieving [`max_pivots`].
pub fn max_pivot_thread(d: &MultiDigraph, q: &AltPathQuery) -> Option<Thread> {
    run(d, q, usize::MAX, true).1
}

/// Does `d` contain a `q.k`-alternating path satisfying `q`? Trimming an end
/// edge removes at most one pivot, so this is `max_pivots >= k`. For `k = 0`
/// any thread (including a single vertex) qualifies.
pub fn has_alt_path(d: &MultiDigraph, q: &AltPathQuery) -> bool {
    run(d, q, q.k, false).0.is_some_and(|b| b >= q.k)
}

/// A thread with exactly `q.k` pivots satisfying `q`, obtained by trimming a
/// maximum one. Exact when `q.must_hit` is unset; with a hit constraint the
/// trimming may give up and return `None`.
pub fn find_alt_path(d: &MultiDigraph, q: &AltPathQuery) -> Option<Thread> {
    let t = run(d, q, q.k, true).1?;
    if t.pivot_count(d) < q.k {
        return None;
    }
    trim_to(d, t, q)
}

fn trim_to(d: &MultiDigraph, mut t: Thread, q: &AltPathQuery) -> Option<Thread> {
    let ok = |t: &Thread| {
        let (a, b) = t.ends();
        let ends = q.end_in.as_ref().map_or(true, |s| s.contains(&a) || s.contains(&b));
        let hits = q
            .must_hit
            .as_ref()
            .map_or(true, |s| t.vertices().iter().any(|v| s.contains(v)));
        ends && hits
    };
    while t.pivot_count(d) > q.k {
        let n = t.len();
        let back = t.slice(0, n - 1);
        let front = t.slice(1, n);
        t = if ok(&back) && back.pivot_count(d) >= q.k {
            back
        } else if ok(&front) && front.pivot_count(d) >= q.k {
            front
        } else {
            return None;
        };
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::zigzag;

    #[test]
    fn duplicated_cycle_has_no_pivot() {
        let d = MultiDigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 2)]).unwrap();
        assert_eq!(max_pivots(&d, &AltPathQuery::default()), Some(0));
    }

    #[test]
    fn zigzag_spine() {
        let d = zigzag(3);
        assert_eq!(max_pivots(&d, &AltPathQuery::default()), Some(3));
        assert!(has_alt_path(&d, &AltPathQuery::new(3)));
        assert!(!has_alt_path(&d, &AltPathQuery::new(4)));
        let t = find_alt_path(&d, &AltPathQuery::new(2)).unwrap();
        assert_eq!(t.pivot_count(&d), 2);
    }

    #[test]
    fn k_zero_means_any_thread() {
        let d = MultiDigraph::from_edges(1, &[]).unwrap();
        assert!(has_alt_path(&d, &AltPathQuery::new(0)));
        let empty = MultiDigraph::new();
        assert!(!has_alt_path(&empty, &AltPathQuery::new(0)));
        assert_eq!(max_pivots(&empty, &AltPathQuery::default()), None);
    }

    #[test]
    fn end_and_forbid_constraints() {
        let d = zigzag(3); // v0 -> v1 <- v2 -> v3 <- v4
        let q = AltPathQuery::default().ending_at(&[2]);
        assert_eq!(max_pivots(&d, &q), Some(1));
        let q = AltPathQuery::default().ending_at(&[0]);
        assert_eq!(max_pivots(&d, &q), Some(3));
        let q = AltPathQuery::default().avoiding(&[2]);
        assert_eq!(max_pivots(&d, &q), Some(0));
        let q = AltPathQuery::default().hitting(&[0]).avoiding(&[3]);
        assert_eq!(max_pivots(&d, &q), Some(1));
        let q = AltPathQuery::default().ending_at(&[0]).avoiding(&[0]);
        assert_eq!(max_pivots(&d, &q), None);
    }
}
