//! Exhaustive small corpora: multidigraphs up to isomorphism and
//! series-parallel shapes.
//!
//! Digraphs are enumerated from their underlying simple graphs. Each simple
//! graph class is expanded by choosing, for every edge, how many parallel
//! copies run each way; expansions are deduplicated by a canonical
//! adjacency-count matrix. Two multidigraphs with different underlying graph
//! classes are never isomorphic, so deduplication stays per class.

use std::collections::{BTreeMap, HashSet};

use crate::digraph::MultiDigraph;
use crate::sp::SpShape;

/// Which multidigraphs to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub connected_only: bool,
    /// Keep only digraphs whose underlying graph is 2-connected.
    pub two_connected_only: bool,
    /// Allow up to `max_edges` loops in total.
    pub loops: bool,
}

impl CorpusSpec {
    /// Connected loopless multidigraphs with 1..=`n` vertices.
    pub fn connected(n: usize, m: usize) -> Self {
        Self {
            min_vertices: 1,
            max_vertices: n,
            max_edges: m,
            connected_only: true,
            two_connected_only: false,
            loops: false,
        }
    }

    /// Loopless multidigraphs with a 2-connected underlying graph and
    /// 2..=`n` vertices.
    pub fn two_connected(n: usize, m: usize) -> Self {
        Self {
            min_vertices: 2,
            two_connected_only: true,
            ..Self::connected(n, m)
        }
    }

    /// All loopless multidigraphs with exactly `n` vertices.
    pub fn exact(n: usize, m: usize) -> Self {
        Self {
            min_vertices: n,
            max_vertices: n,
            max_edges: m,
            connected_only: false,
            two_connected_only: false,
            loops: false,
        }
    }
}

/// Every multidigraph matching `spec`, one per isomorphism class. Vertices
/// are named `v0`, `v1`, ... and edges are added in canonical order.
pub fn digraphs(spec: &CorpusSpec) -> Vec<MultiDigraph> {
    let mut out = Vec::new();
    for n in spec.min_vertices..=spec.max_vertices {
        for simple in simple_graphs(n, spec.max_edges) {
            if spec.connected_only && !simple_connected(n, &simple) {
                continue;
            }
            if spec.two_connected_only && !simple_two_connected(n, &simple) {
                continue;
            }
            let mut seen = HashSet::new();
            let mut counts = vec![0u8; n * n];
            expand(n, &simple, 0, spec.max_edges - simple.len(), spec.loops, &mut counts, &mut |c| {
                if spec.two_connected_only && n == 2 && c.iter().sum::<u8>() < 2 {
                    return;
                }
                let key = canonical_form(n, c);
                if seen.insert(key.clone()) {
                    out.push(from_counts(n, &key, spec.loops));
                }
            });
        }
    }
    out
}

/// Canonical adjacency-count matrix of a digraph: equal for two digraphs
/// exactly when they are isomorphic.
pub fn canonical_key(d: &MultiDigraph) -> (usize, Vec<u8>) {
    let n = d.vertex_count();
    let mut counts = vec![0u8; n * n];
    for e in d.edges() {
        counts[e.tail * n + e.head] += 1;
    }
    (n, canonical_form(n, &counts))
}

fn from_counts(n: usize, counts: &[u8], loops: bool) -> MultiDigraph {
    let mut d = if loops { MultiDigraph::with_loops() } else { MultiDigraph::new() };
    for v in 0..n {
        d.add_vertex(format!("v{v}")).expect("fresh name");
    }
    for a in 0..n {
        for b in 0..n {
            for _ in 0..counts[a * n + b] {
                d.add_edge(a, b).expect("valid edge");
            }
        }
    }
    d
}

/// Simple undirected graphs on `n` vertices with at most `m` edges, one per
/// isomorphism class, as edge lists with `a < b`.
fn simple_graphs(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let total = 1u64 << pairs.len();
    for mask in 0..total {
        if mask.count_ones() as usize > m {
            continue;
        }
        let mut counts = vec![0u8; n * n];
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        for &(a, b) in &edges {
            counts[a * n + b] = 1;
            counts[b * n + a] = 1;
        }
        if seen.insert(canonical_form(n, &counts)) {
            out.push(edges);
        }
    }
    out
}

fn simple_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts == 1
}

/// Connected with no cut vertex; on two vertices the single edge counts,
/// the multiplicity check happens later.
fn simple_two_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if !simple_connected(n, edges) || n < 2 {
        return false;
    }
    (0..n).all(|cut| {
        let rest: Vec<(usize, usize)> = edges
            .iter()
            .filter(|&&(a, b)| a != cut && b != cut)
            .map(|&(a, b)| (a - usize::from(a > cut), b - usize::from(b > cut)))
            .collect();
        n == 2 || simple_connected(n - 1, &rest)
    })
}

/// Assigns forward/backward multiplicities to `simple[i..]`, each edge
/// getting at least one copy; `spare` copies remain beyond that minimum.
/// Loops are placed after the last edge.
fn expand(
    n: usize,
    simple: &[(usize, usize)],
    i: usize,
    spare: usize,
    loops: bool,
    counts: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8]),
) {
    if i == simple.len() {
        if loops {
            place_loops(n, 0, spare, counts, emit);
        } else {
            emit(counts);
        }
        return;
    }
    let (a, b) = simple[i];
    for total in 1..=spare + 1 {
        for fwd in 0..=total {
            counts[a * n + b] = fwd as u8;
            counts[b * n + a] = (total - fwd) as u8;
            expand(n, simple, i + 1, spare + 1 - total, loops, counts, emit);
        }
    }
    counts[a * n + b] = 0;
    counts[b * n + a] = 0;
}

fn place_loops(n: usize, v: usize, spare: usize, counts: &mut Vec<u8>, emit: &mut dyn FnMut(&[u8])) {
    if v == n {
        emit(counts);
        return;
    }
    for c in 0..=spare {
        counts[v * n + v] = c as u8;
        place_loops(n, v + 1, spare - c, counts, emit);
    }
    counts[v * n + v] = 0;
}

/// Lexicographically least relabelled count matrix, searching only the
/// relabellings that sort vertices by an isomorphism-invariant signature.
/// The signature order is part of the key, so the search space shrinks
/// without losing canonicity.
fn canonical_form(n: usize, counts: &[u8]) -> Vec<u8> {
    let basic: Vec<(u32, u32, u8, u32)> = (0..n)
        .map(|v| {
            let out: u32 = (0..n).map(|w| u32::from(counts[v * n + w])).sum();
            let inn: u32 = (0..n).map(|w| u32::from(counts[w * n + v])).sum();
            let nb = (0..n)
                .filter(|&w| w != v && counts[v * n + w] + counts[w * n + v] > 0)
                .count() as u32;
            (out, inn, counts[v * n + v], nb)
        })
        .collect();
    let sig: Vec<_> = (0..n)
        .map(|v| {
            let mut around: Vec<_> = (0..n)
                .filter(|&w| w != v)
                .map(|w| (counts[v * n + w], counts[w * n + v], basic[w]))
                .filter(|&(a, b, _)| a + b > 0)
                .collect();
            around.sort_unstable();
            (basic[v], around)
        })
        .collect();
    let mut groups: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        groups.entry(sig[v].clone()).or_default().push(v);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let mut best: Option<Vec<u8>> = None;
    let mut order = Vec::with_capacity(n);
    permute_groups(&groups, 0, &mut order, &mut |order| {
        let cand: Vec<u8> = order
            .iter()
            .flat_map(|&a| order.iter().map(move |&b| counts[a * n + b]))
            .collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    });
    best.unwrap_or_default()
}

fn permute_groups(groups: &[Vec<usize>], g: usize, order: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if g == groups.len() {
        f(order);
        return;
    }
    let mut items = groups[g].clone();
    heap_permutations(&mut items, groups[g].len(), &mut |perm| {
        let base = order.len();
        order.extend_from_slice(perm);
        permute_groups(groups, g + 1, order, f);
        order.truncate(base);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, f);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, f);
}

/// Normalised series-parallel shapes with exactly `m` edges, one per code.
pub fn sp_shapes_exact(m: usize) -> Vec<SpShape> {
    let mut levels: Vec<Vec<SpShape>> = vec![Vec::new()];
    for size in 1..=m {
        let mut seen = HashSet::new();
        let mut cur = Vec::new();
        if size == 1 {
            for forward in [true, false] {
                let s = SpShape::Edge { forward };
                seen.insert(s.code());
                cur.push(s);
            }
        }
        for left in 1..size {
            for a in &levels[left] {
                for b in &levels[size - left] {
                    for s in [
                        SpShape::Series(vec![a.clone(), b.clone()]),
                        SpShape::Parallel(vec![a.clone(), b.clone()]),
                    ] {
                        let s = s.normalized();
                        if seen.insert(s.code()) {
                            cur.push(s);
                        }
                    }
                }
            }
        }
        levels.push(cur);
    }
    levels.swap_remove(m)
}

/// Normalised shapes with 1..=`m` edges.
pub fn sp_shapes(m: usize) -> Vec<SpShape> {
    (1..=m).flat_map(sp_shapes_exact).collect()
}

/// Whether every terminal-to-terminal thread of the shape runs the same way.
pub fn is_one_way_shape(shape: &SpShape) -> bool {
    fn dir(s: &SpShape) -> Option<bool> {
        match s {
            SpShape::Edge { forward } => Some(*forward),
            SpShape::Series(ch) | SpShape::Parallel(ch) => {
                let mut out = None;
                for c in ch {
                    let d = dir(c)?;
                    if out.is_some_and(|o| o != d) {
                        return None;
                    }
                    out = Some(d);
                }
                out
            }
        }
    }
    dir(shape).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use crate::labelled::LabelledDigraph;

    #[test]
    fn small_counts() {
        // one vertex; a single edge; the three two-edge shapes on two vertices
        assert_eq!(digraphs(&CorpusSpec::connected(1, 3)).len(), 1);
        let two: Vec<_> = digraphs(&CorpusSpec::exact(2, 2));
        // empty, one edge, two parallel, digon
        assert_eq!(two.len(), 4);
        // connected 3-vertex loopless digraphs with at most 2 edges:
        // paths with orientations ->->, -><-, <-->
        assert_eq!(digraphs(&CorpusSpec { min_vertices: 3, ..CorpusSpec::connected(3, 2) }).len(), 3);
    }

    #[test]
    fn classes_are_pairwise_distinct_and_complete() {
        let all = digraphs(&CorpusSpec::connected(4, 4));
        let ld: Vec<_> = all.iter().cloned().map(LabelledDigraph::unlabelled).collect();
        for i in 0..ld.len() {
            for j in i + 1..ld.len().min(i + 40) {
                assert!(!are_isomorphic(&ld[i], &ld[j], true));
            }
        }
        let keys: HashSet<_> = all.iter().map(canonical_key).collect();
        assert_eq!(keys.len(), all.len());
    }

    #[test]
    fn two_connected_filter_matches_blocks() {
        use crate::blocks::is_two_connected;
        let two = digraphs(&CorpusSpec::two_connected(4, 5));
        assert!(two.iter().all(is_two_connected));
        let all = digraphs(&CorpusSpec { min_vertices: 2, ..CorpusSpec::connected(4, 5) });
        assert_eq!(all.iter().filter(|d| is_two_connected(d)).count(), two.len());
    }

    #[test]
    fn canonical_key_is_invariant() {
        let a = MultiDigraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)]).unwrap();
        let b = MultiDigraph::from_edges(4, &[(3, 2), (2, 1), (1, 3), (1, 0), (0, 1)]).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn shape_counts() {
        // e+, e-; then S and P of two edges up to normalisation
        assert_eq!(sp_shapes_exact(1).len(), 2);
        // S(e+,e+) S(e+,e-) S(e-,e+) S(e-,e-) P(e+,e+) P(e+,e-) P(e-,e-)
        assert_eq!(sp_shapes_exact(2).len(), 7);
        assert!(sp_shapes(4).iter().all(|s| s.normalized() == *s));
    }
}
