//! Series-parallel triples: recognition, decomposition trees, composition,
//! separators and truncations, and the extension hierarchy.

pub mod hierarchy;
mod separator;

pub use separator::{all_separators, is_separator, separator, truncate, SeparatorCut, Side, Truncation};

use crate::blocks::{blocks_and_cuts, block_cut_tree};
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};

/// Which way the terminal-to-terminal threads of a triple run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Every `s`-`t` thread is a directed path from `s` to `t`.
    Forward,
    /// Every `s`-`t` thread is a directed path from `t` to `s`.
    Backward,
    /// Both directions occur.
    Mixed,
}

impl Direction {
    pub fn is_one_way(self) -> bool {
        self != Direction::Mixed
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
            Direction::Mixed => Direction::Mixed,
        }
    }

    fn merge(dirs: impl IntoIterator<Item = Direction>) -> Direction {
        let mut out = None;
        for d in dirs {
            out = match out {
                None => Some(d),
                Some(prev) if prev == d => Some(d),
                Some(_) => Some(Direction::Mixed),
            };
        }
        out.unwrap_or(Direction::Mixed)
    }
}

/// Decomposition tree of a series-parallel triple over the host digraph's
/// ids. Series children are listed from `s` to `t`; parallel children are
/// sorted by their shape code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTree {
    pub s: VertexId,
    pub t: VertexId,
    pub kind: SpKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpKind {
    /// A single edge joining the terminals; `forward` when it runs `s -> t`.
    Edge { edge: EdgeId, forward: bool },
    Series(Vec<SpTree>),
    Parallel(Vec<SpTree>),
}

impl SpTree {
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        self.collect_edges(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_edges(&self, out: &mut Vec<EdgeId>) {
        match &self.kind {
            SpKind::Edge { edge, .. } => out.push(*edge),
            SpKind::Series(ch) | SpKind::Parallel(ch) => {
                for c in ch {
                    c.collect_edges(out);
                }
            }
        }
    }

    pub fn shape(&self) -> SpShape {
        match &self.kind {
            SpKind::Edge { forward, .. } => SpShape::Edge { forward: *forward },
            SpKind::Series(ch) => SpShape::Series(ch.iter().map(SpTree::shape).collect()),
            SpKind::Parallel(ch) => SpShape::Parallel(ch.iter().map(SpTree::shape).collect()),
        }
    }

    pub fn code(&self) -> String {
        self.shape().code()
    }

    pub fn children(&self) -> &[SpTree] {
        match &self.kind {
            SpKind::Edge { .. } => &[],
            SpKind::Series(ch) | SpKind::Parallel(ch) => ch,
        }
    }
}

/// A series-parallel triple up to isomorphism fixing the terminals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpShape {
    Edge { forward: bool },
    Series(Vec<SpShape>),
    Parallel(Vec<SpShape>),
}

impl SpShape {
    /// Canonical string: `e+`/`e-`, `S(..)` in chain order, `P(..)` sorted.
    /// Two normalised shapes with equal codes build isomorphic triples.
    pub fn code(&self) -> String {
        match self {
            SpShape::Edge { forward: true } => "e+".into(),
            SpShape::Edge { forward: false } => "e-".into(),
            SpShape::Series(ch) => {
                let parts: Vec<String> = ch.iter().map(SpShape::code).collect();
                format!("S({})", parts.join(","))
            }
            SpShape::Parallel(ch) => {
                let mut parts: Vec<String> = ch.iter().map(SpShape::code).collect();
                parts.sort();
                format!("P({})", parts.join(","))
            }
        }
    }

    /// Flattens nested series/parallel nodes, unwraps one-child nodes and
    /// sorts parallel children by code.
    pub fn normalized(&self) -> SpShape {
        match self {
            SpShape::Edge { .. } => self.clone(),
            SpShape::Series(ch) => {
                let mut out = Vec::new();
                for c in ch {
                    match c.normalized() {
                        SpShape::Series(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                if out.len() == 1 {
                    out.pop().expect("one child")
                } else {
                    SpShape::Series(out)
                }
            }
            SpShape::Parallel(ch) => {
                let mut out = Vec::new();
                for c in ch {
                    match c.normalized() {
                        SpShape::Parallel(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                if out.len() == 1 {
                    return out.pop().expect("one child");
                }
                out.sort_by_cached_key(SpShape::code);
                SpShape::Parallel(out)
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            SpShape::Edge { .. } => 1,
            SpShape::Series(ch) | SpShape::Parallel(ch) => ch.iter().map(SpShape::edge_count).sum(),
        }
    }

    /// Builds the triple: `s` is `v0`, `t` is `v1`, internal vertices follow.
    pub fn build(&self) -> (MultiDigraph, VertexId, VertexId) {
        let mut d = MultiDigraph::new();
        let s = d.add_vertex("v0").expect("fresh");
        let t = d.add_vertex("v1").expect("fresh");
        self.build_into(&mut d, s, t);
        (d, s, t)
    }

    fn build_into(&self, d: &mut MultiDigraph, s: VertexId, t: VertexId) {
        match self {
            SpShape::Edge { forward: true } => {
                d.add_edge(s, t).expect("valid");
            }
            SpShape::Edge { forward: false } => {
                d.add_edge(t, s).expect("valid");
            }
            SpShape::Series(ch) => {
                let mut cur = s;
                for (i, c) in ch.iter().enumerate() {
                    let next = if i + 1 == ch.len() {
                        t
                    } else {
                        let name = format!("v{}", d.vertex_count());
                        d.add_fresh_vertex(&name)
                    };
                    c.build_into(d, cur, next);
                    cur = next;
                }
            }
            SpShape::Parallel(ch) => {
                for c in ch {
                    c.build_into(d, s, t);
                }
            }
        }
    }
}

/// A recognised series-parallel triple with its decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTriple {
    pub digraph: MultiDigraph,
    pub s: VertexId,
    pub t: VertexId,
    pub direction: Direction,
    pub tree: SpTree,
}

impl SpTriple {
    pub fn shape(&self) -> SpShape {
        self.tree.shape()
    }

    pub fn code(&self) -> String {
        self.tree.code()
    }
}

/// Decides whether `(d, s, t)` is a series-parallel triple: connected, no
/// separation of order at most one shelters vertices away from both
/// terminals, and every `s`-`t` thread is a directed path.
///
/// The test is structural: a triple is a single terminal edge, a chain of
/// blocks joined at cut vertices (series), or a union of at least two
/// pieces meeting only at `{s, t}` (parallel), each piece recursively a
/// triple and the pieces of a chain all running the same way.
pub fn recognize(d: &MultiDigraph, s: VertexId, t: VertexId) -> Result<Option<SpTriple>> {
    let n = d.vertex_count();
    if s >= n || t >= n {
        return Err(Error::Domain("terminal is not a vertex".into()));
    }
    if s == t {
        return Err(Error::Domain("terminals must be distinct".into()));
    }
    if d.has_loops() || !d.is_connected() {
        return Ok(None);
    }
    let edges: Vec<EdgeId> = d.edge_ids().collect();
    Ok(recognize_edges(d, &edges, s, t).map(|(tree, direction)| SpTriple {
        digraph: d.clone(),
        s,
        t,
        direction,
        tree,
    }))
}

/// Recognition restricted to the subgraph formed by `edges` (its vertex set
/// is the set of their ends).
pub fn recognize_edges(d: &MultiDigraph, edges: &[EdgeId], s: VertexId, t: VertexId) -> Option<(SpTree, Direction)> {
    if edges.is_empty() {
        return None;
    }
    if edges.len() == 1 {
        let e = d.edge(edges[0]);
        if e.is_loop() || !e.joins(s, t) {
            return None;
        }
        let forward = e.tail == s;
        let dir = if forward { Direction::Forward } else { Direction::Backward };
        return Some((
            SpTree {
                s,
                t,
                kind: SpKind::Edge { edge: edges[0], forward },
            },
            dir,
        ));
    }
    let (sub, map) = d.edge_subgraph(edges, &[]);
    let lookup = map.vertex_lookup(d.vertex_count());
    let (ls, lt) = (lookup[s]?, lookup[t]?);
    if sub.has_loops() || !sub.is_connected() {
        return None;
    }
    let bct = block_cut_tree(&sub, ls).ok()?;
    // the block holding t must be the far end of a chain covering all blocks
    if bct.c_index(lt).is_some() {
        return None;
    }
    let t_block = (0..bct.blocks.len()).find(|&b| bct.blocks[b].contains(lt))?;
    let mut chain = vec![t_block];
    let mut c = bct.block_parent[t_block];
    while c != 0 {
        let b = bct.c_parent[c].expect("non-root C-node has a parent");
        chain.push(b);
        c = bct.block_parent[b];
    }
    chain.reverse();
    if chain.len() != bct.blocks.len() {
        return None;
    }
    let back = |es: &[EdgeId]| -> Vec<EdgeId> { es.iter().map(|&e| map.edges[e]).collect() };
    if chain.len() >= 2 {
        let mut children = Vec::with_capacity(chain.len());
        for (i, &b) in chain.iter().enumerate() {
            let entry = map.vertices[bct.entry(b)];
            let exit = if i + 1 < chain.len() {
                map.vertices[bct.entry(chain[i + 1])]
            } else {
                t
            };
            let (child, dir) = recognize_edges(d, &back(&bct.blocks[b].edges), entry, exit)?;
            if !dir.is_one_way() {
                return None;
            }
            children.push((child, dir));
        }
        let dir = Direction::merge(children.iter().map(|c| c.1));
        if !dir.is_one_way() {
            return None;
        }
        return Some((
            SpTree {
                s,
                t,
                kind: SpKind::Series(children.into_iter().map(|c| c.0).collect()),
            },
            dir,
        ));
    }
    let groups = parallel_groups(&sub, ls, lt);
    if groups.len() < 2 {
        return None;
    }
    let mut children = Vec::with_capacity(groups.len());
    for g in &groups {
        let (child, dir) = recognize_edges(d, &back(g), s, t)?;
        children.push((child.code(), child, dir));
    }
    let dir = Direction::merge(children.iter().map(|c| c.2));
    children.sort_by(|a, b| a.0.cmp(&b.0));
    Some((
        SpTree {
            s,
            t,
            kind: SpKind::Parallel(children.into_iter().map(|c| c.1).collect()),
        },
        dir,
    ))
}

/// Necessary condition for a one-way triple on `edges`: one terminal only
/// emits, the other only absorbs, and every other vertex does both.
pub(crate) fn one_way_degrees(d: &MultiDigraph, edges: &[EdgeId], s: VertexId, t: VertexId) -> bool {
    // per vertex: [in, out]
    let mut deg = vec![[0u32; 2]; d.vertex_count()];
    for &e in edges {
        let edge = d.edge(e);
        deg[edge.head][0] += 1;
        deg[edge.tail][1] += 1;
    }
    let interior_ok = deg
        .iter()
        .enumerate()
        .all(|(v, dg)| v == s || v == t || (dg[0] == 0) == (dg[1] == 0));
    let emits_only = |v: VertexId| deg[v][0] == 0 && deg[v][1] > 0;
    let absorbs_only = |v: VertexId| deg[v][1] == 0 && deg[v][0] > 0;
    interior_ok && ((emits_only(s) && absorbs_only(t)) || (emits_only(t) && absorbs_only(s)))
}

/// Pieces of `d` meeting only at `{s, t}`: each component of `d - {s, t}`
/// with its incident edges, and each edge joining `s` and `t` on its own.
/// Edge lists are sorted; groups are ordered by smallest edge.
pub fn parallel_groups(d: &MultiDigraph, s: VertexId, t: VertexId) -> Vec<Vec<EdgeId>> {
    let mut blocked = vec![false; d.vertex_count()];
    blocked[s] = true;
    blocked[t] = true;
    let comps = d.components(&blocked);
    let mut comp_of = vec![usize::MAX; d.vertex_count()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut groups: Vec<Vec<EdgeId>> = vec![Vec::new(); comps.len()];
    let mut direct = Vec::new();
    for e in d.edge_ids() {
        let edge = d.edge(e);
        let c = if comp_of[edge.tail] != usize::MAX {
            comp_of[edge.tail]
        } else {
            comp_of[edge.head]
        };
        if c == usize::MAX {
            if edge.joins(s, t) {
                direct.push(vec![e]);
            }
            // loops at s or t belong to no group
        } else {
            groups[c].push(e);
        }
    }
    groups.retain(|g| !g.is_empty());
    groups.extend(direct);
    groups.sort_by_key(|g| g[0]);
    groups
}

/// The decomposition tree of a recognised triple.
pub fn sp_decompose(tr: &SpTriple) -> SpTree {
    tr.tree.clone()
}

/// Builds the triple described by `shape` on fresh vertices.
pub fn sp_compose(shape: &SpShape) -> Result<SpTriple> {
    let (d, s, t) = shape.build();
    recognize(&d, s, t)?.ok_or_else(|| Error::Domain("shape does not describe a series-parallel triple".into()))
}

/// How [`extend`] glues its parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendKind {
    /// Identify all first terminals and all second terminals.
    Parallel,
    /// Identify each part's second terminal with the next part's first.
    Series,
}

/// Glues one-way triples running the same way into a new triple.
pub fn extend(kind: ExtendKind, parts: &[SpTriple]) -> Result<SpTriple> {
    let Some(first) = parts.first() else {
        return Err(Error::Domain("no parts to glue".into()));
    };
    let dir = first.direction;
    if parts.iter().any(|p| !p.direction.is_one_way() || p.direction != dir) {
        return Err(Error::Domain("parts must be one-way in a common direction".into()));
    }
    let mut d = MultiDigraph::new();
    let s = d.add_vertex(first.digraph.vertex_name(first.s)).expect("fresh");
    let last = parts.last().expect("nonempty");
    let t_name = last.digraph.vertex_name(last.t).to_string();
    let t = d.add_fresh_vertex(&t_name);
    let mut entry = s;
    for (i, p) in parts.iter().enumerate() {
        let (ps, pt) = match kind {
            ExtendKind::Parallel => (s, t),
            ExtendKind::Series => {
                let exit = if i + 1 == parts.len() {
                    t
                } else {
                    let name = format!("p{i}:{}", p.digraph.vertex_name(p.t));
                    d.add_fresh_vertex(&name)
                };
                let pair = (entry, exit);
                entry = exit;
                pair
            }
        };
        let mut vmap = vec![usize::MAX; p.digraph.vertex_count()];
        for v in p.digraph.vertices() {
            vmap[v] = if v == p.s {
                ps
            } else if v == p.t {
                pt
            } else {
                d.add_fresh_vertex(&format!("p{i}:{}", p.digraph.vertex_name(v)))
            };
        }
        for e in p.digraph.edge_ids() {
            let edge = p.digraph.edge(e);
            let mut name = format!("p{i}:{}", p.digraph.edge_name(e));
            while d.edge_by_name(&name).is_some() {
                name.push('\'');
            }
            d.add_named_edge(name, vmap[edge.tail], vmap[edge.head])?;
        }
    }
    recognize(&d, s, t)?.ok_or_else(|| Error::Internal("glued parts are not series-parallel".into()))
}

/// `true` when `d` has a cut vertex or is disconnected. Used by callers that
/// want a quick reject before recognition.
pub fn has_cut_vertex(d: &MultiDigraph) -> bool {
    blocks_and_cuts(d).1.iter().any(|&c| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic_pinned;

    fn d(n: usize, e: &[(usize, usize)]) -> MultiDigraph {
        MultiDigraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn single_edge_one_way() {
        let tr = recognize(&d(2, &[(0, 1)]), 0, 1).unwrap().unwrap();
        assert_eq!(tr.direction, Direction::Forward);
        assert_eq!(tr.code(), "e+");
    }

    #[test]
    fn digon_is_mixed() {
        let tr = recognize(&d(2, &[(0, 1), (1, 0)]), 0, 1).unwrap().unwrap();
        assert_eq!(tr.direction, Direction::Mixed);
        assert_eq!(tr.code(), "P(e+,e-)");
    }

    #[test]
    fn pendant_is_rejected() {
        // s -> m -> t with a pendant hanging off m
        assert!(recognize(&d(4, &[(0, 1), (1, 2), (1, 3)]), 0, 2).unwrap().is_none());
    }

    #[test]
    fn same_terminal_is_domain_error() {
        assert!(matches!(recognize(&d(2, &[(0, 1)]), 0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn series_and_parallel_nodes() {
        let tr = recognize(&d(2, &[(0, 1), (0, 1)]), 0, 1).unwrap().unwrap();
        assert!(matches!(&tr.tree.kind, SpKind::Parallel(ch) if ch.len() == 2));
        let tr = recognize(&d(3, &[(0, 1), (1, 2)]), 0, 2).unwrap().unwrap();
        assert!(matches!(&tr.tree.kind, SpKind::Series(ch) if ch.len() == 2));
    }

    #[test]
    fn non_directed_thread_rejected() {
        // s -> a <- t is a thread from s to t that is not directed
        assert!(recognize(&d(3, &[(0, 1), (2, 1)]), 0, 2).unwrap().is_none());
        // crossing edge between two parallel paths
        assert!(recognize(&d(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]), 0, 3).unwrap().is_none());
    }

    #[test]
    fn compose_round_trip() {
        let g = d(5, &[(0, 1), (1, 4), (0, 2), (2, 4), (4, 3), (4, 3)]);
        let tr = recognize(&g, 0, 3).unwrap().unwrap();
        let back = sp_compose(&sp_decompose(&tr).shape()).unwrap();
        assert!(are_isomorphic_pinned(&g, &back.digraph, &[(0, back.s), (3, back.t)]));
    }

    #[test]
    fn extend_examples() {
        let e = recognize(&d(2, &[(0, 1)]), 0, 1).unwrap().unwrap();
        let p = extend(ExtendKind::Parallel, &[e.clone(), e.clone()]).unwrap();
        assert_eq!(p.code(), "P(e+,e+)");
        let s = extend(ExtendKind::Series, &[e.clone(), e.clone()]).unwrap();
        assert_eq!(s.code(), "S(e+,e+)");
        let back = recognize(&d(2, &[(1, 0)]), 0, 1).unwrap().unwrap();
        assert!(extend(ExtendKind::Series, &[e, back]).is_err());
        assert!(extend(ExtendKind::Series, &[]).is_err());
    }
}
