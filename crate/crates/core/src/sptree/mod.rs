//! Trees of blocks hanging from a root, their portraits, and lifting a
//! portrait embedding back to a strong immersion.

mod lift;

pub use lift::{derive_witnesses, embed_sp_trees, find_portrait_embedding, lift_portrait_embedding, PortraitMatch};

use crate::blocks::{block_cut_tree, BlockCutTree};
use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};
use crate::immersion::{Gap, RootedTree};
use crate::labelled::LabelledDigraph;
use crate::sp::{is_separator, recognize, separator, truncate, Direction, SeparatorCut, Side, SpTriple, Truncation};

/// Which condition of the block-tree definition fails first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTreeViolation {
    /// 1: a root block fails the block test; 2: a non-root block fails it;
    /// 3: some thread from the root to a cut vertex is not directed away
    /// from the root; 4: a block has two cut vertices below its entry.
    pub bullet: u8,
    pub block: Vec<VertexId>,
    pub detail: String,
}

impl std::fmt::Display for SpTreeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "condition {}: {} (block {:?})", self.bullet, self.detail, self.block)
    }
}

/// Checks that `(d, r)` is a tree of blocks in which every block, rooted at
/// its entry vertex, passes `block_test`, threads from the root to cut
/// vertices are directed away from it, and each block has at most one cut
/// vertex below its entry.
pub fn is_sp_tree(
    d: &MultiDigraph,
    r: VertexId,
    block_test: impl Fn(&MultiDigraph, VertexId) -> bool,
) -> Result<std::result::Result<(), SpTreeViolation>> {
    let bct = block_cut_tree(d, r)?;
    let local = |b: usize| {
        let (sub, map) = d.edge_subgraph(&bct.blocks[b].edges, &bct.blocks[b].vertices);
        let entry = map.vertex_lookup(d.vertex_count())[bct.entry(b)].expect("entry in block");
        (sub, map, entry)
    };
    for bullet in [1u8, 2] {
        for b in 0..bct.blocks.len() {
            if (bct.entry(b) == r) != (bullet == 1) {
                continue;
            }
            let (sub, _, entry) = local(b);
            if !block_test(&sub, entry) {
                return Ok(Err(SpTreeViolation {
                    bullet,
                    block: bct.blocks[b].vertices.clone(),
                    detail: "block fails the block test".into(),
                }));
            }
        }
    }
    for b in 0..bct.blocks.len() {
        let (sub, map, entry) = local(b);
        let lookup = map.vertex_lookup(d.vertex_count());
        for &c in &bct.block_children[b] {
            let exit = lookup[bct.c_vertices[c]].expect("child cut vertex in block");
            let ok = recognize(&sub, entry, exit)?.is_some_and(|tr| tr.direction == Direction::Forward);
            if !ok {
                return Ok(Err(SpTreeViolation {
                    bullet: 3,
                    block: bct.blocks[b].vertices.clone(),
                    detail: format!(
                        "a thread from the root to cut vertex {} is not directed away from the root",
                        d.vertex_name(bct.c_vertices[c])
                    ),
                }));
            }
        }
    }
    for b in 0..bct.blocks.len() {
        if bct.block_children[b].len() > 1 {
            return Ok(Err(SpTreeViolation {
                bullet: 4,
                block: bct.blocks[b].vertices.clone(),
                detail: "block has more than one cut vertex below its entry".into(),
            }));
        }
    }
    Ok(Ok(()))
}

/// What a portrait node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortraitNode {
    /// Tag 0.
    Root(VertexId),
    /// Tag 1.
    CutVertex(VertexId),
    /// Tag 2: a block with a child block, as a triple entry to exit.
    Middle(usize),
    /// Tag 3: the truncation of a middle block keeping its entry side.
    EntryTruncation(usize),
    /// Tag 4: the truncation keeping its exit side.
    ExitTruncation(usize),
    /// Tag 5: a block with no child block, rooted at its entry.
    Leaf(usize),
}

impl PortraitNode {
    pub fn tag(&self) -> u8 {
        match self {
            PortraitNode::Root(_) => 0,
            PortraitNode::CutVertex(_) => 1,
            PortraitNode::Middle(_) => 2,
            PortraitNode::EntryTruncation(_) => 3,
            PortraitNode::ExitTruncation(_) => 4,
            PortraitNode::Leaf(_) => 5,
        }
    }
}

/// One block of the tree with everything the portrait derives from it.
#[derive(Debug, Clone)]
pub struct BlockPiece {
    /// The block on its own, labels carried over.
    pub graph: LabelledDigraph,
    /// Local vertex to vertex of the whole digraph.
    pub vertices: Vec<VertexId>,
    /// Local edge to edge of the whole digraph.
    pub edges: Vec<EdgeId>,
    /// Local id of the vertex the block hangs from.
    pub entry: VertexId,
    pub middle: Option<MiddlePiece>,
}

/// Extra data of a middle block.
#[derive(Debug, Clone)]
pub struct MiddlePiece {
    pub triple: SpTriple,
    /// Local id of the cut vertex leading to the child block.
    pub exit: VertexId,
    pub cut: SeparatorCut,
    pub entry_side: Truncation,
    pub exit_side: Truncation,
    pub entry_side_graph: LabelledDigraph,
    pub exit_side_graph: LabelledDigraph,
}

impl BlockPiece {
    /// Local id of a vertex of the whole digraph, if it lies in the block.
    pub fn local(&self, v: VertexId) -> Option<VertexId> {
        self.vertices.iter().position(|&w| w == v)
    }
}

/// Labelled tree encoding of a block tree, with the separator choice used
/// for each middle block.
#[derive(Debug, Clone)]
pub struct Portrait {
    pub digraph: LabelledDigraph,
    pub root: VertexId,
    pub blocks: Vec<BlockPiece>,
    pub tree: RootedTree<PortraitNode>,
    pub block_tree: BlockCutTree,
}

impl Portrait {
    /// Guest or host of the comparison at a node: the payload digraph and
    /// the vertices an embedding must pin. `None` for tags 0 and 1.
    pub fn payload(&self, node: usize) -> Option<(&LabelledDigraph, Vec<VertexId>)> {
        match *self.tree.payload(node) {
            PortraitNode::Root(_) | PortraitNode::CutVertex(_) => None,
            PortraitNode::Middle(b) => {
                let m = self.blocks[b].middle.as_ref().expect("middle block");
                Some((&self.blocks[b].graph, vec![m.triple.s, m.triple.t]))
            }
            PortraitNode::EntryTruncation(b) => {
                let m = self.blocks[b].middle.as_ref().expect("middle block");
                Some((&m.entry_side_graph, vec![m.entry_side.triple.s, m.entry_side.triple.t]))
            }
            PortraitNode::ExitTruncation(b) => {
                let m = self.blocks[b].middle.as_ref().expect("middle block");
                Some((&m.exit_side_graph, vec![m.exit_side.triple.s, m.exit_side.triple.t]))
            }
            PortraitNode::Leaf(b) => Some((&self.blocks[b].graph, vec![self.blocks[b].entry])),
        }
    }

    /// Vertex of a tag 0 or tag 1 node.
    pub fn vertex_of(&self, node: usize) -> Option<VertexId> {
        match *self.tree.payload(node) {
            PortraitNode::Root(v) | PortraitNode::CutVertex(v) => Some(v),
            _ => None,
        }
    }

    pub fn middle_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.middle.is_some()).count()
    }
}

/// Separator per middle block: the canonical minimum cut.
pub fn canonical_separators(tr: &SpTriple, _vertices: &[VertexId]) -> Result<SeparatorCut> {
    Ok(separator(tr))
}

/// Builds the portrait of `(d, r)`. `choose` receives each middle block as
/// a triple in local ids plus its local-to-global vertex map and returns the
/// separator to use.
pub fn build_portrait(
    d: &LabelledDigraph,
    r: VertexId,
    mut choose: impl FnMut(&SpTriple, &[VertexId]) -> Result<SeparatorCut>,
) -> Result<Portrait> {
    let g = &d.digraph;
    if g.has_loops() {
        return Err(Error::Precondition("block trees have no loops".into()));
    }
    if let Err(v) = is_sp_tree(g, r, |_, _| true)? {
        return Err(Error::Precondition(format!("not a block tree: {v}")));
    }
    let bct = block_cut_tree(g, r)?;
    let n = g.vertex_count();
    let mut blocks = Vec::with_capacity(bct.blocks.len());
    for b in 0..bct.blocks.len() {
        let (sub, map) = g.edge_subgraph(&bct.blocks[b].edges, &bct.blocks[b].vertices);
        let lookup = map.vertex_lookup(n);
        let entry = lookup[bct.entry(b)].expect("entry in block");
        let graph = d.restrict(sub, &map);
        let middle = match bct.block_children[b].first() {
            None => None,
            Some(&c) => {
                let exit = lookup[bct.c_vertices[c]].expect("exit in block");
                let triple = recognize(&graph.digraph, entry, exit)?
                    .ok_or_else(|| Error::Precondition("middle block is not a series-parallel triple".into()))?;
                let cut = choose(&triple, &map.vertices)?;
                if !is_separator(&triple, &cut.in_x) {
                    return Err(Error::Precondition("chosen partition is not a separator of its block".into()));
                }
                let entry_side = truncate(&triple, &cut, Side::X, Some(&graph.labels))?;
                let exit_side = truncate(&triple, &cut, Side::Y, Some(&graph.labels))?;
                let side_graph = |t: &Truncation| {
                    LabelledDigraph::new(t.triple.digraph.clone(), d.qo.clone(), t.labels.clone().expect("labels"))
                };
                Some(MiddlePiece {
                    entry_side_graph: side_graph(&entry_side)?,
                    exit_side_graph: side_graph(&exit_side)?,
                    triple,
                    exit,
                    cut,
                    entry_side,
                    exit_side,
                })
            }
        };
        blocks.push(BlockPiece {
            graph,
            vertices: map.vertices,
            edges: map.edges,
            entry,
            middle,
        });
    }
    let mut parent = Vec::new();
    let mut payload = Vec::new();
    let mut gap = Vec::new();
    let mut push = |p: Option<usize>, node: PortraitNode, g: Gap| {
        parent.push(p);
        payload.push(node);
        gap.push(g);
        payload.len() - 1
    };
    let root = push(None, PortraitNode::Root(r), Gap::Omega);
    let mut stack = vec![(0usize, root)];
    while let Some((c, c_node)) = stack.pop() {
        for &b in &bct.c_children[c] {
            match &blocks[b].middle {
                None => {
                    push(Some(c_node), PortraitNode::Leaf(b), Gap::Omega);
                }
                Some(m) => {
                    let s = Gap::Finite(m.cut.size() as u64);
                    let t3 = push(Some(c_node), PortraitNode::EntryTruncation(b), Gap::Omega);
                    let t2 = push(Some(t3), PortraitNode::Middle(b), s);
                    let t4 = push(Some(t2), PortraitNode::ExitTruncation(b), s);
                    let child = bct.block_children[b][0];
                    let cv = push(Some(t4), PortraitNode::CutVertex(bct.c_vertices[child]), Gap::Omega);
                    stack.push((child, cv));
                }
            }
        }
    }
    let tree = RootedTree::new(parent, payload, gap)?;
    Ok(Portrait {
        digraph: d.clone(),
        root: r,
        blocks,
        tree,
        block_tree: bct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thread::{for_each_thread, Ends};
    use std::ops::ControlFlow;

    /// Direct check of the directedness condition over all threads.
    fn threads_directed_from_root(d: &MultiDigraph, r: VertexId) -> bool {
        let cuts = crate::blocks::cut_vertices(d);
        let mut ok = true;
        for v in cuts.into_iter().filter(|&v| v != r) {
            for_each_thread(d, &Ends::Between(vec![r], vec![v]), |t| {
                let t = if t.ends().0 == r { t.clone() } else { t.reversed() };
                if !t.is_directed_forward(d) {
                    ok = false;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
        }
        ok
    }

    fn any(_: &MultiDigraph, _: VertexId) -> bool {
        true
    }

    #[test]
    fn single_block() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(is_sp_tree(&d, 0, any).unwrap(), Ok(()));
        let p = build_portrait(&LabelledDigraph::unlabelled(d), 0, canonical_separators).unwrap();
        assert_eq!(p.tree.len(), 2);
        assert_eq!(p.tree.payload(1).tag(), 5);
        assert_eq!(p.tree.gap(1), Some(Gap::Omega));
    }

    #[test]
    fn bad_thread_is_condition_three() {
        let d = MultiDigraph::from_edges(3, &[(1, 0), (1, 2)]).unwrap();
        assert!(!threads_directed_from_root(&d, 0));
        assert_eq!(is_sp_tree(&d, 0, any).unwrap().unwrap_err().bullet, 3);
    }

    #[test]
    fn two_child_cut_vertices_are_rejected() {
        // triangle 0,1,2 with 1 and 2 joined both ways, pendant edges at 1 and 2.
        // Two cut vertices below the entry of a 2-connected block always give
        // a thread to one of them that is not directed, so the thread
        // condition fires first.
        let d = MultiDigraph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 1), (1, 3), (2, 4)]).unwrap();
        assert!(!threads_directed_from_root(&d, 0));
        let v = is_sp_tree(&d, 0, any).unwrap().unwrap_err();
        assert_eq!(v.bullet, 3);
        assert_eq!(v.block, vec![0, 1, 2]);
    }

    #[test]
    fn block_test_failures_are_conditions_one_and_two() {
        let d = MultiDigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let v = is_sp_tree(&d, 0, |_, _| false).unwrap().unwrap_err();
        assert_eq!(v.bullet, 1);
        let v = is_sp_tree(&d, 0, |b, x| b.vertex_name(x) == "v0").unwrap().unwrap_err();
        assert_eq!(v.bullet, 2);
    }

    #[test]
    fn two_block_chain_spine() {
        // diamond 0 -> {1, 2} -> 3, then 3 -> 4
        let d = MultiDigraph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let p = build_portrait(&LabelledDigraph::unlabelled(d), 0, canonical_separators).unwrap();
        let tags: Vec<u8> = (0..p.tree.len()).map(|v| p.tree.payload(v).tag()).collect();
        assert_eq!(tags, vec![0, 3, 2, 4, 1, 5]);
        let gaps: Vec<Option<Gap>> = (0..p.tree.len()).map(|v| p.tree.gap(v)).collect();
        let two = Some(Gap::Finite(2));
        assert_eq!(gaps, vec![None, Some(Gap::Omega), two, two, Some(Gap::Omega), Some(Gap::Omega)]);
        // blocks + cut vertices + root + two per middle block
        assert_eq!(p.tree.len(), 2 + 1 + 1 + 2 * p.middle_count());
    }

    #[test]
    fn custom_separator_changes_truncations() {
        let d = MultiDigraph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let ld = LabelledDigraph::unlabelled(d);
        let p = build_portrait(&ld, 0, |tr, _| {
            let mut in_x = vec![true; tr.digraph.vertex_count()];
            in_x[tr.t] = false;
            Ok(SeparatorCut::new(&tr.digraph, in_x))
        })
        .unwrap();
        let m = p.blocks.iter().find_map(|b| b.middle.as_ref()).unwrap();
        assert_eq!(m.exit_side.triple.code(), "P(e+,e+)");
        assert!(build_portrait(&ld, 0, |tr, _| Ok(SeparatorCut::new(&tr.digraph, vec![true, false, false, true]))).is_err());
    }
}
