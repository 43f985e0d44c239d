use std::collections::HashMap;

use super::{Portrait, PortraitNode};
use crate::digraph::{EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::flow::{directed_flow, FlowLimits};
use crate::immersion::{
    check_embedding, find_embedding, find_tree_homeo_embedding_by, Embedding, EmbeddingConstraints, RootedTree,
    SearchGuard, TreeEmbedding,
};
use crate::sp::Truncation;

/// A portrait embedding with the payload embeddings realising each node
/// comparison.
#[derive(Debug, Clone)]
pub struct PortraitMatch {
    pub tree: TreeEmbedding,
    /// Per source node; `None` at tag 0 and tag 1 nodes.
    pub witnesses: Vec<Option<Embedding>>,
}

const NONE: usize = usize::MAX;

/// Compares the payloads of `src` node `t` and `dst` node `u`. `None` when
/// they are incomparable; otherwise the embedding for tags 2 to 5.
fn compare(src: &Portrait, t: usize, dst: &Portrait, u: usize, guard: &SearchGuard) -> Result<Option<Option<Embedding>>> {
    if src.tree.payload(t).tag() != dst.tree.payload(u).tag() {
        return Ok(None);
    }
    match (src.payload(t), dst.payload(u)) {
        (Some((g, gp)), Some((h, hp))) => {
            let pins: Vec<(VertexId, VertexId)> = gp.into_iter().zip(hp).collect();
            let c = EmbeddingConstraints::labelled().pinned(&pins);
            Ok(find_embedding(g, h, &c, guard)?.map(Some))
        }
        _ => {
            let (a, b) = (src.vertex_of(t).expect("vertex node"), dst.vertex_of(u).expect("vertex node"));
            let leq = src.digraph.qo.leq(src.digraph.labels[a], dst.digraph.labels[b]);
            Ok(leq.then_some(None))
        }
    }
}

fn indexed<P>(t: &RootedTree<P>) -> RootedTree<usize> {
    let parent = (0..t.len()).map(|v| t.parent(v)).collect();
    let gap = (0..t.len()).map(|v| t.gap(v).unwrap_or(crate::immersion::Gap::Omega)).collect();
    RootedTree::new(parent, (0..t.len()).collect(), gap).expect("valid tree")
}

/// Searches for a portrait embedding whose node comparisons are realised
/// by labelled, pinned payload embeddings.
pub fn find_portrait_embedding(src: &Portrait, dst: &Portrait, guard: &SearchGuard) -> Result<Option<PortraitMatch>> {
    if src.digraph.qo != dst.digraph.qo {
        return Err(Error::Domain("portraits use different label orders".into()));
    }
    let mut table: HashMap<(usize, usize), Option<Embedding>> = HashMap::new();
    for t in 0..src.tree.len() {
        for u in 0..dst.tree.len() {
            if let Some(w) = compare(src, t, dst, u, guard)? {
                table.insert((t, u), w);
            }
        }
    }
    let tree = find_tree_homeo_embedding_by(&indexed(&src.tree), &indexed(&dst.tree), |a, b| {
        table.contains_key(&(*a, *b))
    });
    Ok(tree.map(|tree| {
        let witnesses = (0..src.tree.len()).map(|t| table[&(t, tree.node_map[t])].clone()).collect();
        PortraitMatch { tree, witnesses }
    }))
}

/// Payload embeddings for a given portrait embedding, found by search.
pub fn derive_witnesses(
    src: &Portrait,
    dst: &Portrait,
    eta: &TreeEmbedding,
    guard: &SearchGuard,
) -> Result<Vec<Option<Embedding>>> {
    if eta.node_map.len() != src.tree.len() || eta.node_map.iter().any(|&u| u >= dst.tree.len()) {
        return Err(Error::Structural("tree map does not fit the portraits".into()));
    }
    (0..src.tree.len())
        .map(|t| {
            compare(src, t, dst, eta.node_map[t], guard)?
                .ok_or_else(|| Error::Precondition(format!("node {t} is not below its image")))
        })
        .collect()
}

/// Finds an embedding of one block tree into another through their
/// portraits and lifts it.
pub fn embed_sp_trees(src: &Portrait, dst: &Portrait, guard: &SearchGuard) -> Result<Option<Embedding>> {
    match find_portrait_embedding(src, dst, guard)? {
        None => Ok(None),
        Some(m) => lift_portrait_embedding(src, dst, &m.tree, &m.witnesses).map(Some),
    }
}

/// Builds an embedding of the source digraph into the destination digraph
/// (root to root, labels respected) from a portrait embedding and the
/// payload embeddings at every node.
///
/// A middle block whose three nodes land on three consecutive nodes reuses
/// the block's own witness. Otherwise its two sides come from the
/// truncation witnesses and each crossing edge is routed from the entry
/// side image, through the blocks between, to the exit side image.
pub fn lift_portrait_embedding(
    src: &Portrait,
    dst: &Portrait,
    eta: &TreeEmbedding,
    witnesses: &[Option<Embedding>],
) -> Result<Embedding> {
    if src.digraph.qo != dst.digraph.qo {
        return Err(Error::Domain("portraits use different label orders".into()));
    }
    if !eta.verify(&src.tree, &dst.tree, |a, b| a.tag() == b.tag()) {
        return Err(Error::Precondition("tree map is not a gap-respecting embedding".into()));
    }
    if witnesses.len() != src.tree.len() {
        return Err(Error::Precondition("one witness slot per portrait node is needed".into()));
    }
    let mut lift = Lift {
        src,
        dst,
        eta,
        witnesses,
        vmap: vec![NONE; src.digraph.digraph.vertex_count()],
        emap: vec![None; src.digraph.digraph.edge_count()],
    };
    for t in 0..src.tree.len() {
        lift.vertices(t)?;
    }
    for t in 0..src.tree.len() {
        lift.edges(t)?;
    }
    if lift.vmap.contains(&NONE) || lift.emap.iter().any(Option::is_none) {
        return Err(Error::Internal("lift left part of the digraph unmapped".into()));
    }
    let emb = Embedding {
        vertex_map: lift.vmap,
        edge_map: lift.emap.into_iter().map(Option::unwrap).collect(),
    };
    let c = EmbeddingConstraints::labelled().pinned(&[(src.root, dst.root)]);
    match check_embedding(&src.digraph, &dst.digraph, &emb, &c)? {
        Ok(()) => Ok(emb),
        Err(v) => Err(Error::Internal(format!("lifted embedding fails the checker: {v}"))),
    }
}

struct Lift<'a> {
    src: &'a Portrait,
    dst: &'a Portrait,
    eta: &'a TreeEmbedding,
    witnesses: &'a [Option<Embedding>],
    vmap: Vec<VertexId>,
    emap: Vec<Option<Vec<EdgeId>>>,
}

/// Truncation vertex to source vertex on the kept side; the merged vertex
/// goes back to the terminal it is named after.
fn kept_inverse(tr: &Truncation, in_x: &[bool], keep_x: bool, terminal: VertexId) -> Vec<VertexId> {
    let mut inv = vec![NONE; tr.triple.digraph.vertex_count()];
    for (v, &w) in tr.vertex_map.iter().enumerate() {
        if in_x[v] == keep_x {
            inv[w] = v;
        }
    }
    inv[tr.vertex_map[terminal]] = terminal;
    inv
}

fn edge_inverse(tr: &Truncation, source_edges: usize) -> Vec<Option<EdgeId>> {
    let mut inv = vec![None; source_edges];
    for (f, &e) in tr.edge_map.iter().enumerate() {
        inv[e] = Some(f);
    }
    inv
}

impl<'a> Lift<'a> {
    fn block_at(&self, u: usize) -> usize {
        match *self.dst.tree.payload(u) {
            PortraitNode::Middle(b)
            | PortraitNode::EntryTruncation(b)
            | PortraitNode::ExitTruncation(b)
            | PortraitNode::Leaf(b) => b,
            _ => unreachable!("block node"),
        }
    }

    /// The witness at `t`, checked against the payloads it relates.
    fn witness(&self, t: usize) -> Result<&'a Embedding> {
        let witnesses: &'a [Option<Embedding>] = self.witnesses;
        let w = witnesses[t]
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("missing witness at node {t}")))?;
        let u = self.eta.node_map[t];
        let ((g, gp), (h, hp)) = (self.src.payload(t).expect("block node"), self.dst.payload(u).expect("block node"));
        let pins: Vec<(VertexId, VertexId)> = gp.into_iter().zip(hp).collect();
        let c = EmbeddingConstraints::labelled().pinned(&pins);
        match check_embedding(g, h, w, &c) {
            Ok(Ok(())) => Ok(w),
            Ok(Err(v)) => Err(Error::Precondition(format!("witness at node {t} is invalid: {v}"))),
            Err(e) => Err(Error::Precondition(format!("witness at node {t} is malformed: {e}"))),
        }
    }

    /// Is the middle block at `t` mapped onto three consecutive nodes?
    fn tight(&self, t: usize) -> bool {
        let t4 = self.src.tree.children(t)[0];
        self.eta.paths[t].len() == 2 && self.eta.paths[t4].len() == 2
    }

    fn vertices(&mut self, t: usize) -> Result<()> {
        let (src, dst) = (self.src, self.dst);
        match *src.tree.payload(t) {
            PortraitNode::Root(v) | PortraitNode::CutVertex(v) => {
                self.vmap[v] = dst.vertex_of(self.eta.node_map[t]).expect("vertex node");
            }
            PortraitNode::Leaf(b) => {
                let w = self.witness(t)?;
                let (sb, hb) = (&src.blocks[b], &dst.blocks[self.block_at(self.eta.node_map[t])]);
                for v in 0..sb.vertices.len() {
                    if v != sb.entry {
                        self.vmap[sb.vertices[v]] = hb.vertices[w.vertex_map[v]];
                    }
                }
            }
            PortraitNode::Middle(b) if self.tight(t) => {
                let w = self.witness(t)?;
                let (sb, hb) = (&src.blocks[b], &dst.blocks[self.block_at(self.eta.node_map[t])]);
                let m = sb.middle.as_ref().expect("middle block");
                for v in 0..sb.vertices.len() {
                    if v != m.triple.s && v != m.triple.t {
                        self.vmap[sb.vertices[v]] = hb.vertices[w.vertex_map[v]];
                    }
                }
            }
            PortraitNode::Middle(b) => {
                let t3 = src.tree.parent(t).expect("entry side node");
                let t4 = src.tree.children(t)[0];
                let (wx, wy) = (self.witness(t3)?, self.witness(t4)?);
                let sb = &src.blocks[b];
                let m = sb.middle.as_ref().expect("middle block");
                let (b1, bk) = (self.block_at(self.eta.node_map[t3]), self.block_at(self.eta.node_map[t4]));
                let (h1, hk) = (&dst.blocks[b1], &dst.blocks[bk]);
                let (m1, mk) = (h1.middle.as_ref().expect("middle"), hk.middle.as_ref().expect("middle"));
                let inv1 = kept_inverse(&m1.entry_side, &m1.cut.in_x, true, m1.triple.t);
                let invk = kept_inverse(&mk.exit_side, &mk.cut.in_x, false, mk.triple.s);
                for v in 0..sb.vertices.len() {
                    if v == m.triple.s || v == m.triple.t {
                        continue;
                    }
                    self.vmap[sb.vertices[v]] = if m.cut.in_x[v] {
                        h1.vertices[inv1[wx.vertex_map[m.entry_side.vertex_map[v]]]]
                    } else {
                        hk.vertices[invk[wy.vertex_map[m.exit_side.vertex_map[v]]]]
                    };
                }
            }
            PortraitNode::EntryTruncation(_) | PortraitNode::ExitTruncation(_) => {}
        }
        Ok(())
    }

    fn edges(&mut self, t: usize) -> Result<()> {
        let (src, dst) = (self.src, self.dst);
        match *src.tree.payload(t) {
            PortraitNode::Leaf(b) => self.whole_block(t, b),
            PortraitNode::Middle(b) if self.tight(t) => self.whole_block(t, b),
            PortraitNode::Middle(b) => {
                let t3 = src.tree.parent(t).expect("entry side node");
                let t4 = src.tree.children(t)[0];
                let (wx, wy) = (self.witness(t3)?, self.witness(t4)?);
                let sb = &src.blocks[b];
                let m = sb.middle.as_ref().expect("middle block");
                let (b1, bk) = (self.block_at(self.eta.node_map[t3]), self.block_at(self.eta.node_map[t4]));
                let (h1, hk) = (&dst.blocks[b1], &dst.blocks[bk]);
                let (m1, mk) = (h1.middle.as_ref().expect("middle"), hk.middle.as_ref().expect("middle"));
                let ex = edge_inverse(&m.entry_side, sb.edges.len());
                let ey = edge_inverse(&m.exit_side, sb.edges.len());
                // host path of a truncation witness, in destination ids
                let via_x = |p: &[EdgeId]| -> Vec<EdgeId> { p.iter().map(|&f| h1.edges[m1.entry_side.edge_map[f]]).collect() };
                let via_y = |p: &[EdgeId]| -> Vec<EdgeId> { p.iter().map(|&f| hk.edges[mk.exit_side.edge_map[f]]).collect() };
                let g = &sb.graph.digraph;
                let dg = &dst.digraph.digraph;
                let mut crossing = Vec::new();
                for e in g.edge_ids() {
                    let edge = g.edge(e);
                    let (a, z) = (m.cut.in_x[edge.tail], m.cut.in_x[edge.head]);
                    match (a, z) {
                        (true, true) => {
                            let f = ex[e].expect("entry side edge survives");
                            self.emap[sb.edges[e]] = Some(via_x(&wx.edge_map[f]));
                        }
                        (false, false) => {
                            let f = ey[e].expect("exit side edge survives");
                            self.emap[sb.edges[e]] = Some(via_y(&wy.edge_map[f]));
                        }
                        (true, false) => {
                            let px = via_x(&wx.edge_map[ex[e].expect("crossing edge survives")]);
                            let py = via_y(&wy.edge_map[ey[e].expect("crossing edge survives")]);
                            let (Some(&last), Some(&first)) = (px.last(), py.first()) else {
                                return Err(Error::Internal("crossing edge has an empty image".into()));
                            };
                            crossing.push((e, px.clone(), dg.edge(last).head, py.clone(), dg.edge(first).tail));
                        }
                        (false, true) => {
                            return Err(Error::Internal("separator edge runs from the exit side back".into()));
                        }
                    }
                }
                self.route(b, b1, bk, crossing)
            }
            _ => Ok(()),
        }
    }

    fn whole_block(&mut self, t: usize, b: usize) -> Result<()> {
        let w = self.witness(t)?;
        let (sb, hb) = (&self.src.blocks[b], &self.dst.blocks[self.block_at(self.eta.node_map[t])]);
        for e in 0..sb.edges.len() {
            self.emap[sb.edges[e]] = Some(w.edge_map[e].iter().map(|&f| hb.edges[f]).collect());
        }
        Ok(())
    }

    /// Joins the entry side image of each crossing edge to its exit side
    /// image by edge-disjoint directed paths through the exit side of the
    /// first host block, the blocks in between, and the entry side of the
    /// last host block. All such paths meet at the first block's exit, so
    /// any flow can be re-paired there.
    #[allow(clippy::type_complexity)]
    fn route(
        &mut self,
        b: usize,
        b1: usize,
        bk: usize,
        crossing: Vec<(EdgeId, Vec<EdgeId>, VertexId, Vec<EdgeId>, VertexId)>,
    ) -> Result<()> {
        let dst = self.dst;
        let bct = &dst.block_tree;
        let mut region = vec![false; dst.digraph.digraph.edge_count()];
        let (h1, hk) = (&dst.blocks[b1], &dst.blocks[bk]);
        let (m1, mk) = (h1.middle.as_ref().expect("middle"), hk.middle.as_ref().expect("middle"));
        let local1 = &h1.graph.digraph;
        for e in local1.edge_ids() {
            let edge = local1.edge(e);
            if !m1.cut.in_x[edge.tail] && !m1.cut.in_x[edge.head] {
                region[h1.edges[e]] = true;
            }
        }
        let localk = &hk.graph.digraph;
        for e in localk.edge_ids() {
            let edge = localk.edge(e);
            if mk.cut.in_x[edge.tail] && mk.cut.in_x[edge.head] {
                region[hk.edges[e]] = true;
            }
        }
        let mut cur = bk;
        loop {
            let c = bct.block_parent[cur];
            cur = bct.c_parent[c].ok_or_else(|| Error::Internal("host blocks are not on one chain".into()))?;
            if cur == b1 {
                break;
            }
            for &e in &dst.blocks[cur].edges {
                region[e] = true;
            }
        }
        let hub = h1.vertices[m1.triple.t];
        let mut aux = dst.digraph.digraph.clone();
        let source = aux.add_fresh_vertex("route.source");
        let sink = aux.add_fresh_vertex("route.sink");
        for (_, _, h, _, g) in &crossing {
            aux.add_edge(source, *h)?;
            aux.add_edge(*g, sink)?;
        }
        region.resize(aux.edge_count(), true);
        let mut blocked = vec![false; aux.vertex_count()];
        for &v in &self.vmap {
            if v != NONE {
                blocked[v] = true;
            }
        }
        let allow = |e: EdgeId| region[e];
        let lim = FlowLimits {
            allow: &allow,
            blocked: &blocked,
            limit: crossing.len(),
        };
        let paths = directed_flow(&aux, source, sink, &lim);
        if paths.len() < crossing.len() {
            return Err(Error::Internal(format!(
                "only {} of {} crossing edges of block {b} could be routed",
                paths.len(),
                crossing.len()
            )));
        }
        let mut heads: Vec<Option<(VertexId, Vec<EdgeId>)>> = Vec::new();
        let mut tails: Vec<Option<(VertexId, Vec<EdgeId>)>> = Vec::new();
        for p in paths {
            let split = p
                .iter()
                .position(|&e| aux.edge(e).head == hub)
                .ok_or_else(|| Error::Internal("routed path misses the first block's exit".into()))?;
            let start = aux.edge(p[0]).head;
            let end = aux.edge(p[p.len() - 1]).tail;
            heads.push(Some((start, p[1..=split].to_vec())));
            tails.push(Some((end, p[split + 1..p.len() - 1].to_vec())));
        }
        for (e, px, h, py, g) in crossing {
            let take = |pool: &mut Vec<Option<(VertexId, Vec<EdgeId>)>>, v: VertexId| {
                pool.iter_mut()
                    .find(|x| x.as_ref().is_some_and(|(w, _)| *w == v))
                    .and_then(Option::take)
                    .map(|(_, p)| p)
            };
            let (Some(front), Some(back)) = (take(&mut heads, h), take(&mut tails, g)) else {
                return Err(Error::Internal("routed paths do not pair with crossing edges".into()));
            };
            let mut path = px;
            path.extend(front);
            path.extend(back);
            path.extend(py);
            self.emap[self.src.blocks[b].edges[e]] = Some(path);
        }
        Ok(())
    }
}
