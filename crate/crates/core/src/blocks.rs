//! Blocks, cut vertices and the rooted block-cut tree.

use crate::digraph::{EdgeId, MultiDigraph, VertexId};
use crate::error::{Error, Result};

/// A maximal subgraph without a cut vertex of its own. Loops are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Block {
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

struct Tarjan<'a> {
    d: &'a MultiDigraph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<EdgeId>,
    blocks: Vec<Block>,
    is_cut: Vec<bool>,
}

impl Tarjan<'_> {
    fn dfs(&mut self, u: VertexId, parent_edge: Option<EdgeId>) {
        self.time += 1;
        self.disc[u] = self.time;
        self.low[u] = self.time;
        let mut children = 0;
        for e in self.d.incident(u) {
            if Some(e) == parent_edge || self.d.edge(e).is_loop() {
                continue;
            }
            let w = self.d.edge(e).other(u);
            if self.disc[w] == 0 {
                children += 1;
                self.stack.push(e);
                self.dfs(w, Some(e));
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    if parent_edge.is_some() || children > 1 {
                        self.is_cut[u] = true;
                    }
                    self.pop_block(e);
                }
            } else if self.disc[w] < self.disc[u] {
                self.stack.push(e);
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
        if parent_edge.is_none() && children > 1 {
            self.is_cut[u] = true;
        }
    }

    fn pop_block(&mut self, until: EdgeId) {
        let mut edges = Vec::new();
        while let Some(e) = self.stack.pop() {
            edges.push(e);
            if e == until {
                break;
            }
        }
        let mut vertices: Vec<VertexId> = edges
            .iter()
            .flat_map(|&e| [self.d.edge(e).tail, self.d.edge(e).head])
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        self.blocks.push(Block { vertices, edges });
    }
}

/// Blocks and cut vertices of the underlying graph. Isolated vertices form
/// single-vertex blocks. Blocks are ordered by their smallest member
/// (edge, or vertex for edgeless blocks).
pub fn blocks_and_cuts(d: &MultiDigraph) -> (Vec<Block>, Vec<bool>) {
    let n = d.vertex_count();
    let mut t = Tarjan {
        d,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        is_cut: vec![false; n],
    };
    for v in d.vertices() {
        if t.disc[v] == 0 {
            t.dfs(v, None);
            if d.incident(v).iter().all(|&e| d.edge(e).is_loop()) {
                t.blocks.push(Block {
                    vertices: vec![v],
                    edges: Vec::new(),
                });
            }
        }
    }
    let Tarjan { mut blocks, is_cut, .. } = t;
    blocks.sort_by_key(|b| match b.edges.first() {
        Some(&e) => (0, e),
        None => (1, b.vertices[0]),
    });
    (blocks, is_cut)
}

pub fn blocks(d: &MultiDigraph) -> Vec<Block> {
    blocks_and_cuts(d).0
}

pub fn cut_vertices(d: &MultiDigraph) -> Vec<VertexId> {
    let (_, is_cut) = blocks_and_cuts(d);
    d.vertices().filter(|&v| is_cut[v]).collect()
}

/// Connected, at least two vertices, no cut vertex, and on two vertices at
/// least two (parallel or antiparallel) edges.
pub fn is_two_connected(d: &MultiDigraph) -> bool {
    let n = d.vertex_count();
    if n < 2 || !d.is_connected() {
        return false;
    }
    if n == 2 {
        return d.edges().iter().filter(|e| !e.is_loop()).count() >= 2;
    }
    cut_vertices(d).is_empty()
}

/// The block-structure of a connected rooted digraph: a tree alternating
/// between C-nodes (the root and the cut vertices) and L-nodes (blocks).
#[derive(Debug, Clone)]
pub struct BlockCutTree {
    pub root: VertexId,
    pub blocks: Vec<Block>,
    /// Vertices of the C-nodes; index 0 is the root.
    pub c_vertices: Vec<VertexId>,
    /// C-node index of each block's parent.
    pub block_parent: Vec<usize>,
    /// C-node indices of each block's children.
    pub block_children: Vec<Vec<usize>>,
    /// Parent block of each C-node (`None` for the root).
    pub c_parent: Vec<Option<usize>>,
    /// Child blocks of each C-node.
    pub c_children: Vec<Vec<usize>>,
    /// Block indices in breadth-first order from the root.
    pub block_order: Vec<usize>,
}

impl BlockCutTree {
    pub fn c_index(&self, v: VertexId) -> Option<usize> {
        self.c_vertices.iter().position(|&c| c == v)
    }

    /// Vertex through which a block hangs from its parent (the root or a cut
    /// vertex).
    pub fn entry(&self, b: usize) -> VertexId {
        self.c_vertices[self.block_parent[b]]
    }

    /// Blocks that have a child block.
    pub fn has_child_block(&self, b: usize) -> bool {
        self.block_children[b]
            .iter()
            .any(|&c| !self.c_children[c].is_empty())
    }

    /// Number of C-nodes adjacent to the block.
    pub fn block_degree(&self, b: usize) -> usize {
        1 + self.block_children[b].len()
    }
}

pub fn block_cut_tree(d: &MultiDigraph, r: VertexId) -> Result<BlockCutTree> {
    if r >= d.vertex_count() {
        return Err(Error::Domain(format!("root {r} is not a vertex")));
    }
    if !d.is_connected() {
        return Err(Error::Structural("underlying graph is disconnected".into()));
    }
    let (blocks, is_cut) = blocks_and_cuts(d);
    let mut c_vertices = vec![r];
    c_vertices.extend(d.vertices().filter(|&v| is_cut[v] && v != r));
    let nb = blocks.len();
    let nc = c_vertices.len();
    let mut block_parent = vec![usize::MAX; nb];
    let mut block_children = vec![Vec::new(); nb];
    let mut c_parent = vec![None; nc];
    let mut c_children = vec![Vec::new(); nc];
    let mut block_order = Vec::new();
    let mut c_seen = vec![false; nc];
    let mut b_seen = vec![false; nb];
    c_seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let v = c_vertices[c];
        for (b, block) in blocks.iter().enumerate() {
            if b_seen[b] || !block.contains(v) {
                continue;
            }
            b_seen[b] = true;
            block_parent[b] = c;
            c_children[c].push(b);
            block_order.push(b);
            for (c2, &w) in c_vertices.iter().enumerate() {
                if !c_seen[c2] && block.contains(w) {
                    c_seen[c2] = true;
                    c_parent[c2] = Some(b);
                    block_children[b].push(c2);
                    queue.push_back(c2);
                }
            }
        }
    }
    Ok(BlockCutTree {
        root: r,
        blocks,
        c_vertices,
        block_parent,
        block_children,
        c_parent,
        c_children,
        block_order,
    })
}
