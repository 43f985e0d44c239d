use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qo::QuasiOrder;

/// Edge label of a rooted tree: a natural number or ω, with ω above every
/// number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gap {
    Finite(u64),
    Omega,
}

impl std::fmt::Display for Gap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gap::Finite(n) => write!(f, "{n}"),
            Gap::Omega => write!(f, "ω"),
        }
    }
}

/// Rooted tree with a payload per node and a gap on the edge into every
/// non-root node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree<P> {
    parent: Vec<Option<usize>>,
    payload: Vec<P>,
    gap: Vec<Gap>,
    #[serde(skip)]
    children: Vec<Vec<usize>>,
    #[serde(skip)]
    root: usize,
}

impl<P> RootedTree<P> {
    /// `parent[v]` is `None` for exactly one node, the root. `gap[v]` labels
    /// the edge `parent[v] -> v` and is ignored at the root.
    pub fn new(parent: Vec<Option<usize>>, payload: Vec<P>, gap: Vec<Gap>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::Structural("a rooted tree needs a node".into()));
        }
        if payload.len() != n || gap.len() != n {
            return Err(Error::Structural("payload and gap lists must match the node count".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Structural(format!("expected one root, found {}", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return Err(Error::Structural(format!("node {v} has an invalid parent")));
                }
                children[p].push(v);
            }
        }
        // every node must reach the root
        let mut seen = vec![false; n];
        let mut stack = vec![roots[0]];
        while let Some(v) = stack.pop() {
            seen[v] = true;
            stack.extend(children[v].iter().copied());
        }
        if seen.contains(&false) {
            return Err(Error::Structural("parent pointers contain a cycle".into()));
        }
        Ok(Self {
            parent,
            payload,
            gap,
            children,
            root: roots[0],
        })
    }

    /// Rebuilds the derived fields, e.g. after deserialising.
    pub fn rebuild(self) -> Result<Self> {
        Self::new(self.parent, self.payload, self.gap)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn payload(&self, v: usize) -> &P {
        &self.payload[v]
    }

    pub fn payloads(&self) -> &[P] {
        &self.payload
    }

    /// Gap on the edge into `v`; `None` at the root.
    pub fn gap(&self, v: usize) -> Option<Gap> {
        self.parent[v].map(|_| self.gap[v])
    }

    /// Nodes from `a` down to its descendant `b`, or `None` if `b` is not
    /// below `a`.
    pub fn down_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = self.parent[cur]?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Node map plus, for every non-root node `c`, the path of host nodes from
/// the image of `c`'s parent down to the image of `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEmbedding {
    pub node_map: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

impl TreeEmbedding {
    /// Checks the homeomorphic-embedding conditions and both gap conditions.
    pub fn verify<P, Q>(&self, t1: &RootedTree<P>, t2: &RootedTree<Q>, leq: impl Fn(&P, &Q) -> bool) -> bool {
        if self.node_map.len() != t1.len() || self.paths.len() != t1.len() {
            return false;
        }
        if self.node_map.iter().any(|&x| x >= t2.len()) {
            return false;
        }
        let mut used = vec![usize::MAX; t2.len()];
        for (v, &x) in self.node_map.iter().enumerate() {
            if used[x] != usize::MAX || !leq(t1.payload(v), t2.payload(x)) {
                return false;
            }
            used[x] = v;
        }
        // interior path nodes belong to exactly one edge and to no image
        let mut interior = vec![false; t2.len()];
        for c in 0..t1.len() {
            let Some(p) = t1.parent(c) else {
                if !self.paths[c].is_empty() {
                    return false;
                }
                continue;
            };
            let path = &self.paths[c];
            if t2.down_path(self.node_map[p], self.node_map[c]).as_ref() != Some(path) {
                return false;
            }
            for w in &path[1..] {
                if t2.gap(*w).is_none_or(|g| g < t1.gap[c]) {
                    return false;
                }
            }
            for &w in &path[1..path.len() - 1] {
                if used[w] != usize::MAX || interior[w] {
                    return false;
                }
                interior[w] = true;
            }
        }
        // sibling edges must leave the parent's image through different children
        for u in 0..t1.len() {
            let mut first: Vec<usize> = t1.children(u).iter().map(|&c| self.paths[c][1]).collect();
            first.sort_unstable();
            let before = first.len();
            first.dedup();
            if first.len() != before {
                return false;
            }
        }
        true
    }
}

/// Homeomorphic embedding of label trees under a quasi-order, respecting the
/// gap condition on every edge of every image path.
pub fn find_tree_homeo_embedding(
    t1: &RootedTree<usize>,
    t2: &RootedTree<usize>,
    qo: &QuasiOrder,
) -> Result<Option<TreeEmbedding>> {
    if t1.payloads().iter().chain(t2.payloads()).any(|&l| l >= qo.len()) {
        return Err(Error::Domain("tree label outside the order".into()));
    }
    Ok(find_tree_homeo_embedding_by(t1, t2, |a, b| qo.leq(*a, *b)))
}

/// As [`find_tree_homeo_embedding`], comparing payloads with `leq`.
pub fn find_tree_homeo_embedding_by<P, Q>(
    t1: &RootedTree<P>,
    t2: &RootedTree<Q>,
    leq: impl Fn(&P, &Q) -> bool,
) -> Option<TreeEmbedding> {
    let mut s = TreeSearch {
        t1,
        t2,
        leq: &leq,
        emb: HashMap::new(),
        reach: HashMap::new(),
    };
    let x = (0..t2.len()).find(|&x| s.emb(t1.root(), x))?;
    let mut out = TreeEmbedding {
        node_map: vec![usize::MAX; t1.len()],
        paths: vec![Vec::new(); t1.len()],
    };
    s.build(t1.root(), x, &mut out);
    Some(out)
}

struct TreeSearch<'a, P, Q, F> {
    t1: &'a RootedTree<P>,
    t2: &'a RootedTree<Q>,
    leq: &'a F,
    emb: HashMap<(usize, usize), bool>,
    /// `(c, y)`: can `c` be placed at `y` or below it, with every edge from
    /// `y`'s parent down carrying a gap at least `c`'s.
    reach: HashMap<(usize, usize), Option<usize>>,
}

impl<P, Q, F: Fn(&P, &Q) -> bool> TreeSearch<'_, P, Q, F> {
    fn emb(&mut self, u: usize, x: usize) -> bool {
        if let Some(&b) = self.emb.get(&(u, x)) {
            return b;
        }
        let ok = (self.leq)(self.t1.payload(u), self.t2.payload(x)) && self.matching(u, x).is_some();
        self.emb.insert((u, x), ok);
        ok
    }

    /// Where `c` lands if its path enters through host node `y`.
    fn reach(&mut self, c: usize, y: usize) -> Option<usize> {
        if let Some(&r) = self.reach.get(&(c, y)) {
            return r;
        }
        let need = self.t1.gap[c];
        let r = if self.t2.gap[y] < need {
            None
        } else if self.emb(c, y) {
            Some(y)
        } else {
            let kids = self.t2.children(y).to_vec();
            kids.into_iter().find_map(|z| self.reach(c, z))
        };
        self.reach.insert((c, y), r);
        r
    }

    /// Assigns each child of `u` a distinct child of `x` to descend through.
    fn matching(&mut self, u: usize, x: usize) -> Option<Vec<usize>> {
        let cs = self.t1.children(u).to_vec();
        let ys = self.t2.children(x).to_vec();
        if cs.len() > ys.len() {
            return None;
        }
        let adj: Vec<Vec<usize>> = cs
            .iter()
            .map(|&c| (0..ys.len()).filter(|&j| self.reach(c, ys[j]).is_some()).collect())
            .collect();
        let mut owner = vec![usize::MAX; ys.len()];
        for i in 0..cs.len() {
            let mut seen = vec![false; ys.len()];
            if !augment(i, &adj, &mut owner, &mut seen) {
                return None;
            }
        }
        let mut choice = vec![0; cs.len()];
        for (j, &i) in owner.iter().enumerate() {
            if i != usize::MAX {
                choice[i] = ys[j];
            }
        }
        Some(choice)
    }

    fn build(&mut self, u: usize, x: usize, out: &mut TreeEmbedding) {
        out.node_map[u] = x;
        let choice = self.matching(u, x).expect("feasible node");
        for (&c, y) in self.t1.children(u).to_vec().iter().zip(choice) {
            let z = self.reach(c, y).expect("feasible child");
            out.paths[c] = self.t2.down_path(x, z).expect("descendant");
            self.build(c, z, out);
        }
    }
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j] == usize::MAX || augment(owner[j], adj, owner, seen) {
            owner[j] = i;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(n: u64) -> Gap {
        Gap::Finite(n)
    }

    fn tree(parent: &[Option<usize>], labels: &[usize], gaps: &[Gap]) -> RootedTree<usize> {
        RootedTree::new(parent.to_vec(), labels.to_vec(), gaps.to_vec()).unwrap()
    }

    #[test]
    fn identity() {
        let q = QuasiOrder::trivial();
        let t = tree(&[None, Some(0), Some(0), Some(1)], &[0; 4], &[fin(0), fin(1), fin(2), Gap::Omega]);
        let e = find_tree_homeo_embedding(&t, &t, &q).unwrap().unwrap();
        assert!(e.verify(&t, &t, |a, b| q.leq(*a, *b)));
    }

    #[test]
    fn single_node_reaches_labelled_node() {
        let q = QuasiOrder::chain(vec!["a".into(), "b".into()]).unwrap();
        let one = tree(&[None], &[1], &[fin(0)]);
        let host = tree(&[None, Some(0), Some(1)], &[0, 0, 1], &[fin(0), fin(0), fin(0)]);
        let e = find_tree_homeo_embedding(&one, &host, &q).unwrap().unwrap();
        assert_eq!(e.node_map, vec![2]);
    }

    #[test]
    fn gap_condition_blocks() {
        let q = QuasiOrder::trivial();
        let guest = tree(&[None, Some(0)], &[0, 0], &[fin(0), fin(3)]);
        let host = tree(&[None, Some(0), Some(1)], &[0; 3], &[fin(0), fin(5), fin(2)]);
        // the only two-node paths pass an edge labelled 2 or end at node 1 via 5
        let e = find_tree_homeo_embedding(&guest, &host, &q).unwrap().unwrap();
        assert_eq!(e.node_map, vec![0, 1]);
        let host2 = tree(&[None, Some(0), Some(1)], &[0; 3], &[fin(0), fin(2), fin(5)]);
        let e = find_tree_homeo_embedding(&guest, &host2, &q).unwrap().unwrap();
        assert_eq!(e.node_map, vec![1, 2]);
        let host3 = tree(&[None, Some(0)], &[0; 2], &[fin(0), fin(2)]);
        assert!(find_tree_homeo_embedding(&guest, &host3, &q).unwrap().is_none());
    }

    #[test]
    fn siblings_need_distinct_branches() {
        let q = QuasiOrder::trivial();
        let cherry = tree(&[None, Some(0), Some(0)], &[0; 3], &[Gap::Omega; 3]);
        let path = tree(&[None, Some(0), Some(1)], &[0; 3], &[Gap::Omega; 3]);
        assert!(find_tree_homeo_embedding(&cherry, &path, &q).unwrap().is_none());
        // subdivided cherry works
        let sub = tree(&[None, Some(0), Some(1), Some(0)], &[0; 4], &[Gap::Omega; 4]);
        let e = find_tree_homeo_embedding(&cherry, &sub, &q).unwrap().unwrap();
        assert!(e.verify(&cherry, &sub, |a, b| q.leq(*a, *b)));
    }

    #[test]
    fn rejects_non_trees() {
        assert!(RootedTree::new(vec![None, None], vec![0, 0], vec![fin(0); 2]).is_err());
        assert!(RootedTree::new(vec![Some(1), Some(0)], vec![0, 0], vec![fin(0); 2]).is_err());
        assert!(Gap::Finite(u64::MAX) < Gap::Omega);
    }
}
