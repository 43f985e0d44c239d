//! Finite quasi-orders used as label alphabets.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A reflexive, transitive relation on a finite ordered ground set.
/// Elements are referred to by index; names exist for interchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiOrder {
    elements: Vec<String>,
    leq: Vec<bool>,
    index: HashMap<String, usize>,
}

impl QuasiOrder {
    /// Reflexive-transitive closure of `pairs` over `elements`.
    pub fn from_pairs(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Domain(format!("order pair ({a}, {b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::build(elements, leq)
    }

    /// Validates that `leq` (row-major, `n*n`) is reflexive and transitive.
    pub fn from_matrix(elements: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = elements.len();
        if leq.len() != n * n {
            return Err(Error::Domain("order matrix has the wrong size".into()));
        }
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::Domain(format!("order is not reflexive at {}", elements[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !leq[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j * n + k] && !leq[i * n + k] {
                        return Err(Error::Domain("order is not transitive".into()));
                    }
                }
            }
        }
        Self::build(elements, leq)
    }

    fn build(elements: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate order element {e:?}")));
            }
        }
        Ok(Self { elements, leq, index })
    }

    /// Every element comparable only to itself.
    pub fn equality(elements: Vec<String>) -> Result<Self> {
        Self::from_pairs(elements, &[])
    }

    /// `elements[i] <= elements[j]` iff `i <= j`.
    pub fn chain(elements: Vec<String>) -> Result<Self> {
        let n = elements.len();
        let leq = (0..n * n).map(|x| x / n <= x % n).collect();
        Self::build(elements, leq)
    }

    /// One-element order, used when a digraph carries no labels.
    pub fn trivial() -> Self {
        Self::equality(vec!["*".to_string()]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    /// Strict comparison pairs `(a, b)` with `a <= b`, `a != b`, in index order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| !self.leq(i, j) || (0..n).all(|k| !self.leq(j, k) || self.leq(i, k)))
        })
    }

    /// Componentwise order on pairs. Element `(i, j)` has index `i * |q2| + j`
    /// and name `(x,y)`.
    pub fn product(q1: &QuasiOrder, q2: &QuasiOrder) -> QuasiOrder {
        let (n1, n2) = (q1.len(), q2.len());
        let n = n1 * n2;
        let elements = (0..n)
            .map(|x| format!("({},{})", q1.name(x / n2), q2.name(x % n2)))
            .collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = q1.leq(a / n2, b / n2) && q2.leq(a % n2, b % n2);
            }
        }
        Self::build(elements, leq).expect("distinct product names")
    }

    /// Tagged union with cross-tag elements incomparable. Left elements keep
    /// their indices; right element `j` becomes `|q1| + j`.
    pub fn disjoint_union(q1: &QuasiOrder, q2: &QuasiOrder) -> QuasiOrder {
        let (n1, n2) = (q1.len(), q2.len());
        let n = n1 + n2;
        let elements = q1
            .elements
            .iter()
            .map(|x| format!("L.{x}"))
            .chain(q2.elements.iter().map(|y| format!("R.{y}")))
            .collect();
        let mut leq = vec![false; n * n];
        for a in 0..n1 {
            for b in 0..n1 {
                leq[a * n + b] = q1.leq(a, b);
            }
        }
        for a in 0..n2 {
            for b in 0..n2 {
                leq[(n1 + a) * n + n1 + b] = q2.leq(a, b);
            }
        }
        Self::build(elements, leq).expect("distinct union names")
    }

    fn check(&self, seq: &[usize]) -> Result<()> {
        match seq.iter().find(|&&x| x >= self.len()) {
            Some(x) => Err(Error::Domain(format!("element index {x} is not in the order"))),
            None => Ok(()),
        }
    }
}

/// Which way two orders are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Product,
    DisjointUnion,
}

pub fn qo_combine(kind: Combine, q1: &QuasiOrder, q2: &QuasiOrder) -> QuasiOrder {
    match kind {
        Combine::Product => QuasiOrder::product(q1, q2),
        Combine::DisjointUnion => QuasiOrder::disjoint_union(q1, q2),
    }
}

/// Subsequence order: is there a strictly increasing map `i -> j` with
/// `s1[i] <= s2[j]`? Greedy leftmost matching is exact for this order.
pub fn higman_leq(s1: &[usize], s2: &[usize], qo: &QuasiOrder) -> Result<bool> {
    qo.check(s1)?;
    qo.check(s2)?;
    let mut j = 0;
    for &a in s1 {
        while j < s2.len() && !qo.leq(a, s2[j]) {
            j += 1;
        }
        if j == s2.len() {
            return Ok(false);
        }
        j += 1;
    }
    Ok(true)
}
