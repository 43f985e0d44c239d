use std::sync::Arc;

use crate::digraph::{MultiDigraph, SubgraphMap, VertexId};
use crate::error::{Error, Result};
use crate::qo::QuasiOrder;

/// A digraph whose vertices carry elements of a quasi-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledDigraph {
    pub digraph: MultiDigraph,
    pub qo: Arc<QuasiOrder>,
    /// `labels[v]` is an element index of `qo`.
    pub labels: Vec<usize>,
}

impl LabelledDigraph {
    pub fn new(digraph: MultiDigraph, qo: Arc<QuasiOrder>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != digraph.vertex_count() {
            return Err(Error::Structural(format!(
                "{} labels for {} vertices",
                labels.len(),
                digraph.vertex_count()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= qo.len()) {
            return Err(Error::Domain(format!("label index {l} is not in the order")));
        }
        Ok(Self { digraph, qo, labels })
    }

    /// Every vertex labelled with the single element of the trivial order.
    pub fn unlabelled(digraph: MultiDigraph) -> Self {
        let labels = vec![0; digraph.vertex_count()];
        Self {
            digraph,
            qo: Arc::new(QuasiOrder::trivial()),
            labels,
        }
    }

    pub fn label(&self, v: VertexId) -> usize {
        self.labels[v]
    }

    pub fn label_name(&self, v: VertexId) -> &str {
        self.qo.name(self.labels[v])
    }

    /// Labels carried over to a subgraph extracted with `map`.
    pub fn restrict(&self, sub: MultiDigraph, map: &SubgraphMap) -> LabelledDigraph {
        let labels = map.vertices.iter().map(|&v| self.labels[v]).collect();
        LabelledDigraph {
            digraph: sub,
            qo: self.qo.clone(),
            labels,
        }
    }
}
