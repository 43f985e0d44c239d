//! Alternating paths, strong immersion and series-parallel structure of
//! directed multigraphs.

pub mod altpath;
pub mod blocks;
pub mod corpus;
pub mod decomp;
pub mod digraph;
pub mod error;
pub mod flow;
pub mod harness;
pub mod immersion;
pub mod io;
pub mod iso;
pub mod labelled;
pub mod qo;
pub mod separation;
pub mod sp;
pub mod sptree;
pub mod thread;

pub use digraph::{Edge, EdgeId, MultiDigraph, SubgraphMap, VertexId};
pub use error::{Error, Result};
pub use labelled::LabelledDigraph;
pub use qo::QuasiOrder;
pub use separation::Separation;
pub use thread::Thread;
