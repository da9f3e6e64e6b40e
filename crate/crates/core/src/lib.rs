//! Kernels, 3-kernels and the 3-substitution method on finite digraphs.
//!
//! The crate is organised bottom-up: [`digraph`] holds the graph type and
//! distance machinery, [`cycles`] enumerates cycles and circuits and checks
//! chord conditions, [`kernels`] searches for `(k, l)`-kernels, and
//! [`substitution`] builds 3-substitution sequences, roads and the derived
//! pre-3-kernels. [`generators`] and [`harness`] drive seeded verification
//! campaigns over all of the above.

pub mod cycles;
pub mod digraph;
mod error;
pub mod generators;
pub mod harness;
pub mod kernels;
pub mod substitution;
pub mod textfmt;

pub use cycles::{Chord, Circuit, Cycle, CycleCondition, HypothesisReport, Violation};
pub use digraph::{Digraph, Distance, DistanceMatrix, InducedSubdigraph, Vertex, VertexSet};
pub use error::{Error, Result};
pub use kernels::{KernelQuery, KernelResult, Perfection};
pub use substitution::{MethodOutcome, Road, SubstitutionTrace};
pub use textfmt::{format_digraph, parse_digraph_text, DigraphDocument};
