//! Symbolic graph algorithms over a set-based one-step interface.
//!
//! Graphs are accessed only through `post` and `pre` image operations plus
//! a small priced algebra of vertex sets, and every algorithm reports how
//! many operations and how many simultaneously alive sets it used. On top
//! of the engine sit strongly-connected-component decomposition with
//! skeleton-guided searches, the classic existential objectives, exact and
//! approximate diameter computation, generators for the set-disjointness
//! reduction families, and a communication-protocol simulator that charges
//! bits per operation on those families. Explicit-graph reference
//! implementations live in `oracles` and back every randomized test.

pub mod diameter;
pub mod engine;
pub mod error;
pub mod fileio;
pub mod objectives;
pub mod oracles;
pub mod protocol;
pub mod random;
pub mod reductions;
pub mod scc;

pub use engine::{CounterSnapshot, Graph, Mask, OpCounter, StepKind, StepObserver, VertexSet};
pub use error::Error;
