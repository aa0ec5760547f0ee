//! Connectivity and fault-tolerance analysis for k-ary n-cube networks.
//!
//! The crate models the k-ary n-cube implicitly through digit arithmetic,
//! classifies vertex cuts by the sizes of the components they leave behind,
//! and computes conditional connectivity values by three independent routes:
//! closed-form expressions, exhaustive subset search, and a search over
//! neighborhoods of connected vertex sets. A verification layer replays the
//! supporting structural facts exhaustively at small scale, and a reliability
//! layer estimates disconnection probabilities under random vertex faults.

pub mod cuts;
mod dense;
pub mod error;
pub mod reliability;
mod sampling;
pub mod solver;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use torus::{Decomposition, Torus, Vertex, VertexSet};
