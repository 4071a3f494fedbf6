//! Network topology inference from information cascades.
//!
//! The crate simulates first-arrival cascades over undirected networks and
//! recovers the hidden edge set from the timestamps, using only the average
//! first (and, for general graphs, second) moment of the per-edge delay.
//!
//! * [`graph`]: graphs, hop distances, convex hulls, separating sets,
//!   reconstruction from distance profiles and redundant vertices.
//! * [`generators`]: uniform-attachment trees, `G(n, m)` graphs, forest fire.
//! * [`diffusion`]: delay distributions and cascade simulation.
//! * [`inference`]: weight matrices, the transfer step, tree inference,
//!   graph inference, the degree estimator and score fusion.
//! * [`theory`]: numeric and Monte Carlo checks of the supporting claims.
//! * [`evaluation`]: edge recovery rate, seeded trials and sweeps.

pub mod diffusion;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod graph;
pub mod inference;
pub mod seed;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, Graph, Vertex};

// The guide's code listings compile and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/redundancy.md")]
    mod redundancy {}
    #[doc = include_str!("../../../book/src/cascades.md")]
    mod cascades {}
    #[doc = include_str!("../../../book/src/tree_inference.md")]
    mod tree_inference {}
    #[doc = include_str!("../../../book/src/graph_inference.md")]
    mod graph_inference {}
    #[doc = include_str!("../../../book/src/theory.md")]
    mod theory {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
