//! Inverse Voronoi problems on graphs: given candidate cells `U_1..U_k`,
//! find sites whose Voronoi diagram is exactly those cells.
//!
//! The crate provides the solution checker, an exact quasilinear solver for
//! trees, a 2-SAT solver for instances whose open cells have at most two
//! vertices, brute-force oracles and instance generators.

pub mod bench;
pub mod cli;
pub mod dispatch;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod interval;
pub mod oracle;
pub mod sat;
pub mod transform;
pub mod tree_solver;
pub mod voronoi;
pub mod weight;

pub use graph::{Graph, RootedTree};
pub use instance::{Cell, Instance, InstanceKind, Solution};
pub use weight::{Rational, Weight};
