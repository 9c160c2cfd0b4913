//! Relative atomic complexes of k-equal arrangements, their direct limits,
//! and mechanical verification of the algebra that lives on them.
//!
//! The crate is organized in layers:
//!
//! - [`setcore`]: atoms, atom sets, closure partitions, complement
//!   families, free vertices, and the inversion counts that carry the
//!   sign conventions downstream.
//! - [`ratlin`]: exact sparse linear algebra over the rationals.
//! - [`atomic`]: the finite complex `A(k,l)` with its differential, cup
//!   product, Betti numbers and the stabilization map.
//! - [`limit`]: the limiting complexes indexed by complement families in
//!   canonical `(core, halo)` form, their codegree, differential, homology
//!   and the book-shaped generating set.
//! - [`bicx`]: the simplicial differential on the sum of all limits, the
//!   decomposition onto augmented simplices, and the double-complex checks.
//! - [`gprod`]: the graded product, its inversion-count sign, and the
//!   conditional Leibniz rule with its counterexamples.

pub mod atomic;
pub mod bicx;
pub mod error;
pub mod formal;
pub mod gprod;
pub mod limit;
pub mod ratlin;
pub mod setcore;

pub use error::{Error, Result};
