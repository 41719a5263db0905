//! Exact computations on cone constructions over graphs.
//!
//! The n-fold cone Δₙ(G) stacks n layers of G over a shared base and joins the
//! top layer to an apex; Δ₁(G) adds a universal vertex and Δ₂(G) is the
//! Mycielskian. The generalized cone Δ_{H,h}(G) glues one cone per vertex of a
//! pattern graph H (copy v of height h(v)) along the shared base and wires the
//! apexes according to the edges of H.
//!
//! The crate computes fractional and ordinary chromatic numbers exactly over
//! arbitrary-precision rationals, evaluates the closed-form value that the
//! fractional chromatic number of a cone takes, and constructs explicit
//! fractional-clique / fractional-colouring certificates for that value which
//! an independent verifier can check.
//!
//! Everything is deterministic: enumeration orders, pivoting rules and search
//! orders are fixed, so identical inputs give identical outputs.

mod bitset;
pub mod certificates;
pub mod chromatic;
pub mod cones;
mod error;
pub mod graph;
pub mod indep;
pub mod ratlp;
pub mod rational;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
