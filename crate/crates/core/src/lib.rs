//! Exact cohomology of finite groups.
//!
//! The crate computes Schur multipliers `H²(G, Q/Z)` and Bogomolov
//! multipliers `B₀(G)` of small groups from normalized bar cochains, checks
//! restriction isomorphisms on products and semidirect products, certifies
//! lower bounds for `B₀` on two families of class-2 `p`-groups given by
//! central quotients of Schur covers, and runs Tate-cohomology checks on
//! integral representations. Inputs are described by [`spec::GroupSpec`].

pub mod class2;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod spec;

pub use error::{Error, Result};

/// Engine version; part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
