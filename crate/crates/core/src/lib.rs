//! Exact simulation and analysis of decoherence in closed bipartite quantum
//! systems.
//!
//! A pure state on `H_A ⊗ H_B` is evolved exactly under a global Hamiltonian
//! while the library tracks everything a local observer would call
//! "nonunitary": the Schmidt decomposition and its avoided-crossing
//! coefficient dynamics ([`dynamics`]), the growth of entanglement out of an
//! initially separable state ([`desep`]), and the apparent entropy production
//! seen through Zwanzig coarse-graining projectors ([`zwanzig`]).
//!
//! The numerical substrate ([`hilbert`]) is deliberately dependency-light:
//! dense complex matrices with a cyclic Jacobi Hermitian eigensolver and a
//! one-sided Jacobi SVD, accurate and auditable at the desk scales this
//! library targets (total dimension ≤ a few thousand).
//!
//! [`models`] provides the preset scenarios (measurement chains, Bell pairs,
//! coupled oscillators, branch-counting toy models) that the `decoh` CLI
//! exposes.

pub mod desep;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod models;
pub mod schmidt;
pub mod tolerance;
pub mod zwanzig;

pub use error::{Error, Result};
pub use hilbert::{
    partial_trace, partial_trace_state, tensor_product, BipartiteState, ComplexMatrix,
    DensityOperator, Subsystem, C64,
};
pub use schmidt::SchmidtDecomposition;
pub use tolerance::ToleranceConfig;
