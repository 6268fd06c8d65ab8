//! Dense complex linear algebra and bipartite-state plumbing: tensor
//! products, partial traces, a Hermitian Jacobi eigensolver, and a one-sided
//! Jacobi SVD. Everything downstream builds on this module.
//!
//! All operations here are pure functions on immutable inputs.

mod eigen;
mod matrix;
mod state;
mod svd;

pub use eigen::hermitian_eigh;
pub use matrix::{
    basis_vector, complete_orthonormal_basis, kron_vec, sigma_x, sigma_y, sigma_z, tensor_product,
    tensor_product_with_cap, vec_inner, vec_norm, ComplexMatrix, C64, I, ONE, ZERO,
};
pub(crate) use state::product_basis_elements;
pub use state::{
    build_observable, expectation_value, expectation_value_pure, partial_trace,
    partial_trace_state, BipartiteState, DensityOperator, Subsystem,
};
pub use svd::{svd, Svd};
