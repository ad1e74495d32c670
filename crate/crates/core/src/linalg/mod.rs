//! Exact rational arithmetic and linear algebra.

mod jordan;
mod matrix;
mod poly;
mod rat;
mod sparse;

pub use jordan::{jordan_structure, EigenBlocks, JordanReport, ResidualFactor};
pub use matrix::{RaggedRows, RatMatrix};
pub use poly::Poly;
pub use rat::{ParseRatError, Rat};
pub use sparse::{
    axpy, quotient_basis, sparse_from_dense, sparse_to_dense, Eliminator, QuotientBasis, SpanSolver, SparseVec,
};

/// Basis of the right nullspace of `m`, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    m.kernel_basis()
}
