//! Highest-weight modules: PBW bases, mode actions, Gram matrices and
//! singular vectors.

mod graded;
mod gram;
mod spec;
mod verma;

pub use graded::{BasisRef, GradedVector, Module, ReducedVec};
pub use gram::{find_singular_vectors, gram_matrix, singular_coefficients};
pub use spec::{Field, ModuleDescription, ModuleSpec, SingularRelation};
pub use verma::VermaVec;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("singular relation at level {0} is not homogeneous of that level")]
    Inhomogeneous(usize),
    #[error("singular relation at level {0} is not in the kernel of the Gram matrix")]
    NotInGramKernel(usize),
    #[error("no singular vector at level {0}")]
    NoSingularVector(usize),
}
