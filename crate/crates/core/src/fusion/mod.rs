//! Depth-filtered fusion quotients of tensor products of modules.

mod quotient;
mod relations;
mod subspace;

pub use quotient::{fuse, graded_dims, lmax_floor, mode_action, projection, FuseOptions, FusionQuotient, FusionResult};
pub use relations::{generate_relations, Factor, RelationSet, SingularGenerator};
pub use subspace::{depth_generators, depth_quotient, special_subspace, ModuleQuotient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("{what} did not stabilize at truncation {lmax}")]
    NotStabilized { what: &'static str, lmax: usize },
    #[error("candidate tensors do not span the quotient: {tensor} is missed at truncation {lmax}")]
    CandidateNotSpanning { tensor: String, lmax: usize },
    #[error("{tensor} lies beyond the truncation {lmax}")]
    BeyondTruncation { tensor: String, lmax: usize },
    #[error("mode of index {index} does not map depth {from} into depth {to}")]
    ModeOutOfRange { index: i64, from: usize, to: usize },
    #[error("quotients were built at different insertion points")]
    MismatchedInsertionPoints,
    #[error("insertion point must be nonzero")]
    ZeroInsertionPoint,
}
