//! Functionals on tensor products, their compatibility conditions and the
//! dual `L(0)` action.

mod constraints;
mod functional;

pub use constraints::{
    compat_constraints, crosscheck, dual, dual_l0_matrix, Annihilation, ConstraintFamily, CrosscheckReport, DualConstraintSystem,
    DualOptions, DualResult,
};
pub use functional::{adjoint_image, dual_action, Functional};

use crate::fusion::FusionError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("{tensor} lies outside the domain truncated at {lmax}")]
    OutsideDomain { tensor: String, lmax: usize },
    #[error("generator {0} is not quasi-primary")]
    NotQuasiprimary(String),
    #[error("the value on {tensor} is left undetermined at truncation {lmax}")]
    Underdetermined { tensor: String, lmax: usize },
    #[error("dual system did not stabilize at truncation {lmax}")]
    NotStabilized { lmax: usize },
    #[error("insertion point must be nonzero")]
    ZeroInsertionPoint,
    #[error(transparent)]
    Fusion(FusionError),
}
