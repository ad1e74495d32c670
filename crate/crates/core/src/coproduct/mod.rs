//! Coproduct actions on tensor products and the expansion maps `ι±`.

mod iota;
mod tensor;

pub use iota::{iota_expand, iota_term, Direction, RationalMonomial};
pub use tensor::{total_level, TensorElement, TensorKey, TensorSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoproductError {
    #[error("result reaches level {level}, beyond the truncation {lmax}")]
    HeadroomExceeded { level: usize, lmax: usize },
    #[error("translation relations need a raising mode, got index {0}")]
    NotRaising(i64),
}
