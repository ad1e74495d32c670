//! Mode calculus for Lie-type chiral algebras.
//!
//! Mode indices are weight-adjusted: `x(-n)` raises conformal weight by `n`.
//! The mathematicians' mode `v_n` of a weight-`h` field is `v(n + 1 − h)`.

mod element;
mod presentation;
pub mod presets;

pub use element::{
    commutator, is_canonical, normal_order, normal_order_element, opp, opp_element, word_label,
    AlgebraElement, Mode, Word,
};
pub use presentation::{
    AlgebraPresentation, BracketEntry, BracketTerm, Conformal, GeneratorSpec, IndexPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` is not quasiprimary")]
    NotQuasiprimary(String),
    #[error("unknown algebra preset `{0}`")]
    UnknownPreset(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
}

/// Weight-adjusted index of the mathematicians' mode `v_n` for a weight-`h` field.
pub fn physics_index(math_index: i64, weight: u32) -> i64 {
    math_index + 1 - weight as i64
}

/// Mathematicians' index of the weight-adjusted mode `v(p)` for a weight-`h` field.
pub fn math_index(physics_index: i64, weight: u32) -> i64 {
    physics_index - 1 + weight as i64
}
