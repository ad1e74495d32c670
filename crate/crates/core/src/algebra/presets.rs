use std::collections::BTreeMap;

use super::presentation::{AlgebraPresentation, GeneratorSpec, IndexPoly};
use super::AlgebraError;
use crate::linalg::Rat;

/// Virasoro algebra: `[L(m), L(n)] = (m − n) L(m + n) + (c/12)(m³ − m) δ_{m+n,0}`.
pub fn virasoro(c: Rat) -> AlgebraPresentation {
    let c12 = &c / Rat::from(12);
    let coeff = IndexPoly(vec![(1, 0, Rat::one()), (0, 1, -Rat::one())]);
    let central = IndexPoly(vec![(3, 0, c12.clone()), (1, 0, -c12)]);
    AlgebraPresentation::new(
        "virasoro",
        vec![GeneratorSpec::quasiprimary("L", 2)],
        vec![("L", "L", vec![("L", coeff)], central)],
        BTreeMap::from([("c".to_string(), c)]),
        "L",
        false,
    )
    .expect("virasoro preset is well formed")
}

/// Rank-one Heisenberg algebra: `[a(m), a(n)] = m δ_{m+n,0}`, with the
/// Sugawara conformal vector.
pub fn heisenberg() -> AlgebraPresentation {
    AlgebraPresentation::new(
        "heisenberg",
        vec![GeneratorSpec::quasiprimary("a", 1)],
        vec![("a", "a", Vec::new(), IndexPoly(vec![(1, 0, Rat::one())]))],
        BTreeMap::new(),
        "a",
        true,
    )
    .expect("heisenberg preset is well formed")
}

/// Preset lookup by name; `c` is required for Virasoro and ignored otherwise.
pub fn by_name(name: &str, c: Option<Rat>) -> Result<AlgebraPresentation, AlgebraError> {
    match name {
        "virasoro" => Ok(virasoro(c.ok_or(AlgebraError::MissingParameter("c"))?)),
        "heisenberg" => Ok(heisenberg()),
        other => Err(AlgebraError::UnknownPreset(other.to_string())),
    }
}
