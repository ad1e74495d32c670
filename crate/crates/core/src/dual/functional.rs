use std::collections::BTreeMap;

use super::DualError;
use crate::algebra::math_index;
use crate::coproduct::{total_level, TensorElement, TensorKey, TensorSpace};
use crate::linalg::Rat;
use crate::module::{Field, Module};

/// Values `⟨ψ*, x⟩` on basis tensors of total level at most `lmax`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Functional {
    pub values: BTreeMap<TensorKey, Rat>,
    pub lmax: usize,
}

impl Functional {
    /// The zero functional on every basis tensor of `space`.
    pub fn zero(space: &TensorSpace) -> Self {
        Functional {
            values: space.basis_keys().into_iter().map(|k| (k, Rat::zero())).collect(),
            lmax: space.lmax,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Rat::is_zero)
    }

    /// `⟨ψ*, x⟩`; fails if `x` leaves the domain.
    pub fn evaluate(&self, space: &TensorSpace, x: &TensorElement) -> Result<Rat, DualError> {
        let mut out = Rat::zero();
        for (k, c) in &x.terms {
            match self.values.get(k) {
                Some(v) => out += c * v,
                None => {
                    return Err(DualError::OutsideDomain {
                        tensor: space.key_label(k),
                        lmax: self.lmax,
                    })
                }
            }
        }
        Ok(out)
    }

    /// Values keyed by tensor label, zeros omitted.
    pub fn labelled(&self, space: &TensorSpace) -> BTreeMap<String, Rat> {
        self.values
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (space.key_label(k), v.clone()))
            .collect()
    }
}

/// Sign and conjugate index of `field(index)` under `opp`.
pub(crate) fn opposite(module: &Module, field: Field, index: i64) -> Result<(Rat, i64), DualError> {
    let p = module.presentation();
    match field.normalize(p) {
        Field::Generator(g) => {
            let spec = p.generator(g);
            if !spec.quasiprimary {
                return Err(DualError::NotQuasiprimary(spec.name.clone()));
            }
            Ok((spec.quasiprimary_sign.clone(), -index))
        }
        Field::Conformal => Ok((Rat::one(), -index)),
    }
}

/// The tensor `y` with `⟨field(index)·ψ*, k⟩ = ⟨ψ*, y⟩`:
/// `σ [Σ_{m≥0} binom(N, m) w^{N−m} (v_m ψ₁) ⊗ ψ₂ + ψ₁ ⊗ v(−index) ψ₂]` with `N`
/// the mathematicians' index of `v(−index)` and `σ` the sign of `opp`.
pub fn adjoint_image(space: &TensorSpace, field: Field, index: i64, k: TensorKey) -> Result<TensorElement, DualError> {
    let (sign, conj) = opposite(space.left, field, index)?;
    let h = field.weight(space.left.presentation()) as i64;
    let n = math_index(conj, h as u32);
    let (a, b) = k;
    let mut out = TensorElement::zero();
    let mut m = 0i64;
    while m + 1 - h <= a.level as i64 {
        let c = &sign * Rat::binom(n, m) * space.w.pow(n - m);
        if !c.is_zero() {
            for (x, y) in space.left.act_basis(field, m + 1 - h, a).iter() {
                out.add_term((*x, b), &c * y);
            }
        }
        m += 1;
    }
    for (x, y) in space.right.act_basis(field, conj, b).iter() {
        out.add_term((a, *x), &sign * y);
    }
    Ok(out)
}

/// `field(index)·ψ*`, defined on the basis tensors whose adjoint image stays
/// inside the domain of `psi`.
pub fn dual_action(space: &TensorSpace, field: Field, index: i64, psi: &Functional) -> Result<Functional, DualError> {
    let mut values = BTreeMap::new();
    for k in psi.values.keys() {
        let y = adjoint_image(space, field, index, *k)?;
        if y.terms.keys().all(|x| total_level(x) <= psi.lmax && psi.values.contains_key(x)) {
            values.insert(*k, psi.evaluate(space, &y)?);
        }
    }
    Ok(Functional {
        values,
        lmax: psi.lmax,
    })
}


#[cfg(test)]
mod adjointness {
    use super::*;
    use crate::module::ModuleSpec;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn adjoint_image_is_the_opposite_coproduct(n in -2i64..=2, p in -5i64..=5, q in 1i64..=3, seed in 0usize..64) {
            prop_assume!(p != 0);
            let m = Module::new(
                ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8)).with_singular_level(2).unwrap(),
            );
            let space = TensorSpace::new(&m, &m, Rat::new(p, q), 6);
            let keys: Vec<TensorKey> = space.basis_keys().into_iter().filter(|k| total_level(k) <= 3).collect();
            let k = keys[seed % keys.len()];
            let field = Field::Generator(0);
            let lhs = adjoint_image(&space, field, n, k).unwrap();
            let rhs = space.delta2_raw(field, -n, &TensorElement::basis(k));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
