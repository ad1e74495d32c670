use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::subspace::depth_generators;
use crate::coproduct::{total_level, TensorElement, TensorSpace};
use crate::linalg::Rat;
use crate::module::{singular_coefficients, Field, Module};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Left,
    Right,
}

/// A singular relation of one factor. These hold identically in reduced
/// coordinates, so they are reported rather than imposed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularGenerator {
    pub factor: Factor,
    pub level: usize,
    pub coefficients: BTreeMap<String, Rat>,
}

/// The relations cutting the truncated tensor product down to the fusion
/// quotient.
#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    pub singular: Vec<SingularGenerator>,
    pub depth: Vec<TensorElement>,
    pub translation: Vec<TensorElement>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.depth.len() + self.translation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &TensorElement> {
        self.depth.iter().chain(&self.translation)
    }
}

fn singular_generators(m: &Module, factor: Factor) -> Vec<SingularGenerator> {
    m.spec()
        .singular_relations
        .iter()
        .map(|r| SingularGenerator {
            factor,
            level: r.level,
            coefficients: singular_coefficients(&r.element, m.spec()),
        })
        .collect()
}

/// Depth relations `Δ(g)·t` for generating words `g` above `depth`, and the
/// translation relations for every raising mode, on all basis tensors that
/// leave room for them below the truncation.
pub fn generate_relations(space: &TensorSpace, depth: usize) -> RelationSet {
    let mut out = RelationSet {
        singular: [
            singular_generators(space.left, Factor::Left),
            singular_generators(space.right, Factor::Right),
        ]
        .concat(),
        ..RelationSet::default()
    };
    let keys = space.basis_keys();
    let fits = |x: &TensorElement| x.max_level().map_or(false, |l| l <= space.lmax);

    for (prefix, x) in depth_generators(space.right, depth, space.lmax) {
        let wt = prefix.iter().map(|y| y.raise() as usize).sum::<usize>() + x.raise() as usize;
        for k in keys.iter().filter(|k| total_level(k) + wt <= space.lmax) {
            let mut r = space.delta2_raw(Field::Generator(x.generator), x.index, &TensorElement::basis(*k));
            for y in prefix.iter().rev() {
                r = space.delta2_raw(Field::Generator(y.generator), y.index, &r);
            }
            if fits(&r) {
                out.depth.push(r);
            }
        }
    }

    let gens = space.left.presentation().generators().len();
    for g in 0..gens {
        for k in 1..=space.lmax as i64 {
            for key in keys.iter().filter(|key| total_level(key) + k as usize <= space.lmax) {
                let r = space.translation_relation_raw(Field::Generator(g), -k, &TensorElement::basis(*key), depth);
                if fits(&r) {
                    out.translation.push(r);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Mode;
    use crate::module::ModuleSpec;

    #[test]
    fn singular_relations_are_reported_and_hold_identically() {
        let vac = Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::zero()).with_singular_level(1).unwrap());
        let m = Module::new(
            ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8))
                .with_singular_level(2)
                .unwrap(),
        );
        let space = TensorSpace::new(&vac, &m, Rat::one(), 4);
        let set = generate_relations(&space, 0);
        assert_eq!(
            set.singular,
            vec![
                SingularGenerator {
                    factor: Factor::Left,
                    level: 1,
                    coefficients: BTreeMap::from([("L(-1)".into(), Rat::one())]),
                },
                SingularGenerator {
                    factor: Factor::Right,
                    level: 2,
                    coefficients: BTreeMap::from([("L(-1)L(-1)".into(), Rat::one()), ("L(-2)".into(), Rat::new(-1, 2))]),
                },
            ]
        );
        let x = TensorElement::tensor(&vac.from_word(&[Mode::new(0, -1)]), &m.highest_weight_vector());
        assert!(x.is_zero());
        assert!(set.iter().all(|r| r.max_level().unwrap() <= 4));
        assert!(!set.is_empty());
    }

    #[test]
    fn depth_relations_start_above_the_depth() {
        let m = Module::new(
            ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8))
                .with_singular_level(2)
                .unwrap(),
        );
        let gens = depth_generators(&m, 1, 3);
        let weights: Vec<i64> = gens
            .iter()
            .map(|(p, x)| p.iter().map(Mode::raise).sum::<i64>() + x.raise())
            .collect();
        assert!(weights.iter().all(|&w| (2..=3).contains(&w)));
        assert_eq!(gens.len(), 4);
    }
}
