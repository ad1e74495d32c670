use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ModuleError;
use crate::algebra::{presets, AlgebraElement, AlgebraPresentation, Conformal};
use crate::linalg::Rat;

/// A field whose modes act on modules: a generator, or the conformal vector
/// (which for Heisenberg is built by the Sugawara construction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Generator(usize),
    Conformal,
}

impl Field {
    pub fn weight(&self, p: &AlgebraPresentation) -> u32 {
        match self {
            Field::Generator(g) => p.weight(*g),
            Field::Conformal => p.conformal_weight(),
        }
    }

    /// Resolves `Conformal` to a generator when the conformal vector is one.
    pub fn normalize(self, p: &AlgebraPresentation) -> Field {
        match (self, p.conformal) {
            (Field::Conformal, Conformal::Generator(g)) => Field::Generator(g),
            (f, _) => f,
        }
    }

    pub fn name(&self, p: &AlgebraPresentation) -> String {
        match self.normalize(p) {
            Field::Generator(g) => p.generator(g).name.clone(),
            Field::Conformal => "L".to_string(),
        }
    }

    /// Looks a field up by name; `L` names the conformal vector.
    pub fn by_name(name: &str, p: &AlgebraPresentation) -> Result<Field, ModuleError> {
        match p.generator_index(name) {
            Ok(g) => Ok(Field::Generator(g)),
            Err(_) if name == "L" => Ok(Field::Conformal),
            Err(e) => Err(e.into()),
        }
    }
}

/// An element annihilating the highest-weight vector, homogeneous of `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularRelation {
    pub level: usize,
    pub element: AlgebraElement,
}

/// A highest-weight module: zero-mode eigenvalues on the highest-weight vector
/// and the singular relations imposed on it.
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub presentation: Arc<AlgebraPresentation>,
    pub zero_modes: BTreeMap<usize, Rat>,
    pub singular_relations: Vec<SingularRelation>,
}

/// Report description of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescription {
    pub algebra: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<Rat>,
    pub h: Rat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Rat>,
    pub singular_levels: Vec<usize>,
}

impl ModuleSpec {
    /// Virasoro Verma module of central charge `c` and conformal weight `h`.
    pub fn virasoro(c: Rat, h: Rat) -> Self {
        ModuleSpec::virasoro_over(Arc::new(presets::virasoro(c)), h)
    }

    pub fn virasoro_over(presentation: Arc<AlgebraPresentation>, h: Rat) -> Self {
        let l = presentation.generator_index("L").expect("virasoro presentation");
        ModuleSpec {
            presentation,
            zero_modes: BTreeMap::from([(l, h)]),
            singular_relations: Vec::new(),
        }
    }

    /// Heisenberg Fock module of momentum `lambda`.
    pub fn heisenberg(lambda: Rat) -> Self {
        let presentation = Arc::new(presets::heisenberg());
        let a = presentation.generator_index("a").expect("heisenberg presentation");
        ModuleSpec {
            presentation,
            zero_modes: BTreeMap::from([(a, lambda)]),
            singular_relations: Vec::new(),
        }
    }

    /// Imposes a singular relation after checking it against the Gram matrix.
    pub fn with_relation(mut self, level: usize, element: AlgebraElement) -> Result<Self, ModuleError> {
        if element.homogeneous_raise() != Some(level as i64) {
            return Err(ModuleError::Inhomogeneous(level));
        }
        let verma = ModuleSpec {
            singular_relations: Vec::new(),
            ..self.clone()
        };
        let gram = super::gram_matrix(&verma, level);
        let basis = super::graded::Module::new(verma).verma_basis(level);
        let coeffs: Vec<Rat> = basis.iter().map(|w| element.coefficient(w)).collect();
        if gram.mul_vec(&coeffs).iter().any(|x| !x.is_zero()) {
            return Err(ModuleError::NotInGramKernel(level));
        }
        self.singular_relations.push(SingularRelation { level, element });
        Ok(self)
    }

    /// Imposes every singular vector of the Verma cover at the given level.
    pub fn with_singular_level(self, level: usize) -> Result<Self, ModuleError> {
        let found = super::find_singular_vectors(&self.verma_cover(), level);
        if found.is_empty() {
            return Err(ModuleError::NoSingularVector(level));
        }
        found
            .into_iter()
            .try_fold(self, |s, e| s.with_relation(level, e))
    }

    /// Detects singular vectors at levels `1..=max` that do not already lie in the
    /// submodule generated by those found at lower levels, and imposes them.
    pub fn with_auto_singular(self, max: usize) -> Result<Self, ModuleError> {
        let mut spec = self;
        for level in 1..=max {
            let current = super::graded::Module::new(spec.clone());
            let candidates = super::find_singular_vectors(&spec.verma_cover(), level);
            for e in candidates {
                let v = current.verma_basis(level);
                let coeffs: Vec<Rat> = v.iter().map(|w| e.coefficient(w)).collect();
                if !current.verma_in_submodule(level, &coeffs) {
                    spec = spec.with_relation(level, e)?;
                }
            }
        }
        Ok(spec)
    }

    pub fn verma_cover(&self) -> ModuleSpec {
        ModuleSpec {
            singular_relations: Vec::new(),
            ..self.clone()
        }
    }

    /// The `L(0)` eigenvalue of the highest-weight vector.
    pub fn highest_weight(&self) -> Rat {
        match self.presentation.conformal {
            Conformal::Generator(g) => self.zero_modes.get(&g).cloned().unwrap_or_default(),
            Conformal::Sugawara(a) => {
                let l = self.zero_modes.get(&a).cloned().unwrap_or_default();
                &l * &l / Rat::from(2)
            }
        }
    }

    pub fn singular_levels(&self) -> Vec<usize> {
        self.singular_relations.iter().map(|r| r.level).collect()
    }

    /// Largest singular level, zero when there are none.
    pub fn max_singular_level(&self) -> usize {
        self.singular_levels().into_iter().max().unwrap_or(0)
    }

    pub fn describe(&self) -> ModuleDescription {
        let p = &self.presentation;
        let lambda = match p.conformal {
            Conformal::Sugawara(a) => Some(self.zero_modes.get(&a).cloned().unwrap_or_default()),
            Conformal::Generator(_) => None,
        };
        ModuleDescription {
            algebra: p.name.clone(),
            c: p.central_param("c").cloned(),
            h: self.highest_weight(),
            lambda,
            singular_levels: self.singular_levels(),
        }
    }
}
