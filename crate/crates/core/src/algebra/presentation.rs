use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::element::{AlgebraElement, Mode};
use super::AlgebraError;
use crate::linalg::Rat;

/// A strong generator of the chiral algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    /// Conformal weight `h_v`.
    pub weight: u32,
    /// The factor `(-1)^{h_v}` used by `opp`.
    pub quasiprimary_sign: Rat,
    pub quasiprimary: bool,
}

impl GeneratorSpec {
    pub fn quasiprimary(name: &str, weight: u32) -> Self {
        assert!(weight >= 1, "generator weight must be positive");
        let sign = if weight % 2 == 0 { Rat::one() } else { -Rat::one() };
        GeneratorSpec {
            name: name.to_string(),
            weight,
            quasiprimary_sign: sign,
            quasiprimary: true,
        }
    }
}

/// Polynomial `Σ c·m^i·n^j` in two mode indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPoly(pub Vec<(u32, u32, Rat)>);

impl IndexPoly {
    pub fn eval(&self, m: i64, n: i64) -> Rat {
        self.0
            .iter()
            .map(|(i, j, c)| c * Rat::from(m).pow(*i as i64) * Rat::from(n).pow(*j as i64))
            .sum()
    }

    /// The polynomial with `m` and `n` exchanged.
    pub fn swapped(&self) -> Self {
        IndexPoly(self.0.iter().map(|(i, j, c)| (*j, *i, c.clone())).collect())
    }

    pub fn negated(&self) -> Self {
        IndexPoly(self.0.iter().map(|(i, j, c)| (*i, *j, -c)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTerm {
    pub target: usize,
    pub coeff: IndexPoly,
}

/// `[a(m), b(n)] = Σ coeff(m, n)·target(m + n) + δ_{m+n,0}·central(m, n)·1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub terms: Vec<BracketTerm>,
    pub central: IndexPoly,
}

impl BracketEntry {
    fn reversed(&self) -> Self {
        BracketEntry {
            terms: self
                .terms
                .iter()
                .map(|t| BracketTerm {
                    target: t.target,
                    coeff: t.coeff.swapped().negated(),
                })
                .collect(),
            central: self.central.swapped().negated(),
        }
    }
}

/// How the conformal vector acts on modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conformal {
    /// The conformal vector is itself a generator.
    Generator(usize),
    /// `L(n) = ½ Σ_k :a(n−k) a(k):` for a weight-one generator `a` with `[a(m), a(n)] = m δ`.
    Sugawara(usize),
}

/// A Lie-type chiral algebra: generators, linear brackets and central parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub name: String,
    generators: Vec<GeneratorSpec>,
    brackets: BTreeMap<(usize, usize), BracketEntry>,
    pub central_params: BTreeMap<String, Rat>,
    pub conformal: Conformal,
}

impl AlgebraPresentation {
    /// Generators are reordered by name so that generator indices follow name order.
    /// Bracket entries are keyed by generator name and completed by antisymmetry.
    pub fn new(
        name: &str,
        mut generators: Vec<GeneratorSpec>,
        brackets: Vec<(&str, &str, Vec<(&str, IndexPoly)>, IndexPoly)>,
        central_params: BTreeMap<String, Rat>,
        conformal: &str,
        sugawara: bool,
    ) -> Result<Self, AlgebraError> {
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        let find = |g: &str| {
            generators
                .iter()
                .position(|s| s.name == g)
                .ok_or_else(|| AlgebraError::UnknownGenerator(g.to_string()))
        };
        let mut table = BTreeMap::new();
        for (a, b, terms, central) in brackets {
            let (ia, ib) = (find(a)?, find(b)?);
            let terms = terms
                .into_iter()
                .map(|(t, coeff)| Ok(BracketTerm { target: find(t)?, coeff }))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            let entry = BracketEntry { terms, central };
            if ia != ib {
                table.insert((ib, ia), entry.reversed());
            }
            table.insert((ia, ib), entry);
        }
        let c = find(conformal)?;
        let conformal = if sugawara {
            Conformal::Sugawara(c)
        } else {
            Conformal::Generator(c)
        };
        Ok(AlgebraPresentation {
            name: name.to_string(),
            generators,
            brackets: table,
            central_params,
            conformal,
        })
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn generator(&self, g: usize) -> &GeneratorSpec {
        &self.generators[g]
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    /// Mode of the named generator at the given (weight-adjusted) index.
    pub fn mode(&self, name: &str, index: i64) -> Result<Mode, AlgebraError> {
        Ok(Mode::new(self.generator_index(name)?, index))
    }

    pub fn weight(&self, g: usize) -> u32 {
        self.generators[g].weight
    }

    pub fn central_param(&self, key: &str) -> Option<&Rat> {
        self.central_params.get(key)
    }

    /// `[a, b]` as a canonical element.
    pub fn bracket(&self, a: Mode, b: Mode) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (target, c) in self.bracket_terms(a, b) {
            match target {
                Some(t) => out.add_term(vec![t], c),
                None => out.add_term(Vec::new(), c),
            }
        }
        out
    }

    /// Raw bracket terms; `None` marks the identity.
    pub(crate) fn bracket_terms(&self, a: Mode, b: Mode) -> Vec<(Option<Mode>, Rat)> {
        let Some(entry) = self.brackets.get(&(a.generator, b.generator)) else {
            return Vec::new();
        };
        let (m, n) = (a.index, b.index);
        let mut out = Vec::new();
        for t in &entry.terms {
            let c = t.coeff.eval(m, n);
            if !c.is_zero() {
                out.push((Some(Mode::new(t.target, m + n)), c));
            }
        }
        if m + n == 0 {
            let c = entry.central.eval(m, n);
            if !c.is_zero() {
                out.push((None, c));
            }
        }
        out
    }

    /// Conformal weight of the conformal vector's generator family, as used by
    /// the coproduct (`2` for Virasoro and Sugawara alike).
    pub fn conformal_weight(&self) -> u32 {
        2
    }
}
