use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::functional::{adjoint_image, opposite, Functional};
use super::DualError;
use crate::coproduct::{iota_term, total_level, Direction, RationalMonomial, TensorElement, TensorKey, TensorSpace};
use crate::algebra::Mode;
use crate::fusion::{depth_generators, depth_quotient, lmax_floor, special_subspace, FusionResult};
use crate::linalg::{
    jordan_structure, sparse_from_dense, Eliminator, JordanReport, Rat, RatMatrix, SpanSolver, SparseVec,
};
use crate::module::{Field, Module};

/// Which smearing functions `f(t) = t^a (t⁻¹ − w)^b`, `b ≤ −1`, enter the
/// compatibility condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintFamily {
    /// `a = weight − 1` only.
    #[default]
    Standard,
    /// `a` within two of `weight − 1`.
    Extended,
}

impl ConstraintFamily {
    fn exponents(self, weight: i64) -> Vec<i64> {
        match self {
            ConstraintFamily::Standard => vec![weight - 1],
            ConstraintFamily::Extended => ((weight - 3)..=(weight + 1)).collect(),
        }
    }
}

/// How the depth condition on functionals is imposed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Annihilation {
    /// Every product of positive modes of total weight above the depth kills `ψ*`.
    #[default]
    Words,
    /// Only single modes `v(n)`, `n` above the depth, kill `ψ*`.
    Modes,
}

/// Linear conditions on the values of a functional on the truncated tensor
/// product, each stating that `⟨ψ*, r⟩ = 0` for a tensor `r`, solved down to
/// the values on a few basis tensors.
pub struct DualConstraintSystem<'a> {
    space: TensorSpace<'a>,
    depth: usize,
    index: HashMap<TensorKey, usize>,
    keys: Vec<TensorKey>,
    equations: Eliminator,
    equation_count: usize,
    candidates: Vec<TensorKey>,
    free: HashMap<usize, usize>,
    unknowns: Vec<TensorKey>,
    /// Converts values in terms of the free coordinates into values in terms
    /// of the unknowns.
    change: RatMatrix,
}

impl<'a> DualConstraintSystem<'a> {
    pub fn space(&self) -> &TensorSpace<'a> {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn equation_count(&self) -> usize {
        self.equation_count
    }

    /// The declared unknowns: values on top-level tensors of the special
    /// subspace of the left factor and the depth quotient of the right one.
    pub fn candidates(&self) -> &[TensorKey] {
        &self.candidates
    }

    /// The values left free once the system is solved.
    pub fn unknowns(&self) -> &[TensorKey] {
        &self.unknowns
    }

    pub fn unknown_labels(&self) -> Vec<String> {
        self.unknowns.iter().map(|k| self.space.key_label(k)).collect()
    }

    pub fn solution_dimension(&self) -> usize {
        self.unknowns.len()
    }

    fn free_value_of(&self, x: &TensorElement) -> Result<Vec<Rat>, DualError> {
        let mut v = SparseVec::new();
        for (k, c) in &x.terms {
            let i = self.index.get(k).ok_or_else(|| DualError::OutsideDomain {
                tensor: self.space.key_label(k),
                lmax: self.space.lmax,
            })?;
            v.insert(*i, c.clone());
        }
        let mut out = vec![Rat::zero(); self.free.len()];
        for (i, c) in self.equations.reduce(v) {
            out[self.free[&i]] = c;
        }
        Ok(out)
    }

    /// `⟨ψ*, x⟩` as a combination of the values on the unknowns.
    pub fn value_of(&self, x: &TensorElement) -> Result<Vec<Rat>, DualError> {
        let r = self.free_value_of(x)?;
        Ok((0..self.unknowns.len())
            .map(|j| r.iter().enumerate().map(|(i, c)| c * self.change.get(i, j)).sum())
            .collect())
    }

    /// The functional with the given free values.
    pub fn functional(&self, free: &[Rat]) -> Functional {
        let values = self
            .keys
            .iter()
            .map(|k| {
                let coeffs = self.value_of(&TensorElement::basis(*k)).expect("basis tensors lie in the domain");
                (*k, coeffs.iter().zip(free).map(|(a, b)| a * b).sum())
            })
            .collect();
        Functional {
            values,
            lmax: self.space.lmax,
        }
    }

    /// Whether `psi` satisfies every equation.
    pub fn is_solution(&self, psi: &Functional) -> bool {
        self.keys.iter().all(|k| {
            let coeffs = self.value_of(&TensorElement::basis(*k)).unwrap();
            let free: Vec<Rat> = self.unknowns.iter().map(|u| psi.values[u].clone()).collect();
            let v: Rat = coeffs.iter().zip(&free).map(|(a, b)| a * b).sum();
            v == psi.values[k]
        })
    }

    /// Matrix of `field(index)` on functionals: row `i` gives
    /// `⟨field(index)·ψ*, u_i⟩` in terms of the free values `u_j`.
    pub fn dual_mode_matrix(&self, field: Field, index: i64) -> Result<RatMatrix, DualError> {
        let rows = self
            .unknowns
            .iter()
            .map(|k| self.value_of(&adjoint_image(&self.space, field, index, *k)?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix::from_rows(rows).unwrap_or_else(|_| RatMatrix::zeros(0, 0)))
    }
}

/// Builds the depth conditions on `ψ*` (see [`Annihilation`]) and the
/// compatibility conditions for each `f(t) = t^a (t⁻¹ − w)^b` of `family`:
/// the expansion `Σ binom(b, m) (−w)^m v t^{a−b+m}` acting on `ψ*` must match
/// the action of `σ v t^{2h−2−a} (t − w)^b` on the tensor product.
pub fn compat_constraints<'a>(
    left: &'a Module,
    right: &'a Module,
    depth: usize,
    w: Rat,
    lmax: usize,
    family: ConstraintFamily,
    annihilation: Annihilation,
) -> Result<DualConstraintSystem<'a>, DualError> {
    if w.is_zero() {
        return Err(DualError::ZeroInsertionPoint);
    }
    let space = TensorSpace::new(left, right, w, lmax);
    let keys = space.basis_keys();
    let index: HashMap<TensorKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let fits = |x: &TensorElement| x.terms.keys().all(|k| total_level(k) <= lmax);
    let mut rows: Vec<TensorElement> = Vec::new();
    let p = left.presentation();

    let words = match annihilation {
        Annihilation::Words => depth_generators(right, depth, lmax),
        Annihilation::Modes => (0..p.generators().len())
            .flat_map(|g| ((depth + 1)..=lmax).map(move |n| (Vec::new(), Mode::new(g, -(n as i64)))))
            .collect(),
    };
    for (prefix, x) in &words {
        let wt = prefix.iter().map(|y| y.raise() as usize).sum::<usize>() + x.raise() as usize;
        for k in keys.iter().filter(|k| total_level(k) + wt <= lmax) {
            // ⟨x(n) q₁⋯q_s ψ*, k⟩ with q_i the opposites of the prefix modes
            let mut y = adjoint_image(&space, Field::Generator(x.generator), -x.index, *k)?;
            for q in prefix.iter().rev() {
                let mut next = TensorElement::zero();
                for (key, c) in &y.terms {
                    next.add_scaled(c, &adjoint_image(&space, Field::Generator(q.generator), -q.index, *key)?);
                }
                y = next;
            }
            if fits(&y) && !y.is_zero() {
                rows.push(y);
            }
        }
    }

    for g in 0..p.generators().len() {
        let field = Field::Generator(g);
        let h = p.weight(g) as i64;
        let (sign, _) = opposite(left, field, 0)?;
        for a in family.exponents(h) {
            for b in (-(lmax as i64)..=-1).rev() {
                let direct = RationalMonomial::new(2 * h - 2 - a, b, space.w.clone());
                // ι₊ in t is the expansion at s = t⁻¹ = ∞ of s^{−a} (s − w)^b
                let expansion = RationalMonomial::new(-a, b, space.w.clone());
                for k in keys.iter().filter(|k| total_level(k) as i64 + h - 1 - b <= lmax as i64) {
                    let mut r = space.smeared_raw(field, &direct, &TensorElement::basis(*k)).scaled(&-sign.clone());
                    let mut m = 0;
                    loop {
                        let (s_power, c) = iota_term(&expansion, Direction::Minus, m);
                        let index = -s_power + 1 - h;
                        if index > depth as i64 {
                            break;
                        }
                        if !c.is_zero() {
                            r.add_scaled(&c, &adjoint_image(&space, field, index, *k)?);
                        }
                        m += 1;
                    }
                    if fits(&r) && !r.is_zero() {
                        rows.push(r);
                    }
                }
            }
        }
    }

    let mut equations = Eliminator::new();
    for r in &rows {
        equations.insert(r.terms.iter().map(|(k, c)| (index[k], c.clone())).collect());
    }

    let special = special_subspace(left, lmax).map_err(DualError::Fusion)?;
    let top = depth_quotient(right, depth, lmax).map_err(DualError::Fusion)?;
    let mut candidates: Vec<TensorKey> = special
        .basis
        .iter()
        .flat_map(|a| top.basis.iter().map(move |b| (*a, *b)))
        .filter(|k| total_level(k) <= lmax)
        .collect();
    candidates.sort_by_key(|k| index[k]);

    let free: HashMap<usize, usize> = (0..keys.len())
        .filter(|&i| !equations.is_pivot(i))
        .enumerate()
        .map(|(pos, i)| (i, pos))
        .collect();
    let mut system = DualConstraintSystem {
        space,
        depth,
        index,
        keys,
        equations,
        equation_count: rows.len(),
        candidates,
        free,
        unknowns: Vec::new(),
        change: RatMatrix::zeros(0, 0),
    };
    // values on candidates, in terms of the free coordinates
    let mut solver = SpanSolver::new();
    let mut chosen = Vec::new();
    for k in system.candidates.clone() {
        let r = system.free_value_of(&TensorElement::basis(k))?;
        if solver.push(sparse_from_dense(&r)) {
            chosen.push((k, r));
        }
    }
    if chosen.len() < system.free.len() {
        let missed = (0..system.keys.len())
            .find(|i| system.free.contains_key(i) && !chosen.iter().any(|(k, _)| system.index[k] == *i))
            .map(|i| system.space.key_label(&system.keys[i]))
            .unwrap_or_default();
        return Err(DualError::Underdetermined { tensor: missed, lmax });
    }
    let by_rows = RatMatrix::from_rows(chosen.iter().map(|(_, r)| r.clone()).collect())
        .unwrap_or_else(|_| RatMatrix::zeros(0, 0));
    // u = V f with V rows the candidate values, so f = V⁻¹ u
    system.change = by_rows.transpose().inverse().expect("chosen values are independent").transpose();
    system.unknowns = chosen.into_iter().map(|(k, _)| k).collect();
    Ok(system)
}

/// The dual `L(0)` matrix on the free values.
pub fn dual_l0_matrix(system: &DualConstraintSystem) -> Result<RatMatrix, DualError> {
    system.dual_mode_matrix(Field::Conformal, 0)
}

/// Options for [`dual`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOptions {
    pub depth: usize,
    pub w: Rat,
    pub lmax: Option<usize>,
    pub family: ConstraintFamily,
    pub annihilation: Annihilation,
}

impl DualOptions {
    pub fn new(depth: usize) -> Self {
        DualOptions {
            depth,
            w: Rat::one(),
            lmax: None,
            family: ConstraintFamily::Standard,
            annihilation: Annihilation::Words,
        }
    }

    pub fn with_w(mut self, w: Rat) -> Self {
        self.w = w;
        self
    }

    pub fn with_lmax(mut self, lmax: usize) -> Self {
        self.lmax = Some(lmax);
        self
    }

    pub fn with_family(mut self, family: ConstraintFamily) -> Self {
        self.family = family;
        self
    }

    pub fn with_annihilation(mut self, annihilation: Annihilation) -> Self {
        self.annihilation = annihilation;
        self
    }
}

/// Summary of a dual computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualResult {
    pub unknowns: Vec<String>,
    pub candidate_count: usize,
    pub solution_dimension: usize,
    /// Row `i` is `⟨L(0)·ψ*, u_i⟩` in terms of the free values.
    pub l0_matrix: RatMatrix,
    #[serde(flatten)]
    pub jordan: JordanReport,
    pub trace: Rat,
    pub determinant: Rat,
    pub equation_count: usize,
    pub family: ConstraintFamily,
    pub annihilation: Annihilation,
    pub depth: usize,
    pub w: Rat,
    pub lmax: usize,
    pub stabilized_at: usize,
}

impl DualResult {
    fn summarize(s: &DualConstraintSystem, options: &DualOptions, stabilized_at: usize) -> Result<Self, DualError> {
        let l0 = dual_l0_matrix(s)?;
        let (trace, determinant) = if l0.rows() == 0 {
            (Rat::zero(), Rat::one())
        } else {
            (l0.trace(), l0.determinant())
        };
        Ok(DualResult {
            unknowns: s.unknown_labels(),
            candidate_count: s.candidates.len(),
            solution_dimension: s.solution_dimension(),
            jordan: jordan_structure(&l0),
            l0_matrix: l0,
            trace,
            determinant,
            equation_count: s.equation_count,
            family: options.family,
            annihilation: options.annihilation,
            depth: s.depth,
            w: s.space.w.clone(),
            lmax: s.space.lmax,
            stabilized_at,
        })
    }
}

/// Solves the dual system and accepts the answer only if the truncation one
/// level higher gives the same free values and matrix.
pub fn dual(left: &Module, right: &Module, options: &DualOptions) -> Result<DualResult, DualError> {
    let lmax = options.lmax.unwrap_or_else(|| lmax_floor(left, right, options.depth));
    let solve = |l: usize| -> Result<DualResult, DualError> {
        let s = compat_constraints(
            left,
            right,
            options.depth,
            options.w.clone(),
            l,
            options.family,
            options.annihilation,
        )?;
        DualResult::summarize(&s, options, lmax)
    };
    let first = solve(lmax)?;
    let second = solve(lmax + 1)?;
    if first.unknowns != second.unknowns || first.l0_matrix != second.l0_matrix {
        return Err(DualError::NotStabilized { lmax });
    }
    Ok(first)
}

/// Outcome of comparing the two pipelines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub basis_match: bool,
    pub transpose_match: bool,
    pub jordan_match: bool,
    pub ngk_l0: RatMatrix,
    pub hlz_l0: RatMatrix,
}

impl CrosscheckReport {
    pub fn agrees(&self) -> bool {
        self.basis_match && self.transpose_match && self.jordan_match
    }
}

/// Compares a fusion quotient with the dual computation at the same data: the
/// bases must pair up, the dual matrix must be the transpose, and the Jordan
/// reports must coincide.
pub fn crosscheck(ngk: &FusionResult, hlz: &DualResult) -> CrosscheckReport {
    CrosscheckReport {
        basis_match: ngk.basis == hlz.unknowns,
        transpose_match: ngk.l0_matrix.transpose() == hlz.l0_matrix,
        jordan_match: ngk.jordan == hlz.jordan,
        ngk_l0: ngk.l0_matrix.clone(),
        hlz_l0: hlz.l0_matrix.clone(),
    }
}
