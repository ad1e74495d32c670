use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::relations::{generate_relations, SingularGenerator};
use super::subspace::{depth_quotient, special_subspace};
use super::FusionError;
use crate::coproduct::{total_level, TensorElement, TensorKey, TensorSpace};
use crate::linalg::{jordan_structure, Eliminator, JordanReport, Rat, RatMatrix, SpanSolver, SparseVec};
use crate::module::{Field, Module};

/// A truncated depth-`d` fusion quotient with its relations eliminated and a
/// basis chosen among the candidate tensors.
pub struct FusionQuotient<'a> {
    space: TensorSpace<'a>,
    depth: usize,
    index: HashMap<TensorKey, usize>,
    relations: Eliminator,
    relation_count: usize,
    singular: Vec<SingularGenerator>,
    candidates: Vec<TensorKey>,
    basis: Vec<TensorKey>,
    solver: SpanSolver,
}

impl<'a> FusionQuotient<'a> {
    /// Builds the quotient of the tensor product truncated at total level
    /// `lmax`, checking that the special subspace of `left` tensored with the
    /// depth quotient of `right` spans it.
    pub fn build(left: &'a Module, right: &'a Module, depth: usize, w: Rat, lmax: usize) -> Result<Self, FusionError> {
        if w.is_zero() {
            return Err(FusionError::ZeroInsertionPoint);
        }
        let space = TensorSpace::new(left, right, w, lmax);
        let special = special_subspace(left, lmax)?;
        let top = depth_quotient(right, depth, lmax)?;
        let keys = space.basis_keys();
        let index: HashMap<TensorKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();

        let set = generate_relations(&space, depth);
        let mut relations = Eliminator::new();
        for r in set.iter() {
            relations.insert(r.terms.iter().map(|(k, x)| (index[k], x.clone())).collect());
        }

        let mut candidates: Vec<TensorKey> = special
            .basis
            .iter()
            .flat_map(|a| top.basis.iter().map(move |b| (*a, *b)))
            .filter(|k| total_level(k) <= lmax)
            .collect();
        candidates.sort_by_key(|k| index[k]);

        let mut q = FusionQuotient {
            space,
            depth,
            index,
            relations,
            relation_count: set.len(),
            singular: set.singular,
            candidates,
            basis: Vec::new(),
            solver: SpanSolver::new(),
        };
        for k in q.candidates.clone() {
            let v = q.relations.reduce(SparseVec::from([(q.index[&k], Rat::one())]));
            if q.solver.push(v) {
                q.basis.push(k);
            }
        }
        for k in &keys {
            let v = q.relations.reduce(SparseVec::from([(q.index[k], Rat::one())]));
            if q.solver.solve(v).is_none() {
                return Err(FusionError::CandidateNotSpanning {
                    tensor: q.space.key_label(k),
                    lmax,
                });
            }
        }
        Ok(q)
    }

    pub fn space(&self) -> &TensorSpace<'a> {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Number of depth and translation relations imposed.
    pub fn relation_count(&self) -> usize {
        self.relation_count
    }

    pub fn singular_generators(&self) -> &[SingularGenerator] {
        &self.singular
    }

    pub fn candidates(&self) -> &[TensorKey] {
        &self.candidates
    }

    pub fn basis(&self) -> &[TensorKey] {
        &self.basis
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|k| self.space.key_label(k)).collect()
    }

    /// Coordinates of the class of `x` in the chosen basis.
    pub fn coordinates(&self, x: &TensorElement) -> Result<Vec<Rat>, FusionError> {
        let mut v = SparseVec::new();
        for (k, c) in &x.terms {
            match self.index.get(k) {
                Some(&i) => {
                    v.insert(i, c.clone());
                }
                None => {
                    return Err(FusionError::BeyondTruncation {
                        tensor: self.space.key_label(k),
                        lmax: self.space.lmax,
                    })
                }
            }
        }
        self.solver
            .solve(self.relations.reduce(v))
            .ok_or_else(|| FusionError::CandidateNotSpanning {
                tensor: self.space.key_label(x.terms.keys().next().unwrap()),
                lmax: self.space.lmax,
            })
    }

    /// Whether `x` vanishes in the quotient.
    pub fn is_zero(&self, x: &TensorElement) -> Result<bool, FusionError> {
        Ok(self.coordinates(x)?.iter().all(Rat::is_zero))
    }

    /// Matrix of `Δ(field(index))` on the quotient, columns indexed by basis.
    pub fn mode_matrix(&self, field: Field, index: i64) -> Result<RatMatrix, FusionError> {
        mode_action(self, self, field, index)
    }

    /// Matrix of `Δ(L(0))`.
    pub fn l0_matrix(&self) -> Result<RatMatrix, FusionError> {
        self.mode_matrix(Field::Conformal, 0)
    }

    /// Combinations of candidate tensors that vanish in the quotient.
    pub fn spurious_states(&self) -> Vec<TensorElement> {
        let cols: Vec<Vec<Rat>> = self
            .candidates
            .iter()
            .map(|k| self.coordinates(&TensorElement::basis(*k)).expect("candidates lie in the quotient"))
            .collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let p = RatMatrix::from_columns(self.dimension(), &cols);
        let kernel = if self.dimension() == 0 {
            (0..cols.len())
                .map(|i| (0..cols.len()).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                .collect()
        } else {
            p.kernel_basis()
        };
        kernel
            .into_iter()
            .map(|v| {
                let mut x = TensorElement::zero();
                for (k, c) in self.candidates.iter().zip(v) {
                    x.add_term(*k, c);
                }
                x
            })
            .collect()
    }
}

/// Matrix of `Δ(field(index))` from one fusion quotient to another of depth at
/// least the source depth plus the raise of the mode.
pub fn mode_action(
    source: &FusionQuotient,
    target: &FusionQuotient,
    field: Field,
    index: i64,
) -> Result<RatMatrix, FusionError> {
    if source.space.w != target.space.w {
        return Err(FusionError::MismatchedInsertionPoints);
    }
    if -index > target.depth as i64 - source.depth as i64 {
        return Err(FusionError::ModeOutOfRange {
            index,
            from: source.depth,
            to: target.depth,
        });
    }
    let mut cols = Vec::with_capacity(source.dimension());
    for k in &source.basis {
        let image = target.space.delta2_raw(field, index, &TensorElement::basis(*k));
        cols.push(target.coordinates(&image)?);
    }
    Ok(RatMatrix::from_columns(target.dimension(), &cols))
}

/// The natural surjection from a deeper quotient onto a shallower one.
pub fn projection(source: &FusionQuotient, target: &FusionQuotient) -> Result<RatMatrix, FusionError> {
    if source.depth < target.depth {
        return Err(FusionError::ModeOutOfRange {
            index: 0,
            from: source.depth,
            to: target.depth,
        });
    }
    let cols = source
        .basis
        .iter()
        .map(|k| target.coordinates(&TensorElement::basis(*k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix::from_columns(target.dimension(), &cols))
}

/// Options for [`fuse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuseOptions {
    pub depth: usize,
    pub w: Rat,
    /// Truncation; `None` picks the heuristic floor.
    pub lmax: Option<usize>,
}

impl FuseOptions {
    pub fn new(depth: usize) -> Self {
        FuseOptions {
            depth,
            w: Rat::one(),
            lmax: None,
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
}

/// Smallest truncation worth trying: the depth plus the deepest singular
/// level plus two.
pub fn lmax_floor(left: &Module, right: &Module, depth: usize) -> usize {
    depth + left.spec().max_singular_level().max(right.spec().max_singular_level()) + 2
}

/// Summary of a fusion computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionResult {
    pub basis: Vec<String>,
    pub dimension: usize,
    /// Columns are images of basis vectors.
    pub l0_matrix: RatMatrix,
    #[serde(flatten)]
    pub jordan: JordanReport,
    pub graded_dims: BTreeMap<Rat, usize>,
    pub spurious_states: Vec<BTreeMap<String, Rat>>,
    pub candidate_count: usize,
    pub relation_count: usize,
    pub singular_generators: Vec<SingularGenerator>,
    pub depth: usize,
    pub w: Rat,
    pub lmax: usize,
    pub stabilized_at: usize,
}

impl FusionResult {
    fn summarize(q: &FusionQuotient, stabilized_at: usize) -> Result<Self, FusionError> {
        let l0 = q.l0_matrix()?;
        let jordan = jordan_structure(&l0);
        let graded_dims = graded_dims(&jordan);
        let spurious_states = q
            .spurious_states()
            .iter()
            .map(|x| x.terms.iter().map(|(k, c)| (q.space.key_label(k), c.clone())).collect())
            .collect();
        Ok(FusionResult {
            basis: q.basis_labels(),
            dimension: q.dimension(),
            l0_matrix: l0,
            jordan,
            graded_dims,
            spurious_states,
            candidate_count: q.candidates.len(),
            relation_count: q.relation_count,
            singular_generators: q.singular.clone(),
            depth: q.depth,
            w: q.space.w.clone(),
            lmax: q.space.lmax,
            stabilized_at,
        })
    }

    fn agrees_with(&self, other: &FusionResult) -> bool {
        self.basis == other.basis && self.l0_matrix == other.l0_matrix && self.graded_dims == other.graded_dims
    }
}

/// Generalized `L(0)` eigenvalues with their multiplicities.
pub fn graded_dims(jordan: &JordanReport) -> BTreeMap<Rat, usize> {
    jordan
        .blocks
        .iter()
        .map(|b| (b.eigenvalue.clone(), b.block_sizes.iter().sum()))
        .collect()
}

/// Computes the depth-`d` fusion quotient of `left ⊠ right`, and accepts it
/// only if the truncation one level higher gives the same basis, `L(0)`
/// matrix and graded dimensions.
pub fn fuse(left: &Module, right: &Module, options: &FuseOptions) -> Result<FusionResult, FusionError> {
    let lmax = options.lmax.unwrap_or_else(|| lmax_floor(left, right, options.depth));
    let q = FusionQuotient::build(left, right, options.depth, options.w.clone(), lmax)?;
    let first = FusionResult::summarize(&q, lmax)?;
    let q = FusionQuotient::build(left, right, options.depth, options.w.clone(), lmax + 1)?;
    let second = FusionResult::summarize(&q, lmax)?;
    if !first.agrees_with(&second) {
        return Err(FusionError::NotStabilized {
            what: "fusion quotient",
            lmax,
        });
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::ModuleSpec;

    fn m18() -> Module {
        Module::new(
            ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8))
                .with_singular_level(2)
                .unwrap(),
        )
    }

    fn key(m: &Module, q: &FusionQuotient, label: &str) -> TensorKey {
        *q.space()
            .basis_keys()
            .iter()
            .find(|k| q.space().key_label(k) == label)
            .unwrap_or_else(|| panic!("no tensor {label} in {:?}", m.labels(1)))
    }

    #[test]
    fn depth_zero_self_fusion() {
        let m = m18();
        let r = fuse(&m, &m, &FuseOptions::new(0)).unwrap();
        assert_eq!(r.basis, vec!["|hw ⊗ |hw", "L(-1)|hw ⊗ |hw"]);
        assert_eq!(r.l0_matrix, RatMatrix::from_fractions(&[&[(-1, 4), (-1, 16)], &[(1, 1), (1, 4)]]));
        assert_eq!(r.graded_dims, BTreeMap::from([(Rat::zero(), 2)]));
        assert_eq!(r.jordan.largest_block(), 2);
        assert!(r.spurious_states.is_empty());
    }

    #[test]
    fn depth_zero_matrix_at_other_insertion_points() {
        let m = m18();
        let w = Rat::from(3);
        let r = fuse(&m, &m, &FuseOptions::new(0).with_w(w.clone())).unwrap();
        let expect = RatMatrix::from_rows(vec![
            vec![Rat::new(-1, 4), -(w.recip() / Rat::from(16))],
            vec![w.clone(), Rat::new(1, 4)],
        ])
        .unwrap();
        assert_eq!(r.l0_matrix, expect);
    }

    #[test]
    fn depth_one_loses_one_candidate() {
        let m = m18();
        let r = fuse(&m, &m, &FuseOptions::new(1)).unwrap();
        assert_eq!(r.dimension, 3);
        assert_eq!(r.candidate_count, 4);
        assert_eq!(r.graded_dims, BTreeMap::from([(Rat::zero(), 2), (Rat::one(), 1)]));
        let q = FusionQuotient::build(&m, &m, 1, Rat::one(), 5).unwrap();
        let spurious = q.spurious_states();
        assert_eq!(spurious.len(), 1);
        let s = &spurious[0];
        let c = s.coefficient(&key(&m, &q, "L(-1)|hw ⊗ L(-1)|hw"));
        let expect = [
            ("L(-1)|hw ⊗ L(-1)|hw", Rat::from(2)),
            ("L(-1)|hw ⊗ |hw", Rat::new(-1, 2)),
            ("|hw ⊗ L(-1)|hw", Rat::new(1, 2)),
            ("|hw ⊗ |hw", Rat::new(-1, 8)),
        ];
        for (label, x) in expect {
            assert_eq!(s.coefficient(&key(&m, &q, label)) * Rat::from(2), &c * &x, "{label}");
        }
        assert!(q.is_zero(s).unwrap());
    }

    #[test]
    fn vacuum_is_a_unit() {
        let m = m18();
        let vac = Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::zero()).with_singular_level(1).unwrap());
        for r in [
            fuse(&vac, &m, &FuseOptions::new(0)).unwrap(),
            fuse(&m, &vac, &FuseOptions::new(0)).unwrap(),
        ] {
            assert_eq!(r.dimension, 1);
            assert_eq!(r.l0_matrix, RatMatrix::from_fractions(&[&[(-1, 8)]]));
        }
    }

    #[test]
    fn heisenberg_momentum_adds() {
        let f1 = Module::new(ModuleSpec::heisenberg(Rat::from(1)));
        let f2 = Module::new(ModuleSpec::heisenberg(Rat::from(2)));
        let q = FusionQuotient::build(&f1, &f2, 0, Rat::one(), 3).unwrap();
        assert_eq!(q.dimension(), 1);
        assert_eq!(q.mode_matrix(Field::Generator(0), 0).unwrap(), RatMatrix::from_fractions(&[&[(3, 1)]]));
        assert_eq!(q.l0_matrix().unwrap(), RatMatrix::from_fractions(&[&[(9, 2)]]));
    }

    #[test]
    fn raising_between_depths() {
        let m = m18();
        let q0 = FusionQuotient::build(&m, &m, 0, Rat::one(), 5).unwrap();
        let q1 = FusionQuotient::build(&m, &m, 1, Rat::one(), 5).unwrap();
        let q2 = FusionQuotient::build(&m, &m, 2, Rat::one(), 6).unwrap();
        let raise = mode_action(&q0, &q1, Field::Conformal, -1).unwrap();
        assert_eq!(raise.rank(), 1);
        // the proper L(0) eigenvector of the depth-zero quotient
        let l0 = q0.l0_matrix().unwrap();
        let proper = l0.kernel_basis().remove(0);
        assert!(raise.mul_vec(&proper).iter().all(Rat::is_zero));
        assert!(mode_action(&q0, &q0, Field::Conformal, -1).is_err());

        // [L(1), L(−1)] = 2 L(0) on the depth-one quotient
        let up = mode_action(&q1, &q2, Field::Conformal, -1).unwrap();
        let down = mode_action(&q2, &q1, Field::Conformal, 1).unwrap();
        let l1 = mode_action(&q1, &q1, Field::Conformal, 1).unwrap();
        let pi = projection(&q2, &q1).unwrap();
        let lhs = &(&down * &up) - &(&pi * &(&up * &l1));
        assert_eq!(lhs, q1.l0_matrix().unwrap().scale(&Rat::from(2)));
        assert_eq!(mode_action(&q1, &q1, Field::Conformal, 0).unwrap(), q1.l0_matrix().unwrap());
    }

    #[test]
    fn truncation_below_the_floor_is_detected() {
        let m = m18();
        assert!(matches!(
            FusionQuotient::build(&m, &m, 0, Rat::one(), 2),
            Err(FusionError::NotStabilized { .. })
        ));
        assert!(matches!(
            FusionQuotient::build(&m, &m, 0, Rat::zero(), 4),
            Err(FusionError::ZeroInsertionPoint)
        ));
    }
}
