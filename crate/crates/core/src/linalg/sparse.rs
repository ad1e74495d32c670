use std::collections::BTreeMap;

use super::matrix::RatMatrix;
use super::rat::Rat;

/// Sparse vector keyed by coordinate index. Zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Rat>;

pub fn sparse_from_dense(v: &[Rat]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, dim: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); dim];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// `acc += s * v`, dropping entries that cancel.
pub fn axpy(acc: &mut SparseVec, s: &Rat, v: &SparseVec) {
    if s.is_zero() {
        return;
    }
    for (&i, x) in v {
        let term = s * x;
        match acc.get_mut(&i) {
            Some(y) => {
                *y += term;
                if y.is_zero() {
                    acc.remove(&i);
                }
            }
            None => {
                acc.insert(i, term);
            }
        }
    }
}

/// Incremental echelon basis of a relation span. Each stored row is pivoted on
/// its largest coordinate with pivot coefficient one, so reduction proceeds from
/// high coordinates to low and leaves the earliest coordinates as
/// representatives.
#[derive(Clone, Debug, Default)]
pub struct Eliminator {
    rows: BTreeMap<usize, SparseVec>,
}

impl Eliminator {
    pub fn new() -> Self {
        Eliminator::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` modulo the span, returning a vector supported on non-pivot
    /// coordinates only.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        while let Some((i, x)) = v.pop_last() {
            match self.rows.get(&i) {
                Some(row) => {
                    let s = -x;
                    for (&j, y) in row.range(..i) {
                        let term = &s * y;
                        match v.get_mut(&j) {
                            Some(z) => {
                                *z += term;
                                if z.is_zero() {
                                    v.remove(&j);
                                }
                            }
                            None => {
                                v.insert(j, term);
                            }
                        }
                    }
                }
                None => {
                    out.insert(i, x);
                }
            }
        }
        out
    }

    /// Adds a relation; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, lead)) = r.last_key_value() else {
            return false;
        };
        let inv = lead.recip();
        let row: SparseVec = r.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        self.rows.insert(p, row);
        true
    }
}

/// A quotient of a coordinate space by a relation span.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    ambient_dim: usize,
    representatives: Vec<usize>,
    position: BTreeMap<usize, usize>,
    eliminator: Eliminator,
}

impl QuotientBasis {
    pub fn from_eliminator(ambient_dim: usize, eliminator: Eliminator) -> Self {
        let representatives: Vec<usize> =
            (0..ambient_dim).filter(|&i| !eliminator.is_pivot(i)).collect();
        let position = representatives
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, k))
            .collect();
        QuotientBasis {
            ambient_dim,
            representatives,
            position,
            eliminator,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    /// Ambient coordinates chosen as quotient representatives, ascending.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn eliminator(&self) -> &Eliminator {
        &self.eliminator
    }

    /// Coordinates of the class of `v` in the representative basis.
    pub fn project_sparse(&self, v: SparseVec) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dimension()];
        for (i, x) in self.eliminator.reduce(v) {
            out[self.position[&i]] = x;
        }
        out
    }

    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        self.project_sparse(sparse_from_dense(v))
    }

    /// Projection as a matrix: column `j` is the class of ambient basis vector `j`.
    pub fn projection_matrix(&self) -> RatMatrix {
        let cols: Vec<Vec<Rat>> = (0..self.ambient_dim)
            .map(|j| self.project_sparse(SparseVec::from([(j, Rat::one())])))
            .collect();
        RatMatrix::from_columns(self.dimension(), &cols)
    }
}

/// Expresses vectors in terms of a fixed independent family, tracking the
/// combination that produced each echelon row.
#[derive(Clone, Debug, Default)]
pub struct SpanSolver {
    size: usize,
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl SpanSolver {
    pub fn new() -> Self {
        SpanSolver::default()
    }

    /// Number of vectors accepted so far.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo = SparseVec::new();
        let mut out = SparseVec::new();
        while let Some((i, x)) = v.pop_last() {
            match self.rows.get(&i) {
                Some((row, c)) => {
                    let s = -x;
                    let mut rest = row.clone();
                    rest.remove(&i);
                    axpy(&mut v, &s, &rest);
                    axpy(&mut combo, &s, c);
                }
                None => {
                    out.insert(i, x);
                }
            }
        }
        (out, combo)
    }

    /// Adds `v` as the next family member if it is independent of the previous
    /// ones; returns whether it was accepted.
    pub fn push(&mut self, v: SparseVec) -> bool {
        let (r, mut combo) = self.reduce(v);
        let Some((&p, lead)) = r.last_key_value() else {
            return false;
        };
        let inv = lead.recip();
        axpy(&mut combo, &Rat::one(), &SparseVec::from([(self.size, Rat::one())]));
        let row = r.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        let combo = combo.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        self.rows.insert(p, (row, combo));
        self.size += 1;
        true
    }

    /// Coefficients of `v` in the accepted family, or `None` outside its span.
    pub fn solve(&self, v: SparseVec) -> Option<Vec<Rat>> {
        let (r, combo) = self.reduce(v);
        if !r.is_empty() {
            return None;
        }
        let mut out = vec![Rat::zero(); self.size];
        for (i, x) in combo {
            out[i] = -x;
        }
        Some(out)
    }
}

/// Quotient of `ambient_dim`-space by the span of `relations`.
pub fn quotient_basis(ambient_dim: usize, relations: &[Vec<Rat>]) -> QuotientBasis {
    let mut e = Eliminator::new();
    for r in relations {
        assert_eq!(r.len(), ambient_dim, "relation length mismatch");
        e.insert(sparse_from_dense(r));
    }
    QuotientBasis::from_eliminator(ambient_dim, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn one_relation_in_four_dims() {
        let q = quotient_basis(4, &[v(&[0, 1, 0, 2])]);
        assert_eq!(q.dimension(), 3);
        assert_eq!(q.representatives(), &[0, 1, 2]);
        assert_eq!(q.project(&v(&[0, 0, 0, 1])), vec![Rat::zero(), Rat::new(-1, 2), Rat::zero()]);
    }

    #[test]
    fn no_relations_is_identity() {
        let q = quotient_basis(3, &[]);
        assert_eq!(q.projection_matrix(), RatMatrix::identity(3));
    }

    #[test]
    fn full_relations_give_zero_quotient() {
        let q = quotient_basis(2, &[v(&[1, 1]), v(&[1, -1])]);
        assert_eq!(q.dimension(), 0);
        assert!(q.project(&v(&[5, 7])).is_empty());
    }

    #[test]
    fn dependent_relations_do_not_grow_rank() {
        let mut e = Eliminator::new();
        assert!(e.insert(sparse_from_dense(&v(&[1, 2, 3]))));
        assert!(!e.insert(sparse_from_dense(&v(&[2, 4, 6]))));
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn span_solver_recovers_coefficients() {
        let mut s = SpanSolver::new();
        assert!(s.push(sparse_from_dense(&v(&[1, 1, 0]))));
        assert!(s.push(sparse_from_dense(&v(&[0, 1, 1]))));
        assert!(!s.push(sparse_from_dense(&v(&[1, 2, 1]))));
        assert_eq!(s.solve(sparse_from_dense(&v(&[2, 5, 3]))), Some(v(&[2, 3])));
        assert_eq!(s.solve(sparse_from_dense(&v(&[1, 0, 0]))), None);
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_kills_relations(
            dim in 1usize..6,
            rels in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 0..5),
        ) {
            let rels: Vec<Vec<Rat>> = rels.iter().map(|r| v(&r[..dim])).collect();
            let q = quotient_basis(dim, &rels);
            let m = RatMatrix::from_rows(rels.clone()).ok().filter(|_| !rels.is_empty());
            let rank = m.map_or(0, |m| m.rank());
            prop_assert_eq!(q.dimension(), dim - rank);
            for r in &rels {
                prop_assert!(q.project(r).iter().all(Rat::is_zero));
            }
            for (k, &i) in q.representatives().iter().enumerate() {
                let mut e = vec![Rat::zero(); dim];
                e[i] = Rat::one();
                let p = q.project(&e);
                for (j, x) in p.iter().enumerate() {
                    prop_assert_eq!(x.is_one(), j == k);
                    prop_assert!(x.is_zero() || j == k);
                }
            }
        }
    }
}
