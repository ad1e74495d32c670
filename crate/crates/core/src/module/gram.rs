use std::collections::BTreeMap;

use super::graded::Module;
use super::spec::ModuleSpec;
use super::verma::VermaVec;
use crate::algebra::{opp_element, word_label, AlgebraElement, Mode};
use crate::linalg::{Rat, RatMatrix};

/// Shapovalov form at level `n` on the Verma cover:
/// `⟨X hw, Y hw⟩` is the coefficient of `hw` in `opp(X)·Y hw`.
pub fn gram_matrix(spec: &ModuleSpec, n: usize) -> RatMatrix {
    let m = Module::new(spec.verma_cover());
    let basis = m.verma_basis(n);
    let p = m.presentation();
    let dim = basis.len();
    let mut data = Vec::with_capacity(dim * dim);
    for x in &basis {
        let ox = opp_element(&AlgebraElement::from_word(x.clone()), p)
            .expect("module generators are quasiprimary");
        for y in &basis {
            let yv = VermaVec::from([(y.clone(), Rat::one())]);
            let mut entry = Rat::zero();
            for (w, c) in ox.terms() {
                let r = m.verma().apply_word(w, &yv);
                if let Some(s) = r.get(&Vec::new()) {
                    entry += c * s;
                }
            }
            data.push(entry);
        }
    }
    RatMatrix::new(dim, dim, data)
}

/// Singular vectors at level `n` of the Verma cover: vectors annihilated by every
/// positive mode. The returned basis is in reduced echelon form with respect to
/// the label order of the PBW words, so each vector has coefficient one on its
/// lexicographically first word.
pub fn find_singular_vectors(spec: &ModuleSpec, n: usize) -> Vec<AlgebraElement> {
    assert!(n >= 1, "singular vectors live at positive levels");
    let m = Module::new(spec.verma_cover());
    let p = m.presentation();
    let basis = m.verma_basis(n);
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| word_label(&basis[i], p));

    let mut rows = gram_matrix(spec, n).select(&(0..basis.len()).collect::<Vec<_>>(), &order);
    for g in 0..p.generators().len() {
        for k in 1..=n as i64 {
            let target = m.verma_basis(n - k as usize);
            let index: BTreeMap<_, _> = target.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
            let mut block = RatMatrix::zeros(target.len(), basis.len());
            let mut cols = Vec::with_capacity(basis.len());
            for &j in &order {
                let v = VermaVec::from([(basis[j].clone(), Rat::one())]);
                let image = m.verma().act(Mode::new(g, k), &v);
                let mut col = vec![Rat::zero(); target.len()];
                for (w, x) in image {
                    col[index[&w]] = x;
                }
                cols.push(col);
            }
            if !target.is_empty() {
                block = RatMatrix::from_columns(target.len(), &cols);
            }
            rows = rows.vstack(&block);
        }
    }
    let kernel = rows.kernel_basis();
    if kernel.is_empty() {
        return Vec::new();
    }
    let (echelon, pivots) = RatMatrix::from_rows(kernel).expect("rectangular").rref();
    (0..pivots.len())
        .map(|r| {
            AlgebraElement::from_terms(
                order
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| (basis[i].clone(), echelon.get(r, k).clone())),
            )
        })
        .collect()
}

/// Coefficients of an element keyed by word label, as in reports.
pub fn singular_coefficients(e: &AlgebraElement, spec: &ModuleSpec) -> BTreeMap<String, Rat> {
    e.terms()
        .map(|(w, c)| (word_label(w, &spec.presentation), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(h: Rat) -> ModuleSpec {
        ModuleSpec::virasoro(Rat::from(-2), h)
    }

    #[test]
    fn gram_at_low_levels() {
        let s = spec(Rat::new(-1, 8));
        assert_eq!(gram_matrix(&s, 0), RatMatrix::identity(1));
        assert_eq!(gram_matrix(&s, 1), RatMatrix::from_fractions(&[&[(-1, 4)]]));
        let g2 = gram_matrix(&s, 2);
        assert_eq!(
            g2,
            RatMatrix::from_fractions(&[&[(-3, 2), (-3, 4)], &[(-3, 4), (-3, 8)]])
        );
        assert_eq!(g2.determinant(), Rat::zero());
        assert_eq!(g2.kernel_basis().len(), 1);
    }

    #[test]
    fn gram_is_symmetric() {
        for h in [Rat::new(-1, 8), Rat::new(1, 3), Rat::from(2)] {
            let s = spec(h);
            for n in 0..=5 {
                let g = gram_matrix(&s, n);
                assert_eq!(g, g.transpose(), "level {n}");
            }
        }
    }

    #[test]
    fn level_two_singular_vector() {
        let s = spec(Rat::new(-1, 8));
        let v = find_singular_vectors(&s, 2);
        assert_eq!(v.len(), 1);
        let coeffs = singular_coefficients(&v[0], &s);
        assert_eq!(
            coeffs,
            BTreeMap::from([
                ("L(-1)L(-1)".to_string(), Rat::one()),
                ("L(-2)".to_string(), Rat::new(-1, 2)),
            ])
        );
    }

    #[test]
    fn vacuum_level_one() {
        let v = find_singular_vectors(&spec(Rat::zero()), 1);
        assert_eq!(v, vec![AlgebraElement::from_mode(Mode::new(0, -1))]);
    }

    #[test]
    fn generic_weight_has_none() {
        let s = spec(Rat::new(1, 3));
        assert_ne!(gram_matrix(&s, 2).determinant(), Rat::zero());
        assert!(find_singular_vectors(&s, 2).is_empty());
    }

    #[test]
    fn descendants_are_not_singular() {
        let s = spec(Rat::new(-1, 8));
        assert!(find_singular_vectors(&s, 3).is_empty());
    }

    #[test]
    fn singular_vectors_lie_in_gram_kernel() {
        let s = spec(Rat::new(-1, 8));
        let m = Module::new(s.clone());
        for v in find_singular_vectors(&s, 2) {
            let coeffs: Vec<Rat> = m.verma_basis(2).iter().map(|w| v.coefficient(w)).collect();
            assert!(gram_matrix(&s, 2).mul_vec(&coeffs).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn auto_detection_skips_descendants() {
        let s = spec(Rat::zero()).with_auto_singular(3).unwrap();
        assert_eq!(s.singular_levels(), vec![1]);
        let s = spec(Rat::new(-1, 8)).with_auto_singular(3).unwrap();
        assert_eq!(s.singular_levels(), vec![2]);
    }
}
