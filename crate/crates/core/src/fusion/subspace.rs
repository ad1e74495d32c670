use serde::{Deserialize, Serialize};

use super::FusionError;
use crate::algebra::{Mode, Word};
use crate::linalg::{Eliminator, SparseVec};
use crate::module::{BasisRef, GradedVector, Module};

/// A quotient of a module spanned by a finite set of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleQuotient {
    pub basis: Vec<BasisRef>,
    pub labels: Vec<String>,
    /// Highest level inspected.
    pub cutoff: usize,
}

impl ModuleQuotient {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn max_level(&self) -> usize {
        self.basis.iter().map(|b| b.level).max().unwrap_or(0)
    }
}

fn max_weight(m: &Module) -> usize {
    m.presentation().generators().iter().map(|g| g.weight as usize).max().unwrap_or(1)
}

/// Quotient of `m` by a graded subspace given level by level, read off up to
/// `cutoff`; it must vanish on the top `max weight` levels.
fn graded_quotient(
    m: &Module,
    cutoff: usize,
    what: &'static str,
    spanning: impl Fn(usize) -> Vec<GradedVector>,
) -> Result<ModuleQuotient, FusionError> {
    let mut basis = Vec::new();
    let window = max_weight(m);
    for level in 0..=cutoff {
        let mut e = Eliminator::new();
        for v in spanning(level) {
            let sv: SparseVec = v.terms.into_iter().map(|(b, x)| (b.index, x)).collect();
            e.insert(sv);
        }
        for index in 0..m.level_dim(level) {
            if !e.is_pivot(index) {
                if level + window > cutoff {
                    return Err(FusionError::NotStabilized { what, lmax: cutoff });
                }
                basis.push(BasisRef { level, index });
            }
        }
    }
    let labels = basis.iter().map(|b| m.label(*b)).collect();
    Ok(ModuleQuotient { basis, labels, cutoff })
}

/// `M / C₁(M)`, where `C₁` is spanned by `x(−n)M` for every generator `x` and
/// `n ≥ weight(x)`.
pub fn special_subspace(m: &Module, cutoff: usize) -> Result<ModuleQuotient, FusionError> {
    let p = m.presentation();
    graded_quotient(m, cutoff, "special subspace", |level| {
        let mut out = Vec::new();
        for (g, spec) in p.generators().iter().enumerate() {
            for n in (spec.weight as usize).max(1)..=level {
                for index in 0..m.level_dim(level - n) {
                    let b = GradedVector::basis(BasisRef { level: level - n, index });
                    out.push(m.act(Mode::new(g, -(n as i64)), &b));
                }
            }
        }
        out
    })
}

/// Words `g'·x(−k)` with `weight(g') ≤ depth < weight(g'·x(−k)) ≤ max`. Every
/// word of weight above `depth` factors through one of them, so together they
/// generate the part of the enveloping algebra above `depth`.
pub fn depth_generators(m: &Module, depth: usize, max: usize) -> Vec<(Word, Mode)> {
    let gens = m.presentation().generators().len();
    let mut out = Vec::new();
    for wl in 0..=depth.min(max) {
        for prefix in m.verma_basis(wl) {
            for k in (depth - wl + 1)..=max.saturating_sub(wl) {
                for g in 0..gens {
                    out.push((prefix.clone(), Mode::new(g, -(k as i64))));
                }
            }
        }
    }
    out
}

fn apply_prefix(m: &Module, prefix: &[Mode], v: GradedVector) -> GradedVector {
    prefix.iter().rev().fold(v, |acc, mode| m.act(*mode, &acc))
}

/// `M / U_{>depth}·M`: the part of `m` reachable from the top by modes of
/// total weight at most `depth`.
pub fn depth_quotient(m: &Module, depth: usize, cutoff: usize) -> Result<ModuleQuotient, FusionError> {
    let words = depth_generators(m, depth, cutoff);
    graded_quotient(m, cutoff, "depth quotient", |level| {
        let mut out = Vec::new();
        for (prefix, x) in &words {
            let wt = prefix.iter().map(|y| y.raise() as usize).sum::<usize>() + x.raise() as usize;
            if wt > level {
                continue;
            }
            for index in 0..m.level_dim(level - wt) {
                let b = GradedVector::basis(BasisRef { level: level - wt, index });
                out.push(apply_prefix(m, prefix, m.act(*x, &b)));
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rat;
    use crate::module::ModuleSpec;

    fn m18() -> Module {
        Module::new(
            ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8))
                .with_singular_level(2)
                .unwrap(),
        )
    }

    #[test]
    fn special_subspace_of_the_twisted_module() {
        let q = special_subspace(&m18(), 6).unwrap();
        assert_eq!(q.labels, vec!["|hw", "L(-1)|hw"]);
    }

    #[test]
    fn special_subspace_of_the_vacuum() {
        let vac = Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::zero()).with_singular_level(1).unwrap());
        assert_eq!(special_subspace(&vac, 5).unwrap().labels, vec!["|hw"]);
    }

    #[test]
    fn special_subspace_of_a_verma_module_does_not_stabilize() {
        let verma = Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::new(1, 3)));
        assert!(matches!(special_subspace(&verma, 5), Err(FusionError::NotStabilized { .. })));
    }

    #[test]
    fn depth_quotients() {
        let m = m18();
        assert_eq!(depth_quotient(&m, 0, 5).unwrap().labels, vec!["|hw"]);
        assert_eq!(depth_quotient(&m, 1, 5).unwrap().labels, vec!["|hw", "L(-1)|hw"]);
        let d2 = depth_quotient(&m, 2, 6).unwrap();
        assert_eq!(d2.dimension(), 1 + 1 + m.level_dim(2));
    }

    #[test]
    fn heisenberg_special_subspace_is_the_top() {
        let f = Module::new(ModuleSpec::heisenberg(Rat::from(2)));
        assert_eq!(special_subspace(&f, 4).unwrap().dimension(), 1);
    }
}
