use std::collections::BTreeMap;

use super::iota::{iota_term, Direction, RationalMonomial};
use super::CoproductError;
use crate::algebra::math_index;
use crate::linalg::Rat;
use crate::module::{BasisRef, Field, GradedVector, Module, ReducedVec};

/// A pair of reduced basis vectors, one from each factor.
pub type TensorKey = (BasisRef, BasisRef);

/// Rational combination of basis tensors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TensorElement {
    pub terms: BTreeMap<TensorKey, Rat>,
}

pub fn total_level(k: &TensorKey) -> usize {
    k.0.level + k.1.level
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn basis(k: TensorKey) -> Self {
        TensorElement {
            terms: BTreeMap::from([(k, Rat::one())]),
        }
    }

    pub fn tensor(a: &GradedVector, b: &GradedVector) -> Self {
        let mut out = TensorElement::zero();
        for (x, c) in &a.terms {
            for (y, d) in &b.terms {
                out.add_term((*x, *y), c * d);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &TensorKey) -> Rat {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn max_level(&self) -> Option<usize> {
        self.terms.keys().map(total_level).max()
    }

    pub fn add_term(&mut self, k: TensorKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, s: &Rat, other: &TensorElement) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(*k, s * c);
        }
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        let mut out = TensorElement::zero();
        out.add_scaled(s, self);
        out
    }

    pub fn sub(&self, other: &TensorElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-Rat::one(), other);
        out
    }

    fn add_left(&mut self, s: &Rat, image: &ReducedVec, right: BasisRef) {
        for (a, c) in image {
            self.add_term((*a, right), s * c);
        }
    }

    fn add_right(&mut self, s: &Rat, left: BasisRef, image: &ReducedVec) {
        for (b, c) in image {
            self.add_term((left, *b), s * c);
        }
    }
}

/// Two modules, an insertion point `w` and a total-level truncation `lmax`.
///
/// Mode indices are weight-adjusted throughout; the mathematicians' mode `v_n`
/// of a weight-`h` field is `v(n + 1 − h)`.
pub struct TensorSpace<'a> {
    pub left: &'a Module,
    pub right: &'a Module,
    pub w: Rat,
    pub lmax: usize,
}

impl<'a> TensorSpace<'a> {
    pub fn new(left: &'a Module, right: &'a Module, w: Rat, lmax: usize) -> Self {
        assert!(!w.is_zero(), "insertion point must be nonzero");
        TensorSpace { left, right, w, lmax }
    }

    fn weight(&self, field: Field) -> u32 {
        field.weight(self.left.presentation())
    }

    fn check(&self, x: TensorElement) -> Result<TensorElement, CoproductError> {
        match x.max_level() {
            Some(l) if l > self.lmax => Err(CoproductError::HeadroomExceeded {
                level: l,
                lmax: self.lmax,
            }),
            _ => Ok(x),
        }
    }

    /// `Σ_{m≥0} binom(n, m) w^{n−m} (v_m ⊗ 1) + 1 ⊗ v_n` on one basis tensor, with
    /// `v_n = field(index)`. The sum stops once `v_m` annihilates the left factor.
    pub fn delta2_basis(&self, field: Field, index: i64, k: TensorKey) -> TensorElement {
        let h = self.weight(field);
        let n = math_index(index, h);
        let (a, b) = k;
        let mut out = TensorElement::zero();
        let top = a.level as i64;
        let mut m = 0;
        while m - h as i64 + 1 <= top {
            let c = Rat::binom(n, m) * self.w.pow(n - m);
            if !c.is_zero() {
                out.add_left(&c, &self.left.act_basis(field, m - h as i64 + 1, a), b);
            }
            m += 1;
        }
        out.add_right(&Rat::one(), a, &self.right.act_basis(field, index, b));
        out
    }

    /// `v_n ⊗ 1 + Σ_{m≥0} binom(n, m) (−w)^{n−m} (1 ⊗ v_m)` on one basis tensor.
    pub fn delta1_basis(&self, field: Field, index: i64, k: TensorKey) -> TensorElement {
        let h = self.weight(field);
        let n = math_index(index, h);
        let (a, b) = k;
        let mut out = TensorElement::zero();
        out.add_left(&Rat::one(), &self.left.act_basis(field, index, a), b);
        let top = b.level as i64;
        let neg_w = -&self.w;
        let mut m = 0;
        while m - h as i64 + 1 <= top {
            let c = Rat::binom(n, m) * neg_w.pow(n - m);
            if !c.is_zero() {
                out.add_right(&c, a, &self.right.act_basis(field, m - h as i64 + 1, b));
            }
            m += 1;
        }
        out
    }

    fn linear(&self, x: &TensorElement, f: impl Fn(TensorKey) -> TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (k, c) in &x.terms {
            out.add_scaled(c, &f(*k));
        }
        out
    }

    /// Unchecked `Δ^(2)_{w,0}` action.
    pub fn delta2_raw(&self, field: Field, index: i64, x: &TensorElement) -> TensorElement {
        self.linear(x, |k| self.delta2_basis(field, index, k))
    }

    /// Unchecked `Δ^(1)_{0,−w}` action.
    pub fn delta1_raw(&self, field: Field, index: i64, x: &TensorElement) -> TensorElement {
        self.linear(x, |k| self.delta1_basis(field, index, k))
    }

    /// `Δ^(2)_{w,0}(field(index))·x`, failing if the result leaves the truncation.
    pub fn delta2(&self, field: Field, index: i64, x: &TensorElement) -> Result<TensorElement, CoproductError> {
        self.check(self.delta2_raw(field, index, x))
    }

    /// `Δ^(1)_{0,−w}(field(index))·x`, failing if the result leaves the truncation.
    pub fn delta1(&self, field: Field, index: i64, x: &TensorElement) -> Result<TensorElement, CoproductError> {
        self.check(self.delta1_raw(field, index, x))
    }

    /// The translation identity truncated at depth `depth`:
    /// `Δ^(1)(v_n) x − Σ_{m≥0} (−w)^m binom(n, m) Δ^(2)(v_{n−m}) x`, keeping only the
    /// terms whose mode `v_{n−m}` raises the level by at most `depth`. The dropped
    /// terms are depth relations in their own right.
    pub fn translation_relation_raw(&self, field: Field, index: i64, x: &TensorElement, depth: usize) -> TensorElement {
        let h = self.weight(field);
        let n = math_index(index, h);
        let mut out = self.delta1_raw(field, index, x);
        let neg_w = -&self.w;
        let mut m = 0;
        // v_{n−m} has weight-adjusted index index − m, raising by m − index
        while m - index <= depth as i64 {
            let c = neg_w.pow(m) * Rat::binom(n, m);
            if !c.is_zero() {
                out.add_scaled(&-c, &self.delta2_raw(field, index - m, x));
            }
            m += 1;
        }
        out
    }

    pub fn translation_relation(
        &self,
        field: Field,
        index: i64,
        x: &TensorElement,
        depth: usize,
    ) -> Result<TensorElement, CoproductError> {
        if index >= 0 {
            return Err(CoproductError::NotRaising(index));
        }
        self.check(self.translation_relation_raw(field, index, x, depth))
    }

    /// Action of the smeared mode `v·f(t)` with `f = t^a (t − w)^b`:
    /// `(v ι₊((t + w)^a t^b) ψ₁) ⊗ ψ₂ + ψ₁ ⊗ (v ι₊(t^a (t − w)^b) ψ₂)`, where
    /// `v t^j` is the mathematicians' mode `v_j`.
    pub fn smeared_basis(&self, field: Field, f: &RationalMonomial, k: TensorKey) -> TensorElement {
        let h = self.weight(field) as i64;
        let (a, b) = k;
        let mut out = TensorElement::zero();
        let left_f = RationalMonomial::new(f.b, f.a, -&f.w);
        let mut m = 0;
        loop {
            let (j, c) = iota_term(&left_f, Direction::Plus, m);
            if j - h + 1 > a.level as i64 {
                break;
            }
            if !c.is_zero() {
                out.add_left(&c, &self.left.act_basis(field, j - h + 1, a), b);
            }
            m += 1;
        }
        let mut m = 0;
        loop {
            let (j, c) = iota_term(f, Direction::Plus, m);
            if j - h + 1 > b.level as i64 {
                break;
            }
            if !c.is_zero() {
                out.add_right(&c, a, &self.right.act_basis(field, j - h + 1, b));
            }
            m += 1;
        }
        out
    }

    pub fn smeared_raw(&self, field: Field, f: &RationalMonomial, x: &TensorElement) -> TensorElement {
        self.linear(x, |k| self.smeared_basis(field, f, k))
    }

    /// Human-readable label of a basis tensor.
    pub fn key_label(&self, k: &TensorKey) -> String {
        format!("{} ⊗ {}", self.left.label(k.0), self.right.label(k.1))
    }

    /// All basis tensors of total level at most `lmax`.
    pub fn basis_keys(&self) -> Vec<TensorKey> {
        let mut out = Vec::new();
        for total in 0..=self.lmax {
            for rl in 0..=total {
                let ll = total - rl;
                for li in 0..self.left.level_dim(ll) {
                    for ri in 0..self.right.level_dim(rl) {
                        out.push((BasisRef { level: ll, index: li }, BasisRef { level: rl, index: ri }));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Mode;
    use crate::module::ModuleSpec;

    fn m18() -> Module {
        Module::new(
            ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8))
                .with_singular_level(2)
                .unwrap(),
        )
    }

    fn hw() -> BasisRef {
        BasisRef { level: 0, index: 0 }
    }

    fn key_of(m: &Module, lw: &[Mode], rw: &[Mode]) -> TensorElement {
        TensorElement::tensor(&m.from_word(lw), &m.from_word(rw))
    }

    const L: Field = Field::Generator(0);

    fn l(n: i64) -> Mode {
        Mode::new(0, n)
    }

    #[test]
    fn delta2_l0_on_ground_states() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::one(), 6);
        let x = TensorElement::basis((hw(), hw()));
        let got = t.delta2(L, 0, &x).unwrap();
        let mut expect = key_of(&m, &[l(-1)], &[]);
        expect.add_scaled(&Rat::new(-1, 4), &x);
        assert_eq!(got, expect);
    }

    #[test]
    fn delta2_l_minus_two_on_ground_states() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::one(), 6);
        let x = TensorElement::basis((hw(), hw()));
        let got = t.delta2(L, -2, &x).unwrap();
        let mut expect = key_of(&m, &[l(-1)], &[]);
        expect.add_scaled(&Rat::new(1, 8), &x);
        expect.add_scaled(&Rat::one(), &key_of(&m, &[], &[l(-2)]));
        assert_eq!(got, expect);
    }

    #[test]
    fn momentum_conservation() {
        let f1 = Module::new(ModuleSpec::heisenberg(Rat::from(1)));
        let f2 = Module::new(ModuleSpec::heisenberg(Rat::from(2)));
        for w in [Rat::one(), Rat::new(-3, 2)] {
            let t = TensorSpace::new(&f1, &f2, w, 4);
            let x = TensorElement::basis((hw(), hw()));
            assert_eq!(t.delta2(Field::Generator(0), 0, &x).unwrap(), x.scaled(&Rat::from(3)));
        }
    }

    #[test]
    fn delta1_examples() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::one(), 6);
        let x = TensorElement::basis((hw(), hw()));
        // Δ^(1)(L(−1)) = L(−1) ⊗ 1 + 1 ⊗ L(−1)
        let mut expect = key_of(&m, &[l(-1)], &[]);
        expect.add_scaled(&Rat::one(), &key_of(&m, &[], &[l(-1)]));
        assert_eq!(t.delta1(L, -1, &x).unwrap(), expect);
        // Δ^(1)(L(0)) = L(0) ⊗ 1 + 1 ⊗ (L(0) − w L(−1))
        let mut expect = x.scaled(&Rat::new(-1, 4));
        expect.add_scaled(&-Rat::one(), &key_of(&m, &[], &[l(-1)]));
        assert_eq!(t.delta1(L, 0, &x).unwrap(), expect);
        assert!(t.delta1(L, -3, &TensorElement::zero()).unwrap().is_zero());
    }

    #[test]
    fn translation_relations_at_depth_zero() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::one(), 6);
        let x = TensorElement::basis((hw(), hw()));
        let mut swap = key_of(&m, &[l(-1)], &[]);
        swap.add_scaled(&Rat::one(), &key_of(&m, &[], &[l(-1)]));
        assert_eq!(t.translation_relation(L, -1, &x, 0).unwrap(), swap);
        // L(−2)γ ⊗ γ ≡ γ ⊗ L(−1)γ + h γ ⊗ γ at w = 1
        let got = t.translation_relation(L, -2, &x, 0).unwrap();
        let mut expect = key_of(&m, &[l(-2)], &[]);
        expect.add_scaled(&-Rat::one(), &key_of(&m, &[], &[l(-1)]));
        expect.add_scaled(&Rat::new(1, 8), &x);
        assert_eq!(got, expect);
        assert!(t.translation_relation(L, 0, &x, 0).is_err());
    }

    #[test]
    fn headroom_is_enforced() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::one(), 1);
        let x = TensorElement::basis((hw(), hw()));
        assert_eq!(
            t.delta2(L, -2, &x),
            Err(CoproductError::HeadroomExceeded { level: 2, lmax: 1 })
        );
    }

    #[test]
    fn smeared_matches_delta2() {
        let m = m18();
        let w = Rat::new(2, 3);
        let t = TensorSpace::new(&m, &m, w.clone(), 8);
        for k in t.basis_keys().into_iter().filter(|k| total_level(k) <= 3) {
            let x = TensorElement::basis(k);
            for n in -3i64..=2 {
                let f = RationalMonomial::new(n, 0, w.clone());
                // v t^n is the mathematicians' mode v_n = L(n − 1)
                assert_eq!(t.smeared_raw(L, &f, &x), t.delta2_raw(L, n - 1, &x));
            }
        }
    }

    #[test]
    fn homomorphism_on_truncations() {
        let m = m18();
        let t = TensorSpace::new(&m, &m, Rat::new(3, 2), 6);
        let c = Rat::from(-2);
        let keys: Vec<TensorKey> = t.basis_keys().into_iter().filter(|k| total_level(k) <= 3).collect();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for k in &keys {
                    let x = TensorElement::basis(*k);
                    let ab = t.delta2_raw(L, a, &t.delta2_raw(L, b, &x));
                    let ba = t.delta2_raw(L, b, &t.delta2_raw(L, a, &x));
                    let mut rhs = t.delta2_raw(L, a + b, &x).scaled(&Rat::from(a - b));
                    if a + b == 0 {
                        let central = &c / Rat::from(12) * Rat::from(a * a * a - a);
                        rhs.add_scaled(&central, &x);
                    }
                    assert_eq!(ab.sub(&ba), rhs, "[L({a}), L({b})] on {}", t.key_label(k));
                }
            }
        }
    }
}
