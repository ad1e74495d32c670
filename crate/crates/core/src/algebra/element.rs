use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::presentation::AlgebraPresentation;
use super::AlgebraError;
use crate::linalg::Rat;

/// A mode `x(n)` with weight-adjusted index: `x(-n)` raises conformal weight by `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub generator: usize,
    pub index: i64,
}

impl Mode {
    pub fn new(generator: usize, index: i64) -> Self {
        Mode { generator, index }
    }

    /// Amount by which this mode raises the level.
    pub fn raise(&self) -> i64 {
        -self.index
    }

    pub fn label(&self, p: &AlgebraPresentation) -> String {
        format!("{}({})", p.generator(self.generator).name, self.index)
    }
}

/// PBW order: index ascending, ties by generator (generators are stored in name order).
impl Ord for Mode {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index, self.generator).cmp(&(other.index, other.generator))
    }
}

impl PartialOrd for Mode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Word = Vec<Mode>;

pub fn word_label(w: &[Mode], p: &AlgebraPresentation) -> String {
    w.iter().map(|m| m.label(p)).collect()
}

pub fn is_canonical(w: &[Mode]) -> bool {
    w.windows(2).all(|x| x[0] <= x[1])
}

/// Rational combination of words; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Rat>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn identity() -> Self {
        AlgebraElement::from_word(Vec::new())
    }

    pub fn from_mode(m: Mode) -> Self {
        AlgebraElement::from_word(vec![m])
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(w, Rat::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Rat)>) -> Self {
        let mut e = AlgebraElement::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[Mode]) -> Rat {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Coefficient of the identity.
    pub fn scalar(&self) -> Rat {
        self.coefficient(&[])
    }

    pub fn add_term(&mut self, w: Word, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scaled(&-Rat::one()))
    }

    pub fn scaled(&self, s: &Rat) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * s)))
    }

    /// Concatenation product (not normal ordered).
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|w| is_canonical(w))
    }

    /// Level raised by every word, if the element is homogeneous.
    pub fn homogeneous_raise(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| w.iter().map(Mode::raise).sum::<i64>());
        let first = it.next()?;
        it.all(|r| r == first).then_some(first)
    }

    pub fn label(&self, p: &AlgebraPresentation) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let body = if w.is_empty() { "1".to_string() } else { word_label(w, p) };
                format!("({c})·{body}")
            })
            .collect();
        parts.join(" + ")
    }
}

/// PBW-canonical expansion of `w`: repeatedly swap the first out-of-order adjacent
/// pair, adding the bracket term.
pub fn normal_order(w: &[Mode], p: &AlgebraPresentation) -> AlgebraElement {
    normal_order_element(&AlgebraElement::from_word(w.to_vec()), p)
}

pub fn normal_order_element(e: &AlgebraElement, p: &AlgebraPresentation) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    let mut work: Vec<(Word, Rat)> = e.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = work.pop() {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) else {
            out.add_term(w, c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        work.push((swapped, c.clone()));
        for (t, k) in p.bracket_terms(w[i], w[i + 1]) {
            let mut nw = w[..i].to_vec();
            nw.extend(t);
            nw.extend_from_slice(&w[i + 2..]);
            work.push((nw, &c * k));
        }
    }
    out
}

/// `[a, b]` for arbitrary elements, normal ordered.
pub fn commutator(a: &AlgebraElement, b: &AlgebraElement, p: &AlgebraPresentation) -> AlgebraElement {
    normal_order_element(&a.mul(b).sub(&b.mul(a)), p)
}

/// The adjoint involution on a quasiprimary mode: `x(n) ↦ (-1)^{h_x} x(-n)`.
pub fn opp(m: Mode, p: &AlgebraPresentation) -> Result<(Rat, Mode), AlgebraError> {
    let g = p.generator(m.generator);
    if !g.quasiprimary {
        return Err(AlgebraError::NotQuasiprimary(g.name.clone()));
    }
    Ok((g.quasiprimary_sign.clone(), Mode::new(m.generator, -m.index)))
}

/// `opp` extended as an anti-automorphism: reverses words.
pub fn opp_element(e: &AlgebraElement, p: &AlgebraPresentation) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    for (w, c) in e.terms() {
        let mut sign = c.clone();
        let mut nw = Vec::with_capacity(w.len());
        for &m in w.iter().rev() {
            let (s, om) = opp(m, p)?;
            sign *= s;
            nw.push(om);
        }
        out.add_term(nw, sign);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presets;
    use proptest::prelude::*;

    fn vir() -> AlgebraPresentation {
        presets::virasoro(Rat::from(-2))
    }

    fn l(n: i64) -> Mode {
        Mode::new(0, n)
    }

    #[test]
    fn virasoro_brackets() {
        let p = vir();
        let e = p.bracket(l(2), l(-2));
        assert_eq!(e.coefficient(&[l(0)]), Rat::from(4));
        assert_eq!(e.scalar(), Rat::from(-1));
        assert_eq!(p.bracket(l(-1), l(-2)), AlgebraElement::from_mode(l(-3)));
    }

    #[test]
    fn heisenberg_bracket() {
        let p = presets::heisenberg();
        let a = |n| p.mode("a", n).unwrap();
        assert_eq!(p.bracket(a(1), a(-1)), AlgebraElement::identity());
        assert!(p.bracket(a(1), a(-2)).is_zero());
    }

    #[test]
    fn normal_ordering_examples() {
        let p = vir();
        let e = normal_order(&[l(-1), l(-2)], &p);
        assert_eq!(
            e,
            AlgebraElement::from_terms([(vec![l(-2), l(-1)], Rat::one()), (vec![l(-3)], Rat::one())])
        );
        let e = normal_order(&[l(1), l(-1)], &p);
        assert_eq!(
            e,
            AlgebraElement::from_terms([(vec![l(-1), l(1)], Rat::one()), (vec![l(0)], Rat::from(2))])
        );
        assert_eq!(
            normal_order(&[l(-3), l(-1), l(2)], &p),
            AlgebraElement::from_word(vec![l(-3), l(-1), l(2)])
        );
    }

    #[test]
    fn opp_examples() {
        let p = vir();
        assert_eq!(opp(l(3), &p).unwrap(), (Rat::one(), l(-3)));
        let h = presets::heisenberg();
        assert_eq!(opp(Mode::new(0, 2), &h).unwrap(), (-Rat::one(), Mode::new(0, -2)));
    }

    #[test]
    fn jacobi_on_virasoro_triples() {
        let p = vir();
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -4..=4 {
                    let (x, y, z) = (
                        AlgebraElement::from_mode(l(a)),
                        AlgebraElement::from_mode(l(b)),
                        AlgebraElement::from_mode(l(c)),
                    );
                    let j = commutator(&x, &commutator(&y, &z, &p), &p)
                        .add(&commutator(&y, &commutator(&z, &x, &p), &p))
                        .add(&commutator(&z, &commutator(&x, &y, &p), &p));
                    assert!(j.is_zero(), "Jacobi fails at ({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn antisymmetry() {
        let p = vir();
        for a in -6..=6 {
            for b in -6..=6 {
                assert_eq!(p.bracket(l(a), l(b)), p.bracket(l(b), l(a)).scaled(&-Rat::one()));
            }
        }
    }

    proptest! {
        #[test]
        fn normal_order_is_idempotent(idx in prop::collection::vec(-4i64..5, 0..5)) {
            let p = vir();
            let w: Word = idx.into_iter().map(l).collect();
            let e = normal_order(&w, &p);
            prop_assert!(e.is_canonical());
            prop_assert_eq!(normal_order_element(&e, &p), e);
        }

        #[test]
        fn opp_is_involutive_antiautomorphism(a in -4i64..5, b in -4i64..5) {
            let p = vir();
            let x = AlgebraElement::from_mode(l(a));
            let y = AlgebraElement::from_mode(l(b));
            let ox = opp_element(&x, &p).unwrap();
            prop_assert_eq!(opp_element(&ox, &p).unwrap(), x.clone());
            // opp([x, y]) = [opp(y), opp(x)]
            let lhs = opp_element(&commutator(&x, &y, &p), &p).unwrap();
            let oy = opp_element(&y, &p).unwrap();
            prop_assert_eq!(lhs, commutator(&oy, &ox, &p));
        }
    }
}
