use serde::{Deserialize, Serialize};

use crate::linalg::Rat;

/// `f(t) = t^a (t − w)^b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMonomial {
    pub a: i64,
    pub b: i64,
    pub w: Rat,
}

impl RationalMonomial {
    pub fn new(a: i64, b: i64, w: Rat) -> Self {
        assert!(!w.is_zero(), "insertion point must be nonzero");
        RationalMonomial { a, b, w }
    }
}

/// Expansion about `t = 0` (`Plus`) or `t = ∞` (`Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

/// The `m`-th term of the expansion as `(power of t, coefficient)`.
pub fn iota_term(f: &RationalMonomial, direction: Direction, m: i64) -> (i64, Rat) {
    let c = Rat::binom(f.b, m);
    match direction {
        Direction::Plus => (f.a + m, c * (-&f.w).pow(f.b - m)),
        Direction::Minus => (f.a + f.b - m, c * (-&f.w).pow(m)),
    }
}

/// First `order` terms of the Laurent expansion of `f`, zero terms dropped.
pub fn iota_expand(f: &RationalMonomial, direction: Direction, order: usize) -> Vec<(i64, Rat)> {
    (0..order as i64)
        .map(|m| iota_term(f, direction, m))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn geometric_series() {
        let w = Rat::from(3);
        let f = RationalMonomial::new(0, -1, w.clone());
        assert_eq!(
            iota_expand(&f, Direction::Plus, 3),
            vec![(0, -w.pow(-1)), (1, -w.pow(-2)), (2, -w.pow(-3))]
        );
        assert_eq!(
            iota_expand(&f, Direction::Minus, 3),
            vec![(-1, Rat::one()), (-2, w.clone()), (-3, w.pow(2))]
        );
    }

    proptest! {
        #[test]
        fn polynomial_case_agrees(a in -3i64..4, b in 0i64..5, p in 1i64..5, q in 1i64..4) {
            let f = RationalMonomial::new(a, b, Rat::new(p, q));
            let mut plus = iota_expand(&f, Direction::Plus, (b + 3) as usize);
            let mut minus = iota_expand(&f, Direction::Minus, (b + 3) as usize);
            plus.sort();
            minus.sort();
            prop_assert_eq!(plus, minus);
        }
    }
}
