use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::algebra::{AlgebraPresentation, Mode, Word};
use crate::linalg::Rat;

/// Vector in a Verma module: canonical words of negative modes acting on the
/// highest-weight vector.
pub type VermaVec = BTreeMap<Word, Rat>;

pub(crate) fn add_scaled(acc: &mut VermaVec, s: &Rat, v: &VermaVec) {
    if s.is_zero() {
        return;
    }
    for (w, x) in v {
        let t = s * x;
        match acc.get_mut(w) {
            Some(y) => {
                *y += t;
                if y.is_zero() {
                    acc.remove(w);
                }
            }
            None => {
                acc.insert(w.clone(), t);
            }
        }
    }
}

pub(crate) fn verma_level(w: &[Mode]) -> usize {
    w.iter().map(Mode::raise).sum::<i64>() as usize
}

/// Mode action on a Verma module with prescribed zero-mode eigenvalues.
pub(crate) struct Verma {
    pub presentation: Arc<AlgebraPresentation>,
    zero_modes: BTreeMap<usize, Rat>,
    memo: RwLock<HashMap<(Mode, Word), Arc<VermaVec>>>,
}

impl Verma {
    pub fn new(presentation: Arc<AlgebraPresentation>, zero_modes: BTreeMap<usize, Rat>) -> Self {
        Verma {
            presentation,
            zero_modes,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// All canonical words of negative modes raising the level by exactly `n`,
    /// in lexicographic order.
    pub fn basis(&self, n: usize) -> Vec<Word> {
        let gens = self.presentation.generators().len();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: i64, min: Option<Mode>, gens: usize, cur: &mut Word, out: &mut Vec<Word>) {
            if rem == 0 {
                out.push(cur.clone());
                return;
            }
            for k in (1..=rem).rev() {
                for g in 0..gens {
                    let m = Mode::new(g, -k);
                    if min.is_some_and(|p| m < p) {
                        continue;
                    }
                    cur.push(m);
                    rec(rem - k, Some(m), gens, cur, out);
                    cur.pop();
                }
            }
        }
        rec(n as i64, None, gens, &mut cur, &mut out);
        out.sort();
        out
    }

    fn zero_mode(&self, g: usize) -> Rat {
        self.zero_modes.get(&g).cloned().unwrap_or_default()
    }

    /// `m · (w|hw⟩)` as a canonical Verma vector.
    pub fn act_word(&self, m: Mode, w: &[Mode]) -> Arc<VermaVec> {
        let key = (m, w.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(self.compute(m, w));
        self.memo.write().unwrap().insert(key, v.clone());
        v
    }

    fn compute(&self, m: Mode, w: &[Mode]) -> VermaVec {
        let mut out = VermaVec::new();
        let Some((&y, rest)) = w.split_first() else {
            match m.index {
                i if i > 0 => {}
                0 => {
                    let s = self.zero_mode(m.generator);
                    if !s.is_zero() {
                        out.insert(Vec::new(), s);
                    }
                }
                _ => {
                    out.insert(vec![m], Rat::one());
                }
            }
            return out;
        };
        if m.index < 0 && m <= y {
            let mut nw = Vec::with_capacity(w.len() + 1);
            nw.push(m);
            nw.extend_from_slice(w);
            out.insert(nw, Rat::one());
            return out;
        }
        let inner = self.act_word(m, rest);
        for (u, c) in inner.iter() {
            add_scaled(&mut out, c, &self.act_word(y, u));
        }
        for (t, c) in self.presentation.bracket_terms(m, y) {
            match t {
                Some(t) => add_scaled(&mut out, &c, &self.act_word(t, rest)),
                None => add_scaled(&mut out, &c, &VermaVec::from([(rest.to_vec(), Rat::one())])),
            }
        }
        out
    }

    pub fn act(&self, m: Mode, v: &VermaVec) -> VermaVec {
        let mut out = VermaVec::new();
        for (w, c) in v {
            add_scaled(&mut out, c, &self.act_word(m, w));
        }
        out
    }

    /// Applies a word as an operator: the rightmost mode acts first.
    pub fn apply_word(&self, word: &[Mode], v: &VermaVec) -> VermaVec {
        word.iter().rev().fold(v.clone(), |acc, &m| self.act(m, &acc))
    }

    /// Sugawara `L(n) = ½ Σ_k :a(n−k) a(k):` for a weight-one generator `a`.
    pub fn sugawara(&self, a: usize, n: i64, v: &VermaVec) -> VermaVec {
        let top = v.keys().map(|w| verma_level(w) as i64).max().unwrap_or(0);
        let half = Rat::new(1, 2);
        let mut out = VermaVec::new();
        for k in (n.min(0) - top - 1)..=(top.max(n) + top + 1) {
            let (p, q) = (n - k, k);
            // normal order: the more positive mode acts first
            let (first, second) = if q >= p { (q, p) } else { (p, q) };
            if first > top {
                continue;
            }
            let step = self.act(Mode::new(a, first), v);
            if step.is_empty() {
                continue;
            }
            let r = self.act(Mode::new(a, second), &step);
            add_scaled(&mut out, &half, &r);
        }
        out
    }
}
