use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use super::spec::{Field, ModuleSpec};
use super::verma::{add_scaled, verma_level, Verma, VermaVec};
use crate::algebra::{word_label, AlgebraPresentation, Conformal, Mode, Word};
use crate::linalg::{Eliminator, Rat, SparseVec};

/// A basis vector of the reduced module: index into the level's representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct BasisRef {
    pub level: usize,
    pub index: usize,
}

/// Sparse vector over reduced basis vectors.
pub type ReducedVec = BTreeMap<BasisRef, Rat>;

pub(crate) fn add_reduced(acc: &mut ReducedVec, s: &Rat, v: &ReducedVec) {
    if s.is_zero() {
        return;
    }
    for (k, x) in v {
        let t = s * x;
        match acc.get_mut(k) {
            Some(y) => {
                *y += t;
                if y.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                acc.insert(*k, t);
            }
        }
    }
}

/// Level-graded vector in canonical reduced coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedVector {
    pub terms: ReducedVec,
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector::default()
    }

    pub fn basis(b: BasisRef) -> Self {
        GradedVector {
            terms: ReducedVec::from([(b, Rat::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn levels(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.terms.keys().map(|b| b.level).collect();
        l.dedup();
        l
    }

    /// Dense coefficient vector at one level.
    pub fn component(&self, level: usize, dim: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); dim];
        for (b, x) in self.terms.range(BasisRef { level, index: 0 }..BasisRef { level: level + 1, index: 0 }) {
            out[b.index] = x.clone();
        }
        out
    }

    pub fn coefficient(&self, b: BasisRef) -> Rat {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        let mut out = GradedVector::zero();
        add_reduced(&mut out.terms, s, &self.terms);
        out
    }

    pub fn add(&self, other: &GradedVector) -> Self {
        let mut out = self.clone();
        add_reduced(&mut out.terms, &Rat::one(), &other.terms);
        out
    }
}

struct LevelData {
    verma_basis: Vec<Word>,
    verma_index: HashMap<Word, usize>,
    submodule: Eliminator,
    reps: Vec<usize>,
    rep_pos: HashMap<usize, usize>,
}

/// A highest-weight module with cached graded structure and mode actions.
pub struct Module {
    spec: ModuleSpec,
    verma: Verma,
    seeds: BTreeMap<usize, Vec<VermaVec>>,
    levels: RwLock<Vec<Arc<LevelData>>>,
    actions: RwLock<HashMap<(Field, i64, BasisRef), Arc<ReducedVec>>>,
}

impl Module {
    pub fn new(spec: ModuleSpec) -> Self {
        let verma = Verma::new(spec.presentation.clone(), spec.zero_modes.clone());
        let seeds = closure_seeds(&verma, &spec);
        Module {
            spec,
            verma,
            seeds,
            levels: RwLock::new(Vec::new()),
            actions: RwLock::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.spec.presentation
    }

    fn level(&self, n: usize) -> Arc<LevelData> {
        if let Some(l) = self.levels.read().unwrap().get(n) {
            return l.clone();
        }
        let mut levels = self.levels.write().unwrap();
        while levels.len() <= n {
            let k = levels.len();
            let data = self.build_level(k, &levels);
            levels.push(Arc::new(data));
        }
        levels[n].clone()
    }

    fn build_level(&self, n: usize, lower: &[Arc<LevelData>]) -> LevelData {
        let verma_basis = self.verma.basis(n);
        let verma_index: HashMap<Word, usize> = verma_basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let to_sparse = |v: &VermaVec| -> SparseVec {
            v.iter().map(|(w, x)| (verma_index[w], x.clone())).collect()
        };
        let mut submodule = Eliminator::new();
        for s in self.seeds.get(&n).into_iter().flatten() {
            submodule.insert(to_sparse(s));
        }
        let gens = self.presentation().generators().len();
        for k in 1..=n {
            let src = &lower[n - k];
            for p in src.submodule.pivots().collect::<Vec<_>>() {
                let row = src_row(src, p);
                for g in 0..gens {
                    let v = self.verma.act(Mode::new(g, -(k as i64)), &row);
                    submodule.insert(to_sparse(&v));
                }
            }
        }
        let reps: Vec<usize> = (0..verma_basis.len()).filter(|&i| !submodule.is_pivot(i)).collect();
        let rep_pos = reps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        LevelData {
            verma_basis,
            verma_index,
            submodule,
            reps,
            rep_pos,
        }
    }

    /// Canonical words of the Verma cover at level `n`.
    pub fn verma_basis(&self, n: usize) -> Vec<Word> {
        self.level(n).verma_basis.clone()
    }

    /// Reduced basis at level `n`: representative PBW words.
    pub fn level_basis(&self, n: usize) -> Vec<Word> {
        let l = self.level(n);
        l.reps.iter().map(|&i| l.verma_basis[i].clone()).collect()
    }

    pub fn level_dim(&self, n: usize) -> usize {
        self.level(n).reps.len()
    }

    /// Rank of the singular submodule at level `n`.
    pub fn submodule_rank(&self, n: usize) -> usize {
        self.level(n).submodule.rank()
    }

    pub fn word(&self, b: BasisRef) -> Word {
        let l = self.level(b.level);
        l.verma_basis[l.reps[b.index]].clone()
    }

    pub fn label(&self, b: BasisRef) -> String {
        format!("{}|hw", word_label(&self.word(b), self.presentation()))
    }

    pub fn labels(&self, n: usize) -> Vec<String> {
        (0..self.level_dim(n))
            .map(|index| self.label(BasisRef { level: n, index }))
            .collect()
    }

    /// Whether a Verma vector at level `n` (dense over the Verma basis) lies in
    /// the singular submodule.
    pub fn verma_in_submodule(&self, n: usize, coeffs: &[Rat]) -> bool {
        let l = self.level(n);
        let v: SparseVec = coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        l.submodule.reduce(v).is_empty()
    }

    /// Reduces a Verma vector to canonical coordinates.
    pub fn reduce(&self, v: &VermaVec) -> GradedVector {
        let mut by_level: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (w, x) in v {
            let n = verma_level(w);
            let l = self.level(n);
            by_level.entry(n).or_default().insert(l.verma_index[w], x.clone());
        }
        let mut out = GradedVector::zero();
        for (n, sv) in by_level {
            let l = self.level(n);
            for (i, x) in l.submodule.reduce(sv) {
                out.terms.insert(BasisRef { level: n, index: l.rep_pos[&i] }, x);
            }
        }
        out
    }

    pub fn highest_weight_vector(&self) -> GradedVector {
        GradedVector::basis(BasisRef { level: 0, index: 0 })
    }

    /// `word · hw`, reduced; the rightmost mode acts first.
    pub fn from_word(&self, word: &[Mode]) -> GradedVector {
        let hw = VermaVec::from([(Vec::new(), Rat::one())]);
        self.reduce(&self.verma.apply_word(word, &hw))
    }

    fn lift(&self, b: BasisRef) -> VermaVec {
        VermaVec::from([(self.word(b), Rat::one())])
    }

    /// Action of the weight-adjusted mode `field(index)` on one basis vector.
    pub fn act_basis(&self, field: Field, index: i64, b: BasisRef) -> Arc<ReducedVec> {
        let field = field.normalize(self.presentation());
        if index > b.level as i64 {
            return Arc::new(ReducedVec::new());
        }
        let key = (field, index, b);
        if let Some(v) = self.actions.read().unwrap().get(&key) {
            return v.clone();
        }
        let lifted = self.lift(b);
        let image = match field {
            Field::Generator(g) => self.verma.act(Mode::new(g, index), &lifted),
            Field::Conformal => match self.presentation().conformal {
                Conformal::Sugawara(a) => self.verma.sugawara(a, index, &lifted),
                Conformal::Generator(g) => self.verma.act(Mode::new(g, index), &lifted),
            },
        };
        let v = Arc::new(self.reduce(&image).terms);
        self.actions.write().unwrap().insert(key, v.clone());
        v
    }

    pub fn act_field(&self, field: Field, index: i64, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (b, x) in &v.terms {
            add_reduced(&mut out.terms, x, &self.act_basis(field, index, *b));
        }
        out
    }

    pub fn act(&self, m: Mode, v: &GradedVector) -> GradedVector {
        self.act_field(Field::Generator(m.generator), m.index, v)
    }

    pub(crate) fn verma(&self) -> &Verma {
        &self.verma
    }
}

fn src_row(l: &LevelData, pivot: usize) -> VermaVec {
    // e_p minus its reduction: the fully reduced submodule vector led by `pivot`
    let mut unit = SparseVec::new();
    unit.insert(pivot, Rat::one());
    let reduced = l.submodule.reduce(unit);
    let mut v = VermaVec::new();
    v.insert(l.verma_basis[pivot].clone(), Rat::one());
    for (i, x) in reduced {
        v.insert(l.verma_basis[i].clone(), -x);
    }
    v
}

/// Singular relations applied to the highest-weight vector, closed under the
/// action of non-negative modes, grouped by level.
fn closure_seeds(verma: &Verma, spec: &ModuleSpec) -> BTreeMap<usize, Vec<VermaVec>> {
    let hw = VermaVec::from([(Vec::new(), Rat::one())]);
    let mut found: BTreeMap<usize, Vec<VermaVec>> = BTreeMap::new();
    let mut queue: Vec<VermaVec> = Vec::new();
    for r in &spec.singular_relations {
        let mut v = VermaVec::new();
        for (w, c) in r.element.terms() {
            add_scaled(&mut v, c, &verma.apply_word(w, &hw));
        }
        if !v.is_empty() {
            queue.push(v);
        }
    }
    let gens = spec.presentation.generators().len();
    let mut elims: BTreeMap<usize, (Vec<Word>, Eliminator)> = BTreeMap::new();
    while let Some(v) = queue.pop() {
        let n = v.keys().map(|w| verma_level(w)).max().unwrap();
        let (basis, e) = elims.entry(n).or_insert_with(|| (verma.basis(n), Eliminator::new()));
        let sv: SparseVec = v
            .iter()
            .map(|(w, x)| (basis.binary_search(w).expect("homogeneous seed"), x.clone()))
            .collect();
        if !e.insert(sv) {
            continue;
        }
        found.entry(n).or_default().push(v.clone());
        for g in 0..gens {
            for k in 0..=n as i64 {
                let image = verma.act(Mode::new(g, k), &v);
                if !image.is_empty() {
                    queue.push(image);
                }
            }
        }
    }
    found
}
