//! Bott-Samelson bimodules `R_{P(0)} ⊗_{R_{Q(0)}} R_{P(1)} ⊗ … ⊗_{R_{Q(n)}} R_{P(n+1)}`
//! as free left modules with explicit right-action matrices.
//!
//! A step `P ⊆ (Q, γ) ⊇ P'` is `R_P ⊗_{R_Q} R_{γ(P')}` with `R_{P'}` acting on
//! the right through `γ`. Elements are coordinate vectors over `R_{P(0)}` in
//! the product of the relative Steinberg bases; matrix columns are images of
//! basis vectors and labels are ordered lexicographically, factor 0 first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{self, LaurentError, LaurentPoly};
use crate::polymat::PolyMatrix;
use crate::rootdata::{DiagramAutomorphism, Parabolic, RootDatum, RootDatumError};
use crate::steinberg::{self, RelativeBasis, SteinbergError};
use crate::weyl;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("malformed sequence: {0}")]
    Malformed(String),
    #[error("step {step}: {inner} is not contained in {outer}")]
    NotContained { step: usize, inner: Parabolic, outer: Parabolic },
    #[error("step {step}: twist does not stabilize {q}")]
    UnsupportedTwist { step: usize, q: Parabolic },
    #[error("right ring {left} does not match left ring {right}")]
    RingMismatch { left: Parabolic, right: Parabolic },
    #[error("bimodules live over different root data")]
    DatumMismatch,
    #[error("element is not invariant under {0}")]
    NotInvariant(Parabolic),
    #[error(transparent)]
    Steinberg(#[from] SteinbergError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// `P(0) ⊆ (Q(0), γ_0) ⊇ P(1) ⊆ … ⊇ P(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSSequence {
    parabolics: Vec<Parabolic>,
    twists: Vec<DiagramAutomorphism>,
}

impl BSSequence {
    /// `parabolics` alternates `P(0), Q(0), P(1), …, Q(n), P(n+1)`; a single
    /// entry is the empty sequence at that parabolic.
    pub fn new(d: &RootDatum, parabolics: Vec<Parabolic>, twists: Vec<DiagramAutomorphism>) -> Result<Self, BimoduleError> {
        if parabolics.len().is_multiple_of(2) {
            return Err(BimoduleError::Malformed(format!("{} parabolics, expected an odd number", parabolics.len())));
        }
        let steps = parabolics.len() / 2;
        if twists.len() != steps {
            return Err(BimoduleError::Malformed(format!("{} twists for {} steps", twists.len(), steps)));
        }
        for j in &parabolics {
            d.check_indices(j)?;
        }
        for (i, g) in twists.iter().enumerate() {
            if g.matrix().dim() != d.rank() || g.root_permutation().len() != d.num_simple() {
                return Err(BimoduleError::Malformed(format!("twist {i} has the wrong size")));
            }
        }
        let seq = BSSequence { parabolics, twists };
        for i in 0..steps {
            let (p, q, p_next, g) = (seq.p(i), seq.q(i), seq.p(i + 1), &seq.twists[i]);
            d.check_finite(q)?;
            if !g.is_identity() && !g.stabilizes(q) {
                return Err(BimoduleError::UnsupportedTwist { step: i, q: q.clone() });
            }
            if !p.is_subset(q) {
                return Err(BimoduleError::NotContained { step: i, inner: p.clone(), outer: q.clone() });
            }
            let image = g.apply_parabolic(p_next);
            if !image.is_subset(q) {
                return Err(BimoduleError::NotContained { step: i, inner: image, outer: q.clone() });
            }
        }
        Ok(seq)
    }

    /// All twists trivial.
    pub fn untwisted(d: &RootDatum, parabolics: Vec<Parabolic>) -> Result<Self, BimoduleError> {
        let n = parabolics.len() / 2;
        BSSequence::new(d, parabolics, vec![DiagramAutomorphism::identity(d); n])
    }

    pub fn num_steps(&self) -> usize {
        self.twists.len()
    }

    pub fn p(&self, i: usize) -> &Parabolic {
        &self.parabolics[2 * i]
    }

    pub fn q(&self, i: usize) -> &Parabolic {
        &self.parabolics[2 * i + 1]
    }

    pub fn parabolics(&self) -> &[Parabolic] {
        &self.parabolics
    }

    pub fn twists(&self) -> &[DiagramAutomorphism] {
        &self.twists
    }

    pub fn left_ring(&self) -> &Parabolic {
        &self.parabolics[0]
    }

    pub fn right_ring(&self) -> &Parabolic {
        self.parabolics.last().expect("nonempty")
    }

    pub fn is_untwisted(&self) -> bool {
        self.twists.iter().all(|g| g.is_identity())
    }

    /// `γ_0 γ_1 ⋯ γ_n`, or `None` for the empty sequence (no datum at hand).
    pub fn total_twist(&self) -> Option<DiagramAutomorphism> {
        let mut it = self.twists.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, g| acc.compose(g)))
    }

    /// Joins two sequences sharing the middle parabolic.
    pub fn concat(&self, other: &BSSequence) -> Result<BSSequence, BimoduleError> {
        if self.right_ring() != other.left_ring() {
            return Err(BimoduleError::RingMismatch { left: self.right_ring().clone(), right: other.left_ring().clone() });
        }
        let mut parabolics = self.parabolics.clone();
        parabolics.extend(other.parabolics[1..].iter().cloned());
        let mut twists = self.twists.clone();
        twists.extend(other.twists.iter().cloned());
        Ok(BSSequence { parabolics, twists })
    }

    /// `∏ |W_{Q(i)}| / |W_{P(i+1)}|`
    pub fn expected_rank(&self, d: &RootDatum) -> Result<usize, BimoduleError> {
        let mut r = 1usize;
        for i in 0..self.num_steps() {
            let q = weyl::parabolic_order(d, self.q(i)).map_err(SteinbergError::from)?;
            let p = weyl::parabolic_order(d, self.p(i + 1)).map_err(SteinbergError::from)?;
            r *= q / p;
        }
        Ok(r)
    }

    /// Every sequence with `steps` steps whose parabolics are drawn from
    /// `pool`, with trivial twists.
    pub fn all_untwisted(d: &RootDatum, pool: &[Parabolic], steps: usize) -> Vec<BSSequence> {
        let finite: Vec<&Parabolic> = pool.iter().filter(|j| d.is_finite_type(j)).collect();
        let mut partial: Vec<Vec<Parabolic>> = pool.iter().map(|p| vec![p.clone()]).collect();
        for _ in 0..steps {
            let mut next = Vec::new();
            for seq in &partial {
                let last = seq.last().expect("nonempty");
                for q in finite.iter().filter(|q| last.is_subset(q)) {
                    for p in pool.iter().filter(|p| p.is_subset(q)) {
                        let mut s = seq.clone();
                        s.push((*q).clone());
                        s.push(p.clone());
                        next.push(s);
                    }
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .filter_map(|ps| BSSequence::untwisted(d, ps).ok())
            .collect()
    }
}

impl fmt::Display for BSSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.parabolics[0])?;
        for i in 0..self.num_steps() {
            write!(f, " ⊆ {}", self.q(i))?;
            if !self.twists[i].is_identity() {
                write!(f, "γ")?;
            }
            write!(f, " ⊇ {}", self.p(i + 1))?;
        }
        Ok(())
    }
}

/// One tensor step: the basis of `R_{γ(P(i+1))}` over `R_{Q(i)}`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub basis: RelativeBasis,
    pub twist: DiagramAutomorphism,
    /// `P(i)` and `P(i+1)`.
    pub left: Parabolic,
    pub right: Parabolic,
}

// Right actions are memoized only below this rank.
const CACHED_RANK: usize = 64;

type Cache<K> = RwLock<HashMap<K, Arc<PolyMatrix>>>;

pub struct BSBimodule {
    datum: RootDatum,
    seq: BSSequence,
    factors: Vec<Arc<Factor>>,
    labels: Vec<Vec<usize>>,
    // per level i: W_{P(i+1)}-dominant μ ↦ matrix of the orbit sum of μ
    orbit_cache: Vec<Arc<Cache<Vec<i64>>>>,
    action_cache: Cache<String>,
}

/// Orbit-action tables shared between bimodules whose sequences agree up to
/// some `P(i)`: the action on the first `i` factors depends only on that
/// prefix. Levels whose matrices exceed `max_size` are never shared.
pub struct ActionStore {
    max_size: usize,
    levels: Mutex<HashMap<String, Arc<Cache<Vec<i64>>>>>,
}

impl ActionStore {
    pub fn new(max_size: usize) -> Self {
        ActionStore { max_size, levels: Mutex::new(HashMap::new()) }
    }

    fn level(&self, key: String) -> Arc<Cache<Vec<i64>>> {
        self.levels.lock().expect("store poisoned").entry(key).or_default().clone()
    }

    pub fn len(&self) -> usize {
        self.levels.lock().expect("store poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Clone for BSBimodule {
    fn clone(&self) -> Self {
        BSBimodule::assemble(self.datum.clone(), self.seq.clone(), self.factors.clone(), None)
    }
}

impl fmt::Debug for BSBimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BSBimodule")
            .field("seq", &self.seq.to_string())
            .field("rank", &self.rank())
            .finish()
    }
}

impl BSBimodule {
    pub fn build(d: &RootDatum, seq: &BSSequence) -> Result<Self, BimoduleError> {
        BSBimodule::build_in(d, seq, None)
    }

    /// Like [`BSBimodule::build`], drawing prefix tables from `store`.
    pub fn build_in(d: &RootDatum, seq: &BSSequence, store: Option<&ActionStore>) -> Result<Self, BimoduleError> {
        let mut factors = Vec::with_capacity(seq.num_steps());
        for i in 0..seq.num_steps() {
            let twist = seq.twists[i].clone();
            let sub = twist.apply_parabolic(seq.p(i + 1));
            let basis = steinberg::steinberg_basis(d, &sub, seq.q(i))?;
            factors.push(Arc::new(Factor { basis, twist, left: seq.p(i).clone(), right: seq.p(i + 1).clone() }));
        }
        Ok(BSBimodule::assemble(d.clone(), seq.clone(), factors, store))
    }

    fn assemble(datum: RootDatum, seq: BSSequence, factors: Vec<Arc<Factor>>, store: Option<&ActionStore>) -> Self {
        let mut labels: Vec<Vec<usize>> = vec![Vec::new()];
        for f in &factors {
            labels = labels
                .into_iter()
                .flat_map(|l| (0..f.basis.len()).map(move |k| l.iter().copied().chain([k]).collect()))
                .collect();
        }
        let mut orbit_cache = Vec::with_capacity(factors.len());
        let mut size = 1;
        for (i, f) in factors.iter().enumerate() {
            size *= f.basis.len();
            let shared = store.filter(|s| size <= s.max_size).map(|s| {
                let ps = &seq.parabolics[..2 * i + 3];
                let gs: Vec<_> = seq.twists[..=i].iter().map(|g| g.matrix()).collect();
                s.level(format!("{:?}|{ps:?}|{gs:?}", datum.raw()))
            });
            orbit_cache.push(shared.unwrap_or_default());
        }
        BSBimodule { datum, seq, factors, labels, orbit_cache, action_cache: RwLock::new(HashMap::new()) }
    }

    /// The rank-one bimodule of `J ⊆ J ⊇ J`.
    pub fn identity(d: &RootDatum, j: &Parabolic) -> Result<Self, BimoduleError> {
        let seq = BSSequence::untwisted(d, vec![j.clone(), j.clone(), j.clone()])?;
        BSBimodule::build(d, &seq)
    }

    /// `R` with the right action precomposed by `γ`.
    pub fn twist(d: &RootDatum, gamma: &DiagramAutomorphism) -> Result<Self, BimoduleError> {
        let e = Parabolic::empty();
        let seq = BSSequence::new(d, vec![e.clone(), e.clone(), e], vec![gamma.clone()])?;
        BSBimodule::build(d, &seq)
    }

    /// Tensor product over the shared ring; factor bases are reused.
    pub fn concat(&self, other: &BSBimodule) -> Result<Self, BimoduleError> {
        self.concat_in(other, None)
    }

    pub fn concat_in(&self, other: &BSBimodule, store: Option<&ActionStore>) -> Result<Self, BimoduleError> {
        if self.datum != other.datum {
            return Err(BimoduleError::DatumMismatch);
        }
        let seq = self.seq.concat(&other.seq)?;
        let factors = self.factors.iter().chain(&other.factors).cloned().collect();
        let mut out = BSBimodule::assemble(self.datum.clone(), seq, factors, store);
        // the first factors are literally those of `self`
        for (mine, theirs) in out.orbit_cache.iter_mut().zip(&self.orbit_cache) {
            if store.is_none() {
                *mine = theirs.clone();
            }
        }
        Ok(out)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn sequence(&self) -> &BSSequence {
        &self.seq
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().map(|f| f.as_ref())
    }

    pub fn left_ring(&self) -> &Parabolic {
        self.seq.left_ring()
    }

    pub fn right_ring(&self) -> &Parabolic {
        self.seq.right_ring()
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn basis_labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn total_twist(&self) -> DiagramAutomorphism {
        self.seq.total_twist().unwrap_or_else(|| DiagramAutomorphism::identity(&self.datum))
    }

    /// The basis vector `1 ⊗ e_{v_0} ⊗ ⋯ ⊗ e_{v_n}` as a list of factors.
    pub fn basis_element(&self, label: &[usize]) -> Vec<LaurentPoly> {
        self.factors.iter().zip(label).map(|(f, &k)| f.basis.basis[k].clone()).collect()
    }

    /// Matrix of right multiplication by `f`, entries in `R_{P(0)}`.
    pub fn right_act(&self, f: &LaurentPoly) -> Result<Arc<PolyMatrix>, BimoduleError> {
        if f.rank() != self.datum.rank() {
            return Err(LaurentError::RankMismatch { left: self.datum.rank(), right: f.rank() }.into());
        }
        if !f.is_invariant(&self.datum, self.right_ring()) {
            return Err(BimoduleError::NotInvariant(self.right_ring().clone()));
        }
        let key = f.to_text();
        if let Some(m) = self.action_cache.read().expect("cache poisoned").get(&key) {
            return Ok(m.clone());
        }
        let m = match self.factors.last() {
            None => vec![vec![f.clone()]],
            Some(top) => self.block_action(self.factors.len(), &f.act_automorphism(&top.twist)?)?,
        };
        let m = Arc::new(m);
        if self.rank() > CACHED_RANK {
            return Ok(m);
        }
        let mut cache = self.action_cache.write().expect("cache poisoned");
        Ok(cache.entry(key).or_insert(m).clone())
    }

    /// Number of cached right actions.
    pub fn cached_actions(&self) -> usize {
        self.action_cache.read().expect("cache poisoned").len()
    }

    fn level_size(&self, level: usize) -> usize {
        self.factors[..level].iter().map(|f| f.basis.len()).product()
    }

    /// Right action of `c ∈ R_{P(level)}` on the first `level` factors.
    fn act_level(&self, level: usize, c: &LaurentPoly) -> Result<PolyMatrix, BimoduleError> {
        let rank = self.datum.rank();
        if level == 0 {
            return Ok(vec![vec![c.clone()]]);
        }
        let size = self.level_size(level);
        let mut out = vec![vec![LaurentPoly::zero(rank); size]; size];
        let ring = self.seq.p(level);
        for (mu, coeff) in c.terms() {
            if !self.datum.is_dominant(ring, mu) {
                continue;
            }
            let m = self.orbit_action(level, mu)?;
            for (row, mrow) in out.iter_mut().zip(m.iter()) {
                for (x, y) in row.iter_mut().zip(mrow) {
                    if !y.is_zero() {
                        x.add_scaled(y, &coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    fn orbit_action(&self, level: usize, mu: &[i64]) -> Result<Arc<PolyMatrix>, BimoduleError> {
        let cache = &self.orbit_cache[level - 1];
        if let Some(m) = cache.read().expect("cache poisoned").get(mu) {
            return Ok(m.clone());
        }
        let factor = &self.factors[level - 1];
        let h = laurent::orbit_sum(&self.datum, &factor.right, mu)?.act_automorphism(&factor.twist)?;
        let m = Arc::new(self.block_action(level, &h)?);
        let mut w = cache.write().expect("cache poisoned");
        Ok(w.entry(mu.to_vec()).or_insert(m).clone())
    }

    /// Multiplication by `h` in the last of the first `level` factors,
    /// expanded over the lower levels: block `(k, v)` is the action of
    /// `(e_v h, ê_k)`.
    fn block_action(&self, level: usize, h: &LaurentPoly) -> Result<PolyMatrix, BimoduleError> {
        let d = &self.datum;
        let factor = &self.factors[level - 1];
        let r = factor.basis.len();
        let inner = self.level_size(level - 1);
        let blocks: Vec<PolyMatrix> = (0..r * r)
            .into_par_iter()
            .map(|idx| {
                let (v, k) = (idx / r, idx % r);
                let prod = &factor.basis.basis[v] * h;
                let c = factor.basis.pair(d, &prod, &factor.basis.dual[k])?;
                self.act_level(level - 1, &c)
            })
            .collect::<Result<_, _>>()?;
        let mut m = vec![vec![LaurentPoly::zero(d.rank()); inner * r]; inner * r];
        for (idx, block) in blocks.into_iter().enumerate() {
            let (v, k) = (idx / r, idx % r);
            for (a, brow) in block.into_iter().enumerate() {
                for (b, x) in brow.into_iter().enumerate() {
                    m[a * r + k][b * r + v] = x;
                }
            }
        }
        Ok(m)
    }

    /// Applies the right action of `f` to a coordinate vector.
    pub fn act_on(&self, x: &[LaurentPoly], f: &LaurentPoly) -> Result<Vec<LaurentPoly>, BimoduleError> {
        let m = self.right_act(f)?;
        Ok(crate::polymat::mul_vec(&m, x, self.datum.rank()))
    }

    /// Orbit sums of `±e_k` under `W_{right ring}`, a sample family of
    /// right-ring elements.
    pub fn sample_right_elements(&self) -> Result<Vec<LaurentPoly>, BimoduleError> {
        let n = self.datum.rank();
        let mut out = Vec::new();
        for k in 0..n {
            for s in [1, -1] {
                let mut e = vec![0; n];
                e[k] = s;
                out.push(laurent::orbit_sum(&self.datum, self.right_ring(), &e)?);
            }
        }
        Ok(out)
    }
}

/// `f · I_n`
pub fn scalar_matrix(n: usize, f: &LaurentPoly) -> PolyMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.clone() } else { LaurentPoly::zero(f.rank()) }).collect())
        .collect()
}

/// Block substitution: the right action of the tensor product computed from
/// the two actions, `(M1 ⊗ M2)(g)[(a,k)][(b,v)] = M1(M2(g)[k][v])[a][b]`.
pub fn compose_actions(m1: &BSBimodule, m2: &BSBimodule, g: &LaurentPoly) -> Result<PolyMatrix, BimoduleError> {
    let outer = m2.right_act(g)?;
    let (r1, r2) = (m1.rank(), m2.rank());
    let mut out = vec![vec![LaurentPoly::zero(g.rank()); r1 * r2]; r1 * r2];
    for k in 0..r2 {
        for v in 0..r2 {
            if outer[k][v].is_zero() {
                continue;
            }
            let block = m1.right_act(&outer[k][v])?;
            for a in 0..r1 {
                for b in 0..r1 {
                    out[a * r2 + k][b * r2 + v] = block[a][b].clone();
                }
            }
        }
    }
    Ok(out)
}

/// `Σ γ(f)` over the distinct images of `f` under the group generated by
/// `gammas`.
pub fn symmetrize(f: &LaurentPoly, gammas: &[DiagramAutomorphism]) -> Result<LaurentPoly, BimoduleError> {
    let mut images = vec![f.clone()];
    let mut frontier = vec![f.clone()];
    while let Some(x) = frontier.pop() {
        for g in gammas {
            let y = x.act_automorphism(g)?;
            if !images.contains(&y) {
                images.push(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(images.iter().fold(LaurentPoly::zero(f.rank()), |acc, x| &acc + x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: i64) -> LaurentPoly {
        LaurentPoly::monomial(vec![k])
    }

    fn seq(d: &RootDatum, ps: &[&[usize]]) -> BSSequence {
        BSSequence::untwisted(d, ps.iter().map(|p| Parabolic::new(p.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn a1_one_step() {
        let d = RootDatum::standard("A1").unwrap();
        let m = BSBimodule::build(&d, &seq(&d, &[&[], &[0], &[]])).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.basis_element(&[1]), vec![t(-1)]);
        let a = m.right_act(&t(1)).unwrap();
        let c = &t(1) + &t(-1);
        assert_eq!(*a, vec![vec![c.clone(), t(0)], vec![-t(0), LaurentPoly::zero(1)]]);
        assert_eq!(*m.right_act(&c).unwrap(), scalar_matrix(2, &c));
        assert_eq!(*m.right_act(&t(0)).unwrap(), scalar_matrix(2, &t(0)));
        assert!(BSBimodule::build(&d, &seq(&d, &[&[0], &[0], &[]])).unwrap().right_act(&t(1)).is_ok());
        assert_eq!(m.cached_actions(), 3);
    }

    #[test]
    fn ranks() {
        let d = RootDatum::standard("A2").unwrap();
        assert_eq!(BSBimodule::build(&d, &seq(&d, &[&[], &[0], &[], &[1], &[]])).unwrap().rank(), 4);
        assert_eq!(BSBimodule::build(&d, &seq(&d, &[&[], &[0, 1], &[]])).unwrap().rank(), 6);
        assert_eq!(BSBimodule::identity(&d, &Parabolic::new([0])).unwrap().rank(), 1);
    }

    #[test]
    fn twist_swaps() {
        let d = RootDatum::standard("A2").unwrap();
        let g = d.validate_automorphism(&[vec![0, 1], vec![1, 0]]).unwrap();
        let m = BSBimodule::twist(&d, &g).unwrap();
        let a = m.right_act(&LaurentPoly::monomial(vec![1, 0])).unwrap();
        assert_eq!(*a, vec![vec![LaurentPoly::monomial(vec![0, 1])]]);
        let mm = m.concat(&m).unwrap();
        let f = LaurentPoly::parse("3*x^[2,-1] + 1*x^[0,1]", 2).unwrap();
        assert_eq!(*mm.right_act(&f).unwrap(), vec![vec![f]]);
        assert!(mm.total_twist().is_identity());
    }

    #[test]
    fn rejected_twist() {
        let d = RootDatum::standard("A2").unwrap();
        let g = d.validate_automorphism(&[vec![0, 1], vec![1, 0]]).unwrap();
        let ps = vec![Parabolic::empty(), Parabolic::new([0]), Parabolic::empty()];
        assert!(matches!(
            BSSequence::new(&d, ps, vec![g]),
            Err(BimoduleError::UnsupportedTwist { step: 0, .. })
        ));
    }

    #[test]
    fn concat_agrees_with_composition() {
        let d = RootDatum::standard("A2").unwrap();
        let m1 = BSBimodule::build(&d, &seq(&d, &[&[], &[0], &[]])).unwrap();
        let m2 = BSBimodule::build(&d, &seq(&d, &[&[], &[1], &[]])).unwrap();
        let m = m1.concat(&m2).unwrap();
        let f = LaurentPoly::parse("1*x^[1,0] + 2*x^[-1,1]", 2).unwrap();
        assert_eq!(*m.right_act(&f).unwrap(), compose_actions(&m1, &m2, &f).unwrap());
        let built = BSBimodule::build(&d, &seq(&d, &[&[], &[0], &[], &[1], &[]])).unwrap();
        assert_eq!(*built.right_act(&f).unwrap(), *m.right_act(&f).unwrap());
    }
}
