//! Free-module bases of `R^{W_J}` over `R^{W_{J'}}` (Pittie-Steinberg), the
//! Demazure pairing, dual bases, and coordinates.
//!
//! For `J ⊆ J'` the pushforward `R^{W_J} → R^{W_{J'}}` is the Demazure
//! operator of the minimal representative of `w_0(J') W_J`, and the pairing is
//! `(f, g) = push(f g)`. A [`RelativeBasis`] is only ever handed out after its
//! Gram determinant has been confirmed to be a unit `±e^μ`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::laurent::{self, LaurentError, LaurentPoly};
use crate::polymat::{self, PolyMatrix};
use crate::rootdata::{Parabolic, RootDatum, RootDatumError};
use crate::weyl::{self, WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteinbergError {
    #[error("{sub} is not contained in {sup}")]
    NotContained { sub: Parabolic, sup: Parabolic },
    #[error("element is not invariant under {0}")]
    NotInvariant(Parabolic),
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("no basis of R^W{sub} over R^W{sup} found within budget")]
    NoBasisFound { sub: Parabolic, sup: Parabolic },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// A unit `sign · e^exponent` of `Z[X]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    pub sign: i32,
    pub exponent: Vec<i64>,
}

impl Unit {
    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::term(BigInt::from(self.sign), self.exponent.clone())
    }
}

/// The pushforward from `R^{W_sub}` to `R^{W_sup}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    sub: Parabolic,
    sup: Parabolic,
    word: Vec<usize>,
}

impl Pushforward {
    pub fn new(d: &RootDatum, sub: &Parabolic, sup: &Parabolic) -> Result<Self, SteinbergError> {
        if !sub.is_subset(sup) {
            return Err(SteinbergError::NotContained { sub: sub.clone(), sup: sup.clone() });
        }
        d.check_finite(sup)?;
        let w0 = weyl::longest_element(d, sup)?;
        let rep = weyl::min_double_coset_rep(d, &w0, &Parabolic::empty(), sub);
        Ok(Pushforward { sub: sub.clone(), sup: sup.clone(), word: rep.word().to_vec() })
    }

    /// Reduced word of the minimal representative of `w_0(sup) W_sub`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn apply(&self, d: &RootDatum, f: &LaurentPoly) -> Result<LaurentPoly, SteinbergError> {
        if !f.is_invariant(d, &self.sub) {
            return Err(SteinbergError::NotInvariant(self.sub.clone()));
        }
        self.apply_unchecked(d, f)
    }

    fn apply_unchecked(&self, d: &RootDatum, f: &LaurentPoly) -> Result<LaurentPoly, SteinbergError> {
        Ok(self
            .word
            .iter()
            .rev()
            .try_fold(f.clone(), |acc, &i| laurent::demazure_step(d, i, &acc))?)
    }
}

/// Pushforward of a `W_sub`-invariant `f` to `R^{W_sup}`.
pub fn relative_pushforward(d: &RootDatum, sub: &Parabolic, sup: &Parabolic, f: &LaurentPoly) -> Result<LaurentPoly, SteinbergError> {
    Pushforward::new(d, sub, sup)?.apply(d, f)
}

/// `(f, g) = push_{sub → sup}(f g)`; `f g` must be `W_sub`-invariant.
pub fn pairing(d: &RootDatum, sub: &Parabolic, sup: &Parabolic, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, SteinbergError> {
    relative_pushforward(d, sub, sup, &f.checked_mul(g)?)
}

#[derive(Clone, Debug)]
pub struct RelativeBasis {
    pub sub: Parabolic,
    pub sup: Parabolic,
    /// Minimal representatives of `W_sub \ W_sup`, indexing the basis.
    pub reps: Vec<WeylElement>,
    pub basis: Vec<LaurentPoly>,
    pub gram: PolyMatrix,
    pub dual: Vec<LaurentPoly>,
    pub unit: Unit,
    /// Which construction produced the basis.
    pub strategy: String,
    push: Pushforward,
}

impl RelativeBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn pushforward(&self) -> &Pushforward {
        &self.push
    }

    /// `(f, g)` over this pair, without re-deriving the pushforward.
    pub fn pair(&self, d: &RootDatum, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, SteinbergError> {
        self.push.apply_unchecked(d, &(f * g))
    }
}

/// Search knobs for [`steinberg_basis_with`].
#[derive(Clone, Debug)]
pub struct BasisOptions {
    /// Box `[-r, r]^rank` of weights whose orbit sums feed the fallback search.
    pub search_radius: i64,
    /// Maximum number of determinant evaluations in the fallback search.
    pub search_budget: usize,
    /// Skip the closed-form candidates and go straight to the search.
    pub search_only: bool,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions { search_radius: 2, search_budget: 20_000, search_only: false }
    }
}

/// [`steinberg_basis_with`] under default options, memoized per process.
pub fn steinberg_basis(d: &RootDatum, sub: &Parabolic, sup: &Parabolic) -> Result<RelativeBasis, SteinbergError> {
    static MEMO: OnceLock<Mutex<HashMap<String, RelativeBasis>>> = OnceLock::new();
    let key = format!("{:?}|{sub}|{sup}", d.raw());
    let memo = MEMO.get_or_init(Default::default);
    if let Some(rb) = memo.lock().expect("memo poisoned").get(&key) {
        return Ok(rb.clone());
    }
    let rb = steinberg_basis_with(d, sub, sup, &BasisOptions::default())?;
    memo.lock().expect("memo poisoned").insert(key, rb.clone());
    Ok(rb)
}

/// A verified basis of `R^{W_sub}` over `R^{W_sup}`.
///
/// Candidates `v(e^{ρ_v})`, `ρ_v = Σ{ω_α : α ∈ sup, vα < 0}`, projected to
/// `W_sub`-invariants, are tried first, then the same with negated weights,
/// then the transposed variant `v^{-1}(e^{ρ'_v})`, `ρ'_v = Σ{ω_α : v^{-1}α < 0}`.
/// If none verifies, orbit sums are searched.
pub fn steinberg_basis_with(d: &RootDatum, sub: &Parabolic, sup: &Parabolic, opts: &BasisOptions) -> Result<RelativeBasis, SteinbergError> {
    let push = Pushforward::new(d, sub, sup)?;
    let reps = weyl::min_left_coset_reps(d, sub, sup)?;
    if !opts.search_only {
        let omegas = d.fundamental_weights(sup)?;
        let project = Pushforward::new(d, &Parabolic::empty(), sub)?;
        for (name, transposed, sign) in [
            ("steinberg", false, 1),
            ("steinberg-negated", false, -1),
            ("steinberg-transposed", true, 1),
        ] {
            let mut basis = Vec::with_capacity(reps.len());
            for v in &reps {
                let v = if transposed { v.inverse(d) } else { v.clone() };
                let mut rho = vec![0i64; d.rank()];
                for (k, &a) in sup.indices().iter().enumerate() {
                    if v.is_right_descent(d, a) {
                        for (r, w) in rho.iter_mut().zip(&omegas[k]) {
                            *r += sign * w;
                        }
                    }
                }
                let raw = LaurentPoly::monomial(v.apply(&rho));
                basis.push(project.apply_unchecked(d, &raw)?);
            }
            if let Ok(rb) = assemble(d, sub, sup, &reps, basis, &push, name) {
                return Ok(rb);
            }
        }
    }
    search_basis(d, sub, sup, &reps, &push, opts)
}

/// Computes Gram matrix, unit determinant and dual basis, or explains why the
/// candidates do not form a basis.
fn assemble(
    d: &RootDatum,
    sub: &Parabolic,
    sup: &Parabolic,
    reps: &[WeylElement],
    basis: Vec<LaurentPoly>,
    push: &Pushforward,
    strategy: &str,
) -> Result<RelativeBasis, SteinbergError> {
    if basis.len() != reps.len() {
        return Err(SteinbergError::NotABasis(format!("{} elements, expected {}", basis.len(), reps.len())));
    }
    if let Some(k) = basis.iter().position(|b| !b.is_invariant(d, sub)) {
        let _ = k;
        return Err(SteinbergError::NotInvariant(sub.clone()));
    }
    let gram = gram_matrix(d, push, &basis)?;
    let (unit, inverse) = invert_unimodular(&gram, d.rank(), d, sup)?;
    let dual = polymat::mul_vec(&inverse, &basis, d.rank());
    Ok(RelativeBasis {
        sub: sub.clone(),
        sup: sup.clone(),
        reps: reps.to_vec(),
        basis,
        gram,
        dual,
        unit,
        strategy: strategy.to_string(),
        push: push.clone(),
    })
}

fn gram_matrix(d: &RootDatum, push: &Pushforward, basis: &[LaurentPoly]) -> Result<PolyMatrix, SteinbergError> {
    let n = basis.len();
    let mut gram = vec![vec![LaurentPoly::zero(d.rank()); n]; n];
    for i in 0..n {
        for j in i..n {
            let g = push.apply_unchecked(d, &(&basis[i] * &basis[j]))?;
            gram[j][i] = g.clone();
            gram[i][j] = g;
        }
    }
    Ok(gram)
}

/// Determinant as a unit of `R^{W_sup}` plus the exact inverse matrix.
fn invert_unimodular(gram: &PolyMatrix, rank: usize, d: &RootDatum, sup: &Parabolic) -> Result<(Unit, PolyMatrix), SteinbergError> {
    let n = gram.len();
    let (det, adj) = polymat::bareiss_solve(gram, &polymat::identity(n, rank), rank)?;
    let unit = unit_of(d, sup, &det)?;
    let adj = adj.expect("nonzero determinant");
    let unit_poly = unit.to_poly();
    let inverse = adj
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.div_exact(&unit_poly)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<PolyMatrix, _>>()?;
    Ok((unit, inverse))
}

fn unit_of(d: &RootDatum, sup: &Parabolic, det: &LaurentPoly) -> Result<Unit, SteinbergError> {
    match det.as_signed_monomial() {
        Some((sign, exponent)) if d.is_fixed(sup, &exponent) => Ok(Unit { sign, exponent }),
        Some((_, exponent)) => Err(SteinbergError::NotABasis(format!(
            "Gram determinant e^{exponent:?} is not W{sup}-invariant"
        ))),
        None => Err(SteinbergError::NotABasis(format!("Gram determinant {det} is not a unit"))),
    }
}

fn search_basis(
    d: &RootDatum,
    sub: &Parabolic,
    sup: &Parabolic,
    reps: &[WeylElement],
    push: &Pushforward,
    opts: &BasisOptions,
) -> Result<RelativeBasis, SteinbergError> {
    let r = opts.search_radius;
    let mut weights: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..d.rank() {
        weights = weights
            .into_iter()
            .flat_map(|w| (-r..=r).map(move |x| w.iter().copied().chain([x]).collect::<Vec<i64>>()))
            .collect();
    }
    weights.sort_by_key(|w| (w.iter().map(|x| x.abs()).sum::<i64>(), w.clone()));
    let mut seen = BTreeSet::new();
    let mut candidates = Vec::new();
    for w in weights {
        let o = laurent::orbit_sum(d, sub, &w)?;
        if seen.insert(o.clone()) {
            candidates.push(o);
        }
    }
    let target = reps.len();
    let mut budget = opts.search_budget;
    let mut chosen: Vec<usize> = Vec::new();
    if let Some(basis) = extend(d, push, sup, &candidates, &mut chosen, target, &mut budget)? {
        return assemble(d, sub, sup, reps, basis, push, "search");
    }
    Err(SteinbergError::NoBasisFound { sub: sub.clone(), sup: sup.clone() })
}

/// Depth-first extension keeping every leading Gram minor nonzero.
fn extend(
    d: &RootDatum,
    push: &Pushforward,
    sup: &Parabolic,
    candidates: &[LaurentPoly],
    chosen: &mut Vec<usize>,
    target: usize,
    budget: &mut usize,
) -> Result<Option<Vec<LaurentPoly>>, SteinbergError> {
    let start = chosen.last().map_or(0, |&k| k + 1);
    for k in start..candidates.len() {
        if *budget == 0 {
            return Ok(None);
        }
        *budget -= 1;
        chosen.push(k);
        let set: Vec<LaurentPoly> = chosen.iter().map(|&i| candidates[i].clone()).collect();
        let gram = gram_matrix(d, push, &set)?;
        let det = polymat::determinant(&gram, d.rank())?;
        let keep = if chosen.len() == target { unit_of(d, sup, &det).is_ok() } else { !det.is_zero() };
        if keep {
            if chosen.len() == target {
                return Ok(Some(set));
            }
            if let Some(found) = extend(d, push, sup, candidates, chosen, target, budget)? {
                return Ok(Some(found));
            }
        }
        chosen.pop();
    }
    Ok(None)
}

/// Re-derives everything from `basis` and checks it: invariance, unit Gram
/// determinant, dual basis and `(e_u, ê_v) = δ_uv`.
pub fn verify_basis(d: &RootDatum, rb: &RelativeBasis) -> Result<Unit, SteinbergError> {
    let push = Pushforward::new(d, &rb.sub, &rb.sup)?;
    let expected = weyl::min_left_coset_reps(d, &rb.sub, &rb.sup)?.len();
    if rb.basis.len() != expected {
        return Err(SteinbergError::NotABasis(format!("{} elements, rank is {}", rb.basis.len(), expected)));
    }
    for b in rb.basis.iter().chain(&rb.dual) {
        if !b.is_invariant(d, &rb.sub) {
            return Err(SteinbergError::NotInvariant(rb.sub.clone()));
        }
    }
    let gram = gram_matrix(d, &push, &rb.basis)?;
    if gram != rb.gram {
        return Err(SteinbergError::NotABasis("stored Gram matrix is stale".into()));
    }
    if gram.iter().flatten().any(|g| !g.is_invariant(d, &rb.sup)) {
        return Err(SteinbergError::NotInvariant(rb.sup.clone()));
    }
    let (unit, inverse) = invert_unimodular(&gram, d.rank(), d, &rb.sup)?;
    let dual = polymat::mul_vec(&inverse, &rb.basis, d.rank());
    if dual != rb.dual {
        return Err(SteinbergError::NotABasis("stored dual basis disagrees with the adjugate".into()));
    }
    for (u, e) in rb.basis.iter().enumerate() {
        for (v, f) in dual.iter().enumerate() {
            let p = push.apply_unchecked(d, &(e * f))?;
            let ok = if u == v { p.is_one() } else { p.is_zero() };
            if !ok {
                return Err(SteinbergError::NotABasis(format!("(e_{u}, ê_{v}) = {p}")));
            }
        }
    }
    Ok(unit)
}

/// Builds and verifies a relative basis from explicit candidates.
pub fn basis_from_candidates(d: &RootDatum, sub: &Parabolic, sup: &Parabolic, basis: Vec<LaurentPoly>) -> Result<RelativeBasis, SteinbergError> {
    let push = Pushforward::new(d, sub, sup)?;
    let reps = weyl::min_left_coset_reps(d, sub, sup)?;
    assemble(d, sub, sup, &reps, basis, &push, "explicit")
}

/// `ê = G^{-1} e`, recomputed.
pub fn dual_basis(d: &RootDatum, rb: &RelativeBasis) -> Result<Vec<LaurentPoly>, SteinbergError> {
    let gram = gram_matrix(d, &rb.push, &rb.basis)?;
    let (_, inverse) = invert_unimodular(&gram, d.rank(), d, &rb.sup)?;
    Ok(polymat::mul_vec(&inverse, &rb.basis, d.rank()))
}

/// Coefficients `c_v = (f, ê_v) ∈ R^{W_sup}` with `f = Σ c_v e_v`.
pub fn coordinates(d: &RootDatum, rb: &RelativeBasis, f: &LaurentPoly) -> Result<Vec<LaurentPoly>, SteinbergError> {
    if !f.is_invariant(d, &rb.sub) {
        return Err(SteinbergError::NotInvariant(rb.sub.clone()));
    }
    coordinates_unchecked(d, rb, f)
}

pub(crate) fn coordinates_unchecked(d: &RootDatum, rb: &RelativeBasis, f: &LaurentPoly) -> Result<Vec<LaurentPoly>, SteinbergError> {
    rb.dual.iter().map(|e| rb.pair(d, f, e)).collect()
}

/// A random `W_J`-invariant: an integer combination of `W_J`-orbit sums whose
/// orbits lie inside `[-radius, radius]^rank`.
pub fn random_invariant<R: Rng>(d: &RootDatum, j: &Parabolic, rng: &mut R, radius: i64, n_orbits: usize) -> Result<LaurentPoly, SteinbergError> {
    let mut f = LaurentPoly::zero(d.rank());
    let mut added = 0;
    while added < n_orbits {
        let mu: Vec<i64> = (0..d.rank()).map(|_| rng.gen_range(-radius..=radius)).collect();
        let orbit = laurent::orbit_sum(d, j, &mu)?;
        if orbit.terms().any(|(e, _)| e.iter().any(|x| x.abs() > radius)) {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        f = &f + &orbit.scale(&c);
        added += 1;
    }
    Ok(f)
}
