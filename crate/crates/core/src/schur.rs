//! The Schur algebroid at `q = 1`: double-coset indicators `Σ_{u ∈ W_J w W_K} u`
//! in `Z[W]` and their convolution, normalized by `|W_K|`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::bimodule::BSSequence;
use crate::linalg::IntMatrix;
use crate::rootdata::{Parabolic, RootDatum};
use crate::weyl::{self, WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchurError {
    #[error("the ambient Weyl group is infinite")]
    AmbientInfinite,
    #[error("middle parabolics differ: {left} vs {right}")]
    MiddleMismatch { left: Parabolic, right: Parabolic },
    #[error("coefficient {coeff} at {element} is not divisible by {divisor}")]
    NotDivisible { element: String, coeff: i64, divisor: i64 },
    #[error("{0} is not a minimal double coset representative")]
    NotMinimal(String),
    #[error("group algebra element is not constant on the double coset of {0}")]
    NotBiInvariant(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// A finite formal sum `Σ c_w w` in `Z[W]`.
pub type GroupSum = BTreeMap<WeylElement, i64>;

fn check_ambient(d: &RootDatum) -> Result<(), SchurError> {
    if d.is_finite_type(&d.full()) {
        Ok(())
    } else {
        Err(SchurError::AmbientInfinite)
    }
}

/// `Σ_{u ∈ W_J w W_K} u`
pub fn indicator(d: &RootDatum, j: &Parabolic, k: &Parabolic, w: &WeylElement) -> Result<GroupSum, SchurError> {
    check_ambient(d)?;
    Ok(weyl::double_coset_elements(d, j, w, k)?.into_iter().map(|u| (u, 1)).collect())
}

/// Product in `Z[W]`.
pub fn group_mul(d: &RootDatum, a: &GroupSum, b: &GroupSum) -> GroupSum {
    let mut out = GroupSum::new();
    for (x, cx) in a {
        for (y, cy) in b {
            *out.entry(x.mul(d, y)).or_insert(0) += cx * cy;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A `Z`-combination of `(J, K)` double-coset indicators keyed by minimal
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCombination {
    pub left: Parabolic,
    pub right: Parabolic,
    coeffs: BTreeMap<WeylElement, i64>,
}

impl CosetCombination {
    pub fn zero(left: Parabolic, right: Parabolic) -> Self {
        CosetCombination { left, right, coeffs: BTreeMap::new() }
    }

    /// The indicator of `W_J w W_K`; `w` is replaced by its minimal
    /// representative.
    pub fn basis(d: &RootDatum, left: &Parabolic, right: &Parabolic, w: &WeylElement) -> Self {
        let rep = weyl::min_double_coset_rep(d, w, left, right);
        CosetCombination { left: left.clone(), right: right.clone(), coeffs: BTreeMap::from([(rep, 1)]) }
    }

    /// The unit of `(J, J)`: the indicator of `W_J`.
    pub fn unit(d: &RootDatum, j: &Parabolic) -> Self {
        CosetCombination::basis(d, j, j, &WeylElement::identity(d))
    }

    pub fn from_coeffs(d: &RootDatum, left: Parabolic, right: Parabolic, coeffs: impl IntoIterator<Item = (WeylElement, i64)>) -> Result<Self, SchurError> {
        let mut out = CosetCombination::zero(left, right);
        for (w, c) in coeffs {
            if !weyl::is_min_coset_rep(d, &w, &out.left, &out.right) {
                return Err(SchurError::NotMinimal(w.to_string()));
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, w: WeylElement, c: i64) {
        let e = self.coeffs.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.retain(|_, c| *c != 0);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<WeylElement, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, w: &WeylElement) -> i64 {
        self.coeffs.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &CosetCombination) -> Result<CosetCombination, SchurError> {
        if self.left != other.left || self.right != other.right {
            return Err(SchurError::MiddleMismatch { left: self.right.clone(), right: other.right.clone() });
        }
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> CosetCombination {
        let mut out = CosetCombination::zero(self.left.clone(), self.right.clone());
        if k != 0 {
            out.coeffs = self.coeffs.iter().map(|(w, c)| (w.clone(), c * k)).collect();
        }
        out
    }

    /// The element of `Z[W]` this combination stands for.
    pub fn expand(&self, d: &RootDatum) -> Result<GroupSum, SchurError> {
        let mut out = GroupSum::new();
        for (w, c) in &self.coeffs {
            for (u, _) in indicator(d, &self.left, &self.right, w)? {
                *out.entry(u).or_insert(0) += c;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Re-collects a `(W_J, W_K)`-bi-invariant element of `Z[W]`.
    pub fn collect(d: &RootDatum, left: &Parabolic, right: &Parabolic, x: &GroupSum) -> Result<Self, SchurError> {
        let mut out = CosetCombination::zero(left.clone(), right.clone());
        let mut seen: HashMap<WeylElement, i64> = HashMap::new();
        for (u, c) in x {
            let rep = weyl::min_double_coset_rep(d, u, left, right);
            match seen.get(&rep) {
                Some(prev) if prev != c => return Err(SchurError::NotBiInvariant(rep.to_string())),
                Some(_) => {}
                None => {
                    seen.insert(rep.clone(), *c);
                }
            }
        }
        for (rep, c) in seen {
            let size = weyl::double_coset_elements(d, left, &rep, right)?.len();
            let present = x
                .keys()
                .filter(|u| weyl::min_double_coset_rep(d, u, left, right) == rep)
                .count();
            if present != size {
                return Err(SchurError::NotBiInvariant(rep.to_string()));
            }
            out.add_term(rep, c);
        }
        Ok(out)
    }
}

/// A finite Weyl group as an explicit multiplication table, with memoized
/// double-coset classes.
pub struct SchurContext {
    elements: Vec<WeylElement>,
    index: HashMap<IntMatrix, usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    simples: Vec<usize>,
    classes: Mutex<HashMap<(Parabolic, Parabolic), Arc<Vec<usize>>>>,
}

impl SchurContext {
    pub fn new(d: &RootDatum) -> Result<Self, SchurError> {
        check_ambient(d)?;
        let elements = weyl::enumerate(d, &d.full(), usize::MAX).elements;
        let index: HashMap<IntMatrix, usize> = elements.iter().enumerate().map(|(i, w)| (w.action().clone(), i)).collect();
        let table = elements
            .iter()
            .map(|x| elements.iter().map(|y| index[&x.action().mul(y.action())]).collect())
            .collect();
        let inverse = elements.iter().map(|x| index[x.inverse_action()]).collect();
        let simples = (0..d.num_simple()).map(|i| index[d.reflection_matrix(i)]).collect();
        Ok(SchurContext { elements, index, table, inverse, simples, classes: Mutex::new(HashMap::new()) })
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[w.action()]
    }

    /// For every element, the index of the minimal element of its
    /// `(J, K)` double coset.
    pub fn classes(&self, j: &Parabolic, k: &Parabolic) -> Arc<Vec<usize>> {
        let key = (j.clone(), k.clone());
        if let Some(c) = self.classes.lock().expect("poisoned").get(&key) {
            return c.clone();
        }
        let n = self.elements.len();
        let mut class = vec![usize::MAX; n];
        // elements are sorted by length, so the first unvisited one is minimal
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            class[start] = start;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let left = j.indices().iter().map(|&i| self.table[self.simples[i]][x]);
                let right = k.indices().iter().map(|&i| self.table[x][self.simples[i]]);
                for y in left.chain(right).collect::<Vec<_>>() {
                    if class[y] == usize::MAX {
                        class[y] = start;
                        stack.push(y);
                    }
                }
            }
        }
        let class = Arc::new(class);
        self.classes.lock().expect("poisoned").insert(key, class.clone());
        class
    }

    /// Minimal `(J, K)` representatives, sorted.
    pub fn reps(&self, j: &Parabolic, k: &Parabolic) -> Vec<WeylElement> {
        let class = self.classes(j, k);
        (0..self.elements.len()).filter(|&x| class[x] == x).map(|x| self.elements[x].clone()).collect()
    }

    pub fn order(&self, j: &Parabolic) -> usize {
        let class = self.classes(j, &Parabolic::empty());
        class.iter().filter(|&&c| c == 0).count()
    }

    /// `(1/|W_K|) · a · b` for `a` over `(J, K)` and `b` over `(K, L)`.
    ///
    /// The coefficient of the `(J, L)` coset of `r` in `[JpK]·[KqL]` is
    /// `#{x ∈ W_J p W_K : x^{-1} r ∈ W_K q W_L}`.
    pub fn convolve(&self, a: &CosetCombination, b: &CosetCombination) -> Result<CosetCombination, SchurError> {
        if a.right != b.left {
            return Err(SchurError::MiddleMismatch { left: a.right.clone(), right: b.left.clone() });
        }
        let (j, k, l) = (&a.left, &a.right, &b.right);
        let order = self.order(k) as i64;
        let (jk, kl, jl) = (self.classes(j, k), self.classes(k, l), self.classes(j, l));
        let n = self.elements.len();
        let reps: Vec<usize> = (0..n).filter(|&r| jl[r] == r).collect();
        let mut out = CosetCombination::zero(j.clone(), l.clone());
        for (p, cp) in &a.coeffs {
            let pi = self.index_of(p);
            let members: Vec<usize> = (0..n).filter(|&x| jk[x] == pi).collect();
            for (q, cq) in &b.coeffs {
                let qi = self.index_of(q);
                for &r in &reps {
                    let count = members.iter().filter(|&&x| kl[self.table[self.inverse[x]][r]] == qi).count() as i64;
                    if count == 0 {
                        continue;
                    }
                    if count % order != 0 {
                        return Err(SchurError::NotDivisible { element: self.elements[r].to_string(), coeff: count, divisor: order });
                    }
                    out.add_term(self.elements[r].clone(), cp * cq * (count / order));
                }
            }
        }
        Ok(out)
    }
}

/// `(1/|W_K|) · a · b`; see [`SchurContext::convolve`].
pub fn convolve(d: &RootDatum, a: &CosetCombination, b: &CosetCombination) -> Result<CosetCombination, SchurError> {
    SchurContext::new(d)?.convolve(a, b)
}

/// `∏ |W_{Q(i)} / W_{P(i+1)}|`, counting cosets of enumerated group elements.
pub fn rank_oracle(d: &RootDatum, seq: &BSSequence) -> Result<usize, SchurError> {
    check_ambient(d)?;
    let mut r = 1;
    for i in 0..seq.num_steps() {
        let elements = weyl::enumerate(d, seq.q(i), usize::MAX).elements;
        let p = seq.p(i + 1);
        let mut cosets: Vec<WeylElement> = elements
            .iter()
            .map(|x| weyl::min_double_coset_rep(d, x, &Parabolic::empty(), p))
            .collect();
        cosets.sort();
        cosets.dedup();
        r *= cosets.len();
    }
    Ok(r)
}
