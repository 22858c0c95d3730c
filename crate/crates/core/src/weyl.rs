//! Weyl group elements acting on the lattice, and the coset combinatorics of
//! parabolic subgroups.
//!
//! An element is identified by its action matrix on `X`; the stored word is
//! the lexicographically least reduced word, obtained by always stripping the
//! smallest left descent first.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::rootdata::{DiagramAutomorphism, Parabolic, RootDatum, RootDatumError, RootSign};

/// Upper bound on descent-stripping steps before a matrix is declared to lie
/// outside the Weyl group.
pub const DEFAULT_WORD_BOUND: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("matrix is not in the Weyl group (descent stripping stopped at length {0})")]
    NotInGroup(usize),
    #[error("simple reflection index {0} out of range")]
    InvalidIndex(usize),
    #[error("parabolic {sub} is not contained in {sup}")]
    NotContained { sub: Parabolic, sup: Parabolic },
    #[error("element is not a minimal ({left}, {right}) double coset representative")]
    NotMinimal { left: Parabolic, right: Parabolic },
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    action: IntMatrix,
    inverse: IntMatrix,
    word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorted by length, then by reduced word.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.action.cmp(&other.action))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for (k, i) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "s{}", i + 1)?;
        }
        Ok(())
    }
}

/// Lexicographically least reduced word of the element whose inverse is
/// `inverse`.
fn canonical_word(d: &RootDatum, inverse: &IntMatrix, bound: usize) -> Result<Vec<usize>, WeylError> {
    let mut cur = inverse.clone();
    let mut word = Vec::new();
    loop {
        let descent = (0..d.num_simple()).find(|&i| d.root_sign(&cur.apply(d.simple_root(i))) == RootSign::Negative);
        match descent {
            Some(i) => {
                word.push(i);
                cur = cur.mul(d.reflection_matrix(i));
                if word.len() > bound {
                    return Err(WeylError::NotInGroup(word.len()));
                }
            }
            None => break,
        }
    }
    if cur.is_identity() {
        Ok(word)
    } else {
        Err(WeylError::NotInGroup(word.len()))
    }
}

fn word_matrix(d: &RootDatum, word: impl Iterator<Item = usize>) -> IntMatrix {
    word.fold(IntMatrix::identity(d.rank()), |acc, i| acc.mul(d.reflection_matrix(i)))
}

impl WeylElement {
    pub fn identity(d: &RootDatum) -> Self {
        WeylElement {
            action: IntMatrix::identity(d.rank()),
            inverse: IntMatrix::identity(d.rank()),
            word: Vec::new(),
        }
    }

    pub fn simple(d: &RootDatum, i: usize) -> Result<Self, WeylError> {
        Self::from_word(d, &[i])
    }

    /// The product `s_{w_1} ⋯ s_{w_k}`; the word need not be reduced.
    pub fn from_word(d: &RootDatum, word: &[usize]) -> Result<Self, WeylError> {
        if let Some(&i) = word.iter().find(|&&i| i >= d.num_simple()) {
            return Err(WeylError::InvalidIndex(i));
        }
        let action = word_matrix(d, word.iter().copied());
        let inverse = word_matrix(d, word.iter().rev().copied());
        let word = canonical_word(d, &inverse, DEFAULT_WORD_BOUND)?;
        Ok(WeylElement { action, inverse, word })
    }

    /// Recognizes a lattice automorphism as a Weyl group element.
    pub fn from_matrix(d: &RootDatum, m: &IntMatrix, bound: usize) -> Result<Self, WeylError> {
        if m.dim() != d.rank() {
            return Err(WeylError::NotInGroup(0));
        }
        let inverse = m.inverse().ok_or(WeylError::NotInGroup(0))?;
        let word = canonical_word(d, &inverse, bound)?;
        Ok(WeylElement { action: m.clone(), inverse, word })
    }

    fn from_parts(d: &RootDatum, action: IntMatrix, inverse: IntMatrix) -> Self {
        let word = canonical_word(d, &inverse, DEFAULT_WORD_BOUND).expect("product of Weyl elements");
        WeylElement { action, inverse, word }
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn inverse_action(&self) -> &IntMatrix {
        &self.inverse
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, lambda: &[i64]) -> Vec<i64> {
        self.action.apply(lambda)
    }

    pub fn apply_inverse(&self, lambda: &[i64]) -> Vec<i64> {
        self.inverse.apply(lambda)
    }

    pub fn mul(&self, d: &RootDatum, other: &WeylElement) -> WeylElement {
        WeylElement::from_parts(d, self.action.mul(&other.action), other.inverse.mul(&self.inverse))
    }

    pub fn inverse(&self, d: &RootDatum) -> WeylElement {
        WeylElement::from_parts(d, self.inverse.clone(), self.action.clone())
    }

    /// `s_i w`
    pub fn left_mul_simple(&self, d: &RootDatum, i: usize) -> WeylElement {
        let s = d.reflection_matrix(i);
        WeylElement::from_parts(d, s.mul(&self.action), self.inverse.mul(s))
    }

    /// `w s_i`
    pub fn right_mul_simple(&self, d: &RootDatum, i: usize) -> WeylElement {
        let s = d.reflection_matrix(i);
        WeylElement::from_parts(d, self.action.mul(s), s.mul(&self.inverse))
    }

    /// `ℓ(s_i w) < ℓ(w)`, i.e. `w^{-1}(α_i) < 0`.
    pub fn is_left_descent(&self, d: &RootDatum, i: usize) -> bool {
        d.root_sign(&self.inverse.apply(d.simple_root(i))) == RootSign::Negative
    }

    /// `ℓ(w s_i) < ℓ(w)`, i.e. `w(α_i) < 0`.
    pub fn is_right_descent(&self, d: &RootDatum, i: usize) -> bool {
        d.root_sign(&self.action.apply(d.simple_root(i))) == RootSign::Negative
    }
}

/// `s_i(λ) = λ - ⟨λ, α_i^∨⟩ α_i`
pub fn reflect(d: &RootDatum, i: usize, lambda: &[i64]) -> Vec<i64> {
    let p = d.pairing(lambda, i);
    lambda.iter().zip(d.simple_root(i)).map(|(l, a)| l - p * a).collect()
}

/// Length and canonical reduced word of a matrix in `W`.
pub fn length_and_reduced_word(d: &RootDatum, m: &IntMatrix) -> Result<(usize, Vec<usize>), WeylError> {
    let w = WeylElement::from_matrix(d, m, DEFAULT_WORD_BOUND)?;
    Ok((w.length(), w.word))
}

/// Elements of `W_J` up to a length bound.
#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted by length, then word.
    pub elements: Vec<WeylElement>,
    /// True when the group was exhausted before reaching the bound.
    pub complete: bool,
}

/// Breadth-first enumeration of `W_J` by length, deduplicated by action.
pub fn enumerate(d: &RootDatum, j: &Parabolic, max_len: usize) -> Enumeration {
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let id = WeylElement::identity(d);
    seen.insert(id.action.clone());
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    let mut len = 0;
    while !frontier.is_empty() && len < max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &i in j.indices() {
                if w.is_right_descent(d, i) {
                    continue;
                }
                let action = w.action.mul(d.reflection_matrix(i));
                if seen.insert(action.clone()) {
                    let inverse = d.reflection_matrix(i).mul(&w.inverse);
                    next.push(WeylElement::from_parts(d, action, inverse));
                }
            }
        }
        next.sort();
        elements.extend(next.iter().cloned());
        frontier = next;
        len += 1;
    }
    // the bound was reached with a nonempty frontier: check whether it grows
    let complete = frontier.is_empty()
        || frontier
            .iter()
            .all(|w| j.indices().iter().all(|&i| w.is_right_descent(d, i)));
    elements.sort();
    Enumeration { elements, complete }
}

/// `|W_J|` for finite-type `J`.
pub fn parabolic_order(d: &RootDatum, j: &Parabolic) -> Result<usize, WeylError> {
    d.check_finite(j)?;
    Ok(enumerate(d, j, usize::MAX).elements.len())
}

/// The longest element `w_0(J)` of a finite parabolic subgroup.
pub fn longest_element(d: &RootDatum, j: &Parabolic) -> Result<WeylElement, WeylError> {
    d.check_finite(j)?;
    let mut w = WeylElement::identity(d);
    while let Some(&i) = j.indices().iter().find(|&&i| !w.is_right_descent(d, i)) {
        w = w.right_mul_simple(d, i);
    }
    Ok(w)
}

/// `w ∈ ^J W ∩ W^K`: `w^{-1}(α_j) > 0` for `j ∈ J` and `w(α_k) > 0` for `k ∈ K`.
pub fn is_min_coset_rep(d: &RootDatum, w: &WeylElement, j: &Parabolic, k: &Parabolic) -> bool {
    j.indices().iter().all(|&i| !w.is_left_descent(d, i)) && k.indices().iter().all(|&i| !w.is_right_descent(d, i))
}

/// Shortest element of `W_J w W_K`, by stripping left `J`-descents and right
/// `K`-descents until none remain.
pub fn min_double_coset_rep(d: &RootDatum, w: &WeylElement, j: &Parabolic, k: &Parabolic) -> WeylElement {
    let mut cur = w.clone();
    loop {
        if let Some(&i) = j.indices().iter().find(|&&i| cur.is_left_descent(d, i)) {
            cur = cur.left_mul_simple(d, i);
        } else if let Some(&i) = k.indices().iter().find(|&&i| cur.is_right_descent(d, i)) {
            cur = cur.right_mul_simple(d, i);
        } else {
            return cur;
        }
    }
}

/// Minimal double coset representatives `^J W^K`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub left: Parabolic,
    pub right: Parabolic,
    /// Sorted by length, then word.
    pub reps: Vec<WeylElement>,
    /// True when the ambient group is finite and fully enumerated.
    pub complete: bool,
}

pub fn double_coset_table(d: &RootDatum, j: &Parabolic, k: &Parabolic, max_len: usize) -> Result<CosetTable, WeylError> {
    d.check_indices(j)?;
    d.check_indices(k)?;
    let all = enumerate(d, &d.full(), max_len);
    let reps = all.elements.into_iter().filter(|w| is_min_coset_rep(d, w, j, k)).collect();
    Ok(CosetTable {
        left: j.clone(),
        right: k.clone(),
        reps,
        complete: all.complete && d.is_finite_type(&d.full()),
    })
}

/// All elements of the (finite) double coset `W_J w W_K`, sorted.
pub fn double_coset_elements(d: &RootDatum, j: &Parabolic, w: &WeylElement, k: &Parabolic) -> Result<Vec<WeylElement>, WeylError> {
    d.check_finite(j)?;
    d.check_finite(k)?;
    let left = enumerate(d, j, usize::MAX).elements;
    let right = enumerate(d, k, usize::MAX).elements;
    let mut seen: HashMap<IntMatrix, WeylElement> = HashMap::new();
    for u in &left {
        let uw = u.mul(d, w);
        for v in &right {
            let action = uw.action.mul(&v.action);
            if !seen.contains_key(&action) {
                let inverse = v.inverse.mul(&uw.inverse);
                seen.insert(action.clone(), WeylElement::from_parts(d, action, inverse));
            }
        }
    }
    let mut out: Vec<WeylElement> = seen.into_values().collect();
    out.sort();
    Ok(out)
}

/// Simple reflections of `W_J ∩ w W_K w^{-1}` for a minimal representative
/// `w`, together with a brute-force check that they generate the whole
/// intersection.
pub fn stabilizer_simples(d: &RootDatum, j: &Parabolic, k: &Parabolic, w: &WeylElement) -> Result<(Parabolic, bool), WeylError> {
    d.check_finite(j)?;
    d.check_finite(k)?;
    if !is_min_coset_rep(d, w, j, k) {
        return Err(WeylError::NotMinimal { left: j.clone(), right: k.clone() });
    }
    let k_roots: Vec<&[i64]> = k.indices().iter().map(|&i| d.simple_root(i)).collect();
    let s = Parabolic::new(
        j.indices()
            .iter()
            .copied()
            .filter(|&i| {
                let image = w.apply_inverse(d.simple_root(i));
                k_roots.contains(&image.as_slice())
            }),
    );
    let wj: HashSet<IntMatrix> = enumerate(d, j, usize::MAX).elements.into_iter().map(|x| x.action).collect();
    let conj: HashSet<IntMatrix> = enumerate(d, k, usize::MAX)
        .elements
        .iter()
        .map(|v| w.action.mul(&v.action).mul(&w.inverse))
        .collect();
    let intersection: HashSet<IntMatrix> = wj.intersection(&conj).cloned().collect();
    let generated: HashSet<IntMatrix> = enumerate(d, &s, usize::MAX).elements.into_iter().map(|x| x.action).collect();
    Ok((s, intersection == generated))
}

/// Elements of `W_{P'} w' W_{Q'}` that are minimal for `(P, Q)`, where
/// `P ⊆ P'` and `Q ⊆ Q'`.
pub fn coset_intersection_set(
    d: &RootDatum,
    p: &Parabolic,
    q: &Parabolic,
    p_big: &Parabolic,
    q_big: &Parabolic,
    w: &WeylElement,
) -> Result<Vec<WeylElement>, WeylError> {
    for (sub, sup) in [(p, p_big), (q, q_big)] {
        if !sub.is_subset(sup) {
            return Err(WeylError::NotContained { sub: sub.clone(), sup: sup.clone() });
        }
    }
    if !is_min_coset_rep(d, w, p_big, q_big) {
        return Err(WeylError::NotMinimal { left: p_big.clone(), right: q_big.clone() });
    }
    Ok(double_coset_elements(d, p_big, w, q_big)?
        .into_iter()
        .filter(|x| is_min_coset_rep(d, x, p, q))
        .collect())
}

/// `γ w γ^{-1}`
pub fn apply_automorphism(d: &RootDatum, gamma: &DiagramAutomorphism, w: &WeylElement) -> WeylElement {
    let g = gamma.matrix();
    let gi = gamma.inverse_matrix();
    WeylElement::from_parts(d, g.mul(&w.action).mul(gi), g.mul(&w.inverse).mul(gi))
}

/// Minimal representatives of the left cosets `W_J \ W_{J'}` (elements `v` of
/// `W_{J'}` with no left descent in `J`), sorted.
pub fn min_left_coset_reps(d: &RootDatum, sub: &Parabolic, sup: &Parabolic) -> Result<Vec<WeylElement>, WeylError> {
    if !sub.is_subset(sup) {
        return Err(WeylError::NotContained { sub: sub.clone(), sup: sup.clone() });
    }
    d.check_finite(sup)?;
    Ok(enumerate(d, sup, usize::MAX)
        .elements
        .into_iter()
        .filter(|v| is_min_coset_rep(d, v, sub, &Parabolic::empty()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> RootDatum {
        RootDatum::standard("A2").unwrap()
    }

    fn el(d: &RootDatum, w: &[usize]) -> WeylElement {
        WeylElement::from_word(d, w).unwrap()
    }

    #[test]
    fn reflect_examples() {
        let a1 = RootDatum::standard("A1").unwrap();
        assert_eq!(reflect(&a1, 0, &[1]), vec![-1]);
        let d = a2();
        assert_eq!(reflect(&d, 0, &[1, 0]), vec![-1, 1]);
        assert_eq!(reflect(&d, 0, &[0, 1]), vec![0, 1]);
    }

    #[test]
    fn reduced_words() {
        let d = a2();
        assert_eq!(length_and_reduced_word(&d, &IntMatrix::identity(2)).unwrap(), (0, vec![]));
        let w0 = el(&d, &[0, 1, 0]);
        assert_eq!(length_and_reduced_word(&d, w0.action()).unwrap(), (3, vec![0, 1, 0]));
        assert_eq!(el(&d, &[1, 0, 1]), w0);
        let x = el(&d, &[0, 1, 0, 1]);
        assert_eq!(length_and_reduced_word(&d, x.action()).unwrap(), (2, vec![1, 0]));
        // the diagram swap is not in W
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(length_and_reduced_word(&d, &swap), Err(WeylError::NotInGroup(_))));
        let scale = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(length_and_reduced_word(&d, &scale).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let d = a2();
        let e = enumerate(&d, &d.full(), 10);
        assert!(e.complete);
        let lengths: Vec<usize> = e.elements.iter().map(|w| w.length()).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
        let triv = enumerate(&d, &Parabolic::empty(), 10);
        assert_eq!(triv.elements.len(), 1);
        let aff = RootDatum::standard("affineA1").unwrap();
        let e = enumerate(&aff, &aff.full(), 4);
        assert_eq!(e.elements.len(), 9);
        assert!(!e.complete);
    }

    #[test]
    fn coset_rep_examples() {
        let d = a2();
        let (j0, none) = (Parabolic::new([0]), Parabolic::empty());
        assert!(is_min_coset_rep(&d, &WeylElement::identity(&d), &d.full(), &d.full()));
        assert!(!is_min_coset_rep(&d, &el(&d, &[0]), &j0, &none));
        assert!(is_min_coset_rep(&d, &el(&d, &[1]), &j0, &j0));
        assert_eq!(min_double_coset_rep(&d, &el(&d, &[0, 1, 0]), &j0, &j0), el(&d, &[1]));
        assert_eq!(min_double_coset_rep(&d, &el(&d, &[0]), &j0, &none), WeylElement::identity(&d));
        let s2 = el(&d, &[1]);
        assert_eq!(min_double_coset_rep(&d, &s2, &j0, &j0), s2);
    }

    #[test]
    fn coset_tables() {
        let d = a2();
        let j0 = Parabolic::new([0]);
        let t = double_coset_table(&d, &j0, &j0, 10).unwrap();
        assert!(t.complete);
        let words: Vec<Vec<usize>> = t.reps.iter().map(|w| w.word().to_vec()).collect();
        assert_eq!(words, vec![vec![], vec![1]]);
        let t = double_coset_table(&d, &d.full(), &d.full(), 10).unwrap();
        assert_eq!(t.reps.len(), 1);
        let t = double_coset_table(&d, &Parabolic::empty(), &Parabolic::empty(), 10).unwrap();
        assert_eq!(t.reps.len(), 6);
    }

    #[test]
    fn stabilizer_examples() {
        let d = a2();
        let j0 = Parabolic::new([0]);
        assert_eq!(stabilizer_simples(&d, &j0, &j0, &el(&d, &[1])).unwrap(), (Parabolic::empty(), true));
        let a3 = RootDatum::standard("A3").unwrap();
        let r = stabilizer_simples(&a3, &Parabolic::new([0, 1]), &Parabolic::new([1, 2]), &WeylElement::identity(&a3)).unwrap();
        assert_eq!(r, (Parabolic::new([1]), true));
        let r = stabilizer_simples(&d, &d.full(), &d.full(), &WeylElement::identity(&d)).unwrap();
        assert_eq!(r, (d.full(), true));
        assert!(stabilizer_simples(&d, &j0, &j0, &el(&d, &[0])).is_err());
    }

    #[test]
    fn intersection_examples() {
        let d = a2();
        let (none, j0) = (Parabolic::empty(), Parabolic::new([0]));
        let e = WeylElement::identity(&d);
        let r = coset_intersection_set(&d, &none, &none, &j0, &j0, &e).unwrap();
        assert_eq!(r, vec![e.clone(), el(&d, &[0])]);
        let r = coset_intersection_set(&d, &j0, &j0, &j0, &j0, &el(&d, &[1])).unwrap();
        assert_eq!(r, vec![el(&d, &[1])]);
        let r = coset_intersection_set(&d, &none, &j0, &j0, &j0, &e).unwrap();
        assert_eq!(r, vec![e]);
        assert!(coset_intersection_set(&d, &j0, &none, &none, &none, &el(&d, &[1])).is_err());
    }

    #[test]
    fn automorphism_conjugation() {
        let d = a2();
        let swap = d.validate_automorphism(&[vec![0, 1], vec![1, 0]]).unwrap();
        let id = DiagramAutomorphism::identity(&d);
        let w = el(&d, &[0, 1]);
        assert_eq!(apply_automorphism(&d, &id, &w), w);
        assert_eq!(apply_automorphism(&d, &swap, &el(&d, &[0])), el(&d, &[1]));
        assert_eq!(apply_automorphism(&d, &swap, &w), el(&d, &[1, 0]));
    }

    #[test]
    fn longest_elements() {
        let d = a2();
        assert_eq!(longest_element(&d, &d.full()).unwrap().length(), 3);
        let b2 = RootDatum::standard("B2").unwrap();
        assert_eq!(longest_element(&b2, &b2.full()).unwrap().length(), 4);
        let g2 = RootDatum::standard("G2").unwrap();
        assert_eq!(longest_element(&g2, &g2.full()).unwrap().length(), 6);
        let aff = RootDatum::standard("affineA1").unwrap();
        assert!(longest_element(&aff, &aff.full()).is_err());
    }
}
