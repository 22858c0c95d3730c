//! Exact arithmetic in the group ring `R = Z[X]`, the Weyl group action on it,
//! and K-theoretic Demazure operators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::rootdata::{DiagramAutomorphism, Parabolic, RootDatum, RootDatumError};
use crate::weyl::{self, WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("division is not exact")]
    DivisionNotExact,
    #[error("word {0:?} is not reduced")]
    WordNotReduced(Vec<usize>),
    #[error("weight {weight:?} is not dominant for {parabolic}")]
    NotDominant { weight: Vec<i64>, parabolic: Parabolic },
    #[error("polynomial is not invariant under {0}")]
    NotInvariant(Parabolic),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

type Exp = SmallVec<[i64; 4]>;

/// Integer coefficient, stored inline while it fits in an `i64`.
/// `Big` never holds a value that fits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coeff {
    Small(i64),
    Big(BigInt),
}

impl Coeff {
    fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(x) => Coeff::Small(x),
            None => Coeff::Big(b),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Coeff::Small(x) => BigInt::from(*x),
            Coeff::Big(b) => b.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0))
    }

    fn is_unit(&self) -> Option<i32> {
        match self {
            Coeff::Small(1) => Some(1),
            Coeff::Small(-1) => Some(-1),
            _ => None,
        }
    }

    fn add(&self, other: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let Some(x) = a.checked_add(*b) {
                return Coeff::Small(x);
            }
        }
        Coeff::from_big(self.to_big() + other.to_big())
    }

    fn mul(&self, other: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let Some(x) = a.checked_mul(*b) {
                return Coeff::Small(x);
            }
        }
        Coeff::from_big(self.to_big() * other.to_big())
    }

    fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(a) => a.checked_neg().map_or_else(|| Coeff::from_big(-BigInt::from(*a)), Coeff::Small),
            Coeff::Big(b) => Coeff::from_big(-b),
        }
    }

    /// `Some(self / other)` when the division is exact.
    fn div_exact(&self, other: &Coeff) -> Option<Coeff> {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let (Some(q), Some(r)) = (a.checked_div(*b), a.checked_rem(*b)) {
                return (r == 0).then_some(Coeff::Small(q));
            }
        }
        let (q, r) = self.to_big().div_rem(&other.to_big());
        r.is_zero().then(|| Coeff::from_big(q))
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(x) => write!(f, "{x}"),
            Coeff::Big(b) => write!(f, "{b}"),
        }
    }
}

/// Terms sorted by exponent, without zero coefficients. Sums are merges,
/// which beats a tree map for the small polynomials that dominate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Terms(Vec<(Exp, Coeff)>);

impl Terms {
    fn from_unsorted(mut v: Vec<(Exp, Coeff)>) -> Self {
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Exp, Coeff)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add(&c),
                _ => {
                    if out.last().is_some_and(|(_, lc)| lc.is_zero()) {
                        out.pop();
                    }
                    out.push((e, c));
                }
            }
        }
        if out.last().is_some_and(|(_, lc)| lc.is_zero()) {
            out.pop();
        }
        Terms(out)
    }

    fn iter(&self) -> impl DoubleEndedIterator<Item = (&Exp, &Coeff)> + ExactSizeIterator {
        self.0.iter().map(|(e, c)| (e, c))
    }

    fn keys(&self) -> impl Iterator<Item = &Exp> {
        self.0.iter().map(|(e, _)| e)
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn get(&self, e: &[i64]) -> Option<&Coeff> {
        self.0.binary_search_by(|(k, _)| k.as_slice().cmp(e)).ok().map(|i| &self.0[i].1)
    }

    fn last(&self) -> Option<(&Exp, &Coeff)> {
        self.0.last().map(|(e, c)| (e, c))
    }

    /// Adds a single term.
    fn add(&mut self, e: &[i64], c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.0.binary_search_by(|(k, _)| k.as_slice().cmp(e)) {
            Ok(i) => {
                let x = self.0[i].1.add(&c);
                if x.is_zero() {
                    self.0.remove(i);
                } else {
                    self.0[i].1 = x;
                }
            }
            Err(i) => self.0.insert(i, (Exp::from_slice(e), c)),
        }
    }

    /// `self += f(other)` termwise, where `f` never produces zero from a
    /// nonzero coefficient.
    fn merge(&mut self, other: &Terms, f: impl Fn(&Coeff) -> Coeff) {
        if other.0.is_empty() {
            return;
        }
        if other.0.len() <= 2 {
            for (e, c) in &other.0 {
                self.add(e, f(c));
            }
            return;
        }
        let mine = std::mem::take(&mut self.0);
        let mut out = Vec::with_capacity(mine.len() + other.0.len());
        let mut a = mine.into_iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, _)), Some((eb, _))) => match ea.cmp(eb) {
                    std::cmp::Ordering::Less => out.push(a.next().expect("peeked")),
                    std::cmp::Ordering::Greater => {
                        let (e, c) = b.next().expect("peeked");
                        out.push((e.clone(), f(c)));
                    }
                    std::cmp::Ordering::Equal => {
                        let (e, x) = a.next().expect("peeked");
                        let (_, y) = b.next().expect("peeked");
                        let z = x.add(&f(y));
                        if !z.is_zero() {
                            out.push((e, z));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().expect("peeked")),
                (None, Some(_)) => {
                    let (e, c) = b.next().expect("peeked");
                    out.push((e.clone(), f(c)));
                }
                (None, None) => break,
            }
        }
        self.0 = out;
    }
}

/// A Laurent polynomial `Σ c_μ e^μ` with `μ ∈ Z^rank` and integer
/// coefficients. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    rank: usize,
    terms: Terms,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: Terms::default() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank])
    }

    /// `e^μ`
    pub fn monomial(exponent: Vec<i64>) -> Self {
        Self::term(BigInt::one(), exponent)
    }

    pub fn term(coeff: BigInt, exponent: Vec<i64>) -> Self {
        let mut p = LaurentPoly::zero(exponent.len());
        p.add_term(&exponent, Coeff::from_big(coeff));
        p
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::term(c.into(), vec![0; rank])
    }

    /// Sums the given terms, combining repeated exponents.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Result<Self, LaurentError> {
        let mut v = Vec::new();
        for (e, c) in terms {
            if e.len() != rank {
                return Err(LaurentError::RankMismatch { left: rank, right: e.len() });
            }
            v.push((Exp::from_vec(e), Coeff::from_big(c)));
        }
        Ok(LaurentPoly::from_unsorted(rank, v))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| c.is_unit() == Some(1) && e.iter().all(|x| *x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64], BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c.to_big()))
    }

    pub fn coeff(&self, exponent: &[i64]) -> BigInt {
        self.terms.get(exponent).map(Coeff::to_big).unwrap_or_default()
    }

    fn add_term(&mut self, exponent: &[i64], c: Coeff) {
        self.terms.add(exponent, c);
    }

    /// `self += c · other`, in place.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &BigInt) {
        let c = c.to_i64().map_or_else(|| Coeff::Big(c.clone()), Coeff::Small);
        match c.is_unit() {
            _ if c.is_zero() => {}
            Some(1) => self.terms.merge(&other.terms, Coeff::clone),
            Some(_) => self.terms.merge(&other.terms, Coeff::neg),
            None => self.terms.merge(&other.terms, |x| x.mul(&c)),
        }
    }

    fn from_unsorted(rank: usize, v: Vec<(Exp, Coeff)>) -> Self {
        LaurentPoly { rank, terms: Terms::from_unsorted(v) }
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(LaurentError::RankMismatch { left: self.rank, right: other.rank })
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.terms.merge(&other.terms, Coeff::clone);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.terms.merge(&other.terms, Coeff::neg);
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(other)?;
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                v.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1.mul(c2)));
            }
        }
        Ok(LaurentPoly::from_unsorted(self.rank, v))
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        let c = Coeff::from_big(c.clone());
        LaurentPoly {
            rank: self.rank,
            terms: Terms(self.terms.iter().map(|(e, x)| (e.clone(), x.mul(&c))).collect()),
        }
    }

    /// Multiplication by `e^μ`.
    pub fn shift(&self, mu: &[i64]) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            // translation preserves the lexicographic order
            terms: Terms(self.terms.iter().map(|(e, c)| (e.iter().zip(mu).map(|(a, b)| a + b).collect(), c.clone())).collect()),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(self.rank), |acc, _| &acc * self)
    }

    /// Pushes exponents through a lattice endomorphism.
    pub fn map_exponents(&self, m: &IntMatrix) -> LaurentPoly {
        let v = self.terms.iter().map(|(e, c)| (Exp::from_vec(m.apply(e)), c.clone())).collect();
        LaurentPoly::from_unsorted(self.rank, v)
    }

    /// `w(f)`, the Weyl group action.
    pub fn act(&self, w: &WeylElement) -> Result<LaurentPoly, LaurentError> {
        if w.action().dim() != self.rank {
            return Err(LaurentError::RankMismatch { left: self.rank, right: w.action().dim() });
        }
        Ok(self.map_exponents(w.action()))
    }

    /// `γ(f)` for a diagram automorphism.
    pub fn act_automorphism(&self, g: &DiagramAutomorphism) -> Result<LaurentPoly, LaurentError> {
        if g.matrix().dim() != self.rank {
            return Err(LaurentError::RankMismatch { left: self.rank, right: g.matrix().dim() });
        }
        Ok(self.map_exponents(g.matrix()))
    }

    /// `s_i(f)`
    pub fn reflect(&self, d: &RootDatum, i: usize) -> LaurentPoly {
        let v = self.terms.iter().map(|(e, c)| (Exp::from_vec(weyl::reflect(d, i, e)), c.clone())).collect();
        LaurentPoly::from_unsorted(self.rank, v)
    }

    /// Value at the identity of the torus: the sum of the coefficients.
    pub fn evaluate_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.to_big()).sum()
    }

    /// Is `f` fixed by every `s_j`, `j ∈ J`?
    pub fn is_invariant(&self, d: &RootDatum, j: &Parabolic) -> bool {
        j.indices().iter().all(|&i| self.reflect(d, i) == *self)
    }

    /// `Some((±1, μ))` when `f = ±e^μ`.
    pub fn as_signed_monomial(&self) -> Option<(i32, Vec<i64>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.last()?;
        c.is_unit().map(|sign| (sign, e.to_vec()))
    }

    /// Exact quotient `self / divisor` in `Z[X]`.
    ///
    /// Long division with respect to the lexicographic order, which is a
    /// group order on `Z^rank` and hence multiplicative on leading terms.
    /// The quotient's exponents must lie in the coordinate box
    /// `[min(N) - min(D), max(N) - max(D)]`, which bounds the search.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::DivisionNotExact);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.rank));
        }
        if let Some((sign, mu)) = divisor.as_signed_monomial() {
            let neg: Vec<i64> = mu.iter().map(|x| -x).collect();
            let q = self.shift(&neg);
            return Ok(if sign < 0 { -q } else { q });
        }
        let (lo_n, hi_n) = self.coordinate_box();
        let (lo_d, hi_d) = divisor.coordinate_box();
        let lo: Vec<i64> = lo_n.iter().zip(&lo_d).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = hi_n.iter().zip(&hi_d).map(|(a, b)| a - b).collect();
        let (lead_e, lead_c) = divisor.terms.last().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.rank);
        while let Some((e, c)) = rem.terms.last() {
            let qe: Vec<i64> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return Err(LaurentError::DivisionNotExact);
            }
            let qc = c.div_exact(lead_c).ok_or(LaurentError::DivisionNotExact)?;
            let neg = qc.neg();
            for (de, dc) in divisor.terms.iter() {
                let te: Vec<i64> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(&te, neg.mul(dc));
            }
            quot.add_term(&qe, qc);
        }
        Ok(quot)
    }

    fn coordinate_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.rank];
        let mut hi = vec![i64::MIN; self.rank];
        for e in self.terms.keys() {
            for k in 0..self.rank {
                lo[k] = lo[k].min(e[k]);
                hi[k] = hi[k].max(e[k]);
            }
        }
        (lo, hi)
    }

    /// Canonical text form, also used as a cache key.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text form `c*x^[a1,...,ar] + ...`; `0` is the zero
    /// polynomial. Whitespace around terms is ignored and a bare `x^[..]`
    /// means coefficient 1.
    pub fn parse(text: &str, rank: usize) -> Result<LaurentPoly, LaurentError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        let mut out = LaurentPoly::zero(rank);
        let mut depth = 0i32;
        let mut start = 0;
        let mut pieces = Vec::new();
        for (pos, ch) in text.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' if depth == 0 => {
                    pieces.push(&text[start..pos]);
                    start = pos + 1;
                }
                _ => {}
            }
        }
        pieces.push(&text[start..]);
        for piece in pieces {
            let piece = piece.trim();
            let (coeff, mono) = match piece.split_once('*') {
                Some((c, m)) => (c.trim(), Some(m.trim())),
                None if piece.starts_with("x^") || piece.starts_with("-x^") => {
                    let (sign, m) = piece.strip_prefix('-').map_or(("1", piece), |m| ("-1", m));
                    (sign, Some(m))
                }
                None => (piece, None),
            };
            let c: BigInt = coeff
                .parse()
                .map_err(|_| LaurentError::Parse(format!("bad coefficient {coeff:?}")))?;
            let exponent = match mono {
                None => vec![0; rank],
                Some(m) => {
                    let inner = m
                        .strip_prefix("x^[")
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(|| LaurentError::Parse(format!("bad monomial {m:?}")))?;
                    let e: Vec<i64> = if inner.trim().is_empty() {
                        Vec::new()
                    } else {
                        inner
                            .split(',')
                            .map(|x| x.trim().parse::<i64>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| LaurentError::Parse(format!("bad exponent {inner:?}")))?
                    };
                    if e.len() != rank {
                        return Err(LaurentError::RankMismatch { left: rank, right: e.len() });
                    }
                    e
                }
            };
            out.add_term(&exponent, Coeff::from_big(c));
        }
        Ok(out)
    }

    /// A random polynomial with `n_terms` draws of exponents in `[-e, e]^rank`
    /// and coefficients in `[-c, c]`.
    pub fn random<R: Rng>(rng: &mut R, rank: usize, n_terms: usize, e: i64, c: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero(rank);
        for _ in 0..n_terms {
            let exp: Vec<i64> = (0..rank).map(|_| rng.gen_range(-e..=e)).collect();
            out.add_term(&exp, Coeff::Small(rng.gen_range(-c..=c)));
        }
        out
    }
}

/// Accumulates a sum of polynomials, combining like terms once at the end.
#[derive(Clone, Debug)]
pub struct PolySum {
    rank: usize,
    terms: Vec<(Exp, Coeff)>,
}

impl PolySum {
    pub fn new(rank: usize) -> Self {
        PolySum { rank, terms: Vec::new() }
    }

    pub fn add(&mut self, f: &LaurentPoly) {
        self.terms.extend(f.terms.iter().map(|(e, c)| (e.clone(), c.clone())));
    }

    /// `+= c · f`
    pub fn add_scaled(&mut self, f: &LaurentPoly, c: &BigInt) {
        let c = c.to_i64().map_or_else(|| Coeff::Big(c.clone()), Coeff::Small);
        if !c.is_zero() {
            self.terms.extend(f.terms.iter().map(|(e, x)| (e.clone(), x.mul(&c))));
        }
    }

    /// `+= f · g`
    pub fn add_product(&mut self, f: &LaurentPoly, g: &LaurentPoly) {
        for (e1, c1) in f.terms.iter() {
            for (e2, c2) in g.terms.iter() {
                self.terms.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1.mul(c2)));
            }
        }
    }

    pub fn finish(self) -> LaurentPoly {
        LaurentPoly::from_unsorted(self.rank, self.terms)
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing lexicographic order of exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x^[")?;
            for (i, x) in e.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    /// Panics on rank mismatch; see [`LaurentPoly::checked_add`].
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("rank mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("rank mismatch")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(mut self) -> LaurentPoly {
        for (_, c) in self.terms.0.iter_mut() {
            *c = c.neg();
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

/// `D_i(f) = (f - e^{-α_i} s_i(f)) / (1 - e^{-α_i})`.
///
/// The division runs along `α_i`: the numerator's terms are consumed in
/// decreasing order of `⟨μ, α_i^∨⟩`, each cancelled by a multiple of
/// `e^μ (1 - e^{-α_i})`.
pub fn demazure_step(d: &RootDatum, i: usize, f: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    if f.rank() != d.rank() {
        return Err(LaurentError::RankMismatch { left: d.rank(), right: f.rank() });
    }
    let alpha = d.simple_root(i);
    let neg_alpha: Vec<i64> = alpha.iter().map(|a| -a).collect();
    let numerator = f - &f.reflect(d, i).shift(&neg_alpha);
    let Some(floor) = numerator.terms.keys().map(|e| d.pairing(e, i)).min() else {
        return Ok(LaurentPoly::zero(f.rank()));
    };
    let mut work: BTreeMap<(i64, Exp), Coeff> =
        numerator.terms.0.into_iter().map(|(e, c)| ((d.pairing(&e, i), e), c)).collect();
    let mut quoted = Vec::new();
    while let Some(((p, e), c)) = work.pop_last() {
        if p < floor {
            return Err(LaurentError::DivisionNotExact);
        }
        let key = (p - 2, e.iter().zip(alpha).map(|(x, a)| x - a).collect::<Exp>());
        match work.get_mut(&key) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    work.remove(&key);
                }
            }
            None => {
                work.insert(key, c.clone());
            }
        }
        quoted.push((e, c));
    }
    Ok(LaurentPoly::from_unsorted(f.rank(), quoted))
}

/// `D_{i_1} ∘ ⋯ ∘ D_{i_k}` for a reduced word `i_1 ⋯ i_k`.
pub fn demazure_word(d: &RootDatum, word: &[usize], f: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    let w = WeylElement::from_word(d, word)?;
    if w.length() != word.len() {
        return Err(LaurentError::WordNotReduced(word.to_vec()));
    }
    word.iter().rev().try_fold(f.clone(), |acc, &i| demazure_step(d, i, &acc))
}

/// `Σ_{μ ∈ W_J λ} e^μ`
pub fn orbit_sum(d: &RootDatum, j: &Parabolic, lambda: &[i64]) -> Result<LaurentPoly, LaurentError> {
    d.check_finite(j)?;
    if lambda.len() != d.rank() {
        return Err(LaurentError::RankMismatch { left: d.rank(), right: lambda.len() });
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::from([lambda.to_vec()]);
    seen.insert(lambda.to_vec());
    while let Some(mu) = queue.pop_front() {
        for &i in j.indices() {
            let nu = weyl::reflect(d, i, &mu);
            if seen.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    LaurentPoly::from_terms(d.rank(), seen.into_iter().map(|e| (e, BigInt::one())))
}

/// Character of the irreducible `L_J`-module of highest weight `λ`, as
/// `D_{w_0(J)}(e^λ)`.
pub fn weyl_character(d: &RootDatum, j: &Parabolic, lambda: &[i64]) -> Result<LaurentPoly, LaurentError> {
    d.check_finite(j)?;
    if lambda.len() != d.rank() {
        return Err(LaurentError::RankMismatch { left: d.rank(), right: lambda.len() });
    }
    if !d.is_dominant(j, lambda) {
        return Err(LaurentError::NotDominant { weight: lambda.to_vec(), parabolic: j.clone() });
    }
    let w0 = weyl::longest_element(d, j)?;
    demazure_word(d, w0.word(), &LaurentPoly::monomial(lambda.to_vec()))
}

/// Sign-aware helper for pretty output of leading coefficients.
pub fn is_negative_unit(c: &BigInt) -> bool {
    c.is_negative() && c.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: i64) -> LaurentPoly {
        LaurentPoly::monomial(vec![k])
    }

    fn p(text: &str, rank: usize) -> LaurentPoly {
        LaurentPoly::parse(text, rank).unwrap()
    }

    #[test]
    fn ring_examples() {
        let f = &(&t(1) + &t(-1)) * &t(1);
        assert_eq!(f, &t(2) + &t(0));
        assert!((&f * &LaurentPoly::zero(1)).is_zero());
        let c = &t(1) + &t(-1);
        assert_eq!(&c * &c, p("1*x^[2] + 2*x^[0] + 1*x^[-2]", 1));
        assert!(matches!(
            t(1).checked_add(&LaurentPoly::one(2)),
            Err(LaurentError::RankMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn action_examples() {
        let a1 = RootDatum::standard("A1").unwrap();
        let s = WeylElement::simple(&a1, 0).unwrap();
        assert_eq!(t(1).act(&s).unwrap(), t(-1));
        assert_eq!(t(3).act(&WeylElement::identity(&a1)).unwrap(), t(3));
        let a2 = RootDatum::standard("A2").unwrap();
        let s1 = WeylElement::simple(&a2, 0).unwrap();
        assert_eq!(LaurentPoly::monomial(vec![1, 0]).act(&s1).unwrap(), LaurentPoly::monomial(vec![-1, 1]));
        assert!(t(1).act(&s1).is_err());
    }

    #[test]
    fn demazure_a1() {
        let a1 = RootDatum::standard("A1").unwrap();
        assert_eq!(demazure_step(&a1, 0, &t(0)).unwrap(), t(0));
        assert_eq!(demazure_step(&a1, 0, &t(1)).unwrap(), &t(1) + &t(-1));
        assert!(demazure_step(&a1, 0, &t(-1)).unwrap().is_zero());
        assert_eq!(demazure_step(&a1, 0, &t(2)).unwrap(), p("1*x^[2] + 1*x^[0] + 1*x^[-2]", 1));
        assert_eq!(demazure_step(&a1, 0, &t(-2)).unwrap(), -t(0));
        assert_eq!(demazure_step(&a1, 0, &t(-4)).unwrap(), -(&(&t(-2) + &t(0)) + &t(2)));
    }

    #[test]
    fn demazure_words_a2() {
        let a2 = RootDatum::standard("A2").unwrap();
        let f = LaurentPoly::monomial(vec![1, 0]);
        assert_eq!(demazure_word(&a2, &[], &f).unwrap(), f);
        let x = demazure_word(&a2, &[0, 1, 0], &f).unwrap();
        let y = demazure_word(&a2, &[1, 0, 1], &f).unwrap();
        assert_eq!(x, y);
        assert_eq!(x, p("1*x^[1,0] + 1*x^[-1,1] + 1*x^[0,-1]", 2));
        assert!(matches!(demazure_word(&a2, &[0, 0], &f), Err(LaurentError::WordNotReduced(_))));
    }

    #[test]
    fn orbit_sums_and_characters() {
        let a1 = RootDatum::standard("A1").unwrap();
        assert_eq!(orbit_sum(&a1, &a1.full(), &[0]).unwrap(), t(0));
        assert_eq!(orbit_sum(&a1, &a1.full(), &[1]).unwrap(), &t(1) + &t(-1));
        let a2 = RootDatum::standard("A2").unwrap();
        let o = orbit_sum(&a2, &a2.full(), &[1, 0]).unwrap();
        assert_eq!(o, weyl_character(&a2, &a2.full(), &[1, 0]).unwrap());
        assert!(weyl_character(&a2, &a2.full(), &[0, 0]).unwrap().is_one());
        let adj = weyl_character(&a2, &a2.full(), &[1, 1]).unwrap();
        assert_eq!(adj.num_terms(), 7);
        assert_eq!(adj.coeff(&[0, 0]), BigInt::from(2));
        assert_eq!(adj.evaluate_at_one(), BigInt::from(8));
        assert_eq!(o.evaluate_at_one(), BigInt::from(3));
        assert!(matches!(
            weyl_character(&a2, &a2.full(), &[-1, 0]),
            Err(LaurentError::NotDominant { .. })
        ));
    }

    #[test]
    fn invariance() {
        let a1 = RootDatum::standard("A1").unwrap();
        assert!(LaurentPoly::one(1).is_invariant(&a1, &a1.full()));
        assert!(!t(1).is_invariant(&a1, &a1.full()));
        assert!((&t(1) + &t(-1)).is_invariant(&a1, &a1.full()));
        assert_eq!(LaurentPoly::zero(1).evaluate_at_one(), BigInt::zero());
    }

    #[test]
    fn text_format() {
        let f = p("1*x^[1] + -1*x^[-1]", 1);
        assert_eq!(f.to_string(), "1*x^[1] + -1*x^[-1]");
        assert_eq!(p("0", 2), LaurentPoly::zero(2));
        assert_eq!(p("3", 2), LaurentPoly::constant(2, 3));
        assert_eq!(p("x^[1,2] + -x^[0,-1]", 2).to_string(), "1*x^[1,2] + -1*x^[0,-1]");
        assert_eq!(p("2*x^[1] + 3*x^[1]", 1), LaurentPoly::term(5.into(), vec![1]));
        assert!(LaurentPoly::parse("1*x^[1,2]", 1).is_err());
        assert!(LaurentPoly::parse("a*x^[1]", 1).is_err());
        assert!(LaurentPoly::parse("", 1).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("1*x^[1,0] + 2*x^[0,1] + -1*x^[-1,-1]", 2);
        let b = p("3*x^[2,-1] + 1*x^[0,0] + 1*x^[-3,2]", 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(a.div_exact(&b).is_err());
        let one_minus = p("1*x^[0,0] + -1*x^[-2,1]", 2);
        assert!(LaurentPoly::one(2).div_exact(&one_minus).is_err());
        assert_eq!(prod.div_exact(&LaurentPoly::term((-1).into(), vec![1, 1])).unwrap(), -prod.shift(&[-1, -1]));
    }
}
