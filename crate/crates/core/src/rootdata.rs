//! Kac-Moody root data `(X, Δ, Δ^∨)` with `X = Z^rank`, parabolic subsets of
//! the simple roots, and diagram automorphisms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDatumError {
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("simple roots are linearly dependent")]
    NotFree,
    #[error("coroot {index} ({label}) is not surjective onto Z (gcd of its entries is {gcd})")]
    NotSimplyConnected { index: usize, label: String, gcd: i64 },
    #[error("simple root index {0} out of range")]
    InvalidIndex(usize),
    #[error("parabolic subset {0} is not of finite type")]
    InfiniteType(Parabolic),
    #[error("no integral fundamental weights exist for {0}")]
    NoIntegralSolution(Parabolic),
    #[error("not a diagram automorphism: {0}")]
    NotAutomorphism(String),
}

/// Raw, unvalidated root-datum fields, as found in configuration files.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawDatum {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

/// A sorted set of simple-root indices `J`, standing in for the standard
/// parabolic `P` with `Δ_P = J`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Parabolic(Vec<usize>);

impl Parabolic {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Parabolic(set.into_iter().collect())
    }

    /// The Borel, `J = ∅`.
    pub fn empty() -> Self {
        Parabolic(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Parabolic) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &Parabolic) -> Parabolic {
        Parabolic::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// All subsets, in order of size then lexicographic.
    pub fn subsets(&self) -> Vec<Parabolic> {
        let n = self.0.len();
        let mut out: Vec<Parabolic> = (0u32..(1 << n))
            .map(|mask| Parabolic::new((0..n).filter(|b| mask & (1 << b) != 0).map(|b| self.0[b])))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Sign of a root-lattice vector read in the simple-root basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSign {
    Positive,
    Negative,
    Zero,
    Mixed,
}

/// A validated free Kac-Moody root datum of simply-connected type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    labels: Vec<String>,
    cartan: Vec<Vec<i64>>,
    // L with L * [roots as columns] = denom * I
    root_coords: Vec<Vec<i64>>,
    root_denom: i64,
    reflections: Vec<IntMatrix>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    /// Checks the Cartan axioms, freeness and simply-connectedness.
    pub fn validate(raw: RawDatum) -> Result<Self, RootDatumError> {
        let RawDatum { rank, simple_roots, simple_coroots, labels } = raw;
        if rank == 0 {
            return Err(RootDatumError::Dimension("rank must be positive".into()));
        }
        let n = simple_roots.len();
        if simple_coroots.len() != n || labels.len() != n {
            return Err(RootDatumError::Dimension(format!(
                "{} roots, {} coroots, {} labels",
                n,
                simple_coroots.len(),
                labels.len()
            )));
        }
        for (k, v) in simple_roots.iter().chain(simple_coroots.iter()).enumerate() {
            if v.len() != rank {
                return Err(RootDatumError::Dimension(format!(
                    "vector {k} has length {} but rank is {rank}",
                    v.len()
                )));
            }
        }
        for (index, c) in simple_coroots.iter().enumerate() {
            let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g != 1 {
                return Err(RootDatumError::NotSimplyConnected {
                    index,
                    label: labels[index].clone(),
                    gcd: g,
                });
            }
        }
        let cartan: Vec<Vec<i64>> = simple_roots
            .iter()
            .map(|a| simple_coroots.iter().map(|b| dot(a, b)).collect())
            .collect();
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(RootDatumError::NotGcm(format!("a[{i}][{i}] = {} != 2", cartan[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(RootDatumError::NotGcm(format!("a[{i}][{j}] = {} > 0", cartan[i][j])));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(RootDatumError::NotGcm(format!(
                        "a[{i}][{j}] = {} but a[{j}][{i}] = {}",
                        cartan[i][j], cartan[j][i]
                    )));
                }
            }
        }
        if linalg::rank(&simple_roots) != n {
            return Err(RootDatumError::NotFree);
        }
        let (root_coords, root_denom) =
            linalg::scaled_left_inverse(&simple_roots).ok_or(RootDatumError::NotFree)?;
        let reflections = (0..n)
            .map(|i| {
                let rows: Vec<Vec<i64>> = (0..rank)
                    .map(|r| {
                        (0..rank)
                            .map(|c| i64::from(r == c) - simple_roots[i][r] * simple_coroots[i][c])
                            .collect()
                    })
                    .collect();
                IntMatrix::from_rows(&rows).expect("square")
            })
            .collect();
        Ok(RootDatum {
            rank,
            roots: simple_roots,
            coroots: simple_coroots,
            labels,
            cartan,
            root_coords,
            root_denom,
            reflections,
        })
    }

    /// The simply-connected datum of a generalized Cartan matrix written in
    /// fundamental-weight coordinates: roots are the rows, coroots the
    /// coordinate covectors. Only free when `det A != 0`.
    pub fn from_cartan(cartan: &[Vec<i64>]) -> Result<Self, RootDatumError> {
        let n = cartan.len();
        let coroots = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let labels = (1..=n).map(|i| format!("a{i}")).collect();
        RootDatum::validate(RawDatum {
            rank: n,
            simple_roots: cartan.to_vec(),
            simple_coroots: coroots,
            labels,
        })
    }

    /// Built-in data by name: `A<n>`, `B<n>`, `C<n>`, `D<n>`, `G2`, `A1xA1`,
    /// and `affineA1` (the untwisted affine `A_1` on a rank-3 lattice).
    pub fn standard(name: &str) -> Option<Self> {
        let cartan = match name {
            "G2" => vec![vec![2, -1], vec![-3, 2]],
            "A1xA1" => vec![vec![2, 0], vec![0, 2]],
            "affineA1" => {
                return RootDatum::validate(RawDatum {
                    rank: 3,
                    simple_roots: vec![vec![2, -2, 1], vec![-2, 2, 0]],
                    simple_coroots: vec![vec![1, 0, 0], vec![0, 1, 0]],
                    labels: vec!["a0".into(), "a1".into()],
                })
                .ok();
            }
            _ => {
                let (kind, n) = name.split_at(1);
                let n: usize = n.parse().ok()?;
                classical_cartan(kind, n)?
            }
        };
        RootDatum::from_cartan(&cartan).ok()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots.
    pub fn num_simple(&self) -> usize {
        self.roots.len()
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn raw(&self) -> RawDatum {
        RawDatum {
            rank: self.rank,
            simple_roots: self.roots.clone(),
            simple_coroots: self.coroots.clone(),
            labels: self.labels.clone(),
        }
    }

    /// `⟨λ, α_i^∨⟩`
    #[inline]
    pub fn pairing(&self, lambda: &[i64], i: usize) -> i64 {
        dot(lambda, &self.coroots[i])
    }

    /// Matrix of the simple reflection `s_i` on `X`.
    pub fn reflection_matrix(&self, i: usize) -> &IntMatrix {
        &self.reflections[i]
    }

    pub fn full(&self) -> Parabolic {
        Parabolic::new(0..self.num_simple())
    }

    pub fn check_indices(&self, j: &Parabolic) -> Result<(), RootDatumError> {
        match j.indices().iter().find(|&&i| i >= self.num_simple()) {
            Some(&i) => Err(RootDatumError::InvalidIndex(i)),
            None => Ok(()),
        }
    }

    /// Whether `W_J` is finite: every principal minor of `A_J` is positive.
    pub fn is_finite_type(&self, j: &Parabolic) -> bool {
        j.subsets()
            .iter()
            .filter(|s| !s.is_empty())
            .all(|s| linalg::principal_minor(&self.cartan, s.indices()).is_positive())
    }

    pub fn check_finite(&self, j: &Parabolic) -> Result<(), RootDatumError> {
        self.check_indices(j)?;
        if self.is_finite_type(j) {
            Ok(())
        } else {
            Err(RootDatumError::InfiniteType(j.clone()))
        }
    }

    /// Coordinates of a root-lattice vector in the simple-root basis, scaled
    /// by a fixed positive denominator.
    pub fn scaled_root_coordinates(&self, v: &[i64]) -> Vec<i64> {
        self.root_coords.iter().map(|row| dot(row, v)).collect()
    }

    pub fn root_sign(&self, v: &[i64]) -> RootSign {
        let c = self.scaled_root_coordinates(v);
        let pos = c.iter().any(|&x| x > 0);
        let neg = c.iter().any(|&x| x < 0);
        match (pos, neg) {
            (false, false) => RootSign::Zero,
            (true, false) => RootSign::Positive,
            (false, true) => RootSign::Negative,
            (true, true) => RootSign::Mixed,
        }
    }

    /// Is `v` an element of the root lattice (integral coordinates that
    /// reproduce it)?
    pub fn in_root_lattice(&self, v: &[i64]) -> bool {
        let c = self.scaled_root_coordinates(v);
        if c.iter().any(|x| x % self.root_denom != 0) {
            return false;
        }
        let mut back = vec![0i64; self.rank];
        for (ci, root) in c.iter().zip(&self.roots) {
            for (b, r) in back.iter_mut().zip(root) {
                *b += ci / self.root_denom * r;
            }
        }
        back == v
    }

    /// Is `λ` dominant for `J`, i.e. `⟨λ, α_j^∨⟩ >= 0` for `j ∈ J`?
    pub fn is_dominant(&self, j: &Parabolic, lambda: &[i64]) -> bool {
        j.indices().iter().all(|&i| self.pairing(lambda, i) >= 0)
    }

    /// Is `λ` fixed by `W_J`?
    pub fn is_fixed(&self, j: &Parabolic, lambda: &[i64]) -> bool {
        j.indices().iter().all(|&i| self.pairing(lambda, i) == 0)
    }

    /// Fundamental weights `ω_j` (`j ∈ J`) with `⟨ω_i, α_j^∨⟩ = δ_ij` on `J`.
    ///
    /// Among all integral solutions the one of least L1 norm is returned, ties
    /// broken lexicographically.
    pub fn fundamental_weights(&self, j: &Parabolic) -> Result<Vec<Vec<i64>>, RootDatumError> {
        self.check_finite(j)?;
        let a: Vec<Vec<i64>> = j.indices().iter().map(|&i| self.coroots[i].clone()).collect();
        let mut out = Vec::with_capacity(j.len());
        for k in 0..j.len() {
            let b: Vec<i64> = (0..j.len()).map(|l| i64::from(l == k)).collect();
            let (x0, kernel) = linalg::integral_solutions(&a, &b)
                .ok_or_else(|| RootDatumError::NoIntegralSolution(j.clone()))?;
            out.push(
                minimal_l1_solution(&x0, &kernel)
                    .ok_or_else(|| RootDatumError::NoIntegralSolution(j.clone()))?,
            );
        }
        Ok(out)
    }

    /// Checks that `m` is a lattice automorphism permuting the simple roots
    /// and compatibly the simple coroots.
    pub fn validate_automorphism(&self, m: &[Vec<i64>]) -> Result<DiagramAutomorphism, RootDatumError> {
        let matrix = IntMatrix::from_rows(m)
            .filter(|x| x.dim() == self.rank)
            .ok_or_else(|| RootDatumError::NotAutomorphism(format!("expected a {0}x{0} matrix", self.rank)))?;
        let inverse = matrix
            .inverse()
            .ok_or_else(|| RootDatumError::NotAutomorphism("not invertible over Z".into()))?;
        let n = self.num_simple();
        let mut perm = Vec::with_capacity(n);
        for i in 0..n {
            let image = matrix.apply(&self.roots[i]);
            let Some(k) = self.roots.iter().position(|r| *r == image) else {
                return Err(RootDatumError::NotAutomorphism(format!(
                    "image of simple root {i} is {image:?}, not a simple root"
                )));
            };
            perm.push(k);
        }
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        if distinct.len() != n {
            return Err(RootDatumError::NotAutomorphism("simple roots not permuted bijectively".into()));
        }
        // ⟨mλ, α_{π(i)}^∨⟩ = ⟨λ, α_i^∨⟩, i.e. m^T α_{π(i)}^∨ = α_i^∨
        for i in 0..n {
            if matrix.apply_transpose(&self.coroots[perm[i]]) != self.coroots[i] {
                return Err(RootDatumError::NotAutomorphism(format!(
                    "coroot {} is not carried to coroot {}",
                    i, perm[i]
                )));
            }
        }
        Ok(DiagramAutomorphism { matrix, inverse, root_permutation: perm })
    }
}

fn classical_cartan(kind: &str, n: usize) -> Option<Vec<Vec<i64>>> {
    if n == 0 || n > 12 {
        return None;
    }
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    for i in 0..n.saturating_sub(1) {
        a[i][i + 1] = -1;
        a[i + 1][i] = -1;
    }
    match kind {
        "A" => {}
        "B" | "C" if n >= 2 => {
            // a[i][j] = ⟨α_i, α_j^∨⟩; for B the last root is short
            if kind == "B" {
                a[n - 2][n - 1] = -2;
            } else {
                a[n - 1][n - 2] = -2;
            }
        }
        "D" if n >= 4 => {
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        _ => return None,
    }
    Some(a)
}

/// Least-L1 point of `x0 + span_Z(kernel)`, ties broken lexicographically.
fn minimal_l1_solution(x0: &[BigInt], kernel: &[Vec<BigInt>]) -> Option<Vec<i64>> {
    let to_i64 = |v: &[BigInt]| v.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>();
    let mut best = to_i64(x0)?;
    let kernel: Vec<Vec<i64>> = kernel.iter().map(|k| to_i64(k)).collect::<Option<_>>()?;
    if kernel.is_empty() {
        return Some(best);
    }
    let norm = |v: &[i64]| v.iter().map(|x| x.abs()).sum::<i64>();
    // local descent first, so the exhaustive box below stays small
    loop {
        let mut improved = false;
        for k in &kernel {
            for sign in [1, -1] {
                let cand: Vec<i64> = best.iter().zip(k).map(|(a, b)| a + sign * b).collect();
                if norm(&cand) < norm(&best) {
                    best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    // Any optimum x = best + K t has |x - best|_inf <= 2 |best|_1, and t is
    // recovered from x - best by an exact left inverse of K.
    let (left, denom) = linalg::scaled_left_inverse(&kernel)?;
    let radius = 2 * norm(&best);
    let bounds: Vec<i64> = left
        .iter()
        .map(|row| (row.iter().map(|x| x.abs()).sum::<i64>() * radius) / denom)
        .collect();
    let volume: f64 = bounds.iter().map(|&b| (2 * b + 1) as f64).product();
    if volume > 2.0e6 {
        return Some(best);
    }
    let mut t: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let cand: Vec<i64> = (0..best.len())
            .map(|r| best[r] + kernel.iter().zip(&t).map(|(k, ti)| k[r] * ti).sum::<i64>())
            .collect();
        let (nc, nb) = (norm(&cand), norm(&best));
        if nc < nb || (nc == nb && cand < best) {
            best = cand;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == t.len() {
                return Some(best);
            }
            if t[pos] < bounds[pos] {
                t[pos] += 1;
                break;
            }
            t[pos] = -bounds[pos];
            pos += 1;
        }
    }
}

/// A lattice automorphism of `X` preserving `Δ` and `Δ^∨`: a length-zero
/// element of the disconnected Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramAutomorphism {
    matrix: IntMatrix,
    inverse: IntMatrix,
    root_permutation: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(d: &RootDatum) -> Self {
        DiagramAutomorphism {
            matrix: IntMatrix::identity(d.rank()),
            inverse: IntMatrix::identity(d.rank()),
            root_permutation: (0..d.num_simple()).collect(),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.inverse
    }

    /// `γ(α_i) = α_{π(i)}`
    pub fn root_permutation(&self) -> &[usize] {
        &self.root_permutation
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism {
            matrix: self.matrix.mul(&other.matrix),
            inverse: other.inverse.mul(&self.inverse),
            root_permutation: other.root_permutation.iter().map(|&i| self.root_permutation[i]).collect(),
        }
    }

    pub fn inverse(&self) -> DiagramAutomorphism {
        let mut perm = vec![0; self.root_permutation.len()];
        for (i, &p) in self.root_permutation.iter().enumerate() {
            perm[p] = i;
        }
        DiagramAutomorphism {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            root_permutation: perm,
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.apply(v)
    }

    pub fn apply_parabolic(&self, j: &Parabolic) -> Parabolic {
        Parabolic::new(j.indices().iter().map(|&i| self.root_permutation[i]))
    }

    pub fn stabilizes(&self, j: &Parabolic) -> bool {
        self.apply_parabolic(j) == *j
    }

    /// Order of the automorphism, if at most `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut acc = self.matrix.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(&self.matrix);
        }
        None
    }
}

/// Greatest common divisor helper re-exported for coroot checks in tests.
pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root datum of rank {} with Cartan matrix {:?}", self.rank, self.cartan)
    }
}
