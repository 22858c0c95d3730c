//! Acceptance suite: nine exact criteria, each checked against oracles written
//! in this file, one PASS/FAIL line per criterion.
//!
//! `cargo test -p kmsoergel --test acceptance` runs all of them; list criterion
//! numbers (`-- 5 7`) to run a subset.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kmsoergel::bimodule::{ActionStore, BSBimodule, BSSequence};
use kmsoergel::laurent::{demazure_step, demazure_word, weyl_character};
use kmsoergel::polymat::{self, PolyMatrix};
use kmsoergel::schur::{rank_oracle, CosetCombination, SchurContext};
use kmsoergel::steinberg::{steinberg_basis, verify_basis};
use kmsoergel::weyl::{self, WeylElement};
use kmsoergel::{DiagramAutomorphism, LaurentPoly, Parabolic, RootDatum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracle::{Group, Mat};

type Outcome = Result<String, String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn datum(name: &str) -> RootDatum {
    RootDatum::standard(name).unwrap_or_else(|| panic!("no standard datum {name}"))
}

fn subsets(d: &RootDatum) -> Vec<Parabolic> {
    let n = d.num_simple();
    (0..1usize << n).map(|m| Parabolic::new((0..n).filter(|i| m >> i & 1 == 1))).collect()
}

fn element(d: &RootDatum, g: &Group, k: usize) -> WeylElement {
    WeylElement::from_word(d, &g.words[k]).expect("word in range")
}

/// Brute-force arithmetic on the lattice, independent of the library's Weyl
/// group and Demazure code.
mod oracle {
    use super::*;

    pub type Mat = Vec<Vec<i64>>;

    pub fn reflection(d: &RootDatum, i: usize) -> Mat {
        let (a, c) = (d.simple_root(i), d.simple_coroot(i));
        let n = d.rank();
        (0..n).map(|r| (0..n).map(|k| (r == k) as i64 - a[r] * c[k]).collect()).collect()
    }

    pub fn mul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
    }

    pub fn apply(m: &Mat, v: &[i64]) -> Vec<i64> {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn identity(n: usize) -> Mat {
        (0..n).map(|r| (0..n).map(|c| (r == c) as i64).collect()).collect()
    }

    pub fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// The matrix of a library element, read off from its action on the
    /// standard basis.
    pub fn matrix_of(w: &WeylElement, rank: usize) -> Mat {
        let cols: Vec<Vec<i64>> = (0..rank).map(|c| w.apply(&identity(rank)[c])).collect();
        (0..rank).map(|r| (0..rank).map(|c| cols[c][r]).collect()).collect()
    }

    /// `e^μ ↦ e^{mμ}`
    pub fn act(m: &Mat, f: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(f.rank(), f.terms().map(|(e, c)| (apply(m, e), c))).unwrap()
    }

    /// Elements generated by the reflections in `gens`, breadth first, so
    /// `words[k]` is reduced and its length is the Coxeter length.
    pub struct Group {
        pub elems: Vec<Mat>,
        pub words: Vec<Vec<usize>>,
        pub index: HashMap<Mat, usize>,
    }

    impl Group {
        pub fn generate(d: &RootDatum, gens: &[usize], max_len: usize) -> Group {
            let refl: Vec<Mat> = gens.iter().map(|&i| reflection(d, i)).collect();
            let id = identity(d.rank());
            let mut g = Group { elems: vec![id.clone()], words: vec![vec![]], index: HashMap::from([(id, 0)]) };
            let mut frontier = vec![0];
            while !frontier.is_empty() && g.words[frontier[0]].len() < max_len {
                let mut next = Vec::new();
                for k in frontier {
                    for (&i, r) in gens.iter().zip(&refl) {
                        let m = mul(&g.elems[k], r);
                        if !g.index.contains_key(&m) {
                            let mut w = g.words[k].clone();
                            w.push(i);
                            g.index.insert(m.clone(), g.elems.len());
                            next.push(g.elems.len());
                            g.elems.push(m);
                            g.words.push(w);
                        }
                    }
                }
                frontier = next;
            }
            g
        }

        pub fn of(d: &RootDatum, j: &Parabolic) -> Group {
            Group::generate(d, j.indices(), usize::MAX)
        }

        pub fn len(&self) -> usize {
            self.elems.len()
        }

        pub fn length(&self, k: usize) -> usize {
            self.words[k].len()
        }

        pub fn find(&self, m: &Mat) -> usize {
            self.index[m]
        }

        pub fn inverse(&self, k: usize) -> usize {
            let id = identity(self.elems[0].len());
            (0..self.len()).find(|&x| mul(&self.elems[k], &self.elems[x]) == id).unwrap()
        }
    }

    /// Roots spanned by `simple[j]`, `j ∈ gens`, as (vector, coordinates in
    /// the simple basis); `dual` supplies the pairing.
    pub fn root_system(simple: &[Vec<i64>], dual: &[Vec<i64>], gens: &[usize]) -> Vec<(Vec<i64>, Vec<i64>)> {
        let n = simple.len();
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = gens
            .iter()
            .map(|&j| (simple[j].clone(), (0..n).map(|k| (k == j) as i64).collect()))
            .collect();
        while let Some((v, c)) = queue.pop() {
            if seen.contains_key(&v) {
                continue;
            }
            seen.insert(v.clone(), c.clone());
            for &i in gens {
                let p = dot(&v, &dual[i]);
                let v2: Vec<i64> = v.iter().zip(&simple[i]).map(|(x, a)| x - p * a).collect();
                let mut c2 = c.clone();
                c2[i] -= p;
                queue.push((v2, c2));
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_positive(coords: &[i64]) -> bool {
        coords.iter().all(|&c| c >= 0)
    }

    /// `D_{w_0(J)}(h) = Σ_{w ∈ W_J} w(h) ∏_{α > 0, wα < 0} (-e^{wα}) / ∏_{α > 0} (1 - e^{-α})`
    pub fn pushforward(d: &RootDatum, j: &Parabolic, h: &LaurentPoly) -> Result<LaurentPoly, String> {
        let rank = d.rank();
        let group = Group::of(d, j);
        let roots: HashMap<Vec<i64>, Vec<i64>> =
            root_system(d.simple_roots(), d.simple_coroots(), j.indices()).into_iter().collect();
        let positive: Vec<&Vec<i64>> = roots.iter().filter(|(_, c)| is_positive(c)).map(|(v, _)| v).collect();
        let mut num = LaurentPoly::zero(rank);
        for m in &group.elems {
            let mut term = act(m, h);
            for a in &positive {
                let wa = apply(m, a);
                if !is_positive(&roots[&wa]) {
                    term = &term * &-LaurentPoly::monomial(wa);
                }
            }
            num = &num + &term;
        }
        let one = LaurentPoly::one(rank);
        let delta = positive
            .iter()
            .fold(one.clone(), |acc, a| &acc * &(&one - &LaurentPoly::monomial(a.iter().map(|x| -x).collect())));
        let q = num.div_exact(&delta).map_err(|e| format!("pushforward numerator: {e}"))?;
        ensure(&q * &delta == num, || "pushforward quotient does not multiply back".into())?;
        Ok(q)
    }

    /// A random `W_J`-invariant from orbit sums of weights in
    /// `[-radius, radius]^rank`, keeping only orbits inside `[-bound, bound]^rank`.
    pub fn invariant(rng: &mut ChaCha8Rng, group: &Group, rank: usize, radius: i64, orbits: usize, bound: i64) -> LaurentPoly {
        let mut f = LaurentPoly::zero(rank);
        let mut made = 0;
        while made < orbits {
            let lambda: Vec<i64> = (0..rank).map(|_| rng.gen_range(-radius..=radius)).collect();
            let orbit: BTreeSet<Vec<i64>> = group.elems.iter().map(|m| apply(m, &lambda)).collect();
            if orbit.iter().flatten().any(|x| x.abs() > bound) {
                continue;
            }
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            let sum = LaurentPoly::from_terms(rank, orbit.into_iter().map(|e| (e, BigInt::from(1)))).unwrap();
            f = &f + &sum.scale(&c);
            made += 1;
        }
        f
    }
}

// ---------------------------------------------------------------------------

fn freeness(name: &str) -> Result<usize, String> {
    let d = datum(name);
    let mut pairs = 0;
    for sup in subsets(&d) {
        for sub in subsets(&d).into_iter().filter(|j| j.is_subset(&sup)) {
            let rb = steinberg_basis(&d, &sub, &sup).map_err(|e| format!("{name} {sub} ⊆ {sup}: {e}"))?;
            let expected = Group::of(&d, &sup).len() / Group::of(&d, &sub).len();
            ensure(rb.len() == expected, || format!("{name} {sub} ⊆ {sup}: {} elements, expected {expected}", rb.len()))?;
            let unit = verify_basis(&d, &rb).map_err(|e| format!("{name} {sub} ⊆ {sup}: {e}"))?;
            let gram: PolyMatrix = rb
                .basis
                .iter()
                .map(|u| rb.basis.iter().map(|v| oracle::pushforward(&d, &sup, &(u * v))).collect())
                .collect::<Result<_, _>>()?;
            let det = polymat::determinant(&gram, d.rank()).map_err(err)?;
            ensure(det.as_signed_monomial().is_some() && det == unit.to_poly(), || {
                format!("{name} {sub} ⊆ {sup}: Gram determinant {det} is not the reported unit")
            })?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn criterion_1() -> Outcome {
    let mut pairs = 0;
    for name in ["A1", "A2", "B2", "A1xA1"] {
        pairs += freeness(name)?;
    }
    Ok(format!("{pairs} pairs J ⊆ J' over A1, A2, B2, A1xA1"))
}

fn criterion_1_g2() -> Outcome {
    Ok(format!("{} pairs J ⊆ J' over G2", freeness("G2")?))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut pairs, mut samples) = (0, 0);
    for name in ["A1", "A2", "B2", "A1xA1"] {
        let d = datum(name);
        for sup in subsets(&d) {
            for sub in subsets(&d).into_iter().filter(|j| j.is_subset(&sup)) {
                let rb = steinberg_basis(&d, &sub, &sup).map_err(err)?;
                let sub_group = Group::of(&d, &sub);
                for (u, e) in rb.basis.iter().enumerate() {
                    for (v, f) in rb.dual.iter().enumerate() {
                        let p = oracle::pushforward(&d, &sup, &(e * f))?;
                        let expected = LaurentPoly::constant(d.rank(), (u == v) as i64);
                        ensure(p == expected, || format!("{name} {sub} ⊆ {sup}: (e_{u}, ê_{v}) = {p}"))?;
                    }
                }
                for _ in 0..100 {
                    let f = oracle::invariant(&mut rng, &sub_group, d.rank(), 3, 2, 3);
                    let mut rebuilt = LaurentPoly::zero(d.rank());
                    for (e, dual) in rb.basis.iter().zip(&rb.dual) {
                        let c = oracle::pushforward(&d, &sup, &(&f * dual))?;
                        rebuilt = &rebuilt + &(&c * e);
                    }
                    ensure(rebuilt == f, || format!("{name} {sub} ⊆ {sup}: reproducing identity fails at {f}"))?;
                    samples += 1;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, {samples} reproduced invariants"))
}

fn alternating(start: usize, m: usize) -> Vec<usize> {
    (0..m).map(|k| if k % 2 == 0 { start } else { 1 - start }).collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0;
    let mut seen_m = Vec::new();
    for name in ["A1xA1", "A2", "B2", "G2"] {
        let d = datum(name);
        let rank = d.rank();
        let refl = [oracle::reflection(&d, 0), oracle::reflection(&d, 1)];
        let r01 = oracle::mul(&refl[0], &refl[1]);
        let mut m = 1;
        let mut power = r01.clone();
        while power != oracle::identity(rank) {
            power = oracle::mul(&power, &r01);
            m += 1;
        }
        seen_m.push(m);
        let group = Group::generate(&d, &[0, 1], usize::MAX);
        // every word of length ℓ(w) evaluating to w, for each w
        let mut reduced: Vec<Vec<Vec<usize>>> = vec![Vec::new(); group.len()];
        for l in 0..=m {
            for bits in 0..1usize << l {
                let word: Vec<usize> = (0..l).map(|k| bits >> k & 1).collect();
                let mat = word.iter().fold(oracle::identity(rank), |acc, &i| oracle::mul(&acc, &refl[i]));
                let k = group.find(&mat);
                if group.length(k) == l {
                    reduced[k].push(word);
                }
            }
        }
        let poly = |rng: &mut ChaCha8Rng| LaurentPoly::random(rng, rank, 6, 3, 3);
        for _ in 0..50 {
            let f = poly(&mut rng);
            for i in 0..2 {
                let once = demazure_step(&d, i, &f).map_err(err)?;
                let twice = demazure_step(&d, i, &once).map_err(err)?;
                ensure(twice == once, || format!("{name}: D_{i} not idempotent at {f}"))?;
                let alpha = d.simple_root(i);
                let shifted = LaurentPoly::monomial(alpha.iter().map(|x| -x).collect());
                let numerator = &f - &(&shifted * &oracle::act(&refl[i], &f));
                let denominator = &LaurentPoly::one(rank) - &shifted;
                let q = numerator.div_exact(&denominator).map_err(err)?;
                ensure(&q * &denominator == numerator && q == once, || format!("{name}: D_{i}({f}) disagrees with the quotient"))?;
            }
        }
        for _ in 0..50 {
            let f = poly(&mut rng);
            for i in 0..2 {
                let once = demazure_step(&d, i, &f).map_err(err)?;
                ensure(oracle::act(&refl[i], &once) == once, || format!("{name}: D_{i}({f}) not s_{i}-invariant"))?;
            }
        }
        for _ in 0..50 {
            let f = poly(&mut rng);
            let a = demazure_word(&d, &alternating(0, m), &f).map_err(err)?;
            let b = demazure_word(&d, &alternating(1, m), &f).map_err(err)?;
            let step = |w: &[usize]| w.iter().rev().try_fold(f.clone(), |acc, &i| demazure_step(&d, i, &acc));
            let a2 = step(&alternating(0, m)).map_err(err)?;
            let b2 = step(&alternating(1, m)).map_err(err)?;
            ensure(a == b && a == a2 && b == b2, || format!("{name}: braid relation of length {m} fails at {f}"))?;
        }
        for _ in 0..50 {
            let f = poly(&mut rng);
            for words in &reduced {
                let values: Vec<LaurentPoly> = words.iter().map(|w| demazure_word(&d, w, &f)).collect::<Result<_, _>>().map_err(err)?;
                ensure(values.windows(2).all(|p| p[0] == p[1]), || format!("{name}: demazure_word depends on the reduced word of {:?}", words[0]))?;
            }
        }
        checks += 4 * 50;
    }
    seen_m.sort();
    ensure(seen_m == [2, 3, 4, 6], || format!("braid orders {seen_m:?}"))?;
    Ok(format!("{checks} law checks, braid orders {seen_m:?}"))
}

/// `∏_{β^∨ > 0} ⟨λ + ρ, β^∨⟩ / ⟨ρ, β^∨⟩`
fn weyl_dimension(d: &RootDatum, lambda: &[i64]) -> i64 {
    let all = (0..d.num_simple()).collect::<Vec<_>>();
    let coroots = oracle::root_system(d.simple_coroots(), d.simple_roots(), &all);
    let (mut num, mut den) = (1i128, 1i128);
    for (v, c) in coroots.iter().filter(|(_, c)| oracle::is_positive(c)) {
        let height: i64 = c.iter().sum();
        num *= (oracle::dot(lambda, v) + height) as i128;
        den *= height as i128;
    }
    assert_eq!(num % den, 0);
    (num / den) as i64
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for name in ["A2", "B2"] {
        let d = datum(name);
        // coroots are the standard basis, so lattice coordinates are ω-coordinates
        for i in 0..d.num_simple() {
            let e: Vec<i64> = (0..d.rank()).map(|k| (k == i) as i64).collect();
            ensure(d.simple_coroot(i) == e.as_slice(), || format!("{name}: coroot {i} is not e_{i}"))?;
        }
        for a in 0..=2 {
            for b in 0..=2 {
                let lambda = [a, b];
                let ch = weyl_character(&d, &d.full(), &lambda).map_err(err)?;
                let dim = ch.evaluate_at_one();
                let expected = weyl_dimension(&d, &lambda);
                ensure(dim == BigInt::from(expected), || format!("{name} λ = {lambda:?}: {dim} != {expected}"))?;
                checked += 1;
            }
        }
    }
    let a2 = datum("A2");
    ensure(weyl_dimension(&a2, &[1, 0]) == 3 && weyl_dimension(&a2, &[1, 1]) == 8, || "A2 spot values".into())?;
    Ok(format!("{checked} dominant weights"))
}

/// Every `P(0) ⊆ Q(0) ⊇ P(1) ⊆ … ⊇ P(n)` with `n = steps`.
fn chains(pool: &[Parabolic], steps: usize) -> Vec<Vec<Parabolic>> {
    let mut out: Vec<Vec<Parabolic>> = pool.iter().map(|p| vec![p.clone()]).collect();
    for _ in 0..steps {
        let mut next = Vec::new();
        for c in &out {
            for q in pool.iter().filter(|q| c.last().unwrap().is_subset(q)) {
                for p in pool.iter().filter(|p| p.is_subset(q)) {
                    let mut c2 = c.clone();
                    c2.push(q.clone());
                    c2.push(p.clone());
                    next.push(c2);
                }
            }
        }
        out = next;
    }
    out
}

fn a2_sequences(d: &RootDatum) -> Vec<BSSequence> {
    let pool = subsets(d);
    (0..=3)
        .flat_map(|n| chains(&pool, n))
        .map(|c| BSSequence::untwisted(d, c).expect("well-formed chain"))
        .collect()
}

fn rank_law(orders: &HashMap<Parabolic, usize>, seq: &BSSequence) -> usize {
    (0..seq.num_steps()).map(|i| orders[seq.q(i)] / orders[seq.p(i + 1)]).product()
}

fn criterion_5() -> Outcome {
    let d = datum("A2");
    let rank = d.rank();
    let groups: HashMap<Parabolic, Group> = subsets(&d).into_iter().map(|j| (j.clone(), Group::of(&d, &j))).collect();
    let orders: HashMap<Parabolic, usize> = groups.iter().map(|(j, g)| (j.clone(), g.len())).collect();
    let full = &groups[&d.full()];
    let store = ActionStore::new(36);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let seqs = a2_sequences(&d);
    for seq in &seqs {
        let m = BSBimodule::build_in(&d, seq, Some(&store)).map_err(err)?;
        let expected = rank_law(&orders, seq);
        ensure(m.rank() == expected, || format!("{seq}: rank {} != {expected}", m.rank()))?;
        let ps = seq.parabolics();
        let concats: Vec<BSBimodule> = (1..seq.num_steps())
            .map(|k| {
                let left = BSSequence::untwisted(&d, ps[..=2 * k].to_vec())?;
                let right = BSSequence::untwisted(&d, ps[2 * k..].to_vec())?;
                BSBimodule::build_in(&d, &left, Some(&store))?.concat(&BSBimodule::build_in(&d, &right, Some(&store))?)
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let right_group = &groups[m.right_ring()];
        for _ in 0..20 {
            let f = oracle::invariant(&mut rng, right_group, rank, 2, 2, 2);
            let g = oracle::invariant(&mut rng, right_group, rank, 2, 2, 2);
            let af = m.right_act(&f).map_err(err)?;
            let ag = m.right_act(&g).map_err(err)?;
            let afg = m.right_act(&(&f * &g)).map_err(err)?;
            ensure(polymat::mul(&af, &ag, rank) == *afg, || format!("{seq}: not multiplicative at f = {f}, g = {g}"))?;
            let sum = m.right_act(&(&f + &g)).map_err(err)?;
            ensure(*sum == polymat::add(&af, &ag), || format!("{seq}: not additive at f = {f}, g = {g}"))?;
            let z = oracle::invariant(&mut rng, full, rank, 2, 2, 2);
            let az = m.right_act(&z).map_err(err)?;
            let scalar = az.iter().enumerate().all(|(r, row)| {
                row.iter().enumerate().all(|(c, x)| if r == c { *x == z } else { x.is_zero() })
            });
            ensure(scalar, || format!("{seq}: W-invariant {z} does not act as a scalar"))?;
            for c in &concats {
                ensure(*c.right_act(&f).map_err(err)? == *af, || format!("{seq}: concat at {} disagrees for f = {f}", c.sequence()))?;
            }
        }
    }
    Ok(format!("{} sequences, 20 pairs each", seqs.len()))
}

fn criterion_6() -> Outcome {
    let d = datum("A2");
    let gamma = d.validate_automorphism(&[vec![0, 1], vec![1, 0]]).map_err(err)?;
    let id = DiagramAutomorphism::identity(&d);
    let twist = BSBimodule::twist(&d, &gamma).map_err(err)?;
    let twice = twist.concat(&twist).map_err(err)?;
    let unit = BSBimodule::identity(&d, &Parabolic::empty()).map_err(err)?;
    let g = gamma.matrix().rows();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let f = LaurentPoly::random(&mut rng, d.rank(), 6, 3, 3);
        ensure(*twice.right_act(&f).map_err(err)? == *unit.right_act(&f).map_err(err)?, || format!("γγ and 1 differ at {f}"))?;
        ensure(*twist.right_act(&f).map_err(err)? == vec![vec![oracle::act(&g, &f)]], || format!("γ does not act by the swap at {f}"))?;
    }
    for a in [&id, &gamma] {
        for b in [&id, &gamma] {
            let m = BSBimodule::twist(&d, a).map_err(err)?.concat(&BSBimodule::twist(&d, b).map_err(err)?).map_err(err)?;
            let product = oracle::mul(&a.matrix().rows(), &b.matrix().rows());
            ensure(m.total_twist().matrix().rows() == product, || "grading does not multiply under concat".into())?;
        }
    }
    Ok("20 inputs, 4 grading products".into())
}

/// Class representative (shortest element) of `W_J w W_K` for every `w`,
/// after checking the classes partition `W` and have unique minima.
fn double_cosets(g: &Group, left: &Group, right: &Group) -> Result<Vec<usize>, String> {
    let coset = |w: usize| -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for u in &left.elems {
            let uw = oracle::mul(u, &g.elems[w]);
            for v in &right.elems {
                s.insert(g.find(&oracle::mul(&uw, v)));
            }
        }
        s
    };
    let sets: Vec<BTreeSet<usize>> = (0..g.len()).map(coset).collect();
    let mut rep = vec![0; g.len()];
    for (w, s) in sets.iter().enumerate() {
        ensure(s.iter().all(|&x| sets[x] == *s), || format!("double cosets of {:?} overlap", g.words[w]))?;
        let min = s.iter().map(|&x| g.length(x)).min().unwrap();
        let minima: Vec<usize> = s.iter().copied().filter(|&x| g.length(x) == min).collect();
        ensure(minima.len() == 1, || format!("coset of {:?} has {} minimal elements", g.words[w], minima.len()))?;
        rep[w] = minima[0];
    }
    Ok(rep)
}

fn criterion_7() -> Outcome {
    let mut checks = 0;
    for name in ["A1", "A2", "B2", "A3"] {
        let d = datum(name);
        let rank = d.rank();
        let all = (0..d.num_simple()).collect::<Vec<_>>();
        let g = Group::generate(&d, &all, usize::MAX);
        let sets = subsets(&d);
        let groups: HashMap<Parabolic, Group> = sets.iter().map(|j| (j.clone(), Group::of(&d, j))).collect();
        let mut reps: HashMap<(Parabolic, Parabolic), Vec<usize>> = HashMap::new();
        for j in &sets {
            for k in &sets {
                let rep = double_cosets(&g, &groups[j], &groups[k])?;
                let minima: BTreeSet<usize> = rep.iter().copied().collect();
                let table = weyl::double_coset_table(&d, j, k, 64).map_err(err)?;
                let listed: BTreeSet<usize> = table.reps.iter().map(|w| g.find(&oracle::matrix_of(w, rank))).collect();
                ensure(table.complete && listed == minima && table.reps.len() == minima.len(), || {
                    format!("{name} ({j}, {k}): coset table disagrees with brute force")
                })?;
                for w in 0..g.len() {
                    let r = weyl::min_double_coset_rep(&d, &element(&d, &g, w), j, k);
                    ensure(g.find(&oracle::matrix_of(&r, rank)) == rep[w], || format!("{name} ({j}, {k}): wrong minimal rep of {:?}", g.words[w]))?;
                }
                for &r in &minima {
                    let (simples, verified) = weyl::stabilizer_simples(&d, j, k, &element(&d, &g, r)).map_err(err)?;
                    let r_inv = g.inverse(r);
                    let conj: HashSet<Mat> = groups[k]
                        .elems
                        .iter()
                        .map(|v| oracle::mul(&oracle::mul(&g.elems[r], v), &g.elems[r_inv]))
                        .collect();
                    let meet: HashSet<Mat> = groups[j].elems.iter().filter(|x| conj.contains(*x)).cloned().collect();
                    let generated: HashSet<Mat> = Group::of(&d, &simples).elems.into_iter().collect();
                    ensure(verified && meet == generated, || format!("{name} ({j}, {k}): stabilizer of {:?} is not generated by {simples}", g.words[r]))?;
                    checks += 1;
                }
                reps.insert((j.clone(), k.clone()), rep);
            }
        }
        for p_big in &sets {
            for q_big in &sets {
                let big = &reps[&(p_big.clone(), q_big.clone())];
                let minima: BTreeSet<usize> = big.iter().copied().collect();
                for p in sets.iter().filter(|p| p.is_subset(p_big)) {
                    for q in sets.iter().filter(|q| q.is_subset(q_big)) {
                        let small = &reps[&(p.clone(), q.clone())];
                        for &w in &minima {
                            let brute: BTreeSet<usize> = (0..g.len()).filter(|&x| big[x] == w && small[x] == x).collect();
                            let got: BTreeSet<usize> = weyl::coset_intersection_set(&d, p, q, p_big, q_big, &element(&d, &g, w))
                                .map_err(err)?
                                .iter()
                                .map(|x| g.find(&oracle::matrix_of(x, rank)))
                                .collect();
                            ensure(got == brute, || format!("{name}: intersection set for ({p} ⊆ {p_big}, {q} ⊆ {q_big}) at {:?}", g.words[w]))?;
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checks} stabilizer and intersection checks"))
}

/// The symmetric group on `n` points generated by adjacent transpositions.
struct Perms {
    elems: Vec<Vec<usize>>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn transposition(n: usize, i: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(i, i + 1);
    t
}

impl Perms {
    fn generate(n: usize, gens: &[usize]) -> Perms {
        let id: Vec<usize> = (0..n).collect();
        let mut g = Perms { elems: vec![id.clone()], words: vec![vec![]], index: HashMap::from([(id, 0)]) };
        let mut k = 0;
        while k < g.elems.len() {
            for &i in gens {
                let p = compose(&g.elems[k], &transposition(n, i));
                if !g.index.contains_key(&p) {
                    let mut w = g.words[k].clone();
                    w.push(i);
                    g.index.insert(p.clone(), g.elems.len());
                    g.elems.push(p);
                    g.words.push(w);
                }
            }
            k += 1;
        }
        g
    }

    fn of_word(&self, n: usize, word: &[usize]) -> usize {
        let p = word.iter().fold((0..n).collect::<Vec<_>>(), |acc, &i| compose(&acc, &transposition(n, i)));
        self.index[&p]
    }

    fn coset(&self, left: &Perms, w: usize, right: &Perms) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for u in &left.elems {
            let uw = compose(u, &self.elems[w]);
            for v in &right.elems {
                s.insert(self.index[&compose(&uw, v)]);
            }
        }
        s
    }

    fn reps(&self, left: &Perms, right: &Perms) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for w in 0..self.elems.len() {
            out.insert(*self.coset(left, w, right).iter().min_by_key(|&&x| (self.words[x].len(), x)).unwrap());
        }
        out.into_iter().collect()
    }
}

fn schur_brute(name: &str, n: usize) -> Result<usize, String> {
    let d = datum(name);
    let ctx = SchurContext::new(&d).map_err(err)?;
    let g = Perms::generate(n, &(0..n - 1).collect::<Vec<_>>());
    let sets = subsets(&d);
    let parabolic: HashMap<Parabolic, Perms> = sets.iter().map(|j| (j.clone(), Perms::generate(n, j.indices()))).collect();
    let mut pairs = 0;
    for j in &sets {
        for k in &sets {
            for l in &sets {
                let (wj, wk, wl) = (&parabolic[j], &parabolic[k], &parabolic[l]);
                for x in g.reps(wj, wk) {
                    let cx = g.coset(wj, x, wk);
                    for y in g.reps(wk, wl) {
                        let cy = g.coset(wk, y, wl);
                        let mut brute: HashMap<usize, i64> = HashMap::new();
                        for &a in &cx {
                            for &b in &cy {
                                *brute.entry(g.index[&compose(&g.elems[a], &g.elems[b])]).or_default() += 1;
                            }
                        }
                        let order = wk.elems.len() as i64;
                        ensure(brute.values().all(|c| c % order == 0), || format!("{name}: brute product not divisible by {order}"))?;
                        let a = CosetCombination::basis(&d, j, k, &WeylElement::from_word(&d, &g.words[x]).map_err(err)?);
                        let b = CosetCombination::basis(&d, k, l, &WeylElement::from_word(&d, &g.words[y]).map_err(err)?);
                        let c = ctx.convolve(&a, &b).map_err(err)?;
                        let mut expanded: HashMap<usize, i64> = HashMap::new();
                        for (z, coeff) in c.coeffs() {
                            for u in g.coset(wj, g.of_word(n, z.word()), wl) {
                                *expanded.entry(u).or_default() += coeff;
                            }
                        }
                        expanded.retain(|_, c| *c != 0);
                        let scaled: HashMap<usize, i64> = brute.into_iter().map(|(u, c)| (u, c / order)).collect();
                        ensure(expanded == scaled, || format!("{name} ({j}, {k}, {l}): convolution of {:?} and {:?} disagrees", g.words[x], g.words[y]))?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(pairs)
}

fn criterion_8() -> Outcome {
    let pairs = schur_brute("A2", 3)? + schur_brute("A3", 4)?;
    let d = datum("A2");
    let seqs = a2_sequences(&d);
    for seq in &seqs {
        let built = BSBimodule::build(&d, seq).map_err(err)?.rank();
        let oracle = rank_oracle(&d, seq).map_err(err)?;
        ensure(built == oracle, || format!("{seq}: rank {built}, oracle {oracle}"))?;
    }
    Ok(format!("{pairs} coset pairs in S3 and S4, {} sequences", seqs.len()))
}

fn criterion_9() -> Outcome {
    let d = datum("affineA1");
    let rank = d.rank();
    let listed = weyl::enumerate(&d, &d.full(), 10);
    let brute = Group::generate(&d, &[0, 1], 10);
    for l in 0..=10 {
        let expected = if l == 0 { 1 } else { 2 };
        let got = listed.elements.iter().filter(|w| w.length() == l).count();
        let oracle = (0..brute.len()).filter(|&k| brute.length(k) == l).count();
        ensure(got == expected && oracle == expected, || format!("length {l}: {got} listed, {oracle} by brute force"))?;
    }
    ensure(listed.elements.len() == 21 && !listed.complete, || "enumeration overran or claimed completeness".into())?;
    let singles = [Parabolic::empty(), Parabolic::new([0]), Parabolic::new([1])];
    ensure(!d.is_finite_type(&d.full()) && singles.iter().all(|j| d.is_finite_type(j)), || "finite-type detection".into())?;
    let mut checks = 0;
    for j in &singles {
        for k in &singles {
            let (gj, gk) = (Group::of(&d, j), Group::of(&d, k));
            for w in (0..brute.len()).filter(|&w| brute.length(w) <= 8) {
                let mut best = w;
                for u in &gj.elems {
                    for v in &gk.elems {
                        let x = brute.find(&oracle::mul(&oracle::mul(u, &brute.elems[w]), v));
                        if brute.length(x) < brute.length(best) {
                            best = x;
                        }
                    }
                }
                let r = weyl::min_double_coset_rep(&d, &element(&d, &brute, w), j, k);
                ensure(oracle::matrix_of(&r, rank) == brute.elems[best], || format!("({j}, {k}): rep of {:?}", brute.words[w]))?;
                checks += 1;
            }
        }
    }
    Ok(format!("21 elements to length 10, {checks} coset reps"))
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: "1", title: "Pittie-Steinberg freeness", budget: secs(60), run: criterion_1 },
        Criterion { id: "1", title: "Pittie-Steinberg freeness, G2", budget: secs(600), run: criterion_1_g2 },
        Criterion { id: "2", title: "dual basis and diagonal", budget: secs(120), run: criterion_2 },
        Criterion { id: "3", title: "Demazure operator laws", budget: secs(60), run: criterion_3 },
        Criterion { id: "4", title: "Weyl characters", budget: secs(30), run: criterion_4 },
        Criterion { id: "5", title: "Bott-Samelson bimodules", budget: secs(300), run: criterion_5 },
        Criterion { id: "6", title: "disconnected composition", budget: secs(10), run: criterion_6 },
        Criterion { id: "7", title: "coset combinatorics", budget: secs(60), run: criterion_7 },
        Criterion { id: "8", title: "Schur algebroid oracle", budget: secs(60), run: criterion_8 },
        Criterion { id: "9", title: "Kac-Moody regime", budget: secs(30), run: criterion_9 },
    ];
    let args: Vec<String> = std::env::args().skip(1).collect();
    let only: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        if !only.is_empty() && !only.iter().any(|a| *a == c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs())),
            other => other,
        };
        let time = format!("{:.1}s/{}s", elapsed.as_secs_f64(), c.budget.as_secs());
        match outcome {
            Ok(detail) => println!("criterion {} {}: PASS [{time}] {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL [{time}] {why}", c.id, c.title);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
