//! Brute-force ground truth: exact `I(a)` at a concrete integer `n` through
//! the Weingarten formula
//!
//! ```text
//! I(a) = sum_{pi, sigma in D_k} delta_pi(i) delta_sigma(j) W_kn(pi, sigma),
//! W_kn = G_kn^{-1},  G_kn(pi, sigma) = n^{|pi v sigma|}.
//! ```
//!
//! Every linear solve is restricted to the vectors invariant under the
//! relabellings that fix the right-hand side. `G_kn` commutes with those
//! relabellings, so the restricted system is a quotient of `G x = v` with one
//! unknown per orbit, it has the same solution, and it is invertible whenever
//! `G_kn` is. For the right-hand side `e_pi` the orbits are the coset types,
//! and that quotient is invertible *exactly* when `G_kn` is, which is how
//! singularity is detected.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bareiss;
use crate::error::{Error, Result};
use crate::exact_arith::ExactRational;
use crate::matrix::ExponentMatrix;
use crate::pairings::{
    cached_pairings, coset_type_unchecked, fits_labels, fitting_pairings, incidence,
    join_blocks_unchecked, multi_indices_of, MultiIndex, Pairing,
};

/// Largest `k` for explicit Gram construction unless the caller opts in.
pub const DEFAULT_GRAM_LIMIT: usize = 6;
/// Largest half-degree the oracle evaluates unless the caller opts in.
pub const DEFAULT_ORACLE_LIMIT: usize = 5;

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2 (got {n})")));
    }
    Ok(())
}

fn powers_of(n: u32, k: usize) -> Vec<BigInt> {
    let n = BigInt::from(n);
    (0..=k).map(|e| Pow::pow(&n, e)).collect()
}

/// `G_kn(pi, sigma) = n^{|pi v sigma|}` in canonical pairing order.
///
/// Entries are kept as join block counts plus a table of powers of `n`.
pub struct GramMatrix {
    k: usize,
    n: u32,
    pairings: Arc<Vec<Pairing>>,
    blocks: Vec<u8>,
    powers: Vec<BigInt>,
}

impl GramMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.pairings.len()
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.powers[usize::from(self.blocks[row * self.size() + col])]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    /// Full, unreduced exact solve of `G x = rhs`.
    pub fn solve(&self, rhs: &[BigInt]) -> Result<Vec<ExactRational>> {
        if rhs.len() != self.size() {
            return Err(Error::contract("right-hand side has the wrong length"));
        }
        bareiss::solve(self.to_rows(), rhs.to_vec())
            .ok_or(Error::GramSingular { k: self.k, n: self.n })
    }
}

pub fn gram_matrix(k: usize, n: u32) -> Result<GramMatrix> {
    gram_matrix_with_limit(k, n, DEFAULT_GRAM_LIMIT)
}

pub fn gram_matrix_with_limit(k: usize, n: u32, limit: usize) -> Result<GramMatrix> {
    check_n(n)?;
    if k == 0 {
        return Err(Error::domain("the Gram matrix needs k >= 1"));
    }
    if k > limit {
        return Err(Error::Resource { what: format!("Gram matrix at k={k}"), limit });
    }
    let pairings = cached_pairings(k)?;
    let size = pairings.len();
    let mut blocks = vec![0u8; size * size];
    blocks
        .par_chunks_mut(size)
        .zip(pairings.par_iter())
        .for_each(|(row, p)| {
            for (slot, s) in row.iter_mut().zip(pairings.iter()) {
                *slot = join_blocks_unchecked(p, s) as u8;
            }
        });
    Ok(GramMatrix { k, n, pairings, blocks, powers: powers_of(n, k) })
}

/// An orbit decomposition of `D_k`: class id per pairing plus one
/// representative index per class.
struct Orbits {
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

fn orbits_by<K: std::hash::Hash + Eq>(
    pairings: &[Pairing],
    key: impl Fn(&Pairing) -> K,
) -> (Orbits, HashMap<K, usize>) {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(pairings.len());
    let mut reps = Vec::new();
    for (idx, p) in pairings.iter().enumerate() {
        let next = ids.len();
        let id = *ids.entry(key(p)).or_insert(next);
        if id == reps.len() {
            reps.push(idx);
        }
        class_of.push(id);
    }
    (Orbits { class_of, reps }, ids)
}

/// Quotient of `G_kn` on orbit-constant vectors:
/// `Q(a, b) = sum_{sigma in O_b} n^{|rep_a v sigma|}`.
fn quotient_gram(pairings: &[Pairing], orbits: &Orbits, powers: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = orbits.reps.len();
    orbits
        .reps
        .par_iter()
        .map(|&rep| {
            let p = &pairings[rep];
            // count by (class, blocks) first, then weight by powers
            let mut counts = vec![0u64; m * powers.len()];
            for (s, &cls) in pairings.iter().zip(&orbits.class_of) {
                counts[cls * powers.len() + join_blocks_unchecked(p, s)] += 1;
            }
            (0..m)
                .map(|b| {
                    let mut acc = BigInt::zero();
                    for (e, pw) in powers.iter().enumerate() {
                        let c = counts[b * powers.len() + e];
                        if c != 0 {
                            acc += pw * c;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// The Weingarten function at `(k, n)`: `W_kn(pi, sigma)` as a function of
/// the coset type of `(pi, sigma)`.
#[derive(Debug)]
pub struct WeingartenFunction {
    k: usize,
    n: u32,
    values: HashMap<Vec<usize>, ExactRational>,
}

impl WeingartenFunction {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Value at a coset type (partition of `k`, descending).
    pub fn at_type(&self, coset_type: &[usize]) -> Option<&ExactRational> {
        self.values.get(coset_type)
    }

    pub fn entry(&self, p: &Pairing, s: &Pairing) -> Result<ExactRational> {
        if p.k() != self.k || s.k() != self.k {
            return Err(Error::contract(format!(
                "pairings of size {} and {} for k={}",
                p.k(),
                s.k(),
                self.k
            )));
        }
        Ok(self.values[&coset_type_unchecked(p, s)].clone())
    }
}

/// Solves `G_kn x = e_{pi0}` on vectors constant on coset types relative to
/// `pi0`; errors with [`Error::GramSingular`] iff `G_kn` is singular.
pub fn weingarten_function(k: usize, n: u32) -> Result<Arc<WeingartenFunction>> {
    weingarten_function_with_limit(k, n, DEFAULT_GRAM_LIMIT)
}

pub fn weingarten_function_with_limit(
    k: usize,
    n: u32,
    limit: usize,
) -> Result<Arc<WeingartenFunction>> {
    check_n(n)?;
    if k > limit {
        return Err(Error::Resource { what: format!("Weingarten matrix at k={k}"), limit });
    }
    type Cache = Mutex<HashMap<(usize, u32), Arc<WeingartenFunction>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(w) = cache.lock().expect("cache poisoned").get(&(k, n)) {
        return Ok(Arc::clone(w));
    }
    let pairings = cached_pairings(k)?;
    let base = Pairing::identity(k);
    let (orbits, ids) = orbits_by(&pairings, |s| coset_type_unchecked(&base, s));
    let q = quotient_gram(&pairings, &orbits, &powers_of(n, k));
    let mut rhs = vec![BigInt::zero(); orbits.reps.len()];
    rhs[ids[&vec![1; k]]] = BigInt::one();
    let y = bareiss::solve(q, rhs).ok_or(Error::GramSingular { k, n })?;
    let values = ids.into_iter().map(|(ty, id)| (ty, y[id].clone())).collect();
    let w = Arc::new(WeingartenFunction { k, n, values });
    cache
        .lock()
        .expect("cache poisoned")
        .entry((k, n))
        .or_insert_with(|| Arc::clone(&w));
    Ok(w)
}

/// Entry `(p, s)` of `W_kn = G_kn^{-1}`.
/// Whether `G_kn` is singular. Within the default limit.
pub fn gram_is_singular(k: usize, n: u32) -> Result<bool> {
    match weingarten_function(k, n) {
        Ok(_) => Ok(false),
        Err(Error::GramSingular { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

pub fn weingarten_entry(k: usize, n: u32, p: &Pairing, s: &Pairing) -> Result<ExactRational> {
    if p.k() != k || s.k() != k {
        return Err(Error::contract(format!(
            "pairings of size {} and {} for k={k}",
            p.k(),
            s.k()
        )));
    }
    weingarten_function(k, n)?.entry(p, s)
}

/// The full Weingarten matrix with its row/column pairing order.
pub fn weingarten_matrix(k: usize, n: u32) -> Result<(Vec<Pairing>, Vec<Vec<ExactRational>>)> {
    let w = weingarten_function(k, n)?;
    let pairings = cached_pairings(k)?;
    let rows = pairings
        .iter()
        .map(|p| pairings.iter().map(|s| w.values[&coset_type_unchecked(p, s)].clone()).collect())
        .collect();
    Ok((pairings.to_vec(), rows))
}

/// `I(a)` at integer `n` via the Weingarten formula.
pub fn integral_oracle(a: &ExponentMatrix, n: u32) -> Result<ExactRational> {
    integral_oracle_with_limit(a, n, DEFAULT_ORACLE_LIMIT)
}

fn oracle_preamble(a: &ExponentMatrix, n: u32, limit: usize) -> Result<Option<usize>> {
    check_n(n)?;
    if a.row_sums().iter().chain(a.col_sums().iter()).any(|s| s % 2 != 0) {
        return Ok(None);
    }
    let k = a.half_degree().expect("admissible implies even total");
    if k > limit {
        return Err(Error::Resource { what: format!("oracle at half-degree {k}"), limit });
    }
    Ok(Some(k))
}

fn young_key(p: &Pairing, labels: &[u32]) -> Vec<(u32, u32)> {
    let mut key: Vec<(u32, u32)> = p
        .pairs()
        .into_iter()
        .map(|(l, r)| {
            let (x, y) = (labels[l - 1], labels[r - 1]);
            (x.min(y), x.max(y))
        })
        .collect();
    key.sort_unstable();
    key
}

/// What the oracle does when `G_kn` is singular.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularPolicy {
    /// Report [`Error::GramSingular`].
    #[default]
    Refuse,
    /// Solve the consistent system `G x = v` with any solution. The
    /// vector `u` of the other side lies in the range of `G`, so `u . x` is
    /// the same for every solution and equals the integral.
    ConsistentSolve,
}

pub fn integral_oracle_with_limit(a: &ExponentMatrix, n: u32, limit: usize) -> Result<ExactRational> {
    integral_oracle_with(a, n, limit, SingularPolicy::Refuse)
}

pub fn integral_oracle_with(
    a: &ExponentMatrix,
    n: u32,
    limit: usize,
    policy: SingularPolicy,
) -> Result<ExactRational> {
    let Some(k) = oracle_preamble(a, n, limit)? else {
        return Ok(ExactRational::zero());
    };
    if k == 0 {
        return Ok(ExactRational::one());
    }
    let singular = match weingarten_function_with_limit(k, n, limit.max(k)) {
        Ok(_) => false,
        Err(Error::GramSingular { .. }) if policy == SingularPolicy::ConsistentSolve => true,
        Err(e) => return Err(e),
    };

    let (rows, cols) = multi_indices_of(a)?;
    let pairings = cached_pairings(k)?;
    let by_rows = orbits_by(&pairings, |p| young_key(p, rows.entries()));
    let by_cols = orbits_by(&pairings, |p| young_key(p, cols.entries()));
    // W is symmetric: solve against whichever side has fewer orbits
    let ((orbits, ids), solve_labels, other): ((Orbits, HashMap<_, _>), &MultiIndex, &MultiIndex) =
        if by_rows.0.reps.len() <= by_cols.0.reps.len() {
            (by_rows, &rows, &cols)
        } else {
            (by_cols, &cols, &rows)
        };

    let q = quotient_gram(&pairings, &orbits, &powers_of(n, k));
    let rhs: Vec<BigInt> = orbits
        .reps
        .iter()
        .map(|&r| BigInt::from(u8::from(fits_labels(&pairings[r], solve_labels.entries()))))
        .collect();
    let y = if singular {
        bareiss::solve_consistent(q, rhs)
    } else {
        bareiss::solve(q, rhs)
    }
    .ok_or(Error::GramSingular { k, n })?;

    let mut counts = vec![0u64; y.len()];
    for p in fitting_pairings(other)? {
        counts[ids[&young_key(&p, solve_labels.entries())]] += 1;
    }
    Ok(counts
        .into_iter()
        .zip(y)
        .filter(|(c, _)| *c != 0)
        .map(|(c, v)| v * ExactRational::from(c))
        .sum())
}

/// `I(a)` as the literal double sum of Weingarten entries over fitting
/// pairs. Slower than [`integral_oracle`]; kept as an independent route.
pub fn integral_oracle_double_sum(a: &ExponentMatrix, n: u32, limit: usize) -> Result<ExactRational> {
    let Some(k) = oracle_preamble(a, n, limit)? else {
        return Ok(ExactRational::zero());
    };
    if k == 0 {
        return Ok(ExactRational::one());
    }
    let w = weingarten_function_with_limit(k, n, limit.max(k))?;
    let (rows, cols) = multi_indices_of(a)?;
    let fit_rows = fitting_pairings(&rows)?;
    let fit_cols = fitting_pairings(&cols)?;
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for p in &fit_rows {
        for s in &fit_cols {
            *counts.entry(coset_type_unchecked(p, s)).or_default() += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(ty, c)| w.values[&ty].clone() * ExactRational::from(c))
        .sum())
}

/// The elementary matrix of `(p, s)`: `a_ij = #{x : x in p_i, x in s_j}`.
pub fn elementary_matrix_of(p: &Pairing, s: &Pairing) -> Result<ExponentMatrix> {
    let rows = incidence(p, s)?;
    if rows.is_empty() {
        return Ok(ExponentMatrix::empty());
    }
    ExponentMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairings::enumerate_pairings;

    fn m(rows: &[&[u32]]) -> ExponentMatrix {
        ExponentMatrix::from_rows(rows).unwrap()
    }

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a, b)
    }

    fn pr(s: &str) -> Pairing {
        s.parse().unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(2, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 9 } else { 3 };
                assert_eq!(g.entry(i, j), &BigInt::from(want));
            }
        }
        let g = gram_matrix(1, 7).unwrap();
        assert_eq!(g.size(), 1);
        assert_eq!(g.entry(0, 0), &BigInt::from(7));

        let g = gram_matrix(3, 4).unwrap();
        let i = g.pairings().iter().position(|p| *p == pr("(1 2)(3 4)(5 6)")).unwrap();
        let j = g.pairings().iter().position(|p| *p == pr("(1 3)(2 4)(5 6)")).unwrap();
        assert_eq!(g.entry(i, j), &BigInt::from(16));
    }

    #[test]
    fn gram_symmetric_with_dominant_diagonal() {
        for k in 1..=4 {
            let g = gram_matrix(k, 3).unwrap();
            let diag = BigInt::from(3).pow(k as u32);
            for i in 0..g.size() {
                assert_eq!(g.entry(i, i), &diag);
                for j in 0..g.size() {
                    assert_eq!(g.entry(i, j), g.entry(j, i));
                    assert!(g.entry(i, j) <= &diag);
                }
            }
        }
        assert!(matches!(gram_matrix(7, 3), Err(Error::Resource { .. })));
    }

    #[test]
    fn weingarten_k2_values() {
        let all = enumerate_pairings(2).unwrap();
        assert_eq!(weingarten_entry(2, 3, &all[0], &all[0]).unwrap(), q(2, 15));
        assert_eq!(weingarten_entry(2, 3, &all[0], &all[1]).unwrap(), q(-1, 30));
        let one = pr("(1 2)");
        assert_eq!(weingarten_entry(1, 5, &one, &one).unwrap(), q(1, 5));
    }

    #[test]
    fn reduced_solve_matches_full_solve() {
        for k in 1..=3 {
            for n in [2u32, 3, 4, 7] {
                let g = gram_matrix(k, n).unwrap();
                let w = weingarten_function(k, n);
                for (si, s) in g.pairings().iter().enumerate() {
                    let mut e = vec![BigInt::zero(); g.size()];
                    e[si] = BigInt::one();
                    match (g.solve(&e), &w) {
                        (Ok(x), Ok(w)) => {
                            for (p, xp) in g.pairings().iter().zip(&x) {
                                assert_eq!(&w.entry(p, s).unwrap(), xp, "k={k} n={n}");
                            }
                        }
                        (Err(Error::GramSingular { .. }), Err(Error::GramSingular { .. })) => {}
                        (a, b) => panic!("k={k} n={n}: full {a:?} vs reduced {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn singular_gram_is_refused() {
        let g = gram_matrix(3, 2).unwrap();
        assert_eq!(bareiss::determinant(g.to_rows()), BigInt::zero());
        assert!(matches!(weingarten_function(3, 2), Err(Error::GramSingular { k: 3, n: 2 })));
        assert!(matches!(
            integral_oracle(&m(&[&[6]]), 2),
            Err(Error::GramSingular { .. })
        ));
    }

    #[test]
    fn singular_exactly_below_k() {
        for k in 1..=4 {
            for n in 2..=6u32 {
                let det = bareiss::determinant(gram_matrix(k, n).unwrap().to_rows());
                assert_eq!(det.is_zero(), (n as usize) < k, "k={k} n={n}");
                assert_eq!(weingarten_function(k, n).is_err(), (n as usize) < k, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn consistent_solve_below_k() {
        // one-row values hold for every n >= 2
        let cases: [(&[u32], u32); 4] = [(&[6], 2), (&[4, 4], 3), (&[2, 2, 2, 2], 3), (&[8], 3)];
        for (row, n) in cases {
            let a = m(&[row]);
            assert!(matches!(integral_oracle(&a, n), Err(Error::GramSingular { .. })));
            let got = integral_oracle_with(&a, n, 5, SingularPolicy::ConsistentSolve).unwrap();
            let want = crate::closed_forms::one_row_integral(row, n).unwrap();
            assert_eq!(got, want, "{a:?} n={n}");
        }
        let a = m(&[&[4, 0], &[0, 2], &[2, 0]]);
        let two = [
            integral_oracle_with(&a, 2, 5, SingularPolicy::ConsistentSolve).unwrap(),
            integral_oracle_with(&a.transpose(), 2, 5, SingularPolicy::ConsistentSolve).unwrap(),
        ];
        assert_eq!(two[0], two[1]);
        let b = m(&[&[3, 1], &[1, 3]]);
        assert_eq!(
            integral_oracle_with(&b, 2, 5, SingularPolicy::ConsistentSolve).unwrap(),
            crate::closed_forms::integral_n2(3, 1, 1, 3)
        );
    }

    #[test]
    fn oracle_small_values() {
        assert_eq!(integral_oracle(&m(&[&[4]]), 3).unwrap(), q(1, 5));
        assert_eq!(integral_oracle(&m(&[&[2, 0], &[0, 2]]), 3).unwrap(), q(2, 15));
        assert_eq!(integral_oracle(&m(&[&[1, 1], &[1, 1]]), 3).unwrap(), q(-1, 30));
        assert_eq!(integral_oracle(&m(&[&[1]]), 3).unwrap(), ExactRational::zero());
        assert_eq!(integral_oracle(&m(&[&[2]]), 5).unwrap(), q(1, 5));
        assert_eq!(integral_oracle(&ExponentMatrix::empty(), 3).unwrap(), ExactRational::one());
        assert_eq!(integral_oracle(&m(&[&[1, 1], &[1, 1]]), 4).unwrap(), q(-1, 72));
    }

    #[test]
    fn oracle_limits_and_domain() {
        assert!(matches!(integral_oracle(&m(&[&[12]]), 8), Err(Error::Resource { .. })));
        assert!(integral_oracle_with_limit(&m(&[&[12]]), 8, 6).is_ok());
        assert!(matches!(integral_oracle(&m(&[&[2]]), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn one_linear_solve_matches_double_sum() {
        let cases: Vec<ExponentMatrix> = vec![
            m(&[&[4, 2], &[2, 2]]),
            m(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 2]]),
            m(&[&[3, 1], &[1, 1]]),
            m(&[&[2, 2, 2], &[2, 0, 0]]),
            m(&[&[1, 1], &[1, 1], &[2, 2]]),
            m(&[&[6, 2]]),
        ];
        for a in &cases {
            for n in [5u32, 6, 9] {
                assert_eq!(
                    integral_oracle(a, n).unwrap(),
                    integral_oracle_double_sum(a, n, 5).unwrap(),
                    "{a:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn oracle_matches_unreduced_formula() {
        // Unreduced evaluation: full Gram solve, then u^T x.
        let cases = [m(&[&[2, 2], &[2, 0]]), m(&[&[1, 1], &[1, 1], &[0, 2]])];
        for a in &cases {
            for n in [3u32, 4, 6] {
                let (i, j) = multi_indices_of(a).unwrap();
                let k = a.half_degree().unwrap();
                let g = gram_matrix(k, n).unwrap();
                let v: Vec<BigInt> = g
                    .pairings()
                    .iter()
                    .map(|s| BigInt::from(u8::from(fits_labels(s, j.entries()))))
                    .collect();
                let x = g.solve(&v).unwrap();
                let want: ExactRational = g
                    .pairings()
                    .iter()
                    .zip(x)
                    .filter(|(p, _)| fits_labels(p, i.entries()))
                    .map(|(_, xi)| xi)
                    .sum();
                assert_eq!(integral_oracle(a, n).unwrap(), want);
            }
        }
    }

    #[test]
    fn elementary_matrices() {
        assert_eq!(
            elementary_matrix_of(&pr("(1 2)(3 4)(5 6)"), &pr("(1 3)(2 4)(5 6)")).unwrap(),
            m(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 2]])
        );
        assert_eq!(
            elementary_matrix_of(&pr("(1 2)(3 4)"), &pr("(1 2)(3 4)")).unwrap(),
            m(&[&[2, 0], &[0, 2]])
        );
        assert_eq!(
            elementary_matrix_of(&pr("(1 2)(3 4)"), &pr("(1 3)(2 4)")).unwrap(),
            m(&[&[1, 1], &[1, 1]])
        );
        assert!(elementary_matrix_of(&pr("(1 2)"), &pr("(1 2)(3 4)")).is_err());
        for p in enumerate_pairings(3).unwrap() {
            for s in enumerate_pairings(3).unwrap() {
                let e = elementary_matrix_of(&p, &s).unwrap();
                assert!(e.col_sums().iter().all(|&c| c == 2));
                assert!(e.row_sums().iter().all(|&c| c == 2));
            }
        }
    }

    #[test]
    fn transpose_invariance() {
        let cases = [
            m(&[&[2, 1, 1], &[0, 1, 1]]),
            m(&[&[4, 2]]),
            m(&[&[1, 1], &[3, 1]]),
            m(&[&[2, 0, 2], &[0, 2, 0], &[2, 0, 0]]),
        ];
        for a in &cases {
            for n in [4u32, 5] {
                assert_eq!(integral_oracle(a, n).unwrap(), integral_oracle(&a.transpose(), n).unwrap());
            }
        }
    }

    #[test]
    fn odd_row_or_column_sum_vanishes() {
        let cases = [m(&[&[2, 1], &[1, 1]]), m(&[&[1, 1], &[0, 2]]), m(&[&[3]]), m(&[&[1, 2, 1]])];
        for a in &cases {
            assert!(integral_oracle(a, 4).unwrap().is_zero(), "{a:?}");
        }
    }
}
