//! The type B carries chain and signed `(2b+1)`-shuffles.
//!
//! Digits are drawn from `{0, ..., 2b}` in base `2b+1`, and each column also
//! receives the constant digit `b`. With `n` random summands the carry lives
//! on `{0, ..., n}`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carries::{add_columns, simulate_with, CarryTrace, ColumnSampler};
use crate::error::{check_cap, invalid, Result};
use crate::exact::{
    alternating_coefficients, binomial, digit_sum_counts, eulerian_type_b_row, factorial, int, irwin_hall_cdf,
    ratio, ExactMatrix, ProbVector, Rational,
};
use crate::groups::{all_signed_permutations, descent_table, GroupKind, SignedPermutation, MAX_N_TYPE_B};
use crate::series::Series2;
use crate::shuffles::{add_rational_tables, cut_into_piles, riffle, SeriesCheck};

/// Parameters of a type B carries chain: `n` random summands, odd base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeBCarriesChain {
    n: u32,
    base: BigInt,
}

impl TypeBCarriesChain {
    /// Base `2b+1`.
    pub fn new(n: u32, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(invalid("b must be at least 1"));
        }
        Self::with_base(n, BigInt::from(2 * b + 1))
    }

    /// Any odd base of at least 3; the constant digit is `(base-1)/2`.
    pub fn with_base(n: u32, base: BigInt) -> Result<Self> {
        if n == 0 {
            return Err(invalid("the type B chain needs n >= 1"));
        }
        if base < BigInt::from(3) || base.is_even() {
            return Err(invalid(format!("base must be odd and at least 3, got {base}")));
        }
        Ok(Self { n, base })
    }

    /// `r` steps at once: base `(2b+1)^r`.
    pub fn r_step(n: u32, b: u64, r: u32) -> Result<Self> {
        if r == 0 || b == 0 {
            return Err(invalid("need r >= 1 and b >= 1"));
        }
        Self::with_base(n, num_traits::pow(BigInt::from(2 * b + 1), r as usize))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    /// The constant digit `(base-1)/2`.
    pub fn half(&self) -> BigInt {
        (&self.base - 1) / 2
    }

    pub fn states(&self) -> usize {
        self.n as usize + 1
    }

    /// `P(i,j) = B^-n Σ_l (-1)^l C(n+1,l) C(n + (j-l)B + h - i, n)` with
    /// `B` the base and `h = (B-1)/2`.
    pub fn row(&self, i: usize) -> Result<ProbVector> {
        let states = self.states();
        if i >= states {
            return Err(invalid(format!("start state {i} is outside 0..={}", self.n)));
        }
        let offset = BigInt::from(self.n) + self.half() - BigInt::from(i);
        // Terms with j - l < 0 vanish, so only m = j - l in 0..=n is needed.
        let table: Vec<BigInt> = (0..states as u64)
            .map(|m| binomial(&offset + &self.base * BigInt::from(m), u64::from(self.n)))
            .collect();
        let signs = alternating_coefficients(self.n);
        let denom = num_traits::pow(self.base.clone(), self.n as usize);
        let entries = (0..states)
            .map(|j| {
                let num: BigInt = (0..=j).map(|l| &signs[l] * &table[j - l]).sum();
                Rational::new(num, denom.clone())
            })
            .collect();
        ProbVector::new(entries)
    }

    pub fn matrix(&self) -> ExactMatrix {
        let rows: Vec<Vec<Rational>> = (0..self.states())
            .into_par_iter()
            .map(|i| self.row(i).expect("row index in range").into_entries())
            .collect();
        ExactMatrix::from_rows(rows).expect("square by construction")
    }
}

/// The `(n+1) × (n+1)` type B transition matrix with base `2b+1`.
pub fn transition_matrix_b(n: u32, b: u64) -> Result<ExactMatrix> {
    Ok(TypeBCarriesChain::new(n, b)?.matrix())
}

/// `P^r`, computed as the one-step matrix at base `(2b+1)^r`.
pub fn r_step_matrix_b(n: u32, b: u64, r: u32) -> Result<ExactMatrix> {
    Ok(TypeBCarriesChain::r_step(n, b, r)?.matrix())
}

/// Row `i` of `P^r`; `r = 0` is the point mass.
pub fn r_step_row_b(n: u32, b: u64, r: u32, i: usize) -> Result<ProbVector> {
    if r == 0 {
        if n == 0 || i > n as usize {
            return Err(invalid(format!("start state {i} is outside 0..={n}")));
        }
        return Ok(ProbVector::point_mass(n as usize + 1, i));
    }
    TypeBCarriesChain::r_step(n, b, r)?.row(i)
}

/// The transition matrix from first principles: the next carry is `j` when
/// `j(2b+1) - b <= i + ΣX <= j(2b+1) + b`, with `n` i.i.d. uniform digits
/// `X` in `{0, ..., 2b}`.
pub fn transition_matrix_b_by_convolution(n: u32, b: u64) -> Result<ExactMatrix> {
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let base = 2 * b + 1;
    let counts = digit_sum_counts(n as usize, base);
    let total = num_traits::pow(BigInt::from(base), n as usize);
    let states = n as usize + 1;
    Ok(ExactMatrix::from_fn(states, states, |i, j| {
        let mut acc = BigInt::zero();
        for (s, c) in counts.iter().enumerate() {
            if ((i + s) as u64 + b) / base == j as u64 {
                acc += c;
            }
        }
        Rational::new(acc, total.clone())
    }))
}

/// `π(j) = Ā(n,j) / (2ⁿ n!)`, the type B Eulerian law on `{0, ..., n}`.
pub fn stationary_b(n: u32) -> Result<ProbVector> {
    if n == 0 {
        return Err(invalid("stationary law needs n >= 1"));
    }
    let order = factorial(u64::from(n)) << n as usize;
    ProbVector::new(
        eulerian_type_b_row(n)
            .into_iter()
            .map(|a| Rational::new(a, order.clone()))
            .collect(),
    )
}

/// Probability of `p` after `r` successive `(2b+1)`-shuffles from the
/// identity: `C(n + ((2b+1)^r - 1)/2 - d(p⁻¹), n) / (2b+1)^{rn}`.
pub fn shuffle_probability_b(p: &SignedPermutation, b: u64, r: u32) -> Result<Rational> {
    if b == 0 || r == 0 {
        return Err(invalid("need b >= 1 and r >= 1"));
    }
    Ok(shuffle_probability_b_base(
        p,
        &num_traits::pow(BigInt::from(2 * b + 1), r as usize),
    ))
}

/// As [`shuffle_probability_b`] for a single shuffle with an odd number of
/// piles `piles`.
pub fn shuffle_probability_b_base(p: &SignedPermutation, piles: &BigInt) -> Rational {
    let n = p.len();
    let half = (piles - 1) / 2;
    let top = BigInt::from(n) + half - BigInt::from(p.inverse().descent_number());
    Rational::new(binomial(top, n as u64), num_traits::pow(piles.clone(), n))
}

/// The law of [`shuffle_probability_b`] over all of `B_n`.
pub fn shuffle_law_b(n: usize, b: u64, r: u32) -> Result<Vec<(SignedPermutation, Rational)>> {
    check_cap("n", n, MAX_N_TYPE_B)?;
    all_signed_permutations(n)
        .into_iter()
        .map(|p| {
            let pr = shuffle_probability_b(&p, b, r)?;
            Ok((p, pr))
        })
        .collect()
}

/// The deck after dealing output position `k` from pile `labels[k]`.
///
/// Pile `p` holds the next consecutive block of cards. Piles with odd index
/// (the second, fourth, ... counting from 1) are flipped: their order is
/// reversed and every card changes sign.
pub fn signed_from_labels(n: usize, labels: &[usize], piles: usize) -> Result<SignedPermutation> {
    if labels.len() != n {
        return Err(invalid("need one label per card"));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= piles) {
        return Err(invalid(format!("label {bad} is not below {piles}")));
    }
    let mut sizes = vec![0usize; piles];
    for &l in labels {
        sizes[l] += 1;
    }
    let mut packets = build_packets(&sizes);
    Ok(SignedPermutation::from_word_unchecked(
        labels
            .iter()
            .map(|&l| packets[l].pop_front().expect("pile sized from labels"))
            .collect(),
    ))
}

fn build_packets(sizes: &[usize]) -> Vec<VecDeque<i64>> {
    let mut next = 1i64;
    sizes
        .iter()
        .enumerate()
        .map(|(p, &size)| {
            let block: Vec<i64> = (next..next + size as i64).collect();
            next += size as i64;
            if p % 2 == 1 {
                block.into_iter().rev().map(|c| -c).collect()
            } else {
                block.into_iter().collect()
            }
        })
        .collect()
}

/// One signed `(2b+1)`-shuffle: multinomial cut into `2b+1` piles, flip the
/// even-numbered piles, then riffle dropping from each pile with
/// probability proportional to its size.
pub fn sample_shuffle_b_with(n: usize, b: u64, rng: &mut dyn RngCore) -> Result<SignedPermutation> {
    if b == 0 {
        return Err(invalid("b must be at least 1"));
    }
    let sizes = cut_into_piles(n, 2 * b as usize + 1, rng);
    let mut packets = build_packets(&sizes);
    Ok(SignedPermutation::from_word_unchecked(riffle(&mut packets, rng)))
}

/// Seeded single signed shuffle.
pub fn sample_shuffle_b(n: usize, b: u64, seed: u64) -> Result<SignedPermutation> {
    sample_shuffle_b_with(n, b, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` independent signed shuffles from one seeded stream.
pub fn sample_shuffles_b(n: usize, b: u64, count: usize, seed: u64) -> Result<Vec<SignedPermutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_shuffle_b_with(n, b, &mut rng)).collect()
}

/// Law of `d(τ_r)` on `{0, ..., n}` by summing the signed shuffle law over
/// `B_n`.
pub fn descent_law_after_r_b(n: usize, b: u64, r: u32) -> Result<ProbVector> {
    check_cap("n", n, MAX_N_TYPE_B)?;
    if n == 0 {
        return Err(invalid("need n >= 1"));
    }
    let mut law = vec![Rational::zero(); n + 1];
    for (p, pr) in shuffle_law_b(n, b, r)? {
        law[p.descent_number()] += pr;
    }
    ProbVector::new(law)
}

/// Transition matrix of `d(τ_r⁻¹)` under successive signed `(2b+1)`-shuffles,
/// by brute force over `B_n × B_n`.
pub fn inverse_descent_chain_b(n: usize, b: u64) -> Result<ExactMatrix> {
    check_cap("n", n, MAX_N_TYPE_B)?;
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let group = all_signed_permutations(n);
    let piles = BigInt::from(2 * b + 1);
    let law: Vec<(SignedPermutation, Rational)> = group
        .iter()
        .map(|mu| (mu.clone(), shuffle_probability_b_base(mu, &piles)))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let states = n + 1;
    let sums = group
        .par_iter()
        .fold(
            || vec![vec![Rational::zero(); states]; states],
            |mut acc, sigma| {
                let i = sigma.inverse().descent_number();
                for (mu, w) in &law {
                    let j = mu.compose(sigma).inverse().descent_number();
                    acc[i][j] += w;
                }
                acc
            },
        )
        .reduce(|| vec![vec![Rational::zero(); states]; states], add_rational_tables);
    ExactMatrix::from_rows(
        sums.into_iter()
            .zip(eulerian_type_b_row(n as u32))
            .map(|(row, a)| row.into_iter().map(|x| x / int(a.clone())).collect())
            .collect(),
    )
}

/// Compares both sides of the type B pair-counting identity through degree
/// `(s_degree, t_degree)`:
/// `Σ c_ij^d s^i t^j / ((1-s)(1-t))^{n+1} = Σ_{a,b} C(n + 2ab + a + b - d, n) s^a t^b`.
pub fn verify_gessel_identity_b(
    n: usize,
    d: usize,
    s_degree: usize,
    t_degree: usize,
) -> Result<SeriesCheck> {
    let table = descent_table(GroupKind::B, n, d)?;
    let mut numerator = Series2::zero(s_degree, t_degree);
    for i in 0..=n {
        for j in 0..=n {
            numerator.add_term(i, j, &BigInt::from(table.get(i, j)));
        }
    }
    let lhs = &numerator * &Series2::inverse_powers(n as u64 + 1, s_degree, t_degree);
    let rhs = Series2::from_fn(s_degree, t_degree, |a, b| {
        binomial((n + 2 * a * b + a + b) as i64 - d as i64, n as u64)
    });
    Ok(SeriesCheck::compare(&lhs, &rhs))
}

/// Largest `|P(j - ½ <= U_1 + ... + U_n <= j + ½) - Ā(n,j)/(2ⁿ n!)|` over
/// `j`, for i.i.d. uniforms `U_k` on `[0,1]`. Exactly zero for every `n`.
pub fn rounding_law_check(n: u32) -> Result<Rational> {
    let pi = stationary_b(n)?;
    let half = ratio(1, 2);
    Ok((0..=n)
        .map(|j| {
            let mass = irwin_hall_cdf(n, &(int(j) + &half)) - irwin_hall_cdf(n, &(int(j) - &half));
            num_traits::Signed::abs(&(mass - &pi[j as usize]))
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Schoolbook base-`(2b+1)` addition of the addends (most significant digit
/// first) together with the constant addend `b b ... b`.
pub fn add_columns_type_b(addends: &[Vec<u64>], b: u64) -> Result<CarryTrace> {
    if b == 0 {
        return Err(invalid("b must be at least 1"));
    }
    let width = addends.iter().map(Vec::len).max().unwrap_or(0);
    let mut all = addends.to_vec();
    all.push(vec![b; width]);
    add_columns(&all, 2 * b + 1)
}

struct WithConstantDigit {
    b: u64,
}

impl ColumnSampler for WithConstantDigit {
    fn fill_column(&mut self, rng: &mut dyn RngCore, base: u64, column: &mut [u64]) {
        let (last, random) = column.split_last_mut().expect("at least the constant summand");
        for d in random {
            *d = rng.random_range(0..base);
        }
        *last = self.b;
    }
}

/// Seeded type B simulation: `n` uniform digits in `{0, ..., 2b}` plus the
/// digit `b` in every column. The trace has `n + 1` summands.
pub fn simulate_b(n: u32, b: u64, steps: usize, seed: u64) -> Result<CarryTrace> {
    if n == 0 || b == 0 {
        return Err(invalid("simulation needs n >= 1 and b >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with(n + 1, 2 * b + 1, steps, &mut rng, &mut WithConstantDigit { b })
}

/// Law of `p ∘ q` for independent `p ~ first`, `q ~ second` on `B_n`.
pub fn convolve_laws_b(
    first: &[(SignedPermutation, Rational)],
    second: &[(SignedPermutation, Rational)],
) -> Vec<(SignedPermutation, Rational)> {
    let index: HashMap<&SignedPermutation, usize> =
        first.iter().enumerate().map(|(k, (p, _))| (p, k)).collect();
    let mut out: Vec<(SignedPermutation, Rational)> = first
        .iter()
        .map(|(p, _)| (p.clone(), Rational::zero()))
        .collect();
    for (p, x) in first.iter().filter(|(_, x)| !x.is_zero()) {
        for (q, y) in second.iter().filter(|(_, y)| !y.is_zero()) {
            out[index[&p.compose(q)]].1 += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carries::is_stochastically_monotone;
    use crate::exact::{parse_rational, to_f64};
    use num_traits::One;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn n1_b1_by_hand() {
        // from 0: 0 + X + 1 with X in {0,1,2} gives carries 0, 0, 1
        // from 1: 1 + X + 1 gives carries 0, 1, 1
        let p = transition_matrix_b(1, 1).unwrap();
        assert_eq!(p.row(0), &[q("2/3"), q("1/3")]);
        assert_eq!(p.row(1), &[q("1/3"), q("2/3")]);
    }

    #[test]
    fn formula_matches_convolution() {
        for n in 1..=5 {
            for b in 1..=2 {
                assert_eq!(
                    transition_matrix_b(n, b).unwrap(),
                    transition_matrix_b_by_convolution(n, b).unwrap(),
                    "n = {n}, b = {b}"
                );
            }
        }
    }

    #[test]
    fn rows_are_stochastic() {
        for n in 1..=6 {
            for b in 1..=3 {
                let p = transition_matrix_b(n, b).unwrap();
                assert_eq!(p.rows(), n as usize + 1);
                assert!(p.is_row_stochastic());
                assert!(is_stochastically_monotone(&p));
            }
        }
    }

    #[test]
    fn r_step_is_power() {
        let two = r_step_matrix_b(2, 1, 2).unwrap();
        assert_eq!(two, TypeBCarriesChain::with_base(2, 9.into()).unwrap().matrix());
        assert_eq!(two, transition_matrix_b(2, 1).unwrap().pow(2).unwrap());
        for n in 1..=4 {
            assert_eq!(r_step_matrix_b(n, 2, 1).unwrap(), transition_matrix_b(n, 2).unwrap());
            assert_eq!(
                r_step_matrix_b(n, 1, 3).unwrap(),
                transition_matrix_b(n, 1).unwrap().pow(3).unwrap()
            );
        }
    }

    #[test]
    fn odd_bases_compose() {
        for n in 1..=4 {
            let three = transition_matrix_b(n, 1).unwrap();
            let five = transition_matrix_b(n, 2).unwrap();
            let fifteen = TypeBCarriesChain::with_base(n, 15.into()).unwrap().matrix();
            assert_eq!(three.mul(&five).unwrap(), fifteen);
            assert_eq!(five.mul(&three).unwrap(), fifteen);
        }
        assert!(TypeBCarriesChain::with_base(2, 4.into()).is_err());
    }

    #[test]
    fn stationary_values() {
        assert_eq!(stationary_b(1).unwrap().entries(), &[q("1/2"), q("1/2")]);
        assert_eq!(stationary_b(2).unwrap().entries(), &[q("1/8"), q("6/8"), q("1/8")]);
        for n in 1..=6 {
            let pi = stationary_b(n).unwrap();
            for b in 1..=3 {
                let p = transition_matrix_b(n, b).unwrap();
                assert_eq!(p.left_mul(pi.entries()).unwrap(), pi.entries(), "n = {n}, b = {b}");
            }
        }
    }

    #[test]
    fn stationary_matches_group_counts() {
        for n in 1..=5usize {
            let mut counts = vec![0u64; n + 1];
            for p in all_signed_permutations(n) {
                counts[p.descent_number()] += 1;
            }
            let weights: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
            assert_eq!(stationary_b(n as u32).unwrap(), ProbVector::from_weights(&weights).unwrap());
        }
    }

    #[test]
    fn signed_shuffle_probabilities() {
        let law = shuffle_law_b(1, 1, 1).unwrap();
        assert_eq!(law[0].0.word(), &[1]);
        assert_eq!(law[0].1, q("2/3"));
        assert_eq!(law[1].1, q("1/3"));
        for n in 1..=4 {
            for (b, r) in [(1, 1), (1, 2), (2, 1)] {
                let total: Rational = shuffle_law_b(n, b, r).unwrap().into_iter().map(|(_, x)| x).sum();
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn label_dealing_is_exact() {
        for n in 1..=3usize {
            for b in 1..=2u64 {
                let piles = 2 * b as usize + 1;
                let total = piles.pow(n as u32);
                let mut counts: HashMap<SignedPermutation, u64> = HashMap::new();
                let mut labels = vec![0usize; n];
                for code in 0..total {
                    let mut c = code;
                    for l in labels.iter_mut() {
                        *l = c % piles;
                        c /= piles;
                    }
                    *counts.entry(signed_from_labels(n, &labels, piles).unwrap()).or_default() += 1;
                }
                for (p, pr) in shuffle_law_b(n, b, 1).unwrap() {
                    let c = counts.get(&p).copied().unwrap_or(0);
                    assert_eq!(ratio(c, total as u64), pr, "n = {n}, b = {b}, {p}");
                }
            }
        }
    }

    #[test]
    fn signed_shuffles_compose() {
        for n in 1..=3 {
            let three = shuffle_law_b(n, 1, 1).unwrap();
            let five = shuffle_law_b(n, 2, 1).unwrap();
            let fifteen: Vec<_> = all_signed_permutations(n)
                .into_iter()
                .map(|p| {
                    let pr = shuffle_probability_b_base(&p, &15.into());
                    (p, pr)
                })
                .collect();
            assert_eq!(convolve_laws_b(&three, &five), fifteen);
            assert_eq!(convolve_laws_b(&three, &three), shuffle_law_b(n, 1, 2).unwrap());
        }
    }

    #[test]
    fn carries_equal_shuffle_descents() {
        for n in 1..=4 {
            for b in 1..=2 {
                for r in 1..=3 {
                    assert_eq!(
                        descent_law_after_r_b(n, b, r).unwrap(),
                        r_step_row_b(n as u32, b, r, 0).unwrap(),
                        "n = {n}, b = {b}, r = {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_chain_is_time_reversal() {
        for n in 1..=3usize {
            for b in 1..=2 {
                let m = inverse_descent_chain_b(n, b).unwrap();
                let p = transition_matrix_b(n as u32, b).unwrap();
                let pi = stationary_b(n as u32).unwrap();
                assert!(m.is_row_stochastic());
                for i in 0..=n {
                    for j in 0..=n {
                        assert_eq!(&m[(i, j)] * &pi[i], &pi[j] * &p[(j, i)]);
                    }
                }
                assert_eq!(m.left_mul(pi.entries()).unwrap(), pi.entries());
            }
        }
    }

    #[test]
    fn pair_counting_identity() {
        let check = verify_gessel_identity_b(2, 0, 5, 5).unwrap();
        assert!(check.holds, "{check:?}");
        assert!(verify_gessel_identity_b(1, 0, 6, 6).unwrap().holds);
        assert!(verify_gessel_identity_b(1, 1, 6, 6).unwrap().holds);
        assert!(verify_gessel_identity_b(3, 2, 4, 4).unwrap().holds);
    }

    #[test]
    fn rounding_law() {
        for n in 1..=8 {
            assert!(rounding_law_check(n).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn worked_addition() {
        let trace = add_columns_type_b(&[vec![2, 2, 2], vec![2, 0, 1]], 1).unwrap();
        assert_eq!(trace.carries(), &[0, 1, 1, 2]);
        assert!(trace.is_consistent());
    }

    #[test]
    fn simulation_stays_in_range() {
        let trace = simulate_b(3, 2, 2000, 9).unwrap();
        assert_eq!(trace, simulate_b(3, 2, 2000, 9).unwrap());
        assert!(trace.carries().iter().all(|&k| k <= 3));
        assert!(trace.is_consistent());
        assert!(trace.column(5)[3] == 2);
    }

    #[test]
    fn sampler_one_card() {
        let draws = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let positive = (0..draws)
            .filter(|_| sample_shuffle_b_with(1, 1, &mut rng).unwrap().word()[0] > 0)
            .count();
        let p = 2.0 / 3.0;
        let sd = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((positive as f64 / draws as f64 - p).abs() < 4.0 * sd);
        assert_eq!(sample_shuffle_b(6, 2, 4).unwrap(), sample_shuffle_b(6, 2, 4).unwrap());
    }

    #[test]
    fn sampler_chi_square_two_cards() {
        let draws = 100_000u64;
        let law = shuffle_law_b(2, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut counts: HashMap<SignedPermutation, u64> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sample_shuffle_b_with(2, 1, &mut rng).unwrap()).or_default() += 1;
        }
        // the single element with two inverse descents is unreachable
        let impossible: Vec<_> = law.iter().filter(|(_, pr)| pr.is_zero()).collect();
        assert_eq!(impossible.len(), 1);
        assert!(!counts.contains_key(&impossible[0].0));
        let chi2: f64 = law
            .iter()
            .filter(|(_, pr)| !pr.is_zero())
            .map(|(p, pr)| {
                let expected = to_f64(pr) * draws as f64;
                let observed = counts.get(p).copied().unwrap_or(0) as f64;
                (observed - expected).powi(2) / expected
            })
            .sum();
        // upper 10^-3 point of chi-square with 6 degrees of freedom
        assert!(chi2 < 22.458, "chi2 = {chi2}");
    }
}
