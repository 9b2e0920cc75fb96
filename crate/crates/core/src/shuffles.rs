//! Gilbert–Shannon–Reeds `a`-shuffles on `S_n` and the descent chains they
//! induce.
//!
//! After an `a`-shuffle started at the identity, the arrangement `σ` (one-line
//! word, position to card) has probability `C(n + a - d(σ⁻¹) - 1, n) / aⁿ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carries::CarriesChain;
use crate::error::{check_cap, invalid, Result};
use crate::exact::{binomial, eulerian_row, int, ExactMatrix, ProbVector, Rational};
use crate::groups::{all_permutations, descent_table, GroupKind, Permutation, MAX_N_TYPE_A};
use crate::series::Series2;

/// `C(n + a - d(p⁻¹) - 1, n) / aⁿ` for an `a`-shuffle, `a >= 1`.
pub fn shuffle_probability(p: &Permutation, a: u64) -> Result<Rational> {
    if a == 0 {
        return Err(invalid("a shuffle needs at least one pile"));
    }
    Ok(shuffle_probability_big(p, &BigInt::from(a)))
}

/// As [`shuffle_probability`] for a pile count that may not fit a machine word.
pub fn shuffle_probability_big(p: &Permutation, a: &BigInt) -> Rational {
    let n = p.len();
    let d = p.inverse().descent_number();
    let top = BigInt::from(n) + a - BigInt::from(d) - 1;
    Rational::new(binomial(top, n as u64), num_traits::pow(a.clone(), n))
}

/// The full law of an `a`-shuffle, indexed like [`all_permutations`].
pub fn shuffle_law(n: usize, a: u64) -> Result<Vec<(Permutation, Rational)>> {
    check_cap("n", n, MAX_N_TYPE_A)?;
    all_permutations(n)
        .into_iter()
        .map(|p| {
            let pr = shuffle_probability(&p, a)?;
            Ok((p, pr))
        })
        .collect()
}

/// Law of `p ∘ q` with `p` drawn from `first` and `q` from `second`
/// independently. Both laws must be over the same `S_n` ordering.
pub fn convolve_laws(
    first: &[(Permutation, Rational)],
    second: &[(Permutation, Rational)],
) -> Vec<(Permutation, Rational)> {
    let index: HashMap<&Permutation, usize> =
        first.iter().enumerate().map(|(k, (p, _))| (p, k)).collect();
    let mut out: Vec<(Permutation, Rational)> = first
        .iter()
        .map(|(p, _)| (p.clone(), Rational::zero()))
        .collect();
    for (p, x) in first {
        if x.is_zero() {
            continue;
        }
        for (q, y) in second {
            if y.is_zero() {
                continue;
            }
            let k = index[&p.compose(q)];
            out[k].1 += x * y;
        }
    }
    out
}

/// The arrangement produced by giving card `k` (top = 1) the digit
/// `digits[k-1]` and stable-sorting by digit, inverted so that it is the
/// forward shuffle rather than the inverse shuffle.
pub fn permutation_from_digits(digits: &[u64]) -> Permutation {
    let mut order: Vec<usize> = (1..=digits.len()).collect();
    order.sort_by_key(|&card| digits[card - 1]);
    Permutation::from_word_unchecked(order).inverse()
}

/// One `a`-shuffle via i.i.d. uniform digits.
pub fn sample_shuffle_with(n: usize, a: u64, rng: &mut dyn RngCore) -> Result<Permutation> {
    if a == 0 {
        return Err(invalid("a shuffle needs at least one pile"));
    }
    let digits: Vec<u64> = (0..n).map(|_| rng.random_range(0..a)).collect();
    Ok(permutation_from_digits(&digits))
}

/// Seeded single `a`-shuffle.
pub fn sample_shuffle(n: usize, a: u64, seed: u64) -> Result<Permutation> {
    sample_shuffle_with(n, a, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` successive independent `a`-shuffles from one seeded stream.
pub fn sample_shuffles(n: usize, a: u64, count: usize, seed: u64) -> Result<Vec<Permutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_shuffle_with(n, a, &mut rng)).collect()
}

/// One `a`-shuffle done physically: multinomial cut into `a` packets, then
/// drop cards one at a time with probability proportional to packet size.
pub fn riffle_shuffle_with(n: usize, a: u64, rng: &mut dyn RngCore) -> Result<Permutation> {
    if a == 0 {
        return Err(invalid("a shuffle needs at least one pile"));
    }
    let piles = cut_into_piles(n, a as usize, rng);
    let mut packets: Vec<std::collections::VecDeque<usize>> = Vec::with_capacity(piles.len());
    let mut next = 1;
    for &size in &piles {
        packets.push((next..next + size).collect());
        next += size;
    }
    Ok(Permutation::from_word_unchecked(riffle(&mut packets, rng)))
}

/// Multinomial(n; 1/k, ..., 1/k) packet sizes, top packet first.
pub(crate) fn cut_into_piles(n: usize, k: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let mut sizes = vec![0usize; k];
    for _ in 0..n {
        sizes[rng.random_range(0..k)] += 1;
    }
    sizes
}

/// Drops from the packets, choosing each packet with probability
/// proportional to the cards it still holds.
pub(crate) fn riffle<T: Copy>(
    packets: &mut [std::collections::VecDeque<T>],
    rng: &mut dyn RngCore,
) -> Vec<T> {
    let mut remaining: usize = packets.iter().map(|p| p.len()).sum();
    let mut out = Vec::with_capacity(remaining);
    while remaining > 0 {
        let mut pick = rng.random_range(0..remaining);
        let chosen = packets
            .iter_mut()
            .find(|p| {
                if pick < p.len() {
                    true
                } else {
                    pick -= p.len();
                    false
                }
            })
            .expect("a nonempty packet");
        out.push(chosen.pop_front().expect("nonempty"));
        remaining -= 1;
    }
    out
}

/// Exact law of the digit sampler: all `aⁿ` digit words, each with weight
/// `a^{-n}`.
pub fn digit_sampler_law(n: usize, a: u64) -> Result<Vec<(Permutation, Rational)>> {
    check_cap("n", n, MAX_N_TYPE_A)?;
    if a == 0 {
        return Err(invalid("a shuffle needs at least one pile"));
    }
    let total = a
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| invalid("too many digit words to enumerate"))?;
    let perms = all_permutations(n);
    let index: HashMap<&Permutation, usize> = perms.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut counts = vec![0u64; perms.len()];
    let mut digits = vec![0u64; n];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut() {
            *d = c % a;
            c /= a;
        }
        counts[index[&permutation_from_digits(&digits)]] += 1;
    }
    Ok(perms
        .iter()
        .zip(counts)
        .map(|(p, c)| (p.clone(), Rational::new(c.into(), total.into())))
        .collect())
}

/// Which computation to use for the law of `d(τ_r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentLawRoute {
    /// `Σ_i b^{-rn} C(n + b^r - i - 1, n) c_{ij}^0` from the brute-force table.
    DescentTable,
    /// `b^{-rn} Σ_l (-1)^l C(n+1,l) C(n-1+(j+1-l)b^r, n)`.
    ClosedForm,
    /// Sum of the permutation law over all of `S_n`.
    Enumeration,
}

/// Law of the number of descents after `r` successive `b`-shuffles from the
/// identity, on `{0, ..., n-1}`.
pub fn descent_law_after_r(n: usize, b: u64, r: u32, route: DescentLawRoute) -> Result<ProbVector> {
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let piles = num_traits::pow(BigInt::from(b), r as usize);
    let denom = num_traits::pow(piles.clone(), n);
    match route {
        DescentLawRoute::DescentTable => {
            let table = descent_table(GroupKind::A, n, 0)?;
            let weights: Vec<BigInt> = (0..n)
                .map(|i| binomial(BigInt::from(n) + &piles - BigInt::from(i) - 1, n as u64))
                .collect();
            ProbVector::new(
                (0..n)
                    .map(|j| {
                        let num: BigInt = (0..n)
                            .map(|i| &weights[i] * BigInt::from(table.get(i, j)))
                            .sum();
                        Rational::new(num, denom.clone())
                    })
                    .collect(),
            )
        }
        DescentLawRoute::ClosedForm => {
            if piles == BigInt::one() {
                return Ok(ProbVector::point_mass(n, 0));
            }
            CarriesChain::with_base(n as u32, piles)?.row(0)
        }
        DescentLawRoute::Enumeration => {
            check_cap("n", n, MAX_N_TYPE_A)?;
            let mut law = vec![Rational::zero(); n];
            for p in all_permutations(n) {
                law[p.descent_number()] += shuffle_probability_big(&p, &piles);
            }
            ProbVector::new(law)
        }
    }
}

/// Transition matrix of `d(τ_r⁻¹)` under successive `b`-shuffles, by direct
/// summation over `S_n × S_n`:
/// `M(i,j) = A(n,i)⁻¹ Σ_{σ: d(σ⁻¹)=i} Σ_{μ: d((μσ)⁻¹)=j} P_b(μ)`.
pub fn inverse_descent_chain(n: usize, b: u64) -> Result<ExactMatrix> {
    check_cap("n", n, MAX_N_TYPE_A)?;
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let perms = all_permutations(n);
    let law: Vec<(Permutation, Rational)> = perms
        .iter()
        .map(|mu| (mu.clone(), shuffle_probability_big(mu, &BigInt::from(b))))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let sums = perms
        .par_iter()
        .fold(
            || vec![vec![Rational::zero(); n]; n],
            |mut acc, sigma| {
                let i = sigma.inverse().descent_number();
                for (mu, w) in &law {
                    let j = mu.compose(sigma).inverse().descent_number();
                    acc[i][j] += w;
                }
                acc
            },
        )
        .reduce(|| vec![vec![Rational::zero(); n]; n], add_rational_tables);
    let eulerian = eulerian_row(n as u32);
    ExactMatrix::from_rows(
        sums.into_iter()
            .zip(eulerian)
            .map(|(row, a)| row.into_iter().map(|x| x / int(a.clone())).collect())
            .collect(),
    )
}

pub(crate) fn add_rational_tables(
    mut a: Vec<Vec<Rational>>,
    b: Vec<Vec<Rational>>,
) -> Vec<Vec<Rational>> {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
    a
}

/// Outcome of a coefficientwise generating-function comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    pub holds: bool,
    /// Coefficients compared, `(max_s + 1)(max_t + 1)`.
    pub compared: usize,
    /// First mismatch `(a, b, lhs, rhs)`, if any.
    pub witness: Option<(usize, usize, BigInt, BigInt)>,
}

impl SeriesCheck {
    pub(crate) fn compare(lhs: &Series2, rhs: &Series2) -> Self {
        let compared = (lhs.max_s() + 1) * (lhs.max_t() + 1);
        match lhs.first_difference(rhs) {
            None => Self {
                holds: true,
                compared,
                witness: None,
            },
            Some((a, b)) => Self {
                holds: false,
                compared,
                witness: Some((a, b, lhs.coeff(a, b).clone(), rhs.coeff(a, b).clone())),
            },
        }
    }
}

/// Compares both sides of Gessel's identity for `S_n` through degree
/// `(s_degree, t_degree)`:
/// `Σ c_ij^d s^{i+1} t^{j+1} / ((1-s)(1-t))^{n+1} = Σ_{a,b} C(n+ab-d-1, n) s^a t^b`.
pub fn verify_gessel_identity(
    n: usize,
    d: usize,
    s_degree: usize,
    t_degree: usize,
) -> Result<SeriesCheck> {
    let table = descent_table(GroupKind::A, n, d)?;
    let mut numerator = Series2::zero(s_degree, t_degree);
    for i in 0..n {
        for j in 0..n {
            numerator.add_term(i + 1, j + 1, &BigInt::from(table.get(i, j)));
        }
    }
    let lhs = &numerator * &Series2::inverse_powers(n as u64 + 1, s_degree, t_degree);
    let rhs = Series2::from_fn(s_degree, t_degree, |a, b| {
        binomial((n + a * b) as i64 - d as i64 - 1, n as u64)
    });
    Ok(SeriesCheck::compare(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carries::{r_step_row, stationary, transition_matrix};
    use crate::exact::{parse_rational, to_f64};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn probability_examples() {
        assert_eq!(shuffle_probability(&Permutation::identity(3), 2).unwrap(), q("1/2"));
        for p in all_permutations(4) {
            let pr = shuffle_probability(&p, 1).unwrap();
            let expected = if p == Permutation::identity(4) { Rational::one() } else { Rational::zero() };
            assert_eq!(pr, expected);
        }
        assert!(shuffle_probability(&Permutation::identity(3), 0).is_err());
    }

    #[test]
    fn laws_sum_to_one() {
        for n in 1..=6 {
            for a in [2u64, 3, 4] {
                let total: Rational = shuffle_law(n, a).unwrap().into_iter().map(|(_, x)| x).sum();
                assert!(total.is_one(), "n = {n}, a = {a}");
            }
        }
    }

    #[test]
    fn digit_sampler_is_exact() {
        for n in 1..=5 {
            for a in 1..=3u64 {
                assert_eq!(digit_sampler_law(n, a).unwrap(), shuffle_law(n, a).unwrap());
            }
        }
    }

    #[test]
    fn digit_sampler_n3_frequencies() {
        let mut freq: Vec<(usize, Rational)> = digit_sampler_law(3, 2)
            .unwrap()
            .into_iter()
            .map(|(p, x)| (p.inverse().descent_number(), x))
            .collect();
        freq.sort();
        let expected = ["1/2", "1/8", "1/8", "1/8", "1/8", "0"];
        assert_eq!(freq.len(), 6);
        for ((_, x), e) in freq.iter().zip(expected) {
            assert_eq!(*x, q(e));
        }
    }

    #[test]
    fn composition_of_shuffles() {
        for n in 1..=5 {
            for (a, b) in [(2u64, 2u64), (2, 3), (3, 2)] {
                let conv = convolve_laws(&shuffle_law(n, a).unwrap(), &shuffle_law(n, b).unwrap());
                assert_eq!(conv, shuffle_law(n, a * b).unwrap(), "n = {n}, a = {a}, b = {b}");
            }
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        assert_eq!(sample_shuffle(10, 2, 5).unwrap(), sample_shuffle(10, 2, 5).unwrap());
        for seed in 0..20 {
            assert_eq!(sample_shuffle(6, 1, seed).unwrap(), Permutation::identity(6));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = riffle_shuffle_with(8, 2, &mut rng).unwrap();
            assert!(p.inverse().descent_number() <= 1);
        }
    }

    #[test]
    fn riffle_and_digit_samplers_agree_statistically() {
        let (n, a, draws) = (3usize, 2u64, 60_000);
        let law = shuffle_law(n, a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts: HashMap<Permutation, u64> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(riffle_shuffle_with(n, a, &mut rng).unwrap()).or_default() += 1;
        }
        for (p, pr) in &law {
            let expected = to_f64(pr);
            let observed = *counts.get(p).unwrap_or(&0) as f64 / draws as f64;
            let sd = (expected * (1.0 - expected) / draws as f64).sqrt();
            assert!((observed - expected).abs() <= 4.0 * sd + 1e-12, "{p}");
        }
    }

    #[test]
    fn descent_law_routes_agree_with_carries() {
        for n in 1..=6 {
            for b in [2u64, 3] {
                for r in 1..=4 {
                    let table = descent_law_after_r(n, b, r, DescentLawRoute::DescentTable).unwrap();
                    let closed = descent_law_after_r(n, b, r, DescentLawRoute::ClosedForm).unwrap();
                    let direct = descent_law_after_r(n, b, r, DescentLawRoute::Enumeration).unwrap();
                    let carries = r_step_row(n as u32, b, r, 0).unwrap();
                    assert_eq!(table, closed);
                    assert_eq!(table, direct);
                    assert_eq!(table, carries);
                }
            }
        }
    }

    #[test]
    fn descent_law_limits() {
        let point = descent_law_after_r(1, 2, 3, DescentLawRoute::ClosedForm).unwrap();
        assert_eq!(point.entries(), &[Rational::one()]);
        for n in 2..=6usize {
            let law = descent_law_after_r(n, 2, 31, DescentLawRoute::ClosedForm).unwrap();
            let tv = crate::carries::tv_distance(&law, &stationary(n as u32).unwrap()).unwrap();
            assert!(tv < q("1/1000000"));
        }
        assert!(descent_law_after_r(9, 2, 1, DescentLawRoute::DescentTable).is_err());
    }

    #[test]
    fn inverse_chain_is_time_reversal() {
        for n in 1..=5 {
            for b in [2u64, 3] {
                let m = inverse_descent_chain(n, b).unwrap();
                let p = transition_matrix(n as u32, b).unwrap();
                let pi = stationary(n as u32).unwrap();
                assert!(m.is_row_stochastic());
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(&m[(i, j)] * &pi[i], &pi[j] * &p[(j, i)]);
                    }
                }
                assert_eq!(m.left_mul(pi.entries()).unwrap(), pi.entries());
            }
        }
    }

    #[test]
    fn gessel_identity_small() {
        let check = verify_gessel_identity(3, 0, 6, 6).unwrap();
        assert!(check.holds, "{check:?}");
        assert_eq!(check.compared, 49);
        assert!(verify_gessel_identity(1, 0, 6, 6).unwrap().holds);
        assert!(verify_gessel_identity(4, 1, 5, 5).unwrap().holds);
        assert!(verify_gessel_identity(4, 4, 5, 5).is_err());
    }

    #[test]
    fn gessel_detects_a_wrong_table() {
        // shifting d by one breaks the right-hand side
        let n = 3;
        let table = descent_table(GroupKind::A, n, 1).unwrap();
        let mut numerator = Series2::zero(4, 4);
        for i in 0..n {
            for j in 0..n {
                numerator.add_term(i + 1, j + 1, &BigInt::from(table.get(i, j)));
            }
        }
        let lhs = &numerator * &Series2::inverse_powers(n as u64 + 1, 4, 4);
        let wrong = Series2::from_fn(4, 4, |a, b| binomial((n + a * b) as i64 - 1, n as u64));
        let check = SeriesCheck::compare(&lhs, &wrong);
        assert!(!check.holds);
        assert!(check.witness.is_some());
    }
}
