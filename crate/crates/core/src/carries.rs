//! The carries chain of base-`b` addition of `n` numbers.
//!
//! State `i` is the carry value; the chain lives on `{0, ..., n-1}`. Exact
//! transition probabilities come from Holte's alternating sum, and the
//! `r`-step law is the one-step law at base `b^r`, so even very large `r`
//! costs a single formula evaluation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::exact::{
    alternating_coefficients, binomial, eulerian_row, factorial, int, ExactMatrix, ProbVector,
    Rational,
};

/// Parameters of a carries chain: `n` summands added in base `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarriesChain {
    n: u32,
    base: BigInt,
}

impl CarriesChain {
    pub fn new(n: u32, b: u64) -> Result<Self> {
        Self::with_base(n, BigInt::from(b))
    }

    /// A chain whose base may exceed machine integers (for example `b^r`).
    pub fn with_base(n: u32, base: BigInt) -> Result<Self> {
        if n == 0 {
            return Err(invalid("the carries chain needs n >= 1"));
        }
        if base < BigInt::from(2) {
            return Err(invalid(format!("base must be at least 2, got {base}")));
        }
        Ok(Self { n, base })
    }

    /// The chain for `r` steps at once: base `b^r`.
    pub fn r_step(n: u32, b: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(invalid("r must be at least 1"));
        }
        Self::with_base(n, num_traits::pow(BigInt::from(b), r as usize))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn states(&self) -> usize {
        self.n as usize
    }

    /// Row `i` of the transition matrix.
    ///
    /// `P(i,j) = b^-n sum_l (-1)^l C(n+1,l) C(n-1-i+(j+1-l)b, n)`.
    pub fn row(&self, i: usize) -> Result<ProbVector> {
        let n = self.states();
        if i >= n {
            return Err(invalid(format!("start state {i} is outside 0..{n}")));
        }
        // The second binomial only depends on m = j+1-l, so tabulate it once.
        let offset = BigInt::from(n as i64 - 1 - i as i64);
        let table: Vec<BigInt> = (0..=n as u64)
            .map(|m| binomial(&offset + &self.base * BigInt::from(m), self.n as u64))
            .collect();
        let signs = alternating_coefficients(self.n);
        let denom = num_traits::pow(self.base.clone(), n);
        let entries = (0..n)
            .map(|j| {
                let num: BigInt = (0..=j + 1).map(|l| &signs[l] * &table[j + 1 - l]).sum();
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

/// The `n × n` transition matrix of the base-`b` carries chain.
pub fn transition_matrix(n: u32, b: u64) -> Result<ExactMatrix> {
    Ok(CarriesChain::new(n, b)?.matrix())
}

/// `P_b^r`, computed as the base-`b^r` one-step matrix.
pub fn r_step_matrix(n: u32, b: u64, r: u32) -> Result<ExactMatrix> {
    Ok(CarriesChain::r_step(n, b, r)?.matrix())
}

/// `P_b^r(i, ·)`. `r = 0` gives the point mass at `i`.
pub fn r_step_row(n: u32, b: u64, r: u32, i: usize) -> Result<ProbVector> {
    if r == 0 {
        if n == 0 || i >= n as usize {
            return Err(invalid(format!("start state {i} is outside 0..{n}")));
        }
        return Ok(ProbVector::point_mass(n as usize, i));
    }
    CarriesChain::r_step(n, b, r)?.row(i)
}

/// `π(j) = A(n,j)/n!`, the Eulerian law.
pub fn stationary(n: u32) -> Result<ProbVector> {
    if n == 0 {
        return Err(invalid("stationary law needs n >= 1"));
    }
    let nf = factorial(u64::from(n));
    ProbVector::new(
        eulerian_row(n)
            .into_iter()
            .map(|a| Rational::new(a, nf.clone()))
            .collect(),
    )
}

/// `½ Σ |p(x) - q(x)|`.
pub fn tv_distance(p: &ProbVector, q: &ProbVector) -> Result<Rational> {
    tv_distance_slices(p.entries(), q.entries())
}

pub(crate) fn tv_distance_slices(p: &[Rational], q: &[Rational]) -> Result<Rational> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let total: Rational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(total / int(2))
}

/// `‖P^r(start, ·) - π‖_TV`.
pub fn tv_to_stationarity(n: u32, b: u64, r: u32, start: usize) -> Result<Rational> {
    let row = r_step_row(n, b, r, start)?;
    tv_distance(&row, &stationary(n)?)
}

/// `½ √(e^{1/(2c²)} - 1)`: the distance bound after `⌈log_b(cn)⌉` steps.
pub fn mixing_bound(c: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    Ok(0.5 * (1.0 / (2.0 * c * c)).exp_m1().sqrt())
}

fn require_three(n: u32) -> Result<()> {
    if n < 3 {
        Err(invalid(format!("this bound needs n >= 3, got n = {n}")))
    } else {
        Ok(())
    }
}

/// `((n-1)/2 + i) / b^r`, the monotone-coupling upper bound on
/// `‖P^r(i, ·) - π‖_TV`.
pub fn bound_monotone_upper(n: u32, b: u64, r: u32, i: usize) -> Result<Rational> {
    require_three(n)?;
    if i >= n as usize {
        return Err(invalid(format!("start state {i} is outside 0..{n}")));
    }
    let centre = Rational::new(BigInt::from(n - 1), BigInt::from(2)) + int(i as u64);
    Ok(centre / int(num_traits::pow(BigInt::from(b), r as usize)))
}

/// Largest `r >= 1` with `r <= log_b(ε |i - (n-1)/2| / √n)`, or 0 when no such
/// `r` exists. For every `1 <= r <= radius`, `‖P^r(i,·) - π‖ >= 1 - ε`.
pub fn lower_bound_radius(n: u32, b: u64, i: usize, eps: &Rational) -> Result<u32> {
    radius_with_scale(n, b, i, eps, int(n))
}

/// As [`lower_bound_radius`] but with the unsimplified variance scale
/// `8(n+1)/12` in place of `n`; never smaller.
pub fn lower_bound_radius_sharp(n: u32, b: u64, i: usize, eps: &Rational) -> Result<u32> {
    radius_with_scale(n, b, i, eps, Rational::new(BigInt::from(8 * (n + 1)), BigInt::from(12)))
}

fn radius_with_scale(n: u32, b: u64, i: usize, eps: &Rational, scale: Rational) -> Result<u32> {
    require_three(n)?;
    if b < 2 {
        return Err(invalid("base must be at least 2"));
    }
    if !(eps.is_positive() && *eps < Rational::one()) {
        return Err(invalid("epsilon must lie strictly between 0 and 1"));
    }
    if i >= n as usize {
        return Err(invalid(format!("start state {i} is outside 0..{n}")));
    }
    // b^r <= ε|f1(i)|/√scale  <=>  b^{2r} · scale <= ε² f1(i)²
    let f1 = int(i as u64) - Rational::new(BigInt::from(n - 1), BigInt::from(2));
    let target = eps * eps * &f1 * &f1;
    let mut r = 0u32;
    let mut power = int(b) * int(b);
    while &power * &scale <= target {
        r += 1;
        power *= int(b) * int(b);
    }
    Ok(r)
}

/// `f₁(i) = i - (n-1)/2`.
pub fn eigenfunction_f1(n: u32) -> Vec<Rational> {
    let centre = Rational::new(BigInt::from(n) - 1, BigInt::from(2));
    (0..n).map(|i| int(i) - &centre).collect()
}

/// `f₂(i) = i² - (n-1)i + (n-2)(3n-1)/12`.
pub fn eigenfunction_f2(n: u32) -> Vec<Rational> {
    let n_big = i64::from(n);
    let constant = Rational::new(BigInt::from((n_big - 2) * (3 * n_big - 1)), BigInt::from(12));
    (0..n_big)
        .map(|i| int(i * i - (n_big - 1) * i) + &constant)
        .collect()
}

/// Max-abs residuals of `P f₁ - f₁/b` and `P f₂ - f₂/b²`; both are exactly 0.
pub fn eigenfunction_residuals(n: u32, b: u64) -> Result<(Rational, Rational)> {
    require_three(n)?;
    let p = transition_matrix(n, b)?;
    let residual = |f: Vec<Rational>, eigenvalue: Rational| -> Result<Rational> {
        let pf = p.right_mul(&f)?;
        Ok(pf
            .iter()
            .zip(&f)
            .map(|(x, y)| (x - y * &eigenvalue).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    };
    let inv_b = Rational::new(BigInt::one(), BigInt::from(b));
    Ok((
        residual(eigenfunction_f1(n), inv_b.clone())?,
        residual(eigenfunction_f2(n), &inv_b * &inv_b)?,
    ))
}

/// Partial row sums `P(i, {0..j})` nonincreasing in `i` for every `j`.
pub fn is_stochastically_monotone(p: &ExactMatrix) -> bool {
    let cumulative: Vec<Vec<Rational>> = p
        .row_vectors()
        .map(|row| {
            row.iter()
                .scan(Rational::zero(), |acc, x| {
                    *acc += x;
                    Some(acc.clone())
                })
                .collect()
        })
        .collect();
    cumulative
        .windows(2)
        .all(|w| w[0].iter().zip(&w[1]).all(|(upper, lower)| upper >= lower))
}

/// Every 2×2 minor from rows `i < i'` and columns `j < j'` is nonnegative.
pub fn is_tp2(p: &ExactMatrix) -> bool {
    let (rows, cols) = (p.rows(), p.cols());
    for i in 0..rows {
        for i2 in i + 1..rows {
            for j in 0..cols {
                for j2 in j + 1..cols {
                    let minor = &p[(i, j)] * &p[(i2, j2)] - &p[(i, j2)] * &p[(i2, j)];
                    if minor.is_negative() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A column-by-column addition: the digits, the carries and the sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryTrace {
    base: u64,
    summands: usize,
    /// Column-major digits, least significant column first.
    digits: Vec<u64>,
    /// `κ_0 = 0, κ_1, ..., κ_m`.
    carries: Vec<u64>,
    /// Sum digits, least significant first (the final carry is not included).
    sum_digits: Vec<u64>,
}

impl CarryTrace {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn summands(&self) -> usize {
        self.summands
    }

    pub fn columns(&self) -> usize {
        self.carries.len() - 1
    }

    /// `κ_0, ..., κ_m`.
    pub fn carries(&self) -> &[u64] {
        &self.carries
    }

    /// Digits of column `t` (0 = least significant), one per summand.
    pub fn column(&self, t: usize) -> &[u64] {
        &self.digits[t * self.summands..(t + 1) * self.summands]
    }

    /// How many of `κ_1, ..., κ_m` take each value.
    pub fn histogram(&self) -> Vec<u64> {
        let top = self.carries.iter().copied().max().unwrap_or(0) as usize;
        let mut h = vec![0u64; top + 1];
        for &k in &self.carries[1..] {
            h[k as usize] += 1;
        }
        h
    }

    /// The full sum written most significant digit first, with the final
    /// carry as leading digits.
    pub fn sum_string(&self) -> String {
        let mut s = String::new();
        let last = *self.carries.last().expect("trace has κ_0");
        if last > 0 {
            s.push_str(&digits_in_base(last, self.base));
        }
        for &d in self.sum_digits.iter().rev() {
            s.push_str(&digit_text(d, self.base));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// Recomputes every column sum and checks the stored carries and digits.
    pub fn is_consistent(&self) -> bool {
        if self.carries.first() != Some(&0) {
            return false;
        }
        (0..self.columns()).all(|t| {
            let total: u128 = u128::from(self.carries[t])
                + self.column(t).iter().map(|&d| u128::from(d)).sum::<u128>();
            let b = u128::from(self.base);
            total / b == u128::from(self.carries[t + 1])
                && total % b == u128::from(self.sum_digits[t])
                && self.column(t).iter().all(|&d| d < self.base)
        })
    }

    /// Counts of `κ_t → κ_{t+r}` transitions for `t = 0..m-r`.
    pub fn transition_counts(&self, r: usize, states: usize) -> Vec<Vec<u64>> {
        let mut counts = vec![vec![0u64; states]; states];
        for w in self.carries.windows(r + 1) {
            counts[w[0] as usize][w[r] as usize] += 1;
        }
        counts
    }
}

fn digit_text(d: u64, base: u64) -> String {
    if base <= 36 {
        char::from_digit(d as u32, base as u32)
            .expect("digit below base")
            .to_string()
    } else {
        format!("[{d}]")
    }
}

fn digits_in_base(mut v: u64, base: u64) -> String {
    let mut out = Vec::new();
    while v > 0 {
        out.push(digit_text(v % base, base));
        v /= base;
    }
    out.reverse();
    out.concat()
}

/// Schoolbook addition of the given addends, each written most significant
/// digit first. Shorter addends are padded with leading zeros.
pub fn add_columns(addends: &[Vec<u64>], base: u64) -> Result<CarryTrace> {
    if base < 2 {
        return Err(invalid("base must be at least 2"));
    }
    if addends.is_empty() {
        return Err(invalid("need at least one addend"));
    }
    for &d in addends.iter().flatten() {
        if d >= base {
            return Err(Error::DigitOutOfRange { digit: d, base });
        }
    }
    let width = addends.iter().map(Vec::len).max().unwrap_or(0);
    let summands = addends.len();
    let mut digits = Vec::with_capacity(width * summands);
    for t in 0..width {
        for a in addends {
            let d = if t < a.len() { a[a.len() - 1 - t] } else { 0 };
            digits.push(d);
        }
    }
    Ok(run_columns(base, summands, digits))
}

/// Parses addends such as `"43935..."` into digit vectors (digits `0-9a-z`).
pub fn parse_addends(lines: &[&str], base: u64) -> Result<Vec<Vec<u64>>> {
    if !(2..=36).contains(&base) {
        return Err(invalid("textual addends support bases 2 through 36"));
    }
    lines
        .iter()
        .map(|line| line.trim())
        .filter(|line| !line.is_empty())
        .map(|line| {
            line.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    let d = c
                        .to_digit(36)
                        .ok_or_else(|| invalid(format!("bad digit {c:?}")))? as u64;
                    if d >= base {
                        Err(Error::DigitOutOfRange { digit: d, base })
                    } else {
                        Ok(d)
                    }
                })
                .collect()
        })
        .collect()
}

fn run_columns(base: u64, summands: usize, digits: Vec<u64>) -> CarryTrace {
    let width = digits.len().checked_div(summands).unwrap_or(0);
    let mut carries = Vec::with_capacity(width + 1);
    let mut sum_digits = Vec::with_capacity(width);
    carries.push(0u64);
    let b = u128::from(base);
    for t in 0..width {
        let column = &digits[t * summands..(t + 1) * summands];
        let total = u128::from(carries[t]) + column.iter().map(|&d| u128::from(d)).sum::<u128>();
        carries.push((total / b) as u64);
        sum_digits.push((total % b) as u64);
    }
    CarryTrace {
        base,
        summands,
        digits,
        carries,
        sum_digits,
    }
}

/// Draws one column of `n` digits in `{0, ..., base-1}`.
///
/// Columns are independent of one another; the joint law within a column is
/// up to the implementation.
pub trait ColumnSampler {
    fn fill_column(&mut self, rng: &mut dyn RngCore, base: u64, column: &mut [u64]);
}

/// Independent uniform digits.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformColumns;

impl ColumnSampler for UniformColumns {
    fn fill_column(&mut self, rng: &mut dyn RngCore, base: u64, column: &mut [u64]) {
        for d in column.iter_mut() {
            *d = rng.random_range(0..base);
        }
    }
}

/// Seeded simulation with i.i.d. uniform digits.
pub fn simulate(n: u32, b: u64, steps: usize, seed: u64) -> Result<CarryTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with(n, b, steps, &mut rng, &mut UniformColumns)
}

/// Simulation with a caller-supplied generator and column law.
pub fn simulate_with(
    n: u32,
    b: u64,
    steps: usize,
    rng: &mut dyn RngCore,
    sampler: &mut dyn ColumnSampler,
) -> Result<CarryTrace> {
    if n == 0 || b < 2 {
        return Err(invalid("simulation needs n >= 1 and b >= 2"));
    }
    if steps == 0 {
        return Err(invalid("steps must be at least 1"));
    }
    let summands = n as usize;
    let mut digits = vec![0u64; steps * summands];
    for column in digits.chunks_mut(summands) {
        sampler.fill_column(rng, b, column);
        if let Some(&bad) = column.iter().find(|&&d| d >= b) {
            return Err(Error::DigitOutOfRange { digit: bad, base: b });
        }
    }
    Ok(run_columns(b, summands, digits))
}
