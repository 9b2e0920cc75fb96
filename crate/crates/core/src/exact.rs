//! Exact integer and rational arithmetic shared by every chain in the crate.
//!
//! Probabilities are [`Rational`] values (arbitrary precision, always in
//! lowest terms). Nothing in this module rounds; conversion to floating point
//! happens only at serialization time.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// The integer `v` as a rational.
pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Binomial coefficient with the convention `C(top, bottom) = 0` whenever
/// `top < bottom`, negative `top` included.
pub fn binomial(top: impl Into<BigInt>, bottom: u64) -> BigInt {
    let top = top.into();
    if top < BigInt::from(bottom) {
        return BigInt::zero();
    }
    // C(top, k) = C(top, top - k); pick the shorter product when top is small.
    let k = match (&top - BigInt::from(bottom)).to_u64() {
        Some(rest) if rest < bottom => rest,
        _ => bottom,
    };
    let mut acc = BigInt::one();
    for t in 1..=k {
        acc *= &top - BigInt::from(k - t);
        acc /= BigInt::from(t);
    }
    acc
}

/// `n!`.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `base^exp` for a non-negative machine integer base.
pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Eulerian number `A(n, j)`: permutations of `n` letters with `j` descents.
///
/// Computed from Euler's alternating sum
/// `A(n,j) = sum_{l=0}^{j} (-1)^l C(n+1,l) (j+1-l)^n`.
pub fn eulerian(n: u32, j: i64) -> BigInt {
    if n == 0 || j < 0 || j > i64::from(n) - 1 {
        return BigInt::zero();
    }
    let j = j as u64;
    alternating_sum(n, j, |m| big_pow(m, n))
}

/// All of `A(n, 0), ..., A(n, n-1)`, sharing the powers `k^n` across the row.
pub fn eulerian_row(n: u32) -> Vec<BigInt> {
    let powers: Vec<BigInt> = (0..=u64::from(n)).map(|k| big_pow(k, n)).collect();
    let choose = alternating_coefficients(n);
    (0..u64::from(n))
        .map(|j| {
            (0..=j as usize)
                .map(|l| &choose[l] * &powers[j as usize + 1 - l])
                .sum()
        })
        .collect()
}

/// Type-B Eulerian number: signed permutations of `n` letters with `j`
/// descents, where position `n` is a descent when the last entry is negative.
///
/// `sum_{l=0}^{j} (-1)^l C(n+1,l) (2j-2l+1)^n`.
pub fn eulerian_type_b(n: u32, j: i64) -> BigInt {
    if n == 0 || j < 0 || j > i64::from(n) {
        return BigInt::zero();
    }
    alternating_sum(n, j as u64, |m| big_pow(2 * m - 1, n))
}

/// All of `Ā(n, 0), ..., Ā(n, n)`.
pub fn eulerian_type_b_row(n: u32) -> Vec<BigInt> {
    let powers: Vec<BigInt> = (0..=u64::from(n))
        .map(|k| big_pow(2 * k + 1, n))
        .collect();
    let choose = alternating_coefficients(n);
    (0..=u64::from(n))
        .map(|j| {
            (0..=j as usize)
                .map(|l| &choose[l] * &powers[j as usize - l])
                .sum()
        })
        .collect()
}

// sum_{l=0}^{j} (-1)^l C(n+1, l) f(j+1-l)
fn alternating_sum(n: u32, j: u64, f: impl Fn(u64) -> BigInt) -> BigInt {
    (0..=j)
        .map(|l| {
            let term = binomial(n + 1, l) * f(j + 1 - l);
            if l % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `(-1)^l C(n+1, l)` for `l = 0..=n+1`.
pub(crate) fn alternating_coefficients(n: u32) -> Vec<BigInt> {
    (0..=u64::from(n) + 1)
        .map(|l| {
            let c = binomial(n + 1, l);
            if l % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `counts[s]` = number of tuples in `{0, ..., width-1}^terms` with sum `s`,
/// i.e. the coefficients of `(1 + x + ... + x^{width-1})^terms`.
pub fn digit_sum_counts(terms: usize, width: u64) -> Vec<BigInt> {
    let width = width as usize;
    let mut counts = vec![BigInt::one()];
    for _ in 0..terms {
        let mut next = vec![BigInt::zero(); counts.len() + width.saturating_sub(1)];
        for (s, c) in counts.iter().enumerate() {
            for x in 0..width {
                next[s + x] += c;
            }
        }
        counts = next;
    }
    counts
}

/// `P(U_1 + ... + U_n < x)` for i.i.d. uniforms on `[0, 1]`, exactly.
pub fn irwin_hall_cdf(n: u32, x: &Rational) -> Rational {
    assert!(n >= 1, "irwin_hall_cdf needs n >= 1");
    if !x.is_positive() {
        return Rational::zero();
    }
    let nn = int(n);
    if *x >= nn {
        return Rational::one();
    }
    let top = x.floor().to_integer().to_u64().unwrap_or(0);
    let mut acc = Rational::zero();
    for k in 0..=top {
        let shifted = x - int(k);
        let term = int(binomial(n, k)) * num_traits::pow(shifted, n as usize);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / int(factorial(u64::from(n)))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_val = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_val = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = whole_val.abs() * &scale + frac_val;
        let num = if negative { -mag } else { mag };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(t).map(int).map_err(|_| bad())
}

/// Lossy conversion for display and floating-point comparisons.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                left: bad.len(),
                right: c,
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        }))
    }

    /// `self^k` by repeated squaring. Requires a square matrix.
    pub fn pow(&self, mut k: u32) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> ExactMatrix {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn scale(&self, s: &Rational) -> ExactMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.row_vectors().map(|r| r.iter().sum()).collect()
    }

    /// Nonnegative entries and every row summing to exactly one.
    pub fn is_row_stochastic(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
            && self.row_sums().iter().all(|s| s.is_one())
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: self.rows,
            });
        }
        Ok((0..self.cols)
            .map(|j| v.iter().enumerate().map(|(i, x)| x * &self[(i, j)]).sum())
            .collect())
    }

    /// Matrix times column vector.
    pub fn right_mul(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: self.cols,
            });
        }
        Ok(self
            .row_vectors()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest `|self(i,j) - other(i,j)|`.
    pub fn max_abs_diff(&self, other: &ExactMatrix) -> Result<Rational> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let sub = &factor * &a[col * n + k];
                    a[r * n + k] -= sub;
                }
            }
        }
        Ok(det)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_vectors() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// An exact probability distribution on `{0, ..., len-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbVector(Vec<Rational>);

impl ProbVector {
    /// Validates nonnegativity and that the entries sum to exactly one.
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if let Some((i, x)) = entries.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(Error::NotProbability(format!(
                "entry {i} is negative ({})",
                format_rational(x)
            )));
        }
        let total: Rational = entries.iter().sum();
        if !total.is_one() {
            return Err(Error::NotProbability(format!(
                "entries sum to {}",
                format_rational(&total)
            )));
        }
        Ok(Self(entries))
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_weights(weights: &[BigInt]) -> Result<Self> {
        let total: BigInt = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::NotProbability("all weights are zero".into()));
        }
        Self::new(
            weights
                .iter()
                .map(|w| Rational::new(w.clone(), total.clone()))
                .collect(),
        )
    }

    pub fn point_mass(len: usize, at: usize) -> Self {
        Self(
            (0..len)
                .map(|i| if i == at { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    /// Mean of the state index.
    pub fn mean(&self) -> Rational {
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| p * int(i as u64))
            .sum()
    }
}

impl Index<usize> for ProbVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}
