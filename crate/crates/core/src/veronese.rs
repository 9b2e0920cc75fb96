//! The `b`-th Veronese transform of a rational series `h(x)/(1-x)^{n+1}`.
//!
//! Keeping every `b`-th coefficient of `h(x)/(1-x)^{n+1}` gives a series of
//! the same shape with numerator `h^<b>`, and `h^<b> = C h` for an integer
//! matrix `C` whose interior block is the transposed carries matrix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::exact::{
    alternating_coefficients, binomial, digit_sum_counts, eulerian_row, factorial, format_rational, int,
    parse_rational, ExactMatrix, Rational,
};

/// Numerator coefficients `h_0, ..., h_{n+1}` over `(1-x)^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector {
    coeffs: Vec<Rational>,
}

impl HVector {
    /// Needs at least three coefficients (`n >= 1`).
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(invalid("an h-vector needs n + 2 >= 3 coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `h = (1, 0, ..., 0)` of length `n + 2`.
    pub fn unit(n: usize) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); n + 2];
        coeffs[0] = int(1);
        Self::new(coeffs)
    }

    /// The ambient `n`.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 2
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `h(1)`.
    pub fn at_one(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Coefficients of `h(x)/(1-x)^{n+1}` through `x^degree`.
    pub fn series(&self, degree: usize) -> Vec<Rational> {
        let n = self.n() as u64;
        (0..=degree)
            .map(|m| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j <= m)
                    .map(|(j, h)| h * int(binomial((m - j) as u64 + n, n)))
                    .sum()
            })
            .collect()
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for HVector {
    type Err = Error;

    /// Comma-separated rationals, for example `1,0,0` or `1/2,3,0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        HVector::new(coeffs)
    }
}

/// The `(n+2) × (n+2)` matrix
/// `C(i,j) = Σ_l (-1)^l C(n+1,l) C(n + (i-l)b - j, n)`, the number of
/// `(a_1, ..., a_{n+1})` in `{0, ..., b-1}^{n+1}` summing to `ib - j`.
pub fn c_matrix(n: usize, b: u64) -> Result<ExactMatrix> {
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let size = n + 2;
    let signs = alternating_coefficients(n as u32);
    let rows: Vec<Vec<Rational>> = (0..size)
        .into_par_iter()
        .map(|i| {
            (0..size)
                .map(|j| {
                    let total: BigInt = (0..=i.min(n + 1))
                        .map(|l| {
                            let top = (n + (i - l) * b as usize) as i64 - j as i64;
                            &signs[l] * binomial(top, n as u64)
                        })
                        .sum();
                    int(total)
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows)
}

/// `C(i,j)` by counting bounded compositions directly.
pub fn c_matrix_by_counting(n: usize, b: u64) -> Result<ExactMatrix> {
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let ways = digit_sum_counts(n + 1, b);
    let size = n + 2;
    Ok(ExactMatrix::from_fn(size, size, |i, j| {
        let target = (i * b as usize) as i64 - j as i64;
        if target < 0 {
            return Rational::zero();
        }
        ways.get(target as usize).map(|w| int(w.clone())).unwrap_or_else(Rational::zero)
    }))
}

/// `h^<b> = C h`.
pub fn veronese_transform(h: &HVector, b: u64) -> Result<HVector> {
    let c = c_matrix(h.n(), b)?;
    HVector::new(c.right_mul(h.coeffs())?)
}

/// Whether `h^<b>/(1-x)^{n+1}` and the `b`-sectioned `h/(1-x)^{n+1}` agree
/// through `x^depth`.
pub fn sectioning_agrees(h: &HVector, b: u64, depth: usize) -> Result<bool> {
    let transformed = veronese_transform(h, b)?;
    let full = h.series(depth * b as usize);
    let sectioned: Vec<&Rational> = full.iter().step_by(b as usize).collect();
    let direct = transformed.series(depth);
    Ok(sectioned.into_iter().eq(direct.iter()))
}

/// Default sectioning depth.
pub const SECTIONING_DEPTH: usize = 12;

/// `p_n(x) = Σ_j A(n,j) x^{j+1}` as coefficients of `x^0, ..., x^n`.
pub fn eulerian_polynomial(n: u32) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(invalid("need n >= 1"));
    }
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(eulerian_row(n));
    Ok(coeffs)
}

/// For each `b`, the largest coefficient gap between `h^<b>(x)/(bⁿ h(1))` and
/// `p_n(x)/n!`. These tend to zero like `1/b`.
pub fn limit_check(h: &HVector, bases: &[u64]) -> Result<Vec<Rational>> {
    let at_one = h.at_one();
    if at_one.is_zero() {
        return Err(invalid("h(1) must be nonzero"));
    }
    let n = h.n();
    let nf = int(factorial(n as u64));
    let mut target: Vec<Rational> = eulerian_polynomial(n as u32)?
        .into_iter()
        .map(|a| int(a) / &nf)
        .collect();
    target.push(Rational::zero());
    bases
        .iter()
        .map(|&b| {
            let scale = int(num_traits::pow(BigInt::from(b), n)) * &at_one;
            let hb = veronese_transform(h, b)?;
            Ok(hb
                .coeffs()
                .iter()
                .zip(&target)
                .map(|(x, t)| (x / &scale - t).abs())
                .max()
                .unwrap_or_else(Rational::zero))
        })
        .collect()
}
