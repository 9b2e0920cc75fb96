//! Truncated bivariate power series with integer coefficients.

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::binomial;

/// `Σ c[a][b] s^a t^b` for `a <= max_s`, `b <= max_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    coeffs: Vec<Vec<BigInt>>,
}

impl Series2 {
    pub fn zero(max_s: usize, max_t: usize) -> Self {
        Self {
            coeffs: vec![vec![BigInt::zero(); max_t + 1]; max_s + 1],
        }
    }

    pub fn from_fn(max_s: usize, max_t: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        Self {
            coeffs: (0..=max_s)
                .map(|a| (0..=max_t).map(|b| f(a, b)).collect())
                .collect(),
        }
    }

    /// `(1-s)^{-k} (1-t)^{-k}`, whose `s^a t^b` coefficient is
    /// `C(k-1+a, k-1) C(k-1+b, k-1)`.
    pub fn inverse_powers(k: u64, max_s: usize, max_t: usize) -> Self {
        Self::from_fn(max_s, max_t, |a, b| {
            binomial(k - 1 + a as u64, k - 1) * binomial(k - 1 + b as u64, k - 1)
        })
    }

    pub fn max_s(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_t(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, a: usize, b: usize) -> &BigInt {
        &self.coeffs[a][b]
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: &BigInt) {
        if a <= self.max_s() && b <= self.max_t() {
            self.coeffs[a][b] += c;
        }
    }

    /// First `(a, b)` in row-major order where the two series differ.
    pub fn first_difference(&self, other: &Series2) -> Option<(usize, usize)> {
        let max_s = self.max_s().min(other.max_s());
        let max_t = self.max_t().min(other.max_t());
        (0..=max_s)
            .flat_map(|a| (0..=max_t).map(move |b| (a, b)))
            .find(|&(a, b)| self.coeff(a, b) != other.coeff(a, b))
    }
}

impl Mul for &Series2 {
    type Output = Series2;

    /// Truncated product, kept to the smaller of the two orders.
    fn mul(self, rhs: &Series2) -> Series2 {
        let max_s = self.max_s().min(rhs.max_s());
        let max_t = self.max_t().min(rhs.max_t());
        let mut out = Series2::zero(max_s, max_t);
        for a1 in 0..=max_s {
            for b1 in 0..=max_t {
                let x = self.coeff(a1, b1);
                if x.is_zero() {
                    continue;
                }
                for a2 in 0..=max_s - a1 {
                    for b2 in 0..=max_t - b1 {
                        out.coeffs[a1 + a2][b1 + b2] += x * rhs.coeff(a2, b2);
                    }
                }
            }
        }
        out
    }
}
