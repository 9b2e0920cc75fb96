//! Digit representation of the carries chain and its Gaussian AR(1) limit.
//!
//! If `κ_t ≡ r (mod b)` then `κ_{t+1} = (κ_t - r)/b + ε`, where `bε + b - r - 1`
//! is distributed as a sum of `n+1` uniform digits conditioned on its residue.
//! Normalised by `Y_t = (κ_t - n/2)/√(n/12)`, the chain started at 0 looks
//! like `W_0 = -√(3n)`, `W_{t+1} = W_t/b + N(0, 1 - 1/b²)` for large `n`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::carries::r_step_row;
use crate::error::{invalid, Result};
use crate::exact::{digit_sum_counts, int, ratio, to_f64, ExactMatrix, ProbVector, Rational};

/// Law of the increment `ε` given `κ_t ≡ residue (mod b)`, on `{0, 1, ...}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonLaw {
    n: u32,
    b: u64,
    residue: u64,
    law: ProbVector,
}

impl EpsilonLaw {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// `P(ε = k)` for `k = 0, 1, ...`.
    pub fn law(&self) -> &ProbVector {
        &self.law
    }

    pub fn mean(&self) -> Rational {
        self.law.mean()
    }

    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        self.law
            .entries()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let d = int(k as u64) - &mean;
                p * &d * &d
            })
            .sum()
    }
}

/// `P(ε = k) = b^{-n} [x^{bk+b-r-1}] (1 + x + ... + x^{b-1})^{n+1}`.
pub fn epsilon_law(n: u32, b: u64, residue: u64) -> Result<EpsilonLaw> {
    if n == 0 || b < 2 {
        return Err(invalid("need n >= 1 and b >= 2"));
    }
    if residue >= b {
        return Err(invalid(format!("residue {residue} is not below b = {b}")));
    }
    let counts = digit_sum_counts(n as usize + 1, b);
    let offset = (b - residue - 1) as usize;
    let weights: Vec<BigInt> = counts
        .iter()
        .skip(offset)
        .step_by(b as usize)
        .cloned()
        .collect();
    Ok(EpsilonLaw {
        n,
        b,
        residue,
        law: ProbVector::from_weights(&weights)?,
    })
}

/// The carries matrix rebuilt from the digit representation:
/// `P(i, (i - r)/b + k) = P(ε = k | r)` with `r = i mod b`.
pub fn matrix_from_epsilon(n: u32, b: u64) -> Result<ExactMatrix> {
    let laws: Vec<EpsilonLaw> = (0..b).map(|r| epsilon_law(n, b, r)).collect::<Result<_>>()?;
    let states = n as usize;
    let mut m = ExactMatrix::zeros(states, states);
    for i in 0..states {
        let r = i as u64 % b;
        let base = (i as u64 - r) / b;
        for (k, p) in laws[r as usize].law().entries().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let j = (base + k as u64) as usize;
            if j >= states {
                return Err(invalid(format!("increment leaves the state space at i = {i}")));
            }
            *m.get_mut(i, j) = p.clone();
        }
    }
    Ok(m)
}

/// Exact mean and variance of `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: Rational,
    pub variance: Rational,
}

/// Moments of `ε` for each residue `0..b`, and for the equal mixture over
/// residues (last entry). Requires `n >= 2`.
///
/// For `r = b - 1` these are `(n+1)/2 (1 - 1/b)` and `(n+1)/12 (1 - 1/b²)`.
/// The variance is the same for every residue; the mean is lower by
/// `(b - 1 - r)/b` for the other residues.
pub fn epsilon_moments(n: u32, b: u64) -> Result<Vec<Moments>> {
    if n < 2 {
        return Err(invalid("the moment formulas need n >= 2"));
    }
    let laws: Vec<EpsilonLaw> = (0..b).map(|r| epsilon_law(n, b, r)).collect::<Result<_>>()?;
    let mut out: Vec<Moments> = laws
        .iter()
        .map(|l| Moments {
            mean: l.mean(),
            variance: l.variance(),
        })
        .collect();
    let weight = ratio(1, b);
    let width = laws.iter().map(|l| l.law().len()).max().unwrap_or(0);
    let mixture: Vec<Rational> = (0..width)
        .map(|k| {
            laws.iter()
                .filter_map(|l| l.law().entries().get(k))
                .sum::<Rational>()
                * &weight
        })
        .collect();
    let mixture = EpsilonLaw {
        n,
        b,
        residue: b,
        law: ProbVector::new(mixture)?,
    };
    out.push(Moments {
        mean: mixture.mean(),
        variance: mixture.variance(),
    });
    Ok(out)
}

/// `(n+1)/2 (1 - 1/b)`.
pub fn epsilon_mean_closed_form(n: u32, b: u64) -> Rational {
    ratio(u64::from(n) + 1, 2) * (int(1) - ratio(1, b))
}

/// `(n+1)/12 (1 - 1/b²)`.
pub fn epsilon_variance_closed_form(n: u32, b: u64) -> Rational {
    ratio(u64::from(n) + 1, 12) * (int(1) - ratio(1, b * b))
}

/// `W_0 = -√(3n)`, `W_{t+1} = W_t/b + N(0, 1 - 1/b²)`, through `W_steps`.
pub fn simulate_ar(n: u32, b: u64, steps: usize, seed: u64) -> Result<Vec<f64>> {
    simulate_ar_with(n, b, steps, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn simulate_ar_with(n: u32, b: u64, steps: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
    if b < 2 {
        return Err(invalid("b must be at least 2"));
    }
    if steps == 0 {
        return Err(invalid("steps must be at least 1"));
    }
    let phi = 1.0 / b as f64;
    let noise = Normal::new(0.0, (1.0 - phi * phi).sqrt()).map_err(|e| invalid(e.to_string()))?;
    let mut path = Vec::with_capacity(steps + 1);
    path.push(-(3.0 * f64::from(n)).sqrt());
    for t in 0..steps {
        path.push(path[t] * phi + noise.sample(rng));
    }
    Ok(path)
}

/// `Var W_t = Σ_{s=1}^t (1 - 1/b²)/b^{2(t-s)} = 1 - b^{-2t}`.
pub fn ar_marginal_variance(b: u64, t: u32) -> f64 {
    1.0 - (b as f64).powi(-2 * t as i32)
}

/// `E W_t = -√(3n)/b^t`.
pub fn ar_marginal_mean(n: u32, b: u64, t: u32) -> f64 {
    -(3.0 * f64::from(n)).sqrt() / (b as f64).powi(t as i32)
}

/// `Φ(x)`, through the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov distance between a finitely supported law (atoms sorted by
/// value) and `N(mean, sd²)`. With `sd = 0` the normal is a point mass.
pub fn ks_discrete_vs_normal(atoms: &[(f64, f64)], mean: f64, sd: f64) -> f64 {
    let cdf = |x: f64| {
        if sd > 0.0 {
            normal_cdf((x - mean) / sd)
        } else if x >= mean {
            1.0
        } else {
            0.0
        }
    };
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for &(x, p) in atoms {
        let at = below + p;
        let f = cdf(x);
        let f_left = if sd > 0.0 { f } else if x > mean { 1.0 } else { 0.0 };
        worst = worst.max((below - f_left).abs()).max((at - f).abs());
        below = at;
    }
    worst
}

/// One row of [`compare_marginals`].
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalComparison {
    pub t: u32,
    /// Kolmogorov distance between the exact law of `Y_t` and `N(E W_t, Var W_t)`.
    pub ks_exact: f64,
    /// The same distance for the empirical law of simulated `Y_t`, when
    /// samples were requested.
    pub ks_sampled: Option<f64>,
    pub y_mean: f64,
    pub y_variance: f64,
    /// 10%, 50% and 90% quantiles of `Y_t`.
    pub y_quantiles: [f64; 3],
    pub w_mean: f64,
    pub w_variance: f64,
    /// Bound on the remainder dropped from the limit (`Σ δ_s / b^s < 1` in carry
    /// units), on the `Y` scale: `√(12/n)`.
    pub dropped_drift_bound: f64,
}

/// Compares `Y_t`, `t = 0..=horizon`, with the AR(1) marginals. The exact law
/// of `κ_t` is row 0 of the `t`-step matrix; `samples > 0` adds a simulated
/// comparison with the given seed.
pub fn compare_marginals(
    n: u32,
    b: u64,
    horizon: u32,
    samples: usize,
    seed: u64,
) -> Result<Vec<MarginalComparison>> {
    if n == 0 || b < 2 {
        return Err(invalid("need n >= 1 and b >= 2"));
    }
    if horizon > 10 {
        return Err(invalid("horizon is limited to 10"));
    }
    let centre = f64::from(n) / 2.0;
    let scale = (f64::from(n) / 12.0).sqrt();
    let y_of = |k: usize| (k as f64 - centre) / scale;
    let simulated = if samples > 0 {
        Some(simulate_carry_columns(n, b, horizon, samples, seed))
    } else {
        None
    };
    (0..=horizon)
        .into_par_iter()
        .map(|t| {
            let law = r_step_row(n, b, t, 0)?;
            let atoms: Vec<(f64, f64)> = law
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| (y_of(k), to_f64(p)))
                .collect();
            let w_mean = ar_marginal_mean(n, b, t);
            let w_variance = ar_marginal_variance(b, t);
            let ks_exact = if t == 0 {
                // both start at exactly -√(3n)
                0.0
            } else {
                ks_discrete_vs_normal(&atoms, w_mean, w_variance.sqrt())
            };
            let ks_sampled = simulated.as_ref().map(|runs| {
                let mut counts = vec![0u64; n as usize];
                for run in runs {
                    counts[run[t as usize] as usize] += 1;
                }
                let empirical: Vec<(f64, f64)> = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(k, &c)| (y_of(k), c as f64 / samples as f64))
                    .collect();
                if t == 0 {
                    0.0
                } else {
                    ks_discrete_vs_normal(&empirical, w_mean, w_variance.sqrt())
                }
            });
            let y_mean: f64 = atoms.iter().map(|(y, p)| y * p).sum();
            let y_variance: f64 = atoms.iter().map(|(y, p)| p * (y - y_mean).powi(2)).sum();
            Ok(MarginalComparison {
                t,
                ks_exact,
                ks_sampled,
                y_mean,
                y_variance,
                y_quantiles: [0.1, 0.5, 0.9].map(|q| quantile(&atoms, q)),
                w_mean,
                w_variance,
                dropped_drift_bound: (12.0 / f64::from(n)).sqrt(),
            })
        })
        .collect()
}

fn quantile(atoms: &[(f64, f64)], q: f64) -> f64 {
    let mut acc = 0.0;
    for &(x, p) in atoms {
        acc += p;
        if acc >= q - 1e-12 {
            return x;
        }
    }
    atoms.last().map_or(f64::NAN, |a| a.0)
}

/// `samples` independent runs of `κ_0, ..., κ_horizon` from 0.
fn simulate_carry_columns(n: u32, b: u64, horizon: u32, samples: usize, seed: u64) -> Vec<Vec<u64>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut run = Vec::with_capacity(horizon as usize + 1);
            run.push(0u64);
            for t in 0..horizon as usize {
                let total: u64 = run[t] + (0..n).map(|_| rng.random_range(0..b)).sum::<u64>();
                run.push(total / b);
            }
            run
        })
        .collect()
}

/// `|σ² - 1| + |μ| √(2π)/4`.
pub fn stein_shift_bound(mu: f64, sigma: f64) -> f64 {
    (sigma * sigma - 1.0).abs() + mu.abs() * (2.0 * std::f64::consts::PI).sqrt() / 4.0
}

/// Outcome of a grid check of a bound on `sup_z |Φ(z) - Φ(σz + μ)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteinCheck {
    pub sup_observed: f64,
    pub bound: f64,
}

impl SteinCheck {
    pub fn holds(&self) -> bool {
        self.sup_observed <= self.bound
    }
}

/// Grid points `-8, -8 + step, ..., 8`.
fn grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(invalid("grid step must lie in (0, 1e-3]"));
    }
    let count = (16.0 / step).round() as usize;
    Ok((0..=count).map(|k| -8.0 + k as f64 * step).collect())
}

/// `sup_z |Φ(z) - Φ(σz + μ)|` over the grid against [`stein_shift_bound`].
pub fn stein_shift_bound_check(mu: f64, sigma: f64, step: f64) -> Result<SteinCheck> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid("sigma must be positive"));
    }
    let sup_observed = grid(step)?
        .par_iter()
        .map(|&z| (normal_cdf(z) - normal_cdf(sigma * z + mu)).abs())
        .reduce(|| 0.0, f64::max);
    Ok(SteinCheck {
        sup_observed,
        bound: stein_shift_bound(mu, sigma),
    })
}

/// The symmetric bound on the Kolmogorov distance between `N(ν, τ²)` and
/// `N(μ, σ²)`: the smaller of the two ways of applying the shift bound.
pub fn normal_pair_bound(nu: f64, tau: f64, mu: f64, sigma: f64) -> f64 {
    let c = (2.0 * std::f64::consts::PI).sqrt() / 4.0;
    let one = (mu - nu).abs() / tau * c + (sigma * sigma / (tau * tau) - 1.0).abs();
    let two = (mu - nu).abs() / sigma * c + (tau * tau / (sigma * sigma) - 1.0).abs();
    one.min(two)
}

/// Grid Kolmogorov distance between `N(ν, τ²)` and `N(μ, σ²)` against
/// [`normal_pair_bound`]. The grid covers `ν + τ z` for `z` in `[-8, 8]`.
pub fn normal_pair_check(nu: f64, tau: f64, mu: f64, sigma: f64, step: f64) -> Result<SteinCheck> {
    if !(tau > 0.0 && sigma > 0.0) {
        return Err(invalid("standard deviations must be positive"));
    }
    let sup_observed = grid(step)?
        .par_iter()
        .map(|&z| {
            let x = nu + tau * z;
            (normal_cdf(z) - normal_cdf((x - mu) / sigma)).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(SteinCheck {
        sup_observed,
        bound: normal_pair_bound(nu, tau, mu, sigma),
    })
}
