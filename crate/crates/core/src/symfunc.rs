//! Partitions, Schur functions at equal arguments, RSK shape measures and the
//! descent-set distance after riffle shuffles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::carries::tv_distance_slices;
use crate::error::{check_cap, invalid, Error, Result};
use crate::exact::{binomial, factorial, int, Rational};
use crate::groups::{all_permutations, descent_set_counts, DescentSet, Tableau, MAX_N_TYPE_A};
use crate::shuffles::shuffle_probability_big;

/// Largest `n` for which partitions are enumerated.
pub const MAX_PARTITION_N: usize = 30;

/// An integer partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("partition parts must be weakly decreasing"));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width)
                .map(|c| self.parts.iter().filter(|&&p| p > c).count())
                .collect(),
        }
    }

    /// Cells `(row, column)`, zero-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Hook length of every cell, in [`Partition::cells`] order.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|(r, c)| (self.parts[r] - c - 1) + (conj.parts[c] - r - 1) + 1)
            .collect()
    }

    /// Content `column - row` of every cell, in [`Partition::cells`] order.
    pub fn contents(&self) -> Vec<i64> {
        self.cells().map(|(r, c)| c as i64 - r as i64).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| invalid(format!("bad part {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` in decreasing lexicographic order, starting at `(n)`.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    check_cap("n", n, MAX_PARTITION_N)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill_partitions(rest: usize, largest: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for part in (1..=largest.min(rest)).rev() {
        current.push(part);
        fill_partitions(rest - part, part, current, out);
        current.pop();
    }
}

/// `f_λ = n! / Π hooks`, the number of standard Young tableaux of shape `λ`.
pub fn f_lambda(lambda: &Partition) -> BigInt {
    let hooks: BigInt = lambda.hooks().into_iter().map(BigInt::from).product();
    factorial(lambda.size() as u64) / hooks
}

/// Every standard Young tableau of shape `λ`, built by placing the largest
/// entry in each outer corner in turn.
pub fn standard_tableaux(lambda: &Partition) -> Vec<Tableau> {
    fn go(shape: &mut Vec<usize>, filled: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        let n: usize = shape.iter().sum();
        if n == 0 {
            out.push(Tableau::from_rows(
                filled.iter().filter(|r| !r.is_empty()).cloned().collect(),
            ));
            return;
        }
        for r in 0..shape.len() {
            let is_corner = shape[r] > 0 && shape.get(r + 1).is_none_or(|&below| below < shape[r]);
            if is_corner {
                shape[r] -= 1;
                filled[r][shape[r]] = n;
                go(shape, filled, out);
                shape[r] += 1;
            }
        }
    }
    let mut shape = lambda.parts.clone();
    let mut filled: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    let mut out = Vec::new();
    go(&mut shape, &mut filled, &mut out);
    out
}

/// `f_λ(S)`: standard tableaux of shape `λ` grouped by descent set.
pub fn tableau_descent_counts(lambda: &Partition) -> BTreeMap<DescentSet, u64> {
    let mut counts = BTreeMap::new();
    for t in standard_tableaux(lambda) {
        *counts.entry(t.descent_set()).or_insert(0) += 1;
    }
    counts
}

/// `s_λ(1/k, ..., 1/k)` with `k` arguments:
/// `k^{-n} Π_cells (k + content) / hook`. Zero when `λ` has more than `k` rows.
pub fn schur_principal(lambda: &Partition, k: u64) -> Result<Rational> {
    if k == 0 {
        return Err(invalid("need at least one argument"));
    }
    Ok(schur_principal_big(lambda, &BigInt::from(k)))
}

/// As [`schur_principal`] for a number of arguments beyond machine words.
pub fn schur_principal_big(lambda: &Partition, k: &BigInt) -> Rational {
    let num: BigInt = lambda.contents().into_iter().map(|c| k + c).product();
    if num.is_negative() || num.is_zero() {
        return Rational::zero();
    }
    let hooks: BigInt = lambda.hooks().into_iter().map(BigInt::from).product();
    Rational::new(num, hooks * num_traits::pow(k.clone(), lambda.size()))
}

/// Number of semistandard tableaux of shape `λ` with entries in `1..=k`, by
/// direct enumeration. Equals `kⁿ s_λ(1/k, ..., 1/k)`.
pub fn ssyt_count(lambda: &Partition, k: usize) -> u64 {
    fn go(cells: &[(usize, usize)], at: usize, grid: &mut [Vec<usize>], k: usize) -> u64 {
        let Some(&(r, c)) = cells.get(at) else {
            return 1;
        };
        let left = if c > 0 { grid[r][c - 1] } else { 1 };
        let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in left.max(above)..=k {
            grid[r][c] = v;
            total += go(cells, at + 1, grid, k);
        }
        total
    }
    let cells: Vec<(usize, usize)> = lambda.cells().collect();
    let mut grid: Vec<Vec<usize>> = lambda.parts.iter().map(|&len| vec![0; len]).collect();
    go(&cells, 0, &mut grid, k)
}

/// Both sides of `Σ_{|λ|=n} s_λ(1/k, ..., 1/k)² = k^{-2n} C(k² + n - 1, n)`.
pub fn cauchy_check(n: usize, k: u64) -> Result<(Rational, Rational)> {
    if n == 0 || k == 0 {
        return Err(invalid("need n >= 1 and k >= 1"));
    }
    let lhs: Rational = partitions(n)?
        .par_iter()
        .map(|lambda| {
            let s = schur_principal_big(lambda, &BigInt::from(k));
            &s * &s
        })
        .reduce(Rational::zero, |a, b| a + b);
    let k2 = BigInt::from(k) * BigInt::from(k);
    let rhs = Rational::new(
        binomial(&k2 + BigInt::from(n) - 1, n as u64),
        num_traits::pow(k2, n),
    );
    Ok((lhs, rhs))
}

/// Upper bounds on the descent-set distance after `r` `b`-shuffles:
/// `½√(Π_{i<n} (1 + i/b^{2r}) - 1)` and the cruder `½√(exp(C(n,2)/b^{2r}) - 1)`.
pub fn descent_set_tv_bound(n: usize, b: u64, r: u32) -> Result<(f64, f64)> {
    if n == 0 || b < 2 {
        return Err(invalid("need n >= 1 and b >= 2"));
    }
    let x = (b as f64).powi(2 * r as i32).recip();
    if !x.is_finite() {
        return Err(invalid("b^r is not representable"));
    }
    let log_product: f64 = (1..n).map(|i| (i as f64 * x).ln_1p()).sum();
    let pairs = (n * (n - 1) / 2) as f64;
    Ok((
        0.5 * log_product.exp_m1().sqrt(),
        0.5 * (pairs * x).exp_m1().sqrt(),
    ))
}

/// Law of the descent set after `r` successive `b`-shuffles, with `π̃`,
/// keyed by descent set; `n <= 8`.
pub fn descent_set_laws(n: usize, b: u64, r: u32) -> Result<BTreeMap<DescentSet, (Rational, Rational)>> {
    check_cap("n", n, MAX_N_TYPE_A)?;
    if n == 0 || b == 0 {
        return Err(invalid("need n >= 1 and b >= 1"));
    }
    let piles = num_traits::pow(BigInt::from(b), r as usize);
    let nf = factorial(n as u64);
    let mut laws: BTreeMap<DescentSet, (Rational, Rational)> = descent_set_counts(n)?
        .into_iter()
        .map(|(s, count)| (s, (Rational::zero(), Rational::new(count.into(), nf.clone()))))
        .collect();
    for p in all_permutations(n) {
        let entry = laws.get_mut(&p.descent_set()).expect("every descent set is counted");
        entry.0 += shuffle_probability_big(&p, &piles);
    }
    Ok(laws)
}

/// `½ Σ_S |P̃^r(S) - π̃(S)|` exactly, for `n <= 8`.
pub fn exact_descent_set_tv(n: usize, b: u64, r: u32) -> Result<Rational> {
    let laws = descent_set_laws(n, b, r)?;
    let (p, q): (Vec<Rational>, Vec<Rational>) = laws.into_values().unzip();
    tv_distance_slices(&p, &q)
}

/// RSK shape law after a `k`-shuffle: `λ ↦ f_λ s_λ(1/k, ..., 1/k)`.
pub fn shape_measure(n: usize, k: u64) -> Result<Vec<(Partition, Rational)>> {
    if k == 0 {
        return Err(invalid("need k >= 1"));
    }
    shape_measure_big(n, &BigInt::from(k))
}

/// As [`shape_measure`] with `k` possibly beyond machine words.
pub fn shape_measure_big(n: usize, k: &BigInt) -> Result<Vec<(Partition, Rational)>> {
    Ok(partitions(n)?
        .into_par_iter()
        .map(|lambda| {
            let mass = int(f_lambda(&lambda)) * schur_principal_big(&lambda, k);
            (lambda, mass)
        })
        .collect())
}

/// Plancherel measure `λ ↦ f_λ² / n!`.
pub fn plancherel(n: usize) -> Result<Vec<(Partition, Rational)>> {
    let nf = factorial(n as u64);
    Ok(partitions(n)?
        .into_par_iter()
        .map(|lambda| {
            let f = f_lambda(&lambda);
            let mass = Rational::new(&f * &f, nf.clone());
            (lambda, mass)
        })
        .collect())
}

/// `π̃(S) = Σ_λ f_λ(S) f_λ / n!`, using tableau descent sets.
pub fn descent_set_law_from_tableaux(n: usize) -> Result<BTreeMap<DescentSet, Rational>> {
    let nf = factorial(n as u64);
    let mut law: BTreeMap<DescentSet, Rational> = BTreeMap::new();
    for lambda in partitions(n)? {
        let f = f_lambda(&lambda);
        for (s, count) in tableau_descent_counts(&lambda) {
            *law.entry(s).or_insert_with(Rational::zero) +=
                Rational::new(&f * BigInt::from(count), nf.clone());
        }
    }
    Ok(law)
}
