//! Self-checks of every identity the crate relies on, grouped by module.
//!
//! Each check recomputes both sides independently and reports whether they
//! agree. `max_n` bounds the group sizes; checks with a smaller natural cap
//! use the smaller of the two.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carries::{
    add_columns, bound_monotone_upper, eigenfunction_residuals, parse_addends, r_step_matrix,
    stationary, transition_matrix, tv_to_stationarity,
};
use crate::error::{invalid, Error, Result};
use crate::exact::{eulerian_row, eulerian_type_b_row, factorial, int, irwin_hall_cdf, ratio};
use crate::gauss::{
    compare_marginals, epsilon_mean_closed_form, epsilon_moments, epsilon_variance_closed_form,
    matrix_from_epsilon, normal_pair_check, stein_shift_bound_check,
};
use crate::groups::{all_permutations, all_signed_permutations, rsk};
use crate::shuffles::{
    convolve_laws, descent_law_after_r, digit_sampler_law, inverse_descent_chain, shuffle_law,
    verify_gessel_identity, DescentLawRoute,
};
use crate::symfunc::{
    cauchy_check, descent_set_law_from_tableaux, descent_set_laws, descent_set_tv_bound,
    exact_descent_set_tv, f_lambda, partitions, standard_tableaux,
};
use crate::typeb::{
    add_columns_type_b, descent_law_after_r_b, inverse_descent_chain_b, r_step_matrix_b,
    r_step_row_b, rounding_law_check, stationary_b, transition_matrix_b,
    transition_matrix_b_by_convolution, verify_gessel_identity_b,
};
use crate::veronese::{
    c_matrix, c_matrix_by_counting, limit_check, sectioning_agrees, veronese_transform, HVector,
    SECTIONING_DEPTH,
};

const FIFTY_DIGIT_ADDENDS: &str = include_str!("../tests/fixtures/fifty_digit_addends.txt");

/// A group of checks that can be run on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Module {
    Exact,
    Groups,
    Carries,
    Shuffles,
    TypeB,
    Symfunc,
    Veronese,
    Gauss,
}

impl Module {
    pub const ALL: [Module; 8] = [
        Module::Exact,
        Module::Groups,
        Module::Carries,
        Module::Shuffles,
        Module::TypeB,
        Module::Symfunc,
        Module::Veronese,
        Module::Gauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Module::Exact => "exact",
            Module::Groups => "groups",
            Module::Carries => "carries",
            Module::Shuffles => "shuffles",
            Module::TypeB => "typeb",
            Module::Symfunc => "symfunc",
            Module::Veronese => "veronese",
            Module::Gauss => "gauss",
        }
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Module {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Module::ALL
            .into_iter()
            .find(|m| m.name() == s || (s == "shuffle" && *m == Module::Shuffles))
            .ok_or_else(|| invalid(format!("unknown module {s:?}")))
    }
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub module: Module,
    /// What identity is checked.
    pub check: String,
    /// Parameter range covered.
    pub params: String,
    pub passed: bool,
    /// `EXACT MATCH`, or the observed quantities.
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check,
            self.params,
            self.module,
            self.detail
        )
    }
}

/// Runs the checks for `modules` (all when empty), in a fixed order.
pub fn run(modules: &[Module], max_n: usize) -> Result<Vec<CheckOutcome>> {
    if max_n == 0 {
        return Err(invalid("max-n must be at least 1"));
    }
    let selected: Vec<Module> = if modules.is_empty() {
        Module::ALL.to_vec()
    } else {
        modules.to_vec()
    };
    let groups: Vec<Vec<CheckOutcome>> = selected
        .par_iter()
        .map(|&m| match m {
            Module::Exact => exact_checks(max_n),
            Module::Groups => group_checks(max_n),
            Module::Carries => carries_checks(max_n),
            Module::Shuffles => shuffle_checks(max_n),
            Module::TypeB => typeb_checks(max_n),
            Module::Symfunc => symfunc_checks(max_n),
            Module::Veronese => veronese_checks(max_n),
            Module::Gauss => gauss_checks(max_n),
        })
        .collect::<Result<_>>()?;
    Ok(groups.into_iter().flatten().collect())
}

struct Recorder {
    module: Module,
    out: Vec<CheckOutcome>,
}

impl Recorder {
    fn new(module: Module) -> Self {
        Self {
            module,
            out: Vec::new(),
        }
    }

    fn exact(&mut self, check: &str, params: String, passed: bool) {
        let detail = if passed { "EXACT MATCH" } else { "MISMATCH" };
        self.record(check, params, passed, detail.to_string());
    }

    fn record(&mut self, check: &str, params: String, passed: bool, detail: String) {
        self.out.push(CheckOutcome {
            module: self.module,
            check: check.to_string(),
            params,
            passed,
            detail,
        });
    }

    fn finish(self) -> Result<Vec<CheckOutcome>> {
        Ok(self.out)
    }
}

fn exact_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Exact);
    let top = max_n.min(8) as u32;
    let mut ok = true;
    for n in 1..=top {
        let mut counts = vec![0u64; n as usize];
        for p in all_permutations(n as usize) {
            counts[p.descent_number()] += 1;
        }
        ok &= eulerian_row(n).into_iter().eq(counts.into_iter().map(Into::into));
    }
    rec.exact("Eulerian numbers count descents", format!("n<={top}"), ok);

    let top_b = max_n.min(5) as u32;
    let mut ok = true;
    for n in 1..=top_b {
        let mut counts = vec![0u64; n as usize + 1];
        for p in all_signed_permutations(n as usize) {
            counts[p.descent_number()] += 1;
        }
        ok &= eulerian_type_b_row(n).into_iter().eq(counts.into_iter().map(Into::into));
    }
    rec.exact("type B Eulerian numbers count signed descents", format!("n<={top_b}"), ok);

    let top = max_n.min(8) as u32;
    let mut ok = true;
    for n in 1..=top {
        let nf = int(factorial(u64::from(n)));
        for (j, a) in eulerian_row(n).into_iter().enumerate() {
            let mass = irwin_hall_cdf(n, &int(j as u64 + 1)) - irwin_hall_cdf(n, &int(j as u64));
            ok &= mass == int(a) / &nf;
        }
    }
    rec.exact("Irwin-Hall unit increments are Eulerian", format!("n<={top}"), ok);
    rec.finish()
}

fn group_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Groups);
    let top = max_n.min(6);
    let mut ok = true;
    for n in 1..=top {
        for p in all_permutations(n) {
            let (_, recording) = rsk(&p);
            ok &= recording.descent_set() == p.descent_set();
        }
    }
    rec.exact("RSK recording tableau keeps the descent set", format!("n<={top}"), ok);
    rec.finish()
}

fn carries_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Carries);
    let lines: Vec<&str> = FIFTY_DIGIT_ADDENDS.lines().collect();
    let trace = add_columns(&parse_addends(&lines, 10)?, 10)?;
    let ok = trace.histogram() == [6, 40, 4]
        && trace.sum_string() == "126091187197757123934202537472598027525855025024180";
    rec.exact("fifty-digit worked addition", "n=3 b=10".into(), ok);

    let top = max_n.min(8) as u32;
    let mut ok = true;
    for n in 1..=top {
        for (a, b) in [(2u64, 3u64), (3, 2), (2, 10)] {
            let lhs = transition_matrix(n, a)?.mul(&transition_matrix(n, b)?)?;
            ok &= lhs == transition_matrix(n, a * b)?;
        }
    }
    rec.exact("P_a P_b = P_ab", format!("n<={top} (a,b) in (2,3),(3,2),(2,10)"), ok);

    let mut ok = true;
    for n in 1..=top {
        let pi = stationary(n)?;
        for b in [2u64, 3, 10] {
            ok &= transition_matrix(n, b)?.left_mul(pi.entries())? == pi.entries();
        }
    }
    rec.exact("Eulerian law is stationary", format!("n<={top} b in 2,3,10"), ok);

    let mut ok = true;
    for n in 3..=top.max(3) {
        for b in [2u64, 3] {
            let (r1, r2) = eigenfunction_residuals(n, b)?;
            ok &= r1.is_zero() && r2.is_zero();
        }
    }
    rec.exact("eigenfunctions for 1/b and 1/b^2", format!("3<=n<={}", top.max(3)), ok);

    let mut ok = true;
    for n in 3..=top.max(3) {
        for r in 1..=6 {
            for i in 0..n as usize {
                ok &= tv_to_stationarity(n, 2, r, i)? <= bound_monotone_upper(n, 2, r, i)?;
            }
        }
    }
    rec.record(
        "distance below ((n-1)/2 + i)/b^r",
        format!("3<=n<={} b=2 r<=6", top.max(3)),
        ok,
        if ok { "ALL BELOW" } else { "VIOLATED" }.into(),
    );
    rec.finish()
}

fn shuffle_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Shuffles);
    let top = max_n.min(6);
    let mut ok = true;
    for n in 1..=top {
        for b in [2u64, 3] {
            for r in 1..=3 {
                let direct = descent_law_after_r(n, b, r, DescentLawRoute::Enumeration)?;
                let table = descent_law_after_r(n, b, r, DescentLawRoute::DescentTable)?;
                ok &= direct.entries() == r_step_matrix(n as u32, b, r)?.row(0) && table == direct;
            }
        }
    }
    rec.exact("carries from 0 = descents after r shuffles", format!("n<={top} b in 2,3 r<=3"), ok);

    let top = max_n.min(5);
    let mut ok = true;
    for n in 1..=top {
        for a in 1..=3 {
            ok &= digit_sampler_law(n, a)? == shuffle_law(n, a)?;
        }
        ok &= convolve_laws(&shuffle_law(n, 2)?, &shuffle_law(n, 3)?) == shuffle_law(n, 6)?;
    }
    rec.exact("digit sampler law and a-shuffle composition", format!("n<={top} a<=3"), ok);

    let mut ok = true;
    for n in 1..=top {
        let p = transition_matrix(n as u32, 2)?;
        let pi = stationary(n as u32)?;
        let m = inverse_descent_chain(n, 2)?;
        for i in 0..n {
            for j in 0..n {
                ok &= &m[(i, j)] * &pi[i] == &pi[j] * &p[(j, i)];
            }
        }
    }
    rec.exact("inverse-descent chain is the time reversal", format!("n<={top} b=2"), ok);

    let top = max_n.min(4);
    let mut ok = true;
    for n in 1..=top {
        for d in 0..n {
            ok &= verify_gessel_identity(n, d, 6, 6)?.holds;
        }
    }
    rec.exact("pair-count generating function", format!("n<={top} all d degree 6"), ok);
    rec.finish()
}

fn typeb_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::TypeB);
    let trace = add_columns_type_b(&[vec![2, 2, 2], vec![2, 0, 1]], 1)?;
    rec.exact("worked type B addition", "222+201+111 base 3".into(), trace.carries() == [0, 1, 1, 2]);

    let top = max_n.min(5) as u32;
    let mut ok = true;
    for n in 1..=top {
        for b in 1..=2 {
            ok &= transition_matrix_b(n, b)? == transition_matrix_b_by_convolution(n, b)?;
            ok &= r_step_matrix_b(n, b, 2)? == transition_matrix_b(n, b)?.pow(2)?;
            let pi = stationary_b(n)?;
            ok &= transition_matrix_b(n, b)?.left_mul(pi.entries())? == pi.entries();
        }
    }
    rec.exact("formula, convolution, powers and stationarity", format!("n<={top} b<=2"), ok);

    let top = max_n.min(4);
    let mut ok = true;
    for n in 1..=top {
        for b in 1..=2 {
            for r in 1..=3 {
                ok &= descent_law_after_r_b(n, b, r)? == r_step_row_b(n as u32, b, r, 0)?;
            }
        }
    }
    rec.exact("type B carries = signed shuffle descents", format!("n<={top} b<=2 r<=3"), ok);

    let mut ok = true;
    for n in 1..=top {
        let p = transition_matrix_b(n as u32, 1)?;
        let pi = stationary_b(n as u32)?;
        let m = inverse_descent_chain_b(n, 1)?;
        for i in 0..=n {
            for j in 0..=n {
                ok &= &m[(i, j)] * &pi[i] == &pi[j] * &p[(j, i)];
            }
        }
    }
    rec.exact("signed inverse-descent chain is the time reversal", format!("n<={top} b=1"), ok);

    let top = max_n.min(3);
    let mut ok = true;
    for n in 1..=top {
        for d in 0..=n {
            ok &= verify_gessel_identity_b(n, d, 6, 6)?.holds;
        }
    }
    rec.exact("signed pair-count generating function", format!("n<={top} all d degree 6"), ok);

    let top = max_n.min(8) as u32;
    let mut ok = true;
    for n in 1..=top {
        ok &= rounding_law_check(n)?.is_zero();
    }
    rec.exact("rounded uniform sums have the type B Eulerian law", format!("n<={top}"), ok);
    rec.finish()
}

fn symfunc_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Symfunc);
    let top = max_n.min(7);
    let mut ok = true;
    for n in 1..=top {
        for lambda in partitions(n)? {
            ok &= f_lambda(&lambda) == standard_tableaux(&lambda).len().into();
        }
    }
    rec.exact("hook length formula counts tableaux", format!("n<={top}"), ok);

    let top = max_n.min(8);
    let mut ok = true;
    for n in 1..=top {
        for k in [2, 3, 4, 8] {
            let (lhs, rhs) = cauchy_check(n, k)?;
            ok &= lhs == rhs;
        }
    }
    rec.exact("Cauchy identity at equal arguments", format!("n<={top} k in 2,3,4,8"), ok);

    let top = max_n.min(6);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for n in 1..=top {
        for r in 1..=6 {
            let tv = crate::exact::to_f64(&exact_descent_set_tv(n, 2, r)?);
            let (product, exponential) = descent_set_tv_bound(n, 2, r)?;
            ok &= tv <= product && product <= exponential;
            worst = worst.max(tv - product);
        }
    }
    rec.record(
        "descent-set distance <= product bound <= exponential bound",
        format!("n<={top} b=2 r<=6"),
        ok,
        format!("max(exact - bound) = {worst:.3e}"),
    );

    let mut ok = true;
    for n in 1..=top {
        let via_tableaux = descent_set_law_from_tableaux(n)?;
        let direct = descent_set_laws(n, 2, 1)?;
        ok &= via_tableaux.len() == direct.len()
            && direct.iter().all(|(s, (_, pi))| via_tableaux.get(s) == Some(pi));
    }
    rec.exact("descent-set law through tableaux", format!("n<={top}"), ok);
    rec.finish()
}

fn veronese_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Veronese);
    let mut ok = true;
    for b in [2i64, 3, 5] {
        ok &= veronese_transform(&HVector::unit(1)?, b as u64)? == HVector::from_integers(&[1, b - 1, 0])?;
        let expected = HVector::new(vec![
            int(1),
            ratio(b * (b + 3) - 4, 2),
            ratio(b * (b - 3) + 2, 2),
            int(0),
        ])?;
        ok &= veronese_transform(&HVector::unit(2)?, b as u64)? == expected;
    }
    rec.exact("worked transforms for n = 1, 2", "b in 2,3,5".into(), ok);

    let top = max_n.min(6);
    let mut ok = true;
    for n in 1..=top {
        for b in [2u64, 3] {
            let c = c_matrix(n, b)?;
            let block = c
                .submatrix(1, n + 1, 1, n + 1)
                .transpose()
                .scale(&ratio(1, b.pow(n as u32)));
            ok &= block == transition_matrix(n as u32, b)?;
            ok &= n > 4 || c == c_matrix_by_counting(n, b)?;
        }
    }
    rec.exact("interior block is the transposed carries matrix", format!("n<={top} b in 2,3"), ok);

    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.random_range(1..=max_n.min(5));
        let b = rng.random_range(1..=5);
        let coeffs: Vec<i64> = (0..n + 2).map(|_| rng.random_range(-9..=9)).collect();
        ok &= sectioning_agrees(&HVector::from_integers(&coeffs)?, b, SECTIONING_DEPTH)?;
    }
    rec.exact("matrix transform = sectioned series", format!("20 seeded h, depth {SECTIONING_DEPTH}"), ok);

    let devs = limit_check(&HVector::unit(2)?, &[10, 100, 1000])?;
    let d: Vec<f64> = devs.iter().map(crate::exact::to_f64).collect();
    let ok = d[0] > d[1] && d[1] > d[2] && (d[1] / d[2] / 10.0 - 1.0).abs() < 0.1;
    rec.record(
        "normalised transform tends to the Eulerian polynomial",
        "n=2 b in 10,100,1000".into(),
        ok,
        format!("deviations {:.3e} {:.3e} {:.3e}", d[0], d[1], d[2]),
    );
    rec.finish()
}

fn gauss_checks(max_n: usize) -> Result<Vec<CheckOutcome>> {
    let mut rec = Recorder::new(Module::Gauss);
    let top = max_n.min(6) as u32;
    let mut ok = true;
    for n in 1..=top {
        for b in 2..=3 {
            ok &= matrix_from_epsilon(n, b)? == transition_matrix(n, b)?;
        }
    }
    rec.exact("digit representation rebuilds the chain", format!("n<={top} b<=3"), ok);

    let top = max_n.clamp(2, 8) as u32;
    let mut ok = true;
    for n in 2..=top {
        for b in [2u64, 3, 5] {
            let m = epsilon_moments(n, b)?;
            let top_residue = &m[b as usize - 1];
            ok &= top_residue.mean == epsilon_mean_closed_form(n, b);
            ok &= m[..b as usize]
                .iter()
                .all(|x| x.variance == epsilon_variance_closed_form(n, b));
        }
    }
    rec.exact(
        "increment moments (mean at residue b-1, variance at every residue)",
        format!("2<=n<={top} b in 2,3,5"),
        ok,
    );

    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let mu = rng.random_range(-2.0..=2.0);
        let sigma = rng.random_range(0.5..=2.0);
        ok &= stein_shift_bound_check(mu, sigma, 1e-3)?.holds();
        let nu = rng.random_range(-2.0..=2.0);
        let tau = rng.random_range(0.5..=2.0);
        ok &= normal_pair_check(nu, tau, mu, sigma, 1e-3)?.holds();
    }
    rec.record(
        "normal shift bound on a 1e-3 grid",
        "50 seeded (mu, sigma)".into(),
        ok,
        if ok { "ALL BELOW" } else { "VIOLATED" }.into(),
    );

    let ladder: Vec<Vec<f64>> = [10u32, 40, 160]
        .iter()
        .map(|&n| Ok(compare_marginals(n, 2, 5, 0, 0)?.into_iter().map(|r| r.ks_exact).collect()))
        .collect::<Result<_>>()?;
    let ok = (1..=5).all(|t| ladder[0][t] > ladder[1][t] && ladder[1][t] > ladder[2][t]);
    rec.record(
        "normalised carries approach the AR(1) marginals",
        "n in 10,40,160 b=2 t<=5".into(),
        ok,
        format!("KS at t=3: {:.4} {:.4} {:.4}", ladder[0][3], ladder[1][3], ladder[2][3]),
    );
    rec.finish()
}
