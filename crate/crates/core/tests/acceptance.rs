//! Acceptance criteria, one test each. Every test writes a single
//! `criterion NN: PASS|FAIL ...` line to stdout (bypassing libtest capture)
//! and then asserts the same condition, including its time budget.

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use carries_core::carries::{
    add_columns, bound_monotone_upper, eigenfunction_residuals, lower_bound_radius,
    lower_bound_radius_sharp, parse_addends, r_step_row, simulate, stationary, transition_matrix,
    tv_to_stationarity,
};
use carries_core::exact::{eulerian, eulerian_type_b, factorial, int, irwin_hall_cdf, ratio, to_f64};
use carries_core::gauss::{
    compare_marginals, epsilon_mean_closed_form, epsilon_moments, epsilon_variance_closed_form,
    matrix_from_epsilon, stein_shift_bound_check,
};
use carries_core::groups::{all_permutations, all_signed_permutations};
use carries_core::shuffles::{
    descent_law_after_r, inverse_descent_chain, sample_shuffles, shuffle_law,
    verify_gessel_identity, DescentLawRoute,
};
use carries_core::symfunc::{cauchy_check, descent_set_tv_bound, exact_descent_set_tv};
use carries_core::typeb::{
    add_columns_type_b, inverse_descent_chain_b, rounding_law_check, sample_shuffles_b,
    shuffle_law_b, stationary_b, transition_matrix_b, transition_matrix_b_by_convolution,
    verify_gessel_identity_b,
};
use carries_core::veronese::{c_matrix, limit_check, veronese_transform};
use carries_core::{ExactMatrix, HVector, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIFTY_DIGIT_ADDENDS: &str = include_str!("fixtures/fifty_digit_addends.txt");

fn report(id: u32, what: &str, passed: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let in_time = elapsed <= budget;
    let status = if passed && in_time { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {id:02}: {status} {what} [{detail}] ({:.2}s, budget {}s)\n",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(passed, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} over its time budget: {elapsed:?} > {budget:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_01_fifty_digit_addition() {
    let start = Instant::now();
    let lines: Vec<&str> = FIFTY_DIGIT_ADDENDS.lines().collect();
    let trace = add_columns(&parse_addends(&lines, 10).unwrap(), 10).unwrap();
    let sum_ok = trace.sum_string() == "126091187197757123934202537472598027525855025024180";
    let hist = trace.histogram();
    let ok = sum_ok && hist == [6, 40, 4];
    report(1, "worked fifty-digit addition", ok, &format!("histogram {hist:?}"), start.elapsed(), secs(1));
}

#[test]
fn criterion_02_three_summand_matrix() {
    let start = Instant::now();
    let mut ok = true;
    for b in [2i64, 3, 10] {
        let scale = ratio(1, 6 * b * b);
        let entry = |x: i64| &scale * int(x);
        let expected = ExactMatrix::from_rows(vec![
            vec![entry(b * b + 3 * b + 2), entry(4 * b * b - 4), entry(b * b - 3 * b + 2)],
            vec![entry(b * b - 1), entry(4 * b * b + 2), entry(b * b - 1)],
            vec![entry(b * b - 3 * b + 2), entry(4 * b * b - 4), entry(b * b + 3 * b + 2)],
        ])
        .unwrap();
        ok &= transition_matrix(3, b as u64).unwrap() == expected;
    }
    report(2, "three-summand matrix against the closed form", ok, "b in 2,3,10", start.elapsed(), secs(1));
}

#[test]
fn criterion_03_matrices_multiply_like_bases() {
    let start = Instant::now();
    let bases = [2u64, 3, 4, 10];
    let mut ok = true;
    for n in 1..=8u32 {
        for a in bases {
            for b in bases {
                let lhs = transition_matrix(n, a).unwrap().mul(&transition_matrix(n, b).unwrap()).unwrap();
                ok &= lhs == transition_matrix(n, a * b).unwrap();
            }
        }
    }
    report(3, "P_a P_b = P_ab", ok, "n<=8, a,b in 2,3,4,10", start.elapsed(), secs(30));
}

#[test]
fn criterion_04_carries_equal_shuffle_descents() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=6usize {
        for b in [2u64, 3] {
            for r in 1..=4 {
                let law = descent_law_after_r(n, b, r, DescentLawRoute::Enumeration).unwrap();
                ok &= law == r_step_row(n as u32, b, r, 0).unwrap();
            }
        }
    }
    report(4, "carries from 0 = descents after r shuffles", ok, "n<=6 b in 2,3 r<=4", start.elapsed(), secs(60));
}

#[test]
fn criterion_05_inverse_descent_time_reversal() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=6usize {
        for b in [2u64, 3] {
            let p = transition_matrix(n as u32, b).unwrap();
            let pi = stationary(n as u32).unwrap();
            let m = inverse_descent_chain(n, b).unwrap();
            for i in 0..n {
                for j in 0..n {
                    ok &= &m[(i, j)] * &pi[i] == &pi[j] * &p[(j, i)];
                }
            }
        }
    }
    for n in 1..=4usize {
        for b in [1u64, 2] {
            let p = transition_matrix_b(n as u32, b).unwrap();
            let pi = stationary_b(n as u32).unwrap();
            let m = inverse_descent_chain_b(n, b).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    ok &= &m[(i, j)] * &pi[i] == &pi[j] * &p[(j, i)];
                }
            }
        }
    }
    report(5, "inverse-descent chains are time reversals", ok, "A: n<=6 b in 2,3; B: n<=4 b in 1,2", start.elapsed(), secs(60));
}

#[test]
fn criterion_06_pair_count_generating_functions() {
    let start = Instant::now();
    let mut compared = 0;
    let mut ok = true;
    for n in 1..=5 {
        for d in 0..n {
            let check = verify_gessel_identity(n, d, 6, 6).unwrap();
            ok &= check.holds;
            compared += check.compared;
        }
    }
    for n in 1..=3 {
        for d in 0..=n {
            let check = verify_gessel_identity_b(n, d, 6, 6).unwrap();
            ok &= check.holds;
            compared += check.compared;
        }
    }
    let detail = format!("{compared} coefficients, A n<=5, B n<=3, degree 6");
    report(6, "pair-count generating functions", ok, &detail, start.elapsed(), secs(120));
}

#[test]
fn criterion_07_stationarity_and_irwin_hall() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=8u32 {
        let pi = stationary(n).unwrap();
        for b in [2u64, 3, 10] {
            ok &= transition_matrix(n, b).unwrap().left_mul(pi.entries()).unwrap() == pi.entries();
        }
        let nf = int(factorial(u64::from(n)));
        for j in 1..=n as i64 {
            let mass = irwin_hall_cdf(n, &int(j)) - irwin_hall_cdf(n, &int(j - 1));
            ok &= mass == int(eulerian(n, j - 1)) / &nf;
        }
    }
    report(7, "Eulerian law is stationary; Irwin-Hall unit masses", ok, "n<=8", start.elapsed(), secs(5));
}

#[test]
fn criterion_08_descent_set_bounds_and_cauchy() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_gap = f64::INFINITY;
    for n in 1..=6 {
        for r in 1..=6 {
            let tv = to_f64(&exact_descent_set_tv(n, 2, r).unwrap());
            let (product, exponential) = descent_set_tv_bound(n, 2, r).unwrap();
            ok &= tv <= product && product <= exponential;
            worst_gap = worst_gap.min(product - tv);
        }
    }
    for n in 1..=8 {
        for k in [2, 3, 4, 8] {
            let (lhs, rhs) = cauchy_check(n, k).unwrap();
            ok &= lhs == rhs;
        }
    }
    let detail = format!("n<=6 b=2 r<=6, min(bound - exact) = {worst_gap:.3e}; Cauchy n<=8 k in 2,3,4,8");
    report(8, "descent-set distance bounds and Cauchy identity", ok, &detail, start.elapsed(), secs(120));
}

#[test]
fn criterion_09_coupling_bound_and_lower_radius() {
    let start = Instant::now();
    let mut ok = true;
    for n in [3u32, 5, 10, 20, 50] {
        for r in 0..=12 {
            for i in [0, (n / 2) as usize, n as usize - 1] {
                ok &= tv_to_stationarity(n, 2, r, i).unwrap() <= bound_monotone_upper(n, 2, r, i).unwrap();
            }
        }
    }
    let eps = ratio(1, 2);
    let half = ratio(1, 2);
    let radius = lower_bound_radius(50, 2, 0, &eps).unwrap();
    let sharp = lower_bound_radius_sharp(50, 2, 0, &eps).unwrap();
    let tv_radius = tv_to_stationarity(50, 2, radius, 0).unwrap();
    let tv_sharp = tv_to_stationarity(50, 2, sharp, 0).unwrap();
    ok &= tv_radius >= half && tv_sharp >= half;
    for n in [3u32, 10, 50] {
        for b in [2u64, 3] {
            let (r1, r2) = eigenfunction_residuals(n, b).unwrap();
            ok &= r1.is_zero() && r2.is_zero();
        }
    }
    let detail = format!(
        "n<=50 b=2 r<=12; TV {:.4} at radius {radius}, {:.4} at sharp radius {sharp}; residuals 0",
        to_f64(&tv_radius),
        to_f64(&tv_sharp)
    );
    report(9, "coupling upper bound, lower-bound radius, eigenfunctions", ok, &detail, start.elapsed(), secs(120));
}

/// `⌈½ log₂(n c)⌉` for `c = 4`, by exact integer comparison.
fn cutoff_steps(n: u64) -> u32 {
    let target = 4 * n;
    (0..).find(|&r: &u32| 4u64.pow(r) >= target).unwrap()
}

#[test]
fn criterion_10_cutoff_distance_shrinks_with_n() {
    let start = Instant::now();
    let mut tvs = Vec::new();
    for n in [25u64, 100, 400] {
        let r = cutoff_steps(n);
        tvs.push((n, r, to_f64(&tv_to_stationarity(n as u32, 2, r, 0).unwrap())));
    }
    let decreasing = tvs.windows(2).all(|w| w[1].2 < w[0].2);
    let below = tvs[2].2 < 0.2;
    let detail = tvs
        .iter()
        .map(|(n, r, tv)| format!("n={n} r={r} tv={tv:.5}"))
        .collect::<Vec<_>>()
        .join(", ");
    report(10, "distance at the log cutoff decreases and drops below 0.2", decreasing && below, &detail, start.elapsed(), secs(300));
}

#[test]
fn criterion_11_type_b_formula_and_worked_trace() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=5u32 {
        for b in 1..=2 {
            ok &= transition_matrix_b(n, b).unwrap() == transition_matrix_b_by_convolution(n, b).unwrap();
        }
    }
    let trace = add_columns_type_b(&[vec![2, 2, 2], vec![2, 0, 1]], 1).unwrap();
    ok &= trace.carries() == [0, 1, 1, 2];
    let detail = format!("n<=5 b<=2; worked trace {:?}", trace.carries());
    report(11, "type B formula = convolution; worked trace", ok, &detail, start.elapsed(), secs(10));
}

#[test]
fn criterion_12_type_b_eulerian_and_rounding() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=5usize {
        let mut counts = vec![0u64; n + 1];
        for p in all_signed_permutations(n) {
            counts[p.descent_number()] += 1;
        }
        ok &= (0..=n).all(|j| eulerian_type_b(n as u32, j as i64) == counts[j].into());
        let order = int(factorial(n as u64)) * int(1u64 << n);
        let pi = stationary_b(n as u32).unwrap();
        ok &= (0..=n).all(|j| pi[j] == ratio(counts[j], 1) / &order);
    }
    for n in 1..=8 {
        ok &= rounding_law_check(n).unwrap().is_zero();
    }
    report(12, "type B Eulerian numbers and rounding law", ok, "brute force n<=5; rounding n<=8", start.elapsed(), secs(60));
}

#[test]
fn criterion_13_veronese() {
    let start = Instant::now();
    let mut ok = true;
    for b in [2i64, 3, 5] {
        ok &= veronese_transform(&HVector::unit(1).unwrap(), b as u64).unwrap()
            == HVector::from_integers(&[1, b - 1, 0]).unwrap();
        let two = HVector::new(vec![int(1), ratio(b * (b + 3) - 4, 2), ratio(b * (b - 3) + 2, 2), int(0)]).unwrap();
        ok &= veronese_transform(&HVector::unit(2).unwrap(), b as u64).unwrap() == two;
    }
    for n in 1..=6usize {
        for b in [2u64, 3] {
            let c = c_matrix(n, b).unwrap();
            let block = c.submatrix(1, n + 1, 1, n + 1).transpose().scale(&ratio(1, b.pow(n as u32)));
            ok &= block == transition_matrix(n as u32, b).unwrap();
        }
    }
    let devs: Vec<f64> = limit_check(&HVector::unit(2).unwrap(), &[10, 100, 1000])
        .unwrap()
        .iter()
        .map(to_f64)
        .collect();
    let scaled: Vec<f64> = devs.iter().zip([10.0, 100.0, 1000.0]).map(|(d, b)| d * b).collect();
    ok &= devs[0] > devs[1] && devs[1] > devs[2];
    ok &= scaled.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.1);
    let detail = format!("b*deviation = {:.4} {:.4} {:.4}", scaled[0], scaled[1], scaled[2]);
    report(13, "Veronese examples, interior block, 1/b limit rate", ok, &detail, start.elapsed(), secs(30));
}

#[test]
fn criterion_14_gaussian_limit() {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=6u32 {
        for b in 2..=3 {
            ok &= matrix_from_epsilon(n, b).unwrap() == transition_matrix(n, b).unwrap();
        }
    }
    for n in 2..=8u32 {
        for b in [2u64, 3, 5] {
            let m = epsilon_moments(n, b).unwrap();
            ok &= m[b as usize - 1].mean == epsilon_mean_closed_form(n, b);
            ok &= m[..b as usize].iter().all(|x| x.variance == epsilon_variance_closed_form(n, b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let mu = rng.random_range(-2.0..=2.0);
        let sigma = rng.random_range(0.5..=2.0);
        ok &= stein_shift_bound_check(mu, sigma, 1e-3).unwrap().holds();
    }
    let ladder: Vec<Vec<f64>> = [10u32, 40, 160]
        .iter()
        .map(|&n| compare_marginals(n, 2, 5, 0, 0).unwrap().into_iter().map(|r| r.ks_exact).collect())
        .collect();
    ok &= (1..=5).all(|t| ladder[0][t] > ladder[1][t] && ladder[1][t] > ladder[2][t]);
    let detail = format!("KS at t=5 along n=10,40,160: {:.4} {:.4} {:.4}", ladder[0][5], ladder[1][5], ladder[2][5]);
    report(14, "digit representation, increment moments, normal bound, KS ladder", ok, &detail, start.elapsed(), secs(300));
}

/// Largest `|count - N p| / √(N p (1-p))` over states.
fn worst_z(counts: &HashMap<Vec<i64>, u64>, law: &[(Vec<i64>, Rational)], total: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for (key, p) in law {
        let p = to_f64(p);
        let expected = total as f64 * p;
        let observed = *counts.get(key).unwrap_or(&0) as f64;
        let sd = (total as f64 * p * (1.0 - p)).sqrt();
        let z = if sd == 0.0 {
            if observed == expected { 0.0 } else { f64::INFINITY }
        } else {
            (observed - expected).abs() / sd
        };
        worst = worst.max(z);
    }
    worst
}

#[test]
fn criterion_15_monte_carlo_coherence() {
    let start = Instant::now();
    const SAMPLES: usize = 100_000;

    // Carries: given the current state, each transition is a fresh draw from
    // that row, so per-row counts are binomial in the number of visits.
    let (n, b) = (4u32, 3u64);
    let trace = simulate(n, b, SAMPLES, 15).unwrap();
    let counts = trace.transition_counts(1, n as usize);
    let p = transition_matrix(n, b).unwrap();
    let mut z_carries: f64 = 0.0;
    for (i, row) in counts.iter().enumerate() {
        let visits: u64 = row.iter().sum();
        let observed: HashMap<Vec<i64>, u64> = row.iter().enumerate().map(|(j, &c)| (vec![j as i64], c)).collect();
        let law: Vec<(Vec<i64>, Rational)> = (0..n as usize).map(|j| (vec![j as i64], p[(i, j)].clone())).collect();
        z_carries = z_carries.max(worst_z(&observed, &law, visits));
    }

    let mut observed = HashMap::new();
    for s in sample_shuffles(4, 2, SAMPLES, 16).unwrap() {
        *observed.entry(s.word().iter().map(|&x| x as i64).collect()).or_insert(0) += 1;
    }
    let law: Vec<(Vec<i64>, Rational)> = shuffle_law(4, 2)
        .unwrap()
        .into_iter()
        .map(|(s, q)| (s.word().iter().map(|&x| x as i64).collect(), q))
        .collect();
    let z_a = worst_z(&observed, &law, SAMPLES as u64);

    let mut observed = HashMap::new();
    for s in sample_shuffles_b(3, 1, SAMPLES, 17).unwrap() {
        *observed.entry(s.word().to_vec()).or_insert(0) += 1;
    }
    let law: Vec<(Vec<i64>, Rational)> = shuffle_law_b(3, 1, 1)
        .unwrap()
        .into_iter()
        .map(|(s, q)| (s.word().to_vec(), q))
        .collect();
    let z_b = worst_z(&observed, &law, SAMPLES as u64);

    let ok = z_carries <= 4.0 && z_a <= 4.0 && z_b <= 4.0;
    let detail = format!("max |z|: carries {z_carries:.2}, shuffle {z_a:.2}, signed shuffle {z_b:.2}");
    report(15, "seeded simulators within 4 sigma per state at 1e5 draws", ok, &detail, start.elapsed(), secs(60));
}

#[test]
fn every_permutation_is_reachable_in_the_exact_laws() {
    assert_eq!(shuffle_law(4, 2).unwrap().len(), all_permutations(4).len());
}
