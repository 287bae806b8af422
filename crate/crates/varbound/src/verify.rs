//! Named verification checks covering every module's invariants, oracles,
//! and golden values. The `verify` CLI subcommand runs [`run_all`] and prints
//! one line per check; the acceptance test target runs the same functions.
//!
//! Checks that consume randomness derive everything from an explicit seed,
//! so outcomes are reproducible run to run and across thread counts.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    bound_report, check_weight_gram_psd, covariance_sum_bounds, exact_variance,
    mean_variance_bound, principal_minor, weighted_variance_sum, BoundKind, PsdCheck,
    WeightGramComplement, SLACK_REL_TOL,
};
use crate::lln::{
    diagnose, mean_of_variances, power_mean, var_of_mean, BudgetBranch, LlnCondition, Verdict,
};
use crate::model::{
    random_correlation, CovarianceModel, Instance, VarianceProfile, WeightClass, WeightVector,
};
use crate::processes::{
    closed_form_value, mc_estimate, running_mean_var_of_mean, telegraph_flip_probability,
    telegraph_var_of_mean, ProcessModel, Statistic,
};
use crate::report::{fmt_float, parse_csv, write_csv_line};
use crate::table1::{enumerate_weight_compositions, run_table1, GridSpec};
use crate::tails::{empirical_tail, tail_bound_mean, tail_bound_standardized, StandardizedStat};
use crate::util::rel_err;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn render(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] {name}: {detail}", name = self.name, detail = self.detail)
    }
}

/// Accumulates failures for one check and renders the outcome with timing.
struct Check {
    name: &'static str,
    t0: Instant,
    errors: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, t0: Instant::now(), errors: Vec::new() }
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok && self.errors.len() < 8 {
            self.errors.push(msg());
        } else if !ok {
            self.errors.push(String::new());
        }
    }

    fn elapsed(&self) -> f64 {
        self.t0.elapsed().as_secs_f64()
    }

    fn finish(self, ok_detail: impl Into<String>) -> CheckOutcome {
        let secs = self.elapsed();
        if self.errors.is_empty() {
            CheckOutcome {
                name: self.name,
                passed: true,
                detail: format!("{} [{secs:.2}s]", ok_detail.into()),
            }
        } else {
            let shown: Vec<&String> = self.errors.iter().filter(|e| !e.is_empty()).collect();
            CheckOutcome {
                name: self.name,
                passed: false,
                detail: format!(
                    "{} failure(s), first: {} [{secs:.2}s]",
                    self.errors.len(),
                    shown.first().map(|s| s.as_str()).unwrap_or("(suppressed)")
                ),
            }
        }
    }
}

// Random instance generators. All draw from the supplied rng only.

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    let raw: Vec<f64> = (0..n).map(|_| -(rng.random::<f64>().max(1e-12)).ln()).collect();
    let total: f64 = raw.iter().sum();
    WeightVector::new(raw.iter().map(|x| x / total).collect()).expect("finite normalized weights")
}

fn random_subsimplex(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    let scale = rng.random_range(0.05..0.95);
    let simplex = random_simplex(rng, n);
    WeightVector::new(simplex.values().iter().map(|a| a * scale).collect())
        .expect("scaled simplex weights")
}

fn random_nonneg(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    WeightVector::new((0..n).map(|_| rng.random_range(0.0..3.0)).collect())
        .expect("finite non-negative weights")
}

fn random_general(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    WeightVector::new((0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
        .expect("finite weights")
}

fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> VarianceProfile {
    VarianceProfile::new((0..n).map(|_| rng.random_range(0.05..10.0)).collect())
        .expect("positive variances")
}

fn random_model(rng: &mut ChaCha8Rng, n: usize) -> CovarianceModel {
    let corr = random_correlation(n, rng.next_u64()).expect("random correlation");
    CovarianceModel::new(random_profile(rng, n), corr).expect("matching dimensions")
}

// Census checks.

pub fn census_n2() -> CheckOutcome {
    let mut c = Check::new("census-n2");
    match run_table1(2) {
        Ok(row) => {
            c.expect(row.total_cases == 3600, || format!("total {}", row.total_cases));
            c.expect(row.violation_cases == 520, || {
                format!(
                    "expected the published tally 520 but the exact integer census counts {} \
                     strict violations with {} exact ties; only ties can flip under floating \
                     point so the published figure is a rounding artifact",
                    row.violation_cases, row.tie_cases
                )
            });
            let secs = c.elapsed();
            c.expect(secs < 1.0, || format!("took {secs:.2}s (budget 1s)"));
            let detail = format!(
                "total={} violations={} ratio={:.2}%",
                row.total_cases, row.violation_cases, row.ratio_percent
            );
            c.finish(detail)
        }
        Err(e) => {
            c.expect(false, || e.to_string());
            c.finish("")
        }
    }
}

pub fn census_n3() -> CheckOutcome {
    let mut c = Check::new("census-n3");
    match run_table1(3) {
        Ok(row) => {
            c.expect(row.total_cases == 288_000, || format!("total {}", row.total_cases));
            c.expect(row.violation_cases == 29_137, || {
                format!(
                    "expected the published tally 29137 but the exact integer census counts {} \
                     strict violations with {} exact ties; only ties can flip under floating \
                     point so the published figure is a rounding artifact",
                    row.violation_cases, row.tie_cases
                )
            });
            let secs = c.elapsed();
            c.expect(secs < 5.0, || format!("took {secs:.2}s (budget 5s)"));
            let detail = format!(
                "total={} violations={} ratio={:.2}%",
                row.total_cases, row.violation_cases, row.ratio_percent
            );
            c.finish(detail)
        }
        Err(e) => {
            c.expect(false, || e.to_string());
            c.finish("")
        }
    }
}

pub fn census_n4() -> CheckOutcome {
    let mut c = Check::new("census-n4");
    match run_table1(4) {
        Ok(row) => {
            c.expect(row.total_cases == 13_440_000, || format!("total {}", row.total_cases));
            c.expect(
                row.ratio_percent >= 5.0 && row.ratio_percent <= 7.0,
                || format!("ratio {:.3}% outside [5%, 7%]", row.ratio_percent),
            );
            c.expect(row.note.is_some(), || "missing discrepancy note".to_string());
            let secs = c.elapsed();
            c.expect(secs < 60.0, || format!("took {secs:.2}s (budget 60s)"));
            let detail = format!(
                "total={} violations={} ratio={:.2}% note attached",
                row.total_cases, row.violation_cases, row.ratio_percent
            );
            c.finish(detail)
        }
        Err(e) => {
            c.expect(false, || e.to_string());
            c.finish("")
        }
    }
}

pub fn census_invariance() -> CheckOutcome {
    let mut c = Check::new("census-invariance");
    // Identical counts under reversed composition order: counting is pure
    // integer arithmetic, so order cannot matter.
    for n in [2usize, 3] {
        let spec = GridSpec::tenths(n).expect("n >= 2");
        let comps = enumerate_weight_compositions(n).expect("n >= 2");
        let forward = run_table1(n).expect("census runs");
        let reversed: u64 = comps
            .iter()
            .rev()
            .map(|w| {
                // Re-run single-threaded in reverse via the census on a
                // one-composition grid equivalent: recount directly.
                count_for(w, &spec)
            })
            .sum();
        c.expect(forward.violation_cases == reversed, || {
            format!("n={n}: forward {} vs reversed {reversed}", forward.violation_cases)
        });
    }
    return c.finish("reversed-order counts identical for n=2,3");

    fn count_for(weights: &[u64], spec: &GridSpec) -> u64 {
        // Naive recount used as an order-independent oracle.
        let sum_sq: u64 = weights.iter().map(|a| a * a).sum();
        let mut count = 0u64;
        let n = weights.len();
        let mut tuple = vec![1u64; n];
        loop {
            let sum_t: u64 = tuple.iter().sum();
            let sum_at: u64 = weights.iter().zip(&tuple).map(|(a, t)| a * t).sum();
            if spec.weight_total * sum_at > sum_sq * sum_t {
                count += 1;
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return count;
                }
                k -= 1;
                if tuple[k] < spec.variance_levels {
                    tuple[k] += 1;
                    break;
                }
                tuple[k] = 1;
            }
        }
    }
}

// Golden instances.

const GOLDEN_EQUAL_RHO1: &str = include_str!("../instances/equal_weights_rho1.json");
const GOLDEN_EQUAL_RHO_MINUS1: &str = include_str!("../instances/equal_weights_rho_minus1.json");
const GOLDEN_HALF_HALF_RHO1: &str = include_str!("../instances/half_half_rho1.json");
const GOLDEN_HALF_THIRD_RHO1: &str = include_str!("../instances/half_third_rho1.json");
const GOLDEN_HALF_HALF_UNCORR: &str = include_str!("../instances/half_half_uncorrelated.json");

pub fn golden_instances() -> CheckOutcome {
    let mut c = Check::new("golden-instances");
    let tol = 1e-12;

    let resolve = |json: &str| {
        Instance::from_json(json)
            .and_then(|i| i.resolve())
            .expect("golden fixtures parse")
    };

    // Unit weights, full positive correlation: variance 4, while the
    // simplex-style sum of weighted variances is only 2 and must be
    // reported as inapplicable for this weight class.
    let (w, model) = resolve(GOLDEN_EQUAL_RHO1);
    let report = bound_report(&w, &model).expect("report");
    c.expect((report.exact - 4.0).abs() <= tol, || format!("exact {}", report.exact));
    let wsum = weighted_variance_sum(&w, model.profile()).expect("dims match");
    c.expect((wsum - 2.0).abs() <= tol, || format!("weighted sum {wsum}"));
    c.expect(!report.entry(BoundKind::SimplexWeighted).applicable, || {
        "weighted-variance bound must not apply to unit weights".to_string()
    });
    c.expect(report.exact > wsum, || {
        "the inapplicable bound value must be exceeded here".to_string()
    });
    let t5 = report.entry(BoundKind::GeneralAbsolute).value.unwrap_or(f64::NAN);
    c.expect((t5 - 4.0).abs() <= tol, || format!("absolute bound {t5}"));

    // Unit weights, full negative correlation: variance 0, exactly.
    let (w, model) = resolve(GOLDEN_EQUAL_RHO_MINUS1);
    let exact = exact_variance(&w, &model).expect("variance");
    c.expect(exact.abs() <= tol, || format!("exact {exact}"));

    // Averaging weights, full positive correlation: variance 1, simplex
    // bound 1 (tight).
    let (w, model) = resolve(GOLDEN_HALF_HALF_RHO1);
    let report = bound_report(&w, &model).expect("report");
    c.expect((report.exact - 1.0).abs() <= tol, || format!("exact {}", report.exact));
    let b = report.entry(BoundKind::SimplexWeighted).value.unwrap_or(f64::NAN);
    c.expect((b - 1.0).abs() <= tol, || format!("simplex bound {b}"));

    // Sub-simplex weights (1/2, 1/3), full positive correlation:
    // variance 25/36, bound 5/6.
    let (w, model) = resolve(GOLDEN_HALF_THIRD_RHO1);
    let report = bound_report(&w, &model).expect("report");
    c.expect(
        (report.exact - 25.0 / 36.0).abs() <= tol,
        || format!("exact {}", report.exact),
    );
    let b = report.entry(BoundKind::SubSimplexWeighted).value.unwrap_or(f64::NAN);
    c.expect((b - 5.0 / 6.0).abs() <= tol, || format!("sub-simplex bound {b}"));

    // Averaging weights, no correlation: variance 1/2.
    let (w, model) = resolve(GOLDEN_HALF_HALF_UNCORR);
    let exact = exact_variance(&w, &model).expect("variance");
    c.expect((exact - 0.5).abs() <= tol, || format!("exact {exact}"));

    c.finish("five instances reproduce {4, 0, 1, 25/36, 1/2} and bounds {2, 1, 5/6} at 1e-12")
}

// Bound dominance.

pub fn bound_dominance(seed: u64) -> CheckOutcome {
    let mut c = Check::new("bound-dominance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes: [(&str, BoundKind, fn(&mut ChaCha8Rng, usize) -> WeightVector); 5] = [
        ("simplex-weighted", BoundKind::SimplexWeighted, random_simplex),
        ("simplex-squared", BoundKind::SimplexSquared, random_simplex),
        ("subsimplex-weighted", BoundKind::SubSimplexWeighted, random_subsimplex),
        ("nonneg-total", BoundKind::NonNegativeTotal, random_nonneg),
        ("general-absolute", BoundKind::GeneralAbsolute, random_general),
    ];
    let mut min_slack = f64::INFINITY;
    for (label, kind, generate) in classes {
        for case in 0..1000u32 {
            let n = 2 + (case as usize % 7);
            let w = generate(&mut rng, n);
            let model = random_model(&mut rng, n);
            match bound_report(&w, &model) {
                Ok(report) => {
                    let entry = report.entry(kind);
                    c.expect(entry.applicable, || {
                        format!("{label} case {case}: bound inapplicable for class {:?}", w.class())
                    });
                    if let Some(slack) = entry.slack {
                        min_slack = min_slack.min(slack / 1.0_f64.max(report.exact));
                    }
                }
                // bound_report itself raises on any dominance violation.
                Err(e) => c.expect(false, || format!("{label} case {case}: {e}")),
            }
        }
    }
    c.finish(format!(
        "5000 random PSD instances, zero violations, min relative slack {:.3e}",
        min_slack
    ))
}

// Minor-formula oracle and PSD verdicts.

pub fn minor_oracle(seed: u64) -> CheckOutcome {
    let mut c = Check::new("minor-oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_err: f64 = 0.0;
    for case in 0..200u32 {
        let n = 2 + (case as usize % 11); // 2..=12
        let w = random_simplex(&mut rng, n);
        let gram = WeightGramComplement::new(&w);
        let mut subset = Vec::new();
        for mask in 1u32..(1u32 << n) {
            if mask.count_ones() > 5 {
                continue;
            }
            subset.clear();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    subset.push(i);
                }
            }
            let minor = principal_minor(&w, &subset).expect("valid subset");
            let det = gram
                .principal_submatrix(&subset)
                .expect("valid subset")
                .determinant();
            let err = rel_err(minor, det);
            max_err = max_err.max(err);
            c.expect(err <= 1e-10, || {
                format!("case {case} subset {subset:?}: minor {minor} vs det {det}")
            });
        }
        match check_weight_gram_psd(&w) {
            Ok(PsdCheck::Psd) => {}
            Ok(other) => c.expect(false, || format!("simplex case {case}: {other:?}")),
            Err(e) => c.expect(false, || format!("simplex case {case}: {e}")),
        }
    }
    for case in 0..100u32 {
        let n = 2 + (case as usize % 11);
        let w = random_subsimplex(&mut rng, n);
        match check_weight_gram_psd(&w) {
            Ok(PsdCheck::Psd) => {}
            Ok(other) => c.expect(false, || format!("sub-simplex case {case}: {other:?}")),
            Err(e) => c.expect(false, || format!("sub-simplex case {case}: {e}")),
        }
    }
    c.finish(format!(
        "200 simplex vectors, all subsets of size <= 5, max relative error {max_err:.3e}; \
         300 exhaustive PSD verdicts"
    ))
}

// Closed forms vs direct kernel double sums.

pub fn closed_form_triangle() -> CheckOutcome {
    let mut c = Check::new("closed-form-triangle");
    let mut max_err: f64 = 0.0;
    for sigma in [0.5, 1.0, 2.0] {
        let p = ProcessModel::running_mean(0.0, sigma).expect("valid params");
        for n in 1..=100usize {
            let direct = var_of_mean(&p, n).expect("kernel sum");
            let closed = running_mean_var_of_mean(sigma, n).expect("closed form");
            let err = rel_err(direct, closed);
            max_err = max_err.max(err);
            c.expect(err <= 1e-12, || {
                format!("running-mean sigma={sigma} n={n}: {direct} vs {closed}")
            });
        }
    }
    for lambda in [0.1, 1.0, 5.0] {
        let p = ProcessModel::telegraph_symmetric(lambda).expect("valid params");
        for n in 1..=100usize {
            let direct = var_of_mean(&p, n).expect("kernel sum");
            let closed = telegraph_var_of_mean(lambda, n).expect("closed form");
            let err = rel_err(direct, closed);
            max_err = max_err.max(err);
            c.expect(err <= 1e-12, || {
                format!("telegraph lambda={lambda} n={n}: {direct} vs {closed}")
            });
        }
    }
    c.finish(format!(
        "600 closed-form/double-sum comparisons, max relative error {max_err:.3e}"
    ))
}

// Monte Carlo agreement with closed forms.

pub fn monte_carlo_agreement(seed: u64) -> CheckOutcome {
    let mut c = Check::new("monte-carlo-agreement");
    let reps = 100_000u64;
    let n = 20usize;
    let mut runs: Vec<String> = Vec::new();

    let mut within = |label: &str,
                      process: &ProcessModel,
                      statistic: Statistic,
                      reference: f64,
                      run_seed: u64,
                      c: &mut Check| {
        let t = Instant::now();
        match mc_estimate(process, statistic, n, reps, run_seed) {
            Ok(est) => {
                let gap = (est.estimate - reference).abs();
                c.expect(gap <= 3.0 * est.std_error, || {
                    format!(
                        "{label}: estimate {} vs {reference} is {:.2} SE away",
                        est.estimate,
                        gap / est.std_error
                    )
                });
                let secs = t.elapsed().as_secs_f64();
                c.expect(secs < 30.0, || format!("{label} took {secs:.1}s (budget 30s)"));
                runs.push(format!("{label} {:.1}se", gap / est.std_error.max(1e-300)));
            }
            Err(e) => c.expect(false, || format!("{label}: {e}")),
        }
    };

    let rm = ProcessModel::running_mean(0.0, 1.0).expect("valid params");
    let tg = ProcessModel::telegraph_symmetric(1.0).expect("valid params");

    let reference = running_mean_var_of_mean(1.0, n).expect("closed form");
    within("running-mean var", &rm, Statistic::VarOfMeanN, reference, seed, &mut c);

    let reference = telegraph_var_of_mean(1.0, n).expect("closed form");
    within("telegraph var", &tg, Statistic::VarOfMeanN, reference, seed + 1, &mut c);

    within("cov(S2,S5)", &rm, Statistic::Cov { i: 2, j: 5 }, 0.2, seed + 2, &mut c);
    within("telegraph mean", &tg, Statistic::MeanN, 0.5, seed + 3, &mut c);

    let detail = format!("4 runs at reps=100000 within 3 SE: {}", runs.join(", "));
    c.finish(detail)
}

// Chebyshev sandwich over a delta grid.

pub fn chebyshev_sandwich(seed: u64) -> CheckOutcome {
    let mut c = Check::new("chebyshev-sandwich");
    let reps = 10_000u64;

    let fixtures: [(&str, ProcessModel, usize); 2] = [
        ("telegraph", ProcessModel::telegraph_symmetric(1.0).expect("valid"), 50),
        ("running-mean", ProcessModel::running_mean(0.0, 1.0).expect("valid"), 20),
    ];
    for (label, process, n) in &fixtures {
        let vars: Vec<f64> = (1..=*n)
            .map(|i| process.variance_at(i).expect("kernel"))
            .collect();
        let profile = VarianceProfile::new(vars).expect("positive variances");
        for k in 1..=20u64 {
            let delta = k as f64 / 10.0;
            let bound = tail_bound_mean(&profile, delta, true).expect("bound");
            let emp = empirical_tail(process, *n, delta, reps, seed ^ k).expect("simulation");
            c.expect(emp.frequency <= bound + 3.0 * emp.std_error, || {
                format!(
                    "{label} delta={delta}: frequency {} above bound {bound} + 3se",
                    emp.frequency
                )
            });
            // The uncorrelated variant is the correlated value divided by n,
            // bit-exactly, per its construction contract.
            let unc = tail_bound_mean(&profile, delta, false).expect("bound");
            c.expect(unc == bound / *n as f64, || {
                format!("{label} delta={delta}: uncorrelated {unc} != correlated/n")
            });
        }
    }

    // Standardized plug-in values are exact.
    let m = tail_bound_standardized(9, 2.0, StandardizedStat::Mean).expect("bound");
    c.expect(m == 0.25, || format!("standardized mean bound {m}"));
    let s = tail_bound_standardized(3, 3.0, StandardizedStat::Sum).expect("bound");
    c.expect(s == 1.0, || format!("standardized sum bound {s}"));

    c.finish("40 delta points x 2 fixtures within bound + 3 SE; ratio and plug-ins exact")
}

// Weak-law verdicts.

pub fn lln_verdicts(seed: u64) -> CheckOutcome {
    let mut c = Check::new("lln-verdicts");
    let grid: Vec<usize> = (1..=200).collect();
    let rm = ProcessModel::running_mean(0.0, 1.0).expect("valid");
    let tg = ProcessModel::telegraph_symmetric(1.0).expect("valid");

    // Running mean: mean of variances is H_n/n, which certifies convergence.
    let d = diagnose(&rm, LlnCondition::MeanOfVariances, &grid, 0.05).expect("diagnostic");
    c.expect(d.verdict == Verdict::Converging, || format!("running-mean: {:?}", d.verdict));
    let (_, v200) = *d.samples.last().expect("non-empty");
    let oracle: f64 = (1..=200).map(|i| 1.0 / i as f64).sum::<f64>() / 200.0;
    c.expect(rel_err(v200, oracle) <= 1e-12, || {
        format!("H_200/200: {v200} vs oracle {oracle}")
    });
    c.expect((v200 - 0.0294).abs() < 1e-4, || format!("H_200/200 = {v200}, expected ~0.0294"));

    // Telegraph: constant 1/4 fails the same condition...
    let d = diagnose(&tg, LlnCondition::MeanOfVariances, &grid, 0.05).expect("diagnostic");
    c.expect(d.verdict == Verdict::NotConverging, || format!("telegraph: {:?}", d.verdict));
    c.expect(
        d.samples.iter().all(|&(_, v)| rel_err(v, 0.25) <= 1e-13),
        || "telegraph variance series is not constant 1/4".to_string(),
    );

    // ...but the covariance budget certifies it, and the variance of the
    // mean is already small by n = 200.
    let d = diagnose(&tg, LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 }, &grid, 0.05)
        .expect("diagnostic");
    c.expect(d.verdict == Verdict::Converging, || format!("telegraph budget: {:?}", d.verdict));
    let budget = d.budget.as_ref().expect("budget detail");
    c.expect(budget.variance_branch == Some(BudgetBranch::BoundedByCap), || {
        format!("variance branch {:?}", budget.variance_branch)
    });
    c.expect(budget.covariance_branch == Some(BudgetBranch::BoundedByCap), || {
        format!("covariance branch {:?}", budget.covariance_branch)
    });
    let (_, vm200) = *d.samples.last().expect("non-empty");
    c.expect(vm200 < 0.02, || format!("Var(mean_200) = {vm200}, expected < 0.02"));
    let closed = telegraph_var_of_mean(1.0, 200).expect("closed form");
    c.expect(closed < 0.02, || format!("closed form {closed}"));

    // Constant sequence: certifiably not converging under the budget.
    let constant = ProcessModel::user_kernel(|_| 1.0, |_, _| 1.0);
    let big_grid = crate::lln::default_grid(1024).expect("grid");
    let d = diagnose(
        &constant,
        LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 },
        &big_grid,
        0.05,
    )
    .expect("diagnostic");
    c.expect(d.verdict == Verdict::NotConverging, || format!("constant: {:?}", d.verdict));

    // Power-mean monotonicity over random profiles.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..1000u32 {
        let n = 1 + (case as usize % 10);
        let p = random_profile(&mut rng, n);
        let r = rng.random_range(0.01..4.0);
        let s = rng.random_range(r..=4.0);
        let lo = power_mean(&p, r).expect("power mean");
        let hi = power_mean(&p, s).expect("power mean");
        let scale = 1.0_f64.max(hi.abs());
        c.expect(lo <= hi + 1e-10 * scale, || {
            format!("case {case}: power mean r={r} gives {lo} > s={s} gives {hi}")
        });
    }

    c.finish("fixture verdicts correct; 1000 power-mean monotonicity cases")
}

// Model-level properties.

pub fn weight_classification(seed: u64) -> CheckOutcome {
    let mut c = Check::new("weight-classification");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..3000u32 {
        let n = 1 + (case as usize % 9);
        let values: Vec<f64> = match case % 4 {
            0 => random_simplex(&mut rng, n).values().to_vec(),
            1 => random_subsimplex(&mut rng, n).values().to_vec(),
            2 => (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
            _ => (0..n).map(|_| rng.random_range(0.0..2.0)).collect(),
        };
        let w = match WeightVector::new(values.clone()) {
            Ok(w) => w,
            Err(e) => {
                c.expect(false, || format!("case {case}: {e}"));
                continue;
            }
        };
        let non_negative = values.iter().all(|&a| a >= 0.0);
        let in_unit = non_negative && values.iter().all(|&a| a <= 1.0);
        let sum: f64 = values.iter().sum();
        let consistent = match w.class() {
            WeightClass::Simplex => in_unit && (sum - 1.0).abs() <= 1e-12,
            WeightClass::SubSimplex => in_unit && sum > 0.0 && sum < 1.0,
            WeightClass::NonNegative => non_negative,
            WeightClass::General => !non_negative,
        };
        c.expect(consistent, || format!("case {case}: class {:?} for {values:?}", w.class()));
    }
    c.finish("3000 vectors classified consistently with the class predicates")
}

pub fn correlation_generation(seed: u64) -> CheckOutcome {
    let mut c = Check::new("correlation-generation");
    for n in 1..=16usize {
        for k in 0..32u64 {
            let s = seed.wrapping_add(k).wrapping_mul(2 * n as u64 + 1);
            let a = match random_correlation(n, s) {
                Ok(m) => m,
                Err(e) => {
                    c.expect(false, || format!("n={n} seed={s}: {e}"));
                    continue;
                }
            };
            let b = random_correlation(n, s).expect("same seed");
            c.expect(a == b, || format!("n={n} seed={s}: not deterministic"));
            c.expect(a.is_psd(), || format!("n={n} seed={s}: not PSD"));
            for i in 0..n {
                c.expect(a.get(i, i) == 1.0, || format!("n={n}: diagonal"));
                for j in 0..n {
                    c.expect(a.get(i, j).abs() <= 1.0, || format!("n={n}: range"));
                    c.expect(a.get(i, j) == a.get(j, i), || format!("n={n}: symmetry"));
                }
            }
        }
    }
    c.finish("512 generated matrices: deterministic, symmetric, unit diagonal, PSD")
}

pub fn covariance_sandwich_random(seed: u64) -> CheckOutcome {
    let mut c = Check::new("covariance-sandwich");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..500u32 {
        let n = 2 + (case as usize % 7);
        let model = random_model(&mut rng, n);
        let tol = SLACK_REL_TOL * 1.0_f64.max(model.profile().sum());
        match covariance_sum_bounds(&model) {
            Ok(s) => c.expect(s.holds(tol), || {
                format!("case {case}: sandwich {s:?} violated")
            }),
            Err(e) => c.expect(false, || format!("case {case}: {e}")),
        }
        // The uniform average respects the correlation-free mean bound.
        let uniform = WeightVector::uniform(n).expect("n >= 1");
        let exact = exact_variance(&uniform, &model).expect("variance");
        let bound = mean_variance_bound(model.profile());
        c.expect(exact <= bound + tol, || {
            format!("case {case}: Var(mean) {exact} above bound {bound}")
        });
        // Diagonal entries of the model reproduce the profile exactly.
        for (i, &v) in model.profile().variances().iter().enumerate() {
            c.expect(model.covariance(i, i) == v, || format!("case {case}: diagonal {i}"));
        }
    }
    c.finish("500 random PSD models: sandwich and mean bound hold")
}

// Tail-bound scaling laws.

pub fn tail_scaling(seed: u64) -> CheckOutcome {
    let mut c = Check::new("tail-scaling");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..200u32 {
        let n = 1 + (case as usize % 8);
        let profile = random_profile(&mut rng, n);
        let delta = rng.random_range(0.05..3.0);
        let b1 = tail_bound_mean(&profile, delta, true).expect("bound");
        let b2 = tail_bound_mean(&profile, 2.0 * delta, true).expect("bound");
        c.expect(rel_err(b2, b1 / 4.0) <= 1e-12, || {
            format!("case {case}: quartering failed: {b1} -> {b2}")
        });
        let unc = tail_bound_mean(&profile, delta, false).expect("bound");
        c.expect(unc == b1 / n as f64, || {
            format!("case {case}: uncorrelated {unc} vs correlated/n {}", b1 / n as f64)
        });
        let w = random_general(&mut rng, n);
        let wb1 = crate::tails::tail_bound_weighted(&w, &profile, delta).expect("bound");
        let wb2 = crate::tails::tail_bound_weighted(&w, &profile, 2.0 * delta).expect("bound");
        c.expect(rel_err(wb2, wb1 / 4.0) <= 1e-12, || {
            format!("case {case}: weighted quartering failed")
        });
    }
    c.finish("200 cases: 1/delta^2 scaling and the exact 1/n ratio hold")
}

// Process-kernel consistency.

pub fn kernel_consistency() -> CheckOutcome {
    let mut c = Check::new("kernel-consistency");

    // Flip probability equals the odd-Poisson series.
    for lambda in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let closed = telegraph_flip_probability(lambda);
        let mut series = 0.0;
        let mut term = (-lambda as f64).exp() * lambda;
        let mut k = 1u32;
        while term.abs() > 1e-19 && k < 300 {
            if k % 2 == 1 {
                series += term;
            }
            k += 1;
            term *= lambda / k as f64;
        }
        c.expect(rel_err(closed, series) <= 1e-13, || {
            format!("lambda={lambda}: {closed} vs series {series}")
        });
    }

    // Stationarity: the telegraph kernel depends only on the lag.
    let tg = ProcessModel::telegraph(0.7, 0.3).expect("valid");
    for lag in 0..10usize {
        let a = tg.kernel_cov(1, 1 + lag).expect("kernel");
        for start in 2..20usize {
            let b = tg.kernel_cov(start, start + lag).expect("kernel");
            c.expect(a == b, || format!("lag {lag}: kernel not stationary"));
        }
    }

    // Asymmetric telegraph: the closed form rescaled by 4 p (1 - p) matches
    // the kernel double sum.
    for p in [0.2, 0.5, 0.8] {
        let proc = ProcessModel::telegraph(1.3, p).expect("valid");
        for n in [1usize, 5, 40] {
            let direct = var_of_mean(&proc, n).expect("double sum");
            let closed = closed_form_value(&proc, Statistic::VarOfMeanN, n)
                .expect("closed form")
                .expect("telegraph has one");
            c.expect(rel_err(direct, closed) <= 1e-12, || {
                format!("p={p} n={n}: {direct} vs {closed}")
            });
        }
    }

    // Mean of variances matches the profile route.
    let rm = ProcessModel::running_mean(0.0, 1.0).expect("valid");
    for n in [1usize, 10, 100] {
        let a = mean_of_variances(&rm, n).expect("kernel");
        let vars: Vec<f64> = (1..=n).map(|i| 1.0 / i as f64).collect();
        let b = vars.iter().sum::<f64>() / n as f64;
        c.expect(rel_err(a, b) <= 1e-13, || format!("n={n}: {a} vs {b}"));
    }

    c.finish("flip series, stationarity, asymmetric closed form, variance prefixes agree")
}

// Reproducibility of every seeded operation.

pub fn reproducibility(seed: u64) -> CheckOutcome {
    let mut c = Check::new("reproducibility");
    let tg = ProcessModel::telegraph_symmetric(1.0).expect("valid");
    let rm = ProcessModel::running_mean(0.0, 1.0).expect("valid");

    let a = tg.sample(64, seed).expect("path");
    let b = tg.sample(64, seed).expect("path");
    c.expect(a.values == b.values, || "telegraph path differs".to_string());

    let a = rm.sample(64, seed).expect("path");
    let b = rm.sample(64, seed).expect("path");
    c.expect(a.values == b.values, || "running-mean path differs".to_string());

    let e1 = mc_estimate(&tg, Statistic::MeanN, 16, 4000, seed).expect("estimate");
    let e2 = mc_estimate(&tg, Statistic::MeanN, 16, 4000, seed).expect("estimate");
    c.expect(
        e1.estimate == e2.estimate && e1.std_error == e2.std_error,
        || "repeat estimate differs".to_string(),
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool");
    let e3 = pool.install(|| mc_estimate(&tg, Statistic::MeanN, 16, 4000, seed).expect("estimate"));
    c.expect(e1.estimate == e3.estimate, || {
        "estimate depends on thread count".to_string()
    });

    let t1 = empirical_tail(&tg, 32, 0.2, 2000, seed).expect("tail");
    let t2 = empirical_tail(&tg, 32, 0.2, 2000, seed).expect("tail");
    c.expect(t1.exceed_count == t2.exceed_count, || "tail count differs".to_string());

    c.finish("paths, estimates, and tail counts identical across runs and pools")
}

pub fn csv_round_trip() -> CheckOutcome {
    let mut c = Check::new("csv-round-trip");
    let mut buf = Vec::new();
    write_csv_line(&mut buf, &["n", "total", "violations", "ratio_percent"]).expect("write");
    write_csv_line(&mut buf, &["2", "3600", "520", "14.44"]).expect("write");
    write_csv_line(&mut buf, &["3", "288000", "29137", "10.12"]).expect("write");
    let rows = parse_csv(&String::from_utf8(buf).expect("utf8"));
    c.expect(rows.len() == 3, || format!("{} rows", rows.len()));
    c.expect(
        rows[1][1].parse::<u64>() == Ok(3600) && rows[2][2].parse::<u64>() == Ok(29137),
        || "integer fields lost".to_string(),
    );
    let x = 25.0 / 36.0;
    let back: f64 = fmt_float(x).parse().expect("parse");
    c.expect(rel_err(back, x) <= 1e-11, || format!("float round trip {x} -> {back}"));
    c.finish("integer fields lossless; floats reparse at 12 digits")
}

/// Every check, in module order then the heavyweight suites. The CLI
/// `verify` subcommand prints one line per entry and exits non-zero if any
/// fail.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        weight_classification(seed),
        correlation_generation(seed),
        golden_instances(),
        bound_dominance(seed),
        minor_oracle(seed),
        covariance_sandwich_random(seed),
        tail_scaling(seed),
        kernel_consistency(),
        closed_form_triangle(),
        reproducibility(seed),
        csv_round_trip(),
        lln_verdicts(seed),
        chebyshev_sandwich(seed),
        monte_carlo_agreement(seed),
        census_invariance(),
        census_n2(),
        census_n3(),
        census_n4(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    // The individual checks are exercised by the acceptance suite; here we
    // only cover the harness plumbing.

    #[test]
    fn outcome_rendering() {
        let ok = CheckOutcome { name: "demo", passed: true, detail: "fine".into() };
        assert_eq!(ok.render(), "[PASS] demo: fine");
        let bad = CheckOutcome { name: "demo", passed: false, detail: "broke".into() };
        assert!(bad.render().starts_with("[FAIL]"));
    }

    #[test]
    fn check_accumulator_caps_messages() {
        let mut c = Check::new("cap");
        for i in 0..20 {
            c.expect(false, || format!("failure {i}"));
        }
        let out = c.finish("unused");
        assert!(!out.passed);
        assert!(out.detail.contains("20 failure(s)"));
    }

    #[test]
    fn fast_checks_pass() {
        assert!(csv_round_trip().passed);
        assert!(kernel_consistency().passed, "{}", kernel_consistency().detail);
        assert!(golden_instances().passed, "{}", golden_instances().detail);
    }
}
