//! Sufficient conditions for a weak law of large numbers over correlated
//! sequences, evaluated as computable series in `n` with finite-sample
//! verdicts.
//!
//! Each condition is a quantity whose convergence to zero (or boundedness)
//! guarantees that the sample mean concentrates. A limit cannot be observed
//! at finite `n`, so verdicts follow a fixed finite criterion:
//!
//! * `Converging`: the series is weakly decreasing over the last half of the
//!   grid and its final value is below the threshold (default 0.05);
//! * `NotConverging`: weakly non-decreasing over the last half and the final
//!   value is at or above the threshold;
//! * `Inconclusive`: anything else.
//!
//! Verdicts are per-condition, not per-truth: the conditions are sufficient,
//! never necessary, so `NotConverging` means "this criterion does not
//! certify convergence", not "the mean does not converge".

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::VarianceProfile;
use crate::processes::ProcessModel;
use crate::util::KahanSum;

/// Default threshold under which a decreasing series counts as converging.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Band for the same-order test: `value / n^s` must stay within
/// `[1/SAME_ORDER_BAND, SAME_ORDER_BAND]` over the grid tail.
pub const SAME_ORDER_BAND: f64 = 10.0;

/// `Var((X_1 + ... + X_n) / n) = (1/n^2) sum_ij Cov(X_i, X_j)`, evaluated by
/// direct double sum over the process kernel.
pub fn var_of_mean(process: &ProcessModel, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("var_of_mean needs n >= 1".into()));
    }
    let mut acc = KahanSum::new();
    for i in 1..=n {
        acc.add(process.variance_at(i)?);
        for j in 1..i {
            acc.add(2.0 * process.kernel_cov(i, j)?);
        }
    }
    let nf = n as f64;
    Ok(acc.value() / (nf * nf))
}

/// `(1/n) sum_{i=1..n} Var(X_i)`: the mean-of-variances condition. Its decay
/// certifies the weak law regardless of correlations.
pub fn mean_of_variances(process: &ProcessModel, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("mean_of_variances needs n >= 1".into()));
    }
    let mut acc = KahanSum::new();
    for i in 1..=n {
        acc.add(process.variance_at(i)?);
    }
    Ok(acc.value() / n as f64)
}

/// Power mean `[(1/n) sum v_i^r]^(1/r)` of the variances, `r > 0`.
/// Non-decreasing in `r` (Lyapunov), which makes the family of power-mean
/// conditions ordered by strength.
pub fn power_mean(profile: &VarianceProfile, r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "power mean exponent must be positive, got {r}"
        )));
    }
    let n = profile.len() as f64;
    let mut acc = KahanSum::new();
    for &v in profile.variances() {
        acc.add(v.powf(r));
    }
    Ok((acc.value() / n).powf(1.0 / r))
}

/// Power mean of the first `n` process variances at exponent `s >= 1`. Its
/// decay certifies the weak law for uncorrelated sequences; by monotonicity
/// in `s` it dominates [`mean_of_variances`].
pub fn power_mean_condition(process: &ProcessModel, n: usize, s: f64) -> Result<f64> {
    if !s.is_finite() || s < 1.0 {
        return Err(Error::InvalidInput(format!(
            "the power-mean condition needs s >= 1, got {s}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("power-mean condition needs n >= 1".into()));
    }
    let vars: Result<Vec<f64>> = (1..=n).map(|i| process.variance_at(i)).collect();
    power_mean(&VarianceProfile::new(vars?)?, s)
}

/// Variance chain for the shrunk statistic `(1/n^{1+s}) sum X_i` over
/// variables whose variances are capped by `cap`:
/// `value = (sum of the first n variances) / n^{1+2s}` (the proof's worst
/// case) and `bound = cap / n^{2s}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScaledSumVariance {
    pub value: f64,
    pub bound: f64,
    pub cap: f64,
}

/// Evaluate the shrunk-statistic chain at one `n`. A supplied `cap` must
/// actually bound the first `n` variances; without one, the running maximum
/// is used. The chain `value <= bound` then holds by construction and is
/// asserted.
pub fn scaled_sum_variance(
    process: &ProcessModel,
    n: usize,
    s: f64,
    cap: Option<f64>,
) -> Result<ScaledSumVariance> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "the shrunk-statistic chain needs s > 0, got {s}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("the chain needs n >= 1".into()));
    }
    let mut sum = KahanSum::new();
    let mut max_var: f64 = 0.0;
    for i in 1..=n {
        let v = process.variance_at(i)?;
        sum.add(v);
        max_var = max_var.max(v);
    }
    let cap = match cap {
        Some(c) => {
            if !c.is_finite() || c <= 0.0 {
                return Err(Error::InvalidInput("variance cap must be positive".into()));
            }
            if max_var > c {
                return Err(Error::InvalidInput(format!(
                    "cap {c} does not bound the first {n} variances (max {max_var})"
                )));
            }
            c
        }
        None => max_var,
    };
    let nf = n as f64;
    let value = sum.value() / nf.powf(1.0 + 2.0 * s);
    let bound = cap / nf.powf(2.0 * s);
    if value > bound * (1.0 + 1e-12) {
        return Err(Error::Inconsistency(format!(
            "chain value {value} exceeded its bound {bound}"
        )));
    }
    Ok(ScaledSumVariance { value, bound, cap })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converging,
    NotConverging,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::NotConverging => "not-converging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Finite-sample trend verdict over `(n, value)` samples; see the module
/// docs for the criterion.
pub fn trend_verdict(samples: &[(usize, f64)], threshold: f64) -> Verdict {
    if samples.is_empty() {
        return Verdict::Inconclusive;
    }
    let tail = &samples[samples.len() / 2..];
    let last = tail.last().expect("tail is non-empty").1;
    // Slack absorbs rounding jitter in theoretically monotone series.
    let slack = |v: f64| 1e-12 * v.abs().max(1.0);
    let decreasing = tail.windows(2).all(|w| w[1].1 <= w[0].1 + slack(w[0].1));
    let non_decreasing = tail.windows(2).all(|w| w[1].1 >= w[0].1 - slack(w[0].1));
    if decreasing && last < threshold {
        Verdict::Converging
    } else if non_decreasing && last >= threshold {
        Verdict::NotConverging
    } else {
        Verdict::Inconclusive
    }
}

/// Which branch of the two-sided budget a series satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BudgetBranch {
    /// `|value| < cap` at every grid point.
    BoundedByCap,
    /// `|value| / n^s` stays within the same-order band over the grid tail.
    SameOrderAsPower,
}

impl BudgetBranch {
    pub fn name(self) -> &'static str {
        match self {
            BudgetBranch::BoundedByCap => "bounded-by-cap",
            BudgetBranch::SameOrderAsPower => "same-order-as-power",
        }
    }
}

/// Detail for the covariance-budget condition: the two budgeted series and
/// the branch (if any) each satisfied.
#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport {
    /// Trend verdict of the mean-of-variances series on its own.
    pub variance_trend: Verdict,
    pub variance_branch: Option<BudgetBranch>,
    pub covariance_branch: Option<BudgetBranch>,
    /// `(1/n) sum Var(X_i)` at each grid point.
    pub variance_series: Vec<(usize, f64)>,
    /// `(1/n) sum_{i<j} Cov(X_i, X_j)` at each grid point.
    pub covariance_series: Vec<(usize, f64)>,
}

/// The conditions the diagnostic runner understands. Exponents and caps ride
/// along with the variants that need them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LlnCondition {
    /// `(1/n^2) Var(sum X_i) -> 0`: the primal sufficient condition.
    VarOfMean,
    /// `(1/n) sum Var(X_i) -> 0`.
    MeanOfVariances,
    /// Power mean of the variances at exponent `s >= 1` tends to zero
    /// (uncorrelated sequences).
    PowerMean { s: f64 },
    /// Chain for the shrunk statistic: value and cap-derived bound per `n`.
    ScaledSum { s: f64, cap: Option<f64> },
    /// Both `(1/n) sum Var` and `(1/n) sum_{i<j} Cov` stay below `cap` or
    /// grow no faster than `n^s`, `0 < s < 1`; either certifies the weak law
    /// when the plain mean-of-variances trend does not already.
    CovarianceBudget { s: f64, cap: f64 },
}

impl LlnCondition {
    pub fn label(&self) -> &'static str {
        match self {
            LlnCondition::VarOfMean => "var-of-mean",
            LlnCondition::MeanOfVariances => "mean-of-variances",
            LlnCondition::PowerMean { .. } => "power-mean",
            LlnCondition::ScaledSum { .. } => "scaled-sum",
            LlnCondition::CovarianceBudget { .. } => "covariance-budget",
        }
    }
}

/// Outcome of evaluating one condition over a grid of `n` values.
#[derive(Debug, Clone, Serialize)]
pub struct LlnDiagnostic {
    pub condition: LlnCondition,
    pub threshold: f64,
    /// `(n, value)` per grid point; for the covariance budget the value is
    /// `Var(mean_n)` itself, with the budgeted series in `budget`.
    pub samples: Vec<(usize, f64)>,
    /// Per-point bounds, present only for the scaled-sum chain.
    pub bounds: Option<Vec<f64>>,
    pub verdict: Verdict,
    pub budget: Option<BudgetReport>,
}

/// Grid of n values for diagnostics: every integer up to 256, then 256
/// geometrically spaced points. Strictly increasing, ends at `n_max`.
pub fn default_grid(n_max: usize) -> Result<Vec<usize>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("grid needs n_max >= 1".into()));
    }
    if n_max <= 256 {
        return Ok((1..=n_max).collect());
    }
    let mut grid: Vec<usize> = (0..256)
        .map(|k| (n_max as f64).powf(k as f64 / 255.0).round() as usize)
        .collect();
    grid.push(n_max);
    grid.sort_unstable();
    grid.dedup();
    Ok(grid)
}

fn validate_grid(grid: &[usize]) -> Result<Vec<usize>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("diagnostic grid must be non-empty".into()));
    }
    if grid.contains(&0) {
        return Err(Error::InvalidInput("grid points must be >= 1".into()));
    }
    let mut g = grid.to_vec();
    g.sort_unstable();
    g.dedup();
    Ok(g)
}

/// Incremental prefix sums over the kernel: variances, pairwise covariances,
/// and the variance of the mean, extended one index at a time.
struct PrefixSums<'a> {
    process: &'a ProcessModel,
    n: usize,
    var_sum: KahanSum,
    cross_sum: KahanSum,
}

impl<'a> PrefixSums<'a> {
    fn new(process: &'a ProcessModel) -> Self {
        PrefixSums {
            process,
            n: 0,
            var_sum: KahanSum::new(),
            cross_sum: KahanSum::new(),
        }
    }

    fn advance(&mut self) -> Result<()> {
        let m = self.n + 1;
        self.var_sum.add(self.process.variance_at(m)?);
        for i in 1..m {
            self.cross_sum.add(self.process.kernel_cov(i, m)?);
        }
        self.n = m;
        Ok(())
    }

    fn mean_of_variances(&self) -> f64 {
        self.var_sum.value() / self.n as f64
    }

    fn mean_of_cross(&self) -> f64 {
        self.cross_sum.value() / self.n as f64
    }

    fn var_of_mean(&self) -> f64 {
        let nf = self.n as f64;
        (self.var_sum.value() + 2.0 * self.cross_sum.value()) / (nf * nf)
    }
}

/// Check a budgeted series against the two branches: bounded by `cap`
/// everywhere, or within the same-order band of `n^s` over the grid tail.
fn budget_branch(series: &[(usize, f64)], cap: f64, s: f64) -> Option<BudgetBranch> {
    if series.iter().all(|(_, v)| v.abs() < cap) {
        return Some(BudgetBranch::BoundedByCap);
    }
    let tail = &series[series.len() / 2..];
    let same_order = tail.iter().all(|&(n, v)| {
        let r = v.abs() / (n as f64).powf(s);
        r >= 1.0 / SAME_ORDER_BAND && r <= SAME_ORDER_BAND
    });
    same_order.then_some(BudgetBranch::SameOrderAsPower)
}

/// Evaluate `condition` over `grid` (deduplicated and sorted ascending) and
/// render a verdict against `threshold`.
pub fn diagnose(
    process: &ProcessModel,
    condition: LlnCondition,
    grid: &[usize],
    threshold: f64,
) -> Result<LlnDiagnostic> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::InvalidInput("verdict threshold must be positive".into()));
    }
    let grid = validate_grid(grid)?;
    let max_n = *grid.last().expect("grid is non-empty");

    match condition {
        LlnCondition::PowerMean { s } if !s.is_finite() || s < 1.0 => {
            return Err(Error::InvalidInput(format!(
                "the power-mean condition needs s >= 1, got {s}"
            )));
        }
        LlnCondition::ScaledSum { s, .. } if !s.is_finite() || s <= 0.0 => {
            return Err(Error::InvalidInput(format!(
                "the shrunk-statistic chain needs s > 0, got {s}"
            )));
        }
        LlnCondition::CovarianceBudget { s, cap } => {
            if !s.is_finite() || s <= 0.0 || s >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "the covariance budget needs 0 < s < 1, got {s}"
                )));
            }
            if !cap.is_finite() || cap <= 0.0 {
                return Err(Error::InvalidInput("the budget cap must be positive".into()));
            }
        }
        _ => {}
    }

    let mut prefix = PrefixSums::new(process);
    let mut power_sum = KahanSum::new();
    let mut running_max: f64 = 0.0;

    let mut samples = Vec::with_capacity(grid.len());
    let mut bounds = Vec::new();
    let mut variance_series = Vec::new();
    let mut covariance_series = Vec::new();

    let mut next = grid.iter().peekable();
    for n in 1..=max_n {
        prefix.advance()?;
        if let LlnCondition::PowerMean { s } = condition {
            power_sum.add(prefix.process.variance_at(n)?.powf(s));
        }
        if matches!(condition, LlnCondition::ScaledSum { .. }) {
            running_max = running_max.max(prefix.process.variance_at(n)?);
        }
        if next.peek() != Some(&&n) {
            continue;
        }
        next.next();
        let nf = n as f64;
        match condition {
            LlnCondition::VarOfMean => samples.push((n, prefix.var_of_mean())),
            LlnCondition::MeanOfVariances => samples.push((n, prefix.mean_of_variances())),
            LlnCondition::PowerMean { s } => {
                samples.push((n, (power_sum.value() / nf).powf(1.0 / s)));
            }
            LlnCondition::ScaledSum { s, cap } => {
                let point_cap = match cap {
                    Some(c) => {
                        if running_max > c {
                            return Err(Error::InvalidInput(format!(
                                "cap {c} does not bound the first {n} variances"
                            )));
                        }
                        c
                    }
                    None => running_max,
                };
                samples.push((n, prefix.var_sum.value() / nf.powf(1.0 + 2.0 * s)));
                bounds.push(point_cap / nf.powf(2.0 * s));
            }
            LlnCondition::CovarianceBudget { .. } => {
                samples.push((n, prefix.var_of_mean()));
                variance_series.push((n, prefix.mean_of_variances()));
                covariance_series.push((n, prefix.mean_of_cross()));
            }
        }
    }

    let (verdict, budget) = match condition {
        LlnCondition::CovarianceBudget { s, cap } => {
            let variance_trend = trend_verdict(&variance_series, threshold);
            let variance_branch = budget_branch(&variance_series, cap, s);
            let covariance_branch = budget_branch(&covariance_series, cap, s);
            let verdict = if variance_trend == Verdict::Converging {
                Verdict::Converging
            } else if variance_branch.is_some() && covariance_branch.is_some() {
                Verdict::Converging
            } else if trend_verdict(&samples, threshold) == Verdict::NotConverging {
                Verdict::NotConverging
            } else {
                Verdict::Inconclusive
            };
            (
                verdict,
                Some(BudgetReport {
                    variance_trend,
                    variance_branch,
                    covariance_branch,
                    variance_series,
                    covariance_series,
                }),
            )
        }
        _ => (trend_verdict(&samples, threshold), None),
    };

    Ok(LlnDiagnostic {
        condition,
        threshold,
        samples,
        bounds: (!bounds.is_empty()).then_some(bounds),
        verdict,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{running_mean_var_of_mean, telegraph_var_of_mean};
    use crate::util::{harmonic, rel_err};
    use proptest::prelude::*;

    fn running_mean() -> ProcessModel {
        ProcessModel::running_mean(0.0, 1.0).unwrap()
    }

    fn telegraph() -> ProcessModel {
        ProcessModel::telegraph_symmetric(1.0).unwrap()
    }

    fn constant_process() -> ProcessModel {
        // X_i = X for a single unit-variance X: every covariance is 1.
        ProcessModel::user_kernel(|_| 1.0, |_, _| 1.0)
    }

    #[test]
    fn var_of_mean_small_cases() {
        let rm = running_mean();
        assert!(rel_err(var_of_mean(&rm, 1).unwrap(), 1.0) <= 1e-15);
        // (1/4)(Var S1 + Var S2 + 2 Cov) = (1/4)(1 + 0.5 + 1) = 0.625.
        assert!(rel_err(var_of_mean(&rm, 2).unwrap(), 0.625) <= 1e-15);
        assert!(var_of_mean(&rm, 0).is_err());
    }

    #[test]
    fn var_of_mean_matches_closed_forms() {
        let rm = running_mean();
        let tg = telegraph();
        for n in [1usize, 2, 5, 17, 64, 100] {
            let direct = var_of_mean(&rm, n).unwrap();
            let closed = running_mean_var_of_mean(1.0, n).unwrap();
            assert!(rel_err(direct, closed) <= 1e-12, "running-mean n = {n}");

            let direct = var_of_mean(&tg, n).unwrap();
            let closed = telegraph_var_of_mean(1.0, n).unwrap();
            assert!(rel_err(direct, closed) <= 1e-12, "telegraph n = {n}");
        }
    }

    #[test]
    fn mean_of_variances_fixtures() {
        let rm = running_mean();
        for n in [1usize, 3, 20, 200] {
            let v = mean_of_variances(&rm, n).unwrap();
            assert!(rel_err(v, harmonic(n) / n as f64) <= 1e-13, "n = {n}");
        }
        let v = mean_of_variances(&rm, 200).unwrap();
        assert!((v - 0.0294).abs() < 1e-4, "H_200/200 is about 0.0294, got {v}");

        let tg = telegraph();
        for n in [1usize, 7, 100] {
            assert!(rel_err(mean_of_variances(&tg, n).unwrap(), 0.25) <= 1e-15);
        }
    }

    #[test]
    fn power_mean_examples_and_guards() {
        let p = VarianceProfile::new(vec![1.0, 4.0]).unwrap();
        assert!(rel_err(power_mean(&p, 1.0).unwrap(), 2.5) <= 1e-15);
        assert!(rel_err(power_mean(&p, 2.0).unwrap(), 8.5_f64.sqrt()) <= 1e-15);
        assert!(power_mean(&p, 0.0).is_err());
        assert!(power_mean(&p, -1.0).is_err());

        let constant = VarianceProfile::new(vec![0.7; 5]).unwrap();
        for r in [0.5, 1.0, 2.0, 4.0] {
            assert!(rel_err(power_mean(&constant, r).unwrap(), 0.7) <= 1e-13);
        }
    }

    #[test]
    fn power_mean_condition_dominates_mean_of_variances() {
        let rm = running_mean();
        let m = mean_of_variances(&rm, 10).unwrap();
        for s in [1.0, 1.5, 2.0, 4.0] {
            let p = power_mean_condition(&rm, 10, s).unwrap();
            assert!(p >= m - 1e-13, "s = {s}: {p} vs {m}");
        }
        let p1 = power_mean_condition(&rm, 10, 1.0).unwrap();
        assert!(rel_err(p1, m) <= 1e-13, "s = 1 reduces to the plain mean");
        assert!(power_mean_condition(&rm, 10, 0.9).is_err());
    }

    #[test]
    fn scaled_sum_chain_examples() {
        // cap = 1, n = 4, s = 0.5: bound = 1 / 4^1 = 0.25.
        let uk = ProcessModel::user_kernel(|_| 1.0, |i, j| if i == j { 1.0 } else { 0.0 });
        let r = scaled_sum_variance(&uk, 4, 0.5, Some(1.0)).unwrap();
        assert!(rel_err(r.bound, 0.25) <= 1e-15);
        // value = 4 / 4^2 = 0.25 here: the cap is tight for constant variances.
        assert!(r.value <= r.bound * (1.0 + 1e-12));

        // Derived cap: running maximum of the variances.
        let r = scaled_sum_variance(&telegraph(), 9, 1.0, None).unwrap();
        assert!(rel_err(r.cap, 0.25) <= 1e-15);

        assert!(scaled_sum_variance(&uk, 4, 0.0, Some(1.0)).is_err());
        assert!(scaled_sum_variance(&uk, 4, 0.5, Some(0.5)).is_err(), "cap below max variance");
    }

    #[test]
    fn trend_verdict_cases() {
        let dec: Vec<(usize, f64)> = (1..=20).map(|n| (n, 1.0 / n as f64)).collect();
        assert_eq!(trend_verdict(&dec, 0.2), Verdict::Converging);
        // Decreasing but still above threshold at the end: cannot certify.
        assert_eq!(trend_verdict(&dec, 0.01), Verdict::Inconclusive);

        let flat: Vec<(usize, f64)> = (1..=20).map(|n| (n, 0.25)).collect();
        assert_eq!(trend_verdict(&flat, 0.05), Verdict::NotConverging);
        // Flat but already below threshold: converged as far as we can tell.
        assert_eq!(trend_verdict(&flat, 0.3), Verdict::Converging);

        let grow: Vec<(usize, f64)> = (1..=20).map(|n| (n, n as f64)).collect();
        assert_eq!(trend_verdict(&grow, 0.05), Verdict::NotConverging);

        let noisy: Vec<(usize, f64)> = (1..=20)
            .map(|n| (n, if n % 2 == 0 { 1.0 } else { 2.0 }))
            .collect();
        assert_eq!(trend_verdict(&noisy, 0.05), Verdict::Inconclusive);

        assert_eq!(trend_verdict(&[], 0.05), Verdict::Inconclusive);
    }

    #[test]
    fn diagnose_running_mean_converges_under_mean_of_variances() {
        let grid: Vec<usize> = (1..=200).collect();
        let d = diagnose(&running_mean(), LlnCondition::MeanOfVariances, &grid, 0.05).unwrap();
        assert_eq!(d.verdict, Verdict::Converging);
        let (n, v) = *d.samples.last().unwrap();
        assert_eq!(n, 200);
        assert!(rel_err(v, harmonic(200) / 200.0) <= 1e-12);
    }

    #[test]
    fn diagnose_telegraph_under_both_conditions() {
        let grid: Vec<usize> = (1..=200).collect();
        let tg = telegraph();

        let d = diagnose(&tg, LlnCondition::MeanOfVariances, &grid, 0.05).unwrap();
        assert_eq!(d.verdict, Verdict::NotConverging);
        assert!(d.samples.iter().all(|&(_, v)| rel_err(v, 0.25) <= 1e-13));

        let d = diagnose(
            &tg,
            LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 },
            &grid,
            0.05,
        )
        .unwrap();
        assert_eq!(d.verdict, Verdict::Converging);
        let budget = d.budget.as_ref().unwrap();
        assert_eq!(budget.variance_branch, Some(BudgetBranch::BoundedByCap));
        assert_eq!(budget.covariance_branch, Some(BudgetBranch::BoundedByCap));
        // The budgeted covariance series approaches (1/4) q / (1 - q).
        let q = (-2.0_f64).exp();
        let limit = 0.25 * q / (1.0 - q);
        let (_, last) = *budget.covariance_series.last().unwrap();
        assert!((last - limit).abs() < 1e-3, "{last} vs {limit}");
        // Var(mean_n) itself is reported and already small.
        let (_, vm) = *d.samples.last().unwrap();
        assert!(vm < 0.02);
    }

    #[test]
    fn diagnose_constant_sequence_is_not_converging() {
        let grid = default_grid(1024).unwrap();
        let d = diagnose(
            &constant_process(),
            LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 },
            &grid,
            0.05,
        )
        .unwrap();
        assert_eq!(d.verdict, Verdict::NotConverging);
        let budget = d.budget.as_ref().unwrap();
        // (1/n) sum_{i<j} 1 = (n-1)/2 is unbounded and of order n, not n^0.5.
        assert_eq!(budget.covariance_branch, None);
        assert!(d.samples.iter().all(|&(_, v)| rel_err(v, 1.0) <= 1e-12));
    }

    #[test]
    fn diagnose_validates_inputs() {
        let rm = running_mean();
        assert!(diagnose(&rm, LlnCondition::VarOfMean, &[], 0.05).is_err());
        assert!(diagnose(&rm, LlnCondition::VarOfMean, &[0, 1], 0.05).is_err());
        assert!(diagnose(&rm, LlnCondition::VarOfMean, &[1, 2], 0.0).is_err());
        assert!(diagnose(&rm, LlnCondition::PowerMean { s: 0.5 }, &[1, 2], 0.05).is_err());
        for bad_s in [0.0, 1.0, 1.5, -0.5] {
            assert!(
                diagnose(
                    &rm,
                    LlnCondition::CovarianceBudget { s: bad_s, cap: 1.0 },
                    &[1, 2],
                    0.05
                )
                .is_err(),
                "s = {bad_s} must be rejected"
            );
        }
    }

    #[test]
    fn default_grid_shape() {
        assert_eq!(default_grid(5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(default_grid(256).unwrap().len(), 256);
        let g = default_grid(100_000).unwrap();
        assert!(g.len() <= 257);
        assert_eq!(*g.first().unwrap(), 1);
        assert_eq!(*g.last().unwrap(), 100_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(default_grid(0).is_err());
    }

    #[test]
    fn scaled_sum_diagnostic_reports_bounds() {
        let grid: Vec<usize> = (1..=64).collect();
        let d = diagnose(
            &telegraph(),
            LlnCondition::ScaledSum { s: 0.5, cap: None },
            &grid,
            0.05,
        )
        .unwrap();
        let bounds = d.bounds.as_ref().unwrap();
        assert_eq!(bounds.len(), d.samples.len());
        for (&(n, v), &b) in d.samples.iter().zip(bounds) {
            assert!(v <= b * (1.0 + 1e-12), "n = {n}: value {v} above bound {b}");
        }
        assert_eq!(d.verdict, Verdict::Converging);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn power_mean_is_monotone_in_the_exponent(
            vars in proptest::collection::vec(0.0f64..10.0, 1..12),
            r in 0.01f64..4.0,
            bump in 0.0f64..4.0,
        ) {
            let p = VarianceProfile::new(vars).unwrap();
            let s = (r + bump).min(4.0).max(r);
            let lo = power_mean(&p, r).unwrap();
            let hi = power_mean(&p, s).unwrap();
            let scale = 1.0_f64.max(hi.abs());
            prop_assert!(lo <= hi + 1e-10 * scale, "r={r}, s={s}: {lo} > {hi}");
        }
    }
}
