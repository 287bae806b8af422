//! Chebyshev tail bounds for weighted sums and averages of correlated
//! variables, plus an empirical tail frequency to compare them against.
//!
//! All bounds have the shape `K / delta^2` and are returned raw: values above
//! 1 are vacuously true and are flagged, not clamped.

use serde::Serialize;

use crate::bounds::absolute_weight_bound;
use crate::error::{Error, Result};
use crate::model::{VarianceProfile, WeightVector};
use crate::processes::{mc_estimate, ProcessModel, Statistic};

/// A tail event `|Z - EZ| > delta` for a statistic over `n` variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailQuery {
    pub delta: f64,
    pub n: usize,
}

impl TailQuery {
    pub fn new(delta: f64, n: usize) -> Result<Self> {
        check_delta(delta)?;
        if n == 0 {
            return Err(Error::InvalidInput("tail query needs n >= 1".into()));
        }
        Ok(TailQuery { delta, n })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "deviation threshold must be positive and finite, got {delta}"
        )));
    }
    Ok(())
}

/// `P(|sum a_i X_i - E| > delta) <= (sum |a_i|)(sum |a_i| s_i^2) / delta^2`,
/// valid under arbitrary correlations.
pub fn tail_bound_weighted(
    weights: &WeightVector,
    profile: &VarianceProfile,
    delta: f64,
) -> Result<f64> {
    check_delta(delta)?;
    Ok(absolute_weight_bound(weights, profile)? / (delta * delta))
}

/// Tail bound for the plain average `(X_1 + ... + X_n) / n`.
///
/// With arbitrary correlations (`correlated = true`) the bound is
/// `(1/n) sum s_i^2 / delta^2`; for pairwise-uncorrelated variables it
/// tightens by a factor of `n`. The uncorrelated value is computed as the
/// correlated value divided by `n`, so the ratio between the two variants is
/// exact by construction.
pub fn tail_bound_mean(profile: &VarianceProfile, delta: f64, correlated: bool) -> Result<f64> {
    check_delta(delta)?;
    let n = profile.len() as f64;
    let correlated_bound = profile.sum() / n / (delta * delta);
    Ok(if correlated {
        correlated_bound
    } else {
        correlated_bound / n
    })
}

/// Which standardized statistic a tail bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StandardizedStat {
    /// `(1/n) sum (X_i - EX_i) / sigma_i`: bound `1 / delta^2`.
    Mean,
    /// `sum (X_i - EX_i) / sigma_i`: bound `n^2 / delta^2`.
    Sum,
}

/// Tail bound for standardized (unit-variance) summands under arbitrary
/// correlations. The sum form at threshold `n * delta` equals the mean form
/// at `delta`.
pub fn tail_bound_standardized(n: usize, delta: f64, stat: StandardizedStat) -> Result<f64> {
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::InvalidInput("standardized bound needs n >= 1".into()));
    }
    let d2 = delta * delta;
    Ok(match stat {
        StandardizedStat::Mean => 1.0 / d2,
        StandardizedStat::Sum => (n as f64) * (n as f64) / d2,
    })
}

/// Observed tail frequency over seeded Monte Carlo replicates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmpiricalTail {
    pub frequency: f64,
    pub std_error: f64,
    pub exceed_count: u64,
    pub reps: u64,
}

/// Fraction of `reps` paths whose mean deviates from the process mean by
/// strictly more than `delta`, with the binomial standard error.
/// Deterministic given `seed`, independent of thread count.
pub fn empirical_tail(
    process: &ProcessModel,
    n: usize,
    delta: f64,
    reps: u64,
    seed: u64,
) -> Result<EmpiricalTail> {
    if reps < 100 {
        return Err(Error::InvalidInput(
            "empirical tail frequencies need at least 100 replicates".into(),
        ));
    }
    let est = mc_estimate(process, Statistic::Tail { delta }, n, reps, seed)?;
    Ok(EmpiricalTail {
        frequency: est.estimate,
        std_error: est.std_error,
        exceed_count: (est.estimate * reps as f64).round() as u64,
        reps,
    })
}

/// A probability bound above 1 carries no information.
pub fn is_vacuous(bound: f64) -> bool {
    bound >= 1.0
}
