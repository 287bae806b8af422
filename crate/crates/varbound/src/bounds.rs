//! Exact variance of a weighted sum and correlation-free upper bounds.
//!
//! For weights `a` and variables with variances `s_i^2` and correlations
//! `r_ij`, the exact variance is
//!
//! ```text
//! Var(sum a_i X_i) = sum a_i^2 s_i^2  +  2 sum_{i<j} a_i a_j r_ij s_i s_j
//! ```
//!
//! The bounds below replace the correlation-dependent part with quantities
//! built from the marginal variances alone. Which bounds apply depends on the
//! weight class:
//!
//! * simplex or sub-simplex weights: `sum a_i s_i^2`
//! * simplex weights: `(sum a_i^2) * (sum s_i^2)`
//! * non-negative weights: `(sum a_i) * (sum a_i s_i^2)`
//! * arbitrary weights: `(sum |a_i|) * (sum |a_i| s_i^2)`
//!
//! The simplex and sub-simplex cases rest on the matrix
//! `A = diag(a) - a a^T` being positive semidefinite, which this module
//! verifies directly: its principal minors have the closed form
//! `(prod_m a_{i_m}) * (1 - sum_m a_{i_m})`, cross-checked against a generic
//! determinant.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CovarianceModel, VarianceProfile, WeightClass, WeightVector, SIMPLEX_SUM_TOL};
use crate::util::{rel_err, KahanSum};

/// Slack below `-1e-9 * max(1, exact)` counts as a dominance violation.
pub const SLACK_REL_TOL: f64 = 1e-9;

/// Exhaustive principal minors may dip this far below zero before the
/// matrix is declared not positive semidefinite.
pub const MINOR_TOL: f64 = 1e-12;

/// Largest dimension checked by exhaustive minor enumeration; above this an
/// eigenvalue test is used instead.
pub const EXHAUSTIVE_PSD_LIMIT: usize = 12;

fn check_dims(weights: &WeightVector, n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} weights but {n} variances",
            weights.len()
        )));
    }
    Ok(())
}

/// `Var(sum a_i X_i)` evaluated exactly from the covariance model.
///
/// For a positive semidefinite model the result is a quadratic form in a PSD
/// matrix, hence non-negative up to rounding: values in
/// `[-1e-9 * scale, 0)` are clamped to zero, where `scale` is the total
/// absolute mass of the summed terms, and anything lower reports an
/// inconsistency. Hypothetical (non-PSD) models may legitimately produce
/// negative values, which are returned as computed.
pub fn exact_variance(weights: &WeightVector, model: &CovarianceModel) -> Result<f64> {
    check_dims(weights, model.n())?;
    let a = weights.values();
    let n = a.len();
    let mut sum = KahanSum::new();
    let mut scale = KahanSum::new();
    for i in 0..n {
        let term = a[i] * a[i] * model.covariance(i, i);
        sum.add(term);
        scale.add(term.abs());
        for j in 0..i {
            let term = 2.0 * a[i] * a[j] * model.covariance(i, j);
            sum.add(term);
            scale.add(term.abs());
        }
    }
    let value = sum.value();
    if value >= 0.0 || model.is_hypothetical() {
        return Ok(value);
    }
    let tol = SLACK_REL_TOL * scale.value();
    if value >= -tol {
        Ok(0.0)
    } else {
        Err(Error::Inconsistency(format!(
            "variance {value} of a positive semidefinite model fell below -{tol}"
        )))
    }
}

/// `sum a_i s_i^2`, the common core of the simplex and sub-simplex bounds.
/// No class restriction; the named bound constructors enforce applicability.
pub fn weighted_variance_sum(weights: &WeightVector, profile: &VarianceProfile) -> Result<f64> {
    check_dims(weights, profile.len())?;
    Ok(weights
        .values()
        .iter()
        .zip(profile.variances())
        .map(|(a, v)| a * v)
        .sum())
}

/// Simplex / sub-simplex bound `sum a_i s_i^2`.
pub fn weighted_variance_bound(weights: &WeightVector, profile: &VarianceProfile) -> Result<f64> {
    match weights.class() {
        WeightClass::Simplex | WeightClass::SubSimplex => {
            weighted_variance_sum(weights, profile)
        }
        other => Err(Error::NotApplicable(format!(
            "the weighted-variance bound needs simplex or sub-simplex weights, got {}",
            other.name()
        ))),
    }
}

/// Simplex bound `(sum a_i^2) * (sum s_i^2)`.
pub fn squared_weight_bound(weights: &WeightVector, profile: &VarianceProfile) -> Result<f64> {
    check_dims(weights, profile.len())?;
    if weights.class() != WeightClass::Simplex {
        return Err(Error::NotApplicable(format!(
            "the squared-weight bound needs simplex weights, got {}",
            weights.class().name()
        )));
    }
    let sq: f64 = weights.values().iter().map(|a| a * a).sum();
    Ok(sq * profile.sum())
}

/// Non-negative-weight bound `(sum a_i) * (sum a_i s_i^2)`.
pub fn total_weight_bound(weights: &WeightVector, profile: &VarianceProfile) -> Result<f64> {
    check_dims(weights, profile.len())?;
    if !weights.is_non_negative() {
        return Err(Error::NotApplicable(
            "the total-weight bound needs non-negative weights".into(),
        ));
    }
    Ok(weights.sum() * weighted_variance_sum(weights, profile)?)
}

/// Unrestricted bound `(sum |a_i|) * (sum |a_i| s_i^2)`.
pub fn absolute_weight_bound(weights: &WeightVector, profile: &VarianceProfile) -> Result<f64> {
    check_dims(weights, profile.len())?;
    let abs_weighted: f64 = weights
        .values()
        .iter()
        .zip(profile.variances())
        .map(|(a, v)| a.abs() * v)
        .sum();
    Ok(weights.abs_sum() * abs_weighted)
}

/// `(1/n) * sum s_i^2`: bound on the variance of the plain average of the
/// `X_i`, valid under arbitrary correlations.
pub fn mean_variance_bound(profile: &VarianceProfile) -> f64 {
    profile.sum() / profile.len() as f64
}

/// The members of the bound family, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    /// `sum a_i s_i^2` for simplex weights.
    SimplexWeighted,
    /// `(sum a_i^2)(sum s_i^2)` for simplex weights.
    SimplexSquared,
    /// `sum a_i s_i^2` for sub-simplex weights.
    SubSimplexWeighted,
    /// `(sum a_i)(sum a_i s_i^2)` for non-negative weights.
    NonNegativeTotal,
    /// `(sum |a_i|)(sum |a_i| s_i^2)` for arbitrary weights.
    GeneralAbsolute,
    /// Three-step chain available when `sum |a_i| <= 1`.
    AbsSumChain,
    /// Three-step chain for uncorrelated models with every `|a_i| <= 1`.
    UncorrelatedChain,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::SimplexWeighted,
        BoundKind::SimplexSquared,
        BoundKind::SubSimplexWeighted,
        BoundKind::NonNegativeTotal,
        BoundKind::GeneralAbsolute,
        BoundKind::AbsSumChain,
        BoundKind::UncorrelatedChain,
    ];

    /// Stable identifier used in CSV and JSON output.
    pub fn tag(&self) -> &'static str {
        match self {
            BoundKind::SimplexWeighted => "simplex_weighted",
            BoundKind::SimplexSquared => "simplex_squared",
            BoundKind::SubSimplexWeighted => "subsimplex_weighted",
            BoundKind::NonNegativeTotal => "nonneg_total",
            BoundKind::GeneralAbsolute => "general_absolute",
            BoundKind::AbsSumChain => "abs_sum_chain",
            BoundKind::UncorrelatedChain => "uncorrelated_chain",
        }
    }
}

/// One bound evaluated against one instance. `value` and `slack` are `None`
/// exactly when the bound does not apply to the instance's weight class or
/// correlation structure.
#[derive(Debug, Clone, Serialize)]
pub struct BoundEntry {
    pub kind: BoundKind,
    pub applicable: bool,
    pub value: Option<f64>,
    pub slack: Option<f64>,
}

/// A three-term descending chain of bounds: `tightest <= middle <= loosest`,
/// each an upper bound on the exact variance whenever the chain applies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundChain {
    pub tightest: f64,
    pub middle: f64,
    pub loosest: f64,
}

impl BoundChain {
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.tightest <= self.middle + tol && self.middle <= self.loosest + tol
    }
}

/// Every bound in the family evaluated against one instance.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub exact: f64,
    pub weight_class: WeightClass,
    /// True when the instance's correlation matrix is not positive
    /// semidefinite; dominance of the bounds is then not guaranteed.
    pub hypothetical: bool,
    pub entries: Vec<BoundEntry>,
    pub abs_sum_chain: Option<BoundChain>,
    pub uncorrelated_chain: Option<BoundChain>,
}

impl BoundReport {
    pub fn entry(&self, kind: BoundKind) -> &BoundEntry {
        self.entries
            .iter()
            .find(|e| e.kind == kind)
            .expect("report carries every bound kind")
    }

    pub fn slack_tolerance(&self) -> f64 {
        SLACK_REL_TOL * 1.0_f64.max(self.exact.abs())
    }

    /// Bounds whose slack fell below `-1e-9 * max(1, exact)`. Empty for
    /// positive semidefinite models; hypothetical models may violate freely.
    pub fn violations(&self) -> Vec<BoundKind> {
        let tol = self.slack_tolerance();
        self.entries
            .iter()
            .filter(|e| e.slack.is_some_and(|s| s < -tol))
            .map(|e| e.kind)
            .collect()
    }
}

/// Evaluate the full bound family against one instance.
///
/// Inapplicable bounds are reported with `applicable = false` rather than an
/// error. For a positive semidefinite model every applicable bound must
/// dominate the exact variance; a violation there is an internal
/// inconsistency. Hypothetical models skip that enforcement but still fill in
/// the slack column.
pub fn bound_report(weights: &WeightVector, model: &CovarianceModel) -> Result<BoundReport> {
    check_dims(weights, model.n())?;
    let exact = exact_variance(weights, model)?;
    let profile = model.profile();
    let class = weights.class();
    let a = weights.values();

    let abs_sum = weights.abs_sum();
    let abs_weighted_vars: f64 = a
        .iter()
        .zip(profile.variances())
        .map(|(ai, v)| ai.abs() * v)
        .sum();
    let squared_weighted_vars: f64 = a
        .iter()
        .zip(profile.variances())
        .map(|(ai, v)| ai * ai * v)
        .sum();
    let total_vars = profile.sum();

    let abs_sum_chain = (abs_sum <= 1.0 + SIMPLEX_SUM_TOL).then_some(BoundChain {
        tightest: abs_sum * abs_weighted_vars,
        middle: abs_weighted_vars,
        loosest: total_vars,
    });
    let uncorrelated_chain = (model.correlation().is_diagonal()
        && a.iter().all(|ai| ai.abs() <= 1.0))
    .then_some(BoundChain {
        tightest: squared_weighted_vars,
        middle: abs_weighted_vars,
        loosest: total_vars,
    });

    let value_for = |kind: BoundKind| -> Result<Option<f64>> {
        let v = match kind {
            BoundKind::SimplexWeighted => (class == WeightClass::Simplex)
                .then(|| weighted_variance_sum(weights, profile))
                .transpose()?,
            BoundKind::SimplexSquared => (class == WeightClass::Simplex)
                .then(|| squared_weight_bound(weights, profile))
                .transpose()?,
            BoundKind::SubSimplexWeighted => (class == WeightClass::SubSimplex)
                .then(|| weighted_variance_sum(weights, profile))
                .transpose()?,
            BoundKind::NonNegativeTotal => weights
                .is_non_negative()
                .then(|| total_weight_bound(weights, profile))
                .transpose()?,
            BoundKind::GeneralAbsolute => Some(absolute_weight_bound(weights, profile)?),
            BoundKind::AbsSumChain => abs_sum_chain.map(|c| c.tightest),
            BoundKind::UncorrelatedChain => uncorrelated_chain.map(|c| c.tightest),
        };
        Ok(v)
    };

    let mut entries = Vec::with_capacity(BoundKind::ALL.len());
    for kind in BoundKind::ALL {
        let value = value_for(kind)?;
        entries.push(BoundEntry {
            kind,
            applicable: value.is_some(),
            value,
            slack: value.map(|v| v - exact),
        });
    }

    let report = BoundReport {
        exact,
        weight_class: class,
        hypothetical: model.is_hypothetical(),
        entries,
        abs_sum_chain,
        uncorrelated_chain,
    };

    if !report.hypothetical {
        let violations = report.violations();
        if !violations.is_empty() {
            return Err(Error::Inconsistency(format!(
                "bounds {:?} fell below the exact variance {} of a positive semidefinite model",
                violations.iter().map(|k| k.tag()).collect::<Vec<_>>(),
                report.exact
            )));
        }
        let tol = report.slack_tolerance();
        for chain in [&report.abs_sum_chain, &report.uncorrelated_chain].into_iter().flatten() {
            if !chain.is_ordered(tol) {
                return Err(Error::Inconsistency(format!(
                    "bound chain {chain:?} is not in ascending order"
                )));
            }
        }
    }
    Ok(report)
}

/// Closed-form principal minor of `diag(a) - a a^T` on a strictly increasing
/// 0-based index subset: `(prod_m a_{i_m}) * (1 - sum_m a_{i_m})`.
pub fn principal_minor(weights: &WeightVector, subset: &[usize]) -> Result<f64> {
    validate_subset(subset, weights.len())?;
    let a = weights.values();
    let mut prod = 1.0;
    let mut sum = 0.0;
    for &i in subset {
        prod *= a[i];
        sum += a[i];
    }
    Ok(prod * (1.0 - sum))
}

fn validate_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidInput("index subset must be non-empty".into()));
    }
    for w in subset.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput(
                "index subset must be strictly increasing".into(),
            ));
        }
    }
    if *subset.last().unwrap() >= n {
        return Err(Error::InvalidInput(format!(
            "index subset exceeds dimension {n}"
        )));
    }
    Ok(())
}

/// The matrix `A = diag(a) - a a^T` whose positive semidefiniteness underlies
/// the simplex and sub-simplex bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGramComplement {
    weights: Vec<f64>,
}

impl WeightGramComplement {
    pub fn new(weights: &WeightVector) -> Self {
        WeightGramComplement {
            weights: weights.values().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let d = if i == j { self.weights[i] } else { 0.0 };
        d - self.weights[i] * self.weights[j]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| self.entry(i, j))
    }

    pub fn principal_submatrix(&self, subset: &[usize]) -> Result<DMatrix<f64>> {
        validate_subset(subset, self.n())?;
        let k = subset.len();
        Ok(DMatrix::from_fn(k, k, |r, c| self.entry(subset[r], subset[c])))
    }
}

/// Witness accompanying a failed positive-semidefiniteness check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PsdWitness {
    /// A principal minor below `-MINOR_TOL`, with its index subset.
    Minor { subset: Vec<usize>, value: f64 },
    /// A negative eigenvalue found by the spectral fallback.
    Eigenvalue { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PsdCheck {
    Psd,
    NotPsd(PsdWitness),
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Psd)
    }
}

/// Decide whether `diag(a) - a a^T` is positive semidefinite.
///
/// Up to dimension [`EXHAUSTIVE_PSD_LIMIT`] this enumerates all `2^n - 1`
/// principal minors via the closed form, cross-checking every subset of size
/// at most 5 against a generic determinant (disagreement beyond 1e-10
/// relative is an inconsistency, not a verdict). Larger matrices fall back to
/// an eigenvalue test with relative tolerance [`crate::model::PSD_REL_TOL`].
///
/// For simplex and sub-simplex weights the verdict is always `Psd`; the point
/// of the routine is that it does not assume so.
pub fn check_weight_gram_psd(weights: &WeightVector) -> Result<PsdCheck> {
    let n = weights.len();
    let gram = WeightGramComplement::new(weights);
    if n > EXHAUSTIVE_PSD_LIMIT {
        let eigenvalues = gram.matrix().symmetric_eigen().eigenvalues;
        let max = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let tol = crate::model::PSD_REL_TOL * 1.0_f64.max(max.abs());
        return Ok(if min >= -tol {
            PsdCheck::Psd
        } else {
            PsdCheck::NotPsd(PsdWitness::Eigenvalue { value: min })
        });
    }

    let mut subset = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        subset.clear();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                subset.push(i);
            }
        }
        let minor = principal_minor(weights, &subset)?;
        if subset.len() <= 5 {
            let det = gram.principal_submatrix(&subset)?.determinant();
            if rel_err(minor, det) > 1e-10 {
                return Err(Error::Inconsistency(format!(
                    "closed-form minor {minor} disagrees with determinant {det} on subset {subset:?}"
                )));
            }
        }
        if minor < -MINOR_TOL {
            return Ok(PsdCheck::NotPsd(PsdWitness::Minor {
                subset: subset.clone(),
                value: minor,
            }));
        }
    }
    Ok(PsdCheck::Psd)
}

/// Two-sided bound on the total pairwise covariance, scaled as it enters the
/// variance of the mean:
///
/// ```text
/// -(1/n) sum s_i^2  <=  (2/n) sum_{i<j} Cov(X_i, X_j)  <=  (1 - 1/n) sum s_i^2
/// ```
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CovarianceSandwich {
    pub lower: f64,
    pub actual: f64,
    pub upper: f64,
}

impl CovarianceSandwich {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower - tol <= self.actual && self.actual <= self.upper + tol
    }
}

/// Evaluate the covariance sandwich for a model with at least two variables.
/// For positive semidefinite models the sandwich always holds (up to
/// rounding); hypothetical models may break either side.
pub fn covariance_sum_bounds(model: &CovarianceModel) -> Result<CovarianceSandwich> {
    let n = model.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "the covariance sandwich needs at least two variables".into(),
        ));
    }
    let mut cross = KahanSum::new();
    for i in 0..n {
        for j in 0..i {
            cross.add(model.covariance(i, j));
        }
    }
    let total = model.profile().sum();
    let nf = n as f64;
    Ok(CovarianceSandwich {
        lower: -total / nf,
        actual: 2.0 * cross.value() / nf,
        upper: (1.0 - 1.0 / nf) * total,
    })
}
