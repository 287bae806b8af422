//! Domain types: weight vectors with their class, variance profiles,
//! correlation matrices, and the covariance model assembled from them.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::all_finite;

/// Absolute tolerance on `sum(a) == 1` when classifying weights.
pub const SIMPLEX_SUM_TOL: f64 = 1e-12;

/// A correlation matrix counts as positive semidefinite when
/// `lambda_min >= -PSD_REL_TOL * lambda_max`.
pub const PSD_REL_TOL: f64 = 1e-10;

/// Weight classes, ordered from most to least restrictive. Each class
/// unlocks a different subset of variance bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightClass {
    /// All entries in [0, 1] and the sum is 1 (within [`SIMPLEX_SUM_TOL`]).
    Simplex,
    /// All entries in [0, 1] and the sum is strictly between 0 and 1.
    SubSimplex,
    /// All entries non-negative, no constraint on the sum.
    NonNegative,
    /// At least one negative entry.
    General,
}

impl WeightClass {
    pub fn name(&self) -> &'static str {
        match self {
            WeightClass::Simplex => "simplex",
            WeightClass::SubSimplex => "sub-simplex",
            WeightClass::NonNegative => "non-negative",
            WeightClass::General => "general",
        }
    }
}

/// Finite weight vector tagged with its [`WeightClass`].
///
/// Classification happens once at construction and is total: every finite
/// vector lands in exactly one class.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    class: WeightClass,
}

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("weight vector must be non-empty".into()));
        }
        if !all_finite(&values) {
            return Err(Error::InvalidInput("weights must be finite".into()));
        }
        let class = classify(&values);
        Ok(WeightVector { values, class })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("uniform weights need n >= 1".into()));
        }
        WeightVector::new(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class(&self) -> WeightClass {
        self.class
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|a| a.abs()).sum()
    }

    /// True for every class except [`WeightClass::General`].
    pub fn is_non_negative(&self) -> bool {
        self.class != WeightClass::General
    }
}

fn classify(values: &[f64]) -> WeightClass {
    let non_negative = values.iter().all(|&a| a >= 0.0);
    let in_unit_interval = non_negative && values.iter().all(|&a| a <= 1.0);
    let sum: f64 = values.iter().sum();
    if in_unit_interval && (sum - 1.0).abs() <= SIMPLEX_SUM_TOL {
        WeightClass::Simplex
    } else if in_unit_interval && sum > 0.0 && sum < 1.0 {
        WeightClass::SubSimplex
    } else if non_negative {
        WeightClass::NonNegative
    } else {
        WeightClass::General
    }
}

/// Per-variable marginal variances. Entries must be finite and non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceProfile {
    variances: Vec<f64>,
}

impl VarianceProfile {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::InvalidInput("variance profile must be non-empty".into()));
        }
        if !all_finite(&variances) || variances.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidInput(
                "variances must be finite and non-negative".into(),
            ));
        }
        Ok(VarianceProfile { variances })
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.variances.iter().sum()
    }

    pub fn std_devs(&self) -> Vec<f64> {
        self.variances.iter().map(|v| v.sqrt()).collect()
    }
}

/// Correlation matrix: exactly symmetric, unit diagonal, entries in [-1, 1].
///
/// [`CorrelationMatrix::new`] additionally requires positive semidefiniteness
/// (eigenvalue test with [`PSD_REL_TOL`]). [`CorrelationMatrix::hypothetical`]
/// skips that requirement but records the verdict, so downstream consumers can
/// flag results that assume an unrealizable correlation structure.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    /// Row-major, length n*n.
    entries: Vec<f64>,
    psd: bool,
}

impl CorrelationMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Self::hypothetical(rows)?;
        if !m.psd {
            return Err(Error::InvalidInput(
                "correlation matrix is not positive semidefinite".into(),
            ));
        }
        Ok(m)
    }

    /// Entrywise-valid matrix that may fail the PSD test; the verdict is kept.
    pub fn hypothetical(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("correlation matrix must be non-empty".into()));
        }
        let mut entries = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "correlation row {i} has length {} but the matrix has {n} rows",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "correlation entry ({i},{j}) = {v} is outside [-1, 1]"
                    )));
                }
                entries[i * n + j] = v;
            }
        }
        for i in 0..n {
            if entries[i * n + i] != 1.0 {
                return Err(Error::InvalidInput(format!(
                    "correlation diagonal entry ({i},{i}) must be exactly 1"
                )));
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidInput(format!(
                        "correlation entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        let psd = eigen_psd(&entries, n);
        Ok(CorrelationMatrix { n, entries, psd })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("correlation matrix must be non-empty".into()));
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Ok(CorrelationMatrix { n, entries, psd: true })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "correlation index out of range");
        self.entries[i * self.n + j]
    }

    pub fn is_psd(&self) -> bool {
        self.psd
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0.0))
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

fn eigen_psd(entries: &[f64], n: usize) -> bool {
    let m = DMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
    let eigenvalues = m.symmetric_eigen().eigenvalues;
    let max = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    // Unit diagonal forces trace n, so lambda_max >= 1 > 0.
    min >= -PSD_REL_TOL * max
}

/// Random correlation matrix: the Gram matrix of n seeded Gaussian rows,
/// rescaled to unit diagonal. PSD by construction up to rounding; entries are
/// clamped to [-1, 1] to absorb ulp overshoot. Deterministic in `seed`.
pub fn random_correlation(n: usize, seed: u64) -> Result<CorrelationMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("random correlation needs n >= 1".into()));
    }
    const RETRIES: u64 = 16;
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let g: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let dot = |i: usize, j: usize| -> f64 { (0..n).map(|k| g[i * n + k] * g[j * n + k]).sum() };
        let norms: Vec<f64> = (0..n).map(|i| dot(i, i).sqrt()).collect();
        if norms.iter().any(|&d| !d.is_finite() || d < 1e-12) {
            continue;
        }
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            rows[i][i] = 1.0;
            for j in 0..i {
                let rho = (dot(i, j) / (norms[i] * norms[j])).clamp(-1.0, 1.0);
                rows[i][j] = rho;
                rows[j][i] = rho;
            }
        }
        match CorrelationMatrix::new(&rows) {
            Ok(m) => return Ok(m),
            // Rounding pushed an eigenvalue below tolerance; redraw.
            Err(_) => continue,
        }
    }
    Err(Error::GenerationFailure(format!(
        "no valid random correlation for n = {n} after {RETRIES} attempts from seed {seed}"
    )))
}

/// Marginal variances plus a correlation structure, with pairwise covariances
/// derived as `rho_ij * sigma_i * sigma_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceModel {
    profile: VarianceProfile,
    correlation: CorrelationMatrix,
    sigmas: Vec<f64>,
}

impl CovarianceModel {
    pub fn new(profile: VarianceProfile, correlation: CorrelationMatrix) -> Result<Self> {
        if profile.len() != correlation.n() {
            return Err(Error::InvalidInput(format!(
                "variance profile has {} entries but the correlation matrix is {}x{}",
                profile.len(),
                correlation.n(),
                correlation.n()
            )));
        }
        let sigmas = profile.std_devs();
        Ok(CovarianceModel { profile, correlation, sigmas })
    }

    pub fn uncorrelated(profile: VarianceProfile) -> Self {
        let n = profile.len();
        let correlation = CorrelationMatrix::identity(n).expect("profile is non-empty");
        let sigmas = profile.std_devs();
        CovarianceModel { profile, correlation, sigmas }
    }

    pub fn n(&self) -> usize {
        self.profile.len()
    }

    pub fn profile(&self) -> &VarianceProfile {
        &self.profile
    }

    pub fn correlation(&self) -> &CorrelationMatrix {
        &self.correlation
    }

    /// Diagonal entries reproduce the variance profile exactly; off-diagonal
    /// entries are `rho_ij * sigma_i * sigma_j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.profile.variances()[i]
        } else {
            self.correlation.get(i, j) * self.sigmas[i] * self.sigmas[j]
        }
    }

    /// True when the correlation matrix failed the PSD test, i.e. no real
    /// random vector has this covariance structure. Bounds still evaluate,
    /// but dominance over the "exact" value is not guaranteed.
    pub fn is_hypothetical(&self) -> bool {
        !self.correlation.is_psd()
    }
}

/// JSON problem instance: variances are required, weights default to the
/// uniform vector `1/n`, the correlation defaults to the identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub variances: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<Vec<Vec<f64>>>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("instance JSON: {e}")))
    }

    /// Validate and assemble the typed pieces. A supplied correlation is
    /// accepted even if not PSD (the model is then flagged hypothetical).
    pub fn resolve(&self) -> Result<(WeightVector, CovarianceModel)> {
        let n = self.variances.len();
        let profile = VarianceProfile::new(self.variances.clone())?;
        let weights = match &self.weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "{} weights but {n} variances",
                        w.len()
                    )));
                }
                WeightVector::new(w.clone())?
            }
            None => WeightVector::uniform(n)?,
        };
        let model = match &self.correlation {
            Some(rows) => {
                let corr = CorrelationMatrix::hypothetical(rows)?;
                CovarianceModel::new(profile, corr)?
            }
            None => CovarianceModel::uncorrelated(profile),
        };
        Ok((weights, model))
    }
}
