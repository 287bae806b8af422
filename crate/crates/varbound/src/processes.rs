//! Concrete correlated processes: covariance kernels, closed forms for the
//! variance of the running average, and seeded samplers with a Monte Carlo
//! estimator.
//!
//! Two named processes are built in:
//!
//! * **running-mean**: `S_k` is the average of the first `k` draws of an iid
//!   normal sequence with mean `mu` and standard deviation `sigma`. Then
//!   `Cov(S_i, S_j) = sigma^2 / max(i, j)`.
//! * **telegraph**: a stationary {0, 1}-valued signal that flips according to
//!   a Poisson clock with rate `lambda`, holding level 1 with probability `p`
//!   (`p = 1/2` is the symmetric classic). Sampled at unit spacing,
//!   `Cov(X_i, X_j) = p (1 - p) e^{-2 lambda |i - j|}`. For `p != 1/2` this
//!   is realized as the two-state Markov jump process with flip rates
//!   `2 lambda p` (up) and `2 lambda (1 - p)` (down), which has the same
//!   exponentially decaying kernel.
//!
//! A `UserKernel` variant accepts arbitrary variance/covariance closures for
//! diagnostics; it cannot be sampled.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::{harmonic, kahan_sum, KahanSum};

/// Covariance kernel supplied as closures, for plugging arbitrary sequences
/// into the diagnostics. Closures must be deterministic; `covariance(i, i)`
/// must equal `variance(i)` and `covariance` must be symmetric, which is
/// checked on every evaluation.
#[derive(Clone)]
pub struct UserKernel {
    variance: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    covariance: Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>,
}

impl fmt::Debug for UserKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("UserKernel { .. }")
    }
}

#[derive(Debug, Clone)]
pub enum ProcessModel {
    RunningMeanNormal { mu: f64, sigma: f64 },
    Telegraph { lambda: f64, p: f64 },
    UserKernel(UserKernel),
}

impl ProcessModel {
    pub fn running_mean(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidModel(
                "running-mean needs finite mu and sigma > 0".into(),
            ));
        }
        Ok(ProcessModel::RunningMeanNormal { mu, sigma })
    }

    pub fn telegraph(lambda: f64, p: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidModel("telegraph needs lambda > 0".into()));
        }
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidModel("telegraph needs p in [0, 1]".into()));
        }
        Ok(ProcessModel::Telegraph { lambda, p })
    }

    pub fn telegraph_symmetric(lambda: f64) -> Result<Self> {
        ProcessModel::telegraph(lambda, 0.5)
    }

    pub fn user_kernel(
        variance: impl Fn(usize) -> f64 + Send + Sync + 'static,
        covariance: impl Fn(usize, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ProcessModel::UserKernel(UserKernel {
            variance: Arc::new(variance),
            covariance: Arc::new(covariance),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProcessModel::RunningMeanNormal { .. } => "running-mean",
            ProcessModel::Telegraph { .. } => "telegraph",
            ProcessModel::UserKernel(_) => "user-kernel",
        }
    }

    /// `Cov(X_i, X_j)` for 1-based indices.
    pub fn kernel_cov(&self, i: usize, j: usize) -> Result<f64> {
        if i == 0 || j == 0 {
            return Err(Error::InvalidInput("kernel indices are 1-based".into()));
        }
        match self {
            ProcessModel::RunningMeanNormal { sigma, .. } => {
                Ok(sigma * sigma / i.max(j) as f64)
            }
            ProcessModel::Telegraph { lambda, p } => {
                let tau = i.abs_diff(j) as f64;
                Ok(p * (1.0 - p) * (-2.0 * lambda * tau).exp())
            }
            ProcessModel::UserKernel(k) => {
                let c = (k.covariance)(i, j);
                if i == j {
                    let v = (k.variance)(i);
                    if c != v {
                        return Err(Error::InvalidModel(format!(
                            "user kernel: covariance({i},{i}) = {c} differs from variance({i}) = {v}"
                        )));
                    }
                } else {
                    let ct = (k.covariance)(j, i);
                    if c != ct {
                        return Err(Error::InvalidModel(format!(
                            "user kernel: covariance({i},{j}) = {c} is not symmetric ({ct})"
                        )));
                    }
                }
                Ok(c)
            }
        }
    }

    /// `Var(X_i)` for a 1-based index.
    pub fn variance_at(&self, i: usize) -> Result<f64> {
        self.kernel_cov(i, i)
    }

    /// Common expectation of every `X_i`, when known.
    pub fn mean(&self) -> Option<f64> {
        match self {
            ProcessModel::RunningMeanNormal { mu, .. } => Some(*mu),
            ProcessModel::Telegraph { p, .. } => Some(*p),
            ProcessModel::UserKernel(_) => None,
        }
    }

    /// One path `X_1 .. X_n`, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SamplePath> {
        if n == 0 {
            return Err(Error::InvalidInput("a sample path needs n >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = self.sample_with_rng(n, &mut rng)?;
        Ok(SamplePath {
            process: self.name().to_string(),
            n,
            seed,
            values,
        })
    }

    fn sample_with_rng(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        match self {
            ProcessModel::RunningMeanNormal { mu, sigma } => {
                let normal = Normal::new(*mu, *sigma)
                    .map_err(|e| Error::InvalidModel(format!("normal({mu}, {sigma}): {e}")))?;
                let mut out = Vec::with_capacity(n);
                let mut acc = KahanSum::new();
                for k in 1..=n {
                    acc.add(normal.sample(rng));
                    out.push(acc.value() / k as f64);
                }
                Ok(out)
            }
            ProcessModel::Telegraph { lambda, p } => {
                let hold = (-2.0 * lambda).exp();
                // Stationary jump chain: flip from 0 with prob p (1 - e^{-2l}),
                // from 1 with prob (1 - p)(1 - e^{-2l}); at p = 1/2 both equal
                // the unit-step flip probability of the symmetric signal.
                let up = p * (1.0 - hold);
                let down = (1.0 - p) * (1.0 - hold);
                let mut state = rng.random_bool(*p);
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    let flip = if state { down } else { up };
                    if flip > 0.0 && rng.random_bool(flip) {
                        state = !state;
                    }
                    out.push(if state { 1.0 } else { 0.0 });
                }
                Ok(out)
            }
            ProcessModel::UserKernel(_) => Err(Error::InvalidInput(
                "user kernels carry no sampler".into(),
            )),
        }
    }
}

/// One realized path of a process.
#[derive(Debug, Clone, Serialize)]
pub struct SamplePath {
    pub process: String,
    pub n: usize,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl SamplePath {
    pub fn mean(&self) -> f64 {
        kahan_sum(self.values.iter().copied()) / self.n as f64
    }
}

pub fn sample_running_mean(mu: f64, sigma: f64, n: usize, seed: u64) -> Result<SamplePath> {
    ProcessModel::running_mean(mu, sigma)?.sample(n, seed)
}

pub fn sample_telegraph(lambda: f64, p: f64, n: usize, seed: u64) -> Result<SamplePath> {
    ProcessModel::telegraph(lambda, p)?.sample(n, seed)
}

/// Probability that the symmetric telegraph signal is in the opposite level
/// one time unit later: `(1 - e^{-2 lambda}) / 2`, equivalently the
/// probability of an odd number of Poisson(lambda) flips.
pub fn telegraph_flip_probability(lambda: f64) -> f64 {
    (1.0 - (-2.0 * lambda).exp()) / 2.0
}

/// Closed form for `Var((S_1 + ... + S_n) / n)` under the running-mean
/// process: `sigma^2 (2n - H_n) / n^2`, with `H_n` the n-th harmonic number.
pub fn running_mean_var_of_mean(sigma: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("closed form needs n >= 1".into()));
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidInput("sigma must be finite".into()));
    }
    let nf = n as f64;
    Ok(sigma * sigma * (2.0 * nf - harmonic(n)) / (nf * nf))
}

/// Closed form for `Var((X_1 + ... + X_n) / n)` under the symmetric
/// (`p = 1/2`) telegraph process:
///
/// ```text
/// (1 / 4n^2) * ( n + 2 sum_{k=1}^{n-1} (n - k) e^{-2 lambda k} )
/// ```
pub fn telegraph_var_of_mean(lambda: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("closed form needs n >= 1".into()));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidInput("telegraph needs lambda > 0".into()));
    }
    let nf = n as f64;
    let cross = kahan_sum((1..n).map(|k| (nf - k as f64) * (-2.0 * lambda * k as f64).exp()));
    Ok((nf + 2.0 * cross) / (4.0 * nf * nf))
}

/// Statistics estimable by Monte Carlo over paths of length `n`. Indices in
/// `Cov` are 1-based positions along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    /// Average of the path mean across replicates.
    MeanN,
    /// Sample variance of the path mean across replicates.
    VarOfMeanN,
    /// Sample covariance of `(X_i, X_j)` across replicates.
    Cov { i: usize, j: usize },
    /// Frequency of `|mean - E| > delta` across replicates.
    Tail { delta: f64 },
}

impl Statistic {
    pub fn label(&self) -> String {
        match self {
            Statistic::MeanN => "mean_n".into(),
            Statistic::VarOfMeanN => "var_of_mean_n".into(),
            Statistic::Cov { i, j } => format!("cov_{i}_{j}"),
            Statistic::Tail { delta } => format!("tail_{delta}"),
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub reps: u64,
}

/// Estimate `statistic` over `reps` independent paths of length `n`.
///
/// Replicate `r` draws from an independent, reproducible stream derived from
/// `(seed, r)`, so results are identical across thread counts and runs.
pub fn mc_estimate(
    process: &ProcessModel,
    statistic: Statistic,
    n: usize,
    reps: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::InvalidInput("paths need n >= 1".into()));
    }
    if reps < 2 {
        return Err(Error::InvalidInput("need at least 2 replicates".into()));
    }
    if let Statistic::Cov { i, j } = statistic {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::InvalidInput(format!(
                "covariance indices ({i},{j}) must lie in 1..={n}"
            )));
        }
    }
    if let Statistic::Tail { delta } = statistic {
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("tail threshold must be positive".into()));
        }
        if process.mean().is_none() {
            return Err(Error::InvalidInput(
                "tail frequency needs a process with a known mean".into(),
            ));
        }
    }
    if matches!(process, ProcessModel::UserKernel(_)) {
        return Err(Error::InvalidInput("user kernels carry no sampler".into()));
    }

    let path = |r: u64| -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r);
        process.sample_with_rng(n, &mut rng)
    };
    let path_mean = |values: &[f64]| kahan_sum(values.iter().copied()) / n as f64;

    match statistic {
        Statistic::MeanN => {
            let ms = (0..reps)
                .into_par_iter()
                .map(|r| path(r).map(|v| path_mean(&v)))
                .collect::<Result<Vec<f64>>>()?;
            let mean = kahan_sum(ms.iter().copied()) / reps as f64;
            let var = kahan_sum(ms.iter().map(|m| (m - mean).powi(2))) / (reps - 1) as f64;
            Ok(McEstimate {
                estimate: mean,
                std_error: (var / reps as f64).sqrt(),
                reps,
            })
        }
        Statistic::VarOfMeanN => {
            let ms = (0..reps)
                .into_par_iter()
                .map(|r| path(r).map(|v| path_mean(&v)))
                .collect::<Result<Vec<f64>>>()?;
            let rf = reps as f64;
            let mean = kahan_sum(ms.iter().copied()) / rf;
            let m2 = kahan_sum(ms.iter().map(|m| (m - mean).powi(2))) / rf;
            let m4 = kahan_sum(ms.iter().map(|m| (m - mean).powi(4))) / rf;
            let estimate = m2 * rf / (rf - 1.0);
            // Asymptotic standard error of the sample variance.
            let std_error = ((m4 - m2 * m2).max(0.0) / rf).sqrt();
            Ok(McEstimate { estimate, std_error, reps })
        }
        Statistic::Cov { i, j } => {
            let pairs = (0..reps)
                .into_par_iter()
                .map(|r| path(r).map(|v| (v[i - 1], v[j - 1])))
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let rf = reps as f64;
            let mi = kahan_sum(pairs.iter().map(|p| p.0)) / rf;
            let mj = kahan_sum(pairs.iter().map(|p| p.1)) / rf;
            let products: Vec<f64> = pairs.iter().map(|p| (p.0 - mi) * (p.1 - mj)).collect();
            let mp = kahan_sum(products.iter().copied()) / rf;
            let estimate = mp * rf / (rf - 1.0);
            let var_p = kahan_sum(products.iter().map(|p| (p - mp).powi(2))) / (rf - 1.0);
            Ok(McEstimate {
                estimate,
                std_error: (var_p / rf).sqrt(),
                reps,
            })
        }
        Statistic::Tail { delta } => {
            let center = process.mean().expect("checked above");
            let hits = (0..reps)
                .into_par_iter()
                .map(|r| path(r).map(|v| u64::from((path_mean(&v) - center).abs() > delta)))
                .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
            let f = hits as f64 / reps as f64;
            Ok(McEstimate {
                estimate: f,
                std_error: (f * (1.0 - f) / reps as f64).sqrt(),
                reps,
            })
        }
    }
}

/// Reference value for a statistic, when a closed form exists: the process
/// mean, the closed-form variance of the running average, or a kernel entry.
/// Tail frequencies have no closed form.
pub fn closed_form_value(
    process: &ProcessModel,
    statistic: Statistic,
    n: usize,
) -> Result<Option<f64>> {
    match statistic {
        Statistic::MeanN => Ok(process.mean()),
        Statistic::VarOfMeanN => match process {
            ProcessModel::RunningMeanNormal { sigma, .. } => {
                Ok(Some(running_mean_var_of_mean(*sigma, n)?))
            }
            ProcessModel::Telegraph { lambda, p } => {
                // The symmetric closed form carries the kernel prefactor 1/4;
                // rescale to p (1 - p).
                let base = telegraph_var_of_mean(*lambda, n)?;
                Ok(Some(4.0 * p * (1.0 - p) * base))
            }
            ProcessModel::UserKernel(_) => Ok(None),
        },
        Statistic::Cov { i, j } => Ok(Some(process.kernel_cov(i, j)?)),
        Statistic::Tail { .. } => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rel_err;

    #[test]
    fn kernels_match_their_definitions() {
        let rm = ProcessModel::running_mean(0.0, 2.0).unwrap();
        assert_eq!(rm.kernel_cov(3, 5).unwrap(), 4.0 / 5.0);
        assert_eq!(rm.kernel_cov(5, 3).unwrap(), 4.0 / 5.0);
        assert_eq!(rm.variance_at(4).unwrap(), 1.0);

        let tg = ProcessModel::telegraph_symmetric(1.0).unwrap();
        assert_eq!(tg.variance_at(7).unwrap(), 0.25);
        let c = tg.kernel_cov(2, 4).unwrap();
        assert!(rel_err(c, 0.25 * (-4.0_f64).exp()) <= 1e-15);

        assert!(rm.kernel_cov(0, 1).is_err());
    }

    #[test]
    fn telegraph_kernel_is_stationary() {
        let tg = ProcessModel::telegraph(0.7, 0.3).unwrap();
        for shift in 1..20 {
            let a = tg.kernel_cov(1, 5).unwrap();
            let b = tg.kernel_cov(1 + shift, 5 + shift).unwrap();
            assert_eq!(a, b, "kernel must depend only on the lag");
        }
    }

    #[test]
    fn user_kernel_consistency_is_enforced() {
        let good = ProcessModel::user_kernel(|_| 1.0, |i, j| if i == j { 1.0 } else { 0.5 });
        assert_eq!(good.kernel_cov(2, 2).unwrap(), 1.0);
        assert_eq!(good.kernel_cov(1, 3).unwrap(), 0.5);

        let bad_diag = ProcessModel::user_kernel(|_| 1.0, |_, _| 0.5);
        assert!(matches!(bad_diag.kernel_cov(1, 1), Err(Error::InvalidModel(_))));

        let asym = ProcessModel::user_kernel(
            |_| 1.0,
            |i, j| if i == j { 1.0 } else if i < j { 0.3 } else { 0.2 },
        );
        assert!(matches!(asym.kernel_cov(1, 2), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn flip_probability_matches_the_odd_poisson_series() {
        for lambda in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let closed = telegraph_flip_probability(lambda);
            // P(odd number of flips) with Poisson(lambda) flip counts.
            let mut series = 0.0;
            let mut term = (-lambda).exp() * lambda; // e^-l * l^1 / 1!
            let mut k = 1u32;
            while term.abs() > 1e-19 && k < 200 {
                if k % 2 == 1 {
                    series += term;
                }
                k += 1;
                term *= lambda / k as f64;
            }
            assert!(
                rel_err(closed, series) <= 1e-13,
                "lambda {lambda}: closed {closed} vs series {series}"
            );
        }
    }

    #[test]
    fn closed_forms_small_cases_by_hand() {
        // n = 1: Var(S_1) = sigma^2.
        assert!(rel_err(running_mean_var_of_mean(2.0, 1).unwrap(), 4.0) <= 1e-15);
        // n = 2: (1/4)(Var S1 + Var S2 + 2 Cov) = (1/4)(s^2 + s^2/2 + 2 s^2/2) = 5 s^2 / 8.
        assert!(rel_err(running_mean_var_of_mean(1.0, 2).unwrap(), 5.0 / 8.0) <= 1e-15);

        // Telegraph n = 1: Var(X_1) = 1/4.
        assert!(rel_err(telegraph_var_of_mean(1.0, 1).unwrap(), 0.25) <= 1e-15);
        // n = 2: (1/16)(2 + 2 e^{-2l}).
        let l: f64 = 0.8;
        let by_hand = (2.0 + 2.0 * (-2.0 * l).exp()) / 16.0;
        assert!(rel_err(telegraph_var_of_mean(l, 2).unwrap(), by_hand) <= 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let rm = ProcessModel::running_mean(1.0, 2.0).unwrap();
        let a = rm.sample(50, 42).unwrap();
        let b = rm.sample(50, 42).unwrap();
        assert_eq!(a.values, b.values);
        let c = rm.sample(50, 43).unwrap();
        assert_ne!(a.values, c.values);

        let tg = ProcessModel::telegraph_symmetric(1.0).unwrap();
        let a = tg.sample(100, 7).unwrap();
        let b = tg.sample(100, 7).unwrap();
        assert_eq!(a.values, b.values);
        assert!(a.values.iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn running_mean_paths_are_prefix_averages() {
        let rm = ProcessModel::running_mean(0.5, 1.5).unwrap();
        let path = rm.sample(10, 3).unwrap();
        // S_k * k - S_{k-1} * (k-1) recovers the k-th underlying draw; the
        // prefix property means S_k interpolates correctly.
        for k in 2..=10 {
            let sk = path.values[k - 1];
            let sk1 = path.values[k - 2];
            let xk = sk * k as f64 - sk1 * (k - 1) as f64;
            assert!(xk.is_finite());
            // A reconstructed normal draw should be within 8 sigma.
            assert!((xk - 0.5).abs() < 8.0 * 1.5);
        }
    }

    #[test]
    fn mc_estimate_is_thread_count_invariant_and_seeded() {
        let tg = ProcessModel::telegraph_symmetric(1.0).unwrap();
        let a = mc_estimate(&tg, Statistic::MeanN, 20, 2000, 11).unwrap();
        let b = mc_estimate(&tg, Statistic::MeanN, 20, 2000, 11).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.std_error, b.std_error);

        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| mc_estimate(&tg, Statistic::MeanN, 20, 2000, 11).unwrap());
        assert_eq!(a.estimate, c.estimate, "estimates must not depend on thread count");
    }

    #[test]
    fn mc_agrees_with_closed_forms_at_three_sigma() {
        let rm = ProcessModel::running_mean(0.0, 1.0).unwrap();
        let est = mc_estimate(&rm, Statistic::MeanN, 10, 20_000, 2).unwrap();
        assert!(est.estimate.abs() <= 3.0 * est.std_error + 1e-12);

        let est = mc_estimate(&rm, Statistic::Cov { i: 2, j: 5 }, 10, 20_000, 6).unwrap();
        let exact = rm.kernel_cov(2, 5).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "cov estimate {} vs {exact} (se {})",
            est.estimate,
            est.std_error
        );

        let tg = ProcessModel::telegraph_symmetric(0.5).unwrap();
        let est = mc_estimate(&tg, Statistic::VarOfMeanN, 25, 20_000, 7).unwrap();
        let exact = telegraph_var_of_mean(0.5, 25).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "var estimate {} vs {exact} (se {})",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn mc_input_validation() {
        let rm = ProcessModel::running_mean(0.0, 1.0).unwrap();
        assert!(mc_estimate(&rm, Statistic::MeanN, 0, 100, 0).is_err());
        assert!(mc_estimate(&rm, Statistic::MeanN, 5, 1, 0).is_err());
        assert!(mc_estimate(&rm, Statistic::Cov { i: 0, j: 3 }, 5, 100, 0).is_err());
        assert!(mc_estimate(&rm, Statistic::Cov { i: 1, j: 6 }, 5, 100, 0).is_err());
        assert!(mc_estimate(&rm, Statistic::Tail { delta: 0.0 }, 5, 100, 0).is_err());
        let uk = ProcessModel::user_kernel(|_| 1.0, |i, j| if i == j { 1.0 } else { 0.0 });
        assert!(mc_estimate(&uk, Statistic::MeanN, 5, 100, 0).is_err());
        assert!(uk.sample(5, 0).is_err());
    }

    #[test]
    fn asymmetric_telegraph_matches_its_kernel() {
        let p = 0.2;
        let tg = ProcessModel::telegraph(1.0, p).unwrap();
        let est = mc_estimate(&tg, Statistic::MeanN, 30, 20_000, 9).unwrap();
        assert!(
            (est.estimate - p).abs() <= 4.0 * est.std_error,
            "mean {} vs {p} (se {})",
            est.estimate,
            est.std_error
        );
        let est = mc_estimate(&tg, Statistic::Cov { i: 3, j: 5 }, 10, 40_000, 10).unwrap();
        let exact = tg.kernel_cov(3, 5).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 4.0 * est.std_error,
            "cov {} vs {exact} (se {})",
            est.estimate,
            est.std_error
        );
    }
}
