//! Command-line front end. Each subcommand maps onto one library module and
//! writes either CSV (12 significant digits, header row always present) or
//! pretty JSON to stdout or to `--output`.
//!
//! Exit codes: 0 on success, 2 for invalid input or flags, 3 when a
//! mathematical invariant is violated (an applicable bound exceeded beyond
//! tolerance, or a failing `verify` run).

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{bound_report, BoundChain, BoundKind};
use crate::error::{Error, Result};
use crate::lln::{default_grid, diagnose, LlnCondition, DEFAULT_THRESHOLD};
use crate::model::{Instance, VarianceProfile};
use crate::processes::{closed_form_value, mc_estimate, ProcessModel, Statistic};
use crate::report::{fmt_float, fmt_percent2, io_err, to_json_pretty, write_csv_line};
use crate::table1::run_table1;
use crate::tails::{empirical_tail, is_vacuous, tail_bound_mean, tail_bound_weighted};
use crate::verify::run_all;

#[derive(Debug, Parser)]
#[command(
    name = "varbound",
    version,
    about = "Variance bounds, tail bounds, and weak-law diagnostics for correlated sums"
)]
pub struct Cli {
    /// Cap on worker threads for parallel operations (0 keeps the default).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessName {
    /// Prefix averages of independent normal draws.
    RunningMean,
    /// Two-state jump process observed on an integer time grid.
    Telegraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticName {
    #[value(name = "mean_n")]
    MeanN,
    #[value(name = "var_of_mean_n")]
    VarOfMeanN,
    #[value(name = "cov")]
    Cov,
    #[value(name = "tail")]
    Tail,
}

/// Process parameters shared by the sampling subcommands.
#[derive(Debug, Clone, Copy, clap::Args)]
pub struct ProcessParams {
    /// Jump rate of the telegraph process.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Stationary probability of state 1 for the telegraph process.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Standard deviation of each normal draw for the running mean.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Mean of each normal draw for the running mean.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
}

impl ProcessParams {
    fn build(&self, name: ProcessName) -> Result<ProcessModel> {
        match name {
            ProcessName::RunningMean => ProcessModel::running_mean(self.mu, self.sigma),
            ProcessName::Telegraph => ProcessModel::telegraph(self.lambda, self.p),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact variance of a weighted sum plus every applicable upper bound.
    Bounds {
        /// JSON instance file with weights, variances, and correlation.
        #[arg(long)]
        instance: PathBuf,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Chebyshev-style tail bound, optionally checked against simulation.
    Tails {
        /// JSON instance file; mutually exclusive with --process.
        #[arg(long, conflicts_with = "process")]
        instance: Option<PathBuf>,
        /// Deviation threshold (must be positive).
        #[arg(long)]
        delta: f64,
        /// Also estimate the exceedance frequency by simulation.
        #[arg(long, requires = "process")]
        empirical: bool,
        /// Named process whose mean is bounded.
        #[arg(long, value_enum, requires = "n")]
        process: Option<ProcessName>,
        /// Number of observations averaged.
        #[arg(long)]
        n: Option<usize>,
        /// Number of independent replicates for --empirical.
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        /// Base seed; replicate r uses stream r of the generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: ProcessParams,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Weak-law sufficient-condition diagnostics over a grid of n.
    Lln {
        #[arg(long, value_enum)]
        process: ProcessName,
        /// Condition code: 25, 28, 30, or 36.
        #[arg(long)]
        condition: u32,
        /// Largest n in the diagnostic grid.
        #[arg(long = "n-max", default_value_t = 256)]
        n_max: usize,
        /// Exponent for condition 30 (power mean) or 36 (growth order).
        #[arg(long)]
        s: Option<f64>,
        /// Convergence threshold on the final sample.
        #[arg(long)]
        threshold: Option<f64>,
        /// Uniform cap used by condition 36.
        #[arg(long)]
        cap: Option<f64>,
        #[command(flatten)]
        params: ProcessParams,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Seeded Monte Carlo estimate of a process statistic.
    Simulate {
        #[arg(long, value_enum)]
        process: ProcessName,
        /// Horizon: the statistic is taken over steps 1..=n.
        #[arg(long)]
        n: usize,
        /// Number of independent replicates.
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        /// Base seed; replicate r uses stream r of the generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        statistic: StatisticName,
        /// First index for the covariance statistic (1-based).
        #[arg(long)]
        i: Option<usize>,
        /// Second index for the covariance statistic (1-based).
        #[arg(long)]
        j: Option<usize>,
        /// Threshold for the tail statistic.
        #[arg(long)]
        delta: Option<f64>,
        #[command(flatten)]
        params: ProcessParams,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Exact integer census of bound crossings on the tenths grid.
    Table1 {
        /// Number of summands (weights summing to 1 in tenths).
        #[arg(long)]
        n: usize,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run every named invariant check and print one line per result.
    Verify {
        /// Seed for the randomized property checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses argv, runs the command, and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if cli.workers > 0 {
        // Ignore the error: the global pool can only be set once, which is
        // fine when tests invoke run() repeatedly.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let result = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(file) => {
                let mut out = io::BufWriter::new(file);
                dispatch(&cli.command, &mut out).and_then(|code| {
                    out.flush().map_err(io_err)?;
                    Ok(code)
                })
            }
            Err(e) => Err(Error::InvalidInput(format!(
                "cannot create {}: {e}",
                path.display()
            ))),
        },
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            dispatch(&cli.command, &mut out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one subcommand, writing its report to `out`.
pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Bounds { instance, format } => cmd_bounds(instance, *format, out),
        Command::Tails {
            instance,
            delta,
            empirical,
            process,
            n,
            reps,
            seed,
            params,
            format,
        } => cmd_tails(
            instance.as_deref(),
            *delta,
            *empirical,
            *process,
            *n,
            *reps,
            *seed,
            params,
            *format,
            out,
        ),
        Command::Lln {
            process,
            condition,
            n_max,
            s,
            threshold,
            cap,
            params,
            format,
        } => cmd_lln(*process, *condition, *n_max, *s, *threshold, *cap, params, *format, out),
        Command::Simulate {
            process,
            n,
            reps,
            seed,
            statistic,
            i,
            j,
            delta,
            params,
            format,
        } => cmd_simulate(
            *process, *n, *reps, *seed, *statistic, *i, *j, *delta, params, *format, out,
        ),
        Command::Table1 { n, format } => cmd_table1(*n, *format, out),
        Command::Verify { seed } => cmd_verify(*seed, out),
    }
}

fn read_instance(path: &std::path::Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
    })?;
    Instance::from_json(&text)
}

fn opt_field(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn chain_json(chain: &Option<BoundChain>) -> serde_json::Value {
    match chain {
        Some(c) => json!({
            "tightest": c.tightest,
            "middle": c.middle,
            "loosest": c.loosest,
        }),
        None => serde_json::Value::Null,
    }
}

fn cmd_bounds(path: &std::path::Path, format: OutputFormat, out: &mut dyn Write) -> Result<i32> {
    let (weights, model) = read_instance(path)?.resolve()?;
    let report = bound_report(&weights, &model)?;
    match format {
        OutputFormat::Csv => {
            write_csv_line(out, &["tag", "applicable", "value", "slack"])?;
            for kind in BoundKind::ALL {
                let entry = report.entry(kind);
                write_csv_line(
                    out,
                    &[
                        kind.tag(),
                        if entry.applicable { "true" } else { "false" },
                        &opt_field(entry.value),
                        &opt_field(entry.slack),
                    ],
                )?;
            }
        }
        OutputFormat::Json => {
            let entries: Vec<serde_json::Value> = BoundKind::ALL
                .iter()
                .map(|&kind| {
                    let entry = report.entry(kind);
                    json!({
                        "tag": kind.tag(),
                        "applicable": entry.applicable,
                        "value": entry.value,
                        "slack": entry.slack,
                    })
                })
                .collect();
            let doc = json!({
                "exact": report.exact,
                "weight_class": report.weight_class.name(),
                "hypothetical": report.hypothetical,
                "entries": entries,
                "abs_sum_chain": chain_json(&report.abs_sum_chain),
                "uncorrelated_chain": chain_json(&report.uncorrelated_chain),
            });
            writeln!(out, "{}", to_json_pretty(&doc)?).map_err(io_err)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_tails(
    instance: Option<&std::path::Path>,
    delta: f64,
    empirical: bool,
    process: Option<ProcessName>,
    n: Option<usize>,
    reps: u64,
    seed: u64,
    params: &ProcessParams,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let bound = match (instance, process) {
        (Some(path), None) => {
            let (weights, model) = read_instance(path)?.resolve()?;
            tail_bound_weighted(&weights, model.profile(), delta)?
        }
        (None, Some(name)) => {
            let n = n.ok_or_else(|| {
                Error::InvalidInput("--process requires --n".to_string())
            })?;
            let proc = params.build(name)?;
            let vars = (1..=n)
                .map(|i| proc.variance_at(i))
                .collect::<Result<Vec<f64>>>()?;
            let profile = VarianceProfile::new(vars)?;
            tail_bound_mean(&profile, delta, true)?
        }
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --instance or --process".to_string(),
            ))
        }
    };

    let empirical_result = if empirical {
        let name = process.expect("clap enforces --empirical requires --process");
        let n = n.expect("clap enforces --process requires --n");
        let proc = params.build(name)?;
        Some(empirical_tail(&proc, n, delta, reps, seed)?)
    } else {
        None
    };

    match format {
        OutputFormat::Csv => {
            write_csv_line(out, &["delta", "bound", "frequency", "std_error", "vacuous"])?;
            write_csv_line(
                out,
                &[
                    &fmt_float(delta),
                    &fmt_float(bound),
                    &opt_field(empirical_result.as_ref().map(|e| e.frequency)),
                    &opt_field(empirical_result.as_ref().map(|e| e.std_error)),
                    if is_vacuous(bound) { "true" } else { "false" },
                ],
            )?;
        }
        OutputFormat::Json => {
            let doc = json!({
                "delta": delta,
                "bound": bound,
                "vacuous": is_vacuous(bound),
                "frequency": empirical_result.as_ref().map(|e| e.frequency),
                "std_error": empirical_result.as_ref().map(|e| e.std_error),
                "exceed_count": empirical_result.as_ref().map(|e| e.exceed_count),
                "reps": empirical_result.as_ref().map(|e| e.reps),
            });
            writeln!(out, "{}", to_json_pretty(&doc)?).map_err(io_err)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_lln(
    process: ProcessName,
    condition: u32,
    n_max: usize,
    s: Option<f64>,
    threshold: Option<f64>,
    cap: Option<f64>,
    params: &ProcessParams,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let condition = match condition {
        25 => LlnCondition::VarOfMean,
        28 => LlnCondition::MeanOfVariances,
        30 => LlnCondition::PowerMean { s: s.unwrap_or(1.0) },
        36 => LlnCondition::CovarianceBudget {
            s: s.unwrap_or(0.5),
            cap: cap.unwrap_or(1.0),
        },
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown condition code {other}; use 25, 28, 30, or 36"
            )))
        }
    };
    let proc = params.build(process)?;
    let grid = default_grid(n_max)?;
    let diagnostic = diagnose(&proc, condition, &grid, threshold.unwrap_or(DEFAULT_THRESHOLD))?;

    match format {
        OutputFormat::Csv => {
            if diagnostic.bounds.is_some() {
                write_csv_line(out, &["n", "value", "bound"])?;
            } else {
                write_csv_line(out, &["n", "value"])?;
            }
            for (idx, &(n, value)) in diagnostic.samples.iter().enumerate() {
                let n_str = n.to_string();
                let v_str = fmt_float(value);
                match &diagnostic.bounds {
                    Some(bounds) => {
                        write_csv_line(out, &[&n_str, &v_str, &fmt_float(bounds[idx])])?
                    }
                    None => write_csv_line(out, &[&n_str, &v_str])?,
                }
            }
            write_csv_line(out, &["verdict", diagnostic.verdict.name()])?;
        }
        OutputFormat::Json => {
            let budget = diagnostic.budget.as_ref().map(|b| {
                json!({
                    "variance_trend": b.variance_trend.name(),
                    "variance_branch": b.variance_branch.map(|x| x.name()),
                    "covariance_branch": b.covariance_branch.map(|x| x.name()),
                    "variance_series": b.variance_series,
                    "covariance_series": b.covariance_series,
                })
            });
            let doc = json!({
                "condition": diagnostic.condition.label(),
                "threshold": diagnostic.threshold,
                "verdict": diagnostic.verdict.name(),
                "samples": diagnostic.samples,
                "bounds": diagnostic.bounds,
                "budget": budget,
            });
            writeln!(out, "{}", to_json_pretty(&doc)?).map_err(io_err)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    process: ProcessName,
    n: usize,
    reps: u64,
    seed: u64,
    statistic: StatisticName,
    i: Option<usize>,
    j: Option<usize>,
    delta: Option<f64>,
    params: &ProcessParams,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let statistic = match statistic {
        StatisticName::MeanN => Statistic::MeanN,
        StatisticName::VarOfMeanN => Statistic::VarOfMeanN,
        StatisticName::Cov => {
            let i = i.ok_or_else(|| Error::InvalidInput("cov requires --i".to_string()))?;
            let j = j.ok_or_else(|| Error::InvalidInput("cov requires --j".to_string()))?;
            Statistic::Cov { i, j }
        }
        StatisticName::Tail => {
            let delta = delta
                .ok_or_else(|| Error::InvalidInput("tail requires --delta".to_string()))?;
            Statistic::Tail { delta }
        }
    };
    let proc = params.build(process)?;
    let estimate = mc_estimate(&proc, statistic, n, reps, seed)?;
    let closed = closed_form_value(&proc, statistic, n)?;
    let abs_error = closed.map(|c| (estimate.estimate - c).abs());

    match format {
        OutputFormat::Csv => {
            write_csv_line(
                out,
                &["statistic", "estimate", "std_error", "closed_form", "abs_error"],
            )?;
            write_csv_line(
                out,
                &[
                    &statistic.label(),
                    &fmt_float(estimate.estimate),
                    &fmt_float(estimate.std_error),
                    &opt_field(closed),
                    &opt_field(abs_error),
                ],
            )?;
        }
        OutputFormat::Json => {
            let doc = json!({
                "statistic": statistic.label(),
                "estimate": estimate.estimate,
                "std_error": estimate.std_error,
                "reps": estimate.reps,
                "closed_form": closed,
                "abs_error": abs_error,
            });
            writeln!(out, "{}", to_json_pretty(&doc)?).map_err(io_err)?;
        }
    }
    Ok(0)
}

fn cmd_table1(n: usize, format: OutputFormat, out: &mut dyn Write) -> Result<i32> {
    let row = run_table1(n)?;
    match format {
        OutputFormat::Csv => {
            write_csv_line(out, &["n", "total", "violations", "ratio_percent"])?;
            write_csv_line(
                out,
                &[
                    &row.n.to_string(),
                    &row.total_cases.to_string(),
                    &row.violation_cases.to_string(),
                    &fmt_percent2(row.ratio_percent),
                ],
            )?;
            if let Some(note) = &row.note {
                write_csv_line(out, &["note", note])?;
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "n": row.n,
                "total": row.total_cases,
                "violations": row.violation_cases,
                "ties": row.tie_cases,
                "ratio_percent": row.ratio_percent,
                "note": row.note,
            });
            writeln!(out, "{}", to_json_pretty(&doc)?).map_err(io_err)?;
        }
    }
    Ok(0)
}

fn cmd_verify(seed: u64, out: &mut dyn Write) -> Result<i32> {
    let outcomes = run_all(seed);
    let mut failed = 0usize;
    for outcome in &outcomes {
        writeln!(out, "{}", outcome.render()).map_err(io_err)?;
        if !outcome.passed {
            failed += 1;
        }
    }
    writeln!(out, "{} checks, {} failed", outcomes.len(), failed).map_err(io_err)?;
    Ok(if failed == 0 { 0 } else { 3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn table1_csv_layout() {
        let mut buf = Vec::new();
        let code = dispatch(
            &Command::Table1 { n: 2, format: OutputFormat::Csv },
            &mut buf,
        )
        .expect("census runs");
        assert_eq!(code, 0);
        let text = String::from_utf8(buf).expect("utf8");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,total,violations,ratio_percent"));
        assert_eq!(lines.next(), Some("2,3600,518,14.39"));
        let note = lines.next().expect("note row");
        assert!(note.starts_with("note,"), "{note}");
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn unknown_condition_is_invalid_input() {
        let mut buf = Vec::new();
        let err = dispatch(
            &Command::Lln {
                process: ProcessName::Telegraph,
                condition: 99,
                n_max: 16,
                s: None,
                threshold: None,
                cap: None,
                params: ProcessParams { lambda: 1.0, p: 0.5, sigma: 1.0, mu: 0.0 },
                format: OutputFormat::Csv,
            },
            &mut buf,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn simulate_csv_has_closed_form_column() {
        let mut buf = Vec::new();
        dispatch(
            &Command::Simulate {
                process: ProcessName::Telegraph,
                n: 4,
                reps: 200,
                seed: 1,
                statistic: StatisticName::MeanN,
                i: None,
                j: None,
                delta: None,
                params: ProcessParams { lambda: 1.0, p: 0.5, sigma: 1.0, mu: 0.0 },
                format: OutputFormat::Csv,
            },
            &mut buf,
        )
        .expect("simulation runs");
        let text = String::from_utf8(buf).expect("utf8");
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("statistic,estimate,std_error,closed_form,abs_error")
        );
        let row = lines.next().expect("data row");
        assert!(row.starts_with("mean_n,"));
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        let estimate: f64 = fields[1].parse().expect("numeric estimate");
        assert!((0.0..=1.0).contains(&estimate));
        assert_eq!(fields[3], "0.500000000000");
    }
}
