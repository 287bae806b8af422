//! Weak-law sufficient conditions evaluated over a grid of sample sizes.
//!
//! Two fixtures make the point. The running mean of iid normals has
//! variances 1/i whose average is H_n/n -> 0, so the simple mean-of-variances
//! condition certifies convergence. The telegraph signal has constant
//! variance 1/4, so that condition fails; its covariances decay
//! geometrically though, and the two-sided covariance budget certifies the
//! weak law anyway. The numeric condition codes match the CLI flags.

use varbound::lln::{default_grid, diagnose, LlnCondition, DEFAULT_THRESHOLD};
use varbound::processes::ProcessModel;

fn show(name: &str, process: &ProcessModel, condition: LlnCondition) -> varbound::Result<()> {
    let grid = default_grid(512)?;
    let d = diagnose(process, condition, &grid, DEFAULT_THRESHOLD)?;
    let (n_last, v_last) = *d.samples.last().unwrap();
    println!(
        "{name:<14} {:<20} -> {:<15} (value at n={n_last}: {v_last:.6})",
        d.condition.label(),
        d.verdict.name()
    );
    if let Some(budget) = &d.budget {
        println!(
            "{:14} variance branch: {:?}, covariance branch: {:?}",
            "",
            budget.variance_branch.map(|b| b.name()),
            budget.covariance_branch.map(|b| b.name())
        );
    }
    Ok(())
}

fn main() -> varbound::Result<()> {
    let running_mean = ProcessModel::running_mean(0.0, 1.0)?;
    let telegraph = ProcessModel::telegraph_symmetric(1.0)?;

    show("running-mean", &running_mean, LlnCondition::VarOfMean)?;
    show("running-mean", &running_mean, LlnCondition::MeanOfVariances)?;
    show("running-mean", &running_mean, LlnCondition::PowerMean { s: 2.0 })?;

    println!();
    show("telegraph", &telegraph, LlnCondition::VarOfMean)?;
    show("telegraph", &telegraph, LlnCondition::MeanOfVariances)?;
    show(
        "telegraph",
        &telegraph,
        LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 },
    )?;

    // A sequence that genuinely does not obey the weak law: perfectly
    // correlated unit-variance variables. Every branch fails.
    println!();
    let constant = ProcessModel::user_kernel(|_| 1.0, |_, _| 1.0);
    show(
        "constant",
        &constant,
        LlnCondition::CovarianceBudget { s: 0.5, cap: 1.0 },
    )?;
    Ok(())
}
