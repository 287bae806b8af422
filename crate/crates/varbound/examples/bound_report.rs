//! Exact variance of a weighted sum and every applicable upper bound.
//!
//! Builds a three-variable instance with mixed correlations, prints the
//! exact variance, the weight class, and the full bound table with slacks,
//! then does the same for a JSON instance string (the format the
//! `bounds --instance` subcommand reads).

use varbound::bounds::{bound_report, BoundKind};
use varbound::model::{CorrelationMatrix, CovarianceModel, Instance, VarianceProfile, WeightVector};
use varbound::report::fmt_float;

fn main() -> varbound::Result<()> {
    let weights = WeightVector::new(vec![0.5, 0.3, 0.2])?;
    let profile = VarianceProfile::new(vec![1.0, 2.0, 0.5])?;
    let correlation = CorrelationMatrix::new(&[
        vec![1.0, 0.6, -0.2],
        vec![0.6, 1.0, 0.1],
        vec![-0.2, 0.1, 1.0],
    ])?;
    let model = CovarianceModel::new(profile, correlation)?;

    let report = bound_report(&weights, &model)?;
    println!("weight class: {}", report.weight_class.name());
    println!("exact variance: {}", fmt_float(report.exact));
    println!();
    println!("{:<22} {:>10} {:>18} {:>18}", "bound", "applies", "value", "slack");
    for kind in BoundKind::ALL {
        let entry = report.entry(kind);
        println!(
            "{:<22} {:>10} {:>18} {:>18}",
            kind.tag(),
            entry.applicable,
            entry.value.map(fmt_float).unwrap_or_default(),
            entry.slack.map(fmt_float).unwrap_or_default(),
        );
    }

    // Weights summing to at most one admit a three-term chain around the
    // weighted variance sum.
    if let Some(chain) = &report.abs_sum_chain {
        println!();
        println!(
            "chain: {} <= {} <= {}",
            fmt_float(chain.tightest),
            fmt_float(chain.middle),
            fmt_float(chain.loosest)
        );
    }

    // The same computation from the JSON instance format.
    let json = r#"{
        "weights": [0.5, 0.5],
        "variances": [1.0, 1.0],
        "correlation": [[1.0, 1.0], [1.0, 1.0]]
    }"#;
    let (w, m) = Instance::from_json(json)?.resolve()?;
    let report = bound_report(&w, &m)?;
    println!();
    println!(
        "fully correlated half/half instance: exact {} (simplex bound {})",
        fmt_float(report.exact),
        fmt_float(report.entry(BoundKind::SimplexWeighted).value.unwrap())
    );
    Ok(())
}
