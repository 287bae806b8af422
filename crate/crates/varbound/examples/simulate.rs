//! Seeded Monte Carlo for the two built-in processes, compared against the
//! closed forms. Re-running with the same seed reproduces every byte of the
//! estimates regardless of thread count.

use varbound::processes::{
    closed_form_value, mc_estimate, running_mean_var_of_mean, telegraph_var_of_mean,
    ProcessModel, Statistic,
};

fn main() -> varbound::Result<()> {
    let reps = 50_000;
    let seed = 7;
    let n = 20;

    let rm = ProcessModel::running_mean(0.0, 1.0)?;
    let tg = ProcessModel::telegraph_symmetric(1.0)?;

    println!("{:<14} {:<14} {:>12} {:>10} {:>12}", "process", "statistic", "estimate", "se", "closed form");
    for (name, process) in [("running-mean", &rm), ("telegraph", &tg)] {
        for statistic in [Statistic::MeanN, Statistic::VarOfMeanN, Statistic::Cov { i: 2, j: 5 }] {
            let est = mc_estimate(process, statistic, n, reps, seed)?;
            let closed = closed_form_value(process, statistic, n)?;
            println!(
                "{name:<14} {:<14} {:>12.6} {:>10.6} {:>12}",
                statistic.label(),
                est.estimate,
                est.std_error,
                closed.map(|c| format!("{c:.6}")).unwrap_or_default()
            );
        }
    }

    println!(
        "\nclosed forms at n = {n}: running-mean {:.6}, telegraph {:.6}",
        running_mean_var_of_mean(1.0, n)?,
        telegraph_var_of_mean(1.0, n)?
    );

    // Determinism: same seed, same estimate, to the last bit.
    let a = mc_estimate(&tg, Statistic::VarOfMeanN, n, reps, seed)?;
    let b = mc_estimate(&tg, Statistic::VarOfMeanN, n, reps, seed)?;
    assert_eq!(a.estimate, b.estimate);
    println!("\nsame seed twice: {} == {}", a.estimate, b.estimate);

    // A sample path for inspection.
    let path = tg.sample(12, seed)?;
    println!("telegraph path (n=12, seed={seed}): {:?}", path.values);
    Ok(())
}
