//! The exact bound-comparison census behind the `table1` subcommand.
//!
//! Counts, over all tenths-grid weight compositions and variance tuples, the
//! cases where the weighted variance sum strictly exceeds the product bound
//! (sum of squared weights) x (sum of variances). All arithmetic is integer,
//! so ties are exact; rows whose exact counts differ from previously
//! published tallies carry an explanatory note.

use varbound::table1::{run_census, run_table1, GridSpec};

fn main() -> varbound::Result<()> {
    println!("{:>2} {:>12} {:>12} {:>8} {:>8}", "n", "total", "violations", "ties", "ratio%");
    for n in [2, 3, 4] {
        let row = run_table1(n)?;
        println!(
            "{:>2} {:>12} {:>12} {:>8} {:>8.2}",
            row.n, row.total_cases, row.violation_cases, row.tie_cases, row.ratio_percent
        );
        if let Some(note) = &row.note {
            println!("   note: {note}");
        }
    }

    // The census generalizes to other grids: fewer variance levels, coarser
    // weight budget.
    let custom = GridSpec::new(3, 6, 8)?;
    let row = run_census(&custom)?;
    println!(
        "\ncustom grid (weights sum to 6 in sixths, 8 variance levels): \
         {} of {} cases ({:.2}%)",
        row.violation_cases, row.total_cases, row.ratio_percent
    );
    Ok(())
}
