//! Principal minors of diag(a) - a a^T and the PSD decision.
//!
//! For weights on the probability simplex every principal minor of this
//! matrix equals (prod of the chosen weights) * (1 - their sum), which is
//! non-negative, and that is exactly why the weighted-variance bound holds.
//! The example evaluates the closed form against direct determinants and
//! then shows a witness for a weight vector outside the simplex.

use varbound::bounds::{check_weight_gram_psd, principal_minor, PsdCheck, WeightGramComplement};
use varbound::model::WeightVector;

fn main() -> varbound::Result<()> {
    let w = WeightVector::new(vec![0.5, 0.3, 0.2])?;
    let gram = WeightGramComplement::new(&w);

    println!("matrix diag(a) - a a^T for a = (0.5, 0.3, 0.2):");
    let m = gram.matrix();
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| format!("{:+.4}", m[(i, j)])).collect();
        println!("  [{}]", row.join("  "));
    }

    println!();
    println!("{:<14} {:>14} {:>14}", "subset", "closed form", "determinant");
    for subset in [vec![0], vec![1], vec![0, 1], vec![0, 2], vec![0, 1, 2]] {
        let closed = principal_minor(&w, &subset)?;
        let det = gram.principal_submatrix(&subset)?.determinant();
        println!("{:<14} {:>14.8} {:>14.8}", format!("{subset:?}"), closed, det);
    }

    match check_weight_gram_psd(&w)? {
        PsdCheck::Psd => println!("\nverdict: positive semidefinite (simplex weights)"),
        PsdCheck::NotPsd(witness) => println!("\nunexpected: {witness:?}"),
    }

    // Overweight vector: the pair minor goes negative and the check names it.
    let heavy = WeightVector::new(vec![0.8, 0.8])?;
    match check_weight_gram_psd(&heavy)? {
        PsdCheck::Psd => println!("unexpected: heavy weights reported PSD"),
        PsdCheck::NotPsd(witness) => {
            println!("a = (0.8, 0.8) is not PSD; witness: {witness:?}")
        }
    }
    Ok(())
}
