//! A small experiment grid laid out as FP/FN tables per learner, plus the
//! ROC points of each cell and their upper envelope.
//!
//!     cargo run --release --example roc_sweep -- [repetitions]

use sbcn::datagen::Generator;
use sbcn::evaluation::{roc_upper_envelope, run_sweep, SweepConfig};
use sbcn::learn::Penalty;
use sbcn::{Criterion, Learner};

fn main() -> sbcn::Result<()> {
    let repetitions: usize = std::env::args().nth(1).map_or(10, |a| a.parse().expect("repetitions"));
    let config = SweepConfig {
        sample_sizes: vec![250, 1000, 5000],
        criteria: vec![Criterion::Bic, Criterion::Aic],
        bootstrap: vec![false, true],
        learners: vec![Learner::Sbcn, Learner::Bn],
        generator: Generator::FamaFrench,
        repetitions,
        seed: 2024,
        replicates: 20,
        threshold: 0.5,
        max_iterations: 10_000,
        restarts: 0,
        penalty: Penalty::Arcs,
    };
    let report = run_sweep(&config)?;
    print!("{}", report.to_table());

    let points: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.fpr, r.tpr)).collect();
    println!("\nROC envelope (fpr, tpr):");
    for (x, y) in roc_upper_envelope(&points) {
        println!("  {x:.4}  {y:.3}");
    }
    Ok(())
}
