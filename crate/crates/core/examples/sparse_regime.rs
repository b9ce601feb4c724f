//! The sparse random factor model at 250 rows, learned with bootstrap
//! pruning under both penalty conventions and both loading-sign settings.

use sbcn::datagen::{Generator, SparseConfig};
use sbcn::evaluation::{run_sweep, SweepConfig};
use sbcn::learn::Penalty;
use sbcn::{Criterion, Learner};

fn main() -> sbcn::Result<()> {
    for signed in [true, false] {
        for penalty in [Penalty::Arcs, Penalty::Parameters] {
            let report = run_sweep(&SweepConfig {
                sample_sizes: vec![250],
                criteria: vec![Criterion::Bic],
                bootstrap: vec![true],
                learners: vec![Learner::Sbcn],
                generator: Generator::Sparse(SparseConfig { signed, ..Default::default() }),
                repetitions: 10,
                seed: 17,
                replicates: 50,
                threshold: 0.5,
                max_iterations: 10_000,
                restarts: 0,
                penalty,
            })?;
            let r = &report.rows[0];
            println!(
                "signed loadings {signed:<5}  penalty {:<10}  FP {:5.1}%  FN {:5.1}%",
                format!("{penalty:?}"),
                100.0 * r.fp_rate_of_inferred,
                100.0 * r.fn_rate_of_true
            );
        }
    }
    Ok(())
}
