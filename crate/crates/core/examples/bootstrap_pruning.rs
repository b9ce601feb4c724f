//! Arc confidence by bootstrap resampling and pruning at a threshold.
//!
//!     cargo run --release --example bootstrap_pruning -- [rows] [replicates]

use sbcn::bootstrap::learn_with_bootstrap;
use sbcn::datagen::fama_french_instance;
use sbcn::evaluation::arc_contingency;
use sbcn::{learn_sbcn, LearnOptions, Learner};

fn main() -> sbcn::Result<()> {
    let mut args = std::env::args().skip(1);
    let rows: usize = args.next().map_or(250, |a| a.parse().expect("rows"));
    let replicates: usize = args.next().map_or(100, |a| a.parse().expect("replicates"));

    let (_, truth, data) = fama_french_instance(rows, 3)?;
    let options = LearnOptions { seed: 3, ..Default::default() };
    let full = learn_sbcn(&data, &options);
    let (pruned, report) = learn_with_bootstrap(&data, Learner::Sbcn, &options, replicates, 0.5);

    let names = data.names();
    println!("confidence of the learned arcs ({replicates} replicates):");
    let mut arcs: Vec<_> = full.dag().edges().map(|(u, v)| (report.confidence_of(u, v), u, v)).collect();
    arcs.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (c, u, v) in arcs.iter().take(8).chain(arcs.iter().rev().take(4)) {
        let tag = if truth.has_edge(*u, *v) { "true" } else { "spurious" };
        println!("  {:>4} -> {:<4} {c:.2}  {tag}", names[*u], names[*v]);
    }

    for (label, model) in [("before pruning", &full), ("after pruning ", &pruned)] {
        let s = arc_contingency(model.dag(), &truth)?;
        println!("{label}: {:3} arcs, FP {:5.1}%, FN {:5.1}%", model.dag().edge_count(), 100.0 * s.fp_rate_of_inferred, 100.0 * s.fn_rate_of_true);
    }
    Ok(())
}
