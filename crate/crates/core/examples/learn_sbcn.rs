//! Learn an SBCN and a plain Bayesian network from simulated
//! factor-model data and score both against the generating graph.
//!
//!     cargo run --release --example learn_sbcn -- [rows] [seed]

use sbcn::datagen::fama_french_instance;
use sbcn::evaluation::arc_contingency;
use sbcn::{learn_bn, learn_sbcn, LearnOptions};

fn main() -> sbcn::Result<()> {
    let mut args = std::env::args().skip(1);
    let rows: usize = args.next().map_or(1000, |a| a.parse().expect("rows"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let (_, truth, data) = fama_french_instance(rows, seed)?;
    let options = LearnOptions { seed, ..Default::default() };

    for (name, model) in [("sbcn", learn_sbcn(&data, &options)), ("bn", learn_bn(&data, &options))] {
        let s = arc_contingency(model.dag(), &truth)?;
        println!(
            "{name:>4}: {:3} arcs  tp {:2}  fp {:3}  fn {:2}  FP {:5.1}%  FN {:5.1}%",
            model.dag().edge_count(),
            s.tp,
            s.fp,
            s.fn_,
            100.0 * s.fp_rate_of_inferred,
            100.0 * s.fn_rate_of_true
        );
    }

    let model = learn_sbcn(&data, &options);
    let names = model.names();
    println!("\narcs out of the market factor:");
    for &c in model.dag().children(0) {
        let cpt = model.cpt(c);
        println!("  {} -> {:<4} ({} parents, {} CPT rows)", names[0], names[c], cpt.parents.len(), cpt.table.len());
    }
    Ok(())
}
