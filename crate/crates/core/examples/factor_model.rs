//! The lagged factor-model generator with binarization, then OLS recovery of
//! the generating loadings from the real-valued history.

use sbcn::datagen::{binarize, estimate_spec, ground_truth_dag, simulate, simulate_history, FactorModelSpec, ThresholdMode};

fn main() -> sbcn::Result<()> {
    let spec = FactorModelSpec::fama_french(42);
    println!("ground truth: {} arcs over {} variables", ground_truth_dag(&spec).edge_count(), spec.variable_names().len());

    let (factors, returns) = simulate_history(&spec, 3000, 1)?;
    let fit = estimate_spec(&returns, &factors, spec.lag)?;
    println!("\nstock loadings on Km (true vs OLS):");
    for (i, name) in spec.stock_names.iter().enumerate().take(5) {
        println!("  {name:>3}: {:6.3}  {:6.3}", spec.stock_betas[i][0], fit.stock_betas[i][0]);
    }
    println!("market loadings of the child factors (true vs OLS):");
    for c in 1..spec.n_factors() {
        println!("  {:>3}: {:6.3}  {:6.3}", spec.factor_names[c], spec.factor_betas[c][0], fit.factor_betas[c][0]);
    }

    let series = simulate(&spec, 8, 1)?;
    for mode in [ThresholdMode::Median, ThresholdMode::Zero] {
        let data = binarize(&series, mode)?;
        println!("\n{mode:?} threshold, first rows:");
        for r in 0..3 {
            println!("  {:?}", data.row(r));
        }
    }
    Ok(())
}
