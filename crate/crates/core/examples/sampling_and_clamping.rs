//! Ancestral sampling from a learned model, then the same model with all
//! factors clamped down: the distribution of stocks going up shifts left.

use std::collections::BTreeMap;

use sbcn::datagen::fama_french_instance;
use sbcn::sampling::{ancestral_sample, stress_sample};
use sbcn::stress::{factor_variables, stock_variables};
use sbcn::{learn_sbcn, LearnOptions, Scenario};

fn histogram(scenarios: &[Scenario], stocks: &[usize]) -> Vec<usize> {
    let mut h = vec![0; stocks.len() + 1];
    for s in scenarios {
        h[stocks.iter().filter(|&&v| s.assignment[v] == 1).count()] += 1;
    }
    h
}

fn main() -> sbcn::Result<()> {
    let (_, _, data) = fama_french_instance(5000, 9)?;
    let model = learn_sbcn(&data, &LearnOptions { seed: 9, ..Default::default() });
    let stocks = stock_variables(&model);

    let down: BTreeMap<usize, u8> = factor_variables(&model).into_iter().map(|v| (v, 0)).collect();
    let free = histogram(&ancestral_sample(&model, 100, 1), &stocks);
    let stressed = histogram(&stress_sample(&model, &down, 100, 1)?, &stocks);

    println!("stocks up | original | factors clamped to 0");
    for k in 0..=stocks.len() {
        println!("{k:>9} | {:>8} | {:>4} {}", free[k], stressed[k], "#".repeat(stressed[k]));
    }
    Ok(())
}
