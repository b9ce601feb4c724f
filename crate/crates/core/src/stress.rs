//! End-to-end stress scenario generation: sample the model, label
//! scenarios by portfolio risk, learn a tree over the factors, and clamp
//! the model to a risky path before sampling again.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classifier::{label_scenarios, learn_tree, DecisionTree, Features, Label, Portfolio, TreeParams};
use crate::error::{Error, Result};
use crate::model::{SbcnModel, Scenario};
use crate::rng::derive_seed;
use crate::sampling::{ancestral_sample, stress_sample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StressConfig {
    pub samples_for_tree: usize,
    pub risky_fraction: f64,
    /// Which risky path (depth-first, value-0 branches first) to clamp.
    pub path_index: usize,
    pub count: usize,
    pub tree: TreeParams,
}

impl Default for StressConfig {
    fn default() -> Self {
        Self {
            samples_for_tree: 1000,
            risky_fraction: 0.10,
            path_index: 0,
            count: 100,
            tree: TreeParams::default(),
        }
    }
}

/// Variables with the lowest rank in the model.
pub fn factor_variables(model: &SbcnModel) -> Vec<usize> {
    let min = model.rank().iter().copied().min().unwrap_or(0);
    (0..model.n()).filter(|&v| model.rank()[v] == min).collect()
}

/// Every variable that is not a factor.
pub fn stock_variables(model: &SbcnModel) -> Vec<usize> {
    let factors = factor_variables(model);
    (0..model.n()).filter(|v| !factors.contains(v)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressPlan {
    pub tree: DecisionTree,
    pub risky_paths: Vec<BTreeMap<usize, u8>>,
    /// Scenarios labeled risky while training the tree.
    pub risky_labeled: usize,
}

/// Sample `samples_for_tree` scenarios, label them against an
/// equal-weight long portfolio of all stocks, and learn the tree.
pub fn plan_stress(model: &SbcnModel, config: &StressConfig, seed: u64) -> Result<StressPlan> {
    let factors = factor_variables(model);
    let stocks = stock_variables(model);
    if stocks.is_empty() {
        return Err(Error::Invalid("model has no stock variables (all ranks equal)".into()));
    }
    if config.samples_for_tree == 0 {
        return Err(Error::Invalid("need at least one scenario to train the tree".into()));
    }
    let scenarios = ancestral_sample(model, config.samples_for_tree, derive_seed(seed, 1));
    let labels = label_scenarios(&scenarios, &Portfolio::equal(stocks), config.risky_fraction)?;
    let rows: Vec<Vec<u8>> = scenarios.into_iter().map(|s| s.assignment).collect();
    let names: Vec<String> = factors.iter().map(|&v| model.names()[v].clone()).collect();
    let tree = learn_tree(
        Features {
            variables: &factors,
            names: &names,
            rows: &rows,
        },
        &labels,
        &config.tree,
    )?;
    Ok(StressPlan {
        risky_paths: tree.risky_paths(),
        risky_labeled: labels.iter().filter(|&&l| l == Label::Risky).count(),
        tree,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressOutcome {
    pub plan: StressPlan,
    pub clamped: BTreeMap<usize, u8>,
    pub scenarios: Vec<Scenario>,
}

/// Plan, pick `config.path_index`, and draw `config.count` clamped scenarios.
pub fn run_stress(model: &SbcnModel, config: &StressConfig, seed: u64) -> Result<StressOutcome> {
    let plan = plan_stress(model, config, seed)?;
    if plan.risky_paths.is_empty() {
        return Err(Error::Invalid("the decision tree has no risky leaf to clamp".into()));
    }
    let clamped = plan
        .risky_paths
        .get(config.path_index)
        .cloned()
        .ok_or_else(|| {
            Error::Invalid(format!(
                "path index {} out of range: {} risky paths",
                config.path_index,
                plan.risky_paths.len()
            ))
        })?;
    let scenarios = stress_sample(model, &clamped, config.count, derive_seed(seed, 2))?;
    Ok(StressOutcome { plan, clamped, scenarios })
}

/// Draw scenarios under an expert-supplied assignment, skipping the tree.
pub fn run_manual_stress(model: &SbcnModel, clamped: BTreeMap<usize, u8>, count: usize, seed: u64) -> Result<Vec<Scenario>> {
    stress_sample(model, &clamped, count, derive_seed(seed, 2))
}
