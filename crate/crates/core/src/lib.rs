//! Suppes-Bayes causal network learning and stress-scenario generation.
//!
//! The crate learns causal networks over binary up/down factor and stock
//! variables and measures the learner against synthetic ground truth.
//! Stress scenarios come from sampling a model clamped to the risky
//! branches of a decision tree.
//!
//! | module | contents |
//! |---|---|
//! | [`model`] | datasets, DAGs, CPTs, the learned model, file formats |
//! | [`learn`] | prima-facie arc filter, BIC/AIC scores, hill climbing |
//! | [`bootstrap`] | arc confidence by resampling, pruning |
//! | [`datagen`] | factor-model and sparse generators, OLS estimation |
//! | [`sampling`] | ancestral sampling and clamping |
//! | [`classifier`] | risk labels and the decision tree |
//! | [`stress`] | the sample → label → tree → clamp pipeline |
//! | [`evaluation`] | contingency counts, ROC points, sweeps |
//!
//! Run any walkthrough with `cargo run --release --example <name>`:
//!
//! | example | shows |
//! |---|---|
//! | `prima_facie` | the arc filter under rank and marginal priority |
//! | `learn_sbcn` | SBCN against a plain BN on factor-model data |
//! | `bootstrap_pruning` | arc confidences and the effect of pruning |
//! | `factor_model` | the generator, binarization, OLS recovery |
//! | `sampling_and_clamping` | up-count histograms with and without clamping |
//! | `stress_test` | the full stress pipeline with the fitted tree |
//! | `roc_sweep` | an experiment grid and its ROC envelope |
//! | `sparse_regime` | the sparse generator under both penalties |
//! | `model_files` | CSV and JSON formats, model validation |

pub mod bootstrap;
pub mod classifier;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod evaluation;
pub mod learn;
pub mod model;
pub mod rng;
pub mod sampling;
pub mod stress;

pub use error::{Error, Result};
pub use learn::{learn_bn, learn_sbcn, Criterion, LearnOptions, Learner};
pub use model::{BinaryDataset, ContingencyStats, Dag, SbcnModel, Scenario};
