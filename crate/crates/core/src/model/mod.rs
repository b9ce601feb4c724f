//! Shared domain types: datasets, graphs, conditional probability tables
//! and the learned model, plus their text formats.

mod dag;
mod dataset;
mod io;
mod sbcn;

pub use dag::{has_cycle, topological_order, Dag};
pub use dataset::BinaryDataset;
pub use io::{load_dataset, read_dataset_csv, save_dataset, write_dataset_csv, write_scenarios_csv};
pub use sbcn::{validate_model, Cpt, EdgeConfidence, ModelDocument, NodeDocument, SbcnModel};

use serde::{Deserialize, Serialize};

/// One sampled joint assignment over every variable of a model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub assignment: Vec<u8>,
}

/// Arc-level confusion counts of an inferred graph against ground truth,
/// over the universe of all ordered pairs of distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContingencyStats {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    /// FP / (TP + FP): share of inferred arcs that are spurious.
    pub fp_rate_of_inferred: f64,
    /// FN / (TP + FN): share of true arcs that were missed.
    pub fn_rate_of_true: f64,
    pub fpr: f64,
    pub tpr: f64,
}

impl ContingencyStats {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let ratio = |a: usize, b: usize| a as f64 / b.max(1) as f64;
        Self {
            tp,
            fp,
            fn_,
            tn,
            fp_rate_of_inferred: ratio(fp, tp + fp),
            fn_rate_of_true: ratio(fn_, tp + fn_),
            fpr: ratio(fp, fp + tn),
            tpr: ratio(tp, tp + fn_),
        }
    }
}
