//! Synthetic ground truth from two generators (the lagged
//! Fama-French-style factor model and a sparse random linear model).
//! Also binarization and least-squares fitting of a model to user histories.

mod ols;
mod series;
mod spec;

pub use ols::{estimate_spec, ols, OlsFit};
pub use series::{binarize, read_series_csv, RealSeries, ThresholdMode};
pub use spec::{
    fama_french_instance, ground_truth_dag, simulate, simulate_history, sparse_random_instance, FactorModelSpec,
    SparseConfig, FAMA_FRENCH_FACTORS,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{BinaryDataset, Dag};

/// Which synthetic regime produces data and ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    FamaFrench,
    Sparse(SparseConfig),
}

impl Generator {
    pub fn sparse() -> Self {
        Generator::Sparse(SparseConfig::default())
    }

    pub fn instance(&self, rows: usize, seed: u64) -> Result<(Dag, BinaryDataset)> {
        let (_, truth, data) = match self {
            Generator::FamaFrench => fama_french_instance(rows, seed)?,
            Generator::Sparse(cfg) => sparse_random_instance(cfg, rows, seed)?,
        };
        Ok((truth, data))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::FamaFrench => "famafrench",
            Generator::Sparse(_) => "sparse",
        }
    }
}
