//! Structure learning: the prima-facie arc filter, likelihood scoring,
//! stochastic hill climbing, and the two end-to-end learners.

mod score;
mod search;
mod stats;
mod suppes;

pub use score::{
    family_log_likelihood, fit_cpts, log_likelihood, regularized_score, regularized_score_with, score_with,
    Criterion, Penalty, ScoreFunction, LOG_FLOOR,
};
pub use search::{hill_climb, hill_climb_scored};
pub use stats::{empirical_conditional, empirical_marginal};
pub use suppes::{prima_facie_edges, prima_facie_edges_with, EdgeSet, TemporalPriority};

use serde::{Deserialize, Serialize};

use crate::model::{BinaryDataset, SbcnModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnOptions {
    pub criterion: Criterion,
    /// Consecutive rejected proposals that end a climb.
    pub max_iterations: usize,
    /// Extra independently seeded climbs; the best scoring result wins.
    pub restarts: usize,
    /// Pseudo-count for the CPTs of the returned model.
    pub smoothing: f64,
    pub seed: u64,
    /// Use `2·LL − 2k` for AIC instead of `LL − 2k`.
    pub aic_conventional: bool,
    pub temporal_priority: TemporalPriority,
    /// What the penalty counts; arcs unless set otherwise.
    pub penalty: Penalty,
}

impl Default for LearnOptions {
    fn default() -> Self {
        Self {
            criterion: Criterion::Bic,
            max_iterations: 10_000,
            restarts: 0,
            smoothing: 1.0,
            seed: 0,
            aic_conventional: false,
            temporal_priority: TemporalPriority::Rank,
            penalty: Penalty::Arcs,
        }
    }
}

/// Which candidate arcs the search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Learner {
    /// Prima-facie arcs only.
    #[default]
    Sbcn,
    /// Any ordered pair: a plain Bayesian network.
    Bn,
}

impl std::fmt::Display for Learner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Learner::Sbcn => "sbcn",
            Learner::Bn => "bn",
        })
    }
}

impl Learner {
    pub fn candidates(self, data: &BinaryDataset, options: &LearnOptions) -> EdgeSet {
        match self {
            Learner::Sbcn => prima_facie_edges_with(data, options.temporal_priority),
            Learner::Bn => EdgeSet::all_pairs(data.n()),
        }
    }

    pub fn learn(self, data: &BinaryDataset, options: &LearnOptions) -> SbcnModel {
        let allowed = self.candidates(data, options);
        let dag = hill_climb(data, &allowed, options);
        fit_cpts(data, &dag, options.smoothing)
    }
}

/// Suppes-constrained structure learning: prima-facie filter, hill
/// climbing on the regularized likelihood, then CPT estimation.
pub fn learn_sbcn(data: &BinaryDataset, options: &LearnOptions) -> SbcnModel {
    Learner::Sbcn.learn(data, options)
}

/// Unconstrained baseline: the same search over every ordered pair.
pub fn learn_bn(data: &BinaryDataset, options: &LearnOptions) -> SbcnModel {
    Learner::Bn.learn(data, options)
}
