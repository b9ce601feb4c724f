//! Arc-level comparison against ground truth, ROC summaries, and the
//! repeated-experiment sweep.

mod sweep;

pub use sweep::{run_sweep, RunRecord, SweepConfig, SweepReport, SweepRow, DEFAULT_REPETITIONS};

use crate::error::{Error, Result};
use crate::model::{ContingencyStats, Dag};

/// Confusion counts over every ordered pair of distinct nodes.
pub fn arc_contingency(inferred: &Dag, truth: &Dag) -> Result<ContingencyStats> {
    if inferred.n() != truth.n() {
        return Err(Error::NodeCountMismatch {
            left: inferred.n(),
            right: truth.n(),
        });
    }
    let n = truth.n();
    let tp = inferred.edges().filter(|&(u, v)| truth.has_edge(u, v)).count();
    let fp = inferred.edge_count() - tp;
    let fn_ = truth.edge_count() - tp;
    let tn = n * n.saturating_sub(1) - tp - fp - fn_;
    Ok(ContingencyStats::from_counts(tp, fp, fn_, tn))
}

/// `(fpr, tpr)`.
pub fn roc_point(stats: &ContingencyStats) -> (f64, f64) {
    (stats.fpr, stats.tpr)
}

/// Monotone upper envelope of ROC points, anchored at (0, 0) and (1, 1):
/// sorted by false-positive rate, keeping only points that raise the best
/// true-positive rate seen so far.
pub fn roc_upper_envelope(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.push((0.0, 0.0));
    pts.push((1.0, 1.0));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        if out.last().is_none_or(|last| p.1 > last.1) {
            out.push(p);
        }
    }
    out
}
