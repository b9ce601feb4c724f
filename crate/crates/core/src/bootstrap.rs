//! Non-parametric bootstrap estimates of arc confidence, and pruning of
//! a learned model by confidence.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::learn::{fit_cpts, LearnOptions, Learner};
use crate::model::{BinaryDataset, Dag, EdgeConfidence, SbcnModel};
use crate::rng::{derive_seed, seeded_rng};

pub const DEFAULT_REPLICATES: usize = 100;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Stream offset keeping replicate seeds apart from the seeds the
/// learner derives for its own restarts.
const REPLICATE_STREAM: u64 = 0xb007_0000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub replicates: usize,
    pub threshold: f64,
    /// Times each arc was retrieved, over `replicates` refits.
    #[serde(with = "edge_map")]
    pub counts: BTreeMap<(usize, usize), usize>,
}

impl BootstrapReport {
    /// `count / replicates` for every recorded arc.
    pub fn confidence(&self) -> BTreeMap<(usize, usize), f64> {
        self.counts
            .iter()
            .map(|(&e, &c)| (e, c as f64 / self.replicates as f64))
            .collect()
    }

    pub fn confidence_of(&self, u: usize, v: usize) -> f64 {
        self.counts.get(&(u, v)).map_or(0.0, |&c| c as f64 / self.replicates as f64)
    }

    pub fn to_json(&self) -> String {
        let doc = ReportDocument {
            replicates: self.replicates,
            threshold: self.threshold,
            confidence: self
                .counts
                .iter()
                .map(|(&(from, to), &c)| EdgeConfidence {
                    from,
                    to,
                    value: c as f64 / self.replicates as f64,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

#[derive(Serialize)]
struct ReportDocument {
    replicates: usize,
    threshold: f64,
    confidence: Vec<EdgeConfidence>,
}

mod edge_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        from: usize,
        to: usize,
        count: usize,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), usize>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m.iter().map(|(&(from, to), &count)| Entry { from, to, count }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), usize>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.from, e.to), e.count)).collect())
    }
}

/// Draw `m` rows uniformly with replacement.
pub fn resample(data: &BinaryDataset, seed: u64) -> BinaryDataset {
    let m = data.m();
    let mut rng = seeded_rng(seed);
    let rows: Vec<usize> = (0..m).map(|_| rng.random_range(0..m)).collect();
    data.select_rows(&rows)
}

pub fn replicate_seed(seed: u64, replicate: usize) -> u64 {
    derive_seed(seed ^ REPLICATE_STREAM, replicate as u64)
}

/// Learn `learner` on `replicates` resampled datasets and count how often
/// each arc is retrieved. Arcs of `original` are always recorded, with a
/// count of zero if never retrieved.
pub fn bootstrap_counts(
    data: &BinaryDataset,
    learner: Learner,
    options: &LearnOptions,
    replicates: usize,
    original: &Dag,
) -> BootstrapReport {
    assert!(replicates >= 1, "need at least one bootstrap replicate");
    let graphs: Vec<Vec<(usize, usize)>> = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let seed = replicate_seed(options.seed, b);
            let sample = resample(data, seed);
            let opts = LearnOptions { seed, ..options.clone() };
            let allowed = learner.candidates(&sample, &opts);
            crate::learn::hill_climb(&sample, &allowed, &opts).edges().collect()
        })
        .collect();
    let mut counts: BTreeMap<(usize, usize), usize> = original.edges().map(|e| (e, 0)).collect();
    for g in &graphs {
        for &e in g {
            *counts.entry(e).or_default() += 1;
        }
    }
    BootstrapReport {
        replicates,
        threshold: DEFAULT_THRESHOLD,
        counts,
    }
}

/// Learn the SBCN on `data`, then estimate confidence for its arcs (and
/// any arc retrieved by a replicate) from `replicates` bootstrap refits.
pub fn edge_confidence(data: &BinaryDataset, options: &LearnOptions, replicates: usize) -> BootstrapReport {
    edge_confidence_for(data, Learner::Sbcn, options, replicates)
}

pub fn edge_confidence_for(data: &BinaryDataset, learner: Learner, options: &LearnOptions, replicates: usize) -> BootstrapReport {
    let allowed = learner.candidates(data, options);
    let original = crate::learn::hill_climb(data, &allowed, options);
    bootstrap_counts(data, learner, options, replicates, &original)
}

/// Drop arcs whose confidence is below `threshold` (missing arcs count as
/// confidence 0), refit CPTs on `data`, and attach the confidence of the
/// surviving arcs.
pub fn prune(model: &SbcnModel, report: &BootstrapReport, threshold: f64, data: &BinaryDataset, smoothing: f64) -> SbcnModel {
    let kept: Vec<(usize, usize)> = model
        .dag()
        .edges()
        .filter(|&(u, v)| report.confidence_of(u, v) >= threshold)
        .collect();
    let dag = Dag::from_edges(model.n(), kept.iter().copied()).expect("subgraph of a DAG is acyclic");
    let confidence = kept.iter().map(|&(u, v)| ((u, v), report.confidence_of(u, v))).collect();
    fit_cpts(data, &dag, smoothing)
        .with_confidence(confidence)
        .expect("confidence keys are kept arcs")
}

/// Learn then prune by bootstrap confidence in one call. Returns the pruned model and
/// the full report.
pub fn learn_with_bootstrap(
    data: &BinaryDataset,
    learner: Learner,
    options: &LearnOptions,
    replicates: usize,
    threshold: f64,
) -> (SbcnModel, BootstrapReport) {
    let model = learner.learn(data, options);
    let mut report = bootstrap_counts(data, learner, options, replicates, model.dag());
    report.threshold = threshold;
    let pruned = prune(&model, &report, threshold, data, options.smoothing);
    (pruned, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(replicates: usize, counts: &[((usize, usize), usize)]) -> BootstrapReport {
        BootstrapReport {
            replicates,
            threshold: 0.5,
            counts: counts.iter().copied().collect(),
        }
    }

    fn chain_data() -> BinaryDataset {
        BinaryDataset::unnamed(vec![
            vec![1, 0, 1, 1, 0, 0, 1, 0],
            vec![1, 0, 1, 1, 0, 0, 1, 1],
            vec![1, 0, 1, 0, 0, 0, 1, 1],
        ])
        .unwrap()
    }

    fn chain_model() -> SbcnModel {
        fit_cpts(&chain_data(), &Dag::from_edges(3, [(0, 1), (1, 2)]).unwrap(), 1.0)
    }

    #[test]
    fn single_row_resample() {
        let d = BinaryDataset::unnamed(vec![vec![1], vec![0]]).unwrap();
        assert_eq!(resample(&d, 3), d);
    }

    #[test]
    fn resample_is_reproducible() {
        let d = chain_data();
        assert_eq!(resample(&d, 11), resample(&d, 11));
        assert_eq!(resample(&d, 11).names(), d.names());
    }

    #[test]
    fn prune_boundary_is_inclusive() {
        let m = chain_model();
        let r = report(100, &[((0, 1), 49), ((1, 2), 50)]);
        let p = prune(&m, &r, 0.5, &chain_data(), 1.0);
        assert_eq!(p.dag().edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(p.confidence().unwrap().get(&(1, 2)), Some(&0.5));
    }

    #[test]
    fn full_confidence_keeps_structure() {
        let m = chain_model();
        let r = report(10, &[((0, 1), 10), ((1, 2), 10)]);
        let p = prune(&m, &r, 0.5, &chain_data(), 1.0);
        assert_eq!(p.dag(), m.dag());
        assert_eq!(p.cpts(), m.cpts());
        assert!(prune(&m, &r, 0.0, &chain_data(), 1.0).dag() == m.dag());
        assert_eq!(prune(&m, &r, 1.01, &chain_data(), 1.0).dag().edge_count(), 0);
    }

    #[test]
    fn missing_entries_count_as_zero() {
        let m = chain_model();
        let r = report(10, &[((1, 2), 9)]);
        let p = prune(&m, &r, 0.1, &chain_data(), 1.0);
        assert_eq!(p.dag().edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn one_replicate_gives_zero_or_one() {
        let d = chain_data();
        let r = edge_confidence(&d, &LearnOptions::default(), 1);
        assert!(r.confidence().values().all(|&c| c == 0.0 || c == 1.0));
    }

    #[test]
    fn report_json_lists_confidences() {
        let r = report(4, &[((0, 1), 3)]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["confidence"][0]["value"], 0.75);
        let back: BootstrapReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
