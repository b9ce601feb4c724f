use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::arc_contingency;
use crate::bootstrap::{bootstrap_counts, prune, DEFAULT_REPLICATES, DEFAULT_THRESHOLD};
use crate::datagen::{Generator, SparseConfig};
use crate::error::{Error, Result};
use crate::learn::{Criterion, LearnOptions, Learner, Penalty};
use crate::model::ContingencyStats;
use crate::rng::derive_path;

/// A grid of experiments: every combination of sample size, learner,
/// criterion and bootstrap setting, each repeated on fresh data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sample_sizes: Vec<usize>,
    pub criteria: Vec<Criterion>,
    pub bootstrap: Vec<bool>,
    pub learners: Vec<Learner>,
    pub generator: Generator,
    pub repetitions: usize,
    pub seed: u64,
    pub replicates: usize,
    pub threshold: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub penalty: Penalty,
}

const REQUIRED_KEYS: [&str; 6] = ["sample_sizes", "criteria", "bootstrap", "learners", "generator", "seed"];

/// Repetitions per cell when the config does not say.
pub const DEFAULT_REPETITIONS: usize = 100;

impl SweepConfig {
    /// Parse the JSON config. Missing required keys are reported together.
    ///
    /// `generator` is `"famafrench"`, `"sparse"`, or
    /// `{"sparse": {..SparseConfig fields..}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| Error::Schema("config must be a JSON object".into()))?;
        let missing: Vec<&str> = REQUIRED_KEYS.iter().copied().filter(|k| !obj.contains_key(*k)).collect();
        if !missing.is_empty() {
            return Err(Error::Schema(format!("missing keys: {}", missing.join(", "))));
        }
        let field = |k: &str| -> Result<Value> { Ok(obj.get(k).cloned().unwrap_or(Value::Null)) };
        let typed = |k: &str| Error::Schema(format!("invalid value for {k}"));
        let generator = match &obj["generator"] {
            Value::String(s) if s == "famafrench" => Generator::FamaFrench,
            Value::String(s) if s == "sparse" => Generator::Sparse(SparseConfig::default()),
            other @ Value::Object(_) => serde_json::from_value(other.clone()).map_err(|e| Error::Schema(format!("generator: {e}")))?,
            _ => return Err(typed("generator")),
        };
        let defaults = LearnOptions::default();
        let cfg = Self {
            sample_sizes: serde_json::from_value(field("sample_sizes")?).map_err(|_| typed("sample_sizes"))?,
            criteria: serde_json::from_value(field("criteria")?).map_err(|_| typed("criteria"))?,
            bootstrap: serde_json::from_value(field("bootstrap")?).map_err(|_| typed("bootstrap"))?,
            learners: serde_json::from_value(field("learners")?).map_err(|_| typed("learners"))?,
            generator,
            repetitions: optional(obj, "repetitions", DEFAULT_REPETITIONS)?,
            seed: serde_json::from_value(field("seed")?).map_err(|_| typed("seed"))?,
            replicates: optional(obj, "replicates", DEFAULT_REPLICATES)?,
            threshold: optional(obj, "threshold", DEFAULT_THRESHOLD)?,
            max_iterations: optional(obj, "max_iterations", defaults.max_iterations)?,
            restarts: optional(obj, "restarts", defaults.restarts)?,
            penalty: optional(obj, "penalty", defaults.penalty)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Schema(m.to_string()));
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return bad("sample_sizes must be nonempty and positive");
        }
        if self.criteria.is_empty() || self.learners.is_empty() || self.bootstrap.is_empty() {
            return bad("criteria, learners and bootstrap must be nonempty");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive");
        }
        if self.bootstrap.contains(&true) && self.replicates == 0 {
            return bad("replicates must be positive when bootstrap is on");
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad("threshold must lie in [0, 1]");
        }
        Ok(())
    }
}

fn optional<T: serde::de::DeserializeOwned>(obj: &serde_json::Map<String, Value>, key: &str, default: T) -> Result<T> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => serde_json::from_value(v.clone()).map_err(|_| Error::Schema(format!("invalid value for {key}"))),
    }
}

/// One learner run on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub learner: Learner,
    pub criterion: Criterion,
    pub bootstrap: bool,
    pub sample_size: usize,
    pub repetition: usize,
    pub edges: usize,
    pub stats: ContingencyStats,
}

/// Mean and standard error of each rate over the repetitions of a cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub learner: Learner,
    pub criterion: Criterion,
    pub bootstrap: bool,
    pub sample_size: usize,
    pub fp_rate_of_inferred: f64,
    pub fn_rate_of_true: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub fp_rate_of_inferred_se: f64,
    pub fn_rate_of_true_se: f64,
    pub fpr_se: f64,
    pub tpr_se: f64,
    pub mean_edges: f64,
    pub repetitions: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub runs: Vec<RunRecord>,
}

fn learner_stream(l: Learner) -> u64 {
    match l {
        Learner::Sbcn => 0,
        Learner::Bn => 1,
    }
}

/// Run every cell of `config`. Datasets depend only on (seed, sample
/// size, repetition), so all learners and criteria see identical data.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .sample_sizes
        .iter()
        .flat_map(|&n| (0..config.repetitions).map(move |r| (n, r)))
        .collect();
    let with_boot = config.bootstrap.contains(&true);
    let without_boot = config.bootstrap.contains(&false);

    let per_job: Vec<Result<Vec<RunRecord>>> = jobs
        .par_iter()
        .map(|&(size, rep)| {
            let data_seed = derive_path(config.seed, &[size as u64, rep as u64, 0]);
            let (truth, data) = config.generator.instance(size, data_seed)?;
            let mut out = Vec::new();
            for &learner in &config.learners {
                for &criterion in &config.criteria {
                    let options = LearnOptions {
                        criterion,
                        max_iterations: config.max_iterations,
                        restarts: config.restarts,
                        penalty: config.penalty,
                        seed: derive_path(config.seed, &[size as u64, rep as u64, 1, learner_stream(learner)]),
                        ..LearnOptions::default()
                    };
                    let model = learner.learn(&data, &options);
                    let record = |bootstrap: bool, dag: &crate::Dag| -> Result<RunRecord> {
                        Ok(RunRecord {
                            learner,
                            criterion,
                            bootstrap,
                            sample_size: size,
                            repetition: rep,
                            edges: dag.edge_count(),
                            stats: arc_contingency(dag, &truth)?,
                        })
                    };
                    if without_boot {
                        out.push(record(false, model.dag())?);
                    }
                    if with_boot {
                        let report = bootstrap_counts(&data, learner, &options, config.replicates, model.dag());
                        let pruned = prune(&model, &report, config.threshold, &data, options.smoothing);
                        out.push(record(true, pruned.dag())?);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut runs = Vec::new();
    for r in per_job {
        runs.extend(r?);
    }

    let mut rows = Vec::new();
    for &learner in &config.learners {
        for &criterion in &config.criteria {
            for &bootstrap in &config.bootstrap {
                for &size in &config.sample_sizes {
                    let cell: Vec<&RunRecord> = runs
                        .iter()
                        .filter(|r| r.learner == learner && r.criterion == criterion && r.bootstrap == bootstrap && r.sample_size == size)
                        .collect();
                    let stat = |f: fn(&ContingencyStats) -> f64| mean_se(cell.iter().map(|r| f(&r.stats)));
                    let (fpi, fpi_se) = stat(|s| s.fp_rate_of_inferred);
                    let (fnt, fnt_se) = stat(|s| s.fn_rate_of_true);
                    let (fpr, fpr_se) = stat(|s| s.fpr);
                    let (tpr, tpr_se) = stat(|s| s.tpr);
                    rows.push(SweepRow {
                        learner,
                        criterion,
                        bootstrap,
                        sample_size: size,
                        fp_rate_of_inferred: fpi,
                        fn_rate_of_true: fnt,
                        fpr,
                        tpr,
                        fp_rate_of_inferred_se: fpi_se,
                        fn_rate_of_true_se: fnt_se,
                        fpr_se,
                        tpr_se,
                        mean_edges: mean_se(cell.iter().map(|r| r.edges as f64)).0,
                        repetitions: cell.len(),
                        seed: config.seed,
                    });
                }
            }
        }
    }
    Ok(SweepReport { rows, runs })
}

fn mean_se<I: Iterator<Item = f64>>(xs: I) -> (f64, f64) {
    let v: Vec<f64> = xs.collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub const CSV_HEADER: &str = "learner,criterion,bootstrap,sample_size,fp_rate_of_inferred,fn_rate_of_true,fpr,tpr,fp_rate_of_inferred_se,fn_rate_of_true_se,fpr_se,tpr_se,repetitions,seed,mean_edges";

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.learner,
                r.criterion,
                r.bootstrap,
                r.sample_size,
                r.fp_rate_of_inferred,
                r.fn_rate_of_true,
                r.fpr,
                r.tpr,
                r.fp_rate_of_inferred_se,
                r.fn_rate_of_true_se,
                r.fpr_se,
                r.tpr_se,
                r.repetitions,
                r.seed,
                r.mean_edges
            );
        }
        s
    }

    pub fn row(&self, learner: Learner, criterion: Criterion, bootstrap: bool, sample_size: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.learner == learner && r.criterion == criterion && r.bootstrap == bootstrap && r.sample_size == sample_size
        })
    }

    /// FP / FN percentages per sample size, one table per learner, one
    /// column pair per (criterion, bootstrap) setting.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut learners: Vec<Learner> = Vec::new();
        let mut settings: Vec<(Criterion, bool)> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for r in &self.rows {
            if !learners.contains(&r.learner) {
                learners.push(r.learner);
            }
            if !settings.contains(&(r.criterion, r.bootstrap)) {
                settings.push((r.criterion, r.bootstrap));
            }
            if !sizes.contains(&r.sample_size) {
                sizes.push(r.sample_size);
            }
        }
        for learner in learners {
            let _ = writeln!(out, "learner: {learner}  (FP = fp_rate_of_inferred %, FN = fn_rate_of_true %)");
            let _ = write!(out, "{:>8}", "sample");
            for &(c, b) in &settings {
                let label = format!("{}{}", c.to_string().to_uppercase(), if b { "Boot" } else { "" });
                let _ = write!(out, " | {label:^15}");
            }
            out.push('\n');
            let _ = write!(out, "{:>8}", "");
            for _ in &settings {
                let _ = write!(out, " | {:>7} {:>7}", "FP", "FN");
            }
            out.push('\n');
            for &n in &sizes {
                let _ = write!(out, "{n:>8}");
                for &(c, b) in &settings {
                    match self.row(learner, c, b, n) {
                        Some(r) => {
                            let _ = write!(out, " | {:>7.1} {:>7.1}", 100.0 * r.fp_rate_of_inferred, 100.0 * r.fn_rate_of_true);
                        }
                        None => {
                            let _ = write!(out, " | {:>7} {:>7}", "-", "-");
                        }
                    }
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}
