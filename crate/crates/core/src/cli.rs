//! The `sbcn` command line: `simulate`, `infer`, `stress`, `evaluate`
//! and `sweep`. Every random choice derives from the single `--seed`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bootstrap::learn_with_bootstrap;
use crate::classifier::{describe_path, TreeParams};
use crate::datagen::{binarize, ground_truth_dag, simulate, sparse_random_instance, FactorModelSpec, SparseConfig, ThresholdMode};
use crate::error::{Error, Result};
use crate::evaluation::{arc_contingency, run_sweep, SweepConfig};
use crate::learn::{Criterion, LearnOptions, Learner, Penalty, TemporalPriority};
use crate::model::{load_dataset, save_dataset, write_scenarios_csv, ContingencyStats, Dag, SbcnModel};
use crate::rng::derive_seed;
use crate::sampling::parse_assignment;
use crate::stress::{run_manual_stress, run_stress, StressConfig};

#[derive(Debug, Parser)]
#[command(name = "sbcn", version, about = "Suppes-Bayes causal networks for stress testing")]
pub struct Cli {
    /// Seed for every random choice in the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Famafrench,
    Sparse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a binarized synthetic dataset and its ground-truth graph.
    Simulate {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        samples: usize,
        /// Factor model spec (JSON) used instead of a randomly drawn one in famafrench mode.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out_data: PathBuf,
        #[arg(long)]
        out_truth: PathBuf,
        /// Also write the generating spec as JSON.
        #[arg(long)]
        out_spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "median")]
        threshold: Threshold,
    },
    /// Learn a model from a dataset CSV.
    Infer {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "sbcn")]
        learner: LearnerArg,
        #[arg(long, value_enum, default_value = "bic")]
        criterion: CriterionArg,
        /// Bootstrap replicates; 0 disables pruning.
        #[arg(long, default_value_t = 0)]
        bootstrap: usize,
        /// Minimum arc confidence kept after bootstrapping.
        #[arg(long, default_value_t = 0.5)]
        confidence: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value_t = 1.0)]
        smoothing: f64,
        /// Use 2·LL − 2k for AIC.
        #[arg(long)]
        aic_conventional: bool,
        #[arg(long, value_enum, default_value = "rank")]
        tp_mode: TpMode,
        /// What the score penalty counts.
        #[arg(long, value_enum, default_value = "arcs")]
        penalty: PenaltyArg,
        #[arg(long)]
        out_model: PathBuf,
        /// Write the bootstrap confidence report here.
        #[arg(long)]
        out_report: Option<PathBuf>,
    },
    /// Generate stress scenarios from a model.
    Stress {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples_for_tree: usize,
        #[arg(long, default_value_t = 0.1)]
        risky_fraction: f64,
        /// Risky path to clamp (depth-first order, 0-branches first).
        #[arg(long, conflicts_with = "clamp")]
        path_index: Option<usize>,
        /// Manual scenario, e.g. "SMB=0,Km=0"; skips the decision tree.
        #[arg(long)]
        clamp: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        min_leaf: usize,
        #[arg(long)]
        out_scenarios: PathBuf,
        #[arg(long)]
        out_tree: Option<PathBuf>,
    },
    /// Compare one model against a ground-truth graph.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment grid from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Human-readable table (default: printed to stdout).
        #[arg(long)]
        out_table: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Threshold {
    Zero,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Sbcn,
    Bn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Bic,
    Aic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PenaltyArg {
    Arcs,
    Parameters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TpMode {
    Rank,
    Marginal,
}

/// Ground truth on disk: variable names plus the graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthDocument {
    pub names: Vec<String>,
    #[serde(flatten)]
    pub dag: Dag,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn dispatch(cli: &Cli) -> Result<()> {
    let seed = cli.seed;
    match &cli.command {
        Command::Simulate {
            mode,
            samples,
            spec,
            out_data,
            out_truth,
            out_spec,
            threshold,
        } => {
            if *samples == 0 {
                return Err(Error::Invalid("--samples must be positive".into()));
            }
            let threshold = match threshold {
                Threshold::Zero => ThresholdMode::Zero,
                Threshold::Median => ThresholdMode::Median,
            };
            let (spec, truth, data) = match mode {
                Mode::Famafrench => {
                    let spec = match spec {
                        Some(p) => {
                            let s: FactorModelSpec = serde_json::from_str(&read(p)?).map_err(|e| Error::Schema(e.to_string()))?;
                            s.validate()?;
                            s
                        }
                        None => FactorModelSpec::fama_french(derive_seed(seed, 0)),
                    };
                    let data = binarize(&simulate(&spec, *samples, derive_seed(seed, 1))?, threshold)?;
                    let truth = ground_truth_dag(&spec);
                    (spec, truth, data)
                }
                Mode::Sparse => {
                    if spec.is_some() {
                        return Err(Error::Invalid("--spec applies to famafrench mode only".into()));
                    }
                    let (spec, truth, data) = sparse_random_instance(&SparseConfig::default(), *samples, seed)?;
                    let data = if threshold == ThresholdMode::Median {
                        data
                    } else {
                        binarize(&simulate(&spec, *samples, derive_seed(seed, 1))?, threshold)?
                    };
                    (spec, truth, data)
                }
            };
            save_dataset(&data, out_data)?;
            let doc = TruthDocument {
                names: data.names().to_vec(),
                dag: truth,
            };
            write(out_truth, serde_json::to_string_pretty(&doc)? + "\n")?;
            if let Some(p) = out_spec {
                write(p, serde_json::to_string_pretty(&spec)? + "\n")?;
            }
        }

        Command::Infer {
            data,
            learner,
            criterion,
            bootstrap,
            confidence,
            max_iterations,
            restarts,
            smoothing,
            aic_conventional,
            tp_mode,
            penalty,
            out_model,
            out_report,
        } => {
            if !(0.0..=1.0).contains(confidence) {
                return Err(Error::Invalid(format!("--confidence {confidence} outside [0, 1]")));
            }
            if *max_iterations == 0 {
                return Err(Error::Invalid("--max-iterations must be positive".into()));
            }
            if !(*smoothing >= 0.0 && smoothing.is_finite()) {
                return Err(Error::Invalid("--smoothing must be a nonnegative number".into()));
            }
            let data = load_dataset(data)?;
            let learner = match learner {
                LearnerArg::Sbcn => Learner::Sbcn,
                LearnerArg::Bn => Learner::Bn,
            };
            let options = LearnOptions {
                criterion: match criterion {
                    CriterionArg::Bic => Criterion::Bic,
                    CriterionArg::Aic => Criterion::Aic,
                },
                max_iterations: *max_iterations,
                restarts: *restarts,
                smoothing: *smoothing,
                seed,
                aic_conventional: *aic_conventional,
                temporal_priority: match tp_mode {
                    TpMode::Rank => TemporalPriority::Rank,
                    TpMode::Marginal => TemporalPriority::Marginal,
                },
                penalty: match penalty {
                    PenaltyArg::Arcs => Penalty::Arcs,
                    PenaltyArg::Parameters => Penalty::Parameters,
                },
            };
            let model = if *bootstrap > 0 {
                let (model, report) = learn_with_bootstrap(&data, learner, &options, *bootstrap, *confidence);
                if let Some(p) = out_report {
                    write(p, report.to_json() + "\n")?;
                }
                model
            } else {
                if out_report.is_some() {
                    return Err(Error::Invalid("--out-report needs --bootstrap > 0".into()));
                }
                learner.learn(&data, &options)
            };
            write(out_model, model.to_json() + "\n")?;
        }

        Command::Stress {
            model,
            samples_for_tree,
            risky_fraction,
            path_index,
            clamp,
            count,
            min_leaf,
            out_scenarios,
            out_tree,
        } => {
            let model = SbcnModel::from_json(&read(model)?)?;
            let mut buf = Vec::new();
            if let Some(text) = clamp {
                let assignment = parse_assignment(&model, text)?;
                let scenarios = run_manual_stress(&model, assignment, *count, seed)?;
                write_scenarios_csv(model.names(), &scenarios, &mut buf)?;
            } else {
                let config = StressConfig {
                    samples_for_tree: *samples_for_tree,
                    risky_fraction: *risky_fraction,
                    path_index: path_index.unwrap_or(0),
                    count: *count,
                    tree: TreeParams {
                        min_leaf: *min_leaf,
                        ..TreeParams::default()
                    },
                };
                let outcome = run_stress(&model, &config, seed)?;
                if let Some(p) = out_tree {
                    write(p, outcome.plan.tree.to_json() + "\n")?;
                }
                eprint!("{}", outcome.plan.tree.render());
                eprintln!("clamped path: {}", describe_path(&outcome.clamped, model.names()));
                write_scenarios_csv(model.names(), &outcome.scenarios, &mut buf)?;
            }
            write(out_scenarios, buf)?;
        }

        Command::Evaluate { model, truth, out } => {
            let model = SbcnModel::from_json(&read(model)?)?;
            let truth: TruthDocument = serde_json::from_str(&read(truth)?).map_err(|e| Error::Schema(e.to_string()))?;
            if truth.names != model.names() {
                return Err(Error::Invalid("model and truth name different variables".into()));
            }
            let stats = arc_contingency(model.dag(), &truth.dag)?;
            let text = stats_csv(&stats);
            match out {
                Some(p) => write(p, text)?,
                None => print!("{text}"),
            }
        }

        Command::Sweep { config, out, out_table } => {
            let mut cfg = SweepConfig::from_json(&read(config)?)?;
            // the config's own seed wins unless --seed was passed explicitly
            if seed != 0 {
                cfg.seed = seed;
            }
            let report = run_sweep(&cfg)?;
            for r in &report.rows {
                eprintln!(
                    "{} {} boot={} N={}: fp_rate_of_inferred={:.3} fn_rate_of_true={:.3} ({} reps)",
                    r.learner, r.criterion, r.bootstrap, r.sample_size, r.fp_rate_of_inferred, r.fn_rate_of_true, r.repetitions
                );
            }
            write(out, report.to_csv())?;
            let table = report.to_table();
            match out_table {
                Some(p) => write(p, table)?,
                None => print!("{table}"),
            }
        }
    }
    Ok(())
}

fn stats_csv(s: &ContingencyStats) -> String {
    format!(
        "tp,fp,fn,tn,fp_rate_of_inferred,fn_rate_of_true,fpr,tpr\n{},{},{},{},{},{},{},{}\n",
        s.tp, s.fp, s.fn_, s.tn, s.fp_rate_of_inferred, s.fn_rate_of_true, s.fpr, s.tpr
    )
}
