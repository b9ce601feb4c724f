use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::series::{binarize, RealSeries, ThresholdMode};
use crate::error::{Error, Result};
use crate::model::{BinaryDataset, Dag};
use crate::rng::{derive_seed, seeded_rng, Rng};

pub const FAMA_FRENCH_FACTORS: [&str; 5] = ["Km", "SMB", "HML", "RMW", "CMA"];

/// Linear Gaussian ground truth: factors driven by a factor DAG, stock
/// returns loading on lagged factors.
///
/// Within one time step a child factor is a linear combination of its
/// parent factors plus noise. Stock returns at `t` load on factors at
/// `t − lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorModelSpec {
    pub factor_names: Vec<String>,
    pub stock_names: Vec<String>,
    pub factor_dag: Dag,
    /// `factor_betas[child][parent]`; nonzero only on `factor_dag` arcs.
    pub factor_betas: Vec<Vec<f64>>,
    /// Residual scale of each factor (the full scale for root factors).
    pub factor_sigma: Vec<f64>,
    /// `stock_betas[stock][factor]`; zero means no dependence.
    pub stock_betas: Vec<Vec<f64>>,
    pub stock_sigma: Vec<f64>,
    pub lag: usize,
}

impl FactorModelSpec {
    pub fn n_factors(&self) -> usize {
        self.factor_names.len()
    }

    pub fn n_stocks(&self) -> usize {
        self.stock_names.len()
    }

    pub fn validate(&self) -> Result<()> {
        let nf = self.n_factors();
        let ns = self.n_stocks();
        let bad = |m: String| Err(Error::Invalid(m));
        if nf == 0 || ns == 0 {
            return bad("need at least one factor and one stock".into());
        }
        if self.factor_dag.n() != nf {
            return bad(format!("factor graph has {} nodes for {} factors", self.factor_dag.n(), nf));
        }
        if self.factor_betas.len() != nf || self.factor_betas.iter().any(|r| r.len() != nf) {
            return bad(format!("factor_betas must be {nf} × {nf}"));
        }
        for (c, row) in self.factor_betas.iter().enumerate() {
            for (p, &b) in row.iter().enumerate() {
                if b != 0.0 && !self.factor_dag.has_edge(p, c) {
                    return bad(format!("factor loading {b} of {c} on {p} has no matching arc"));
                }
                if !b.is_finite() {
                    return bad(format!("factor loading of {c} on {p} is not finite"));
                }
            }
        }
        if self.stock_betas.len() != ns || self.stock_betas.iter().any(|r| r.len() != nf) {
            return bad(format!("stock_betas must be {ns} × {nf}"));
        }
        if self.stock_betas.iter().flatten().any(|b| !b.is_finite()) {
            return bad("stock loadings must be finite".into());
        }
        if self.factor_sigma.len() != nf || self.stock_sigma.len() != ns {
            return bad("one residual scale per factor and per stock".into());
        }
        if self.factor_sigma.iter().chain(&self.stock_sigma).any(|&s| !(s > 0.0 && s.is_finite())) {
            return bad("residual scales must be positive".into());
        }
        let mut names = std::collections::HashSet::new();
        if let Some(dup) = self.factor_names.iter().chain(&self.stock_names).find(|n| !names.insert(n.as_str())) {
            return bad(format!("duplicate variable name {dup:?}"));
        }
        Ok(())
    }

    /// Five Fama-French factors with the market factor driving the other
    /// four, and ten stocks loading on all five.
    ///
    /// Child-factor loadings ~ N(0.4, 0.2²) truncated to positive values,
    /// stock loadings ~ N(0.5, 0.25²), unit residual scales, lag 1.
    pub fn fama_french(seed: u64) -> Self {
        Self::fama_french_with(10, seed)
    }

    pub fn fama_french_with(n_stocks: usize, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let nf = FAMA_FRENCH_FACTORS.len();
        let factor_dag = Dag::from_edges(nf, (1..nf).map(|c| (0, c))).expect("star is acyclic");
        let child = Normal::new(0.4, 0.2).expect("valid normal");
        let stock = Normal::new(0.5, 0.25).expect("valid normal");
        let mut factor_betas = vec![vec![0.0; nf]; nf];
        for row in factor_betas.iter_mut().skip(1) {
            // a negative market loading would be a lowering arc no learner can find
            row[0] = loop {
                let b = child.sample(&mut rng);
                if b > 0.0 {
                    break b;
                }
            };
        }
        let stock_betas = (0..n_stocks)
            .map(|_| (0..nf).map(|_| stock.sample(&mut rng)).collect())
            .collect();
        Self {
            factor_names: FAMA_FRENCH_FACTORS.iter().map(|s| s.to_string()).collect(),
            stock_names: (1..=n_stocks).map(|i| format!("P{i}")).collect(),
            factor_dag,
            factor_betas,
            factor_sigma: vec![1.0; nf],
            stock_betas,
            stock_sigma: vec![1.0; n_stocks],
            lag: 1,
        }
    }

    /// Replace every stock loading by its absolute value.
    pub fn with_positive_stock_loadings(mut self) -> Self {
        for b in self.stock_betas.iter_mut().flatten() {
            *b = b.abs();
        }
        self
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.factor_names.iter().chain(&self.stock_names).cloned().collect()
    }
}

/// Factor arcs plus `factor j → stock i` for every nonzero loading.
/// Factors occupy indices `0..n_factors`, stocks follow.
pub fn ground_truth_dag(spec: &FactorModelSpec) -> Dag {
    let nf = spec.n_factors();
    let edges = spec.factor_dag.edges().chain(
        spec.stock_betas
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &b)| b != 0.0).map(move |(j, _)| (j, nf + i))),
    );
    Dag::from_edges(nf + spec.n_stocks(), edges).expect("factors precede stocks")
}

struct Paths {
    /// `(T + lag)` rows per factor.
    factors: Vec<Vec<f64>>,
    /// `T` rows per stock, for times `lag..T + lag`.
    stocks: Vec<Vec<f64>>,
}

fn generate(spec: &FactorModelSpec, t: usize, seed: u64) -> Paths {
    let nf = spec.n_factors();
    let lag = spec.lag;
    let total = t + lag;
    let mut rng: Rng = seeded_rng(seed);
    let order = spec.factor_dag.topological_order();
    let mut factors = vec![vec![0.0; total]; nf];
    #[allow(clippy::needless_range_loop)]
    for s in 0..total {
        for &c in &order {
            let noise: f64 = rng.sample(StandardNormal);
            let drive: f64 = spec.factor_dag.parents(c).iter().map(|&p| spec.factor_betas[c][p] * factors[p][s]).sum();
            factors[c][s] = drive + spec.factor_sigma[c] * noise;
        }
    }
    let stocks = spec
        .stock_betas
        .iter()
        .zip(&spec.stock_sigma)
        .map(|(betas, &sigma)| {
            (lag..total)
                .map(|s| {
                    let noise: f64 = rng.sample(StandardNormal);
                    let drive: f64 = betas.iter().enumerate().map(|(j, &b)| b * factors[j][s - lag]).sum();
                    drive + sigma * noise
                })
                .collect()
        })
        .collect();
    Paths { factors, stocks }
}

/// Time-indexed histories: row `t` of both series refers to the same day.
/// Returns `(factors, stock returns)`, each with `t` rows; the first `lag`
/// generated days are burn-in and dropped.
pub fn simulate_history(spec: &FactorModelSpec, t: usize, seed: u64) -> Result<(RealSeries, RealSeries)> {
    spec.validate()?;
    let p = generate(spec, t, seed);
    let lag = spec.lag;
    let factors = p.factors.into_iter().map(|c| c[lag..].to_vec()).collect();
    let f = RealSeries::new(spec.factor_names.clone(), vec![0; spec.n_factors()], factors)?;
    let r = RealSeries::new(spec.stock_names.clone(), vec![1; spec.n_stocks()], p.stocks)?;
    Ok((f, r))
}

/// Lag-aligned observations: row `i` holds the factor values that drive
/// the returns in the same row (factors at `t − lag`, returns at `t`).
/// Factors get rank 0, stocks rank 1.
pub fn simulate(spec: &FactorModelSpec, t: usize, seed: u64) -> Result<RealSeries> {
    spec.validate()?;
    let p = generate(spec, t, seed);
    let factors = p.factors.into_iter().map(|c| c[..t].to_vec()).collect();
    let f = RealSeries::new(spec.factor_names.clone(), vec![0; spec.n_factors()], factors)?;
    let r = RealSeries::new(spec.stock_names.clone(), vec![1; spec.n_stocks()], p.stocks)?;
    f.join(r)
}

/// Parameters of the sparse random linear regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SparseConfig {
    pub n_factors: usize,
    pub n_stocks: usize,
    /// Probability that a (stock, factor) pair is linked.
    pub p: f64,
    /// Loading magnitudes are uniform on this interval.
    pub loading_min: f64,
    pub loading_max: f64,
    /// Give each loading a random sign instead of a positive one.
    pub signed: bool,
    pub stock_sigma: f64,
}

impl Default for SparseConfig {
    fn default() -> Self {
        Self {
            n_factors: 10,
            n_stocks: 20,
            p: 0.3,
            loading_min: 0.5,
            loading_max: 1.5,
            signed: true,
            stock_sigma: 1.0,
        }
    }
}

/// Draw a sparse spec, its ground truth, and `t` binarized observations.
pub fn sparse_random_instance(config: &SparseConfig, t: usize, seed: u64) -> Result<(FactorModelSpec, Dag, BinaryDataset)> {
    if !(0.0..=1.0).contains(&config.p) {
        return Err(Error::Invalid(format!("link probability {} outside [0, 1]", config.p)));
    }
    if !(0.0 <= config.loading_min && config.loading_min <= config.loading_max) {
        return Err(Error::Invalid("loading range must satisfy 0 ≤ min ≤ max".into()));
    }
    let nf = config.n_factors;
    let mut rng = seeded_rng(derive_seed(seed, 0));
    let stock_betas = (0..config.n_stocks)
        .map(|_| {
            (0..nf)
                .map(|_| {
                    if rng.random::<f64>() < config.p {
                        let mag = config.loading_min + (config.loading_max - config.loading_min) * rng.random::<f64>();
                        if config.signed && rng.random::<bool>() {
                            -mag
                        } else {
                            mag
                        }
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let spec = FactorModelSpec {
        factor_names: (1..=nf).map(|i| format!("F{i}")).collect(),
        stock_names: (1..=config.n_stocks).map(|i| format!("S{i}")).collect(),
        factor_dag: Dag::empty(nf),
        factor_betas: vec![vec![0.0; nf]; nf],
        factor_sigma: vec![1.0; nf],
        stock_betas,
        stock_sigma: vec![config.stock_sigma; config.n_stocks],
        lag: 1,
    };
    let truth = ground_truth_dag(&spec);
    let data = binarize(&simulate(&spec, t, derive_seed(seed, 1))?, ThresholdMode::Median)?;
    Ok((spec, truth, data))
}

/// Fama-French instance: random default spec, truth, binarized data.
pub fn fama_french_instance(t: usize, seed: u64) -> Result<(FactorModelSpec, Dag, BinaryDataset)> {
    let spec = FactorModelSpec::fama_french(derive_seed(seed, 0));
    let truth = ground_truth_dag(&spec);
    let data = binarize(&simulate(&spec, t, derive_seed(seed, 1))?, ThresholdMode::Median)?;
    Ok((spec, truth, data))
}
