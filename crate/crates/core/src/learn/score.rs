use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::model::{BinaryDataset, Cpt, Dag, SbcnModel};

/// Floor applied to probabilities inside logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Bic,
    Aic,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Criterion::Bic => "bic",
            Criterion::Aic => "aic",
        })
    }
}

/// What `k` counts in the penalty term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    /// Number of arcs.
    #[default]
    Arcs,
    /// Number of free CPT parameters, `2^|parents|` per node.
    Parameters,
}

/// Per-configuration counts of (node = 0, node = 1).
fn family_counts(data: &BinaryDataset, node: usize, parents: &[usize]) -> Vec<[u64; 2]> {
    let target = data.column(node);
    let cols: Vec<&[u8]> = parents.iter().map(|&p| data.column(p)).collect();
    let mut counts = vec![[0u64; 2]; 1usize << parents.len()];
    for (r, &y) in target.iter().enumerate() {
        let cfg = cols
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, c)| acc | ((c[r] as usize) << k));
        counts[cfg][y as usize] += 1;
    }
    counts
}

/// Sparse counterpart of [`family_counts`] for wide parent sets.
fn family_counts_sparse(data: &BinaryDataset, node: usize, parents: &[usize]) -> Vec<[u64; 2]> {
    let target = data.column(node);
    let mut counts: HashMap<Vec<u8>, [u64; 2]> = HashMap::new();
    for (r, &y) in target.iter().enumerate() {
        let key: Vec<u8> = parents.iter().map(|&p| data.value(r, p)).collect();
        counts.entry(key).or_default()[y as usize] += 1;
    }
    counts.into_values().collect()
}

const DENSE_PARENT_LIMIT: usize = 16;

/// Maximum-likelihood log-likelihood contribution of one node.
pub fn family_log_likelihood(data: &BinaryDataset, node: usize, parents: &[usize]) -> f64 {
    let counts = if parents.len() <= DENSE_PARENT_LIMIT {
        family_counts(data, node, parents)
    } else {
        family_counts_sparse(data, node, parents)
    };
    counts
        .iter()
        .map(|&[c0, c1]| {
            let total = (c0 + c1) as f64;
            [c0, c1]
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| c as f64 * (c as f64 / total).max(LOG_FLOOR).ln())
                .sum::<f64>()
        })
        .sum()
}

/// ln L(data | dag) under maximum-likelihood (unsmoothed) parameters.
pub fn log_likelihood(data: &BinaryDataset, dag: &Dag) -> f64 {
    (0..dag.n()).map(|v| family_log_likelihood(data, v, dag.parents(v))).sum()
}

/// The regularized objective maximized by the search (higher is better).
///
/// * BIC: `2·LL − k·ln N`
/// * AIC: `LL − 2k`, or `2·LL − 2k` when `aic_conventional` is set
///
/// where `k` is the number of arcs and `N` the number of rows. With
/// [`Penalty::Parameters`], `k` counts free CPT parameters instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreFunction {
    ll_weight: f64,
    arc_penalty: f64,
    penalty: Penalty,
}

impl ScoreFunction {
    pub fn new(criterion: Criterion, aic_conventional: bool, rows: usize) -> Self {
        match criterion {
            Criterion::Bic => Self {
                ll_weight: 2.0,
                arc_penalty: (rows as f64).ln(),
                penalty: Penalty::Arcs,
            },
            Criterion::Aic if aic_conventional => Self {
                ll_weight: 2.0,
                arc_penalty: 2.0,
                penalty: Penalty::Arcs,
            },
            Criterion::Aic => Self {
                ll_weight: 1.0,
                arc_penalty: 2.0,
                penalty: Penalty::Arcs,
            },
        }
    }

    pub fn with_penalty(self, penalty: Penalty) -> Self {
        Self { penalty, ..self }
    }

    /// Whole-graph score from its log-likelihood and arc count. Only
    /// meaningful for [`Penalty::Arcs`]; see [`ScoreFunction::family`].
    pub fn combine(&self, ll: f64, arcs: usize) -> f64 {
        self.ll_weight * ll - self.arc_penalty * arcs as f64
    }

    /// Score term of one node given its log-likelihood and parent count.
    pub fn family(&self, ll: f64, parents: usize) -> f64 {
        let k = match self.penalty {
            Penalty::Arcs => parents as f64,
            Penalty::Parameters => (parents as f64).exp2(),
        };
        self.ll_weight * ll - self.arc_penalty * k
    }
}

pub fn regularized_score(data: &BinaryDataset, dag: &Dag, criterion: Criterion) -> f64 {
    regularized_score_with(data, dag, criterion, false)
}

pub fn regularized_score_with(data: &BinaryDataset, dag: &Dag, criterion: Criterion, aic_conventional: bool) -> f64 {
    ScoreFunction::new(criterion, aic_conventional, data.m()).combine(log_likelihood(data, dag), dag.edge_count())
}

/// Score of `dag` under an arbitrary [`ScoreFunction`], summed per family.
pub fn score_with(data: &BinaryDataset, dag: &Dag, score: ScoreFunction) -> f64 {
    (0..dag.n())
        .map(|v| score.family(family_log_likelihood(data, v, dag.parents(v)), dag.parents(v).len()))
        .sum()
}

/// Memoized per-family terms of the decomposed score.
pub(crate) struct FamilyScorer<'a> {
    data: &'a BinaryDataset,
    score: ScoreFunction,
    cache: HashMap<(usize, Vec<usize>), f64>,
}

impl<'a> FamilyScorer<'a> {
    pub fn new(data: &'a BinaryDataset, score: ScoreFunction) -> Self {
        Self {
            data,
            score,
            cache: HashMap::new(),
        }
    }

    /// Score contribution of `node` with the given (sorted) parents.
    pub fn family(&mut self, node: usize, parents: &[usize]) -> f64 {
        if let Some(&s) = self.cache.get(&(node, parents.to_vec())) {
            return s;
        }
        let s = self.score.family(family_log_likelihood(self.data, node, parents), parents.len());
        self.cache.insert((node, parents.to_vec()), s);
        s
    }
}

/// Estimate every CPT entry as `(ones + s) / (total + 2s)`; an empty
/// configuration with `s = 0` gets 0.5.
pub fn fit_cpts(data: &BinaryDataset, dag: &Dag, smoothing: f64) -> SbcnModel {
    assert_eq!(dag.n(), data.n(), "graph and dataset sizes differ");
    let cpts = (0..dag.n())
        .map(|v| {
            let parents = dag.parents(v).to_vec();
            let table = family_counts(data, v, &parents)
                .iter()
                .map(|&[c0, c1]| {
                    let denom = (c0 + c1) as f64 + 2.0 * smoothing;
                    if denom > 0.0 {
                        (c1 as f64 + smoothing) / denom
                    } else {
                        0.5
                    }
                })
                .collect();
            Cpt { node: v, parents, table }
        })
        .collect();
    SbcnModel::new(data.names().to_vec(), data.rank().to_vec(), dag.clone(), cpts, None)
        .expect("fitted model is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(cols: Vec<Vec<u8>>) -> BinaryDataset {
        BinaryDataset::unnamed(cols).unwrap()
    }

    #[test]
    fn single_fair_variable() {
        let d = data(vec![vec![1, 1, 0, 0]]);
        let ll = log_likelihood(&d, &Dag::empty(1));
        assert!((ll - 4.0 * 0.5f64.ln()).abs() < 1e-12);
        assert!((ll + 2.7726).abs() < 1e-4);
    }

    #[test]
    fn copy_edge_raises_likelihood() {
        let d = data(vec![vec![1, 0, 1, 1, 0, 0], vec![1, 0, 1, 1, 0, 0]]);
        let with = Dag::from_edges(2, [(0, 1)]).unwrap();
        assert!(log_likelihood(&d, &with) > log_likelihood(&d, &Dag::empty(2)));
    }

    #[test]
    fn score_formulas() {
        let d = data(vec![vec![1, 0, 1, 0, 0]]);
        let empty = Dag::empty(1);
        let ll = log_likelihood(&d, &empty);
        assert_eq!(regularized_score(&d, &empty, Criterion::Bic), 2.0 * ll);
        // k = 3, N = 5000, LL = -100
        let bic = ScoreFunction::new(Criterion::Bic, false, 5000).combine(-100.0, 3);
        assert!((bic - (-200.0 - 3.0 * 5000f64.ln())).abs() < 1e-9 && (bic + 225.5516).abs() < 1e-3, "{bic}");
        assert_eq!(ScoreFunction::new(Criterion::Aic, false, 5000).combine(-100.0, 3), -106.0);
        assert_eq!(ScoreFunction::new(Criterion::Aic, true, 5000).combine(-100.0, 3), -206.0);
    }

    #[test]
    fn cpt_estimates() {
        let d = data(vec![vec![1, 1, 1, 1], vec![1, 0, 1, 1]]);
        let dag = Dag::from_edges(2, [(0, 1)]).unwrap();
        let m = fit_cpts(&d, &dag, 0.0);
        assert_eq!(m.cpt(0).table, vec![1.0]);
        // configuration a = 0 never observed
        assert_eq!(m.cpt(1).table, vec![0.5, 0.75]);
        let m = fit_cpts(&d, &dag, 1.0);
        assert_eq!(m.cpt(1).table, vec![0.5, 4.0 / 6.0]);
    }

    #[test]
    fn sparse_counts_agree_with_dense() {
        let d = data(vec![vec![1, 0, 1, 1, 0, 1], vec![0, 0, 1, 1, 1, 1], vec![1, 0, 0, 1, 0, 1]]);
        let dense: f64 = family_counts(&d, 2, &[0, 1])
            .iter()
            .flat_map(|c| c.iter())
            .map(|&c| c as f64)
            .sum();
        let sparse: f64 = family_counts_sparse(&d, 2, &[0, 1])
            .iter()
            .flat_map(|c| c.iter())
            .map(|&c| c as f64)
            .sum();
        assert_eq!(dense, sparse);
    }
}
