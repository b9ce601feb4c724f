//! Independent reference implementations used as test oracles. None of
//! these call into the library's scoring or search code, nor its filter.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, RngCore};
use sbcn::model::Cpt;
use sbcn::{BinaryDataset, Criterion, Dag, SbcnModel};

/// Log-likelihood computed by grouping full rows by parent values.
pub fn oracle_log_likelihood(data: &BinaryDataset, parents: &[Vec<usize>]) -> f64 {
    let mut total = 0.0;
    for (v, pa) in parents.iter().enumerate() {
        let mut groups: HashMap<Vec<u8>, (f64, f64)> = HashMap::new();
        for r in 0..data.m() {
            let row = data.row(r);
            let key: Vec<u8> = pa.iter().map(|&p| row[p]).collect();
            let e = groups.entry(key).or_default();
            if row[v] == 1 {
                e.1 += 1.0
            } else {
                e.0 += 1.0
            }
        }
        for (zeros, ones) in groups.values() {
            let n = zeros + ones;
            for c in [zeros, ones] {
                if *c > 0.0 {
                    total += c * (c / n).ln();
                }
            }
        }
    }
    total
}

pub fn parent_lists(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut pa = vec![Vec::new(); n];
    for &(u, v) in edges {
        pa[v].push(u);
    }
    pa
}

/// Reference scores: BIC = 2LL - k ln N, AIC = LL - 2k, k = arc count.
pub fn oracle_score(data: &BinaryDataset, edges: &[(usize, usize)], criterion: Criterion) -> f64 {
    let ll = oracle_log_likelihood(data, &parent_lists(data.n(), edges));
    let k = edges.len() as f64;
    match criterion {
        Criterion::Bic => 2.0 * ll - k * (data.m() as f64).ln(),
        Criterion::Aic => ll - 2.0 * k,
    }
}

/// Recursive three-colour DFS.
pub fn dfs_has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    fn visit(v: usize, adj: &[Vec<usize>], colour: &mut [u8]) -> bool {
        colour[v] = 1;
        for &w in &adj[v] {
            if colour[w] == 1 || (colour[w] == 0 && visit(w, adj, colour)) {
                return true;
            }
        }
        colour[v] = 2;
        false
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    let mut colour = vec![0u8; n];
    (0..n).any(|v| colour[v] == 0 && visit(v, &adj, &mut colour))
}

/// Every acyclic subset of `allowed`.
pub fn enumerate_dags(n: usize, allowed: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    assert!(allowed.len() <= 20);
    (0u32..1 << allowed.len())
        .map(|mask| {
            allowed
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect::<Vec<_>>()
        })
        .filter(|edges| !dfs_has_cycle(n, edges))
        .collect()
}

/// Best score over all DAGs within `allowed`.
pub fn exhaustive_optimum(data: &BinaryDataset, allowed: &[(usize, usize)], criterion: Criterion) -> f64 {
    enumerate_dags(data.n(), allowed)
        .iter()
        .map(|e| oracle_score(data, e, criterion))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// A random DAG whose arcs all point from lower to higher index.
pub fn random_forward_dag(rng: &mut impl Rng, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// A model over a forward DAG with CPT entries drawn uniformly.
pub fn random_model(rng: &mut impl Rng, n: usize, density: f64) -> SbcnModel {
    let edges = random_forward_dag(rng, n, density);
    let pa = parent_lists(n, &edges);
    let cpts = (0..n)
        .map(|v| Cpt {
            node: v,
            parents: pa[v].clone(),
            table: (0..1usize << pa[v].len()).map(|_| rng.random_range(0.05..0.95)).collect(),
        })
        .collect();
    SbcnModel::new(
        (0..n).map(|i| format!("x{i}")).collect(),
        vec![0; n],
        Dag::from_edges(n, edges).unwrap(),
        cpts,
        None,
    )
    .unwrap()
}

/// Exact joint over all 2^n states; state bit i is variable i.
pub fn exact_joint(model: &SbcnModel) -> Vec<f64> {
    let n = model.n();
    (0..1usize << n)
        .map(|state| {
            let values: Vec<u8> = (0..n).map(|i| (state >> i & 1) as u8).collect();
            (0..n)
                .map(|v| {
                    let cpt = &model.cpts()[v];
                    let idx: usize = cpt.parents.iter().enumerate().map(|(k, &p)| (values[p] as usize) << k).sum();
                    let p1 = cpt.table[idx];
                    if values[v] == 1 {
                        p1
                    } else {
                        1.0 - p1
                    }
                })
                .product()
        })
        .collect()
}

/// Forward-sample `m` rows from a forward-DAG model with an external RNG.
pub fn sample_rows(model: &SbcnModel, m: usize, rng: &mut impl Rng) -> Vec<Vec<u8>> {
    (0..m)
        .map(|_| {
            let mut values = vec![0u8; model.n()];
            for v in 0..model.n() {
                let cpt = &model.cpts()[v];
                let idx: usize = cpt.parents.iter().enumerate().map(|(k, &p)| (values[p] as usize) << k).sum();
                values[v] = rng.random_bool(cpt.table[idx]) as u8;
            }
            values
        })
        .collect()
}

/// Random binary dataset with per-column bias; some columns may be constant.
pub fn random_dataset(rng: &mut impl RngCore, n: usize, m: usize, max_rank: u32) -> BinaryDataset {
    let columns: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let bias: f64 = rng.random_range(0.0..=1.0);
            (0..m).map(|_| rng.random_bool(bias) as u8).collect()
        })
        .collect();
    let rank = (0..n).map(|_| rng.random_range(0..=max_rank)).collect();
    BinaryDataset::from_columns((0..n).map(|i| format!("x{i}")).collect(), rank, columns).unwrap()
}

/// Direct re-reading of the prima-facie rule from row counts, with
/// exact rational comparisons.
pub fn oracle_prima_facie(data: &BinaryDataset) -> Vec<(usize, usize)> {
    let n = data.n();
    let m = data.m() as i128;
    // P(u=1 | v=1) - P(u=1 | v=0) as an exact fraction (num, den > 0).
    let margin = |v: usize, u: usize| -> Option<(i128, i128)> {
        let (mut a, mut b, mut c, mut d) = (0i128, 0i128, 0i128, 0i128);
        for r in 0..data.m() {
            match (data.value(r, v), data.value(r, u)) {
                (1, 1) => a += 1,
                (1, 0) => b += 1,
                (0, 1) => c += 1,
                _ => d += 1,
            }
        }
        let (given1, given0) = (a + b, c + d);
        if given1 == 0 || given0 == 0 {
            return None;
        }
        Some((a * given0 - c * given1, given1 * given0))
    };
    let ones = |v: usize| (0..data.m()).filter(|&r| data.value(r, v) == 1).count() as i128;
    let nondegenerate = |v: usize| ones(v) > 0 && ones(v) < m;
    let rank = data.rank();
    let mut out = Vec::new();
    for v in 0..n {
        for u in 0..n {
            if u == v || rank[v] > rank[u] || !nondegenerate(v) || !nondegenerate(u) {
                continue;
            }
            let Some((num, den)) = margin(v, u) else { continue };
            if num <= 0 {
                continue;
            }
            if rank[v] == rank[u] {
                if let Some((rn, rd)) = margin(u, v) {
                    if rn > 0 {
                        let lhs = num * rd;
                        let rhs = rn * den;
                        if lhs < rhs || (lhs == rhs && u < v) {
                            continue;
                        }
                    }
                }
            }
            out.push((v, u));
        }
    }
    out.sort();
    out
}

/// Total variation distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}
