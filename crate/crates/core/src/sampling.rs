//! Ancestral sampling from a learned model, and clamping of variables to
//! force stress configurations.
//!
//! Clamping is an intervention: the clamped node's CPT is replaced by a
//! point mass, its descendants react to the forced value through their
//! own CPTs, and its ancestors are untouched. It is not conditioning on
//! evidence.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Cpt, Dag, SbcnModel, Scenario};
use crate::rng::{derive_seed, seeded_rng};

/// Kahn's order with ties broken by lowest index.
pub fn topological_order(dag: &Dag) -> Result<Vec<usize>> {
    crate::model::topological_order(dag.n(), dag.edges())
}

/// Draw `count` joint scenarios. Scenario `i` uses its own seed derived
/// from `(seed, i)`, so batches can be split freely.
pub fn ancestral_sample(model: &SbcnModel, count: usize, seed: u64) -> Vec<Scenario> {
    let order = topological_order(model.dag()).expect("model graph is acyclic");
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(derive_seed(seed, i as u64));
            let mut values = vec![0u8; model.n()];
            for &v in &order {
                let p = model.cpt(v).p_one(&values);
                values[v] = u8::from(rng.random::<f64>() < p);
            }
            Scenario { assignment: values }
        })
        .collect()
}

/// Force each assigned node to its value with probability 1 under every
/// parent configuration. All other CPTs and the structure are unchanged.
pub fn clamp(model: &SbcnModel, assignments: &BTreeMap<usize, u8>) -> Result<SbcnModel> {
    for (&node, &value) in assignments {
        if node >= model.n() {
            return Err(Error::IndexOutOfRange { index: node, n: model.n() });
        }
        if value > 1 {
            return Err(Error::Invalid(format!("clamp value {value} for node {node} is not 0 or 1")));
        }
    }
    let cpts = model
        .cpts()
        .iter()
        .map(|cpt| match assignments.get(&cpt.node) {
            Some(&value) => Cpt {
                table: vec![f64::from(value); cpt.table.len()],
                ..cpt.clone()
            },
            None => cpt.clone(),
        })
        .collect();
    Ok(model.with_cpts(cpts))
}

/// Sample from the model clamped to `risky`.
pub fn stress_sample(model: &SbcnModel, risky: &BTreeMap<usize, u8>, count: usize, seed: u64) -> Result<Vec<Scenario>> {
    Ok(ancestral_sample(&clamp(model, risky)?, count, seed))
}

/// Parse `"name=0,other=1"` into node assignments.
pub fn parse_assignment(model: &SbcnModel, text: &str) -> Result<BTreeMap<usize, u8>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got {part:?}")))?;
        let node = model
            .index_of(name.trim())
            .ok_or_else(|| Error::Invalid(format!("unknown variable {:?}", name.trim())))?;
        let value = match value.trim() {
            "0" => 0,
            "1" => 1,
            other => return Err(Error::Invalid(format!("value {other:?} for {name} is not 0 or 1"))),
        };
        if out.insert(node, value).is_some() {
            return Err(Error::Invalid(format!("variable {name} assigned twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelDocument, NodeDocument};

    fn model(nodes: Vec<(Vec<usize>, Vec<f64>)>) -> SbcnModel {
        let edges = nodes
            .iter()
            .enumerate()
            .flat_map(|(v, (ps, _))| ps.iter().map(move |&p| (p, v)))
            .collect();
        let nodes = nodes
            .into_iter()
            .enumerate()
            .map(|(i, (parents, table))| NodeDocument {
                name: format!("v{i}"),
                rank: 0,
                parents,
                table,
            })
            .collect();
        SbcnModel::try_from(ModelDocument { nodes, edges, confidence: None }).unwrap()
    }

    #[test]
    fn bernoulli_mean() {
        let m = model(vec![(vec![], vec![0.7])]);
        let s = ancestral_sample(&m, 10_000, 1);
        let mean = s.iter().map(|x| x.assignment[0] as f64).sum::<f64>() / 1e4;
        assert!((mean - 0.7).abs() < 0.015, "{mean}");
    }

    #[test]
    fn two_node_table_marginal() {
        // A → B with P(B=1|A=0) = 0.7, P(B=1|A=1) = 0.6, P(A=1) = 0.5
        let m = model(vec![(vec![], vec![0.5]), (vec![0], vec![0.7, 0.6])]);
        let s = ancestral_sample(&m, 100_000, 2);
        let pb = s.iter().map(|x| x.assignment[1] as f64).sum::<f64>() / 1e5;
        assert!((pb - 0.65).abs() < 0.01, "{pb}");
    }

    #[test]
    fn clamping_everything_is_deterministic() {
        let m = model(vec![(vec![], vec![0.5]), (vec![0], vec![0.2, 0.9]), (vec![1], vec![0.3, 0.6])]);
        let all: BTreeMap<usize, u8> = [(0, 1), (1, 0), (2, 1)].into();
        let s = stress_sample(&m, &all, 200, 5).unwrap();
        assert!(s.iter().all(|x| x.assignment == vec![1, 0, 1]));
        assert_eq!(clamp(&m, &BTreeMap::new()).unwrap(), m);
        assert!(stress_sample(&m, &all, 0, 5).unwrap().is_empty());
    }

    #[test]
    fn clamp_rejects_bad_input() {
        let m = model(vec![(vec![], vec![0.5])]);
        assert!(clamp(&m, &[(3, 0)].into()).is_err());
        assert!(clamp(&m, &[(0, 2)].into()).is_err());
    }

    #[test]
    fn assignment_parsing() {
        let m = model(vec![(vec![], vec![0.5]), (vec![], vec![0.5])]);
        assert_eq!(parse_assignment(&m, "v1=0, v0=1").unwrap(), [(0, 1), (1, 0)].into());
        assert!(parse_assignment(&m, "v2=0").is_err());
        assert!(parse_assignment(&m, "v0=3").is_err());
        assert!(parse_assignment(&m, "v0").is_err());
        assert!(parse_assignment(&m, "v0=1,v0=0").is_err());
    }

    #[test]
    fn seeds_reproduce() {
        let m = model(vec![(vec![], vec![0.5]), (vec![0], vec![0.1, 0.8])]);
        assert_eq!(ancestral_sample(&m, 50, 9), ancestral_sample(&m, 50, 9));
        assert_ne!(ancestral_sample(&m, 50, 9), ancestral_sample(&m, 50, 10));
    }
}
