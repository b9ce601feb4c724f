use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dag::{has_cycle, Dag};
use crate::error::{Error, Result};

/// P(node = 1 | parent configuration) for every configuration of the
/// node's parents.
///
/// Configurations are indexed by reading the parent values (ascending
/// parent index) as a binary number whose least significant bit is the
/// first parent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cpt {
    pub node: usize,
    pub parents: Vec<usize>,
    pub table: Vec<f64>,
}

impl Cpt {
    /// Row index of the configuration found in `values` (a full assignment).
    pub fn config_index(&self, values: &[u8]) -> usize {
        config_index(&self.parents, values)
    }

    /// P(node = 1) under the parent values found in `values`.
    pub fn p_one(&self, values: &[u8]) -> f64 {
        self.table[self.config_index(values)]
    }
}

pub(crate) fn config_index(parents: &[usize], values: &[u8]) -> usize {
    parents
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &p)| acc | ((values[p] as usize) << k))
}

/// Confidence attached to an edge by bootstrap resampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeConfidence {
    pub from: usize,
    pub to: usize,
    pub value: f64,
}

/// A learned causal network: the graph with its fitted CPTs, plus the variable
/// ranks it was learned under.
#[derive(Debug, Clone, PartialEq)]
pub struct SbcnModel {
    names: Vec<String>,
    rank: Vec<u32>,
    dag: Dag,
    cpts: Vec<Cpt>,
    confidence: Option<BTreeMap<(usize, usize), f64>>,
}

impl SbcnModel {
    pub fn new(
        names: Vec<String>,
        rank: Vec<u32>,
        dag: Dag,
        cpts: Vec<Cpt>,
        confidence: Option<BTreeMap<(usize, usize), f64>>,
    ) -> Result<Self> {
        let doc = ModelDocument::from_parts(&names, &rank, &dag, &cpts, confidence.as_ref());
        let violations = validate_model(&doc);
        if !violations.is_empty() {
            return Err(Error::Schema(violations.join("; ")));
        }
        Ok(Self {
            names,
            rank,
            dag,
            cpts,
            confidence,
        })
    }

    pub fn n(&self) -> usize {
        self.dag.n()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> &[u32] {
        &self.rank
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cpt(&self, node: usize) -> &Cpt {
        &self.cpts[node]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn confidence(&self) -> Option<&BTreeMap<(usize, usize), f64>> {
        self.confidence.as_ref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn with_cpts(&self, cpts: Vec<Cpt>) -> Self {
        Self {
            cpts,
            ..self.clone()
        }
    }

    pub(crate) fn with_confidence(mut self, confidence: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        if let Some(&(u, v)) = confidence.keys().find(|&&(u, v)| !self.dag.has_edge(u, v)) {
            return Err(Error::Invalid(format!("confidence for absent edge ({u}, {v})")));
        }
        self.confidence = Some(confidence);
        Ok(self)
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument::from_parts(&self.names, &self.rank, &self.dag, &self.cpts, self.confidence.as_ref())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::try_from(doc)
    }
}

/// Serialized form of a model. It may hold an inconsistent model; run
/// [`validate_model`] or convert with `SbcnModel::try_from`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub nodes: Vec<NodeDocument>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<Vec<EdgeConfidence>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub name: String,
    pub rank: u32,
    pub parents: Vec<usize>,
    pub table: Vec<f64>,
}

impl ModelDocument {
    fn from_parts(
        names: &[String],
        rank: &[u32],
        dag: &Dag,
        cpts: &[Cpt],
        confidence: Option<&BTreeMap<(usize, usize), f64>>,
    ) -> Self {
        let nodes = names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let cpt = cpts.iter().find(|c| c.node == i);
                NodeDocument {
                    name: name.clone(),
                    rank: rank.get(i).copied().unwrap_or(0),
                    parents: cpt.map(|c| c.parents.clone()).unwrap_or_default(),
                    table: cpt.map(|c| c.table.clone()).unwrap_or_default(),
                }
            })
            .collect();
        let confidence = confidence.map(|m| {
            m.iter()
                .map(|(&(from, to), &value)| EdgeConfidence { from, to, value })
                .collect()
        });
        Self {
            nodes,
            edges: dag.edges().collect(),
            confidence,
        }
    }
}

impl TryFrom<ModelDocument> for SbcnModel {
    type Error = Error;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        let violations = validate_model(&doc);
        if !violations.is_empty() {
            return Err(Error::Schema(violations.join("; ")));
        }
        let n = doc.nodes.len();
        let dag = Dag::from_edges(n, doc.edges.iter().copied())?;
        let cpts = doc
            .nodes
            .iter()
            .enumerate()
            .map(|(i, nd)| Cpt {
                node: i,
                parents: nd.parents.clone(),
                table: nd.table.clone(),
            })
            .collect();
        let confidence = doc
            .confidence
            .map(|v| v.into_iter().map(|c| ((c.from, c.to), c.value)).collect());
        Ok(Self {
            names: doc.nodes.iter().map(|nd| nd.name.clone()).collect(),
            rank: doc.nodes.iter().map(|nd| nd.rank).collect(),
            dag,
            cpts,
            confidence,
        })
    }
}

/// Every invariant violation in `doc`, as human-readable strings.
/// Empty iff the document describes a valid model.
pub fn validate_model(doc: &ModelDocument) -> Vec<String> {
    let n = doc.nodes.len();
    let mut out = Vec::new();

    let mut names = std::collections::HashSet::new();
    for nd in &doc.nodes {
        if !names.insert(nd.name.as_str()) {
            out.push(format!("duplicate node name {:?}", nd.name));
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut edges_ok = true;
    for &(u, v) in &doc.edges {
        if u >= n || v >= n {
            out.push(format!("edge ({u}, {v}) references a node outside 0..{n}"));
            edges_ok = false;
        } else if u == v {
            out.push(format!("self-loop on node {u}"));
            edges_ok = false;
        } else if !seen.insert((u, v)) {
            out.push(format!("duplicate edge ({u}, {v})"));
        }
    }
    if edges_ok && has_cycle(n, seen.iter().copied()) {
        out.push("edges contain a directed cycle".to_string());
    }

    for (i, nd) in doc.nodes.iter().enumerate() {
        let expected: Vec<usize> = seen.iter().filter(|&&(_, v)| v == i).map(|&(u, _)| u).collect();
        if nd.parents != expected {
            out.push(format!(
                "node {} ({}) lists parents {:?} but the graph has {:?}",
                i, nd.name, nd.parents, expected
            ));
        }
        let want = 1usize.checked_shl(nd.parents.len() as u32).unwrap_or(0);
        if nd.table.len() != want {
            out.push(format!(
                "node {} ({}) has {} table entries, expected {}",
                i,
                nd.name,
                nd.table.len(),
                want
            ));
        }
        if let Some(p) = nd.table.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            out.push(format!("node {} ({}) has probability {} outside [0, 1]", i, nd.name, p));
        }
    }

    if let Some(conf) = &doc.confidence {
        for c in conf {
            if !seen.contains(&(c.from, c.to)) {
                out.push(format!("confidence given for absent edge ({}, {})", c.from, c.to));
            }
            if !(0.0..=1.0).contains(&c.value) {
                out.push(format!("confidence {} for edge ({}, {}) outside [0, 1]", c.value, c.from, c.to));
            }
        }
    }
    out
}
