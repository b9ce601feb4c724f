use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed acyclic graph over nodes `0..n`.
///
/// Acyclicity is enforced on construction and by every mutator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DagRepr", into = "DagRepr")]
pub struct Dag {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct DagRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<DagRepr> for Dag {
    type Error = Error;

    fn try_from(r: DagRepr) -> Result<Self> {
        Dag::from_edges(r.n, r.edges)
    }
}

impl From<Dag> for DagRepr {
    fn from(d: Dag) -> Self {
        DagRepr {
            n: d.n,
            edges: d.edges.into_iter().collect(),
        }
    }
}

impl Dag {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
        }
    }

    /// Build from an edge list. Duplicates are an error, as are self-loops,
    /// out-of-range endpoints and cycles.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut dag = Self::empty(n);
        for (u, v) in edges {
            dag.check_endpoints(u, v)?;
            if dag.has_edge(u, v) {
                return Err(Error::Invalid(format!("duplicate edge ({u}, {v})")));
            }
            dag.insert_unchecked(u, v);
        }
        if has_cycle(n, dag.edges.iter().copied()) {
            return Err(Error::CycleDetected);
        }
        Ok(dag)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Parents of `v` in ascending index order.
    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    fn check_endpoints(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::IndexOutOfRange { index: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, u: usize, v: usize) {
        self.edges.insert((u, v));
        let p = &mut self.parents[v];
        let at = p.partition_point(|&x| x < u);
        p.insert(at, u);
        let c = &mut self.children[u];
        let at = c.partition_point(|&x| x < v);
        c.insert(at, v);
    }

    /// True if a directed path leads from `from` to `to` (a node reaches itself).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for &c in &self.children[x] {
                if c == to {
                    return true;
                }
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Whether adding `u → v` would close a cycle.
    pub fn creates_cycle(&self, u: usize, v: usize) -> bool {
        self.reaches(v, u)
    }

    /// Add `u → v`. Adding an existing edge is an error.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_endpoints(u, v)?;
        if self.has_edge(u, v) {
            return Err(Error::Invalid(format!("duplicate edge ({u}, {v})")));
        }
        if self.creates_cycle(u, v) {
            return Err(Error::Cycle(u, v));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    /// Remove `u → v`; returns whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.edges.remove(&(u, v)) {
            return false;
        }
        self.parents[v].retain(|&x| x != u);
        self.children[u].retain(|&x| x != v);
        true
    }

    /// Kahn's algorithm, always taking the smallest ready index.
    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(self.n, self.edges.iter().copied()).expect("Dag is acyclic")
    }
}

/// Deterministic topological order of an arbitrary edge list, or
/// [`Error::CycleDetected`].
pub fn topological_order<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in edges {
        out[u].push(v);
        indeg[v] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &out[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::CycleDetected)
    }
}

/// Cycle test on an edge list that may not form a DAG. Self-loops count.
pub fn has_cycle<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in edges {
        out[u].push(v);
        indeg[v] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut visited = 0;
    while let Some(v) = queue.pop_front() {
        visited += 1;
        for &c in &out[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    visited < n
}
