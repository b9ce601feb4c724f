use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::stats::{ones, PairCounts};
use crate::error::{Error, Result};
use crate::model::BinaryDataset;

/// Candidate arcs for the structure search. Unlike [`crate::Dag`] it may
/// contain cycles; it never contains self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u, v));
        }
        Ok(Self { n, edges: set })
    }

    /// Every ordered pair of distinct nodes.
    pub fn all_pairs(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// How temporal priority between two variables is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalPriority {
    /// `v` may precede `u` iff rank(v) ≤ rank(u).
    #[default]
    Rank,
    /// `v` precedes `u` iff P̂(v) > P̂(u).
    Marginal,
}

/// Arcs `(v, u)` satisfying temporal priority (by rank) and strict
/// probability raising P̂(u | v) > P̂(u | ¬v).
pub fn prima_facie_edges(data: &BinaryDataset) -> EdgeSet {
    prima_facie_edges_with(data, TemporalPriority::Rank)
}

pub fn prima_facie_edges_with(data: &BinaryDataset, priority: TemporalPriority) -> EdgeSet {
    let n = data.n();
    let m = data.m();
    let count: Vec<usize> = (0..n).map(|j| ones(data.column(j))).collect();
    // degenerate marginals take part in no arc
    let usable: Vec<bool> = count.iter().map(|&c| c > 0 && c < m).collect();
    let rank = data.rank();

    let mut edges = BTreeSet::new();
    for v in 0..n {
        for u in (v + 1)..n {
            if !(usable[v] && usable[u]) {
                continue;
            }
            let (v_first, u_first) = match priority {
                TemporalPriority::Rank => (rank[v] <= rank[u], rank[u] <= rank[v]),
                TemporalPriority::Marginal => (count[v] > count[u], count[u] > count[v]),
            };
            if !(v_first || u_first) {
                continue;
            }
            let vu = PairCounts::new(data.column(v), data.column(u));
            let uv = PairCounts::new(data.column(u), data.column(v));
            let fwd = v_first && vu.raises();
            let bwd = u_first && uv.raises();
            match (fwd, bwd) {
                (true, false) => {
                    edges.insert((v, u));
                }
                (false, true) => {
                    edges.insert((u, v));
                }
                (true, true) => {
                    // keep the direction with the larger raising margin, ties to the lower index (v < u)
                    if compare_margins(vu.margin(), uv.margin()) == Ordering::Less {
                        edges.insert((u, v));
                    } else {
                        edges.insert((v, u));
                    }
                }
                (false, false) => {}
            }
        }
    }
    EdgeSet { n, edges }
}

fn compare_margins(a: (i128, i128), b: (i128, i128)) -> Ordering {
    // denominators are positive
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_column_excluded() {
        let d = BinaryDataset::unnamed(vec![vec![1, 1, 1, 1], vec![1, 1, 0, 0], vec![1, 1, 0, 0]]).unwrap();
        let e = prima_facie_edges(&d);
        assert!(e.iter().all(|(a, b)| a != 0 && b != 0));
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn rank_blocks_backward_arcs() {
        let d = BinaryDataset::unnamed(vec![vec![1, 1, 0, 0], vec![1, 1, 0, 0]])
            .unwrap()
            .with_rank(vec![1, 0])
            .unwrap();
        assert_eq!(prima_facie_edges(&d).iter().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn equal_raising_is_rejected() {
        // P(b|a) = P(b|¬a) = 0.5
        let d = BinaryDataset::unnamed(vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0]]).unwrap();
        assert!(prima_facie_edges(&d).is_empty());
    }

    #[test]
    fn equal_rank_conflict_keeps_larger_margin() {
        // a = [1,1,0,0,0,0], b = [1,1,1,0,0,0]
        // P(b|a)-P(b|¬a) = 1 - 1/4 = 0.75 ; P(a|b)-P(a|¬b) = 2/3 - 0 = 0.667
        let d = BinaryDataset::unnamed(vec![vec![1, 1, 0, 0, 0, 0], vec![1, 1, 1, 0, 0, 0]]).unwrap();
        assert_eq!(prima_facie_edges(&d).iter().collect::<Vec<_>>(), vec![(0, 1)]);
        let swapped = d.select_columns(&[1, 0]);
        assert_eq!(prima_facie_edges(&swapped).iter().collect::<Vec<_>>(), vec![(1, 0)]);
        // identical columns tie exactly: lower index wins
        let d = BinaryDataset::unnamed(vec![vec![1, 0, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(prima_facie_edges(&d).iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn marginal_priority() {
        // column 1 is more frequent, so it is the cause under marginal priority
        let d = BinaryDataset::unnamed(vec![vec![1, 1, 0, 0, 0, 0], vec![1, 1, 1, 0, 0, 0]]).unwrap();
        let e = prima_facie_edges_with(&d, TemporalPriority::Marginal);
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn edge_set_rejects_self_loops() {
        assert!(EdgeSet::new(2, [(1, 1)]).is_err());
        assert_eq!(EdgeSet::all_pairs(3).len(), 6);
    }
}
