//! Risk labeling of sampled scenarios and a binary decision tree over
//! factor variables whose `Risky` leaves become stress configurations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Risky,
    Profitable,
}

/// Long-only weights over stock variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Portfolio {
    pub stocks: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Portfolio {
    /// The same amount in every stock.
    pub fn equal(stocks: Vec<usize>) -> Self {
        let weights = vec![1.0; stocks.len()];
        Self { stocks, weights }
    }

    pub fn new(stocks: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if stocks.len() != weights.len() {
            return Err(Error::Invalid("one weight per stock".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) || weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Invalid("weights must be nonnegative with a positive sum".into()));
        }
        Ok(Self { stocks, weights })
    }
}

/// Total weight of the stocks that went up.
pub fn up_count(scenario: &Scenario, portfolio: &Portfolio) -> f64 {
    portfolio
        .stocks
        .iter()
        .zip(&portfolio.weights)
        .filter(|(&s, _)| scenario.assignment[s] == 1)
        .map(|(_, &w)| w)
        .sum()
}

/// Label the `⌈risky_fraction · N⌉` scenarios with the lowest up-count as
/// `Risky`, together with every scenario tied with the last of them.
pub fn label_scenarios(scenarios: &[Scenario], portfolio: &Portfolio, risky_fraction: f64) -> Result<Vec<Label>> {
    if scenarios.is_empty() {
        return Err(Error::Invalid("no scenarios to label".into()));
    }
    if !(0.0..=1.0).contains(&risky_fraction) {
        return Err(Error::Invalid(format!("risky fraction {risky_fraction} outside [0, 1]")));
    }
    let ups: Vec<f64> = scenarios.iter().map(|s| up_count(s, portfolio)).collect();
    // the small slack keeps e.g. 0.1 · 30 from rounding up to 4
    let k = ((risky_fraction * ups.len() as f64) - 1e-9).ceil().max(0.0) as usize;
    if k == 0 {
        return Ok(vec![Label::Profitable; ups.len()]);
    }
    let mut sorted = ups.clone();
    sorted.sort_by(f64::total_cmp);
    let cut = sorted[k - 1];
    Ok(ups
        .iter()
        .map(|&u| if u <= cut { Label::Risky } else { Label::Profitable })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    /// Defaults to the number of features when `None`.
    pub max_depth: Option<usize>,
    /// Minimum training rows in each child of a split.
    pub min_leaf: usize,
    /// A split must reach this value of `rows · Δgini / gini`, which is the
    /// Pearson χ² statistic of the 2×2 split table. Zero accepts any
    /// positive decrease.
    pub min_split_chi2: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_leaf: 5,
            min_split_chi2: 6.63,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        label: Label,
        risky: usize,
        profitable: usize,
    },
    Split {
        /// Model variable index of the factor tested here.
        variable: usize,
        name: String,
        zero: Box<TreeNode>,
        one: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
}

/// Factor columns the tree may split on.
#[derive(Debug, Clone, Copy)]
pub struct Features<'a> {
    /// Model variable index of each feature.
    pub variables: &'a [usize],
    pub names: &'a [String],
    /// One row per sample, indexed by model variable.
    pub rows: &'a [Vec<u8>],
}

fn gini(risky: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = risky as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

fn leaf(risky: usize, profitable: usize) -> TreeNode {
    // ties go to the non-stress label
    let label = if risky > profitable { Label::Risky } else { Label::Profitable };
    TreeNode::Leaf { label, risky, profitable }
}

/// Greedy Gini tree on binary factor features.
pub fn learn_tree(features: Features<'_>, labels: &[Label], params: &TreeParams) -> Result<DecisionTree> {
    if features.rows.len() != labels.len() {
        return Err(Error::Invalid(format!("{} rows but {} labels", features.rows.len(), labels.len())));
    }
    if features.variables.len() != features.names.len() {
        return Err(Error::Invalid("one name per feature".into()));
    }
    let max_depth = params.max_depth.unwrap_or(features.variables.len());
    let rows: Vec<usize> = (0..labels.len()).collect();
    let mut used = vec![false; features.variables.len()];
    let root = grow(&features, labels, params, &rows, 0, max_depth, &mut used);
    Ok(DecisionTree { root })
}

fn grow(f: &Features<'_>, labels: &[Label], params: &TreeParams, rows: &[usize], depth: usize, max_depth: usize, used: &mut [bool]) -> TreeNode {
    let total = rows.len();
    let risky = rows.iter().filter(|&&r| labels[r] == Label::Risky).count();
    let parent = gini(risky, total);
    if parent == 0.0 || depth >= max_depth || total < 2 * params.min_leaf.max(1) {
        return leaf(risky, total - risky);
    }

    let mut best: Option<(usize, f64)> = None;
    for (k, &var) in f.variables.iter().enumerate() {
        if used[k] {
            continue;
        }
        let (mut n1, mut r1) = (0usize, 0usize);
        for &r in rows {
            if f.rows[r][var] == 1 {
                n1 += 1;
                r1 += usize::from(labels[r] == Label::Risky);
            }
        }
        let n0 = total - n1;
        let r0 = risky - r1;
        if n0 < params.min_leaf || n1 < params.min_leaf {
            continue;
        }
        let child = (n0 as f64 * gini(r0, n0) + n1 as f64 * gini(r1, n1)) / total as f64;
        let gain = parent - child;
        if gain <= 1e-12 || total as f64 * gain / parent < params.min_split_chi2 {
            continue;
        }
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((k, gain));
        }
    }

    let Some((k, _)) = best else {
        return leaf(risky, total - risky);
    };
    let var = f.variables[k];
    let (zero_rows, one_rows): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| f.rows[r][var] == 0);
    used[k] = true;
    let zero = grow(f, labels, params, &zero_rows, depth + 1, max_depth, used);
    let one = grow(f, labels, params, &one_rows, depth + 1, max_depth, used);
    used[k] = false;
    TreeNode::Split {
        variable: var,
        name: f.names[k].clone(),
        zero: Box::new(zero),
        one: Box::new(one),
    }
}

impl DecisionTree {
    /// Label for a partial factor assignment; every variable tested on
    /// the traversed path must be present.
    pub fn predict(&self, assignment: &BTreeMap<usize, u8>) -> Result<Label> {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return Ok(*label),
                TreeNode::Split { variable, name, zero, one } => {
                    node = match assignment.get(variable) {
                        Some(0) => zero,
                        Some(_) => one,
                        None => return Err(Error::MissingFeature(name.clone())),
                    };
                }
            }
        }
    }

    /// Label for a full row indexed by model variable.
    pub fn predict_row(&self, row: &[u8]) -> Label {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Split { variable, zero, one, .. } => {
                    node = if row[*variable] == 0 { zero } else { one };
                }
            }
        }
    }

    /// One assignment per `Risky` leaf: the split decisions on its path.
    /// Leaves are listed depth-first, value-0 branches first.
    pub fn risky_paths(&self) -> Vec<BTreeMap<usize, u8>> {
        fn walk(node: &TreeNode, path: &mut BTreeMap<usize, u8>, out: &mut Vec<BTreeMap<usize, u8>>) {
            match node {
                TreeNode::Leaf { label: Label::Risky, .. } => out.push(path.clone()),
                TreeNode::Leaf { .. } => {}
                TreeNode::Split { variable, zero, one, .. } => {
                    path.insert(*variable, 0);
                    walk(zero, path, out);
                    path.insert(*variable, 1);
                    walk(one, path, out);
                    path.remove(variable);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut BTreeMap::new(), &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        fn d(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { zero, one, .. } => 1 + d(zero).max(d(one)),
            }
        }
        d(&self.root)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    /// Indented text rendering, one line per branch.
    pub fn render(&self) -> String {
        fn walk(node: &TreeNode, depth: usize, out: &mut String) {
            let pad = "|   ".repeat(depth);
            match node {
                TreeNode::Leaf { label, risky, profitable } => {
                    let _ = writeln!(out, "{pad}|--- {label:?} (risky {risky}, profitable {profitable})");
                }
                TreeNode::Split { name, zero, one, .. } => {
                    let _ = writeln!(out, "{pad}|--- {name} = 0");
                    walk(zero, depth + 1, out);
                    let _ = writeln!(out, "{pad}|--- {name} = 1");
                    walk(one, depth + 1, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, 0, &mut out);
        out
    }
}

/// Render a path as `name=value` pairs.
pub fn describe_path(path: &BTreeMap<usize, u8>, names: &[String]) -> String {
    path.iter()
        .map(|(&v, &x)| format!("{}={}", names[v], x))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scen(v: Vec<u8>) -> Scenario {
        Scenario { assignment: v }
    }

    #[test]
    fn up_counts() {
        let p = Portfolio::equal((0..10).collect());
        assert_eq!(up_count(&scen(vec![1; 10]), &p), 10.0);
        assert_eq!(up_count(&scen(vec![0; 10]), &p), 0.0);
        let w = Portfolio::new(vec![0, 1], vec![2.0, 0.5]).unwrap();
        assert_eq!(up_count(&scen(vec![1, 1]), &w), 2.5);
        assert!(Portfolio::new(vec![0], vec![0.0]).is_err());
    }

    #[test]
    fn labeling_cut_and_ties() {
        let p = Portfolio::equal(vec![0, 1]);
        let s: Vec<Scenario> = (0..10).map(|i| scen(vec![u8::from(i >= 3), u8::from(i >= 6)])).collect();
        // ups: 0,0,0,1,1,1,2,2,2,2 ; 20% → 2 lowest, tie pulls in the third zero
        let l = label_scenarios(&s, &p, 0.2).unwrap();
        assert_eq!(l.iter().filter(|&&x| x == Label::Risky).count(), 3);
        let same = vec![scen(vec![1, 0]); 5];
        assert!(label_scenarios(&same, &p, 0.1).unwrap().iter().all(|&x| x == Label::Risky));
        assert!(label_scenarios(&s, &p, 0.0).unwrap().iter().all(|&x| x == Label::Profitable));
        assert!(label_scenarios(&[], &p, 0.1).is_err());
        assert!(label_scenarios(&s, &p, 1.2).is_err());
    }

    fn features_for(rows: &[Vec<u8>], names: &[String]) -> (Vec<usize>, Vec<String>) {
        ((0..rows[0].len()).collect(), names.to_vec())
    }

    #[test]
    fn separable_labels_split_once() {
        let rows: Vec<Vec<u8>> = (0..40).map(|i| vec![(i % 2) as u8, ((i / 2) % 2) as u8]).collect();
        let labels: Vec<Label> = rows.iter().map(|r| if r[0] == 0 { Label::Risky } else { Label::Profitable }).collect();
        let names = vec!["S".to_string(), "M".to_string()];
        let (vars, names) = features_for(&rows, &names);
        let f = Features { variables: &vars, names: &names, rows: &rows };
        let t = learn_tree(f, &labels, &TreeParams::default()).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.risky_paths(), vec![BTreeMap::from([(0, 0)])]);
        assert_eq!(t.predict(&BTreeMap::from([(0, 1)])).unwrap(), Label::Profitable);
        assert!(t.predict(&BTreeMap::new()).is_err());
        assert!(t.render().contains("S = 0"));
        for (r, l) in rows.iter().zip(&labels) {
            assert_eq!(t.predict_row(r), *l);
        }
    }

    #[test]
    fn single_class_is_single_leaf() {
        let rows = vec![vec![0u8, 1]; 20];
        let labels = vec![Label::Risky; 20];
        let names = vec!["a".to_string(), "b".to_string()];
        let vars = vec![0, 1];
        let t = learn_tree(Features { variables: &vars, names: &names, rows: &rows }, &labels, &TreeParams::default()).unwrap();
        assert_eq!(t.root, TreeNode::Leaf { label: Label::Risky, risky: 20, profitable: 0 });
        let single = DecisionTree { root: leaf(1, 3) };
        assert!(single.risky_paths().is_empty());
    }

    #[test]
    fn majority_tie_is_profitable() {
        assert!(matches!(leaf(3, 3), TreeNode::Leaf { label: Label::Profitable, .. }));
    }

    #[test]
    fn json_round_trip() {
        let t = DecisionTree {
            root: TreeNode::Split {
                variable: 1,
                name: "SMB".into(),
                zero: Box::new(leaf(9, 1)),
                one: Box::new(leaf(0, 10)),
            },
        };
        let back: DecisionTree = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(describe_path(&t.risky_paths()[0], &["Km".into(), "SMB".into()]), "SMB=0");
    }
}
