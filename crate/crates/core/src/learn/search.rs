use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use super::score::{FamilyScorer, ScoreFunction};
use super::suppes::EdgeSet;
use super::LearnOptions;
use crate::model::{BinaryDataset, Dag};
use crate::rng::{derive_seed, seeded_rng};

/// Stochastic hill climbing over DAGs whose arcs lie in `allowed`.
///
/// The first climb starts from the empty graph and repeatedly proposes one
/// uniformly chosen neighbour (a single arc added or removed, acyclic,
/// inside `allowed`), moving to it only if the score strictly improves.
/// A climb ends once every neighbour of the incumbent has been rejected,
/// after `max_iterations` consecutive rejections, or after
/// `100 · max_iterations` proposals in total. With `restarts > 0`, each
/// extra climb starts from a random acyclic subset of `allowed` and the
/// best of all `restarts + 1` climbs is returned (ties go to the earliest).
pub fn hill_climb(data: &BinaryDataset, allowed: &EdgeSet, options: &LearnOptions) -> Dag {
    hill_climb_scored(data, allowed, options).0
}

/// [`hill_climb`] plus the score of the returned graph.
pub fn hill_climb_scored(data: &BinaryDataset, allowed: &EdgeSet, options: &LearnOptions) -> (Dag, f64) {
    assert_eq!(allowed.n(), data.n(), "candidate set and dataset sizes differ");
    let score = ScoreFunction::new(options.criterion, options.aic_conventional, data.m()).with_penalty(options.penalty);
    let arcs: Vec<(usize, usize)> = allowed.iter().collect();
    let climb = |r: u64| climb_once(data, &arcs, score, options.max_iterations.max(1), derive_seed(options.seed, r), r > 0);
    if options.restarts == 0 {
        return climb(0);
    }
    let results: Vec<(Dag, f64)> = (0..=options.restarts as u64).into_par_iter().map(climb).collect();
    results
        .into_iter()
        .reduce(|best, cur| if cur.1 > best.1 { cur } else { best })
        .expect("at least one climb")
}

fn climb_once(
    data: &BinaryDataset,
    arcs: &[(usize, usize)],
    score: ScoreFunction,
    max_iterations: usize,
    seed: u64,
    random_start: bool,
) -> (Dag, f64) {
    let n = data.n();
    let mut rng = seeded_rng(seed);
    let mut scorer = FamilyScorer::new(data, score);
    let mut dag = Dag::empty(n);
    if random_start {
        let mut order = arcs.to_vec();
        order.shuffle(&mut rng);
        for (u, v) in order {
            if rng.random_bool(0.5) && !dag.creates_cycle(u, v) {
                dag.add_edge(u, v).expect("checked acyclic");
            }
        }
    }
    let mut family: Vec<f64> = (0..n).map(|v| scorer.family(v, dag.parents(v))).collect();
    let total = |f: &[f64]| f.iter().sum::<f64>();

    let max_total = max_iterations.saturating_mul(100);
    let mut proposals = 0usize;
    let mut rejected_in_a_row = 0usize;

    'outer: loop {
        let neighbours: Vec<(usize, usize)> = arcs
            .iter()
            .copied()
            .filter(|&(u, v)| dag.has_edge(u, v) || !dag.creates_cycle(u, v))
            .collect();
        if neighbours.is_empty() {
            break;
        }
        let mut tried = vec![false; neighbours.len()];
        let mut untried = neighbours.len();
        loop {
            if rejected_in_a_row >= max_iterations || proposals >= max_total {
                break 'outer;
            }
            let k = rng.random_range(0..neighbours.len());
            proposals += 1;
            let (u, v) = neighbours[k];
            let mut parents = dag.parents(v).to_vec();
            let removing = dag.has_edge(u, v);
            if removing {
                parents.retain(|&p| p != u);
            } else {
                let at = parents.partition_point(|&p| p < u);
                parents.insert(at, u);
            }
            let candidate = scorer.family(v, &parents);
            if candidate > family[v] {
                if removing {
                    dag.remove_edge(u, v);
                } else {
                    dag.add_edge(u, v).expect("neighbour is acyclic");
                }
                family[v] = candidate;
                rejected_in_a_row = 0;
                continue 'outer;
            }
            rejected_in_a_row += 1;
            if !tried[k] {
                tried[k] = true;
                untried -= 1;
                if untried == 0 {
                    break 'outer;
                }
            }
        }
    }
    let s = total(&family);
    (dag, s)
}
