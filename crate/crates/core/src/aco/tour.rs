use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AcoError, AcoParams, PheromoneTable, TargetGate};
use crate::fpgraph::{EdgeStats, FpGraph};
use crate::ROOT;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TourOutcome {
    ReachedRoot,
    ReachedKnown(String),
    DeadEnd,
}

/// One ant's walk from the query term against edge direction.
///
/// `visited` is the ant's memory: the query first, then each chosen
/// prerequisite. Consecutive entries `(v[i], v[i+1])` correspond to the graph
/// edge `v[i+1] -> v[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntTour {
    pub ant_id: usize,
    pub visited: Vec<String>,
    pub association_count: usize,
    pub outcome: TourOutcome,
}

impl AntTour {
    pub fn start(ant_id: usize, query: &str) -> Self {
        AntTour {
            ant_id,
            visited: vec![query.to_string()],
            association_count: 0,
            outcome: TourOutcome::DeadEnd,
        }
    }

    /// Traversed graph edges as `(from, to)`, in walk order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.visited
            .windows(2)
            .map(|w| (w[1].as_str(), w[0].as_str()))
    }

    pub fn is_solution(&self) -> bool {
        self.outcome != TourOutcome::DeadEnd
    }

    pub fn edge_len(&self) -> usize {
        self.visited.len().saturating_sub(1)
    }
}

/// Ranking shared by the colony and the oracle: more associations first,
/// then fewer terms, then the lexicographically smaller walk.
pub fn compare_walks(
    a_assoc: usize,
    a_visited: &[String],
    b_assoc: usize,
    b_visited: &[String],
) -> Ordering {
    b_assoc
        .cmp(&a_assoc)
        .then(a_visited.len().cmp(&b_visited.len()))
        .then_with(|| a_visited.cmp(b_visited))
}

pub fn compare_tours(a: &AntTour, b: &AntTour) -> Ordering {
    compare_walks(
        a.association_count,
        &a.visited,
        b.association_count,
        &b.visited,
    )
}

/// The term whose presence in a candidate's data list makes it feasible.
pub fn gate_target(visited: &[String], gate: TargetGate) -> &str {
    match gate {
        TargetGate::Query => &visited[0],
        TargetGate::CurrentNode => visited.last().expect("non-empty walk"),
    }
}

/// Candidate edges `j -> i` out of the current term `i`: `j` not yet
/// visited, and either a terminal (Root or a known term) or holding the gate
/// target in its data list. Ordered by `j`.
pub fn feasible_neighborhood<'g>(
    graph: &'g FpGraph,
    visited: &[String],
    known: &BTreeSet<String>,
    gate: TargetGate,
) -> Vec<&'g EdgeStats> {
    let Some(current) = visited.last() else {
        return Vec::new();
    };
    let target = gate_target(visited, gate);
    let Ok(preds) = graph.predecessors(current) else {
        return Vec::new();
    };
    preds
        .into_iter()
        .filter(|e| !visited.contains(&e.from))
        .filter(|e| {
            e.from == ROOT || known.contains(&e.from) || graph.data_list_contains(&e.from, target)
        })
        .collect()
}

/// `P_j = tau_j^alpha * eta_j^beta / sum_l tau_l^alpha * eta_l^beta` with
/// `eta = frequency`, one entry per candidate.
pub fn transition_probabilities(
    pheromone: &PheromoneTable,
    candidates: &[&EdgeStats],
    params: &AcoParams,
) -> Result<Vec<f64>, AcoError> {
    if candidates.is_empty() {
        return Err(AcoError::EmptyNeighborhood);
    }
    // Log-space weights normalized by the largest keep the ratio exact under
    // common scaling of tau or eta.
    let log_weights: Vec<f64> = candidates
        .iter()
        .map(|e| {
            let tau = pheromone.tau(&e.from, &e.to).unwrap_or(f64::MIN_POSITIVE);
            let mut w = 0.0;
            if params.alpha != 0.0 {
                w += params.alpha * tau.ln();
            }
            if params.beta != 0.0 {
                w += params.beta * (e.frequency as f64).ln();
            }
            w
        })
        .collect();
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|w| (w - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Probability of moving along `edge` given the candidate list; exactly 0 for
/// edges outside it.
pub fn probability_of(
    edge: (&str, &str),
    pheromone: &PheromoneTable,
    candidates: &[&EdgeStats],
    params: &AcoParams,
) -> f64 {
    let Some(pos) = candidates
        .iter()
        .position(|e| e.from == edge.0 && e.to == edge.1)
    else {
        return 0.0;
    };
    transition_probabilities(pheromone, candidates, params).map_or(0.0, |p| p[pos])
}

/// Chooses the next edge: sampled among association candidates when any
/// exist, otherwise the highest-frequency candidate (ties to the smaller
/// source term).
fn choose_next<'g, R: Rng>(
    pheromone: &PheromoneTable,
    candidates: &[&'g EdgeStats],
    params: &AcoParams,
    rng: &mut R,
) -> &'g EdgeStats {
    let associations: Vec<&EdgeStats> = candidates
        .iter()
        .copied()
        .filter(|e| e.is_association)
        .collect();
    if associations.is_empty() {
        return candidates
            .iter()
            .copied()
            .max_by(|a, b| a.frequency.cmp(&b.frequency).then(b.from.cmp(&a.from)))
            .expect("non-empty candidates");
    }
    if associations.len() == 1 {
        return associations[0];
    }
    let probs = transition_probabilities(pheromone, &associations, params)
        .expect("non-empty association candidates");
    match WeightedIndex::new(&probs) {
        Ok(dist) => associations[dist.sample(rng)],
        Err(_) => associations[0],
    }
}

/// Walks one ant from `query` until it appends Root or a known term, or runs
/// out of feasible candidates.
pub fn construct_tour<R: Rng>(
    graph: &FpGraph,
    pheromone: &PheromoneTable,
    params: &AcoParams,
    query: &str,
    known: &BTreeSet<String>,
    ant_id: usize,
    rng: &mut R,
) -> Result<AntTour, AcoError> {
    if !graph.contains(query) {
        return Err(AcoError::UnknownTerm(query.to_string()));
    }
    if query == ROOT {
        return Err(AcoError::QueryIsRoot);
    }
    if known.contains(query) {
        return Err(AcoError::QueryKnown(query.to_string()));
    }
    let mut tour = AntTour::start(ant_id, query);
    loop {
        let candidates = feasible_neighborhood(graph, &tour.visited, known, params.gate);
        if candidates.is_empty() {
            tour.outcome = TourOutcome::DeadEnd;
            return Ok(tour);
        }
        let edge = choose_next(pheromone, &candidates, params, rng);
        if edge.is_association {
            tour.association_count += 1;
        }
        tour.visited.push(edge.from.clone());
        if edge.from == ROOT {
            tour.outcome = TourOutcome::ReachedRoot;
            return Ok(tour);
        }
        if known.contains(&edge.from) {
            tour.outcome = TourOutcome::ReachedKnown(edge.from.clone());
            return Ok(tour);
        }
    }
}

/// Recounts associations on a tour against the current graph flags.
pub fn count_associations(tour: &AntTour, graph: &FpGraph) -> usize {
    tour.edges()
        .filter(|(from, to)| graph.edge(from, to).is_some_and(|e| e.is_association))
        .count()
}

/// Best solution tour: most associations, then shortest, then lexicographic.
pub fn select_best(tours: &[AntTour]) -> Result<&AntTour, AcoError> {
    tours
        .iter()
        .filter(|t| t.is_solution())
        .min_by(|a, b| compare_tours(a, b))
        .ok_or_else(|| AcoError::NoPath {
            query: tours
                .first()
                .map(|t| t.visited[0].clone())
                .unwrap_or_default(),
            frontier: dead_end_frontier(tours),
        })
}

pub(crate) fn dead_end_frontier(tours: &[AntTour]) -> Vec<String> {
    tours
        .iter()
        .filter(|t| !t.is_solution())
        .filter_map(|t| t.visited.last().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
