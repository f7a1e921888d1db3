//! Ant-colony search for learning paths.
//!
//! Ants start at the query term and walk edges backwards, from a term to
//! one of its prerequisites, until they reach Root or a term the learner
//! already knows. A prerequisite is only a candidate when its data list shows
//! it was used to define the gate target (see [`TargetGate`]). Whenever the
//! candidates include association edges the ant samples among those with
//! probability proportional to `tau^alpha * frequency^beta`; otherwise it
//! takes the most frequent edge. After each iteration every solution tour
//! deposits `Q * C` pheromone on its edges, where `C` counts its
//! associations. The best path has the most associations, then the fewest
//! terms.
//!
//! [`brute_force_oracle`] enumerates every feasible simple path under the same
//! gate and ranking, for checking the colony on small graphs.

mod oracle;
mod params;
mod pheromone;
mod tour;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgraph::FpGraph;
use crate::ROOT;

pub use oracle::{brute_force_oracle, oracle_report, OracleReport, ORACLE_LIMIT};
pub use params::{AcoParams, ParamOverrides, TargetGate};
pub use pheromone::PheromoneTable;
pub use tour::{
    compare_tours, construct_tour, count_associations, feasible_neighborhood, gate_target,
    probability_of, select_best, transition_probabilities, AntTour, TourOutcome,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcoError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
    #[error("the root cannot be queried")]
    QueryIsRoot,
    #[error("{0:?} is already known")]
    QueryKnown(String),
    #[error("empty feasible neighborhood")]
    EmptyNeighborhood,
    #[error("no path from {query:?} to the root or a known term (dead ends at {frontier:?})")]
    NoPath {
        query: String,
        frontier: Vec<String>,
    },
    #[error("oracle enumeration exceeded {limit} partial paths")]
    OracleTooLarge { limit: usize },
}

/// A recommended prerequisite sequence, Root (or the known endpoint) first,
/// query last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningPath {
    pub query: String,
    pub path: Vec<String>,
    #[serde(rename = "recommended")]
    pub recommended_terms: Vec<String>,
    #[serde(rename = "associations")]
    pub association_count: usize,
    #[serde(rename = "iterations")]
    pub iterations_run: usize,
    #[serde(skip)]
    pub tours_attempted: usize,
}

impl LearningPath {
    pub fn from_walk(
        visited: &[String],
        association_count: usize,
        iterations_run: usize,
        tours_attempted: usize,
    ) -> Self {
        let path: Vec<String> = visited.iter().rev().cloned().collect();
        let recommended_terms = if path.len() > 2 {
            path[1..path.len() - 1].to_vec()
        } else {
            Vec::new()
        };
        LearningPath {
            query: visited[0].clone(),
            path,
            recommended_terms,
            association_count,
            iterations_run,
            tours_attempted,
        }
    }

    /// Root, or the known term the path starts from.
    pub fn endpoint(&self) -> &str {
        &self.path[0]
    }

    pub fn reached_root(&self) -> bool {
        self.endpoint() == ROOT
    }

    pub fn recommended_set(&self) -> BTreeSet<&str> {
        self.recommended_terms.iter().map(String::as_str).collect()
    }

    /// Path edges as `(from, to)` in path order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.path.windows(2).map(|w| (w[0].as_str(), w[1].as_str()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("learning path serializes")
    }
}

/// Everything a colony run produced, for callers that need the trail.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub path: LearningPath,
    pub best: AntTour,
    pub pheromone: PheromoneTable,
}

/// Random stream for one ant in one iteration; independent of the order in
/// which ants are scheduled.
pub fn ant_rng(seed: u64, iteration: usize, ant: usize, n_ants: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((iteration * n_ants + ant) as u64);
    rng
}

pub(crate) fn check_query(
    graph: &FpGraph,
    query: &str,
    known: &BTreeSet<String>,
) -> Result<(), AcoError> {
    if query == ROOT {
        return Err(AcoError::QueryIsRoot);
    }
    if !graph.contains(query) {
        return Err(AcoError::UnknownTerm(query.to_string()));
    }
    if known.contains(query) {
        return Err(AcoError::QueryKnown(query.to_string()));
    }
    Ok(())
}

/// Runs the colony and returns the best path together with the final trail.
///
/// Stops after `max_iterations`, or earlier once the best tour has not
/// changed for `stagnation_window` consecutive iterations.
pub fn search(
    graph: &FpGraph,
    query: &str,
    known: &BTreeSet<String>,
    params: &AcoParams,
) -> Result<SearchOutcome, AcoError> {
    params.validate()?;
    check_query(graph, query, known)?;

    let mut pheromone = PheromoneTable::initialize(graph, params.tau0)?;
    let mut best: Option<AntTour> = None;
    let mut frontier = BTreeSet::new();
    let mut stagnant = 0;
    let mut iterations_run = 0;
    let mut tours_attempted = 0;

    for iteration in 0..params.max_iterations {
        iterations_run += 1;
        let tours = (0..params.n_ants)
            .map(|ant| {
                let mut rng = ant_rng(params.seed, iteration, ant, params.n_ants);
                construct_tour(graph, &pheromone, params, query, known, ant, &mut rng)
            })
            .collect::<Result<Vec<_>, _>>()?;
        tours_attempted += tours.len();
        frontier.extend(tour::dead_end_frontier(&tours));

        let improved = match (select_best(&tours), &best) {
            (Ok(candidate), None) => {
                best = Some(candidate.clone());
                true
            }
            (Ok(candidate), Some(current)) if compare_tours(candidate, current).is_lt() => {
                best = Some(candidate.clone());
                true
            }
            _ => false,
        };
        stagnant = if improved { 0 } else { stagnant + 1 };

        let solutions: Vec<AntTour> = tours.into_iter().filter(AntTour::is_solution).collect();
        pheromone.update_trail(&solutions, params);

        if stagnant >= params.stagnation_window {
            break;
        }
    }

    let best = best.ok_or_else(|| AcoError::NoPath {
        query: query.to_string(),
        frontier: frontier.into_iter().collect(),
    })?;
    let path = LearningPath::from_walk(
        &best.visited,
        best.association_count,
        iterations_run,
        tours_attempted,
    );
    Ok(SearchOutcome {
        path,
        best,
        pheromone,
    })
}

pub fn learning_path(
    graph: &FpGraph,
    query: &str,
    known: &BTreeSet<String>,
    params: &AcoParams,
) -> Result<LearningPath, AcoError> {
    search(graph, query, known, params).map(|o| o.path)
}
