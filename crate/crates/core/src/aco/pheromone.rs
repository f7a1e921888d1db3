use std::collections::BTreeMap;

use super::{AcoError, AcoParams, AntTour, TourOutcome};
use crate::fpgraph::FpGraph;

/// Trail value per graph edge, keyed by `(from, to)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneTable {
    tau: BTreeMap<(String, String), f64>,
    iteration: u64,
}

impl PheromoneTable {
    pub fn initialize(graph: &FpGraph, tau0: f64) -> Result<Self, AcoError> {
        if !(tau0 > 0.0 && tau0.is_finite()) {
            return Err(AcoError::InvalidParameter(format!(
                "tau0 must be positive, got {tau0}"
            )));
        }
        Ok(PheromoneTable {
            tau: graph
                .edges()
                .map(|e| ((e.from.clone(), e.to.clone()), tau0))
                .collect(),
            iteration: 0,
        })
    }

    pub fn tau(&self, from: &str, to: &str) -> Option<f64> {
        self.tau.get(&(from.to_string(), to.to_string())).copied()
    }

    /// Overwrites the trail on an existing edge. Returns `false` if the edge
    /// is not in the table.
    pub fn set(&mut self, from: &str, to: &str, value: f64) -> bool {
        match self.tau.get_mut(&(from.to_string(), to.to_string())) {
            Some(tau) => {
                *tau = value;
                true
            }
            None => false,
        }
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.tau
            .iter()
            .map(|((f, t), v)| (f.as_str(), t.as_str(), *v))
    }

    /// Scales every trail value; used to check scale invariance.
    pub fn scaled(&self, factor: f64) -> Self {
        PheromoneTable {
            tau: self
                .tau
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
            iteration: self.iteration,
        }
    }

    /// `tau <- rho * tau + sum_k Q * C_k` over the tours that used each edge.
    ///
    /// Dead-end tours deposit nothing.
    pub fn update_trail(&mut self, tours: &[AntTour], params: &AcoParams) {
        let mut deposit: BTreeMap<(String, String), f64> = BTreeMap::new();
        for tour in tours.iter().filter(|t| t.outcome != TourOutcome::DeadEnd) {
            let amount = params.q_factor * tour.association_count as f64;
            for (from, to) in tour.edges() {
                *deposit
                    .entry((from.to_string(), to.to_string()))
                    .or_default() += amount;
            }
        }
        for (key, tau) in self.tau.iter_mut() {
            *tau = params.rho * *tau + deposit.get(key).copied().unwrap_or(0.0);
        }
        self.iteration += 1;
    }
}
