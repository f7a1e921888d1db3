use std::collections::BTreeSet;

use super::tour::{compare_walks, feasible_neighborhood};
use super::{check_query, AcoError, LearningPath, TargetGate};
use crate::fpgraph::FpGraph;
use crate::ROOT;

/// Upper bound on partial paths the oracle will enumerate.
pub const ORACLE_LIMIT: usize = 1 << 20;

struct Enumeration<'a> {
    graph: &'a FpGraph,
    known: &'a BTreeSet<String>,
    gate: TargetGate,
    walk: Vec<String>,
    associations: usize,
    partials: usize,
    complete: usize,
    optimal: usize,
    best: Option<(usize, Vec<String>)>,
}

impl Enumeration<'_> {
    fn visit(&mut self) -> Result<(), AcoError> {
        self.partials += 1;
        if self.partials > ORACLE_LIMIT {
            return Err(AcoError::OracleTooLarge {
                limit: ORACLE_LIMIT,
            });
        }
        let last = self.walk.last().expect("walk starts at the query");
        if self.walk.len() > 1 && (last == ROOT || self.known.contains(last)) {
            self.complete += 1;
            let (better, same_rank) = match &self.best {
                None => (true, false),
                Some((assoc, walk)) => (
                    compare_walks(self.associations, &self.walk, *assoc, walk).is_lt(),
                    self.associations == *assoc && self.walk.len() == walk.len(),
                ),
            };
            if same_rank {
                self.optimal += 1;
            } else if better {
                self.optimal = 1;
            }
            if better {
                self.best = Some((self.associations, self.walk.clone()));
            }
            return Ok(());
        }
        let candidates: Vec<(String, bool)> =
            feasible_neighborhood(self.graph, &self.walk, self.known, self.gate)
                .into_iter()
                .map(|e| (e.from.clone(), e.is_association))
                .collect();
        for (next, is_association) in candidates {
            self.walk.push(next);
            self.associations += usize::from(is_association);
            let result = self.visit();
            self.associations -= usize::from(is_association);
            self.walk.pop();
            result?;
        }
        Ok(())
    }
}

/// Result of an exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub path: LearningPath,
    /// Walks sharing the best association count and length.
    pub optimal_walks: usize,
    /// Every complete walk enumerated.
    pub complete_walks: usize,
}

impl OracleReport {
    pub fn is_unique(&self) -> bool {
        self.optimal_walks == 1
    }
}

/// Exhaustively enumerates every feasible simple walk from `query` to Root or
/// a known term and returns the best one under the colony's ranking.
///
/// Unlike the ants it ignores the association-first step rule, so it sees
/// walks an ant can never take.
pub fn brute_force_oracle(
    graph: &FpGraph,
    query: &str,
    known: &BTreeSet<String>,
    gate: TargetGate,
) -> Result<LearningPath, AcoError> {
    oracle_report(graph, query, known, gate).map(|r| r.path)
}

/// [`brute_force_oracle`] plus the number of walks tied for best.
pub fn oracle_report(
    graph: &FpGraph,
    query: &str,
    known: &BTreeSet<String>,
    gate: TargetGate,
) -> Result<OracleReport, AcoError> {
    check_query(graph, query, known)?;
    let mut search = Enumeration {
        graph,
        known,
        gate,
        walk: vec![query.to_string()],
        associations: 0,
        partials: 0,
        complete: 0,
        optimal: 0,
        best: None,
    };
    search.visit()?;
    match search.best {
        Some((associations, walk)) => Ok(OracleReport {
            path: LearningPath::from_walk(&walk, associations, 0, search.complete),
            optimal_walks: search.optimal,
            complete_walks: search.complete,
        }),
        None => Err(AcoError::NoPath {
            query: query.to_string(),
            frontier: Vec::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Transaction;

    fn def(target: &str, prereqs: &[&str]) -> Transaction {
        Transaction::definition(target, prereqs).unwrap()
    }

    #[test]
    fn chain_has_unique_path() {
        let mut g = FpGraph::new(3).unwrap();
        g.insert_branch(&def("a", &["b", "c", "d"])).unwrap();
        let lp = brute_force_oracle(&g, "a", &BTreeSet::new(), TargetGate::Query).unwrap();
        assert_eq!(lp.path, vec![ROOT, "b", "c", "d", "a"]);
        assert_eq!(lp.tours_attempted, 1);
    }

    #[test]
    fn association_route_beats_shorter_route() {
        // Two routes into t: Root->s->t and Root->u->v->w->t. Three Q&A
        // reinforcements lift w->t to sigma, so the long route carries one
        // association and the short one none.
        let mut g = FpGraph::new(4).unwrap();
        g.insert_branch(&def("t", &["s"])).unwrap();
        g.insert_branch(&def("t", &["u", "v", "w"])).unwrap();
        for _ in 0..3 {
            g.apply_qa_transaction(&Transaction::qa("t", &["w"]).unwrap())
                .unwrap();
        }
        g.promote_associations();
        assert_eq!(g.association_count(), 1);
        assert_eq!(g.node_count(), 6);
        let lp = brute_force_oracle(&g, "t", &BTreeSet::new(), TargetGate::Query).unwrap();
        assert_eq!(lp.path, vec![ROOT, "u", "v", "w", "t"]);
        assert_eq!(lp.association_count, 1);
        assert_eq!(lp.tours_attempted, 2);
    }

    #[test]
    fn counts_tied_optima() {
        let mut g = FpGraph::new(3).unwrap();
        g.insert_branch(&def("t", &["y"])).unwrap();
        g.insert_branch(&def("t", &["x"])).unwrap();
        let r = oracle_report(&g, "t", &BTreeSet::new(), TargetGate::Query).unwrap();
        assert_eq!(r.optimal_walks, 2);
        assert!(!r.is_unique());
        assert_eq!(r.path.path, vec![ROOT, "x", "t"]);

        g.insert_branch(&def("t", &["w", "x"])).unwrap();
        let r = oracle_report(&g, "t", &BTreeSet::new(), TargetGate::Query).unwrap();
        assert_eq!((r.optimal_walks, r.complete_walks), (2, 3));
    }

    #[test]
    fn no_feasible_path() {
        let mut g = FpGraph::new(3).unwrap();
        g.insert_branch(&def("a", &["b", "c"])).unwrap();
        let r = brute_force_oracle(&g, "a", &BTreeSet::new(), TargetGate::CurrentNode);
        assert!(matches!(r, Err(AcoError::NoPath { .. })));
    }

    #[test]
    fn guard_trips_on_dense_graph() {
        // Every term is defined by all the others in shuffled order, so most
        // ordered pairs become edges and every term lists the query.
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let terms: Vec<String> = (0..30).map(|i| format!("t{i:02}")).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut g = FpGraph::new(3).unwrap();
        for target in &terms {
            let mut prereqs: Vec<&str> = terms
                .iter()
                .filter(|t| *t != target)
                .map(String::as_str)
                .collect();
            prereqs.shuffle(&mut rng);
            g.insert_branch(&def(target, &prereqs)).unwrap();
        }
        let r = brute_force_oracle(&g, "t00", &BTreeSet::new(), TargetGate::Query);
        assert!(matches!(r, Err(AcoError::OracleTooLarge { .. })));
    }
}
