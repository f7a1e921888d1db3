mod common;

use std::collections::BTreeSet;

use learning_path::aco::{self, brute_force_oracle, AcoParams, TargetGate};
use learning_path::corpus::Transaction;
use learning_path::fpgraph::{to_dot, FpGraph, QaMatch};
use learning_path::ROOT;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(seed: u64) -> (common::Fixture, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (common::random_fixture(&mut rng), rng)
}

/// A Q&A record built from a random walk over existing terms, so some records
/// match fully, some by suffix and some not at all.
fn random_qa<R: Rng>(graph: &FpGraph, rng: &mut R) -> Transaction {
    let terms: Vec<&str> = graph.terms().filter(|t| *t != ROOT).collect();
    let target = *terms.choose(rng).unwrap();
    let others: Vec<&str> = terms.iter().copied().filter(|t| *t != target).collect();
    let n = rng.gen_range(1..=others.len().clamp(1, 4));
    let answer: Vec<&str> = others.choose_multiple(rng, n).copied().collect();
    Transaction::qa(target, &answer).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn qa_never_changes_structure(seed in any::<u64>()) {
        let (fx, mut rng) = fixture(seed);
        let mut g = fx.graph;
        let nodes: Vec<String> = g.terms().map(String::from).collect();
        let edges: BTreeSet<(String, String)> = g.edges().map(|e| (e.from.clone(), e.to.clone())).collect();
        for _ in 0..10 {
            let txn = random_qa(&g, &mut rng);
            let total_before: u64 = g.edges().map(|e| e.frequency).sum();
            let outcome = g.apply_qa_transaction(&txn).unwrap();
            let total_after: u64 = g.edges().map(|e| e.frequency).sum();
            let credited = outcome.matched_len(&txn).map_or(0, |n| n as u64 - 1);
            prop_assert_eq!(total_after - total_before, credited);
            prop_assert_eq!(matches!(outcome, QaMatch::Unmatched), credited == 0);
        }
        prop_assert_eq!(g.terms().map(String::from).collect::<Vec<_>>(), nodes);
        prop_assert_eq!(g.edges().map(|e| (e.from.clone(), e.to.clone())).collect::<BTreeSet<_>>(), edges);
    }

    #[test]
    fn promotion_is_monotone_and_idempotent(seed in any::<u64>()) {
        let (fx, mut rng) = fixture(seed);
        let mut g = fx.graph;
        for _ in 0..5 {
            let before: BTreeSet<(String, String)> =
                g.edges().filter(|e| e.is_association).map(|e| (e.from.clone(), e.to.clone())).collect();
            for _ in 0..3 {
                let txn = random_qa(&g, &mut rng);
                g.apply_qa_transaction(&txn).unwrap();
            }
            let promoted = g.promote_associations();
            let after: BTreeSet<(String, String)> =
                g.edges().filter(|e| e.is_association).map(|e| (e.from.clone(), e.to.clone())).collect();
            prop_assert!(before.is_subset(&after));
            prop_assert_eq!(after.len() - before.len(), promoted.len());
            for e in g.edges() {
                let subset = e.from != ROOT && learning_path::fpgraph::is_word_subset(&e.from, &e.to);
                prop_assert_eq!(e.is_association, e.frequency >= g.sigma() || subset);
            }
            prop_assert!(g.promote_associations().is_empty());
        }
    }

    #[test]
    fn search_is_deterministic_and_valid(seed in any::<u64>(), aco_seed in any::<u64>()) {
        let (fx, _) = fixture(seed);
        let params = AcoParams { seed: aco_seed, n_ants: 8, max_iterations: 10, ..AcoParams::default() };
        let a = aco::learning_path(&fx.graph, &fx.query, &fx.known, &params);
        let b = aco::learning_path(&fx.graph, &fx.query, &fx.known, &params);
        prop_assert_eq!(&a, &b);
        if let Ok(lp) = a {
            prop_assert_eq!(lp.path.last().unwrap(), &fx.query);
            prop_assert!(lp.path[0] == ROOT || fx.known.contains(&lp.path[0]));
            prop_assert_eq!(lp.path.iter().collect::<BTreeSet<_>>().len(), lp.path.len());
            let mut associations = 0;
            for (from, to) in lp.edges() {
                let e = fx.graph.edge(from, to);
                prop_assert!(e.is_some(), "missing edge {} -> {}", from, to);
                associations += usize::from(e.unwrap().is_association);
            }
            prop_assert_eq!(associations, lp.association_count);
            prop_assert!(lp.iterations_run <= params.max_iterations);
        }
    }

    #[test]
    fn oracle_never_ranks_below_colony(seed in any::<u64>()) {
        let (fx, _) = fixture(seed);
        let colony = aco::learning_path(&fx.graph, &fx.query, &fx.known, &AcoParams::default());
        let oracle = brute_force_oracle(&fx.graph, &fx.query, &fx.known, TargetGate::Query);
        match (colony, oracle) {
            (Ok(c), Ok(o)) => {
                let rank = |assoc: usize, len: usize| (std::cmp::Reverse(assoc), len);
                prop_assert!(rank(o.association_count, o.path.len()) <= rank(c.association_count, c.path.len()));
            }
            (Err(_), _) => {}
            (Ok(c), Err(e)) => prop_assert!(false, "colony found {:?} but oracle failed: {}", c.path, e),
        }
    }

    #[test]
    fn dot_lists_every_edge_once(seed in any::<u64>()) {
        let (fx, _) = fixture(seed);
        let dot = to_dot(&fx.graph);
        prop_assert_eq!(&dot, &to_dot(&fx.graph.clone()));
        let edge_lines = dot.lines().filter(|l| l.contains("->")).count();
        prop_assert_eq!(edge_lines, fx.graph.edge_count());
        let bold = dot.lines().filter(|l| l.contains("style=bold")).count();
        prop_assert_eq!(bold, fx.graph.association_count());
    }
}
