//! Structural invariants on random instances.

mod common;

use common::corpus;
use ivd_core::generators::{gen_random_subcubic_disjoint, gen_random_tree_cells, gen_random_tree_yes};
use ivd_core::instance::{parse_instance, serialize_instance};
use ivd_core::transform::{check_disjoint_connected, expand_to_disjoint, preprocess, split_to_degree3};
use ivd_core::tree_solver::{run_dp, solve, solve_with_report};
use ivd_core::voronoi::check_solution;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interval_counts_bounded_by_subtree_size(n in 1usize..60, k in 1usize..8, hi in 1i64..6, seed in any::<u64>()) {
        let inst = gen_random_subcubic_disjoint(n, k.min(n), 1..=hi, seed);
        let run = run_dp(&inst).unwrap();
        for (v, s) in run.sets.iter().enumerate() {
            prop_assert!(s.m_a() <= s.size, "vertex {}: m_A = {} > n(v) = {}", v, s.m_a(), s.size);
            prop_assert!(s.m_b() <= s.size, "vertex {}: m_B = {} > n(v) = {}", v, s.m_b(), s.size);
        }
        let root = &run.sets[run.tree.root];
        prop_assert_eq!(root.size, n);
        prop_assert_eq!(run.stats.max_m_a, run.sets.iter().map(|s| s.m_a()).max().unwrap());
    }

    #[test]
    fn small_to_large_bound(n in 2usize..400, k in 2usize..20, seed in any::<u64>()) {
        let (inst, _) = gen_random_tree_yes(n, k.min(n), 1..=10, seed).unwrap();
        let report = solve_with_report(&inst).unwrap();
        prop_assert!(report.solution.is_some());
        let stats = report.stats.unwrap();
        let big_n = report.dp_vertices as f64;
        prop_assert!(stats.sum_min_subtree as f64 <= big_n * big_n.log2().max(1.0));
        prop_assert!(stats.merge_cost <= 2 * stats.sum_min_subtree + stats.merges as u64);
    }

    #[test]
    fn transform_invariants(n in 1usize..40, k in 1usize..6, seed in any::<u64>()) {
        let inst = gen_random_tree_cells(n, k.min(n), 1..=3, seed);
        let Ok(pre) = preprocess(&inst) else { return Ok(()) };
        let Ok(exp) = expand_to_disjoint(&pre) else { return Ok(()) };
        prop_assert!(exp.expansions < inst.k().max(1));
        check_disjoint_connected(&exp.instance).unwrap();
        let (split, pi) = split_to_degree3(&exp.instance).unwrap();
        prop_assert!(split.graph.max_degree() <= 3);
        check_disjoint_connected(&split).unwrap();
        prop_assert_eq!(pi.0.len(), split.n());
        prop_assert!(pi.0.iter().all(|&v| v < exp.instance.n()));
        prop_assert!(split.graph.edges().all(|(_, _, w)| w.is_positive()));
    }

    #[test]
    fn witnesses_always_check(seed in any::<u64>()) {
        let inst = corpus::small_tree_instance(seed);
        if let Some(sol) = solve(&inst).unwrap() {
            prop_assert!(check_solution(&inst, &sol).unwrap());
        }
    }

    #[test]
    fn instance_json_round_trip(n in 1usize..30, k in 1usize..5, seed in any::<u64>()) {
        let inst = gen_random_tree_cells(n, k.min(n), 1..=9, seed);
        let back = parse_instance(&serialize_instance(&inst).unwrap()).unwrap();
        prop_assert_eq!(back, inst);
    }
}
