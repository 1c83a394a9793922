//! Shared random corpora for the integration tests.

use std::collections::BTreeSet;

use ivd_core::generators::{gen_random_subcubic_disjoint, gen_random_tree_cells, gen_random_tree_yes, rng};
use ivd_core::interval::MonotonicFamily;
use ivd_core::oracle::{a_membership_bruteforce, compute_b_bruteforce};
use ivd_core::tree_solver::run_dp;
use ivd_core::{Graph, Instance, Rational, Weight};
use rand::RngExt;

pub fn points(f: &MonotonicFamily) -> Vec<Weight> {
    f.report().iter().map(|i| i.left.value.to_finite().unwrap()).collect()
}

/// Replaces some integer lengths `a` by `a ± ε`.
fn perturb_weights(g: &Graph, seed: u64) -> Graph {
    let mut r = rng(seed ^ 0x5eed);
    let edges: Vec<_> = g
        .edges()
        .map(|(u, v, w)| {
            let b = [-1i64, 0, 0, 1][r.random_range(0..4)];
            (u, v, w + &Weight::new(Rational::ZERO, b.into(), Rational::ZERO))
        })
        .collect();
    Graph::from_edges(g.vertex_count(), edges)
}

/// Small tree instance, YES or NO, possibly overlapping and possibly with
/// restricted allowed sites.
pub fn small_tree_instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let n = r.random_range(1..=12usize);
    let k = r.random_range(1..=n.min(4));
    if r.random_bool(0.45) {
        let (mut inst, _) = gen_random_tree_yes(n, k, 1..=2, seed).unwrap();
        if r.random_bool(0.3) {
            let i = r.random_range(0..k);
            let s = inst.cells[i].s.clone();
            inst.cells[i].s = s.into_iter().filter(|_| r.random_bool(0.5)).collect();
        }
        inst
    } else {
        let mut inst = gen_random_tree_cells(n, k, 1..=3, seed);
        if r.random_bool(0.25) {
            inst.graph = perturb_weights(&inst.graph, seed);
        }
        inst
    }
}

/// Small subcubic tree with disjoint connected cells.
pub fn small_subcubic_instance(seed: u64) -> Instance {
    let mut r = rng(seed ^ 0xc0b1c);
    let n = r.random_range(1..=12usize);
    let k = r.random_range(1..=n.min(4));
    let mut inst = gen_random_subcubic_disjoint(n, k, 1..=3, seed);
    if r.random_bool(0.3) {
        inst.graph = perturb_weights(&inst.graph, seed);
    }
    inst
}

/// At least 20 positive probe values around the endpoints of `a` and the
/// tree's distance scale.
pub fn probe_alphas(inst: &Instance, a: &MonotonicFamily) -> Vec<Weight> {
    let eps = Weight::eps();
    let delta = Weight::delta();
    let mut out = BTreeSet::new();
    let around = |out: &mut BTreeSet<Weight>, x: &Weight| {
        for y in [x.clone(), x + &eps, x - &eps, x + &delta, x - &delta] {
            if y.is_positive() {
                out.insert(y);
            }
        }
    };
    for i in a.report() {
        for e in [&i.left.value, &i.right.value] {
            if let Some(x) = e.to_finite() {
                around(&mut out, &x);
            }
        }
    }
    let total: i64 = inst.graph.edges().map(|(_, _, w)| w.a.to_big().to_integer().try_into().unwrap_or(0i64)).sum();
    for h in 1..=2 * (total + 2) {
        around(&mut out, &Weight::real(Rational::new(h, 2)));
        if out.len() > 60 {
            break;
        }
    }
    out.into_iter().collect()
}

/// Compares every node's DP sets with their definitions on `inst`. Returns
/// the first disagreement and the number of `A` probes made.
pub fn dp_mismatch(inst: &Instance) -> Result<usize, String> {
    let run = run_dp(inst).map_err(|e| format!("dp failed: {e}"))?;
    let mut probes = 0;
    for v in 0..inst.n() {
        let dp_b = points(&run.sets[v].b);
        let brute: Vec<Weight> = compute_b_bruteforce(inst, &run.tree, v).into_iter().collect();
        if dp_b != brute {
            return Err(format!("node {v}: B = {dp_b:?}, expected {brute:?}"));
        }
        for alpha in probe_alphas(inst, &run.sets[v].a) {
            probes += 1;
            let got = run.sets[v].a.contains_point(&alpha);
            if got != a_membership_bruteforce(inst, &run.tree, v, &alpha) {
                return Err(format!("node {v}: alpha {alpha} in A is {got}"));
            }
        }
    }
    Ok(probes)
}
