//! Random graph instances whose open cells have at most two allowed sites.

use ivd_core::generators::{gen_random_graph_cells, rng};
use ivd_core::sat::eligible;
use ivd_core::Instance;
use rand::RngExt;

/// A random graph instance with ties and occasional perturbation or site
/// restrictions, or `None` when it is not eligible.
pub fn candidate(seed: u64) -> Option<Instance> {
    let mut r = rng(seed ^ 0x2547);
    let n = r.random_range(2..=24usize);
    let k = r.random_range(n.div_ceil(2)..=n.min(14));
    let extra = r.random_range(0..=n);
    let perturb = r.random_bool(0.5);
    let mut inst = gen_random_graph_cells(n, k, extra, 1..=2, perturb, seed);
    if inst.cells.iter().any(|c| c.u.is_empty()) {
        return None;
    }
    if r.random_bool(0.5) {
        for c in inst.cells.iter_mut() {
            if r.random_bool(0.3) {
                let s = std::mem::take(&mut c.s);
                c.s = s.into_iter().filter(|_| r.random_bool(0.6)).collect();
            }
        }
    }
    eligible(&inst).then_some(inst)
}

/// The first `count` eligible candidates, scanning seeds from 0.
pub fn corpus(count: usize) -> Vec<(u64, Instance)> {
    (0..).filter_map(|s| candidate(s).map(|i| (s, i))).take(count).collect()
}
