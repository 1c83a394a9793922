//! Timing harness for the tree solver on planted instances.

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::generators::{gen_random_tree_yes, GenError};
use crate::tree_solver::{solve_with_report, SolveError};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    /// `k = max(2, n / cells_divisor)`.
    pub cells_divisor: usize,
    pub weights: RangeInclusive<i64>,
    /// Solves run one at a time unless this exceeds 1.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (13..=17).map(|e| 1usize << e).collect(),
            seeds: vec![0, 1, 2],
            cells_divisor: 64,
            weights: 1..=10,
            threads: 1,
        }
    }
}

impl BenchConfig {
    pub fn cells(&self, n: usize) -> usize {
        (n / self.cells_divisor.max(1)).max(2)
    }
}

/// One solve.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub seconds: f64,
    pub solved: bool,
    pub expansions: usize,
    pub dp_vertices: usize,
    pub merge_cost: u64,
    pub sum_min_subtree: u64,
    /// `2·n·log₂n` for the input size `n`.
    pub sum_min_bound: f64,
    pub max_m_a: usize,
    pub max_m_b: usize,
}

/// Mean time per size and its ratio to the previous size.
#[derive(Clone, Debug, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub mean_seconds: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("generation failed: {0}")]
    Gen(#[from] GenError),
    #[error("solve failed: {0}")]
    Solve(#[from] SolveError),
}

pub fn bench_one(n: usize, k: usize, weights: RangeInclusive<i64>, seed: u64) -> Result<BenchRow, BenchError> {
    let (inst, _) = gen_random_tree_yes(n, k, weights, seed)?;
    let start = Instant::now();
    let report = solve_with_report(&inst)?;
    let seconds = start.elapsed().as_secs_f64();
    let stats = report.stats.unwrap_or_default();
    let size = n as f64;
    Ok(BenchRow {
        n,
        k,
        seed,
        seconds,
        solved: report.solution.is_some(),
        expansions: report.expansions,
        dp_vertices: report.dp_vertices,
        merge_cost: stats.merge_cost,
        sum_min_subtree: stats.sum_min_subtree,
        sum_min_bound: if size > 1.0 { 2.0 * size * size.log2() } else { 0.0 },
        max_m_a: stats.max_m_a,
        max_m_b: stats.max_m_b,
    })
}

/// Runs every (size, seed) pair. Concurrent solves distort timings, so
/// ratio measurements should keep `threads` at 1.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let jobs: Vec<(usize, u64)> = cfg.sizes.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let one = |&(n, seed): &(usize, u64)| bench_one(n, cfg.cells(n), cfg.weights.clone(), seed);
    if cfg.threads <= 1 {
        return jobs.iter().map(one).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(pool) => pool.install(|| jobs.par_iter().map(one).collect()),
        Err(_) => jobs.iter().map(one).collect(),
    }
}

pub fn summarize(rows: &[BenchRow]) -> Vec<SizeSummary> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut out: Vec<SizeSummary> = Vec::new();
    for n in sizes {
        let times: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.seconds).collect();
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        let ratio = out.last().filter(|p| p.n * 2 == n && p.mean_seconds > 0.0).map(|p| mean / p.mean_seconds);
        out.push(SizeSummary { n, mean_seconds: mean, ratio });
    }
    out
}

/// Plain-text table, one line per solve, then the per-size summary.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>8} {:>6} {:>4} {:>9} {:>6} {:>5} {:>8} {:>10} {:>10} {:>11} {:>7} {:>7}\n",
        "n", "k", "seed", "seconds", "solved", "exp", "dp_n", "merge", "sum_min", "2nlogn", "max_mA", "max_mB"
    );
    for r in rows {
        s += &format!(
            "{:>8} {:>6} {:>4} {:>9.3} {:>6} {:>5} {:>8} {:>10} {:>10} {:>11.0} {:>7} {:>7}\n",
            r.n,
            r.k,
            r.seed,
            r.seconds,
            r.solved,
            r.expansions,
            r.dp_vertices,
            r.merge_cost,
            r.sum_min_subtree,
            r.sum_min_bound,
            r.max_m_a,
            r.max_m_b
        );
    }
    s += "\n       n  mean_sec  ratio\n";
    for x in summarize(rows) {
        let ratio = x.ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
        s += &format!("{:>8} {:>9.3} {:>6}\n", x.n, x.mean_seconds, ratio);
    }
    s
}
