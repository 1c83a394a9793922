//! Forward Voronoi computation and the solution checker.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::Graph;
use crate::instance::{Instance, InstanceKind, Solution};
use crate::weight::Weight;

/// Per-vertex set of nearest sites (by index into the site list) and the
/// distance to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiLabels {
    pub labels: Vec<Vec<usize>>,
    pub dist: Vec<Option<Weight>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("solution has {got} sites but the instance has {expected} cells")]
    LengthMismatch { expected: usize, got: usize },
    #[error("site {0} is not a vertex")]
    InvalidVertex(usize),
}

/// Dijkstra from `sources` (each with its own start distance). Returns the
/// distances and the vertices in the order they were settled.
fn dijkstra(g: &Graph, sources: &[(usize, Weight)]) -> (Vec<Option<Weight>>, Vec<usize>) {
    let n = g.vertex_count();
    let mut dist: Vec<Option<Weight>> = vec![None; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    for (s, d) in sources {
        if dist[*s].as_ref().is_none_or(|x| d < x) {
            dist[*s] = Some(d.clone());
            heap.push(Reverse((d.clone(), *s)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        order.push(u);
        for (v, w) in g.neighbors(u) {
            if done[*v] {
                continue;
            }
            let nd = &d + w;
            if dist[*v].as_ref().is_none_or(|x| nd < *x) {
                dist[*v] = Some(nd.clone());
                heap.push(Reverse((nd, *v)));
            }
        }
    }
    (dist, order)
}

/// Exact single-source shortest-path distances (`None` if unreachable).
pub fn distances_from(g: &Graph, source: usize) -> Vec<Option<Weight>> {
    dijkstra(g, &[(source, Weight::zero())]).0
}

/// Pushes site labels along tight edges in settle order. Gives up once the
/// total label count exceeds `bound`.
fn propagate(
    g: &Graph,
    sites: &[usize],
    dist: &[Option<Weight>],
    order: &[usize],
    bound: usize,
) -> Option<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut is_site = vec![false; n];
    for (i, &s) in sites.iter().enumerate() {
        labels[s].push(i);
        is_site[s] = true;
    }
    let mut total = sites.len();
    for &v in order {
        if is_site[v] {
            continue;
        }
        let dv = dist[v].as_ref().expect("settled vertex has a distance");
        let mut acc: Vec<usize> = Vec::new();
        for (u, w) in g.neighbors(v) {
            if let Some(du) = &dist[*u] {
                if du < dv && &(du + w) == dv {
                    acc.extend_from_slice(&labels[*u]);
                }
            }
        }
        acc.sort_unstable();
        acc.dedup();
        total += acc.len();
        if total > bound {
            return None;
        }
        labels[v] = acc;
    }
    Some(labels)
}

/// Labels every vertex with the indices of its nearest sites, ties included.
pub fn voronoi_cells(g: &Graph, sites: &[usize]) -> VoronoiLabels {
    let sources: Vec<_> = sites.iter().map(|&s| (s, Weight::zero())).collect();
    let (dist, order) = dijkstra(g, &sources);
    let labels = propagate(g, sites, &dist, &order, usize::MAX).expect("unbounded propagation");
    VoronoiLabels { labels, dist }
}

/// The apex construction: a virtual vertex joined to every site by an edge
/// of length 1, shortest paths from it, and label propagation over the
/// tight-edge DAG. Returns `None` once more than `bound` labels are placed.
/// The reported distances are measured from the apex.
pub fn apex_labels(g: &Graph, sites: &[usize], bound: usize) -> Option<VoronoiLabels> {
    let sources: Vec<_> = sites.iter().map(|&s| (s, Weight::int(1))).collect();
    let (dist, order) = dijkstra(g, &sources);
    let labels = propagate(g, sites, &dist, &order, bound)?;
    Some(VoronoiLabels { labels, dist })
}

/// Open cell of site `i`: the vertices whose only nearest site is `i`.
pub fn open_cells(labels: &VoronoiLabels, site_count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); site_count];
    for (v, l) in labels.labels.iter().enumerate() {
        if let [i] = l.as_slice() {
            out[*i].push(v);
        }
    }
    out
}

/// Closed cells from labels.
pub fn cells_from_labels(labels: &VoronoiLabels, site_count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); site_count];
    for (v, l) in labels.labels.iter().enumerate() {
        for &i in l {
            out[i].push(v);
        }
    }
    out
}

/// True iff `sol` places pairwise distinct sites `s_i ∈ S_i` whose Voronoi
/// cells are exactly the `U_i`.
pub fn check_solution(inst: &Instance, sol: &Solution) -> Result<bool, CheckError> {
    let k = inst.k();
    let n = inst.n();
    if sol.sites.len() != k {
        return Err(CheckError::LengthMismatch { expected: k, got: sol.sites.len() });
    }
    if let Some(&bad) = sol.sites.iter().find(|&&s| s >= n) {
        return Err(CheckError::InvalidVertex(bad));
    }
    for (c, &s) in inst.cells.iter().zip(&sol.sites) {
        if c.s.binary_search(&s).is_err() {
            return Ok(false);
        }
    }
    let mut used = vec![false; n];
    for &s in &sol.sites {
        if std::mem::replace(&mut used[s], true) {
            return Ok(false);
        }
    }
    let labels = match inst.kind {
        InstanceKind::Tree => match apex_labels(&inst.graph, &sol.sites, inst.size()) {
            Some(l) => l,
            None => return Ok(false),
        },
        InstanceKind::Graph => voronoi_cells(&inst.graph, &sol.sites),
    };
    Ok(labels_match(inst, &labels))
}

fn labels_match(inst: &Instance, labels: &VoronoiLabels) -> bool {
    let mut size = vec![0usize; inst.k()];
    for l in &labels.labels {
        for &i in l {
            size[i] += 1;
        }
    }
    inst.cells
        .iter()
        .enumerate()
        .all(|(i, c)| size[i] == c.u.len() && c.u.iter().all(|&v| labels.labels[v].binary_search(&i).is_ok()))
}
