//! Instance generators: random instances and the hardness constructions.
//! Every generator is deterministic in its seed.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::instance::{Cell, Instance, InstanceKind, Solution};
use crate::voronoi::{cells_from_labels, voronoi_cells};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator arguments: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GenError> {
    Err(GenError::Invalid(msg.into()))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random recursive tree with relabelled vertices and integer lengths.
pub fn random_tree(n: usize, weights: RangeInclusive<i64>, rng: &mut ChaCha8Rng) -> Graph {
    let label = permutation(n, rng);
    let mut g = Graph::new(n);
    for v in 1..n {
        let p = rng.random_range(0..v);
        g.add_edge(label[p], label[v], Weight::int(rng.random_range(weights.clone())));
    }
    g
}

/// Random tree of maximum degree 3.
pub fn random_subcubic_tree(n: usize, weights: RangeInclusive<i64>, rng: &mut ChaCha8Rng) -> Graph {
    let label = permutation(n, rng);
    let mut g = Graph::new(n);
    let mut open = vec![0usize];
    let mut deg = vec![0usize; n];
    for v in 1..n {
        let at = rng.random_range(0..open.len());
        let p = open[at];
        g.add_edge(label[p], label[v], Weight::int(rng.random_range(weights.clone())));
        deg[p] += 1;
        deg[v] = 1;
        if deg[p] == 3 {
            open.swap_remove(at);
        }
        open.push(v);
    }
    g
}

/// Splits a connected graph into `k` connected parts by random growth from
/// `k` random seeds. Returns the owner of every vertex.
pub fn random_partition(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = g.vertex_count();
    let mut owner = vec![usize::MAX; n];
    let mut frontier = Vec::new();
    for (i, &s) in permutation(n, rng)[..k].iter().enumerate() {
        owner[s] = i;
        frontier.extend(g.neighbors(s).iter().map(|(x, _)| (i, *x)));
    }
    while !frontier.is_empty() {
        let (i, v) = frontier.swap_remove(rng.random_range(0..frontier.len()));
        if owner[v] == usize::MAX {
            owner[v] = i;
            frontier.extend(g.neighbors(v).iter().map(|(x, _)| (i, *x)));
        }
    }
    owner
}

fn groups(owner: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); k];
    for (v, &o) in owner.iter().enumerate() {
        out[o].push(v);
    }
    out
}

/// Each member of `u` independently with probability `p`.
fn random_subset(u: &[usize], p: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    u.iter().copied().filter(|_| rng.random_bool(p)).collect()
}

/// Random tree with `k` random distinct sites whose exact Voronoi cells,
/// ties included, become the candidate cells. Returns the planted sites.
pub fn gen_random_tree_yes(
    n: usize,
    k: usize,
    weights: RangeInclusive<i64>,
    seed: u64,
) -> Result<(Instance, Solution), GenError> {
    if k == 0 || k > n {
        return invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}"));
    }
    if *weights.start() < 1 || weights.is_empty() {
        return invalid("lengths must be positive");
    }
    let mut rng = rng(seed);
    let g = random_tree(n, weights, &mut rng);
    let sites: Vec<usize> = permutation(n, &mut rng)[..k].to_vec();
    let labels = voronoi_cells(&g, &sites);
    let cells = cells_from_labels(&labels, k).into_iter().map(Cell::plain).collect();
    Ok((Instance::new(g, cells, InstanceKind::Tree), Solution::new(sites)))
}

/// Random tree with arbitrary connected, possibly overlapping cells and
/// random allowed-site sets. Mostly NO instances.
pub fn gen_random_tree_cells(n: usize, k: usize, weights: RangeInclusive<i64>, seed: u64) -> Instance {
    let mut rng = rng(seed);
    let g = random_tree(n, weights, &mut rng);
    let owner = random_partition(&g, k, &mut rng);
    let mut cells = groups(&owner, k);
    let mut member: Vec<Vec<bool>> = cells
        .iter()
        .map(|c| {
            let mut m = vec![false; n];
            c.iter().for_each(|&v| m[v] = true);
            m
        })
        .collect();
    for _ in 0..rng.random_range(0..=n / 2) {
        let i = rng.random_range(0..k);
        let v = cells[i][rng.random_range(0..cells[i].len())];
        if g.degree(v) == 0 {
            continue;
        }
        let x = g.neighbors(v)[rng.random_range(0..g.degree(v))].0;
        if !member[i][x] {
            member[i][x] = true;
            cells[i].push(x);
        }
    }
    let p = if rng.random_bool(0.5) { 1.0 } else { 0.6 };
    let cells = cells
        .into_iter()
        .map(|u| {
            let s = random_subset(&u, p, &mut rng);
            Cell::new(u, s)
        })
        .collect();
    Instance::new(g, cells, InstanceKind::Tree)
}

/// Random subcubic tree with `k` disjoint connected cells and random
/// allowed-site sets.
pub fn gen_random_subcubic_disjoint(n: usize, k: usize, weights: RangeInclusive<i64>, seed: u64) -> Instance {
    let mut rng = rng(seed);
    let g = random_subcubic_tree(n, weights, &mut rng);
    let owner = random_partition(&g, k, &mut rng);
    let p = [1.0, 0.7, 0.4][rng.random_range(0..3)];
    let cells = groups(&owner, k)
        .into_iter()
        .map(|u| {
            let s = random_subset(&u, p, &mut rng);
            Cell::new(u, s)
        })
        .collect();
    Instance::new(g, cells, InstanceKind::Tree)
}

/// Random connected graph: a random tree plus `extra` random edges.
pub fn random_graph(n: usize, extra: usize, weights: RangeInclusive<i64>, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = random_tree(n, weights.clone(), rng);
    for _ in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v && g.weight(u, v).is_none() {
            g.add_edge(u, v, Weight::int(rng.random_range(weights.clone())));
        }
    }
    g
}

/// Voronoi cells of random sites on a random graph, optionally perturbed by
/// moving one vertex into a neighbouring cell.
pub fn gen_random_graph_cells(
    n: usize,
    k: usize,
    extra: usize,
    weights: RangeInclusive<i64>,
    perturb: bool,
    seed: u64,
) -> Instance {
    let mut rng = rng(seed);
    let g = random_graph(n, extra, weights, &mut rng);
    let sites: Vec<usize> = permutation(n, &mut rng)[..k].to_vec();
    let labels = voronoi_cells(&g, &sites);
    let mut cells = cells_from_labels(&labels, k);
    if perturb && n > 1 {
        let v = rng.random_range(0..n);
        let x = g.neighbors(v)[rng.random_range(0..g.degree(v))].0;
        let j = labels.labels[x][0];
        if rng.random_bool(0.5) {
            for c in cells.iter_mut() {
                c.retain(|&u| u != v);
            }
        }
        if !cells[j].contains(&v) {
            cells[j].push(v);
        }
    }
    Instance::new(g, cells.into_iter().map(Cell::plain).collect(), InstanceKind::Graph)
}

/// Positive 1-in-3-SAT to inverse Voronoi: an edge `v(x)v̄(x)` per
/// variable, a triangle per clause, and an edge from each triangle corner
/// to the `v(x)` of its variable. Vertex `2x` is `v(x)`, `2x + 1` is
/// `v̄(x)`, and clause `j` occupies `2·vars + 3j ..`.
pub fn gen_from_1in3sat(vars: usize, clauses: &[[usize; 3]]) -> Result<Instance, GenError> {
    for c in clauses {
        if c.iter().any(|&x| x >= vars) || c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
            return invalid(format!("clause {c:?} must have 3 distinct variables below {vars}"));
        }
    }
    let n = 2 * vars + 3 * clauses.len();
    let mut g = Graph::new(n);
    let mut cells = Vec::new();
    for x in 0..vars {
        g.add_edge(2 * x, 2 * x + 1, Weight::int(1));
        cells.push(Cell::plain(vec![2 * x, 2 * x + 1]));
    }
    for (j, c) in clauses.iter().enumerate() {
        let base = 2 * vars + 3 * j;
        for (p, &x) in c.iter().enumerate() {
            g.add_edge(base + p, base + (p + 1) % 3, Weight::int(1));
            g.add_edge(base + p, 2 * x, Weight::int(1));
        }
        cells.push(Cell::plain(vec![base, base + 1, base + 2]));
    }
    Ok(Instance::new(g, cells, InstanceKind::Graph))
}

/// Edge between vertices given as `(part, index)`.
pub type MisEdge = ((usize, usize), (usize, usize));

/// Source of the multicoloured subgraph isomorphism reduction.
#[derive(Clone, Debug)]
pub struct MsiSource {
    /// Colour class of each vertex of `H`.
    pub part: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Pattern edges on the colours `0..ℓ`.
    pub pattern: Vec<(usize, usize)>,
}

/// Subdivides every edge of `H` between pattern-adjacent classes with a
/// vertex `w(e)`, turns every class `V_i` and every `W_ij` into a clique,
/// and uses `U_ij = W_ij ∪ V_i ∪ V_j` as cells, one per pattern edge.
/// Edges of `H` between classes not adjacent in the pattern are dropped.
pub fn gen_from_msi(src: &MsiSource) -> Result<Instance, GenError> {
    let l = src.part.iter().max().map_or(0, |m| m + 1);
    let nh = src.part.len();
    let mut deg = vec![0usize; l];
    for &(i, j) in &src.pattern {
        if i == j || i >= l || j >= l {
            return invalid(format!("bad pattern edge ({i}, {j})"));
        }
        deg[i] += 1;
        deg[j] += 1;
    }
    if deg.iter().any(|&d| d < 2) {
        return invalid("every pattern vertex needs degree at least 2");
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let pattern: Vec<(usize, usize)> = src.pattern.iter().map(|&(i, j)| key(i, j)).collect();
    let mut g = Graph::new(nh);
    let mut w: Vec<Vec<usize>> = vec![Vec::new(); pattern.len()];
    for &(a, b) in &src.edges {
        let pk = key(src.part[a], src.part[b]);
        if let Some(e) = pattern.iter().position(|&p| p == pk) {
            let x = g.add_vertex();
            g.add_edge(a, x, Weight::int(1));
            g.add_edge(x, b, Weight::int(1));
            w[e].push(x);
        }
    }
    let classes = groups(&src.part, l);
    let clique = |g: &mut Graph, set: &[usize]| {
        for (p, &a) in set.iter().enumerate() {
            for &b in &set[p + 1..] {
                g.add_edge(a, b, Weight::int(1));
            }
        }
    };
    for c in &classes {
        clique(&mut g, c);
    }
    for we in &w {
        clique(&mut g, we);
    }
    let cells = pattern
        .iter()
        .zip(&w)
        .map(|(&(i, j), we)| Cell::plain(we.iter().chain(&classes[i]).chain(&classes[j]).copied().collect()))
        .collect();
    Ok(Instance::new(g, cells, InstanceKind::Graph))
}

/// Output of the multicoloured independent set reduction, with the vertex
/// ids needed to place the planted sites.
#[derive(Clone, Debug)]
pub struct MisGadget {
    pub instance: Instance,
    l: usize,
    t: usize,
    edges: Vec<((usize, usize), (usize, usize))>,
    /// `v[i][j][h]`.
    v: Vec<Vec<Vec<usize>>>,
    /// `e[i][j]`, `z[i][j]`.
    e: Vec<Vec<usize>>,
    z: Vec<Vec<usize>>,
    /// `f(j)` and the two neighbours of the endpoints on `P(e_j)`.
    f: Vec<usize>,
    near: Vec<(usize, usize)>,
}

/// Builds the path-like construction for a graph whose vertices are
/// `(part, index)` pairs with `ℓ` parts of `t` vertices each. Paths of
/// length `L` are realized with `L − 1` unit-length subdivision vertices.
/// Needs at least one edge, all between distinct parts.
pub fn gen_from_mis(l: usize, t: usize, edges: &[MisEdge]) -> Result<MisGadget, GenError> {
    if l == 0 || t == 0 || edges.is_empty() {
        return invalid("need ℓ ≥ 1, t ≥ 1 and at least one edge");
    }
    for &((i, h), (i2, h2)) in edges {
        if i == i2 || i >= l || i2 >= l || h >= t || h2 >= t {
            return invalid(format!("bad edge ({i},{h})-({i2},{h2})"));
        }
    }
    let m = edges.len();
    let mut g = Graph::new(0);
    let one = || Weight::int(1);
    // Path of `len` edges from `a` to `b`; returns the interior vertices.
    let path = |g: &mut Graph, a: usize, b: usize, len: usize| -> Vec<usize> {
        let mut prev = a;
        let mut inner = Vec::new();
        for _ in 1..len {
            let x = g.add_vertex();
            g.add_edge(prev, x, one());
            inner.push(x);
            prev = x;
        }
        g.add_edge(prev, b, one());
        inner
    };
    let mut v = vec![vec![Vec::new(); m]; l];
    let mut e = vec![vec![0; m]; l];
    let mut z = vec![vec![0; m]; l];
    let mut cells = Vec::new();
    let mut last_b: Vec<Option<usize>> = vec![None; l];
    for j in 0..m {
        for i in 0..l {
            let a = g.add_vertex();
            let b = g.add_vertex();
            let c = g.add_vertex();
            if let Some(pb) = last_b[i] {
                g.add_edge(pb, a, one());
            }
            last_b[i] = Some(b);
            let mut u = vec![a, b, c];
            for h in 1..=t {
                let x = g.add_vertex();
                v[i][j].push(x);
                u.push(x);
                u.extend(path(&mut g, a, x, t + h));
                u.extend(path(&mut g, b, x, t + h));
                u.extend(path(&mut g, x, c, t));
            }
            let ev = g.add_vertex();
            let zv = g.add_vertex();
            g.add_edge(ev, zv, one());
            // P_e has t edges from e; its far end is joined to c.
            let mut pe = vec![ev];
            let mut prev = ev;
            for _ in 0..t {
                let x = g.add_vertex();
                g.add_edge(prev, x, one());
                pe.push(x);
                prev = x;
            }
            g.add_edge(prev, c, one());
            e[i][j] = ev;
            z[i][j] = zv;
            cells.push(Cell::plain(u));
            cells.push(Cell::plain(pe));
            cells.push(Cell::plain(vec![zv]));
        }
    }
    let mut f = Vec::with_capacity(m);
    let mut near = Vec::with_capacity(m);
    for (j, &((i, h), (i2, h2))) in edges.iter().enumerate() {
        let p = path(&mut g, v[i][j][h], v[i2][j][h2], 2 * t + 2);
        let mid = p[t];
        let fj = g.add_vertex();
        let mut q = path(&mut g, mid, fj, t);
        q.push(fj);
        f.push(fj);
        near.push((p[0], p[p.len() - 1]));
        cells.push(Cell::plain(p.into_iter().chain(q).collect()));
    }
    Ok(MisGadget {
        instance: Instance::new(g, cells, InstanceKind::Graph),
        l,
        t,
        edges: edges.to_vec(),
        v,
        e,
        z,
        f,
        near,
    })
}

impl MisGadget {
    /// Sites for the independent set choosing vertex `choice[i]` in part
    /// `i`, in cell order; `None` if the choice is not independent.
    pub fn planted(&self, choice: &[usize]) -> Option<Solution> {
        if choice.len() != self.l || choice.iter().any(|&h| h >= self.t) {
            return None;
        }
        let m = self.edges.len();
        let mut sites = Vec::with_capacity((3 * self.l + 1) * m);
        for j in 0..m {
            for (i, &h) in choice.iter().enumerate() {
                sites.extend([self.v[i][j][h], self.e[i][j], self.z[i][j]]);
            }
        }
        for (j, &((i, h), (i2, h2))) in self.edges.iter().enumerate() {
            let s = match (choice[i] == h, choice[i2] == h2) {
                (true, true) => return None,
                (true, false) => self.near[j].0,
                (false, true) => self.near[j].1,
                (false, false) => self.f[j],
            };
            sites.push(s);
        }
        Some(Solution::new(sites))
    }
}

/// Two stars with leaf lengths `x_1..x_n, 2` and `y_1 + 1..y_n + 1, 1`
/// sharing the leaf at the end of the short edges. The shared leaf is in
/// both cells. Vertex 0 is the centre of the first star, `1..=n` its
/// other leaves, `n + 1` the shared leaf, `n + 2` the second centre.
pub fn gen_set_intersection_stars(x: &[i64], y: &[i64]) -> Result<Instance, GenError> {
    let n = x.len();
    if y.len() != n || x.iter().chain(y).any(|&v| v < 1) {
        return invalid("need two lists of equal length of positive integers");
    }
    let shared = n + 1;
    let cy = n + 2;
    let mut g = Graph::new(2 * n + 3);
    for (p, &xv) in x.iter().enumerate() {
        g.add_edge(0, 1 + p, Weight::int(xv));
    }
    g.add_edge(0, shared, Weight::int(2));
    for (p, &yv) in y.iter().enumerate() {
        g.add_edge(cy, cy + 1 + p, Weight::int(yv + 1));
    }
    g.add_edge(cy, shared, Weight::int(1));
    let u1: Vec<usize> = (0..=shared).collect();
    let u2: Vec<usize> = std::iter::once(shared).chain(cy..2 * n + 3).collect();
    Ok(Instance::new(g, vec![Cell::plain(u1), Cell::plain(u2)], InstanceKind::Tree))
}
