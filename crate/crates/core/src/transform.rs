//! Reductions from a general tree instance to one with pairwise disjoint
//! cells on a tree of maximum degree 3, and projection of solutions back.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, RootedTree};
use crate::instance::{Cell, Instance, InstanceKind, Solution};
use crate::weight::{Rational, Weight};

/// Why a tree instance has no solution, as detected by the reductions.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Infeasible {
    #[error("cell {0} has no allowed site outside the other cells")]
    NoExclusiveSite(usize),
    #[error("cell {0} does not induce a connected subtree")]
    DisconnectedCell(usize),
    #[error("the exclusive part of cell {0} is disconnected")]
    DisconnectedExclusive(usize),
    #[error("more cells than vertices")]
    TooManyCells,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("instance is not a tree")]
    NotATree,
    #[error("cells are not pairwise disjoint or do not cover the vertices")]
    NotAPartition,
    #[error("cell {0} is not connected")]
    DisconnectedCell(usize),
}

#[derive(Clone, Debug)]
pub struct Preprocessed {
    /// The input with every `S_i` replaced by `S_i ∩ W_i`.
    pub instance: Instance,
    /// `W_i = U_i ∖ ∪_{j≠i} U_j`.
    pub exclusive: Vec<Vec<usize>>,
    /// Edges `(x, y)` with `x ∈ W_i` and `y ∈ U_i ∖ W_i`.
    pub boundary: Vec<Vec<(usize, usize)>>,
    /// `L(v)`: the cells containing `v`, ascending.
    pub labels: Vec<Vec<usize>>,
}

/// Maps vertices of a transformed tree to vertices of the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap(pub Vec<usize>);

fn is_exclusive(labels: &[Vec<usize>], v: usize, i: usize) -> bool {
    labels[v].len() == 1 && labels[v][0] == i
}

/// Checks the necessary conditions and computes `W_i`, `E_i` and `L(v)`.
/// The instance must be a valid tree instance.
pub fn preprocess(inst: &Instance) -> Result<Preprocessed, Infeasible> {
    let n = inst.n();
    if inst.k() > n {
        return Err(Infeasible::TooManyCells);
    }
    let tree = RootedTree::new(&inst.graph, 0).expect("preprocess needs a tree");
    let labels = inst.memberships();
    let mut mask = vec![false; n];
    let mut exclusive = Vec::with_capacity(inst.k());
    let mut boundary = Vec::with_capacity(inst.k());
    let mut out = inst.clone();
    for (i, c) in inst.cells.iter().enumerate() {
        let w: Vec<usize> = c.u.iter().copied().filter(|&v| is_exclusive(&labels, v, i)).collect();
        out.cells[i].s.retain(|&s| s < n && is_exclusive(&labels, s, i));
        if out.cells[i].s.is_empty() {
            return Err(Infeasible::NoExclusiveSite(i));
        }
        for &v in &c.u {
            mask[v] = true;
        }
        let u_ok = tree.induces_connected(&c.u, &mask);
        for &v in &c.u {
            mask[v] = false;
        }
        if !u_ok {
            return Err(Infeasible::DisconnectedCell(i));
        }
        for &v in &w {
            mask[v] = true;
        }
        let w_ok = tree.induces_connected(&w, &mask);
        for &v in &w {
            mask[v] = false;
        }
        if !w_ok {
            return Err(Infeasible::DisconnectedExclusive(i));
        }
        let mut e = Vec::new();
        for &x in &w {
            for (y, _) in inst.graph.neighbors(x) {
                if labels[*y].binary_search(&i).is_ok() && !is_exclusive(&labels, *y, i) {
                    e.push((x, *y));
                }
            }
        }
        exclusive.push(w);
        boundary.push(e);
    }
    Ok(Preprocessed { instance: out, exclusive, boundary, labels })
}

/// Result of the edge expansions.
#[derive(Clone, Debug)]
pub struct Expanded {
    pub instance: Instance,
    pub expansions: usize,
}

/// Makes the cells pairwise disjoint by expanding boundary edges: `xy` with
/// `x ∈ W_i`, `y ∈ U_i ∖ W_i` becomes `x–y′–y` with `λ(xy′) = λ(xy)` and
/// `λ(y′y) = ε`, and `U_i` shrinks to its part on `x`'s side plus `y′`.
/// Cells are processed one at a time, recomputing `W_i` each time.
pub fn expand_to_disjoint(p: &Preprocessed) -> Result<Expanded, Infeasible> {
    let inst = &p.instance;
    let mut g = inst.graph.clone();
    let tree = RootedTree::new(&g, 0).expect("expansion needs a tree");
    let mut parent = tree.parent;
    let mut labels = p.labels.clone();
    let mut cells: Vec<Vec<usize>> = inst.cells.iter().map(|c| c.u.clone()).collect();
    // stamp[v] == i + 1 iff v currently belongs to U_i (for the cell in hand).
    let mut stamp: Vec<usize> = vec![0; g.vertex_count()];
    let mut expansions = 0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..cells.len() {
        for &v in &cells[i] {
            stamp[v] = i + 1;
        }
        let w: Vec<usize> = cells[i].iter().copied().filter(|&v| is_exclusive(&labels, v, i)).collect();
        if w.is_empty() {
            return Err(Infeasible::NoExclusiveSite(i));
        }
        let connected = |set: &[usize], inside: &dyn Fn(usize) -> bool| {
            set.iter().filter(|&&v| parent[v].is_none_or(|q| !inside(q))).count() == 1
        };
        if !connected(&cells[i], &|q| stamp[q] == i + 1) {
            return Err(Infeasible::DisconnectedCell(i));
        }
        if !connected(&w, &|q| stamp[q] == i + 1 && is_exclusive(&labels, q, i)) {
            return Err(Infeasible::DisconnectedExclusive(i));
        }
        let mut edges = Vec::new();
        for &x in &w {
            for (y, _) in g.neighbors(x) {
                if stamp[*y] == i + 1 && !is_exclusive(&labels, *y, i) {
                    edges.push((x, *y));
                }
            }
        }
        let mut new_u = w.clone();
        for (x, y) in edges {
            // R_xy: the part of U_i hanging off x through y.
            let mut stack = vec![y];
            stamp[y] = 0;
            while let Some(r) = stack.pop() {
                labels[r].retain(|&j| j != i);
                for (z, _) in g.neighbors(r) {
                    if *z != x && stamp[*z] == i + 1 {
                        stamp[*z] = 0;
                        stack.push(*z);
                    }
                }
            }
            let lambda = g.weight(x, y).expect("boundary edge exists").clone();
            let y2 = g.subdivide(x, y, lambda, Weight::eps());
            if parent[y] == Some(x) {
                parent.push(Some(x));
                parent[y] = Some(y2);
            } else {
                parent.push(Some(y));
                parent[x] = Some(y2);
            }
            labels.push(vec![i]);
            stamp.push(0);
            new_u.push(y2);
            expansions += 1;
        }
        for &v in &new_u {
            stamp[v] = 0;
        }
        new_u.sort_unstable();
        cells[i] = new_u;
    }
    let cells = cells.into_iter().zip(&inst.cells).map(|(u, c)| Cell { u, s: c.s.clone() }).collect();
    Ok(Expanded { instance: Instance::new(g, cells, InstanceKind::Tree), expansions })
}

/// Cell index of every vertex when the cells partition the vertex set.
pub fn cell_index(inst: &Instance) -> Option<Vec<usize>> {
    let mut owner = vec![usize::MAX; inst.n()];
    for (i, c) in inst.cells.iter().enumerate() {
        for &v in &c.u {
            if owner[v] != usize::MAX {
                return None;
            }
            owner[v] = i;
        }
    }
    owner.iter().all(|&o| o != usize::MAX).then_some(owner)
}

/// Checks that `inst` is a tree whose cells partition `V` into connected parts.
pub fn check_disjoint_connected(inst: &Instance) -> Result<Vec<usize>, TransformError> {
    if !inst.graph.is_tree() {
        return Err(TransformError::NotATree);
    }
    let owner = cell_index(inst).ok_or(TransformError::NotAPartition)?;
    let tree = RootedTree::new(&inst.graph, 0).expect("checked tree");
    let mut tops = vec![0usize; inst.k()];
    for v in 0..inst.n() {
        if tree.parent[v].is_none_or(|p| owner[p] != owner[v]) {
            tops[owner[v]] += 1;
        }
    }
    if let Some(i) = tops.iter().position(|&t| t != 1) {
        return Err(TransformError::DisconnectedCell(i));
    }
    Ok(owner)
}

/// Replaces every vertex `u` by a path of new vertices `a_{u,v}`, one per
/// neighbour `v`, joined by `δ′` edges; the edge `uv` becomes
/// `a_{u,v}a_{v,u}`. Edges between different cells are shortened by
/// `4n·δ′`. The result has maximum degree 3.
pub fn split_to_degree3(inst: &Instance) -> Result<(Instance, ProjectionMap), TransformError> {
    let owner = check_disjoint_connected(inst)?;
    let n = inst.n();
    let g = &inst.graph;
    let mut first = vec![0usize; n + 1];
    for u in 0..n {
        first[u + 1] = first[u] + g.degree(u).max(1);
    }
    let total = first[n];
    let mut proj = vec![0usize; total];
    for u in 0..n {
        proj[first[u]..first[u + 1]].fill(u);
    }
    let mut out = Graph::new(total);
    let shrink = Weight::new(Rational::ZERO, Rational::ZERO, Rational::from_integer(-4 * n as i64));
    let mut pending: HashMap<(usize, usize), usize> = HashMap::with_capacity(g.edge_count());
    for u in 0..n {
        for (j, (v, w)) in g.neighbors(u).iter().enumerate() {
            let a = first[u] + j;
            if j > 0 {
                out.add_edge(a - 1, a, Weight::delta());
            }
            match pending.remove(&(*v, u)) {
                Some(b) => {
                    let len = if owner[u] == owner[*v] { w.clone() } else { w + &shrink };
                    out.add_edge(b, a, len);
                }
                None => {
                    pending.insert((u, *v), a);
                }
            }
        }
    }
    let cells = inst
        .cells
        .iter()
        .map(|c| {
            let expand = |set: &[usize]| set.iter().flat_map(|&u| first[u]..first[u + 1]).collect::<Vec<_>>();
            Cell::new(expand(&c.u), expand(&c.s))
        })
        .collect();
    Ok((Instance::new(out, cells, InstanceKind::Tree), ProjectionMap(proj)))
}

pub fn project_solution(sol: &Solution, pi: &ProjectionMap) -> Solution {
    Solution::new(sol.sites.iter().map(|&s| pi.0[s]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::check_solution;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, Weight::int(1))))
    }

    fn tree_inst(g: Graph, cells: Vec<Vec<usize>>) -> Instance {
        Instance::new(g, cells.into_iter().map(Cell::plain).collect(), InstanceKind::Tree)
    }

    #[test]
    fn disjoint_cells_need_nothing() {
        let inst = tree_inst(path(4), vec![vec![0, 1], vec![2, 3]]);
        let p = preprocess(&inst).unwrap();
        assert_eq!(p.exclusive, vec![vec![0, 1], vec![2, 3]]);
        assert!(p.boundary.iter().all(Vec::is_empty));
        let e = expand_to_disjoint(&p).unwrap();
        assert_eq!(e.expansions, 0);
        assert_eq!(e.instance, inst);
    }

    #[test]
    fn overlap_on_path_needs_one_expansion() {
        // Unit path 0-1-2; vertex 1 is tied between the two cells.
        let inst = tree_inst(path(3), vec![vec![0, 1], vec![1, 2]]);
        let p = preprocess(&inst).unwrap();
        assert_eq!(p.boundary, vec![vec![(0, 1)], vec![(2, 1)]]);
        let e = expand_to_disjoint(&p).unwrap();
        assert_eq!(e.expansions, 1);
        assert!(cell_index(&e.instance).is_some());
        check_disjoint_connected(&e.instance).unwrap();
        // The planted solution (0, 2) survives.
        assert!(check_solution(&inst, &Solution::new(vec![0, 2])).unwrap());
        assert!(check_solution(&e.instance, &Solution::new(vec![0, 2])).unwrap());
    }

    #[test]
    fn disconnected_cell_is_infeasible() {
        let inst = tree_inst(path(3), vec![vec![0, 2], vec![1]]);
        assert_eq!(preprocess(&inst).unwrap_err(), Infeasible::DisconnectedCell(0));
        let inst = tree_inst(path(3), vec![vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(preprocess(&inst).unwrap_err(), Infeasible::NoExclusiveSite(0));
    }

    #[test]
    fn star_center_becomes_a_path() {
        let g = Graph::from_edges(6, (1..6).map(|v| (0, v, Weight::int(1))));
        let inst = tree_inst(g, vec![vec![0, 1, 2, 3, 4, 5]]);
        let (t, pi) = split_to_degree3(&inst).unwrap();
        assert_eq!(t.n(), 10);
        assert!(t.graph.is_tree());
        assert!(t.graph.max_degree() <= 3);
        let center: Vec<usize> = (0..t.n()).filter(|&a| pi.0[a] == 0).collect();
        assert_eq!(center.len(), 5);
        for w in center.windows(2) {
            assert_eq!(t.graph.weight(w[0], w[1]), Some(&Weight::delta()));
        }
    }

    #[test]
    fn cross_cell_edges_shrink() {
        let inst = tree_inst(path(2), vec![vec![0], vec![1]]);
        let (t, _) = split_to_degree3(&inst).unwrap();
        let w = t.graph.weight(0, 1).unwrap();
        assert_eq!(*w, Weight::new(1.into(), 0.into(), (-8).into()));
        assert!(w.is_positive());
    }

    #[test]
    fn path_split_keeps_degree_bound() {
        let inst = tree_inst(path(5), vec![vec![0, 1, 2], vec![3, 4]]);
        let (t, pi) = split_to_degree3(&inst).unwrap();
        assert!(t.graph.max_degree() <= 3);
        assert_eq!(t.n(), 8);
        let sol = project_solution(&Solution::new(vec![0, 7]), &pi);
        assert_eq!(sol.sites, vec![0, 4]);
    }

    #[test]
    fn single_vertex_split() {
        let inst = tree_inst(Graph::new(1), vec![vec![0]]);
        let (t, pi) = split_to_degree3(&inst).unwrap();
        assert_eq!(t.n(), 1);
        assert_eq!(pi.0, vec![0]);
    }
}
