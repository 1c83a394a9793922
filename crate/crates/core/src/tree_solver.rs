//! Exact solver for trees.
//!
//! After the reductions in [`crate::transform`] the tree has maximum degree 3
//! and disjoint connected cells. Rooted at a leaf, every node `v` gets two
//! sets of distances to the site of its own cell `i(v)`:
//!
//! * `B(v)`: distances `d(s, v)` for sites `s` inside the subtree `T(v)`
//!   that extend to a valid placement of every cell meeting `T(v)`;
//! * `A(v)`: distances `α > 0` such that a site hanging above `v` at
//!   distance `α` extends to a valid placement inside `T(v)`.
//!
//! `B` is a finite set of points, `A` a union of intervals; both are kept in
//! persistent [`MonotonicFamily`] stores and merged small-to-large.

use thiserror::Error;

use crate::graph::RootedTree;
use crate::instance::{validate_instance, Instance, InstanceKind, Solution, Violation};
use crate::interval::{minimal_representation, EndpointPolicy, Interval, MonotonicFamily};
use crate::transform::{
    check_disjoint_connected, expand_to_disjoint, preprocess, project_solution, split_to_degree3, Infeasible,
    TransformError,
};
use crate::voronoi::check_solution;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid instance: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("instance is not a tree")]
    NotATree,
    #[error("precondition failed: {0}")]
    Precondition(#[from] TransformError),
    #[error("tree has maximum degree {0}, expected at most 3")]
    DegreeTooHigh(usize),
    #[error("witness recovery failed at node {0}")]
    Recovery(usize),
}

#[derive(Clone, Debug)]
pub struct NodeSets {
    pub a: MonotonicFamily,
    pub b: MonotonicFamily,
    /// Subtree size `n(v)`.
    pub size: usize,
    pub cell: usize,
}

impl NodeSets {
    pub fn m_a(&self) -> usize {
        self.a.len()
    }

    pub fn m_b(&self) -> usize {
        self.b.len()
    }

    fn m(&self) -> usize {
        self.a.len() + self.b.len()
    }
}

/// Counters from one DP run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub nodes: usize,
    /// Nodes with two children.
    pub merges: usize,
    /// `Σ min(n(v1), n(v2))` over nodes with two children.
    pub sum_min_subtree: u64,
    /// `Σ min(m(v1), m(v2))`, the number of intervals materialized.
    pub merge_cost: u64,
    pub max_m_a: usize,
    pub max_m_b: usize,
}

fn positive() -> Interval {
    Interval::above(Weight::zero())
}

fn neg(w: &Weight) -> Weight {
    -w.clone()
}

/// A child together with the length of its edge to the parent.
#[derive(Clone, Copy)]
struct Child<'a> {
    sets: &'a NodeSets,
    lambda: &'a Weight,
}

impl Child<'_> {
    /// `A′ = A − λ`.
    fn a_prime(&self) -> MonotonicFamily {
        self.sets.a.shift(&neg(self.lambda))
    }

    /// `B′ = B + λ`.
    fn b_prime(&self) -> MonotonicFamily {
        self.sets.b.shift(self.lambda)
    }

    /// `C′ = ∪_{b ∈ B} (b − λ, b + λ)`.
    fn c_prime(&self) -> MonotonicFamily {
        self.sets.b.extend(self.lambda, EndpointPolicy::Open)
    }

    /// `y ∈ C′`.
    fn c_hit(&self, y: &Weight) -> Option<Interval> {
        self.sets.b.first_hit(&Interval::open(y - self.lambda, y + self.lambda))
    }

    /// Whether a site for this child's cell at distance `y` from the parent,
    /// outside `T(child)`, is consistent with the subtree: through `A` when
    /// the child shares the parent's cell, through `B` otherwise.
    fn accepts(&self, same: bool, y: &Weight) -> bool {
        if same {
            self.sets.a.contains_point(&(y + self.lambda))
        } else {
            self.c_hit(y).is_some()
        }
    }

    fn upper(&self, same: bool) -> MonotonicFamily {
        if same {
            self.a_prime()
        } else {
            self.c_prime()
        }
    }
}

pub fn leaf_sets(in_s: bool, cell: usize) -> NodeSets {
    let b = if in_s { MonotonicFamily::singleton(Interval::point(Weight::zero())) } else { MonotonicFamily::new() };
    NodeSets { a: MonotonicFamily::singleton(positive()), b, size: 1, cell }
}

/// `χ(v)` as a flag: `v` is an allowed site and every child accepts a site
/// at `v` (distance 0).
pub fn chi(in_s: bool, child_accepts_zero: &[bool]) -> bool {
    in_s && child_accepts_zero.iter().all(|&x| x)
}

fn zero_family(present: bool) -> MonotonicFamily {
    if present {
        MonotonicFamily::singleton(Interval::point(Weight::zero()))
    } else {
        MonotonicFamily::new()
    }
}

pub fn combine_one_child(cell: usize, in_s: bool, child: &NodeSets, lambda: &Weight) -> NodeSets {
    let c = Child { sets: child, lambda };
    let same = child.cell == cell;
    let a = c.upper(same).clip_inside(&positive());
    let has_zero = chi(in_s, &[c.accepts(same, &Weight::zero())]);
    let b = if same {
        let shifted = c.b_prime();
        if has_zero {
            zero_family(true).join(&shifted).expect("shifted points are positive")
        } else {
            shifted
        }
    } else {
        zero_family(has_zero)
    };
    NodeSets { a, b, size: child.size + 1, cell }
}

/// Merges two children. The child with fewer stored intervals is
/// materialized; the other is only queried. Returns the sets and the number
/// of materialized intervals.
pub fn combine_two_children(
    cell: usize,
    in_s: bool,
    c1: &NodeSets,
    lambda1: &Weight,
    c2: &NodeSets,
    lambda2: &Weight,
) -> (NodeSets, u64) {
    let (small, large) = {
        let x = Child { sets: c1, lambda: lambda1 };
        let y = Child { sets: c2, lambda: lambda2 };
        if c1.m() <= c2.m() {
            (x, y)
        } else {
            (y, x)
        }
    };
    let s_small = small.sets.cell == cell;
    let s_large = large.sets.cell == cell;
    let cost = small.sets.m() as u64;

    let restrict = |pieces: &[Interval], large_fam: &MonotonicFamily| large_fam.clip_to_union(pieces);

    let small_pieces = minimal_representation(&small.upper(s_small).clip_inside(&positive()).report());
    let a = restrict(&small_pieces, &large.upper(s_large));

    let zero = Weight::zero();
    let has_zero = chi(in_s, &[small.accepts(s_small, &zero), large.accepts(s_large, &zero)]);
    let b = match (s_small, s_large) {
        (true, true) => {
            let from_large = restrict(&minimal_representation(&small.a_prime().report()), &large.b_prime());
            let mut pts: Vec<Weight> = Vec::new();
            if has_zero {
                pts.push(zero);
            }
            for y in small.b_prime().report() {
                let y = point_of(&y);
                if large.accepts(true, &y) {
                    pts.push(y);
                }
            }
            from_large.insert_points(&pts)
        }
        (true, false) => {
            let mut pts: Vec<Weight> = Vec::new();
            if has_zero {
                pts.push(zero);
            }
            for y in small.b_prime().report() {
                let y = point_of(&y);
                if large.accepts(false, &y) {
                    pts.push(y);
                }
            }
            MonotonicFamily::from_points(&pts).expect("sorted distinct points")
        }
        (false, true) => {
            let pieces = minimal_representation(&small.c_prime().report());
            let b = restrict(&pieces, &large.b_prime());
            if has_zero {
                zero_family(true).join(&b).expect("shifted points are positive")
            } else {
                b
            }
        }
        (false, false) => zero_family(has_zero),
    };
    (NodeSets { a, b, size: c1.size + c2.size + 1, cell }, cost)
}

/// All per-node sets of one DP run on a subcubic tree with disjoint cells.
#[derive(Clone, Debug)]
pub struct DpRun {
    pub tree: RootedTree,
    pub sets: Vec<NodeSets>,
    pub in_s: Vec<bool>,
    pub stats: DpStats,
}

/// Checks the subcubic, disjoint-cell preconditions and runs the DP
/// bottom-up from a leaf root (the smallest-id vertex of degree ≤ 1).
pub fn run_dp(inst: &Instance) -> Result<DpRun, SolveError> {
    let owner = check_disjoint_connected(inst)?;
    let deg = inst.graph.max_degree();
    if deg > 3 {
        return Err(SolveError::DegreeTooHigh(deg));
    }
    let n = inst.n();
    let mut in_s = vec![false; n];
    for (i, c) in inst.cells.iter().enumerate() {
        for &s in &c.s {
            if s < n && owner[s] == i {
                in_s[s] = true;
            }
        }
    }
    let root = (0..n).find(|&v| inst.graph.degree(v) <= 1).expect("a tree has a leaf");
    let tree = RootedTree::new(&inst.graph, root).ok_or(SolveError::NotATree)?;
    let mut sets: Vec<Option<NodeSets>> = vec![None; n];
    let mut stats = DpStats { nodes: n, ..DpStats::default() };
    for &v in tree.order.iter().rev() {
        let ch = &tree.children[v];
        let node = match ch.as_slice() {
            [] => leaf_sets(in_s[v], owner[v]),
            [c] => combine_one_child(owner[v], in_s[v], sets[*c].as_ref().unwrap(), &tree.parent_weight[*c]),
            [c1, c2] => {
                let (x, y) = (sets[*c1].as_ref().unwrap(), sets[*c2].as_ref().unwrap());
                let (node, cost) =
                    combine_two_children(owner[v], in_s[v], x, &tree.parent_weight[*c1], y, &tree.parent_weight[*c2]);
                stats.merges += 1;
                stats.sum_min_subtree += x.size.min(y.size) as u64;
                stats.merge_cost += cost;
                node
            }
            _ => unreachable!("root is a leaf and degrees are at most 3"),
        };
        stats.max_m_a = stats.max_m_a.max(node.m_a());
        stats.max_m_b = stats.max_m_b.max(node.m_b());
        sets[v] = Some(node);
    }
    let sets = sets.into_iter().map(|s| s.expect("every node visited")).collect();
    Ok(DpRun { tree, sets, in_s, stats })
}

enum Need {
    /// The site of the node's cell lies in its subtree at this distance.
    Below(Weight),
    /// The site lies outside the subtree at this distance.
    Above(Weight),
}

fn point_of(i: &Interval) -> Weight {
    i.left.value.to_finite().expect("points are finite")
}

impl DpRun {
    fn child(&self, c: usize) -> Child<'_> {
        Child { sets: &self.sets[c], lambda: &self.tree.parent_weight[c] }
    }

    /// Pushes the requirement for child `c` when the parent's site is at
    /// distance `y` outside `T(c)`.
    fn descend(&self, v: usize, c: usize, y: &Weight, stack: &mut Vec<(usize, Need)>) -> Result<(), SolveError> {
        let ch = self.child(c);
        if self.sets[c].cell == self.sets[v].cell {
            stack.push((c, Need::Above(y + ch.lambda)));
        } else {
            let hit = ch.c_hit(y).ok_or(SolveError::Recovery(c))?;
            stack.push((c, Need::Below(point_of(&hit))));
        }
        Ok(())
    }

    /// Recovers one placement from a nonempty `B(root)`, choosing its
    /// smallest element and re-deriving each node's case top-down.
    pub fn recover(&self, k: usize) -> Result<Option<Solution>, SolveError> {
        let root = self.tree.root;
        let Some(start) = self.sets[root].b.first() else { return Ok(None) };
        let mut sites = vec![usize::MAX; k];
        let mut stack = vec![(root, Need::Below(point_of(&start)))];
        while let Some((v, need)) = stack.pop() {
            let cell = self.sets[v].cell;
            let children = &self.tree.children[v];
            match need {
                Need::Above(alpha) => {
                    for &c in children {
                        self.descend(v, c, &alpha, &mut stack)?;
                    }
                }
                Need::Below(beta) if beta.is_zero() => {
                    if !self.in_s[v] {
                        return Err(SolveError::Recovery(v));
                    }
                    sites[cell] = v;
                    for &c in children {
                        self.descend(v, c, &beta, &mut stack)?;
                    }
                }
                Need::Below(beta) => {
                    let pick = children.iter().copied().find(|&c| {
                        let ch = self.child(c);
                        self.sets[c].cell == cell
                            && ch.sets.b.contains_point(&(&beta - ch.lambda))
                            && children
                                .iter()
                                .filter(|&&o| o != c)
                                .all(|&o| self.child(o).accepts(self.sets[o].cell == cell, &beta))
                    });
                    let c = pick.ok_or(SolveError::Recovery(v))?;
                    stack.push((c, Need::Below(&beta - &self.tree.parent_weight[c])));
                    for &o in children.iter().filter(|&&o| o != c) {
                        self.descend(v, o, &beta, &mut stack)?;
                    }
                }
            }
        }
        if sites.contains(&usize::MAX) {
            return Err(SolveError::Recovery(root));
        }
        Ok(Some(Solution::new(sites)))
    }
}

/// Solves a subcubic tree instance with disjoint connected cells.
pub fn solve_subcubic_disjoint(inst: &Instance) -> Result<(Option<Solution>, DpStats), SolveError> {
    let run = run_dp(inst)?;
    let sol = run.recover(inst.k())?;
    Ok((sol, run.stats))
}

/// What the pipeline did on one instance.
#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub solution: Option<Solution>,
    /// Set when the reductions proved the instance infeasible.
    pub infeasible: Option<Infeasible>,
    pub expansions: usize,
    /// Vertex count of the subcubic tree the DP ran on.
    pub dp_vertices: usize,
    pub stats: Option<DpStats>,
}

/// Full pipeline for tree instances. A returned solution has been checked
/// against the original instance.
pub fn solve_with_report(inst: &Instance) -> Result<SolveReport, SolveError> {
    if inst.kind != InstanceKind::Tree {
        return Err(SolveError::NotATree);
    }
    let violations = validate_instance(inst);
    if violations.contains(&Violation::NotATree) {
        return Err(SolveError::NotATree);
    }
    if !violations.is_empty() {
        return Err(SolveError::Invalid(violations));
    }
    let mut report = SolveReport::default();
    if inst.k() == 1 {
        report.solution = inst.cells[0].s.first().map(|&s| Solution::new(vec![s]));
        return Ok(report);
    }
    let pre = match preprocess(inst) {
        Ok(p) => p,
        Err(e) => {
            report.infeasible = Some(e);
            return Ok(report);
        }
    };
    let expanded = match expand_to_disjoint(&pre) {
        Ok(e) => e,
        Err(e) => {
            report.infeasible = Some(e);
            return Ok(report);
        }
    };
    report.expansions = expanded.expansions;
    let (split, pi) = split_to_degree3(&expanded.instance)?;
    report.dp_vertices = split.n();
    let (sol, stats) = solve_subcubic_disjoint(&split)?;
    report.stats = Some(stats);
    if let Some(sol) = sol {
        // Expansion vertices never carry sites, so projection lands in V.
        let sol = project_solution(&sol, &pi);
        if check_solution(inst, &sol).unwrap_or(false) {
            report.solution = Some(sol);
        }
    }
    Ok(report)
}

pub fn solve(inst: &Instance) -> Result<Option<Solution>, SolveError> {
    solve_with_report(inst).map(|r| r.solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Cell;

    fn w(x: i64) -> Weight {
        Weight::int(x)
    }

    fn points(f: &MonotonicFamily) -> Vec<Weight> {
        f.report().iter().map(point_of).collect()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, w(1))))
    }

    fn tree(g: Graph, cells: Vec<Cell>) -> Instance {
        Instance::new(g, cells, InstanceKind::Tree)
    }

    #[test]
    fn leaves() {
        let l = leaf_sets(true, 0);
        assert_eq!(points(&l.b), vec![w(0)]);
        assert!(l.a.contains_point(&w(7)));
        assert!(!l.a.contains_point(&w(0)));
        assert!(leaf_sets(false, 0).b.is_empty());
    }

    #[test]
    fn chi_needs_allowed_site() {
        assert!(!chi(false, &[true, true]));
        assert!(chi(true, &[true, true]));
        assert!(!chi(true, &[false]));
    }

    #[test]
    fn one_child_cases() {
        // Same cell, child B = {0}, v not allowed: B(v) = {1}.
        let v = combine_one_child(0, false, &leaf_sets(true, 0), &w(1));
        assert_eq!(points(&v.b), vec![w(1)]);
        // Different cell, v allowed: 0 ∈ (−1, 1).
        let v = combine_one_child(1, true, &leaf_sets(true, 0), &w(1));
        assert_eq!(points(&v.b), vec![w(0)]);
        // A stays ℝ>0 through a same-cell child.
        let v = combine_one_child(0, false, &leaf_sets(false, 0), &w(2));
        assert_eq!(v.a.report(), vec![positive()]);
        // Different cell: A(v) = C′ ∩ ℝ>0 = (0, 1).
        let v = combine_one_child(1, false, &leaf_sets(true, 0), &w(1));
        assert_eq!(v.a.report(), vec![Interval::open(w(0), w(1))]);
    }

    #[test]
    fn two_children_of_other_cells_give_chi_only() {
        let (v, _) = combine_two_children(2, true, &leaf_sets(true, 0), &w(1), &leaf_sets(true, 1), &w(1));
        assert_eq!(points(&v.b), vec![w(0)]);
        let (v, _) = combine_two_children(2, false, &leaf_sets(true, 0), &w(1), &leaf_sets(true, 1), &w(1));
        assert!(v.b.is_empty());
    }

    #[test]
    fn two_same_cell_leaves() {
        let (v, _) = combine_two_children(0, true, &leaf_sets(true, 0), &w(1), &leaf_sets(true, 0), &w(2));
        assert_eq!(points(&v.b), vec![w(0), w(1), w(2)]);
        assert_eq!(v.a.report(), vec![positive()]);
    }

    #[test]
    fn path_examples() {
        let inst = tree(path(3), vec![Cell::plain(vec![0, 1]), Cell::plain(vec![2])]);
        let sol = solve(&inst).unwrap().unwrap();
        assert!(check_solution(&inst, &sol).unwrap());
        assert_eq!(sol.sites, vec![1, 2]);

        let inst = tree(path(3), vec![Cell::new(vec![0], vec![0]), Cell::new(vec![1, 2], vec![2])]);
        assert_eq!(solve(&inst).unwrap(), None);
    }

    #[test]
    fn single_cell_returns_allowed_site() {
        let inst = tree(path(4), vec![Cell::new(vec![0, 1, 2, 3], vec![3])]);
        assert_eq!(solve(&inst).unwrap(), Some(Solution::new(vec![3])));
    }

    #[test]
    fn graph_kind_rejected() {
        let inst = Instance::new(path(2), vec![Cell::plain(vec![0, 1])], InstanceKind::Graph);
        assert_eq!(solve(&inst), Err(SolveError::NotATree));
    }

    #[test]
    fn tied_middle_vertex() {
        // 0-1-2 with both cells sharing 1: sites 0 and 2.
        let inst = tree(path(3), vec![Cell::plain(vec![0, 1]), Cell::plain(vec![1, 2])]);
        let r = solve_with_report(&inst).unwrap();
        assert_eq!(r.expansions, 1);
        assert_eq!(r.solution, Some(Solution::new(vec![0, 2])));
    }

    #[test]
    fn degree_three_center() {
        // Star with centre 0 and leaves 1..3 of lengths 1, 2, 3.
        let g = Graph::from_edges(4, [(0, 1, w(1)), (0, 2, w(2)), (0, 3, w(3))]);
        let inst = tree(g, vec![Cell::plain(vec![0, 1, 2]), Cell::plain(vec![3])]);
        let sol = solve(&inst).unwrap().unwrap();
        assert!(check_solution(&inst, &sol).unwrap());
    }
}
