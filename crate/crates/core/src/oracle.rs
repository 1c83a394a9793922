//! Exhaustive reference solvers. Distances here come from a quadratic
//! array-scan Dijkstra and tree walks, not from [`crate::voronoi`], so the
//! oracles share no code path with the solvers they check.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::RootedTree;
use crate::instance::{Instance, Solution};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("search space of {tuples} tuples exceeds budget {budget}")]
pub struct BudgetExceeded {
    pub tuples: u128,
    pub budget: u128,
}

#[derive(Clone, Copy, Debug)]
pub struct BruteOptions {
    /// Largest number of tuples tried before giving up.
    pub budget: u128,
    /// Restrict `s_i` to the open part `W_i` of its cell, which every
    /// solution satisfies since a site is strictly closest to itself.
    pub prune: bool,
}

impl BruteOptions {
    pub fn new(budget: u128) -> Self {
        BruteOptions { budget, prune: true }
    }
}

/// Single-source distances by repeated linear scans; `O(n²)`.
pub fn scan_distances(inst: &Instance, src: usize) -> Vec<Option<Weight>> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let mut dist: Vec<Option<Weight>> = vec![None; n];
    let mut done = vec![false; n];
    dist[src] = Some(Weight::zero());
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if best.is_none_or(|b| d < dist[b].as_ref().unwrap()) {
                    best = Some(v);
                }
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for (v, w) in g.neighbors(u) {
            let nd = &du + w;
            if dist[*v].as_ref().is_none_or(|x| nd < *x) {
                dist[*v] = Some(nd);
            }
        }
    }
    dist
}

/// Per-cell candidate sites.
pub fn candidates(inst: &Instance, prune: bool) -> Vec<Vec<usize>> {
    let labels = inst.memberships();
    inst.cells
        .iter()
        .enumerate()
        .map(|(i, c)| c.s.iter().copied().filter(|&s| s < inst.n() && (!prune || labels[s] == [i])).collect())
        .collect()
}

/// Lazily filled distance rows.
struct Rows<'a> {
    inst: &'a Instance,
    rows: Vec<Option<Vec<Option<Weight>>>>,
}

impl<'a> Rows<'a> {
    fn new(inst: &'a Instance) -> Self {
        Rows { inst, rows: vec![None; inst.n()] }
    }

    fn get(&mut self, s: usize) -> &[Option<Weight>] {
        if self.rows[s].is_none() {
            self.rows[s] = Some(scan_distances(self.inst, s));
        }
        self.rows[s].as_ref().unwrap()
    }
}

/// Checks a placement straight from the definition: every vertex lies in
/// exactly the cells of its nearest sites.
fn placement_valid(inst: &Instance, labels: &[Vec<usize>], rows: &mut Rows, sites: &[usize]) -> bool {
    for (i, &s) in sites.iter().enumerate() {
        if inst.cells[i].s.binary_search(&s).is_err() || sites[..i].contains(&s) {
            return false;
        }
    }
    for &s in sites {
        rows.get(s);
    }
    let table: Vec<&[Option<Weight>]> = sites.iter().map(|&s| rows.rows[s].as_deref().unwrap()).collect();
    let mut nearest = Vec::new();
    for (u, lab) in labels.iter().enumerate() {
        let mut best: Option<&Weight> = None;
        nearest.clear();
        for (i, row) in table.iter().enumerate() {
            let Some(d) = row[u].as_ref() else { continue };
            match best.map(|b| d.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    best = Some(d);
                    nearest.clear();
                    nearest.push(i);
                }
                Some(std::cmp::Ordering::Equal) => nearest.push(i),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
        if nearest != *lab {
            return false;
        }
    }
    true
}

fn tuple_count(cands: &[Vec<usize>]) -> u128 {
    cands.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
}

/// Visits tuples in lexicographic order until `f` returns false.
fn for_each_tuple(cands: &[Vec<usize>], mut f: impl FnMut(&[usize]) -> bool) {
    if cands.iter().any(Vec::is_empty) {
        return;
    }
    let k = cands.len();
    let mut idx = vec![0usize; k];
    let mut tuple: Vec<usize> = cands.iter().map(|c| c[0]).collect();
    loop {
        if !f(&tuple) {
            return;
        }
        let mut p = k;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < cands[p].len() {
                tuple[p] = cands[p][idx[p]];
                break;
            }
            idx[p] = 0;
            tuple[p] = cands[p][0];
        }
    }
}

fn search(inst: &Instance, opts: BruteOptions, all: bool) -> Result<Vec<Solution>, BudgetExceeded> {
    let cands = candidates(inst, opts.prune);
    let tuples = tuple_count(&cands);
    if tuples > opts.budget {
        return Err(BudgetExceeded { tuples, budget: opts.budget });
    }
    let labels = inst.memberships();
    let mut rows = Rows::new(inst);
    let mut found = Vec::new();
    for_each_tuple(&cands, |t| {
        if placement_valid(inst, &labels, &mut rows, t) {
            found.push(Solution::new(t.to_vec()));
            return all;
        }
        true
    });
    Ok(found)
}

/// First valid tuple in lexicographic order, trying every combination of
/// candidate sites.
pub fn brute_force_solve(inst: &Instance, budget: u128) -> Result<Option<Solution>, BudgetExceeded> {
    brute_force_solve_with(inst, BruteOptions::new(budget))
}

pub fn brute_force_solve_with(inst: &Instance, opts: BruteOptions) -> Result<Option<Solution>, BudgetExceeded> {
    Ok(search(inst, opts, false)?.into_iter().next())
}

/// Every valid tuple, in lexicographic order. Never pruned.
pub fn enumerate_solutions(inst: &Instance, budget: u128) -> Result<Vec<Solution>, BudgetExceeded> {
    search(inst, BruteOptions { budget, prune: false }, true)
}

/// The pairwise condition: equal distances on `U_i ∩ U_j`, strictly closer
/// to the own site elsewhere in `U_i ∪ U_j`.
fn compatible(inst: &Instance, i: usize, di: &[Option<Weight>], j: usize, dj: &[Option<Weight>]) -> bool {
    let (ui, uj) = (&inst.cells[i].u, &inst.cells[j].u);
    let less = |a: &Option<Weight>, b: &Option<Weight>| match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    };
    ui.iter().all(|&u| if uj.binary_search(&u).is_ok() { di[u] == dj[u] } else { less(&di[u], &dj[u]) })
        && uj.iter().all(|&u| ui.binary_search(&u).is_ok() || less(&dj[u], &di[u]))
}

/// Exact search over pairwise-compatible placements with forward checking.
/// Handles instances far beyond plain enumeration when cells constrain each
/// other tightly.
pub fn csp_solve(inst: &Instance) -> Option<Solution> {
    let k = inst.k();
    let cands = candidates(inst, true);
    if cands.iter().any(Vec::is_empty) {
        return None;
    }
    let mut rows = Rows::new(inst);
    for c in &cands {
        for &s in c {
            rows.get(s);
        }
    }
    let row = |s: usize| rows.rows[s].as_deref().unwrap();
    // ok[i][j][a][b]: candidate a of cell i fits candidate b of cell j.
    let mut ok: Vec<Vec<Vec<Vec<bool>>>> = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            ok[i][j] = cands[i]
                .iter()
                .map(|&a| cands[j].iter().map(|&b| a != b && compatible(inst, i, row(a), j, row(b))).collect())
                .collect();
        }
    }
    let mut domains: Vec<Vec<bool>> = cands.iter().map(|c| vec![true; c.len()]).collect();
    let mut assigned: Vec<Option<usize>> = vec![None; k];
    if backtrack(&ok, &mut domains, &mut assigned) {
        Some(Solution::new(assigned.iter().enumerate().map(|(i, a)| cands[i][a.unwrap()]).collect()))
    } else {
        None
    }
}

fn backtrack(ok: &[Vec<Vec<Vec<bool>>>], domains: &mut Vec<Vec<bool>>, assigned: &mut Vec<Option<usize>>) -> bool {
    let k = assigned.len();
    let next = (0..k).filter(|&i| assigned[i].is_none()).min_by_key(|&i| domains[i].iter().filter(|&&x| x).count());
    let Some(i) = next else { return true };
    for a in 0..domains[i].len() {
        if !domains[i][a] {
            continue;
        }
        let saved = domains.clone();
        let mut dead = false;
        for j in 0..k {
            if j == i || assigned[j].is_some() {
                continue;
            }
            for b in 0..domains[j].len() {
                domains[j][b] &= ok[i][j][a][b];
            }
            if !domains[j].iter().any(|&x| x) {
                dead = true;
                break;
            }
        }
        if !dead {
            assigned[i] = Some(a);
            if backtrack(ok, domains, assigned) {
                return true;
            }
            assigned[i] = None;
        }
        *domains = saved;
    }
    false
}

/// Vertices of `T(v)`.
fn subtree(tree: &RootedTree, v: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut i = 0;
    while i < out.len() {
        out.extend(tree.children[out[i]].iter().copied());
        i += 1;
    }
    out
}

/// Distances from `src` to every vertex of `inside` along tree paths that
/// stay inside it.
fn walk(inst: &Instance, inside: &[bool], src: usize) -> Vec<Option<Weight>> {
    let mut dist: Vec<Option<Weight>> = vec![None; inst.n()];
    dist[src] = Some(Weight::zero());
    let mut stack = vec![src];
    while let Some(u) = stack.pop() {
        let du = dist[u].clone().unwrap();
        for (x, w) in inst.graph.neighbors(u) {
            if inside[*x] && dist[*x].is_none() {
                dist[*x] = Some(&du + w);
                stack.push(*x);
            }
        }
    }
    dist
}

fn owners(inst: &Instance) -> Vec<usize> {
    let mut o = vec![usize::MAX; inst.n()];
    for (i, c) in inst.cells.iter().enumerate() {
        for &u in &c.u {
            o[u] = i;
        }
    }
    o
}

/// Checks the subtree condition for sites given as distance rows, one per
/// cell in `cells`.
fn subtree_cells_match(part: &[usize], owner: &[usize], cells: &[usize], rows: &[Vec<Option<Weight>>]) -> bool {
    part.iter().all(|&u| {
        let best = rows.iter().filter_map(|r| r[u].as_ref()).min().expect("some site reaches u");
        cells.iter().zip(rows).all(|(&j, r)| (r[u].as_ref() == Some(best)) == (owner[u] == j))
    })
}

/// Cells meeting `part` with the cell of `v` first.
fn cells_meeting(part: &[usize], owner: &[usize], v: usize) -> Vec<usize> {
    let mut j: Vec<usize> = part.iter().map(|&u| owner[u]).collect();
    j.sort_unstable();
    j.dedup();
    j.retain(|&x| x != owner[v]);
    j.insert(0, owner[v]);
    j
}

/// `B(v)` by enumeration: the distances `d(s, v)` over all placements
/// inside `T(v)` that reproduce the cells there. For trees with disjoint
/// cells; `tree` fixes the rooting.
pub fn compute_b_bruteforce(inst: &Instance, tree: &RootedTree, v: usize) -> BTreeSet<Weight> {
    let owner = owners(inst);
    let part = subtree(tree, v);
    let mut inside = vec![false; inst.n()];
    for &u in &part {
        inside[u] = true;
    }
    let cells = cells_meeting(&part, &owner, v);
    let cands: Vec<Vec<usize>> = cells
        .iter()
        .map(|&j| inst.cells[j].s.iter().copied().filter(|&s| inside[s] && owner[s] == j).collect())
        .collect();
    let mut out = BTreeSet::new();
    for_each_tuple(&cands, |t| {
        let rows: Vec<_> = t.iter().map(|&s| walk(inst, &inside, s)).collect();
        if subtree_cells_match(&part, &owner, &cells, &rows) {
            out.insert(rows[0][v].clone().unwrap());
        }
        true
    });
    out
}

/// Whether `α ∈ A(v)`: a site for `v`'s cell on a new pendant vertex at
/// distance `α` from `v`, with the other cells placed inside `T(v)`,
/// reproduces the cells of `T(v)`.
pub fn a_membership_bruteforce(inst: &Instance, tree: &RootedTree, v: usize, alpha: &Weight) -> bool {
    let owner = owners(inst);
    let part = subtree(tree, v);
    let mut inside = vec![false; inst.n()];
    for &u in &part {
        inside[u] = true;
    }
    let cells = cells_meeting(&part, &owner, v);
    let from_v = walk(inst, &inside, v);
    let above: Vec<Option<Weight>> = from_v.iter().map(|d| d.as_ref().map(|d| d + alpha)).collect();
    let cands: Vec<Vec<usize>> = cells[1..]
        .iter()
        .map(|&j| inst.cells[j].s.iter().copied().filter(|&s| inside[s] && owner[s] == j).collect())
        .collect();
    let mut found = false;
    let check = |t: &[usize]| {
        let mut rows = vec![above.clone()];
        rows.extend(t.iter().map(|&s| walk(inst, &inside, s)));
        subtree_cells_match(&part, &owner, &cells, &rows)
    };
    if cands.is_empty() {
        return check(&[]);
    }
    for_each_tuple(&cands, |t| {
        found = check(t);
        !found
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::{Cell, InstanceKind};

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, Weight::int(1))))
    }

    fn path_inst() -> Instance {
        Instance::new(path(3), vec![Cell::plain(vec![0, 1]), Cell::plain(vec![2])], InstanceKind::Tree)
    }

    #[test]
    fn path_brute_force() {
        let inst = path_inst();
        assert_eq!(brute_force_solve(&inst, 1000).unwrap(), Some(Solution::new(vec![1, 2])));
        assert_eq!(enumerate_solutions(&inst, 1000).unwrap(), vec![Solution::new(vec![1, 2])]);
        assert_eq!(csp_solve(&inst), Some(Solution::new(vec![1, 2])));
    }

    #[test]
    fn single_cell() {
        let inst = Instance::new(path(3), vec![Cell::new(vec![0, 1, 2], vec![2])], InstanceKind::Tree);
        assert_eq!(brute_force_solve(&inst, 10).unwrap(), Some(Solution::new(vec![2])));
    }

    #[test]
    fn budget() {
        let g = path(1000);
        let cells = (0..2).map(|_| Cell::plain((0..1000).collect())).collect();
        let inst = Instance::new(g, cells, InstanceKind::Tree);
        let err = brute_force_solve_with(&inst, BruteOptions { budget: 10, prune: false }).unwrap_err();
        assert_eq!(err.tuples, 1_000_000);
    }

    #[test]
    fn scan_matches_path() {
        let d = scan_distances(&path_inst(), 0);
        assert_eq!(d, vec![Some(0.into()), Some(1.into()), Some(2.into())]);
    }

    #[test]
    fn tuples_in_order() {
        let mut seen = Vec::new();
        for_each_tuple(&[vec![1, 2], vec![5, 6]], |t| {
            seen.push(t.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![1, 5], vec![1, 6], vec![2, 5], vec![2, 6]]);
    }

    #[test]
    fn leaf_sets_by_definition() {
        let inst =
            Instance::new(path(3), vec![Cell::new(vec![0, 1], vec![0]), Cell::plain(vec![2])], InstanceKind::Tree);
        let t = RootedTree::new(&inst.graph, 0).unwrap();
        assert_eq!(compute_b_bruteforce(&inst, &t, 2), BTreeSet::from([Weight::zero()]));
        assert!(a_membership_bruteforce(&inst, &t, 2, &Weight::int(5)));
        // Node 1 with site of cell 0 above at α: vertex 1 must be strictly
        // closer to it than to site 2 at distance 1.
        assert!(a_membership_bruteforce(&inst, &t, 1, &Weight::new(0.into(), 1.into(), 0.into())));
        assert!(!a_membership_bruteforce(&inst, &t, 1, &Weight::int(1)));
        assert!(compute_b_bruteforce(&inst, &t, 1).is_empty());
    }
}
