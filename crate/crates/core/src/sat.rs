//! Instances whose open cells have at most two vertices, solved through
//! 2-SAT. Works on general graphs.

use thiserror::Error;

use crate::instance::{Instance, Solution};
use crate::voronoi::{check_solution, distances_from};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
}

/// Conjunction of 2-clauses; a unit clause `ℓ` is stored as `(ℓ, ℓ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatFormula {
    pub vars: usize,
    pub clauses: Vec<(Literal, Literal)>,
}

impl TwoSatFormula {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        let val = |l: Literal| assignment[l.var] == l.positive;
        self.clauses.iter().all(|&(a, b)| val(a) || val(b))
    }
}

/// Satisfying assignment via strongly connected components of the
/// implication graph, or `None`.
pub fn two_sat(f: &TwoSatFormula) -> Option<Vec<bool>> {
    let nodes = 2 * f.vars;
    let mut adj = vec![Vec::new(); nodes];
    let mut radj = vec![Vec::new(); nodes];
    for &(a, b) in &f.clauses {
        // ¬a → b and ¬b → a.
        for (x, y) in [(a.negate(), b), (b.negate(), a)] {
            adj[x.node()].push(y.node());
            radj[y.node()].push(x.node());
        }
    }
    // Kosaraju: finish order on the graph, then components on the reverse
    // graph, numbered in topological order.
    let mut order = Vec::with_capacity(nodes);
    let mut seen = vec![false; nodes];
    for s in 0..nodes {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < adj[u].len() {
                stack.push((u, i + 1));
                let v = adj[u][i];
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; nodes];
    let mut count = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (0..f.vars)
        .map(|x| {
            let (t, fl) = (comp[2 * x], comp[2 * x + 1]);
            (t != fl).then_some(t > fl)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eligibility {
    /// Every cell has one or two admissible placements.
    Eligible,
    /// Cell has no admissible placement: the instance has no solution.
    NoPlacement(usize),
    /// Cell has more than two admissible placements.
    TooLarge(usize),
}

/// Admissible placements of each cell: the allowed sites in its open part.
pub fn placements(inst: &Instance) -> Vec<Vec<usize>> {
    let labels = inst.memberships();
    inst.cells
        .iter()
        .enumerate()
        .map(|(i, c)| c.u.iter().copied().filter(|&v| labels[v] == [i] && c.s.binary_search(&v).is_ok()).collect())
        .collect()
}

pub fn eligibility(inst: &Instance) -> Eligibility {
    let p = placements(inst);
    if let Some(i) = p.iter().position(Vec::is_empty) {
        return Eligibility::NoPlacement(i);
    }
    match p.iter().position(|x| x.len() > 2) {
        Some(i) => Eligibility::TooLarge(i),
        None => Eligibility::Eligible,
    }
}

pub fn eligible(inst: &Instance) -> bool {
    eligibility(inst) == Eligibility::Eligible
}

/// A formula together with the placement each literal stands for:
/// variable `i` true puts site `i` on `placements[i][0]`, false on
/// `placements[i][1]`.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: TwoSatFormula,
    pub placements: Vec<Vec<usize>>,
}

impl Encoding {
    pub fn decode(&self, assignment: &[bool]) -> Solution {
        Solution::new(
            self.placements.iter().zip(assignment).map(|(p, &x)| if x || p.len() == 1 { p[0] } else { p[1] }).collect(),
        )
    }
}

/// Sites `a` for `U_i` and `b` for `U_j` are compatible when every vertex
/// of `U_i ∩ U_j` is equidistant and every other vertex of `U_i ∪ U_j` is
/// strictly closer to the site of its own cell.
pub fn compatible(u_i: &[usize], da: &[Option<Weight>], u_j: &[usize], db: &[Option<Weight>]) -> bool {
    let strictly = |x: &Option<Weight>, y: &Option<Weight>| match (x, y) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    };
    u_i.iter().all(|&u| if u_j.binary_search(&u).is_ok() { da[u] == db[u] } else { strictly(&da[u], &db[u]) })
        && u_j.iter().all(|&u| u_i.binary_search(&u).is_ok() || strictly(&db[u], &da[u]))
}

/// Builds the formula: a unit clause for every cell with one placement and
/// the clause `¬ℓ_a ∨ ¬ℓ_b` for every incompatible pair of placements.
/// `None` unless the instance is eligible.
pub fn build_formula(inst: &Instance) -> Option<Encoding> {
    if !eligible(inst) {
        return None;
    }
    let placements = placements(inst);
    let k = inst.k();
    let lit = |i: usize, p: usize| if p == 0 { Literal::pos(i) } else { Literal::neg(i) };
    let dist: Vec<Vec<Vec<Option<Weight>>>> =
        placements.iter().map(|p| p.iter().map(|&s| distances_from(&inst.graph, s)).collect()).collect();
    let mut clauses = Vec::new();
    for (i, p) in placements.iter().enumerate() {
        if p.len() == 1 {
            clauses.push((Literal::pos(i), Literal::pos(i)));
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for (a, _) in placements[i].iter().enumerate() {
                for (b, _) in placements[j].iter().enumerate() {
                    if !compatible(&inst.cells[i].u, &dist[i][a], &inst.cells[j].u, &dist[j][b]) {
                        clauses.push((lit(i, a).negate(), lit(j, b).negate()));
                    }
                }
            }
        }
    }
    Some(Encoding { formula: TwoSatFormula { vars: k, clauses }, placements })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("cell {0} has more than two admissible placements")]
    NotEligible(usize),
    #[error("decoded placement failed the checker")]
    Unverified,
}

/// Decides an eligible instance. Returned sites pass the checker.
pub fn solve_via_2sat(inst: &Instance) -> Result<Option<Solution>, SatError> {
    match eligibility(inst) {
        Eligibility::NoPlacement(_) => return Ok(None),
        Eligibility::TooLarge(i) => return Err(SatError::NotEligible(i)),
        Eligibility::Eligible => {}
    }
    let enc = build_formula(inst).expect("eligible");
    let Some(assignment) = two_sat(&enc.formula) else { return Ok(None) };
    let sol = enc.decode(&assignment);
    if check_solution(inst, &sol).unwrap_or(false) {
        Ok(Some(sol))
    } else {
        Err(SatError::Unverified)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::{Cell, InstanceKind};
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exhaustive(f: &TwoSatFormula) -> bool {
        (0..1u32 << f.vars).any(|m| f.satisfied_by(&(0..f.vars).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
    }

    #[test]
    fn unit_clause() {
        let f = TwoSatFormula { vars: 1, clauses: vec![(Literal::pos(0), Literal::pos(0))] };
        assert_eq!(two_sat(&f), Some(vec![true]));
    }

    #[test]
    fn all_four_clauses_unsat() {
        let (x, y) = (Literal::pos(0), Literal::pos(1));
        let f = TwoSatFormula {
            vars: 2,
            clauses: vec![(x, y), (x.negate(), y), (x, y.negate()), (x.negate(), y.negate())],
        };
        assert_eq!(two_sat(&f), None);
    }

    #[test]
    fn random_formulas_match_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let vars = rng.random_range(1..=12);
            let m = rng.random_range(0..=3 * vars);
            let lit = |rng: &mut ChaCha8Rng| Literal { var: rng.random_range(0..vars), positive: rng.random_bool(0.5) };
            let clauses = (0..m).map(|_| (lit(&mut rng), lit(&mut rng))).collect();
            let f = TwoSatFormula { vars, clauses };
            match two_sat(&f) {
                Some(a) => assert!(f.satisfied_by(&a)),
                None => assert!(!exhaustive(&f)),
            }
        }
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, Weight::int(1))))
    }

    #[test]
    fn eligibility_cases() {
        let inst = Instance::new(path(3), (0..3).map(|v| Cell::plain(vec![v])).collect(), InstanceKind::Graph);
        assert!(eligible(&inst));
        let inst = Instance::new(path(3), vec![Cell::plain(vec![0, 1, 2])], InstanceKind::Graph);
        assert_eq!(eligibility(&inst), Eligibility::TooLarge(0));
        let inst = Instance::new(path(2), vec![Cell::plain(vec![0, 1]), Cell::plain(vec![0, 1])], InstanceKind::Graph);
        assert_eq!(eligibility(&inst), Eligibility::NoPlacement(0));
        assert_eq!(solve_via_2sat(&inst), Ok(None));
    }

    #[test]
    fn single_cell_formula() {
        let inst = Instance::new(path(2), vec![Cell::plain(vec![0, 1])], InstanceKind::Graph);
        let enc = build_formula(&inst).unwrap();
        assert!(enc.formula.clauses.is_empty());
        assert_eq!(solve_via_2sat(&inst).unwrap(), Some(Solution::new(vec![0])));
    }

    #[test]
    fn singleton_open_cell_forces_neighbours() {
        // 0-1-2-3-4 with cells {0,1}, {2}, {3,4}: the middle cell yields the
        // unit clause, and a site at 0 or 4 would tie with the site at 2.
        let inst = Instance::new(
            path(5),
            vec![Cell::plain(vec![0, 1]), Cell::plain(vec![2]), Cell::plain(vec![3, 4])],
            InstanceKind::Graph,
        );
        let enc = build_formula(&inst).unwrap();
        assert_eq!(enc.placements, vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(enc.formula.clauses.contains(&(Literal::pos(1), Literal::pos(1))));
        assert!(enc.formula.clauses.contains(&(Literal::neg(0), Literal::neg(1))));
        assert!(enc.formula.clauses.contains(&(Literal::neg(1), Literal::pos(2))));
        assert_eq!(solve_via_2sat(&inst).unwrap(), Some(Solution::new(vec![1, 2, 3])));
        let all = crate::oracle::enumerate_solutions(&inst, 1000).unwrap();
        assert_eq!(all, vec![Solution::new(vec![1, 2, 3])]);
    }

    #[test]
    fn path_of_pairs() {
        // 0-1-2-3 with cells {0,1} and {2,3}: any pair of sites at
        // symmetric positions works, e.g. 1 and 2, or 0 and 3.
        let inst = Instance::new(path(4), vec![Cell::plain(vec![0, 1]), Cell::plain(vec![2, 3])], InstanceKind::Graph);
        let sol = solve_via_2sat(&inst).unwrap().unwrap();
        assert!(check_solution(&inst, &sol).unwrap());
        let enc = build_formula(&inst).unwrap();
        // (0,2) and (1,3) are the incompatible pairs.
        assert_eq!(enc.formula.clauses.len(), 2);
    }
}
