//! Exhaustive tiny sources for the hardness constructions, with their
//! decisions computed directly.

pub use ivd_core::generators::MisEdge;
use ivd_core::generators::MsiSource;

/// Every positive 1-in-3-SAT formula with at most 3 variables and at most
/// 2 clauses, clauses as ordered triples of distinct variables.
pub fn one_in_three_formulas() -> Vec<(usize, Vec<[usize; 3]>)> {
    let mut out = Vec::new();
    for vars in 1..=3usize {
        let mut triples = Vec::new();
        for a in 0..vars {
            for b in 0..vars {
                for c in 0..vars {
                    if a != b && b != c && a != c {
                        triples.push([a, b, c]);
                    }
                }
            }
        }
        out.push((vars, vec![]));
        for &t in &triples {
            out.push((vars, vec![t]));
            for &u in &triples {
                out.push((vars, vec![t, u]));
            }
        }
    }
    out
}

/// Some assignment makes exactly one variable of every clause true.
pub fn one_in_three_satisfiable(vars: usize, clauses: &[[usize; 3]]) -> bool {
    (0..1u32 << vars).any(|m| clauses.iter().all(|c| c.iter().filter(|&&x| m >> x & 1 == 1).count() == 1))
}

/// All sources with three colour classes of size 1 or 2, the triangle
/// pattern, and any set of edges between distinct classes.
pub fn msi_sources() -> Vec<MsiSource> {
    let mut out = Vec::new();
    for sizes in 0..8u32 {
        let part: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat_n(i, 1 + (sizes >> i & 1) as usize)).collect();
        let n = part.len();
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| part[u] != part[v]).collect();
        for mask in 0..1u32 << slots.len() {
            let edges = slots.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            out.push(MsiSource { part: part.clone(), edges, pattern: vec![(0, 1), (1, 2), (0, 2)] });
        }
    }
    out
}

/// One vertex per class with every pattern edge present between the
/// chosen vertices.
pub fn msi_has_solution(src: &MsiSource) -> bool {
    let l = src.part.iter().max().map_or(0, |&m| m + 1);
    let adj = |u: usize, v: usize| src.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
    let mut choice = vec![0usize; l];
    fn rec(i: usize, l: usize, choice: &mut Vec<usize>, src: &MsiSource, adj: &dyn Fn(usize, usize) -> bool) -> bool {
        if i == l {
            return src.pattern.iter().all(|&(a, b)| adj(choice[a], choice[b]));
        }
        for v in (0..src.part.len()).filter(|&v| src.part[v] == i) {
            choice[i] = v;
            if rec(i + 1, l, choice, src, adj) {
                return true;
            }
        }
        false
    }
    rec(0, l, &mut choice, src, &adj)
}

/// Every nonempty edge set between two parts of two vertices each.
pub fn mis_edge_sets() -> Vec<Vec<MisEdge>> {
    let slots: Vec<MisEdge> = (0..2).flat_map(|h| (0..2).map(move |h2| ((0, h), (1, h2)))).collect();
    (1..1u32 << slots.len())
        .map(|m| slots.iter().enumerate().filter(|(b, _)| m >> b & 1 == 1).map(|(_, &e)| e).collect())
        .collect()
}

/// An independent choice of one vertex per part, if any.
pub fn mis_choice(l: usize, t: usize, edges: &[MisEdge]) -> Option<Vec<usize>> {
    let total = t.pow(l as u32);
    (0..total)
        .map(|mut code| {
            (0..l)
                .map(|_| {
                    let h = code % t;
                    code /= t;
                    h
                })
                .collect::<Vec<_>>()
        })
        .find(|c| edges.iter().all(|&((i, h), (i2, h2))| !(c[i] == h && c[i2] == h2)))
}
