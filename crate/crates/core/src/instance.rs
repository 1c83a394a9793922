//! Problem instances, solutions, structural validation and the JSON formats.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::weight::{Rational, Weight};

/// One candidate Voronoi cell `U_i` together with its allowed sites `S_i`.
/// Both lists are kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub u: Vec<usize>,
    pub s: Vec<usize>,
}

impl Cell {
    pub fn new(mut u: Vec<usize>, mut s: Vec<usize>) -> Self {
        u.sort_unstable();
        u.dedup();
        s.sort_unstable();
        s.dedup();
        Cell { u, s }
    }

    /// Plain (non-generalized) cell: `S_i = U_i`.
    pub fn plain(u: Vec<usize>) -> Self {
        let c = Cell::new(u, Vec::new());
        Cell { s: c.u.clone(), u: c.u }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Tree,
    Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub cells: Vec<Cell>,
    pub kind: InstanceKind,
}

impl Instance {
    pub fn new(graph: Graph, cells: Vec<Cell>, kind: InstanceKind) -> Self {
        Instance { graph, cells, kind }
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn k(&self) -> usize {
        self.cells.len()
    }

    /// `N = n + Σ|U_i|`, the input size.
    pub fn size(&self) -> usize {
        self.n() + self.cells.iter().map(|c| c.u.len()).sum::<usize>()
    }

    /// Per-vertex sorted list of cells containing the vertex.
    pub fn memberships(&self) -> Vec<Vec<usize>> {
        let mut l = vec![Vec::new(); self.n()];
        for (i, c) in self.cells.iter().enumerate() {
            for &v in &c.u {
                l[v].push(i);
            }
        }
        l
    }
}

/// One site per cell, in cell order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub sites: Vec<usize>,
}

impl Solution {
    pub fn new(sites: Vec<usize>) -> Self {
        Solution { sites }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoCells,
    CoverViolation(usize),
    VertexOutOfRange { cell: usize, vertex: usize },
    NonPositiveWeight { u: usize, v: usize },
    NotATree,
    Disconnected,
}

/// Structural checks. An empty result means the cells cover `V`, every
/// listed vertex exists, and the graph is connected (a tree for tree kind).
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let n = inst.n();
    let mut out = Vec::new();
    if inst.cells.is_empty() {
        out.push(Violation::NoCells);
    }
    let mut covered = vec![false; n];
    for (i, c) in inst.cells.iter().enumerate() {
        for &v in c.u.iter().chain(&c.s) {
            if v >= n {
                out.push(Violation::VertexOutOfRange { cell: i, vertex: v });
            }
        }
        for &v in &c.u {
            if v < n {
                covered[v] = true;
            }
        }
    }
    out.extend((0..n).filter(|&v| !covered[v]).map(Violation::CoverViolation));
    for (u, v, w) in inst.graph.edges() {
        if !w.is_positive() {
            out.push(Violation::NonPositiveWeight { u, v });
        }
    }
    match inst.kind {
        InstanceKind::Tree if !inst.graph.is_tree() => out.push(Violation::NotATree),
        InstanceKind::Graph if !inst.graph.is_connected() => out.push(Violation::Disconnected),
        _ => {}
    }
    out
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("edge ({0},{1}) has non-positive length")]
    NonPositiveLength(usize, usize),
    #[error("malformed length {0:?}")]
    BadLength(String),
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("instance has no cells")]
    NoCells,
}

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("edge ({0},{1}) has a symbolic length and cannot be written")]
    SymbolicWeight(usize, usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawLen {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct RawCell {
    #[serde(rename = "U")]
    u: Vec<usize>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    s: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    version: u32,
    vertices: usize,
    edges: Vec<(usize, usize, RawLen)>,
    cells: Vec<RawCell>,
    #[serde(default = "default_kind")]
    kind: InstanceKind,
}

fn default_kind() -> InstanceKind {
    InstanceKind::Graph
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    if raw.version != 1 {
        return Err(ParseError::Version(raw.version));
    }
    let n = raw.vertices;
    let check = |v: usize| if v < n { Ok(v) } else { Err(ParseError::VertexOutOfRange(v)) };
    let mut g = Graph::new(n);
    let mut seen = std::collections::HashSet::new();
    for (u, v, len) in raw.edges {
        check(u)?;
        check(v)?;
        if u == v {
            return Err(ParseError::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::DuplicateEdge(u, v));
        }
        let r = match len {
            RawLen::Int(x) => Rational::Int(x),
            RawLen::Text(s) => s.parse().map_err(|_| ParseError::BadLength(s))?,
        };
        if !r.is_positive() {
            return Err(ParseError::NonPositiveLength(u, v));
        }
        g.add_edge(u, v, Weight::real(r));
    }
    if raw.cells.is_empty() {
        return Err(ParseError::NoCells);
    }
    let mut cells = Vec::with_capacity(raw.cells.len());
    for c in raw.cells {
        for &v in c.u.iter().chain(c.s.iter().flatten()) {
            check(v)?;
        }
        cells.push(match c.s {
            Some(s) => Cell::new(c.u, s),
            None => Cell::plain(c.u),
        });
    }
    Ok(Instance::new(g, cells, raw.kind))
}

pub fn serialize_instance(inst: &Instance) -> Result<String, SerializeError> {
    let mut edges = Vec::with_capacity(inst.graph.edge_count());
    for (u, v, w) in inst.graph.edges() {
        if !w.is_real() {
            return Err(SerializeError::SymbolicWeight(u, v));
        }
        let len = match &w.a {
            Rational::Int(x) => RawLen::Int(*x),
            r => RawLen::Text(r.to_string()),
        };
        edges.push((u, v, len));
    }
    let cells = inst.cells.iter().map(|c| RawCell { u: c.u.clone(), s: (c.s != c.u).then(|| c.s.clone()) }).collect();
    let raw = RawInstance { version: 1, vertices: inst.n(), edges, cells, kind: inst.kind };
    Ok(serde_json::to_string(&raw).expect("instance serialization cannot fail"))
}

/// `{"sites":[…]}`.
pub fn serialize_solution(sol: &Solution) -> String {
    serde_json::to_string(sol).expect("solution serialization cannot fail")
}

pub fn parse_solution(text: &str) -> Result<Solution, serde_json::Error> {
    serde_json::from_str(text)
}

/// The NO answer written by the CLI.
pub const NO_ANSWER_JSON: &str = r#"{"answer":"no"}"#;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PATH3: &str = r#"{"version":1,"vertices":3,"edges":[[0,1,1],[1,2,"3/2"]],
        "cells":[{"U":[0,1]},{"U":[2],"S":[2]}],"kind":"tree"}"#;

    #[test]
    fn parses_path_with_defaults() {
        let inst = parse_instance(PATH3).unwrap();
        assert_eq!(inst.k(), 2);
        assert_eq!(inst.cells[0].s, vec![0, 1]);
        assert_eq!(inst.graph.weight(1, 2), Some(&Weight::real(Rational::new(3, 2))));
        assert_eq!(inst.kind, InstanceKind::Tree);
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let zero = PATH3.replace("[0,1,1]", "[0,1,0]");
        assert!(matches!(parse_instance(&zero), Err(ParseError::NonPositiveLength(0, 1))));
        let zero_str = PATH3.replace("[0,1,1]", r#"[0,1,"0/5"]"#);
        assert!(matches!(parse_instance(&zero_str), Err(ParseError::NonPositiveLength(0, 1))));
        let oob = PATH3.replace("[0,1,1]", "[0,7,1]");
        assert!(matches!(parse_instance(&oob), Err(ParseError::VertexOutOfRange(7))));
        let dup = PATH3.replace("[0,1,1]", "[0,1,1],[1,0,2]");
        assert!(matches!(parse_instance(&dup), Err(ParseError::DuplicateEdge(1, 0))));
        assert!(matches!(parse_instance("{"), Err(ParseError::Json(_))));
    }

    #[test]
    fn validation_reports_cover_and_cycles() {
        let mut inst = parse_instance(PATH3).unwrap();
        inst.cells[1] = Cell::plain(vec![1]);
        assert_eq!(validate_instance(&inst), vec![Violation::CoverViolation(2)]);
        let mut inst = parse_instance(PATH3).unwrap();
        inst.graph.add_edge(0, 2, Weight::int(1));
        assert_eq!(validate_instance(&inst), vec![Violation::NotATree]);
        inst.kind = InstanceKind::Graph;
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn solution_format() {
        assert_eq!(serialize_solution(&Solution::new(vec![1, 2])), r#"{"sites":[1,2]}"#);
        assert_eq!(serialize_solution(&Solution::new(vec![0])), r#"{"sites":[0]}"#);
    }

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(PATH3).unwrap();
        let text = serialize_instance(&inst).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    proptest! {
        #[test]
        fn solution_round_trip(sites in proptest::collection::vec(0usize..1000, 1..20)) {
            let s = Solution::new(sites);
            prop_assert_eq!(parse_solution(&serialize_solution(&s)).unwrap(), s);
        }

        #[test]
        fn random_tree_round_trip(n in 1usize..30, seed in any::<u64>()) {
            let mut x = seed;
            let mut next = || { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (x >> 33) as usize };
            let g = Graph::from_edges(n, (1..n).map(|v| {
                let p = next() % v;
                let num = 1 + (next() % 7) as i64;
                let den = 1 + (next() % 3) as i64;
                (p, v, Weight::real(Rational::new(num, den)))
            }));
            let cells = vec![Cell::plain((0..n).collect()), Cell::new(vec![0], vec![0])];
            let inst = Instance::new(g, cells, InstanceKind::Tree);
            let text = serialize_instance(&inst).unwrap();
            prop_assert_eq!(parse_instance(&text).unwrap(), inst);
        }
    }
}
