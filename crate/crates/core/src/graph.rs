//! Undirected weighted graphs and rooted trees.

use crate::weight::Weight;

/// Simple undirected graph with dense vertex ids `0..n`.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<(usize, Weight)>>,
    edge_count: usize,
}

/// Equality ignores the order of adjacency lists.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edge_count != other.edge_count {
            return false;
        }
        self.adj.iter().zip(&other.adj).all(|(a, b)| {
            let mut a = a.clone();
            let mut b = b.clone();
            a.sort();
            b.sort();
            a == b
        })
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph from an edge list without any validation.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Weight)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w);
        }
        g
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Weight) {
        self.adj[u].push((v, w.clone()));
        self.adj[v].push((u, w));
        self.edge_count += 1;
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Weight> {
        self.adj[u].iter().find(|(x, _)| *x == v).map(|(_, w)| w)
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Weight)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |(v, _)| u < *v).map(move |(v, w)| (u, *v, w)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 1 && self.edge_count + 1 == self.vertex_count() && self.is_connected()
    }

    /// Replaces the edge `uv` by `u–w–v`, returning the new vertex `w`.
    /// The edge `uw` gets `wu_weight` and `wv` gets `wv_weight`.
    pub fn subdivide(&mut self, u: usize, v: usize, wu_weight: Weight, wv_weight: Weight) -> usize {
        let w = self.add_vertex();
        for (x, wt) in self.adj[u].iter_mut() {
            if *x == v {
                *x = w;
                *wt = wu_weight.clone();
                break;
            }
        }
        for (x, wt) in self.adj[v].iter_mut() {
            if *x == u {
                *x = w;
                *wt = wv_weight.clone();
                break;
            }
        }
        self.adj[w].push((u, wu_weight));
        self.adj[w].push((v, wv_weight));
        self.edge_count += 1;
        w
    }
}

/// A tree with a chosen root, parent pointers and a preorder.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Weight of the edge to the parent (zero at the root).
    pub parent_weight: Vec<Weight>,
    /// Vertices in preorder; every parent precedes its children.
    pub order: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl RootedTree {
    /// Roots `g` at `root`. Returns `None` if `g` is not a tree.
    pub fn new(g: &Graph, root: usize) -> Option<Self> {
        if !g.is_tree() || root >= g.vertex_count() {
            return None;
        }
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut parent_weight = vec![Weight::zero(); n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for (v, w) in g.neighbors(u).iter().rev() {
                if !seen[*v] {
                    seen[*v] = true;
                    parent[*v] = Some(u);
                    parent_weight[*v] = w.clone();
                    children[u].push(*v);
                    stack.push(*v);
                }
            }
        }
        for c in children.iter_mut() {
            c.reverse();
        }
        Some(RootedTree { root, parent, parent_weight, order, children })
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Subtree sizes `n(v)`.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.vertex_count()];
        for &v in self.order.iter().rev() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// True iff `set` (given as a membership mask) induces a connected subtree:
    /// exactly one member has its parent outside the set.
    pub fn induces_connected(&self, members: &[usize], in_set: &[bool]) -> bool {
        let tops = members.iter().filter(|&&v| self.parent[v].is_none_or(|p| !in_set[p])).count();
        tops == 1
    }
}
