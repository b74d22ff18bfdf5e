//! Finite simple graphs on labelled vertices with bitset adjacency, and the
//! exact combinatorial routines the capacity certificates rely on.

mod bitset;
mod cliques;
pub mod io;
mod mis;
mod verify;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitset::BitSet;
pub use cliques::{cliques_of_size, maximal_cliques};
pub use mis::{
    independence_number, max_clique, max_independent_set, max_independent_set_with_budget,
    DEFAULT_SEARCH_BUDGET,
};
pub use verify::{
    verify_clique_partition, verify_isomorphism_map, IsomorphismCheck, PartitionViolation,
};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error(
        "graph has {n} vertices, over the exact-search budget of {budget}; \
         certify with an explicit independent set and a rank bound instead"
    )]
    BudgetExceeded { n: usize, budget: usize },
    #[error("vertex map is not a bijection: {0}")]
    NotBijective(String),
    #[error("clique size must be at least 1")]
    ZeroCliqueSize,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// A finite simple graph. Adjacency is symmetric with an empty diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<BitSet>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn new(labels: Vec<String>) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        Ok(Self {
            labels,
            adj: vec![BitSet::new(n); n],
        })
    }

    /// Edgeless graph labelled "1".."n".
    pub fn empty(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string()).collect()).expect("labels are distinct")
    }

    /// Graph with `i ~ j` wherever `adjacent(i, j)` holds for `i < j`.
    pub fn from_fn(
        labels: Vec<String>,
        mut adjacent: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(labels)?;
        let n = g.n();
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn((1..=n).map(|i| i.to_string()).collect(), |_, _| true)
            .expect("labels are distinct")
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_fn((1..=n).map(|i| i.to_string()).collect(), |i, j| {
            n > 1 && ((i + 1) % n == j || (j + 1) % n == i)
        })
        .expect("labels are distinct")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges (u, v) with u < v in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut s = BitSet::full(n);
                s.difference_with(&self.adj[v]);
                s.remove(v);
                s
            })
            .collect();
        Graph {
            labels: self.labels.clone(),
            adj,
        }
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(a, &u)| {
            set[a + 1..]
                .iter()
                .all(|&v| u != v && !self.is_adjacent(u, v))
        })
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| self.is_adjacent(u, v)))
    }

    /// First pair in `set` that is adjacent or repeated, if any.
    pub fn independence_witness(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                if u == v || self.is_adjacent(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count())
    }
}

/// Disjoint vertex sets that are expected to cover a graph with cliques.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePartition {
    pub cells: Vec<Vec<usize>>,
}

impl CliquePartition {
    pub fn new(cells: Vec<Vec<usize>>) -> Self {
        Self { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell index of every vertex, for a partition of `n` vertices.
    pub fn cell_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                if v < n {
                    owner[v] = Some(c);
                }
            }
        }
        owner
    }

    /// Relabels every vertex through `map`.
    pub fn mapped(&self, map: impl Fn(usize) -> usize) -> CliquePartition {
        CliquePartition {
            cells: self
                .cells
                .iter()
                .map(|c| {
                    let mut cell: Vec<usize> = c.iter().map(|&v| map(v)).collect();
                    cell.sort_unstable();
                    cell
                })
                .collect(),
        }
    }
}

/// Strong product G₁ ⊠ G₂ on V₁ × V₂; vertex (a, b) has index a·|V₂| + b.
pub fn strong_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.n();
    let labels = g1
        .labels
        .iter()
        .flat_map(|a| g2.labels.iter().map(move |b| format!("({a},{b})")))
        .collect();
    let close = |g: &Graph, x: usize, y: usize| x == y || g.is_adjacent(x, y);
    Graph::from_fn(labels, |i, j| {
        let (a1, a2) = (i / n2, i % n2);
        let (b1, b2) = (j / n2, j % n2);
        close(g1, a1, b1) && close(g2, a2, b2)
    })
    .expect("pair labels of distinct labels are distinct")
}

/// Subgraph induced on `vertices`, kept in the given order.
pub fn induced_subgraph(g: &Graph, vertices: &[usize]) -> Result<Graph, GraphError> {
    let n = g.n();
    if let Some(&bad) = vertices.iter().find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: bad, n });
    }
    let labels = vertices.iter().map(|&v| g.labels[v].clone()).collect();
    Graph::from_fn(labels, |i, j| g.is_adjacent(vertices[i], vertices[j]))
}

/// Kneser graph KG(n, 2): 2-subsets of {1..n}, adjacent when disjoint.
/// Vertices are the pairs {i, j}, i < j, in lexicographic order.
pub fn kneser_graph_pairs(n: usize) -> Graph {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let labels = pairs.iter().map(|(i, j)| format!("{{{i},{j}}}")).collect();
    Graph::from_fn(labels, |a, b| {
        let (p, q) = (pairs[a], pairs[b]);
        p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
    })
    .expect("pair labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(
            Graph::new(vec!["a".into(), "a".into()]),
            Err(GraphError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn k1_is_strong_product_identity() {
        let g = Graph::cycle(5);
        let p = strong_product(&Graph::complete(1), &g);
        assert_eq!(p.n(), 5);
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(p.is_adjacent(u, v), g.is_adjacent(u, v));
            }
        }
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = Graph::cycle(5);
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(induced_subgraph(&g, &all).unwrap(), g);
        let one = induced_subgraph(&g, &[3]).unwrap();
        assert_eq!((one.n(), one.edge_count()), (1, 0));
        assert!(matches!(
            induced_subgraph(&g, &[7]),
            Err(GraphError::VertexOutOfRange { vertex: 7, n: 5 })
        ));
    }

    #[test]
    fn complement_of_cycle() {
        let c = Graph::cycle(5).complement();
        assert_eq!(c.edge_count(), 5);
        assert!(c.is_adjacent(0, 2));
        assert!(!c.is_adjacent(0, 1));
    }

    #[test]
    fn kneser_pairs_small() {
        let k = kneser_graph_pairs(4);
        assert_eq!(k.n(), 6);
        assert_eq!(k.edge_count(), 3);
        let k5 = kneser_graph_pairs(5);
        // Petersen graph
        assert_eq!((k5.n(), k5.edge_count()), (10, 15));
        assert!((0..10).all(|v| k5.degree(v) == 3));
    }

    #[test]
    fn add_edge_errors() {
        let mut g = Graph::empty(3);
        assert!(matches!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1))));
        assert!(matches!(
            g.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        g.add_edge(0, 2).unwrap();
        assert!(g.is_adjacent(2, 0));
    }
}
