use serde::Serialize;
use thiserror::Error;

use super::{CliquePartition, Graph, GraphError};

/// First condition a claimed clique partition fails, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum PartitionViolation {
    #[error("expected {expected} cells, found {found}")]
    CellCount { expected: usize, found: usize },
    #[error("cell {cell} has {found} vertices, expected {expected}")]
    CellSize {
        cell: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell {cell} names vertex {vertex}, which is not in the graph")]
    VertexOutOfRange { cell: usize, vertex: usize },
    #[error("vertex {vertex} lies in cells {first} and {second}")]
    Overlap {
        vertex: usize,
        first: usize,
        second: usize,
    },
    #[error("vertex {vertex} is in no cell")]
    Uncovered { vertex: usize },
    #[error("cell {cell} contains non-adjacent vertices {u} and {v}")]
    NonEdge { cell: usize, u: usize, v: usize },
}

/// Checks that `p` splits V(G) into exactly `k` cliques of size `d`.
pub fn verify_clique_partition(
    g: &Graph,
    p: &CliquePartition,
    k: usize,
    d: usize,
) -> Result<(), PartitionViolation> {
    if p.cells.len() != k {
        return Err(PartitionViolation::CellCount {
            expected: k,
            found: p.cells.len(),
        });
    }
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (c, cell) in p.cells.iter().enumerate() {
        if cell.len() != d {
            return Err(PartitionViolation::CellSize {
                cell: c,
                expected: d,
                found: cell.len(),
            });
        }
        for &v in cell {
            if v >= n {
                return Err(PartitionViolation::VertexOutOfRange { cell: c, vertex: v });
            }
            if let Some(first) = owner[v] {
                return Err(PartitionViolation::Overlap {
                    vertex: v,
                    first,
                    second: c,
                });
            }
            owner[v] = Some(c);
        }
    }
    if let Some(vertex) = owner.iter().position(Option::is_none) {
        return Err(PartitionViolation::Uncovered { vertex });
    }
    for (c, cell) in p.cells.iter().enumerate() {
        for (a, &u) in cell.iter().enumerate() {
            if let Some(&v) = cell[a + 1..].iter().find(|&&v| !g.is_adjacent(u, v)) {
                return Err(PartitionViolation::NonEdge { cell: c, u, v });
            }
        }
    }
    Ok(())
}

/// Outcome of checking a vertex bijection against two graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IsomorphismCheck {
    Preserved,
    /// `u`, `v` in the source graph whose adjacency the map does not keep.
    Broken {
        u: usize,
        v: usize,
        adjacent_in_source: bool,
    },
}

impl IsomorphismCheck {
    pub fn is_preserved(&self) -> bool {
        matches!(self, IsomorphismCheck::Preserved)
    }
}

/// Checks that `f` (source vertex ↦ target vertex) carries edges to edges
/// and non-edges to non-edges.
pub fn verify_isomorphism_map(
    source: &Graph,
    target: &Graph,
    f: &[usize],
) -> Result<IsomorphismCheck, GraphError> {
    let n = source.n();
    if target.n() != n || f.len() != n {
        return Err(GraphError::NotBijective(format!(
            "map has {} entries between graphs on {} and {} vertices",
            f.len(),
            n,
            target.n()
        )));
    }
    let mut hit = vec![false; n];
    for (v, &image) in f.iter().enumerate() {
        if image >= n {
            return Err(GraphError::NotBijective(format!(
                "vertex {v} maps outside the target ({image})"
            )));
        }
        if std::mem::replace(&mut hit[image], true) {
            return Err(GraphError::NotBijective(format!(
                "target vertex {image} is hit twice"
            )));
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let adjacent = source.is_adjacent(u, v);
            if adjacent != target.is_adjacent(f[u], f[v]) {
                return Ok(IsomorphismCheck::Broken {
                    u,
                    v,
                    adjacent_in_source: adjacent,
                });
            }
        }
    }
    Ok(IsomorphismCheck::Preserved)
}
