//! Entanglement-assisted zero-error codes of block length one: premise
//! checks, exhaustive decoding simulation, and the Kochen–Specker
//! assignment search.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::channels::{confusability_graph, Channel};
use crate::graphs::{verify_clique_partition, BitSet, CliquePartition, Graph, PartitionViolation};
use crate::root_lattice::{e8_coordinates, e8_frame_partition, orthonormal_representation, LatticeError};
use crate::root_systems::{e8_symplectic_model, RootSystemError};
use crate::symplectic::{build_sp_graph, spread_partition, SymplecticError};

const STATE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("channel has {channel} inputs but the code graph has {graph} vertices")]
    InputMismatch { channel: usize, graph: usize },
    #[error("inputs {u} and {v} are confusable but not adjacent in the code graph")]
    NotSubgraph { u: usize, v: usize },
    #[error("code premises fail: {0}")]
    InvalidCode(CodeViolation),
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("field point {0:#x} has no E₈ ray")]
    MissingRay(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Integer vectors with an inner product given by a Gram matrix (the
/// standard dot product when none is given).
#[derive(Clone, Debug, Serialize)]
pub struct Representation {
    pub vectors: Vec<Vec<i64>>,
    pub gram: Option<Vec<Vec<i64>>>,
}

impl Representation {
    pub fn new(vectors: Vec<Vec<i64>>, gram: Option<Vec<Vec<i64>>>) -> Self {
        Self { vectors, gram }
    }

    pub fn dim(&self) -> usize {
        self.gram
            .as_ref()
            .map_or_else(|| self.vectors.first().map_or(0, Vec::len), Vec::len)
    }

    pub fn inner(&self, u: usize, v: usize) -> i64 {
        let (a, b) = (&self.vectors[u], &self.vectors[v]);
        match &self.gram {
            None => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Some(g) => {
                let mut s = 0;
                for (i, &x) in a.iter().enumerate() {
                    if x != 0 {
                        s += x * g[i].iter().zip(b).map(|(gij, y)| gij * y).sum::<i64>();
                    }
                }
                s
            }
        }
    }

    /// Unit vectors in Rᵈ with the same inner products up to scale.
    pub fn real_vectors(&self) -> Result<Vec<Vec<f64>>, ProtocolError> {
        let d = self.dim();
        let lt = match &self.gram {
            None => DMatrix::identity(d, d),
            Some(g) => DMatrix::from_fn(d, d, |i, j| g[i][j] as f64)
                .cholesky()
                .ok_or(ProtocolError::NotPositiveDefinite)?
                .l()
                .transpose(),
        };
        Ok(self
            .vectors
            .iter()
            .map(|v| {
                let x = &lt * DVector::from_iterator(d, v.iter().map(|&t| t as f64));
                let n = x.norm();
                x.iter().map(|t| t / n).collect()
            })
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct ZeroErrorCode {
    pub graph: Graph,
    pub partition: CliquePartition,
    pub rep: Representation,
    pub dim: usize,
}

impl ZeroErrorCode {
    pub fn k(&self) -> usize {
        self.partition.len()
    }

    pub fn rate_bits(&self) -> f64 {
        (self.k() as f64).log2()
    }
}

/// Sp(6, F₂) with its 9-cell spread and the E₇ representation in lattice
/// coordinates.
pub fn sp6_code() -> Result<ZeroErrorCode, ProtocolError> {
    let sp = build_sp_graph(3)?;
    let spread = spread_partition(3)?;
    let rep = orthonormal_representation()?;
    Ok(ZeroErrorCode {
        graph: sp.into_graph(),
        partition: spread.cells,
        rep: Representation::new(
            rep.rays.iter().map(|r| r.coords.clone()).collect(),
            Some(rep.lattice.gram.clone()),
        ),
        dim: 7,
    })
}

/// The non-isotropic part of Sp(8, F₂) with its 15 restricted spread cells,
/// each vertex represented by its E₈ ray in Euclidean coordinates.
pub fn e8_code() -> Result<ZeroErrorCode, ProtocolError> {
    let model = e8_symplectic_model()?;
    let frames = e8_frame_partition()?;
    let by_point: std::collections::HashMap<u32, usize> = frames
        .field_points
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let vectors = model
        .field_points
        .iter()
        .map(|p| {
            by_point
                .get(p)
                .map(|&r| e8_coordinates(&frames.rays[r]))
                .ok_or(ProtocolError::MissingRay(*p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ZeroErrorCode {
        graph: model.graph,
        partition: model.partition,
        rep: Representation::new(vectors, None),
        dim: 8,
    })
}

/// The first premise a code fails, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum CodeViolation {
    #[error("partition: {0}")]
    Partition(PartitionViolation),
    #[error("representation has {found} vectors for {expected} vertices")]
    VectorCount { expected: usize, found: usize },
    #[error("vector {vertex} has length {found}, expected {expected}")]
    Dimension {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} is represented by a null vector")]
    NullVector(usize),
    #[error("edge {u}–{v} has inner product {inner}")]
    NonOrthogonalEdge { u: usize, v: usize, inner: i64 },
}

/// Checks the premises: k cliques of size d, vectors in dimension d, and
/// orthogonality on every edge (so every cell is a complete frame).
pub fn verify_code(code: &ZeroErrorCode) -> Result<(), CodeViolation> {
    let n = code.graph.n();
    let k = code.partition.len();
    verify_clique_partition(&code.graph, &code.partition, k, code.dim)
        .map_err(CodeViolation::Partition)?;
    if code.rep.vectors.len() != n {
        return Err(CodeViolation::VectorCount {
            expected: n,
            found: code.rep.vectors.len(),
        });
    }
    for (vertex, v) in code.rep.vectors.iter().enumerate() {
        if v.len() != code.dim || code.rep.dim() != code.dim {
            return Err(CodeViolation::Dimension {
                vertex,
                expected: code.dim,
                found: v.len(),
            });
        }
        if code.rep.inner(vertex, vertex) <= 0 {
            return Err(CodeViolation::NullVector(vertex));
        }
    }
    for (u, v) in code.graph.edges() {
        let inner = code.rep.inner(u, v);
        if inner != 0 {
            return Err(CodeViolation::NonOrthogonalEdge { u, v, inner });
        }
    }
    Ok(())
}

/// A branch whose output does not let Bob recover the message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchFailure {
    pub message: usize,
    pub outcome: usize,
    pub output: usize,
    /// A candidate input Bob cannot rule out.
    pub confused_with: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub k: usize,
    pub d: usize,
    pub branches_checked: usize,
    pub failures: Vec<BranchFailure>,
    pub rate_bits: f64,
    /// Probability of each outcome of Alice's measurement.
    pub outcome_probability: String,
}

impl SimulationReport {
    pub fn zero_error(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every (message, Alice outcome, channel output) branch.
///
/// Alice measures her half of a maximally entangled state in the frame of
/// her message's cell and sends the outcome v. Bob sees y and knows the
/// candidate set S_y = {x : N(y|x) > 0}; he measures in a basis extending
/// the representation vectors of S_y. This identifies v exactly when those
/// vectors are pairwise orthogonal, and v determines the message.
pub fn simulate_zero_error(
    channel: &Channel,
    code: &ZeroErrorCode,
) -> Result<SimulationReport, ProtocolError> {
    let n = code.graph.n();
    if channel.input_count() != n {
        return Err(ProtocolError::InputMismatch {
            channel: channel.input_count(),
            graph: n,
        });
    }
    let confusable = confusability_graph(channel);
    if let Some((u, v)) = confusable.edges().find(|&(u, v)| !code.graph.is_adjacent(u, v)) {
        return Err(ProtocolError::NotSubgraph { u, v });
    }
    verify_code(code).map_err(ProtocolError::InvalidCode)?;

    let owner = code.partition.cell_of(n);
    // For each output: the first candidate not orthogonal to another.
    let ambiguity: Vec<Option<(usize, usize)>> = (0..channel.output_count())
        .map(|y| {
            let s = channel.preimage(y);
            s.iter().enumerate().find_map(|(a, &x)| {
                s[a + 1..]
                    .iter()
                    .find(|&&z| {
                        !confusable.is_adjacent(x, z) || code.rep.inner(x, z) != 0
                    })
                    .map(|&z| (x, z))
            })
        })
        .collect();

    let mut branches = 0;
    let mut failures = Vec::new();
    for (message, cell) in code.partition.cells.iter().enumerate() {
        for &v in cell {
            for y in channel.support(v) {
                branches += 1;
                // Bob's outcome is the unique candidate whose vector is not
                // orthogonal to rep(v); it decodes to that candidate's cell.
                let decoded = channel
                    .preimage(y)
                    .into_iter()
                    .filter(|&x| code.rep.inner(x, v) != 0)
                    .collect::<Vec<_>>();
                let wrong = match (ambiguity[y], decoded.as_slice()) {
                    (None, [x]) if owner[*x] == Some(message) => None,
                    (Some((a, b)), _) => Some(if a == v { b } else { a }),
                    (None, xs) => Some(xs.iter().copied().find(|&x| x != v).unwrap_or(v)),
                };
                if let Some(confused_with) = wrong {
                    failures.push(BranchFailure {
                        message,
                        outcome: v,
                        output: y,
                        confused_with,
                    });
                }
            }
        }
    }
    Ok(SimulationReport {
        k: code.k(),
        d: code.dim,
        branches_checked: branches,
        failures,
        rate_bits: code.rate_bits(),
        outcome_probability: format!("1/{}", code.dim),
    })
}

/// Floating-point run of the protocol on an explicit maximally entangled
/// state. For demonstration only; the exact check is
/// [`simulate_zero_error`].
#[derive(Clone, Debug, Serialize)]
pub struct StateSimulation {
    /// Largest |P(outcome) − 1/d| over all messages and outcomes.
    pub max_probability_error: f64,
    /// Largest |⟨ψ_x, ψ_z⟩| between Bob's residual states for distinct
    /// candidates of one output.
    pub max_residual_overlap: f64,
    pub within_tolerance: bool,
}

pub fn simulate_states(
    channel: &Channel,
    code: &ZeroErrorCode,
) -> Result<StateSimulation, ProtocolError> {
    let d = code.dim;
    let real = code.rep.real_vectors()?;
    let phi = DVector::from_fn(d * d, |idx, _| {
        if idx / d == idx % d {
            1.0 / (d as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut residual: Vec<DVector<f64>> = vec![DVector::zeros(d); real.len()];
    let mut max_probability_error: f64 = 0.0;
    for cell in &code.partition.cells {
        for &v in cell {
            let u = DVector::from_column_slice(&real[v]);
            // (|u⟩⟨u| ⊗ I) |Φ⟩
            let mut post = DVector::zeros(d * d);
            for i in 0..d {
                for j in 0..d {
                    let amp: f64 = (0..d).map(|k| u[i] * u[k] * phi[k * d + j]).sum();
                    post[i * d + j] = amp;
                }
            }
            let p = post.norm_squared();
            max_probability_error = max_probability_error.max((p - 1.0 / d as f64).abs());
            // Bob's state: contract Alice's factor with u and renormalize.
            let bob = DVector::from_fn(d, |j, _| (0..d).map(|i| u[i] * post[i * d + j]).sum::<f64>());
            residual[v] = &bob / bob.norm();
        }
    }
    let mut max_residual_overlap: f64 = 0.0;
    for y in 0..channel.output_count() {
        let s = channel.preimage(y);
        for (a, &x) in s.iter().enumerate() {
            for &z in &s[a + 1..] {
                max_residual_overlap = max_residual_overlap.max(residual[x].dot(&residual[z]).abs());
            }
        }
    }
    Ok(StateSimulation {
        max_probability_error,
        max_residual_overlap,
        within_tolerance: max_probability_error < STATE_TOL && max_residual_overlap < STATE_TOL,
    })
}

/// Largest number of cells that admit one vertex each with the chosen
/// vertices pairwise non-adjacent.
#[derive(Clone, Debug, Serialize)]
pub struct KsReport {
    pub cells_total: usize,
    pub cells_satisfiable: usize,
    /// The vertex chosen in each cell, if any.
    pub witness_assignment: Vec<Option<usize>>,
}

/// Exhaustive branch and bound over cells, largest first.
pub fn ks_search(g: &Graph, partition: &CliquePartition) -> KsReport {
    let mut order: Vec<usize> = (0..partition.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(partition.cells[c].len()));
    let cells: Vec<BitSet> = order
        .iter()
        .map(|&c| BitSet::from_indices(g.n(), partition.cells[c].iter().copied()))
        .collect();
    let mut search = KsSearch {
        g,
        cells: &cells,
        best: 0,
        best_pick: vec![None; cells.len()],
        pick: vec![None; cells.len()],
    };
    search.run(0, BitSet::full(g.n()), 0);
    let mut witness_assignment = vec![None; partition.len()];
    for (pos, &c) in order.iter().enumerate() {
        witness_assignment[c] = search.best_pick[pos];
    }
    KsReport {
        cells_total: partition.len(),
        cells_satisfiable: search.best,
        witness_assignment,
    }
}

struct KsSearch<'a> {
    g: &'a Graph,
    cells: &'a [BitSet],
    best: usize,
    best_pick: Vec<Option<usize>>,
    pick: Vec<Option<usize>>,
}

impl KsSearch<'_> {
    /// `allowed`: vertices non-adjacent to every pick so far.
    fn run(&mut self, idx: usize, allowed: BitSet, count: usize) {
        if count > self.best {
            self.best = count;
            self.best_pick = self.pick.clone();
        }
        if idx == self.cells.len() {
            return;
        }
        let open = self.cells[idx..]
            .iter()
            .filter(|c| c.intersection_count(&allowed) > 0)
            .count();
        if count + open <= self.best {
            return;
        }
        let options = self.cells[idx].intersection(&allowed);
        for v in options.iter() {
            let mut next = allowed.clone();
            next.difference_with(self.g.neighbors(v));
            next.remove(v);
            self.pick[idx] = Some(v);
            self.run(idx + 1, next, count + 1);
            self.pick[idx] = None;
        }
        self.run(idx + 1, allowed, count);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::channel_from_cliques;

    /// k disjoint d-cliques with the standard basis as each frame.
    fn disjoint_code(k: usize, d: usize) -> ZeroErrorCode {
        let n = k * d;
        let graph = Graph::from_fn((1..=n).map(|i| i.to_string()).collect(), |a, b| a / d == b / d).unwrap();
        let partition = CliquePartition::new((0..k).map(|c| (c * d..(c + 1) * d).collect()).collect());
        let vectors = (0..n)
            .map(|v| (0..d).map(|i| i64::from(i == v % d)).collect())
            .collect();
        ZeroErrorCode {
            graph,
            partition,
            rep: Representation::new(vectors, None),
            dim: d,
        }
    }

    #[test]
    fn disjoint_cliques_decode_without_error() {
        let code = disjoint_code(4, 3);
        assert_eq!(verify_code(&code), Ok(()));
        let ch = channel_from_cliques(&code.graph, 3).unwrap().channel;
        let report = simulate_zero_error(&ch, &code).unwrap();
        assert!(report.zero_error());
        assert_eq!(report.branches_checked, 12);
        assert!((report.rate_bits - 2.0).abs() < 1e-12);
        let states = simulate_states(&ch, &code).unwrap();
        assert!(states.within_tolerance, "{states:?}");
    }

    #[test]
    fn non_orthogonal_edge_is_reported() {
        let mut code = disjoint_code(2, 2);
        code.rep.vectors[1] = vec![1, 1];
        assert_eq!(
            verify_code(&code),
            Err(CodeViolation::NonOrthogonalEdge { u: 0, v: 1, inner: 1 })
        );
        code.rep.vectors[1] = vec![0, 0];
        assert!(matches!(verify_code(&code), Err(CodeViolation::NullVector(1)) | Err(CodeViolation::NonOrthogonalEdge { .. })));
        let mut short = disjoint_code(2, 2);
        short.rep.vectors[3] = vec![1];
        assert!(matches!(verify_code(&short), Err(CodeViolation::Dimension { vertex: 3, .. })));
    }

    #[test]
    fn channel_outside_graph_is_rejected() {
        let code = disjoint_code(2, 2);
        let all = Channel::new(
            code.graph.labels().to_vec(),
            vec!["y".into()],
            vec![vec![1.into()]; 4],
        )
        .unwrap();
        assert!(matches!(
            simulate_zero_error(&all, &code),
            Err(ProtocolError::NotSubgraph { .. })
        ));
    }

    #[test]
    fn gram_inner_products() {
        let rep = Representation::new(vec![vec![1, 0], vec![0, 1]], Some(vec![vec![2, -1], vec![-1, 2]]));
        assert_eq!(rep.inner(0, 1), -1);
        assert_eq!(rep.inner(1, 1), 2);
        let real = rep.real_vectors().unwrap();
        let dot: f64 = real[0].iter().zip(&real[1]).map(|(a, b)| a * b).sum();
        assert!((dot + 0.5).abs() < 1e-12);
    }

    #[test]
    fn sp6_and_e8_codes_are_valid() {
        let sp6 = sp6_code().unwrap();
        assert_eq!(verify_code(&sp6), Ok(()));
        assert_eq!(sp6.k(), 9);
        let e8 = e8_code().unwrap();
        assert_eq!(verify_code(&e8), Ok(()));
        assert_eq!(e8.k(), 15);
        // every non-edge is non-orthogonal too, so the representation is exact
        for u in 0..120 {
            for v in u + 1..120 {
                assert_eq!(e8.graph.is_adjacent(u, v), e8.rep.inner(u, v) == 0);
            }
        }
    }

    #[test]
    fn sp6_ks_obstruction() {
        let code = sp6_code().unwrap();
        let r = ks_search(&code.graph, &code.partition);
        assert_eq!((r.cells_total, r.cells_satisfiable), (9, 7));
        let picks: Vec<usize> = r.witness_assignment.iter().flatten().copied().collect();
        assert_eq!(picks.len(), 7);
        assert!(code.graph.is_independent(&picks));
    }

    #[test]
    fn ks_small_cases() {
        let single = Graph::complete(4);
        let p = CliquePartition::new(vec![vec![0, 1, 2, 3]]);
        assert_eq!(ks_search(&single, &p).cells_satisfiable, 1);

        // three disjoint edges: one vertex per cell, no constraints across
        let g2 = Graph::from_fn((1..=6).map(|i| i.to_string()).collect(), |a, b| a / 2 == b / 2).unwrap();
        let p = CliquePartition::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        let r = ks_search(&g2, &p);
        assert_eq!(r.cells_satisfiable, 3);
        let picks: Vec<usize> = r.witness_assignment.iter().flatten().copied().collect();
        assert!(g2.is_independent(&picks));
    }
}
