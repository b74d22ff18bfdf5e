//! Discrete memoryless channels with exact rational transition
//! probabilities.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{cliques_of_size, Graph, GraphError};

pub type Prob = Ratio<i64>;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: Prob },
    #[error("negative probability at ({row}, {col})")]
    Negative { row: usize, col: usize },
    #[error("cannot parse probability {0:?}")]
    BadProbability(String),
    #[error("no cliques of size {0}")]
    NoCliques(usize),
    #[error("vertex {0} lies in no clique of the requested size")]
    UncoveredVertex(usize),
    #[error("vertices lie in different numbers of cliques ({min}..{max}); the clique incidence is not regular")]
    Irregular { min: usize, max: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("no convergence after {iterations} iterations: capacity in [{lower}, {upper}]")]
    MaxIter {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// N(y|x) as an |X|×|Y| row-stochastic matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    probs: Vec<Vec<Prob>>,
}

impl Channel {
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        probs: Vec<Vec<Prob>>,
    ) -> Result<Self, ChannelError> {
        if probs.len() != inputs.len() {
            return Err(ChannelError::Shape {
                row: probs.len(),
                expected: inputs.len(),
                found: probs.len(),
            });
        }
        for (row, p) in probs.iter().enumerate() {
            if p.len() != outputs.len() {
                return Err(ChannelError::Shape {
                    row,
                    expected: outputs.len(),
                    found: p.len(),
                });
            }
            if let Some(col) = p.iter().position(|x| *x < Prob::zero()) {
                return Err(ChannelError::Negative { row, col });
            }
            let sum: Prob = p.iter().sum();
            if !sum.is_one() {
                return Err(ChannelError::NotStochastic { row, sum });
            }
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
        })
    }

    /// The noiseless channel on `n` symbols.
    pub fn identity(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let probs = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Prob::one() } else { Prob::zero() }).collect())
            .collect();
        Self::new(labels.clone(), labels, probs).expect("identity is stochastic")
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn probs(&self) -> &[Vec<Prob>] {
        &self.probs
    }

    pub fn prob(&self, x: usize, y: usize) -> Prob {
        self.probs[x][y]
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Outputs reachable from `x`.
    pub fn support(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.probs[x]
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(y, _)| y)
    }

    /// Inputs that can produce `y`.
    pub fn preimage(&self, y: usize) -> Vec<usize> {
        (0..self.inputs.len())
            .filter(|&x| !self.probs[x][y].is_zero())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.probs
            .iter()
            .map(|r| r.iter().map(|p| p.to_f64().expect("finite ratio")).collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let doc = ChannelJson {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            probs: self
                .probs
                .iter()
                .map(|r| r.iter().map(|p| format!("{}/{}", p.numer(), p.denom())).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("channel serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ChannelError> {
        let doc: ChannelJson = serde_json::from_str(text)?;
        let probs = doc
            .probs
            .iter()
            .map(|r| r.iter().map(|s| parse_prob(s)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::new(doc.inputs, doc.outputs, probs)
    }

    /// Probability matrix as CSV: a header of output labels, then one row
    /// per input with exact `a/b` entries.
    pub fn to_csv(&self) -> Result<String, ChannelError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["input".to_string()];
        header.extend(self.outputs.iter().cloned());
        w.write_record(&header)?;
        for (x, row) in self.probs.iter().enumerate() {
            let mut rec = vec![self.inputs[x].clone()];
            rec.extend(row.iter().map(|p| p.to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ChannelError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    inputs: Vec<String>,
    outputs: Vec<String>,
    probs: Vec<Vec<String>>,
}

fn parse_prob(s: &str) -> Result<Prob, ChannelError> {
    let bad = || ChannelError::BadProbability(s.to_string());
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Prob::new(n, d))
}

/// x₁ ~ x₂ iff some output has positive probability under both.
pub fn confusability_graph(n: &Channel) -> Graph {
    let supports: Vec<Vec<usize>> = (0..n.input_count()).map(|x| n.support(x).collect()).collect();
    Graph::from_fn(n.inputs.clone(), |a, b| {
        supports[a].iter().any(|&y| !n.probs[b][y].is_zero())
    })
    .unwrap_or_else(|_| {
        // duplicate input labels: fall back to indices
        let labels = (0..n.input_count()).map(|i| i.to_string()).collect();
        Graph::from_fn(labels, |a, b| supports[a].iter().any(|&y| !n.probs[b][y].is_zero()))
            .expect("index labels are distinct")
    })
}

/// N₁ ⊗ N₂ on label pairs; input (a, b) has index a·|X₂| + b.
pub fn tensor_channels(n1: &Channel, n2: &Channel) -> Channel {
    let pairs = |l1: &[String], l2: &[String]| {
        l1.iter()
            .flat_map(|a| l2.iter().map(move |b| format!("({a},{b})")))
            .collect::<Vec<_>>()
    };
    let mut probs = Vec::with_capacity(n1.input_count() * n2.input_count());
    for r1 in &n1.probs {
        for r2 in &n2.probs {
            probs.push(r1.iter().flat_map(|p| r2.iter().map(move |q| p * q)).collect());
        }
    }
    Channel {
        inputs: pairs(&n1.inputs, &n2.inputs),
        outputs: pairs(&n1.outputs, &n2.outputs),
        probs,
    }
}

/// The channel on V(G) whose outputs are the d-cliques, each input choosing
/// uniformly among the cliques that contain it.
#[derive(Clone, Debug)]
pub struct CliqueChannel {
    pub channel: Channel,
    pub cliques: Vec<Vec<usize>>,
    pub d: usize,
    /// Cliques per vertex.
    pub m: usize,
    pub double_count_holds: bool,
    /// log₂(|X| / d).
    pub capacity_log2: f64,
    /// |X| / d = |Y| / m, exactly.
    pub capacity_ratio: Prob,
}

pub fn channel_from_cliques(g: &Graph, d: usize) -> Result<CliqueChannel, ChannelError> {
    let cliques = cliques_of_size(g, d)?;
    if cliques.is_empty() {
        return Err(ChannelError::NoCliques(d));
    }
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (y, c) in cliques.iter().enumerate() {
        for &x in c {
            containing[x].push(y);
        }
    }
    if let Some(x) = containing.iter().position(Vec::is_empty) {
        return Err(ChannelError::UncoveredVertex(x));
    }
    let min = containing.iter().map(Vec::len).min().unwrap_or(0);
    let max = containing.iter().map(Vec::len).max().unwrap_or(0);
    if min != max {
        return Err(ChannelError::Irregular { min, max });
    }
    let m = min;
    let share = Prob::new(1, m as i64);
    let probs = containing
        .iter()
        .map(|ys| {
            let mut row = vec![Prob::zero(); cliques.len()];
            for &y in ys {
                row[y] = share;
            }
            row
        })
        .collect();
    let outputs = cliques
        .iter()
        .map(|c| {
            let names: Vec<&str> = c.iter().map(|&v| g.label(v)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let channel = Channel::new(g.labels().to_vec(), outputs, probs)?;
    let x = g.n() as i64;
    let double_count_holds = cliques.len() as i64 * d as i64 == x * m as i64;
    let capacity_ratio = Prob::new(x, d as i64);
    Ok(CliqueChannel {
        channel,
        cliques,
        d,
        m,
        double_count_holds,
        capacity_log2: (x as f64 / d as f64).log2(),
        capacity_ratio,
    })
}

/// Result of a converged Blahut–Arimoto run, in bits.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityEstimate {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    /// I(p; W) at each iterate.
    pub history: Vec<f64>,
    pub input_distribution: Vec<f64>,
}

impl CapacityEstimate {
    pub fn value(&self) -> f64 {
        self.lower
    }
}

/// Alternating maximization from the uniform input. The lower bound is
/// I(p; W) and the upper bound max_x D(W_x ‖ pW); iteration stops when they
/// are within `tol`.
pub fn blahut_arimoto(
    n: &Channel,
    tol: f64,
    max_iter: usize,
) -> Result<CapacityEstimate, ChannelError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(ChannelError::BadTolerance);
    }
    let w = n.to_f64();
    let nx = w.len();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut history = Vec::new();
    let mut best_lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for it in 1..=max_iter {
        let q = output_distribution(&w, &p);
        let div: Vec<f64> = w.iter().map(|row| kl_bits(row, &q)).collect();
        let lower: f64 = p.iter().zip(&div).map(|(pi, d)| pi * d).sum();
        upper = div.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        best_lower = best_lower.max(lower);
        history.push(lower);
        if upper - best_lower <= tol {
            return Ok(CapacityEstimate {
                lower: best_lower,
                upper,
                iterations: it,
                history,
                input_distribution: p,
            });
        }
        let weights: Vec<f64> = p.iter().zip(&div).map(|(pi, d)| pi * d.exp2()).collect();
        let total: f64 = weights.iter().sum();
        p = weights.into_iter().map(|x| x / total).collect();
    }
    Err(ChannelError::MaxIter {
        iterations: max_iter,
        lower: best_lower,
        upper,
    })
}

fn output_distribution(w: &[Vec<f64>], p: &[f64]) -> Vec<f64> {
    let ny = w.first().map_or(0, Vec::len);
    let mut q = vec![0.0; ny];
    for (row, &px) in w.iter().zip(p) {
        for (qy, &wy) in q.iter_mut().zip(row) {
            *qy += px * wy;
        }
    }
    q
}

fn kl_bits(row: &[f64], q: &[f64]) -> f64 {
    row.iter()
        .zip(q)
        .filter(|(&w, _)| w > 0.0)
        .map(|(&w, &qy)| w * (w / qy).log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::strong_product;
    use crate::symplectic::build_sp_graph;

    fn r(n: i64, d: i64) -> Prob {
        Prob::new(n, d)
    }

    fn pentagon() -> Channel {
        let labels: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
        let probs = (0..5)
            .map(|x| {
                (0..5)
                    .map(|y| if y == x || y == (x + 1) % 5 { r(1, 2) } else { r(0, 1) })
                    .collect()
            })
            .collect();
        Channel::new(labels.clone(), labels, probs).unwrap()
    }

    #[test]
    fn rows_must_be_stochastic() {
        let l = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            Channel::new(l.clone(), l.clone(), vec![vec![r(1, 2), r(1, 3)], vec![r(1, 1), r(0, 1)]]),
            Err(ChannelError::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            Channel::new(l.clone(), l.clone(), vec![vec![r(3, 2), r(-1, 2)], vec![r(1, 1), r(0, 1)]]),
            Err(ChannelError::Negative { row: 0, col: 1 })
        ));
        assert!(matches!(
            Channel::new(l.clone(), l, vec![vec![r(1, 1)], vec![r(1, 1), r(0, 1)]]),
            Err(ChannelError::Shape { row: 0, .. })
        ));
    }

    #[test]
    fn confusability_examples() {
        assert_eq!(confusability_graph(&Channel::identity(4)).edge_count(), 0);
        let all = Channel::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec!["y".into()],
            vec![vec![r(1, 1)]; 4],
        )
        .unwrap();
        assert_eq!(confusability_graph(&all).edge_count(), 6);
        assert_eq!(confusability_graph(&pentagon()), Graph::cycle(5));
    }

    #[test]
    fn tensor_shapes() {
        let t = tensor_channels(&pentagon(), &Channel::identity(3));
        assert_eq!((t.input_count(), t.output_count()), (15, 15));
        for row in t.probs() {
            assert!(row.iter().sum::<Prob>().is_one());
        }
        let ii = tensor_channels(&Channel::identity(2), &Channel::identity(3));
        assert_eq!(ii.probs(), Channel::identity(6).probs());
        let g = confusability_graph(&tensor_channels(&pentagon(), &pentagon()));
        assert_eq!(g, strong_product(&Graph::cycle(5), &Graph::cycle(5)));
    }

    #[test]
    fn json_and_csv_round_trip() {
        let c = pentagon();
        let text = c.to_json();
        assert!(text.contains("\"1/2\""));
        assert_eq!(Channel::from_json(&text).unwrap(), c);
        let csv = c.to_csv().unwrap();
        assert_eq!(csv.lines().next(), Some("input,1,2,3,4,5"));
        assert_eq!(csv.lines().nth(1), Some("1,1/2,1/2,0,0,0"));
        assert!(Channel::from_json(r#"{"inputs":["a"],"outputs":["b"],"probs":[["1/0"]]}"#).is_err());
    }

    #[test]
    fn disjoint_cliques_channel() {
        let g = Graph::from_fn((0..12).map(|i| i.to_string()).collect(), |a, b| a / 3 == b / 3).unwrap();
        let c = channel_from_cliques(&g, 3).unwrap();
        assert_eq!((c.cliques.len(), c.m), (4, 1));
        assert!(c.double_count_holds);
        assert!((c.capacity_log2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn irregular_incidence_is_rejected() {
        // a path: the middle vertex lies in two edges
        let mut g = Graph::empty(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        assert!(matches!(channel_from_cliques(&g, 2), Err(ChannelError::Irregular { min: 1, max: 2 })));
        assert!(matches!(channel_from_cliques(&g, 3), Err(ChannelError::NoCliques(3))));
    }

    #[test]
    fn sp6_clique_channel_double_count() {
        let sp = build_sp_graph(3).unwrap();
        let c = channel_from_cliques(sp.graph(), 7).unwrap();
        assert_eq!(c.cliques.len(), 135);
        assert_eq!(c.m, 15);
        assert!(c.double_count_holds);
        assert_eq!(c.capacity_ratio, r(9, 1));
    }

    #[test]
    fn ba_trivial_channels() {
        let est = blahut_arimoto(&Channel::identity(2), 1e-9, 100).unwrap();
        assert!((est.value() - 1.0).abs() < 1e-9);
        let same = Channel::new(
            vec!["a".into(), "b".into()],
            vec!["0".into(), "1".into()],
            vec![vec![r(1, 3), r(2, 3)]; 2],
        )
        .unwrap();
        assert!(blahut_arimoto(&same, 1e-9, 100).unwrap().value().abs() < 1e-9);
        assert!(matches!(blahut_arimoto(&same, 0.0, 10), Err(ChannelError::BadTolerance)));
    }

    #[test]
    fn ba_reports_bracket_on_timeout() {
        // Z-channel converges slowly enough that one step cannot close the gap
        let z = Channel::new(
            vec!["0".into(), "1".into()],
            vec!["0".into(), "1".into()],
            vec![vec![r(1, 1), r(0, 1)], vec![r(1, 2), r(1, 2)]],
        )
        .unwrap();
        match blahut_arimoto(&z, 1e-12, 1) {
            Err(ChannelError::MaxIter { lower, upper, .. }) => assert!(lower <= upper),
            other => panic!("expected MaxIter, got {other:?}"),
        }
        let est = blahut_arimoto(&z, 1e-9, 10_000).unwrap();
        // capacity of the Z-channel with crossover 1/2 is log₂(5/4)
        assert!((est.value() - (5.0f64 / 4.0).log2()).abs() < 1e-8);
        assert!(est.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}
