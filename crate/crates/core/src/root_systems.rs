//! Orthogonality graphs of root systems in coordinate models.
//!
//! Vertices are rays (antipodal pairs of roots); two rays are adjacent when
//! their integer dot product is zero. Roots are left unnormalized, and each
//! ray is stored by its representative with first nonzero coordinate
//! positive.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{kneser_graph_pairs, strong_product, CliquePartition, Graph, GraphError};
use crate::symplectic::{build_sp_graph, FieldModel, SymplecticError};

/// Largest rank accepted by [`build_root_graph`].
pub const MAX_RANK: usize = 8;

#[derive(Debug, Error)]
pub enum RootSystemError {
    #[error("{kind} is not defined for n = {n} here")]
    InvalidRank { kind: &'static str, n: usize },
    #[error("ray {0:?} is missing from the coordinate model")]
    MissingRay(Vec<i64>),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RootSystem {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    E8,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::B(n) => write!(f, "B{n}"),
            RootSystem::C(n) => write!(f, "C{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::G2 => f.write_str("G2"),
            RootSystem::E8 => f.write_str("E8"),
        }
    }
}

/// Rays of a root system with their orthogonality graph.
#[derive(Clone, Debug)]
pub struct RayGraph {
    pub system: RootSystem,
    pub rays: Vec<Vec<i64>>,
    pub graph: Graph,
    index: HashMap<Vec<i64>, usize>,
}

impl RayGraph {
    fn from_rays(system: RootSystem, rays: Vec<Vec<i64>>) -> Self {
        let rays: Vec<Vec<i64>> = rays.into_iter().map(canonical_ray).collect();
        let labels = rays.iter().map(|r| ray_label(r)).collect();
        let graph = Graph::from_fn(labels, |i, j| dot(&rays[i], &rays[j]) == 0)
            .expect("canonical rays are distinct");
        let index = rays.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Self {
            system,
            rays,
            graph,
            index,
        }
    }

    /// Vertex of the ray through `v` (either sign).
    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(&canonical_ray(v.to_vec())).copied()
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            system: String,
            labels: &'a [String],
            rays: &'a [Vec<i64>],
            edges: Vec<[usize; 2]>,
        }
        serde_json::to_string_pretty(&Doc {
            system: self.system.to_string(),
            labels: self.graph.labels(),
            rays: &self.rays,
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
        })
        .expect("ray graph serializes")
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flips the sign so that the first nonzero coordinate is positive.
pub fn canonical_ray(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

fn ray_label(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v
}

fn pair(dim: usize, i: usize, j: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v[j] = sign;
    v
}

/// e_i ∓ e_j for 1 ≤ i < j ≤ dim (0-based here), minus before plus.
fn pm_pairs(dim: usize, with_plus: bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(pair(dim, i, j, -1));
            if with_plus {
                out.push(pair(dim, i, j, 1));
            }
        }
    }
    out
}

pub fn build_root_graph(system: RootSystem) -> Result<RayGraph, RootSystemError> {
    let invalid = |kind, n| RootSystemError::InvalidRank { kind, n };
    let rays = match system {
        RootSystem::A(n) => {
            if !(1..=MAX_RANK).contains(&n) {
                return Err(invalid("A", n));
            }
            pm_pairs(n + 1, false)
        }
        RootSystem::B(n) | RootSystem::C(n) => {
            if !(2..=MAX_RANK).contains(&n) {
                return Err(invalid(if matches!(system, RootSystem::B(_)) { "B" } else { "C" }, n));
            }
            let short = if matches!(system, RootSystem::B(_)) { 1 } else { 2 };
            let mut rays = pm_pairs(n, true);
            rays.extend((0..n).map(|i| unit(n, i, short)));
            rays
        }
        RootSystem::D(n) => {
            if !(4..=MAX_RANK).contains(&n) {
                return Err(invalid("D", n));
            }
            pm_pairs(n, true)
        }
        RootSystem::G2 => vec![
            vec![1, -1, 0],
            vec![1, 0, -1],
            vec![0, 1, -1],
            vec![1, 1, -2],
            vec![1, -2, 1],
            vec![-2, 1, 1],
        ],
        RootSystem::E8 => {
            let mut rays = pm_pairs(8, true);
            // x₁ = +1 picks one sign per antipodal pair; Π xᵢ = 1 means an
            // even number of −1 entries.
            for bits in 0u32..1 << 7 {
                if bits.count_ones() % 2 == 0 {
                    let mut v = vec![1i64; 8];
                    for k in 0..7 {
                        if (bits >> k) & 1 == 1 {
                            v[k + 1] = -1;
                        }
                    }
                    rays.push(v);
                }
            }
            rays
        }
    };
    Ok(RayGraph::from_rays(system, rays))
}

/// n cliques of size n covering Bₙ.
///
/// Odd n: π_k = {eᵢ ± eⱼ : i < j, i + j ≡ 2k (mod n)} ∪ {e_k}.
/// Even n: π_k = {eᵢ ± eⱼ : i < j < n, i + j ≡ 2k (mod n−1)} ∪ {e_k ± e_n}
/// for k < n, and π_n = {e₁, …, e_n}. Indices are 1-based.
pub fn bn_partition(n: usize) -> Result<CliquePartition, RootSystemError> {
    let b = build_root_graph(RootSystem::B(n))?;
    let lookup = |v: Vec<i64>| b.index_of(&v).ok_or(RootSystemError::MissingRay(v));
    let both_signs = |i: usize, j: usize| [pair(n, i - 1, j - 1, -1), pair(n, i - 1, j - 1, 1)];
    let mut cells = Vec::with_capacity(n);
    if n % 2 == 1 {
        for k in 1..=n {
            let mut cell = Vec::with_capacity(n);
            for i in 1..=n {
                for j in i + 1..=n {
                    if (i + j) % n == (2 * k) % n {
                        for v in both_signs(i, j) {
                            cell.push(lookup(v)?);
                        }
                    }
                }
            }
            cell.push(lookup(unit(n, k - 1, 1))?);
            cell.sort_unstable();
            cells.push(cell);
        }
    } else {
        let r = n - 1;
        for k in 1..n {
            let mut cell = Vec::with_capacity(n);
            for i in 1..n {
                for j in i + 1..n {
                    if (i + j) % r == (2 * k) % r {
                        for v in both_signs(i, j) {
                            cell.push(lookup(v)?);
                        }
                    }
                }
            }
            for v in both_signs(k, n) {
                cell.push(lookup(v)?);
            }
            cell.sort_unstable();
            cells.push(cell);
        }
        let mut last = (0..n)
            .map(|i| lookup(unit(n, i, 1)))
            .collect::<Result<Vec<_>, _>>()?;
        last.sort_unstable();
        cells.push(last);
    }
    Ok(CliquePartition::new(cells))
}

/// A vertex bijection from a ray graph onto a named target graph.
#[derive(Clone, Debug)]
pub struct StructureMap {
    pub target: Graph,
    /// `map[v]` is the target vertex of source vertex `v`.
    pub map: Vec<usize>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // position of {i, j} (0-based, i < j) in lexicographic order of 2-subsets
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn ray_pair(r: &[i64]) -> (usize, usize, bool) {
    let nz: Vec<usize> = (0..r.len()).filter(|&k| r[k] != 0).collect();
    assert_eq!(nz.len(), 2, "not a ±eᵢ±eⱼ ray: {r:?}");
    (nz[0], nz[1], r[nz[1]] > 0)
}

/// eᵢ − eⱼ ↦ {i, j}: Aₙ ≅ KG(n+1, 2).
pub fn an_kneser_map(n: usize) -> Result<StructureMap, RootSystemError> {
    let a = build_root_graph(RootSystem::A(n))?;
    let target = kneser_graph_pairs(n + 1);
    let map = a
        .rays
        .iter()
        .map(|r| {
            let (i, j, _) = ray_pair(r);
            pair_index(n + 1, i, j)
        })
        .collect();
    Ok(StructureMap { target, map })
}

/// eᵢ − eⱼ ↦ ({i, j}, 0), eᵢ + eⱼ ↦ ({i, j}, 1): Dₙ ≅ KG(n, 2) ⊠ K₂.
pub fn dn_factorization_map(n: usize) -> Result<StructureMap, RootSystemError> {
    let d = build_root_graph(RootSystem::D(n))?;
    let target = strong_product(&kneser_graph_pairs(n), &Graph::complete(2));
    let map = d
        .rays
        .iter()
        .map(|r| {
            let (i, j, plus) = ray_pair(r);
            2 * pair_index(n, i, j) + plus as usize
        })
        .collect();
    Ok(StructureMap { target, map })
}

/// The non-isotropic points of (F₁₆², Tr(xy)) inside Sp(8, F₂), with the
/// spread cells restricted to them.
#[derive(Clone, Debug)]
pub struct E8SymplecticModel {
    /// Sp(8, F₂) vertex of each model vertex, ascending.
    pub sp_vertices: Vec<usize>,
    /// Packed field point (x | y << 4) of each model vertex.
    pub field_points: Vec<u32>,
    /// Subgraph of Sp(8, F₂) induced on `sp_vertices`.
    pub graph: Graph,
    /// Cells π_a = {(x, ax) : Tr(ax²) = 1}, a = 1..15, on model indices.
    pub partition: CliquePartition,
    pub slopes: Vec<u32>,
    /// Number of nonzero points with Tr(xy) = 0.
    pub isotropic_count: usize,
}

pub fn e8_symplectic_model() -> Result<E8SymplecticModel, RootSystemError> {
    let model = FieldModel::new(4)?;
    let field = model.field();
    let q = 16u32;
    let quad = |p: u32| field.trace_raw(field.mul_raw(p & 15, p >> 4)) == 1;

    let non_isotropic: BTreeSet<u32> = (1..q * q).filter(|&p| quad(p)).collect();
    let isotropic_count = (1..q * q).filter(|&p| !quad(p)).count();

    let mut sp_vertices: Vec<usize> = non_isotropic
        .iter()
        .map(|&p| model.to_canonical(p) as usize - 1)
        .collect();
    sp_vertices.sort_unstable();
    let model_index: HashMap<usize, usize> =
        sp_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let field_points: Vec<u32> = sp_vertices
        .iter()
        .map(|&v| model.from_canonical(v as u32 + 1))
        .collect();

    let sp = build_sp_graph(4)?;
    let graph = crate::graphs::induced_subgraph(sp.graph(), &sp_vertices)?;

    let mut cells = Vec::new();
    let mut slopes = Vec::new();
    for a in 1..q {
        let mut cell: Vec<usize> = (1..q)
            .filter(|&x| field.trace_raw(field.mul_raw(a, field.mul_raw(x, x))) == 1)
            .map(|x| {
                let p = model.pack(x, field.mul_raw(a, x));
                debug_assert!(non_isotropic.contains(&p));
                model_index[&(model.to_canonical(p) as usize - 1)]
            })
            .collect();
        cell.sort_unstable();
        cells.push(cell);
        slopes.push(a);
    }
    Ok(E8SymplecticModel {
        sp_vertices,
        field_points,
        graph,
        partition: CliquePartition::new(cells),
        slopes,
        isotropic_count,
    })
}
