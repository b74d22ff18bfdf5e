//! E₇ and E₈ root lattices from Dynkin data, the reduction κ onto a
//! symplectic space over F₂, and the orthonormal representations and
//! frame partitions it induces.

use std::collections::{BTreeSet, HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{sigma_packed, witt_isometry, AlgebraError, BilinearFormSpace, Gf2Matrix, Gf2Vector};
use crate::graphs::{CliquePartition, Graph};
use crate::root_systems::{build_root_graph, canonical_ray, RootSystem, RootSystemError};
use crate::symplectic::{pauli_string, spread_partition, FieldModel, SymplecticError};

/// Orbit size at which root enumeration gives up.
pub const ORBIT_CAP: usize = 10_000;

/// Dynkin edges of E₇ (1-based); E₈ adds {7, 8}.
pub const E7_EDGES: [(usize, usize); 6] = [(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7)];

/// ⟨w⟩ for w = α₂ + α₅ + α₇.
pub const E7_W: [i64; 7] = [0, 1, 0, 0, 1, 0, 1];

const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("rank {0} is not supported (expected 7 or 8)")]
    UnsupportedRank(usize),
    #[error("reflection orbit exceeded {0} vectors")]
    OrbitCap(usize),
    #[error("no vectors v₁..v₇ satisfy the κ constraints")]
    NoKappa,
    #[error("κ verification failed: {0}")]
    KappaFailed(String),
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("real embedding deviates from the exact Gram data by {0:e}")]
    EmbeddingDrift(f64),
    #[error("E₈ transfer failed: {0}")]
    Transfer(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Lattice coordinates ⟨γ⟩ = (n₁, …, n_rank) in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.coords[i] = 1;
        v
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::new(self.coords.iter().map(|x| k * x).collect())
    }

    /// Sum of coordinates.
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    /// The sign with first nonzero coordinate positive.
    pub fn canonical(&self) -> Self {
        Self::new(canonical_ray(self.coords.clone()))
    }

    /// ⟨γ⟩ mod 2, bit i for coordinate i.
    pub fn parity(&self) -> u32 {
        self.coords
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &x)| acc | ((x.rem_euclid(2) as u32) << i))
    }
}

/// A root lattice given by the Gram matrix of its simple roots.
#[derive(Clone, Debug, Serialize)]
pub struct RootLattice {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    /// Dynkin edges, 0-based.
    pub edges: Vec<(usize, usize)>,
}

impl RootLattice {
    pub fn from_dynkin(rank: usize, edges: &[(usize, usize)]) -> Self {
        let mut gram = vec![vec![0; rank]; rank];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        let edges: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
        for &(i, j) in &edges {
            gram[i][j] = -1;
            gram[j][i] = -1;
        }
        Self { rank, gram, edges }
    }

    pub fn e7() -> Self {
        Self::from_dynkin(7, &E7_EDGES)
    }

    pub fn e8() -> Self {
        let mut edges = E7_EDGES.to_vec();
        edges.push((7, 8));
        Self::from_dynkin(8, &edges)
    }

    pub fn inner(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a.coords[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a.coords[i] * self.gram[i][j] * b.coords[j];
            }
        }
        s
    }

    pub fn norm(&self, a: &LatticeVector) -> i64 {
        self.inner(a, a)
    }

    /// r(⟨γ⟩) = Σ nᵢ² − Σ_edges nᵢnⱼ, which is ⟨γ,γ⟩/2.
    pub fn r(&self, a: &LatticeVector) -> i64 {
        let c = &a.coords;
        c.iter().map(|x| x * x).sum::<i64>() - self.edges.iter().map(|&(i, j)| c[i] * c[j]).sum::<i64>()
    }

    /// Rᵢ(γ) = γ − ⟨γ, αᵢ⟩ αᵢ.
    pub fn reflect(&self, i: usize, a: &LatticeVector) -> LatticeVector {
        let k: i64 = (0..self.rank).map(|j| a.coords[j] * self.gram[j][i]).sum();
        let mut out = a.clone();
        out.coords[i] -= k;
        out
    }

    /// Every leading minor of the Gram matrix is positive.
    pub fn is_positive_definite(&self) -> bool {
        let m = DMatrix::from_fn(self.rank, self.rank, |i, j| self.gram[i][j] as f64);
        (1..=self.rank).all(|k| m.view((0, 0), (k, k)).determinant() > 0.5)
    }
}

/// Roots of a lattice with one canonical representative per ray.
#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    /// All roots, by height then coordinates.
    pub roots: Vec<LatticeVector>,
    /// Positive roots (first nonzero coordinate positive), same order.
    pub rays: Vec<LatticeVector>,
}

impl RootSet {
    pub fn ray_index(&self) -> HashMap<LatticeVector, usize> {
        self.rays.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect()
    }
}

/// Closes the simple roots under simple reflections.
pub fn enumerate_roots(lattice: &RootLattice) -> Result<RootSet, LatticeError> {
    enumerate_roots_with_cap(lattice, ORBIT_CAP)
}

pub fn enumerate_roots_with_cap(
    lattice: &RootLattice,
    cap: usize,
) -> Result<RootSet, LatticeError> {
    if !(7..=8).contains(&lattice.rank) {
        return Err(LatticeError::UnsupportedRank(lattice.rank));
    }
    let mut seen: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut queue: VecDeque<LatticeVector> = VecDeque::new();
    for i in 0..lattice.rank {
        let a = LatticeVector::simple(lattice.rank, i);
        seen.insert(a.clone());
        queue.push_back(a);
    }
    while let Some(g) = queue.pop_front() {
        for i in 0..lattice.rank {
            let h = lattice.reflect(i, &g);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(LatticeError::OrbitCap(cap));
                }
                queue.push_back(h);
            }
        }
    }
    let mut roots: Vec<LatticeVector> = seen.into_iter().collect();
    roots.sort_by(|a, b| (a.height(), &a.coords).cmp(&(b.height(), &b.coords)));
    let rays = roots.iter().filter(|r| r.height() > 0).cloned().collect();
    Ok(RootSet { roots, rays })
}

/// κ(γ) = Σ ⟨γ⟩ᵢ vᵢ mod 2 into (F₂^{2m}, σ).
#[derive(Clone, Debug, Serialize)]
pub struct KappaMap {
    pub m: u32,
    /// vᵢ packed with bit k for coordinate k.
    pub v: Vec<u32>,
}

impl KappaMap {
    pub fn apply_packed(&self, g: &LatticeVector) -> u32 {
        self.v
            .iter()
            .zip(&g.coords)
            .filter(|(_, &n)| n.rem_euclid(2) == 1)
            .fold(0, |acc, (&v, _)| acc ^ v)
    }

    pub fn apply(&self, g: &LatticeVector) -> Gf2Vector {
        Gf2Vector::from_u64(self.apply_packed(g) as u64, 2 * self.m as usize)
    }

    pub fn vectors(&self) -> Vec<Gf2Vector> {
        self.v
            .iter()
            .map(|&v| Gf2Vector::from_u64(v as u64, 2 * self.m as usize))
            .collect()
    }
}

/// Finds v₁..v₇ ∈ F₂⁶ with σ(vᵢ, vⱼ) ≡ ⟨αᵢ, αⱼ⟩ (mod 2) and
/// v₂ + v₅ + v₇ = 0, taking the smallest packed value at every choice.
pub fn construct_kappa_e7() -> Result<KappaMap, LatticeError> {
    let lattice = RootLattice::e7();
    let target = |i: usize, j: usize| lattice.gram[i][j].rem_euclid(2) == 1;
    let mut v = Vec::with_capacity(7);
    if kappa_search(&mut v, &target) {
        Ok(KappaMap { m: 3, v })
    } else {
        Err(LatticeError::NoKappa)
    }
}

fn kappa_search(v: &mut Vec<u32>, target: &impl Fn(usize, usize) -> bool) -> bool {
    let i = v.len();
    if i == 7 {
        return true;
    }
    let fits = |c: u32, v: &[u32]| (0..i).all(|j| sigma_packed(c, v[j], 3) == target(i, j));
    if i == 6 {
        let c = v[1] ^ v[4];
        if c != 0 && fits(c, v) {
            v.push(c);
            return true;
        }
        return false;
    }
    for c in 1..64 {
        if fits(c, v) {
            v.push(c);
            if kappa_search(v, target) {
                return true;
            }
            v.pop();
        }
    }
    false
}

/// One named check with an optional counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &'static str, witness: Option<String>) -> Self {
        Self {
            name,
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub roots: usize,
    pub rays: usize,
    pub w_norm: i64,
    pub w_r: i64,
    pub checks: Vec<Check>,
}

impl KappaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks every claim about κ on the enumerated roots of E₇.
pub fn verify_kappa_bijection(
    lattice: &RootLattice,
    roots: &RootSet,
    kappa: &KappaMap,
) -> KappaReport {
    let rank = lattice.rank;
    let w = LatticeVector::new(E7_W.to_vec());
    let mut checks = Vec::new();

    checks.push(Check::new(
        "root_norms_are_two",
        roots
            .roots
            .iter()
            .find(|g| lattice.norm(g) != 2 || lattice.r(g) != 1)
            .map(|g| format!("{:?}", g.coords)),
    ));

    let simple_ok = (0..rank).find_map(|i| {
        (0..rank).find_map(|j| {
            let s = sigma_packed(kappa.v[i], kappa.v[j], kappa.m);
            (s != (lattice.gram[i][j].rem_euclid(2) == 1)).then(|| format!("nodes {} {}", i + 1, j + 1))
        })
    });
    checks.push(Check::new("simple_roots_compatible", simple_ok));

    // κ vanishes exactly on 2L ∪ (w + 2L): the parity kernel is {0, w mod 2}.
    let w_parity = w.parity();
    let kernel = (0u32..1 << rank).find_map(|bits| {
        let g = LatticeVector::new((0..rank).map(|k| ((bits >> k) & 1) as i64).collect());
        let zero = kappa.apply_packed(&g) == 0;
        (zero != (bits == 0 || bits == w_parity)).then(|| format!("parity {bits:07b}"))
    });
    checks.push(Check::new("kernel_is_even_lattice_plus_w", kernel));

    checks.push(Check::new(
        "no_root_in_kernel",
        roots
            .roots
            .iter()
            .find(|g| kappa.apply_packed(g) == 0)
            .map(|g| format!("{:?}", g.coords)),
    ));

    let fibres = roots.roots.iter().enumerate().find_map(|(a, ga)| {
        roots.roots[a + 1..].iter().find_map(|gb| {
            let same = kappa.apply_packed(ga) == kappa.apply_packed(gb);
            let antipodal = *gb == ga.neg();
            (same != antipodal).then(|| format!("{:?} and {:?}", ga.coords, gb.coords))
        })
    });
    checks.push(Check::new("equal_images_iff_antipodal", fibres));

    let n_nonzero = (1usize << (2 * kappa.m)) - 1;
    let images: BTreeSet<u32> = roots.rays.iter().map(|g| kappa.apply_packed(g)).collect();
    let image_witness = if images.len() == n_nonzero && roots.rays.len() == n_nonzero && !images.contains(&0) {
        None
    } else {
        Some(format!("{} rays hit {} vectors", roots.rays.len(), images.len()))
    };
    checks.push(Check::new("rays_biject_onto_nonzero_vectors", image_witness));

    let compat = roots.roots.iter().find_map(|ga| {
        roots.roots.iter().find_map(|gb| {
            let s = sigma_packed(kappa.apply_packed(ga), kappa.apply_packed(gb), kappa.m);
            (s != (lattice.inner(ga, gb).rem_euclid(2) == 1))
                .then(|| format!("{:?} and {:?}", ga.coords, gb.coords))
        })
    });
    checks.push(Check::new("sigma_matches_inner_product_mod_2", compat));

    let even_norms = roots
        .roots
        .iter()
        .find(|g| lattice.norm(g) % 2 != 0)
        .map(|g| format!("{:?}", g.coords));
    checks.push(Check::new("norms_are_even", even_norms));

    KappaReport {
        roots: roots.roots.len(),
        rays: roots.rays.len(),
        w_norm: lattice.norm(&w),
        w_r: lattice.r(&w),
        checks,
    }
}

/// Sp(6, F₂) vertex u ↦ root ray κ⁻¹(u), with exact lattice Gram data and a
/// unit-length real embedding.
#[derive(Clone, Debug)]
pub struct OrthonormalRepresentation {
    pub lattice: RootLattice,
    pub kappa: KappaMap,
    /// Indexed by Sp(6, F₂) vertex (packed vector − 1).
    pub rays: Vec<LatticeVector>,
    /// Unit vectors in R⁷, same indexing.
    pub real: Vec<Vec<f64>>,
    /// Largest deviation of the real Gram matrix from the exact one.
    pub max_drift: f64,
}

impl OrthonormalRepresentation {
    pub fn inner(&self, u: usize, v: usize) -> i64 {
        self.lattice.inner(&self.rays[u], &self.rays[v])
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank
    }
}

/// The E₇ representation of Sp(6, F₂), built from a verified κ.
pub fn orthonormal_representation() -> Result<OrthonormalRepresentation, LatticeError> {
    let lattice = RootLattice::e7();
    let roots = enumerate_roots(&lattice)?;
    let kappa = construct_kappa_e7()?;
    let report = verify_kappa_bijection(&lattice, &roots, &kappa);
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(LatticeError::KappaFailed(format!(
            "{}: {}",
            c.name,
            c.witness.as_deref().unwrap_or("")
        )));
    }
    let mut rays = vec![LatticeVector::zero(7); 63];
    for g in &roots.rays {
        rays[kappa.apply_packed(g) as usize - 1] = g.clone();
    }
    let real = real_embedding(&lattice, &rays)?;
    let mut max_drift: f64 = 0.0;
    for u in 0..rays.len() {
        for v in 0..rays.len() {
            let exact = lattice.inner(&rays[u], &rays[v]) as f64 / 2.0;
            let approx: f64 = real[u].iter().zip(&real[v]).map(|(a, b)| a * b).sum();
            max_drift = max_drift.max((exact - approx).abs());
        }
    }
    if max_drift > REAL_TOL {
        return Err(LatticeError::EmbeddingDrift(max_drift));
    }
    Ok(OrthonormalRepresentation {
        lattice,
        kappa,
        rays,
        real,
        max_drift,
    })
}

/// Lᵀγ / √2 where G = L Lᵀ, so that real dot products are ⟨γ, δ⟩ / 2.
pub fn real_embedding(
    lattice: &RootLattice,
    vectors: &[LatticeVector],
) -> Result<Vec<Vec<f64>>, LatticeError> {
    let g = DMatrix::from_fn(lattice.rank, lattice.rank, |i, j| lattice.gram[i][j] as f64);
    let l = g.cholesky().ok_or(LatticeError::NotPositiveDefinite)?.l();
    let lt = l.transpose();
    Ok(vectors
        .iter()
        .map(|v| {
            let c = DVector::from_iterator(v.coords.len(), v.coords.iter().map(|&x| x as f64));
            let x = &lt * c;
            let norm = (lattice.norm(v) as f64).sqrt();
            x.iter().map(|t| t / norm).collect()
        })
        .collect())
}

/// One row of the representation table: a vertex of Sp(6, F₂) with its ray.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub frame: usize,
    pub vertex: usize,
    pub pauli: String,
    pub image: String,
    pub lattice: Vec<i64>,
    pub real: Vec<f64>,
}

/// The representation grouped by spread cell (9 frames of 7).
pub fn representation_table(rep: &OrthonormalRepresentation) -> Result<Vec<TableRow>, LatticeError> {
    let spread = spread_partition(3)?;
    let mut rows = Vec::with_capacity(63);
    for (f, cell) in spread.cells.cells.iter().enumerate() {
        for &v in cell {
            let packed = v as u32 + 1;
            rows.push(TableRow {
                frame: f + 1,
                vertex: v,
                pauli: pauli_string(packed, 3),
                image: format!("{packed:06b}").chars().rev().collect(),
                lattice: rep.rays[v].coords.clone(),
                real: rep.real[v].clone(),
            });
        }
    }
    Ok(rows)
}

pub fn table_to_json(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("table serializes")
}

pub fn table_to_csv(rows: &[TableRow]) -> Result<String, LatticeError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let dim = rows.first().map_or(0, |r| r.lattice.len());
    let mut header = vec!["frame".to_string(), "vertex".into(), "pauli".into(), "image".into()];
    header.extend((1..=dim).map(|i| format!("n{i}")));
    header.extend((1..=dim).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.frame.to_string(), r.vertex.to_string(), r.pauli.clone(), r.image.clone()];
        rec.extend(r.lattice.iter().map(i64::to_string));
        rec.extend(r.real.iter().map(|x| format!("{x:.9}")));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| LatticeError::Transfer(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// E₈ rays with the spread of F₁₆² carried back to 15 orthogonal frames.
#[derive(Clone, Debug)]
pub struct E8Frames {
    pub lattice: RootLattice,
    pub roots: usize,
    /// Positive roots, one per ray.
    pub rays: Vec<LatticeVector>,
    /// Orthogonality graph on `rays` from the exact inner product.
    pub graph: Graph,
    /// κ₈(γ) = ⟨γ⟩ mod 2 for each ray.
    pub images: Vec<u32>,
    /// Number of nonzero q-singular vectors in F₂⁸.
    pub singular_count: usize,
    /// Isometry (F₂⁸, q) → (F₁₆², Tr(xy)).
    pub isometry: Gf2Matrix,
    /// Field point of each ray, packed x | y << 4.
    pub field_points: Vec<u32>,
    pub partition: CliquePartition,
    /// Coordinate-model index (root_systems E₈) of each ray.
    pub coordinate_index: Vec<usize>,
}

/// Bourbaki simple roots of E₈, doubled so that entries are integers.
fn e8_simple_roots_doubled() -> Vec<[i64; 8]> {
    let mut s = vec![[1, -1, -1, -1, -1, -1, -1, 1], [2, 2, 0, 0, 0, 0, 0, 0]];
    for k in 0..6 {
        let mut v = [0i64; 8];
        v[k] = -2;
        v[k + 1] = 2;
        s.push(v);
    }
    s
}

/// Euclidean coordinates in the model used by root_systems: eᵢ ± eⱼ or a
/// ±1 vector.
pub fn e8_coordinates(g: &LatticeVector) -> Vec<i64> {
    let simple = e8_simple_roots_doubled();
    let mut x = vec![0i64; 8];
    for (n, s) in g.coords.iter().zip(&simple) {
        for k in 0..8 {
            x[k] += n * s[k];
        }
    }
    if x.iter().all(|t| t % 2 == 0) {
        x.iter_mut().for_each(|t| *t /= 2);
    }
    x
}

pub fn e8_frame_partition() -> Result<E8Frames, LatticeError> {
    let lattice = RootLattice::e8();
    let roots = enumerate_roots(&lattice)?;
    let rays = roots.rays.clone();
    let n = rays.len();
    let fail = |msg: String| LatticeError::Transfer(msg);

    let edges = lattice.edges.clone();
    let q_src = move |u: &Gf2Vector| {
        let linear = u.weight() % 2 == 1;
        edges.iter().fold(linear, |acc, &(i, j)| acc ^ (u.get(i) && u.get(j)))
    };
    let source = BilinearFormSpace::quadratic_from_fn(8, &q_src)?;
    let model = FieldModel::new(4)?;
    let field = model.field();
    let q_tgt = |p: &Gf2Vector| {
        let p = p.to_u64() as u32;
        field.trace_raw(field.mul_raw(p & 15, p >> 4)) == 1
    };
    let target = BilinearFormSpace::quadratic_from_fn(8, q_tgt)?;
    let singular_count = source.singular_count()?;

    let images: Vec<u32> = rays.iter().map(LatticeVector::parity).collect();
    let distinct: BTreeSet<u32> = images.iter().copied().collect();
    if distinct.len() != n {
        return Err(fail(format!("{} rays reduce to {} classes", n, distinct.len())));
    }
    let non_singular: BTreeSet<u32> = (1u32..256)
        .filter(|&b| q_src(&Gf2Vector::from_u64(b as u64, 8)))
        .collect();
    if distinct != non_singular {
        return Err(fail("ray images are not the q = 1 points".into()));
    }
    for a in 0..n {
        for b in a + 1..n {
            let orth = lattice.inner(&rays[a], &rays[b]) == 0;
            let b_zero = !source.form(
                &Gf2Vector::from_u64(images[a] as u64, 8),
                &Gf2Vector::from_u64(images[b] as u64, 8),
            );
            if orth != b_zero {
                return Err(fail(format!("rays {a} and {b}: orthogonality differs from B")));
            }
        }
    }

    let isometry = witt_isometry(&source, &target)?;
    let field_points: Vec<u32> = images
        .iter()
        .map(|&u| {
            isometry
                .mul_vec(&Gf2Vector::from_u64(u as u64, 8))
                .map(|v| v.to_u64() as u32)
        })
        .collect::<Result<_, _>>()?;
    let by_point: HashMap<u32, usize> = field_points.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let mut cells = Vec::with_capacity(15);
    for a in 1..16u32 {
        let mut cell = Vec::with_capacity(8);
        for x in 1..16u32 {
            if field.trace_raw(field.mul_raw(a, field.mul_raw(x, x))) == 1 {
                let p = model.pack(x, field.mul_raw(a, x));
                cell.push(*by_point.get(&p).ok_or_else(|| fail(format!("point {p:#x} has no ray")))?);
            }
        }
        cell.sort_unstable();
        cells.push(cell);
    }

    let labels = rays.iter().map(|r| format!("{:?}", r.coords)).collect();
    let graph = Graph::from_fn(labels, |a, b| lattice.inner(&rays[a], &rays[b]) == 0)
        .expect("rays are distinct");

    let coords = build_root_graph(RootSystem::E8)?;
    let coordinate_index = rays
        .iter()
        .map(|r| {
            let x = e8_coordinates(r);
            coords
                .index_of(&x)
                .ok_or_else(|| fail(format!("{x:?} is not an E₈ coordinate ray")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(E8Frames {
        lattice,
        roots: roots.roots.len(),
        rays,
        graph,
        images,
        singular_count,
        isometry,
        field_points,
        partition: CliquePartition::new(cells),
        coordinate_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::verify_clique_partition;
    use crate::symplectic::build_sp_graph;

    #[test]
    fn gram_matrices() {
        for l in [RootLattice::e7(), RootLattice::e8()] {
            assert!(l.is_positive_definite());
            for i in 0..l.rank {
                assert_eq!(l.gram[i][i], 2);
                for j in 0..l.rank {
                    assert_eq!(l.gram[i][j], l.gram[j][i]);
                }
            }
        }
        assert_eq!(RootLattice::e8().gram[6][7], -1);
    }

    #[test]
    fn root_counts() {
        let e7 = enumerate_roots(&RootLattice::e7()).unwrap();
        assert_eq!((e7.roots.len(), e7.rays.len()), (126, 63));
        let e8 = enumerate_roots(&RootLattice::e8()).unwrap();
        assert_eq!((e8.roots.len(), e8.rays.len()), (240, 120));
        // each ray's negative is the other root of the pair
        let all: BTreeSet<_> = e7.roots.iter().cloned().collect();
        assert!(e7.rays.iter().all(|r| all.contains(&r.neg())));
    }

    #[test]
    fn orbit_cap_is_enforced() {
        assert!(matches!(
            enumerate_roots_with_cap(&RootLattice::e7(), 50),
            Err(LatticeError::OrbitCap(50))
        ));
        let a3 = RootLattice::from_dynkin(3, &[(1, 2), (2, 3)]);
        assert!(matches!(enumerate_roots(&a3), Err(LatticeError::UnsupportedRank(3))));
    }

    #[test]
    fn kappa_constraints() {
        let k = construct_kappa_e7().unwrap();
        let l = RootLattice::e7();
        for i in 0..7 {
            assert!(!sigma_packed(k.v[i], k.v[i], 3));
            for j in 0..7 {
                if l.gram[i][j] == 0 {
                    assert!(!sigma_packed(k.v[i], k.v[j], 3));
                }
            }
        }
        assert_eq!(k.apply_packed(&LatticeVector::new(E7_W.to_vec())), 0);
    }

    #[test]
    fn kappa_report_passes() {
        let l = RootLattice::e7();
        let roots = enumerate_roots(&l).unwrap();
        let k = construct_kappa_e7().unwrap();
        let report = verify_kappa_bijection(&l, &roots, &k);
        assert!(report.passed(), "{report:?}");
        assert_eq!((report.w_norm, report.w_r), (6, 3));
    }

    #[test]
    fn broken_kappa_reports_witness() {
        let l = RootLattice::e7();
        let roots = enumerate_roots(&l).unwrap();
        let mut k = construct_kappa_e7().unwrap();
        k.v[0] = k.v[1];
        let report = verify_kappa_bijection(&l, &roots, &k);
        assert!(!report.passed());
        let c = report.check("equal_images_iff_antipodal").unwrap();
        assert!(!c.passed && c.witness.is_some());
    }

    #[test]
    fn representation_of_sp6() {
        let rep = orthonormal_representation().unwrap();
        let sp = build_sp_graph(3).unwrap();
        for u in 0..63 {
            assert_eq!(rep.inner(u, u), 2);
            for v in u + 1..63 {
                assert_eq!(sp.graph().is_adjacent(u, v), rep.inner(u, v) == 0);
            }
        }
        assert!(rep.max_drift < 1e-9);
        for x in &rep.real {
            let n: f64 = x.iter().map(|t| t * t).sum();
            assert!((n - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn spread_cells_are_orthogonal_frames() {
        let rep = orthonormal_representation().unwrap();
        let spread = spread_partition(3).unwrap();
        for cell in &spread.cells.cells {
            assert_eq!(cell.len(), rep.dim());
            for (a, &u) in cell.iter().enumerate() {
                for &v in &cell[a + 1..] {
                    assert_eq!(rep.inner(u, v), 0);
                }
            }
        }
    }

    #[test]
    fn table_exports() {
        let rep = orthonormal_representation().unwrap();
        let rows = representation_table(&rep).unwrap();
        assert_eq!(rows.len(), 63);
        assert_eq!(rows.iter().filter(|r| r.frame == 9).count(), 7);
        let csv = table_to_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 64);
        let json: serde_json::Value = serde_json::from_str(&table_to_json(&rows)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 63);
    }

    #[test]
    fn e8_frames() {
        let e8 = e8_frame_partition().unwrap();
        assert_eq!(e8.roots, 240);
        assert_eq!(e8.singular_count, 135);
        assert_eq!(verify_clique_partition(&e8.graph, &e8.partition, 15, 8), Ok(()));
        for cell in &e8.partition.cells {
            for (a, &u) in cell.iter().enumerate() {
                for &v in &cell[a + 1..] {
                    assert_eq!(e8.lattice.inner(&e8.rays[u], &e8.rays[v]), 0);
                }
            }
        }
    }

    #[test]
    fn e8_coordinates_match_coordinate_model() {
        let e8 = e8_frame_partition().unwrap();
        let coords = build_root_graph(RootSystem::E8).unwrap();
        let mut seen = e8.coordinate_index.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 120);
        for a in 0..120 {
            for b in 0..120 {
                assert_eq!(
                    e8.graph.is_adjacent(a, b),
                    coords.graph.is_adjacent(e8.coordinate_index[a], e8.coordinate_index[b])
                );
            }
        }
    }
}
