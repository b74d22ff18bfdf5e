//! Symplectic graphs Sp(2m, F₂): nonzero vectors of F₂^{2m}, adjacent when
//! the canonical symplectic form vanishes.
//!
//! Vertex `i` is the vector whose packed value is `i + 1`, with coordinate
//! `j` stored in bit `j`. Two explicit isomorphisms of symplectic spaces
//! are fixed here:
//!
//! * [`FieldModel`] identifies (F_N², Tr(wz + xy)) with (F₂^{2m}, σ), which
//!   carries the spread cells {(x, ax)} over to the canonical graph;
//! * [`EvenWeightModel`] identifies (F₂^{2m}, σ) with the even-weight
//!   vectors U_m ⊂ F₂^{2m+1} under the dot product, which yields both the
//!   rank-(2m+1) fitting matrix and the (2m+1)-point independent set.
//!
//! Both are built by matching symplectic bases found with lowest-index
//! pivoting, so every construction is reproducible bit for bit.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    sigma_packed, symplectic_basis, AlgebraError, BilinearFormSpace, FieldElement, GaloisField,
    Gf2Matrix, Gf2Vector, SymplecticBasis,
};
use crate::graphs::{CliquePartition, Graph};

pub const MAX_M: u32 = 4;

#[derive(Debug, Error)]
pub enum SymplecticError {
    #[error("m = {0} is outside the supported range 1..=4")]
    MOutOfRange(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn check_m(m: u32) -> Result<(), SymplecticError> {
    if (1..=MAX_M).contains(&m) {
        Ok(())
    } else {
        Err(SymplecticError::MOutOfRange(m))
    }
}

/// The graph Sp(2m, F₂).
#[derive(Clone, Debug)]
pub struct SymplecticGraph {
    m: u32,
    graph: Graph,
}

impl SymplecticGraph {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// Packed vector of vertex `v`.
    pub fn packed(&self, v: usize) -> u32 {
        v as u32 + 1
    }

    /// Vertex index of a nonzero packed vector.
    pub fn vertex_of(&self, packed: u32) -> usize {
        assert!(packed != 0 && packed < 1 << (2 * self.m), "not a vertex: {packed}");
        packed as usize - 1
    }

    pub fn vector(&self, v: usize) -> Gf2Vector {
        Gf2Vector::from_u64(self.packed(v) as u64, 2 * self.m as usize)
    }

    /// m-qubit Pauli string of vertex `v`; commuting strings are adjacent.
    pub fn pauli_label(&self, v: usize) -> String {
        pauli_string(self.packed(v), self.m)
    }
}

/// Pauli string for a packed vector: qubit i has X-part bit i and Z-part
/// bit m+i.
pub fn pauli_string(packed: u32, m: u32) -> String {
    (0..m)
        .map(|i| match ((packed >> i) & 1, (packed >> (m + i)) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        })
        .collect()
}

/// Bit-string label, coordinates e₁..e_{2m} left to right.
pub fn bit_label(packed: u32, m: u32) -> String {
    (0..2 * m)
        .map(|j| if (packed >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn build_sp_graph(m: u32) -> Result<SymplecticGraph, SymplecticError> {
    check_m(m)?;
    let n = (1usize << (2 * m)) - 1;
    let labels = (1..=n as u32).map(|p| bit_label(p, m)).collect();
    let graph = Graph::from_fn(labels, |i, j| !sigma_packed(i as u32 + 1, j as u32 + 1, m))
        .expect("bit-string labels are distinct");
    Ok(SymplecticGraph { m, graph })
}

/// (F_N², σ_N) in polynomial-basis coordinates, with a fixed symplectic
/// isomorphism onto (F₂^{2m}, σ).
///
/// A point (x, y) packs as `x | y << m`.
#[derive(Clone, Debug)]
pub struct FieldModel {
    m: u32,
    field: GaloisField,
    space: BilinearFormSpace,
    basis: SymplecticBasis,
}

impl FieldModel {
    pub fn new(m: u32) -> Result<Self, SymplecticError> {
        check_m(m)?;
        let field = GaloisField::standard(m)?;
        let n = 2 * m as usize;
        let gram = Gf2Matrix::from_fn(n, n, |i, j| {
            field_sigma(&field, 1 << i, 1 << j, m)
        });
        let space = BilinearFormSpace::symplectic(gram)?;
        let basis = symplectic_basis(&space)?;
        Ok(Self {
            m,
            field,
            space,
            basis,
        })
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    /// σ_N on packed field points.
    pub fn sigma(&self, p: u32, q: u32) -> bool {
        field_sigma(&self.field, p, q, self.m)
    }

    pub fn pack(&self, x: u32, y: u32) -> u32 {
        x | (y << self.m)
    }

    pub fn unpack(&self, p: u32) -> (FieldElement, FieldElement) {
        let mask = (1 << self.m) - 1;
        (
            self.field.element(p & mask).expect("reduced"),
            self.field.element((p >> self.m) & mask).expect("reduced"),
        )
    }

    /// Field point ↦ canonical vector.
    pub fn to_canonical(&self, p: u32) -> u32 {
        let v = Gf2Vector::from_u64(p as u64, 2 * self.m as usize);
        self.basis.coordinates(&self.space, &v).to_u64() as u32
    }

    /// Canonical vector ↦ field point.
    pub fn from_canonical(&self, c: u32) -> u32 {
        let coords = Gf2Vector::from_u64(c as u64, 2 * self.m as usize);
        self.basis.vector(&coords).to_u64() as u32
    }
}

fn field_sigma(field: &GaloisField, p: u32, q: u32, m: u32) -> bool {
    let mask = (1 << m) - 1;
    let (w, x) = (p & mask, (p >> m) & mask);
    let (y, z) = (q & mask, (q >> m) & mask);
    field.trace_raw(field.mul_raw(w, z) ^ field.mul_raw(x, y)) == 1
}

/// Label of a spread cell: π_a for a ∈ F_N, or the vertical cell π_∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpreadCell {
    Slope(u32),
    Vertical,
}

/// Partition of Sp(2m, F₂) into 2^m + 1 cliques of size 2^m − 1.
#[derive(Clone, Debug)]
pub struct Spread {
    pub m: u32,
    pub cells: CliquePartition,
    pub cell_labels: Vec<SpreadCell>,
    /// Field coordinates (x, y) of every vertex.
    pub field_model: Vec<(FieldElement, FieldElement)>,
}

/// Cells π_a = {(x, ax) : x ≠ 0} for a ∈ F_N and π_∞ = {(0, x) : x ≠ 0},
/// carried to canonical coordinates.
pub fn spread_partition(m: u32) -> Result<Spread, SymplecticError> {
    let model = FieldModel::new(m)?;
    let q = 1u32 << m;
    let to_vertex = |p: u32| model.to_canonical(p) as usize - 1;
    let mut cells = Vec::with_capacity(q as usize + 1);
    let mut cell_labels = Vec::with_capacity(q as usize + 1);
    for a in 0..q {
        let mut cell: Vec<usize> = (1..q)
            .map(|x| to_vertex(model.pack(x, model.field.mul_raw(a, x))))
            .collect();
        cell.sort_unstable();
        cells.push(cell);
        cell_labels.push(SpreadCell::Slope(a));
    }
    let mut vertical: Vec<usize> = (1..q).map(|x| to_vertex(model.pack(0, x))).collect();
    vertical.sort_unstable();
    cells.push(vertical);
    cell_labels.push(SpreadCell::Vertical);

    let n = (1usize << (2 * m)) - 1;
    let field_model = (0..n)
        .map(|v| model.unpack(model.from_canonical(v as u32 + 1)))
        .collect();
    Ok(Spread {
        m,
        cells: CliquePartition::new(cells),
        cell_labels,
        field_model,
    })
}

/// (F₂^{2m}, σ) ≅ (U_m, ·) where U_m is the even-weight subspace of
/// F₂^{2m+1}.
#[derive(Clone, Debug)]
pub struct EvenWeightModel {
    m: u32,
    space: BilinearFormSpace,
    basis: SymplecticBasis,
}

impl EvenWeightModel {
    pub fn new(m: u32) -> Result<Self, SymplecticError> {
        check_m(m)?;
        let n = 2 * m as usize + 1;
        let span = (1..n)
            .map(|i| Gf2Vector::unit(n, 0).xor(&Gf2Vector::unit(n, i)))
            .collect();
        let space = BilinearFormSpace::symplectic_subspace(Gf2Matrix::identity(n), span)?;
        let basis = symplectic_basis(&space)?;
        Ok(Self { m, space, basis })
    }

    /// T(u) ∈ U_m for a packed canonical vector u.
    pub fn forward(&self, u: u32) -> Gf2Vector {
        let coords = Gf2Vector::from_u64(u as u64, 2 * self.m as usize);
        self.basis.vector(&coords)
    }

    /// T⁻¹(f) for f ∈ U_m, packed.
    pub fn inverse(&self, f: &Gf2Vector) -> u32 {
        self.basis.coordinates(&self.space, f).to_u64() as u32
    }
}

/// M_{uv} = ⟨1 + T(u), 1 + T(v)⟩ over all vertices u, v of Sp(2m, F₂);
/// equals 1 + σ(u, v).
pub fn fitting_matrix(m: u32) -> Result<Gf2Matrix, SymplecticError> {
    let model = EvenWeightModel::new(m)?;
    let n = (1usize << (2 * m)) - 1;
    let ones = Gf2Vector::ones(2 * m as usize + 1);
    let lifted: Vec<Gf2Vector> = (1..=n as u32)
        .map(|u| model.forward(u).xor(&ones))
        .collect();
    Ok(Gf2Matrix::from_fn(n, n, |u, v| lifted[u].dot(&lifted[v])))
}

/// T⁻¹(eᵢ + 1) for i = 1..2m+1, as vertex indices of Sp(2m, F₂).
pub fn canonical_independent_set(m: u32) -> Result<Vec<usize>, SymplecticError> {
    let model = EvenWeightModel::new(m)?;
    let n = 2 * m as usize + 1;
    let ones = Gf2Vector::ones(n);
    Ok((0..n)
        .map(|i| model.inverse(&Gf2Vector::unit(n, i).xor(&ones)) as usize - 1)
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub m: u32,
    pub vertex_count: usize,
    pub orbit_size: usize,
    pub generators: usize,
    /// Every transvection preserved σ on the checked pairs.
    pub form_preserved: bool,
    pub pairs_checked: usize,
    pub transitive: bool,
}

/// Orbit of e₁ under the transvections x ↦ x + σ(x, v)·v, v ≠ 0.
pub fn verify_vertex_transitive(m: u32) -> Result<TransitivityReport, SymplecticError> {
    check_m(m)?;
    let n = (1u32 << (2 * m)) - 1;
    let transvect = |x: u32, v: u32| if sigma_packed(x, v, m) { x ^ v } else { x };

    // exhaustive for m ≤ 3; every 7th pair for m = 4
    let stride = if m <= 3 { 1 } else { 7 };
    let mut form_preserved = true;
    let mut pairs_checked = 0;
    for v in 1..=n {
        let mut k = 0usize;
        for x in 1..=n {
            for y in x..=n {
                k += 1;
                if !k.is_multiple_of(stride) {
                    continue;
                }
                pairs_checked += 1;
                if sigma_packed(transvect(x, v), transvect(y, v), m) != sigma_packed(x, y, m) {
                    form_preserved = false;
                }
            }
        }
    }

    let mut seen = vec![false; n as usize + 1];
    let mut queue = VecDeque::from([1u32]);
    seen[1] = true;
    let mut orbit_size = 1;
    while let Some(x) = queue.pop_front() {
        for v in 1..=n {
            let y = transvect(x, v);
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit_size += 1;
                queue.push_back(y);
            }
        }
    }
    Ok(TransitivityReport {
        m,
        vertex_count: n as usize,
        orbit_size,
        generators: n as usize,
        form_preserved,
        pairs_checked,
        transitive: orbit_size == n as usize && form_preserved,
    })
}

/// Finite certificate for C₀(Sp(2m, F₂)) = log₂(2m + 1).
#[derive(Clone, Debug, Serialize)]
pub struct SpCertificate {
    pub m: u32,
    /// Size of the explicit independent set, checked pairwise.
    pub alpha_lower: usize,
    /// GF(2) rank of the fitting matrix.
    pub rank_upper: usize,
    pub equal: bool,
    pub capacity_log2: f64,
    pub independent_set: Vec<usize>,
}

pub fn capacity_certificate_sp(m: u32) -> Result<SpCertificate, SymplecticError> {
    let sp = build_sp_graph(m)?;
    let set = canonical_independent_set(m)?;
    let alpha_lower = if sp.graph().is_independent(&set) {
        set.len()
    } else {
        0
    };
    let rank_upper = fitting_matrix(m)?.rank();
    Ok(SpCertificate {
        m,
        alpha_lower,
        rank_upper,
        equal: alpha_lower == rank_upper,
        capacity_log2: (rank_upper as f64).log2(),
        independent_set: set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{independence_number, verify_clique_partition};

    #[test]
    fn range_is_checked() {
        assert!(matches!(build_sp_graph(0), Err(SymplecticError::MOutOfRange(0))));
        assert!(matches!(build_sp_graph(5), Err(SymplecticError::MOutOfRange(5))));
    }

    #[test]
    fn sp2_is_edgeless_triangle() {
        let sp = build_sp_graph(1).unwrap();
        assert_eq!(sp.vertex_count(), 3);
        assert_eq!(sp.graph().edge_count(), 0);
    }

    #[test]
    fn sp6_counts() {
        let sp = build_sp_graph(3).unwrap();
        assert_eq!(sp.vertex_count(), 63);
        // |{v ≠ 0 : σ(x, v) = 0}| − 1 = 2^{2m−1} − 2
        for v in 0..63 {
            assert_eq!(sp.graph().degree(v), 30);
        }
    }

    #[test]
    fn pauli_labels_commute_exactly_on_edges() {
        let sp = build_sp_graph(2).unwrap();
        assert_eq!(sp.pauli_label(0), "XI");
        assert_eq!(sp.pauli_label(sp.vertex_of(0b0100)), "ZI");
        assert_eq!(sp.pauli_label(sp.vertex_of(0b0101)), "YI");
        let anticommute = |a: char, b: char| a != 'I' && b != 'I' && a != b;
        for u in 0..15 {
            for v in u + 1..15 {
                let (pu, pv) = (sp.pauli_label(u), sp.pauli_label(v));
                let odd = pu
                    .chars()
                    .zip(pv.chars())
                    .filter(|&(a, b)| anticommute(a, b))
                    .count()
                    % 2
                    == 1;
                assert_eq!(sp.graph().is_adjacent(u, v), !odd);
            }
        }
    }

    #[test]
    fn field_model_is_a_symplectic_isomorphism() {
        for m in 1..=4 {
            let model = FieldModel::new(m).unwrap();
            let n = 1u32 << (2 * m);
            let mut seen = vec![false; n as usize];
            for p in 0..n {
                let c = model.to_canonical(p);
                assert_eq!(model.from_canonical(c), p);
                assert!(!std::mem::replace(&mut seen[c as usize], true));
            }
            let step = if m == 4 { 5 } else { 1 };
            for p in (0..n).step_by(step) {
                for q in 0..n {
                    assert_eq!(
                        sigma_packed(model.to_canonical(p), model.to_canonical(q), m),
                        model.sigma(p, q)
                    );
                }
            }
        }
    }

    #[test]
    fn field_sigma_matches_trace_definition() {
        let model = FieldModel::new(3).unwrap();
        for p in 0..64 {
            for q in 0..64 {
                let expect = crate::algebra::sigma_n(model.unpack(p), model.unpack(q)).unwrap();
                assert_eq!(model.sigma(p, q), expect);
            }
        }
    }

    #[test]
    fn spreads_partition_into_cliques() {
        for m in 1..=4 {
            let sp = build_sp_graph(m).unwrap();
            let spread = spread_partition(m).unwrap();
            let k = (1 << m) + 1;
            let d = (1 << m) - 1;
            assert_eq!(verify_clique_partition(sp.graph(), &spread.cells, k, d), Ok(()));
            assert_eq!(spread.cell_labels.last(), Some(&SpreadCell::Vertical));
        }
    }

    #[test]
    fn spread_field_coordinates_match_cells() {
        let spread = spread_partition(3).unwrap();
        for (cell, label) in spread.cells.cells.iter().zip(&spread.cell_labels) {
            for &v in cell {
                let (x, y) = spread.field_model[v];
                match label {
                    SpreadCell::Slope(a) => {
                        let a = x.field().element(*a).unwrap();
                        assert!(!x.is_zero());
                        assert_eq!(a.mul(&x).unwrap(), y);
                    }
                    SpreadCell::Vertical => assert!(x.is_zero() && !y.is_zero()),
                }
            }
        }
    }

    #[test]
    fn fitting_matrix_equals_one_plus_sigma() {
        for m in 1..=3 {
            let sp = build_sp_graph(m).unwrap();
            let fit = fitting_matrix(m).unwrap();
            let n = sp.vertex_count();
            for u in 0..n {
                for v in 0..n {
                    let sigma = sigma_packed(sp.packed(u), sp.packed(v), m);
                    assert_eq!(fit.get(u, v), !sigma);
                    // zero exactly on non-edges
                    assert_eq!(!fit.get(u, v), u != v && !sp.graph().is_adjacent(u, v));
                }
            }
        }
    }

    #[test]
    fn independent_sets_are_pairwise_non_orthogonal() {
        for m in 1..=4 {
            let set = canonical_independent_set(m).unwrap();
            assert_eq!(set.len(), 2 * m as usize + 1);
            for (a, &u) in set.iter().enumerate() {
                for &v in &set[a + 1..] {
                    assert!(sigma_packed(u as u32 + 1, v as u32 + 1, m));
                }
            }
        }
        let mut all = canonical_independent_set(1).unwrap();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn transitivity() {
        let r = verify_vertex_transitive(3).unwrap();
        assert_eq!((r.orbit_size, r.transitive), (63, true));
        let r = verify_vertex_transitive(1).unwrap();
        assert_eq!((r.orbit_size, r.transitive), (3, true));
    }

    #[test]
    fn certificates_small_m() {
        for (m, expect) in [(1, 3), (2, 5), (3, 7)] {
            let c = capacity_certificate_sp(m).unwrap();
            assert_eq!((c.alpha_lower, c.rank_upper, c.equal), (expect, expect, true));
        }
    }

    #[test]
    fn search_confirms_alpha() {
        for m in 1..=3 {
            let sp = build_sp_graph(m).unwrap();
            let fit = fitting_matrix(m).unwrap();
            let alpha = independence_number(sp.graph()).unwrap();
            assert_eq!(alpha, 2 * m as usize + 1);
            assert!(alpha <= fit.rank());
        }
    }
}
