//! Symplectic and quadratic forms over GF(2): the canonical form, the
//! trace form on GF(2^m)², symplectic bases and isometries between
//! equivalent quadratic spaces.

use serde::Serialize;

use super::field::FieldElement;
use super::gf2::{independent_subset, Gf2Matrix, Gf2Vector};
use super::AlgebraError;

/// Largest dimension for which exhaustive point counts are attempted.
pub const MAX_EXHAUSTIVE_DIM: usize = 16;

/// σ(u, v) = Σᵢ uᵢ v_{m+i} + u_{m+i} vᵢ on vectors of length 2m.
pub fn canonical_sigma(u: &Gf2Vector, v: &Gf2Vector) -> Result<bool, AlgebraError> {
    if u.len() != v.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    if !u.len().is_multiple_of(2) || u.is_empty() {
        return Err(AlgebraError::OddDimension(u.len()));
    }
    let m = u.len() / 2;
    let mut acc = false;
    for i in 0..m {
        acc ^= (u.get(i) && v.get(m + i)) ^ (u.get(m + i) && v.get(i));
    }
    Ok(acc)
}

/// Packed variant of [`canonical_sigma`]: coordinate `i` is bit `i`.
#[inline]
pub fn sigma_packed(u: u32, v: u32, m: u32) -> bool {
    let mask = (1u32 << m) - 1;
    let lo = |x: u32| x & mask;
    let hi = |x: u32| (x >> m) & mask;
    ((lo(u) & hi(v)) ^ (hi(u) & lo(v))).count_ones() & 1 == 1
}

/// σ_N((w,x),(y,z)) = Tr(wz + xy) on GF(2^m)².
pub fn sigma_n(
    p: (FieldElement, FieldElement),
    q: (FieldElement, FieldElement),
) -> Result<bool, AlgebraError> {
    let (w, x) = p;
    let (y, z) = q;
    let s = w.mul(&z)?.add(&x.mul(&y)?)?;
    Ok(s.trace() == 1)
}

/// Whether a space carries only a bilinear form or a quadratic form too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormKind {
    Symplectic,
    /// q(v) = Σ diagonalᵢ vᵢ + Σ_{i<j} gramᵢⱼ vᵢ vⱼ.
    Quadratic { diagonal: Gf2Vector },
}

/// A subspace of GF(2)^n spanned by `basis`, carrying the ambient form `gram`.
#[derive(Clone, Debug)]
pub struct BilinearFormSpace {
    gram: Gf2Matrix,
    basis: Vec<Gf2Vector>,
    kind: FormKind,
}

impl BilinearFormSpace {
    /// The whole of GF(2)^n with an alternating form.
    pub fn symplectic(gram: Gf2Matrix) -> Result<Self, AlgebraError> {
        let n = gram.rows();
        let basis = (0..n).map(|i| Gf2Vector::unit(n, i)).collect();
        Self::symplectic_subspace(gram, basis)
    }

    /// A subspace of GF(2)^n spanned by independent vectors. The ambient
    /// form only needs to be symmetric; it must vanish on the diagonal of
    /// the subspace.
    pub fn symplectic_subspace(
        gram: Gf2Matrix,
        basis: Vec<Gf2Vector>,
    ) -> Result<Self, AlgebraError> {
        check_symmetric(&gram)?;
        if let Some(bad) = basis.iter().find(|b| b.len() != gram.rows()) {
            return Err(AlgebraError::DimensionMismatch {
                expected: gram.rows(),
                found: bad.len(),
            });
        }
        if independent_subset(&basis).len() != basis.len() {
            return Err(AlgebraError::DependentBasis);
        }
        let space = Self {
            gram,
            basis,
            kind: FormKind::Symplectic,
        };
        if let Some(i) = (0..space.dim()).find(|&i| space.form(&space.basis[i], &space.basis[i])) {
            return Err(AlgebraError::NotAlternating { row: i, col: i });
        }
        Ok(space)
    }

    /// A quadratic space on GF(2)^n given by its polarization and diagonal.
    pub fn quadratic(gram: Gf2Matrix, diagonal: Gf2Vector) -> Result<Self, AlgebraError> {
        check_alternating(&gram)?;
        let n = gram.rows();
        if diagonal.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: diagonal.len(),
            });
        }
        Ok(Self {
            gram,
            basis: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
            kind: FormKind::Quadratic { diagonal },
        })
    }

    /// Recovers a quadratic space from a value function, and checks
    /// exhaustively that `q` really is quadratic.
    pub fn quadratic_from_fn(
        dim: usize,
        q: impl Fn(&Gf2Vector) -> bool,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 || dim > MAX_EXHAUSTIVE_DIM {
            return Err(AlgebraError::TooLarge(dim));
        }
        let e = |i| Gf2Vector::unit(dim, i);
        let diagonal = Gf2Vector::from_bits(
            &(0..dim).map(|i| q(&e(i)) as u8).collect::<Vec<_>>(),
        )?;
        let gram = Gf2Matrix::from_fn(dim, dim, |i, j| {
            i != j && (q(&e(i).xor(&e(j))) ^ q(&e(i)) ^ q(&e(j)))
        });
        let space = Self::quadratic(gram, diagonal)?;
        for bits in 0..1u64 << dim {
            let v = Gf2Vector::from_u64(bits, dim);
            if space.quadratic_value(&v) != Some(q(&v)) {
                return Err(AlgebraError::NotQuadratic(v));
            }
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Gf2Matrix {
        &self.gram
    }

    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    pub fn kind(&self) -> &FormKind {
        &self.kind
    }

    /// uᵀ G v.
    pub fn form(&self, u: &Gf2Vector, v: &Gf2Vector) -> bool {
        self.gram
            .mul_vec(v)
            .expect("vector length matches ambient dimension")
            .dot(u)
    }

    /// Value of the quadratic form, if the space has one.
    pub fn quadratic_value(&self, v: &Gf2Vector) -> Option<bool> {
        let FormKind::Quadratic { diagonal } = &self.kind else {
            return None;
        };
        let mut acc = diagonal.dot(v);
        let ones: Vec<usize> = v.ones_iter().collect();
        for (a, &i) in ones.iter().enumerate() {
            for &j in &ones[a + 1..] {
                acc ^= self.gram.get(i, j);
            }
        }
        Some(acc)
    }

    /// Number of nonzero singular vectors (q = 0) in a quadratic space.
    pub fn singular_count(&self) -> Result<usize, AlgebraError> {
        if !matches!(self.kind, FormKind::Quadratic { .. }) {
            return Err(AlgebraError::NotQuadraticSpace);
        }
        let n = self.dim();
        if n > MAX_EXHAUSTIVE_DIM {
            return Err(AlgebraError::TooLarge(n));
        }
        Ok((1..1u64 << n)
            .filter(|&bits| {
                let v = self.combine(bits);
                self.quadratic_value(&v) == Some(false)
            })
            .count())
    }

    /// Σ bitsᵢ · basisᵢ.
    fn combine(&self, bits: u64) -> Gf2Vector {
        combine(&self.basis, bits, self.ambient_dim())
    }
}

fn combine(basis: &[Gf2Vector], bits: u64, n: usize) -> Gf2Vector {
    let mut v = Gf2Vector::zeros(n);
    for (i, b) in basis.iter().enumerate() {
        if (bits >> i) & 1 == 1 {
            v.xor_assign(b);
        }
    }
    v
}

fn check_alternating(gram: &Gf2Matrix) -> Result<(), AlgebraError> {
    check_symmetric(gram)?;
    match (0..gram.rows()).find(|&i| gram.get(i, i)) {
        Some(i) => Err(AlgebraError::NotAlternating { row: i, col: i }),
        None => Ok(()),
    }
}

fn check_symmetric(gram: &Gf2Matrix) -> Result<(), AlgebraError> {
    if gram.rows() != gram.cols() || gram.rows() == 0 {
        return Err(AlgebraError::DimensionMismatch {
            expected: gram.rows(),
            found: gram.cols(),
        });
    }
    for i in 0..gram.rows() {
        for j in 0..i {
            if gram.get(i, j) != gram.get(j, i) {
                return Err(AlgebraError::NotAlternating { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// A basis (a₁..a_m, b₁..b_m) with form(aᵢ, bⱼ) = δᵢⱼ and all other
/// pairings zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticBasis {
    pub a: Vec<Gf2Vector>,
    pub b: Vec<Gf2Vector>,
}

impl SymplecticBasis {
    pub fn half_dim(&self) -> usize {
        self.a.len()
    }

    /// Basis in the order a₁..a_m, b₁..b_m.
    pub fn ordered(&self) -> Vec<Gf2Vector> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    /// Coordinates of `v` in this basis, read off with the form:
    /// the aᵢ-coefficient is form(v, bᵢ), the bᵢ-coefficient form(aᵢ, v).
    pub fn coordinates(&self, space: &BilinearFormSpace, v: &Gf2Vector) -> Gf2Vector {
        let m = self.half_dim();
        let mut c = Gf2Vector::zeros(2 * m);
        for i in 0..m {
            c.set(i, space.form(v, &self.b[i]));
            c.set(m + i, space.form(&self.a[i], v));
        }
        c
    }

    /// Σ cᵢ aᵢ + Σ c_{m+i} bᵢ.
    pub fn vector(&self, coords: &Gf2Vector) -> Gf2Vector {
        let m = self.half_dim();
        let n = self.a.first().map_or(0, Gf2Vector::len);
        let mut v = Gf2Vector::zeros(n);
        for i in 0..m {
            if coords.get(i) {
                v.xor_assign(&self.a[i]);
            }
            if coords.get(m + i) {
                v.xor_assign(&self.b[i]);
            }
        }
        v
    }
}

/// Symplectic basis by lowest-index pivoting: take the first remaining
/// vector, pair it with the first remaining vector it pairs to 1, and
/// project the rest onto the orthogonal complement of the pair.
pub fn symplectic_basis(space: &BilinearFormSpace) -> Result<SymplecticBasis, AlgebraError> {
    let mut remaining: Vec<Gf2Vector> = space.basis().to_vec();
    let mut a = Vec::new();
    let mut b = Vec::new();
    while !remaining.is_empty() {
        let first = remaining.remove(0);
        let Some(pos) = remaining.iter().position(|w| space.form(&first, w)) else {
            return Err(AlgebraError::Degenerate { witness: first });
        };
        let partner = remaining.remove(pos);
        for x in remaining.iter_mut() {
            let with_b = space.form(x, &partner);
            let with_a = space.form(x, &first);
            if with_b {
                x.xor_assign(&first);
            }
            if with_a {
                x.xor_assign(&partner);
            }
        }
        a.push(first);
        b.push(partner);
    }
    Ok(SymplecticBasis { a, b })
}

/// Hyperbolic pairs (e, f) with q(e) = q(f) = 0, plus at most one
/// trailing anisotropic pair with q(e) = q(f) = 1.
#[derive(Clone, Debug)]
struct WittDecomposition {
    pairs: Vec<(Gf2Vector, Gf2Vector)>,
    anisotropic: bool,
}

fn witt_decomposition(space: &BilinearFormSpace) -> Result<WittDecomposition, AlgebraError> {
    let q = |v: &Gf2Vector| space.quadratic_value(v).ok_or(AlgebraError::NotQuadraticSpace);
    let n = space.ambient_dim();
    let mut remaining: Vec<Gf2Vector> = space.basis().to_vec();
    let mut pairs = Vec::new();
    let mut anisotropic = false;
    while !remaining.is_empty() {
        if remaining.len() > MAX_EXHAUSTIVE_DIM {
            return Err(AlgebraError::TooLarge(remaining.len()));
        }
        let mut singular = None;
        for bits in 1..1u64 << remaining.len() {
            let v = combine(&remaining, bits, n);
            if !q(&v)? {
                singular = Some(v);
                break;
            }
        }
        let (e, f) = match singular {
            Some(e) => {
                let Some(w) = remaining.iter().find(|w| space.form(&e, w)).cloned() else {
                    return Err(AlgebraError::Degenerate { witness: e });
                };
                // q(w + c·e) = q(w) + c, so c = q(w) makes f singular.
                let f = if q(&w)? { w.xor(&e) } else { w };
                (e, f)
            }
            None => {
                if remaining.len() != 2 || anisotropic {
                    return Err(AlgebraError::Degenerate {
                        witness: remaining[0].clone(),
                    });
                }
                let (e, f) = (remaining[0].clone(), remaining[1].clone());
                if !space.form(&e, &f) {
                    return Err(AlgebraError::Degenerate { witness: e });
                }
                anisotropic = true;
                (e, f)
            }
        };
        let projected: Vec<Gf2Vector> = remaining
            .iter()
            .map(|x| {
                let mut y = x.clone();
                if space.form(x, &f) {
                    y.xor_assign(&e);
                }
                if space.form(x, &e) {
                    y.xor_assign(&f);
                }
                y
            })
            .collect();
        remaining = independent_subset(&projected);
        if anisotropic && !remaining.is_empty() {
            return Err(AlgebraError::Degenerate {
                witness: remaining[0].clone(),
            });
        }
        pairs.push((e, f));
    }
    if anisotropic {
        // keep the anisotropic plane last
        let plane = pairs.remove(0);
        pairs.push(plane);
    }
    Ok(WittDecomposition { pairs, anisotropic })
}

/// An invertible linear map `L` (acting on column vectors) with
/// q_target(L v) = q_source(v) for every v.
pub fn witt_isometry(
    source: &BilinearFormSpace,
    target: &BilinearFormSpace,
) -> Result<Gf2Matrix, AlgebraError> {
    for space in [source, target] {
        if !matches!(space.kind(), FormKind::Quadratic { .. }) {
            return Err(AlgebraError::NotQuadraticSpace);
        }
    }
    if source.dim() != target.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: source.dim(),
            found: target.dim(),
        });
    }
    if !source.dim().is_multiple_of(2) {
        return Err(AlgebraError::OddDimension(source.dim()));
    }
    let (cs, ct) = (source.singular_count()?, target.singular_count()?);
    if cs != ct {
        return Err(AlgebraError::InequivalentForms {
            source_count: cs,
            target_count: ct,
        });
    }
    let ds = witt_decomposition(source)?;
    let dt = witt_decomposition(target)?;
    if ds.anisotropic != dt.anisotropic || ds.pairs.len() != dt.pairs.len() {
        return Err(AlgebraError::InequivalentForms {
            source_count: cs,
            target_count: ct,
        });
    }
    let flatten = |d: &WittDecomposition| -> Vec<Gf2Vector> {
        d.pairs
            .iter()
            .flat_map(|(e, f)| [e.clone(), f.clone()])
            .collect()
    };
    let s = Gf2Matrix::from_columns(&flatten(&ds))?;
    let t = Gf2Matrix::from_columns(&flatten(&dt))?;
    t.mul(&s.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::GaloisField;

    fn canonical_gram(m: usize) -> Gf2Matrix {
        Gf2Matrix::from_fn(2 * m, 2 * m, |i, j| i + m == j || j + m == i)
    }

    #[test]
    fn sigma_examples() {
        let m = 3;
        let e = |i| Gf2Vector::unit(2 * m, i);
        assert!(canonical_sigma(&e(0), &e(m)).unwrap());
        let u = Gf2Vector::from_bits(&[0, 1]).unwrap();
        let v = Gf2Vector::from_bits(&[1, 1]).unwrap();
        assert!(canonical_sigma(&u, &v).unwrap());
        assert!(!canonical_sigma(&u, &u).unwrap());
    }

    #[test]
    fn sigma_rejects_bad_lengths() {
        let a = Gf2Vector::zeros(3);
        let b = Gf2Vector::zeros(4);
        assert!(matches!(
            canonical_sigma(&a, &a),
            Err(AlgebraError::OddDimension(3))
        ));
        assert!(matches!(
            canonical_sigma(&a, &b),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn packed_sigma_agrees_with_vector_sigma() {
        for m in 1..=3u32 {
            let n = 2 * m as usize;
            for u in 0..1u32 << n {
                for v in 0..1u32 << n {
                    let expect = canonical_sigma(
                        &Gf2Vector::from_u64(u as u64, n),
                        &Gf2Vector::from_u64(v as u64, n),
                    )
                    .unwrap();
                    assert_eq!(sigma_packed(u, v, m), expect);
                }
            }
        }
    }

    #[test]
    fn sigma_n_examples() {
        let f8 = GaloisField::standard(3).unwrap();
        let (zero, one) = (f8.zero(), f8.one());
        assert!(sigma_n((one, zero), (zero, one)).unwrap());
        for a in f8.elements() {
            for x in f8.elements() {
                for y in f8.elements() {
                    let p = (x, a.mul(&x).unwrap());
                    let q = (y, a.mul(&y).unwrap());
                    assert!(!sigma_n(p, q).unwrap());
                }
            }
        }
        let other = GaloisField::standard(2).unwrap().one();
        assert!(sigma_n((one, zero), (other, other)).is_err());
    }

    #[test]
    fn canonical_basis_is_returned_unchanged() {
        for m in 1..=4 {
            let space = BilinearFormSpace::symplectic(canonical_gram(m)).unwrap();
            let basis = symplectic_basis(&space).unwrap();
            let n = 2 * m;
            assert_eq!(basis.a, (0..m).map(|i| Gf2Vector::unit(n, i)).collect::<Vec<_>>());
            assert_eq!(
                basis.b,
                (0..m).map(|i| Gf2Vector::unit(n, m + i)).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn even_weight_subspace_of_f2_cubed() {
        let gram = Gf2Matrix::identity(3);
        let span = vec![
            Gf2Vector::from_bits(&[1, 1, 0]).unwrap(),
            Gf2Vector::from_bits(&[1, 0, 1]).unwrap(),
        ];
        let space = BilinearFormSpace::symplectic_subspace(gram.clone(), span.clone()).unwrap();
        let basis = symplectic_basis(&space).unwrap();
        assert_eq!(basis.a, vec![span[0].clone()]);
        assert_eq!(basis.b, vec![span[1].clone()]);
        // the dot product is not alternating on all of F2^3
        assert!(matches!(
            BilinearFormSpace::symplectic(gram),
            Err(AlgebraError::NotAlternating { .. })
        ));
    }

    #[test]
    fn degenerate_form_reports_radical_witness() {
        let gram = Gf2Matrix::from_fn(3, 3, |i, j| (i, j) == (0, 1) || (i, j) == (1, 0));
        let space = BilinearFormSpace::symplectic(gram).unwrap();
        match symplectic_basis(&space) {
            Err(AlgebraError::Degenerate { witness }) => {
                assert_eq!(witness, Gf2Vector::unit(3, 2));
                for i in 0..3 {
                    assert!(!space.form(&witness, &Gf2Vector::unit(3, i)));
                }
            }
            other => panic!("expected degenerate, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_from_fn_detects_non_quadratic_maps() {
        // q(v) = v0 v1 v2 is cubic
        let cubic = BilinearFormSpace::quadratic_from_fn(3, |v| v.get(0) && v.get(1) && v.get(2));
        assert!(matches!(cubic, Err(AlgebraError::NotQuadratic(_))));
    }

    #[test]
    fn hyperbolic_plane_swap_is_an_isometry() {
        let plane = BilinearFormSpace::quadratic_from_fn(2, |v| v.get(0) && v.get(1)).unwrap();
        let swap = Gf2Matrix::from_nested(&[vec![0, 1], vec![1, 0]]).unwrap();
        for bits in 0..4 {
            let v = Gf2Vector::from_u64(bits, 2);
            let w = swap.mul_vec(&v).unwrap();
            assert_eq!(plane.quadratic_value(&w), plane.quadratic_value(&v));
        }
        let l = witt_isometry(&plane, &plane).unwrap();
        for bits in 0..4 {
            let v = Gf2Vector::from_u64(bits, 2);
            let w = l.mul_vec(&v).unwrap();
            assert_eq!(plane.quadratic_value(&w), plane.quadratic_value(&v));
        }
    }

    #[test]
    fn inequivalent_forms_report_both_counts() {
        // hyperbolic plane xy vs anisotropic plane x² + xy + y²
        let hyp = BilinearFormSpace::quadratic_from_fn(2, |v| v.get(0) && v.get(1)).unwrap();
        let aniso = BilinearFormSpace::quadratic_from_fn(2, |v| {
            v.get(0) ^ v.get(1) ^ (v.get(0) && v.get(1))
        })
        .unwrap();
        match witt_isometry(&hyp, &aniso) {
            Err(AlgebraError::InequivalentForms {
                source_count,
                target_count,
            }) => {
                assert_eq!((source_count, target_count), (2, 0));
            }
            other => panic!("expected inequivalent, got {other:?}"),
        }
    }

    #[test]
    fn anisotropic_spaces_of_dim_four_are_matched() {
        // O⁻(4): anisotropic plane ⊥ hyperbolic plane, in two presentations
        let q1 = |v: &Gf2Vector| {
            (v.get(0) ^ v.get(1) ^ (v.get(0) && v.get(1))) ^ (v.get(2) && v.get(3))
        };
        let q2 = |v: &Gf2Vector| {
            (v.get(0) && v.get(1)) ^ (v.get(2) ^ v.get(3) ^ (v.get(2) && v.get(3)))
        };
        let s = BilinearFormSpace::quadratic_from_fn(4, q1).unwrap();
        let t = BilinearFormSpace::quadratic_from_fn(4, q2).unwrap();
        assert_eq!(s.singular_count().unwrap(), 5);
        let l = witt_isometry(&s, &t).unwrap();
        assert_eq!(l.rank(), 4);
        for bits in 0..16 {
            let v = Gf2Vector::from_u64(bits, 4);
            assert_eq!(q2(&l.mul_vec(&v).unwrap()), q1(&v));
        }
    }
}
