//! Exact algebra over GF(2) and GF(2^m).

mod field;
mod forms;
mod gf2;

use thiserror::Error;

pub use field::{FieldElement, GaloisField};
pub use forms::{
    canonical_sigma, sigma_n, sigma_packed, symplectic_basis, witt_isometry, BilinearFormSpace,
    FormKind, SymplecticBasis, MAX_EXHAUSTIVE_DIM,
};
pub use gf2::{independent_subset, Gf2Matrix, Gf2Vector};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("symplectic form needs even positive length, got {0}")]
    OddDimension(usize),
    #[error("entry {0} is not a GF(2) value")]
    NotBinary(i64),
    #[error("elements of different fields (moduli {left:#b} and {right:#b})")]
    IncompatibleFields { left: u32, right: u32 },
    #[error("no pinned field of degree {0}")]
    UnsupportedDegree(u32),
    #[error("modulus {0:#b} is not irreducible")]
    Reducible(u32),
    #[error("coefficients {value:#b} exceed degree {degree}")]
    NotReduced { value: u32, degree: u32 },
    #[error("form is not alternating at ({row}, {col})")]
    NotAlternating { row: usize, col: usize },
    #[error("form is degenerate; radical vector {witness}")]
    Degenerate { witness: Gf2Vector },
    #[error("spanning vectors are linearly dependent")]
    DependentBasis,
    #[error("matrix is singular")]
    Singular,
    #[error("space carries no quadratic form")]
    NotQuadraticSpace,
    #[error("value map is not quadratic at {0}")]
    NotQuadratic(Gf2Vector),
    #[error("inequivalent quadratic forms: {source_count} vs {target_count} singular vectors")]
    InequivalentForms { source_count: usize, target_count: usize },
    #[error("dimension {0} is too large for exhaustive enumeration")]
    TooLarge(usize),
}
