//! Exact certificates for unassisted and entanglement-assisted zero-error
//! capacities of symplectic graphs over GF(2) and root-system
//! orthogonality graphs.

pub mod algebra;
pub mod graphs;
pub mod symplectic;
pub mod root_systems;
pub mod root_lattice;
pub mod channels;
pub mod protocol;
