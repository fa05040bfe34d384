//! Exact computations for bidouble covers of blown-up planes: divisor
//! classes, plane interpolation, binary codes of nodal curves, and the
//! invariants of the resulting surfaces.

pub mod codes;
pub mod constructions;
pub mod covers;
pub mod geometry;
pub mod lattice;
pub mod linalg;
pub mod scenarios;

pub use lattice::{BlowupLattice, DivisorClass, LatticeError};
