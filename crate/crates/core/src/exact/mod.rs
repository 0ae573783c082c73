//! Exact integer linear algebra.

pub mod complex;
pub mod graded;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod snf;

pub use complex::ChainComplex;
pub use graded::GradedGroup;
pub use group::{pontrjagin_dual_finite, FgAbGroup, FinAbGroup, GroupHom};
pub use lattice::HermiteLattice;
pub use matrix::{serialize_bigint, BigIntJson, IntMatrix};
pub use snf::{invariant_factors, kernel_basis, rank, smith_normal_form, solve, Cokernel, SmithForm};
