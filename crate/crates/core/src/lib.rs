//! Exact computational algebra over the integers: Smith normal forms,
//! bar constructions, Breen–Deligne resolutions, Nöbeling bases, Čech
//! complexes, a solid tensor calculus, toy coherent duality and rational
//! cover combinatorics.

pub mod adic;
pub mod breen_deligne;
pub mod cech;
pub mod duality;
pub mod error;
pub mod exact;
pub mod noebeling;
pub mod simplicial;
pub mod solid;

pub use error::{Error, Result};
