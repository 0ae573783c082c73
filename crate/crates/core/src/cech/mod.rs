//! Čech complexes of finite hypercovers, torus models and split homotopies.

pub mod homotopy;
pub mod hypercover;
pub mod torus;

pub use homotopy::{
    norm_ratio, profinite_stage_acyclicity, split_homotopy_norm, HomotopyNormReport, NormedCochain, StageReport,
    Surjection, SurjectionTower,
};
pub use hypercover::{cech_cohomology, cech_complex, FiniteHypercover, HypercoverSpec};
pub use torus::{torus_cochains, torus_cohomology, torus_simplices};
