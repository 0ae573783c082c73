//! Toy coherent duality: truncated Laurent windows, the boundary algebra
//! `A_∞`, Koszul complexes, the coordinate cross and Serre duality on `P^1`.

mod ainfty;
mod koszul;
mod p1;
mod window;
mod xy;

pub use ainfty::{
    ainfty_idempotence, ainfty_presentation_check, boundary_quotient, j_shriek, rhom_ainfty_vanishing,
    shriek_unit_line, FreeAModule, IdempotencePiece, IdempotenceReport, PresentationPiece, PresentationReport,
    VanishingPiece, VanishingReport,
};
pub use koszul::{
    koszul_complex, koszul_dual, looks_regular, shriek_unit, GradedComplex, Polynomial, RingSpec, ShriekOptions,
    ShriekUnitReport,
};
pub use p1::{p1_serre_pairing, LineBundleOnP1, SerrePairingReport, DEFAULT_TWIST_BOUND};
pub use window::{safe_zone, GradedModuleReport, LaurentWindow};
pub use xy::{xy_boundary_dualizing, CrossReport};
