//! The coordinate cross `Spec Z[X,Y]/XY`, whose boundary is two copies of
//! the boundary of a line glued along the constants.

use serde::Serialize;

use super::window::{safe_zone, GradedModuleReport};
use crate::error::{Error, Result};
use crate::exact::{Cokernel, GradedGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub window: usize,
    /// `(Z((X^{-1})) × Z((Y^{-1}))) / (Z[X,Y]/XY)` in the safe zone.
    pub quotient: GradedGroup,
    /// Its graded dual, shifted: `f^!Z`.
    pub dualizing: GradedModuleReport,
}

/// Degree `d` of `Z[X,Y]/XY → Z((X^{-1})) × Z((Y^{-1}))` on the bases
/// `{X^d, Y^d}`: the constant goes to both branches, positive degrees have
/// one monomial per branch, negative degrees have none.
fn inclusion(d: i64) -> IntMatrix {
    match d {
        0 => IntMatrix::from_dense(&[vec![1], vec![1]]).expect("rectangular"),
        d if d > 0 => IntMatrix::identity(2),
        _ => IntMatrix::zeros(2, 0),
    }
}

pub fn xy_boundary_dualizing(window: usize) -> Result<CrossReport> {
    if window < 4 {
        return Err(Error::WindowUnderflow(format!(
            "the cross needs a window of at least 4, got {window}"
        )));
    }
    let (lo, hi) = safe_zone(window)?;
    let mut quotient = GradedGroup::new();
    for d in lo..=hi {
        quotient.add(d, Cokernel::new(&inclusion(d)).group());
    }
    let dualizing = GradedModuleReport::new(-1, quotient.clone()).graded_dual()?;
    Ok(CrossReport {
        window,
        quotient,
        dualizing,
    })
}
