use serde::Serialize;

use super::expr::{Atom, IndexSet, SolidExpr};
use crate::error::Result;
use crate::noebeling::{tower_extend, ProfiniteTower};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasuresReport {
    /// `∏_I Z` with `I` the union of the nested Nöbeling bases.
    pub expr: SolidExpr,
    /// `|S_i|` for each stage, equal to the basis size at that stage.
    pub stage_ranks: Vec<usize>,
    /// Basis of the last stage, in the well order.
    pub basis: Vec<String>,
    /// The last transition is a bijection, so the tower is read as constant.
    pub stabilized: bool,
}

/// `Z[S]^□` for a profinite set given by a tower. A stabilized tower has
/// finite limit and yields `∏_k Z` with `k = |S|`; otherwise the result is
/// the symbolic product over the basis `E`.
pub fn measures_module(tower: &ProfiniteTower) -> Result<MeasuresReport> {
    let bases = tower_extend(&tower.cube_embedding())?;
    let stage_ranks: Vec<usize> = bases.iter().map(Vec::len).collect();
    let sizes = tower.sizes();
    let stabilized = sizes.len() >= 2 && sizes[sizes.len() - 1] == sizes[sizes.len() - 2];
    let index = if stabilized {
        IndexSet::Finite(*stage_ranks.last().expect("at least one stage") as u64)
    } else {
        IndexSet::Named("E".into())
    };
    Ok(MeasuresReport {
        expr: SolidExpr::Atom(Atom::ProdZ(index)),
        stage_ranks,
        basis: bases
            .last()
            .expect("at least one stage")
            .iter()
            .map(ToString::to_string)
            .collect(),
        stabilized,
    })
}
