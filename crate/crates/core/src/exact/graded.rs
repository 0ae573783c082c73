use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::group::FgAbGroup;

/// A graded abelian group with finitely many nonzero degrees. Trivial
/// degrees are never stored, so equality is degreewise isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    degrees: BTreeMap<i64, FgAbGroup>,
}

impl GradedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn concentrated(degree: i64, g: FgAbGroup) -> Self {
        let mut out = Self::new();
        out.add(degree, g);
        out
    }

    /// Adds `g` as a direct summand in `degree`.
    pub fn add(&mut self, degree: i64, g: FgAbGroup) {
        if g.is_trivial() {
            return;
        }
        let sum = match self.degrees.remove(&degree) {
            Some(h) => h.direct_sum(&g),
            None => g,
        };
        self.degrees.insert(degree, sum);
    }

    pub fn get(&self, degree: i64) -> FgAbGroup {
        self.degrees.get(&degree).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FgAbGroup)> {
        self.degrees.iter().map(|(&d, g)| (d, g))
    }

    /// Nonzero degrees, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.degrees.keys().copied().collect()
    }

    pub fn shifted(&self, k: i64) -> Self {
        GradedGroup {
            degrees: self.degrees.iter().map(|(&d, g)| (d + k, g.clone())).collect(),
        }
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(FgAbGroup::rank).sum()
    }

    pub fn is_torsion(&self) -> bool {
        self.degrees.values().all(|g| g.rank() == 0)
    }
}

impl Serialize for GradedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.degrees.len()))?;
        for (d, g) in &self.degrees {
            m.serialize_entry(&d.to_string(), g)?;
        }
        m.end()
    }
}
