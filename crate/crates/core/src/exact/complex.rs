//! Bounded chain complexes of finite free Z-modules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::group::FgAbGroup;
use super::matrix::{BigIntJson, IntMatrix};
use super::snf::invariant_factors;
use crate::error::{Error, Result};

/// Homological convention: `d_i : C_i -> C_{i-1}` is a `rank(i-1) x rank(i)`
/// matrix acting on column vectors. Cochain complexes are stored with
/// degrees negated (see [`ChainComplex::from_cochains`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    ranks: Vec<usize>,
    differentials: BTreeMap<i64, IntMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

impl ChainComplex {
    /// `ranks[k]` is the rank in degree `lo + k`; `differentials` lists
    /// `(i, d_i)`. Missing differentials are zero. Checks shapes and `d∘d = 0`.
    pub fn new(lo: i64, ranks: Vec<usize>, differentials: Vec<(i64, IntMatrix)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, d) in differentials {
            if map.insert(i, d).is_some() {
                return Err(Error::Structural(format!("differential d_{i} given twice")));
            }
        }
        let c = ChainComplex {
            lo,
            ranks,
            differentials: map,
            labels: None,
        };
        c.validate()?;
        Ok(c)
    }

    /// A cochain complex `C^lo -> C^{lo+1} -> ...` with coboundaries
    /// `(k, δ^k : C^k -> C^{k+1})`, stored in chain degree `-k`.
    pub fn from_cochains(lo: i64, ranks: Vec<usize>, coboundaries: Vec<(i64, IntMatrix)>) -> Result<Self> {
        let hi = lo + ranks.len() as i64 - 1;
        let mut rev = ranks;
        rev.reverse();
        ChainComplex::new(-hi, rev, coboundaries.into_iter().map(|(k, m)| (-k, m)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len() || labels.iter().zip(&self.ranks).any(|(l, r)| l.len() != *r) {
            return Err(Error::ShapeMismatch("basis labels do not match ranks".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn labels(&self, i: i64) -> Option<&[String]> {
        let labels = self.labels.as_ref()?;
        if i < self.lo || i > self.hi() {
            return None;
        }
        Some(&labels[(i - self.lo) as usize])
    }

    /// `d_i`, zero when not stored.
    pub fn differential(&self, i: i64) -> IntMatrix {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.rank(i - 1), self.rank(i)))
    }

    fn validate(&self) -> Result<()> {
        for (&i, d) in &self.differentials {
            let want = (self.rank(i - 1), self.rank(i));
            if d.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "d_{i} is {}x{} but ranks require {}x{}",
                    d.rows(),
                    d.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        for (&i, d) in &self.differentials {
            if let Some(prev) = self.differentials.get(&(i - 1)) {
                if !prev.mul(d)?.is_zero() {
                    return Err(Error::NotAComplex { degree: i });
                }
            }
        }
        Ok(())
    }

    fn check_degree(&self, i: i64) -> Result<()> {
        if i < self.lo - 1 || i > self.hi() + 1 {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                lo: self.lo,
                hi: self.hi(),
            });
        }
        Ok(())
    }

    /// `ker d_i / im d_{i+1}` in canonical form.
    pub fn homology(&self, i: i64) -> Result<FgAbGroup> {
        self.check_degree(i)?;
        let out = invariant_factors(&self.differential(i));
        let inc = invariant_factors(&self.differential(i + 1));
        Ok(homology_from(self.rank(i), out.len(), &inc))
    }

    /// Homology in every degree of `[lo, hi]`, reusing each differential's
    /// invariant factors for the two degrees it touches.
    pub fn homology_all(&self) -> Vec<(i64, FgAbGroup)> {
        let mut factors: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
        for i in self.lo..=self.hi() + 1 {
            factors.insert(i, invariant_factors(&self.differential(i)));
        }
        (self.lo..=self.hi())
            .map(|i| (i, homology_from(self.rank(i), factors[&i].len(), &factors[&(i + 1)])))
            .collect()
    }

    /// `H^k` of a complex built with [`ChainComplex::from_cochains`].
    pub fn cohomology(&self, k: i64) -> Result<FgAbGroup> {
        self.homology(-k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| {
                if i.rem_euclid(2) == 0 {
                    self.rank(i) as i64
                } else {
                    -(self.rank(i) as i64)
                }
            })
            .sum()
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i) + other.rank(i)).collect();
        let diffs = (lo + 1..=hi)
            .map(|i| (i, self.differential(i).block_diag(&other.differential(i))))
            .collect();
        ChainComplex::new(lo, ranks, diffs).expect("direct sum of complexes is a complex")
    }

    /// Drops degrees outside `[lo, hi]` (stupid truncation).
    pub fn truncate(&self, lo: i64, hi: i64) -> ChainComplex {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| (i, self.differential(i))).collect();
        ChainComplex::new(lo, ranks, diffs).expect("truncation of a complex is a complex")
    }
}

fn homology_from(rank: usize, out_rank: usize, incoming: &[BigInt]) -> FgAbGroup {
    let free = rank - out_rank - incoming.len();
    FgAbGroup::from_cyclic_orders(free, incoming.iter().filter(|d| !d.is_one()).cloned())
}

#[derive(Serialize, Deserialize)]
struct DifferentialRepr {
    degree: i64,
    entries: Vec<(usize, usize, BigIntJson)>,
}

/// `{"degrees": [lo, hi], "ranks": [...], "differentials": [{"degree": i, "entries": [[r, c, v], ...]}]}`
#[derive(Serialize, Deserialize)]
struct ChainComplexRepr {
    degrees: (i64, i64),
    ranks: Vec<usize>,
    differentials: Vec<DifferentialRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
}

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainComplexRepr {
            degrees: (self.lo, self.hi()),
            ranks: self.ranks.clone(),
            differentials: self
                .differentials
                .iter()
                .map(|(&degree, d)| DifferentialRepr {
                    degree,
                    entries: d.triplets().map(|(i, j, v)| (i, j, BigIntJson(v.clone()))).collect(),
                })
                .collect(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ChainComplexRepr::deserialize(d)?;
        let (lo, hi) = repr.degrees;
        if hi - lo + 1 != repr.ranks.len() as i64 {
            return Err(D::Error::custom("degree range does not match the number of ranks"));
        }
        let rank = |i: i64| -> usize {
            if i < lo || i > hi {
                0
            } else {
                repr.ranks[(i - lo) as usize]
            }
        };
        let mut diffs = Vec::new();
        for dr in repr.differentials {
            let m = IntMatrix::from_triplets(
                rank(dr.degree - 1),
                rank(dr.degree),
                dr.entries.into_iter().map(|(i, j, v)| (i, j, v.0)),
            )
            .map_err(D::Error::custom)?;
            diffs.push((dr.degree, m));
        }
        let c = ChainComplex::new(lo, repr.ranks, diffs).map_err(D::Error::custom)?;
        match repr.labels {
            Some(l) => c.with_labels(l).map_err(D::Error::custom),
            None => Ok(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_z() {
        let c = ChainComplex::new(0, vec![1], vec![]).unwrap();
        assert_eq!(c.homology(0).unwrap(), FgAbGroup::free(1));
        assert!(c.homology(1).unwrap().is_trivial());
        assert!(c.homology(-1).unwrap().is_trivial());
        assert!(matches!(c.homology(3), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn multiplication_by_two() {
        let c = ChainComplex::new(0, vec![1, 1], vec![(1, m(&[&[2]]))]).unwrap();
        assert_eq!(c.homology(0).unwrap(), FgAbGroup::cyclic(2));
        assert!(c.homology(1).unwrap().is_trivial());
    }

    #[test]
    fn simplicial_circle() {
        // vertices v0, v1; edges a = v1 - v0, b = v0 - v1
        let d1 = m(&[&[-1, 1], &[1, -1]]);
        let c = ChainComplex::new(0, vec![2, 2], vec![(1, d1)]).unwrap();
        assert_eq!(c.homology(0).unwrap(), FgAbGroup::free(1));
        assert_eq!(c.homology(1).unwrap(), FgAbGroup::free(1));
    }

    #[test]
    fn rejects_bad_shapes_and_nonzero_composites() {
        assert!(matches!(
            ChainComplex::new(0, vec![1, 2], vec![(1, m(&[&[1]]))]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            ChainComplex::new(0, vec![1, 1, 1], vec![(1, m(&[&[1]])), (2, m(&[&[1]]))]),
            Err(Error::NotAComplex { degree: 2 })
        ));
    }

    #[test]
    fn cochain_convention() {
        // Z --(3)--> Z in cohomological degrees 0, 1
        let c = ChainComplex::from_cochains(0, vec![1, 1], vec![(0, m(&[&[3]]))]).unwrap();
        assert!(c.cohomology(0).unwrap().is_trivial());
        assert_eq!(c.cohomology(1).unwrap(), FgAbGroup::cyclic(3));
    }

    #[test]
    fn json_round_trip() {
        let c = ChainComplex::new(0, vec![1, 1], vec![(1, m(&[&[2]]))]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"degrees":[0,1],"ranks":[1,1],"differentials":[{"degree":1,"entries":[[0,0,2]]}]}"#
        );
        let back: ChainComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<ChainComplex>(r#"{"degrees":[0,1],"ranks":[1],"differentials":[]}"#).is_err());
    }
}
