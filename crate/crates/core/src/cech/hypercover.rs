use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ChainComplex, FgAbGroup, IntMatrix};

/// An augmented semisimplicial finite set `S_L → … → S_1 → S_0 → S`,
/// materialized through level `L`, optionally split by extra degeneracies
/// `s: S_{k-1} → S_k` (with `S_{-1} = S`) satisfying `d_0 s = id` and
/// `d_i s = s d_{i-1}` for `i ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteHypercover {
    base: usize,
    /// `sizes[k] = |S_k|`.
    sizes: Vec<usize>,
    augmentation: Vec<usize>,
    /// `faces[k - 1][i][x]` is `d_i x` for `x ∈ S_k`, `1 ≤ k ≤ L`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `splitting[k][y]` is `s y ∈ S_k` for `y ∈ S_{k-1}`.
    splitting: Option<Vec<Vec<usize>>>,
}

/// JSON description of a hypercover.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypercoverSpec {
    /// The Čech nerve of `map: S' → S`, split by `section` (or by the first
    /// preimage of each point when omitted).
    CechNerve {
        target_size: usize,
        map: Vec<usize>,
        #[serde(default)]
        section: Option<Vec<usize>>,
        levels: usize,
    },
    Explicit {
        base: usize,
        sizes: Vec<usize>,
        augmentation: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        #[serde(default)]
        splitting: Option<Vec<Vec<usize>>>,
    },
}

impl HypercoverSpec {
    pub fn build(&self) -> Result<FiniteHypercover> {
        match self {
            HypercoverSpec::CechNerve {
                target_size,
                map,
                section,
                levels,
            } => FiniteHypercover::cech_nerve(*target_size, map, section.as_deref(), *levels),
            HypercoverSpec::Explicit {
                base,
                sizes,
                augmentation,
                faces,
                splitting,
            } => FiniteHypercover::new(
                *base,
                sizes.clone(),
                augmentation.clone(),
                faces.clone(),
                splitting.clone(),
            ),
        }
    }
}

impl FiniteHypercover {
    pub fn new(
        base: usize,
        sizes: Vec<usize>,
        augmentation: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        splitting: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let h = FiniteHypercover {
            base,
            sizes,
            augmentation,
            faces,
            splitting,
        };
        h.validate()?;
        Ok(h)
    }

    /// The Čech nerve `S_k = S' ×_S ⋯ ×_S S'` (`k + 1` factors) of a
    /// surjection, through level `levels`.
    pub fn cech_nerve(target_size: usize, map: &[usize], section: Option<&[usize]>, levels: usize) -> Result<Self> {
        if map.iter().any(|&y| y >= target_size) {
            return Err(Error::Structural("map lands outside its target".into()));
        }
        let mut fibers = vec![Vec::new(); target_size];
        for (x, &y) in map.iter().enumerate() {
            fibers[y].push(x);
        }
        if fibers.iter().any(Vec::is_empty) {
            return Err(Error::Structural("the covering map is not surjective".into()));
        }
        let section: Vec<usize> = match section {
            Some(s) => {
                if s.len() != target_size || s.iter().enumerate().any(|(y, &x)| x >= map.len() || map[x] != y) {
                    return Err(Error::Structural("section is not a right inverse of the map".into()));
                }
                s.to_vec()
            }
            None => fibers.iter().map(|f| f[0]).collect(),
        };
        // level k: (k + 1)-tuples in a common fiber, lexicographic
        let mut tuples: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in 0..=levels {
            let mut level = Vec::new();
            for f in &fibers {
                let mut acc: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..=k {
                    acc = acc
                        .into_iter()
                        .flat_map(|t| {
                            f.iter().map(move |&x| {
                                let mut t = t.clone();
                                t.push(x);
                                t
                            })
                        })
                        .collect();
                }
                level.extend(acc);
            }
            level.sort();
            tuples.push(level);
        }
        let index: Vec<HashMap<&Vec<usize>, usize>> = tuples
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let faces = (1..=levels)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        tuples[k]
                            .iter()
                            .map(|t| {
                                let mut u = t.clone();
                                u.remove(i);
                                index[k - 1][&u]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut splitting = vec![section.clone()];
        for k in 1..=levels {
            splitting.push(
                tuples[k - 1]
                    .iter()
                    .map(|t| {
                        let mut u = vec![section[map[t[0]]]];
                        u.extend(t);
                        index[k][&u]
                    })
                    .collect(),
            );
        }
        let augmentation = tuples[0].iter().map(|t| map[t[0]]).collect();
        FiniteHypercover::new(
            target_size,
            tuples.iter().map(Vec::len).collect(),
            augmentation,
            faces,
            Some(splitting),
        )
    }

    /// The constant hypercover of a point.
    pub fn point(levels: usize) -> Self {
        FiniteHypercover::cech_nerve(1, &[0], None, levels).expect("identity of a point")
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn levels(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn is_split(&self) -> bool {
        self.splitting.is_some()
    }

    /// `d_i : S_k → S_{k-1}`, with `d_0 : S_0 → S` the augmentation.
    fn face(&self, k: usize, i: usize) -> &[usize] {
        if k == 0 {
            &self.augmentation
        } else {
            &self.faces[k - 1][i]
        }
    }

    fn size_or_base(&self, k: isize) -> usize {
        if k < 0 {
            self.base
        } else {
            self.sizes[k as usize]
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Structural(m.to_string()));
        if self.sizes.is_empty() {
            return bad("a hypercover needs level 0");
        }
        if self.augmentation.len() != self.sizes[0] || self.augmentation.iter().any(|&y| y >= self.base) {
            return bad("augmentation has the wrong shape");
        }
        if self.faces.len() != self.levels() {
            return bad("face maps missing for some level");
        }
        for k in 1..=self.levels() {
            let f = &self.faces[k - 1];
            if f.len() != k + 1
                || f.iter()
                    .any(|d| d.len() != self.sizes[k] || d.iter().any(|&y| y >= self.sizes[k - 1]))
            {
                return bad("face map has the wrong shape");
            }
        }
        // d_i d_j = d_{j-1} d_i for i < j, including the augmentation
        for k in 1..=self.levels() {
            for j in 0..=k {
                for i in 0..j {
                    for x in 0..self.sizes[k] {
                        let lhs = self.face(k - 1, i)[self.face(k, j)[x]];
                        let rhs = self.face(k - 1, j - 1)[self.face(k, i)[x]];
                        if lhs != rhs {
                            return Err(Error::Structural(format!(
                                "d_{i} d_{j} != d_{} d_{i} at level {k}",
                                j - 1
                            )));
                        }
                    }
                }
            }
        }
        for k in 0..=self.levels() {
            if !self.fills_matching_object(k) {
                return Err(Error::Structural(format!(
                    "level {k} does not cover its matching object"
                )));
            }
        }
        if let Some(s) = &self.splitting {
            if s.len() != self.levels() + 1 {
                return bad("splitting missing for some level");
            }
            for k in 0..=self.levels() {
                let prev = self.size_or_base(k as isize - 1);
                if s[k].len() != prev || s[k].iter().any(|&x| x >= self.sizes[k]) {
                    return bad("splitting map has the wrong shape");
                }
                for y in 0..prev {
                    if self.face(k, 0)[s[k][y]] != y {
                        return bad("d_0 s is not the identity");
                    }
                    for i in 1..=k {
                        if self.face(k, i)[s[k][y]] != s[k - 1][self.face(k - 1, i - 1)[y]] {
                            return Err(Error::Structural(format!("d_{i} s != s d_{} at level {k}", i - 1)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Every compatible family of faces `(y_0, …, y_k)` in `S_{k-1}` is the
    /// boundary of some `x ∈ S_k`.
    fn fills_matching_object(&self, k: usize) -> bool {
        let hit: BTreeSet<Vec<usize>> = (0..self.sizes[k])
            .map(|x| {
                (0..=k)
                    .map(|i| {
                        if k == 0 {
                            self.augmentation[x]
                        } else {
                            self.face(k, i)[x]
                        }
                    })
                    .collect()
            })
            .collect();
        if k == 0 {
            return hit.len() == self.base;
        }
        let prev = self.sizes[k - 1];
        let mut family = Vec::with_capacity(k + 1);
        self.extend_family(k, prev, &mut family, &hit)
    }

    fn extend_family(&self, k: usize, prev: usize, family: &mut Vec<usize>, hit: &BTreeSet<Vec<usize>>) -> bool {
        let j = family.len();
        if j == k + 1 {
            return hit.contains(family);
        }
        for y in 0..prev {
            // d_i y_j = d_{j-1} y_i for i < j
            let ok = (0..j).all(|i| self.face(k - 1, i)[y] == self.face(k - 1, j - 1)[family[i]]);
            if ok {
                family.push(y);
                let filled = self.extend_family(k, prev, family, hit);
                family.pop();
                if !filled {
                    return false;
                }
            }
        }
        true
    }

    /// The coboundary `δ = Σ (-1)^i d_i^* : Z^{S_{k-1}} → Z^{S_k}`; `k = 0`
    /// gives the augmentation pullback from `Z^S`.
    pub fn coboundary(&self, k: usize) -> IntMatrix {
        let rows = self.sizes[k];
        let cols = self.size_or_base(k as isize - 1);
        let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
        for i in 0..=k {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (x, &y) in self.face(k, i).iter().enumerate() {
                *acc.entry((x, y)).or_insert(0) += sign;
            }
        }
        IntMatrix::from_triplets(
            rows,
            cols,
            acc.into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|((r, c), v)| (r, c, BigInt::from(v))),
        )
        .expect("indices in range")
    }

    /// The pullback `s^* : Z^{S_k} → Z^{S_{k-1}}`.
    pub fn splitting_pullback(&self, k: usize) -> Option<IntMatrix> {
        let s = &self.splitting.as_ref()?[k];
        let entries = s.iter().enumerate().map(|(y, &x)| (y, x, BigInt::from(1)));
        Some(IntMatrix::from_triplets(s.len(), self.sizes[k], entries).expect("indices in range"))
    }
}

/// The Čech complex `Z^{S_0} → Z^{S_1} → ⋯ → Z^{S_L}` in cohomological
/// degrees `0..=L`. Cohomology is meaningful below `L`.
pub fn cech_complex(h: &FiniteHypercover) -> ChainComplex {
    ChainComplex::from_cochains(
        0,
        h.sizes.clone(),
        (1..=h.levels()).map(|k| (k as i64 - 1, h.coboundary(k))).collect(),
    )
    .expect("simplicial identities make δ∘δ vanish")
}

/// `H^k` of the Čech complex, for `k` below the top materialized level.
pub fn cech_cohomology(h: &FiniteHypercover, k: usize) -> Result<FgAbGroup> {
    if k >= h.levels() {
        return Err(Error::DegreeOutOfRange {
            degree: k as i64,
            lo: 0,
            hi: h.levels() as i64 - 1,
        });
    }
    cech_complex(h).cohomology(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_alternates() {
        let h = FiniteHypercover::point(4);
        let c = cech_complex(&h);
        let want = [0, 1, 0, 1];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(h.coboundary(k + 1).get(0, 0), BigInt::from(*w));
        }
        assert_eq!(c.cohomology(0).unwrap(), FgAbGroup::free(1));
        for k in 1..4 {
            assert!(cech_cohomology(&h, k).unwrap().is_trivial());
        }
        assert!(cech_cohomology(&h, 4).is_err());
    }

    #[test]
    fn two_to_one() {
        let h = FiniteHypercover::cech_nerve(2, &[0, 0, 1, 1], None, 3).unwrap();
        assert_eq!(cech_cohomology(&h, 0).unwrap(), FgAbGroup::free(2));
        assert!(cech_cohomology(&h, 1).unwrap().is_trivial());
        assert!(cech_cohomology(&h, 2).unwrap().is_trivial());
    }

    #[test]
    fn disjoint_union_cover() {
        let h = FiniteHypercover::cech_nerve(2, &[0, 1], None, 2).unwrap();
        assert_eq!(cech_cohomology(&h, 0).unwrap().rank(), 2);
    }

    #[test]
    fn broken_identities_are_rejected() {
        assert!(FiniteHypercover::cech_nerve(2, &[0, 0], None, 1).is_err());
        let bad = FiniteHypercover::new(1, vec![1, 1], vec![0], vec![vec![vec![0]]], None);
        assert!(matches!(bad, Err(Error::Structural(_))));
        assert!(FiniteHypercover::cech_nerve(2, &[0, 1, 1], Some(&[0, 0]), 1).is_err());
    }

    #[test]
    fn json_kinds() {
        let spec: HypercoverSpec =
            serde_json::from_str(r#"{"kind":"cech_nerve","target_size":2,"map":[0,1,1],"levels":2}"#).unwrap();
        let h = spec.build().unwrap();
        assert_eq!(h.size(1), 5);
        let explicit = HypercoverSpec::Explicit {
            base: 1,
            sizes: vec![1, 1],
            augmentation: vec![0],
            faces: vec![vec![vec![0], vec![0]]],
            splitting: Some(vec![vec![0], vec![0]]),
        };
        let h = explicit.build().unwrap();
        assert!(h.is_split());
        let text = serde_json::to_string(&explicit).unwrap();
        assert!(text.starts_with(r#"{"kind":"explicit""#));
    }
}
