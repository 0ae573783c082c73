//! Bases of `C(S, Z)` for closed subsets `S` of finite cubes `{0,1}^n`.
//!
//! Products of coordinate idempotents `e_{μ_1} ⋯ e_{μ_r}` with
//! `μ_1 > … > μ_r` are ordered lexicographically on the decreasing index
//! string, highest index first, a proper prefix preceding its extensions:
//! `1 < e_0 < e_1 < e_1e_0 < e_2 < e_2e_0 < …`. Under this order every
//! product involving `e_ρ` comes after every product on indices below `ρ`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{HermiteLattice, IntMatrix};

/// A finite subset of `{0,1}^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CubeSubsetRepr", into = "CubeSubsetRepr")]
pub struct CubeSubset {
    dim: usize,
    points: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct CubeSubsetRepr {
    dim: usize,
    points: Vec<Vec<u8>>,
}

impl TryFrom<CubeSubsetRepr> for CubeSubset {
    type Error = Error;

    fn try_from(r: CubeSubsetRepr) -> Result<Self> {
        let points = r
            .points
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|x| match x {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(Error::Structural(format!("cube coordinate {x} is not 0 or 1"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        CubeSubset::new(r.dim, points)
    }
}

impl From<CubeSubset> for CubeSubsetRepr {
    fn from(s: CubeSubset) -> Self {
        CubeSubsetRepr {
            dim: s.dim,
            points: s.points.iter().map(|p| p.iter().map(|&b| b as u8).collect()).collect(),
        }
    }
}

impl CubeSubset {
    pub fn new(dim: usize, points: Vec<Vec<bool>>) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Structural(format!(
                "point of the wrong dimension in a subset of {{0,1}}^{dim}"
            )));
        }
        let distinct: BTreeSet<&Vec<bool>> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::Structural("repeated point".into()));
        }
        Ok(CubeSubset { dim, points })
    }

    pub fn full(dim: usize) -> Self {
        let points = (0..1usize << dim)
            .map(|m| (0..dim).map(|i| m >> i & 1 == 1).collect())
            .collect();
        CubeSubset { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<bool>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Image under the projection to the first `k` coordinates, in first
    /// occurrence order.
    pub fn project(&self, k: usize) -> CubeSubset {
        let mut seen = BTreeSet::new();
        let points = self
            .points
            .iter()
            .map(|p| p[..k].to_vec())
            .filter(|p| seen.insert(p.clone()))
            .collect();
        CubeSubset { dim: k, points }
    }

    pub fn evaluate(&self, e: &IdempotentProduct) -> Vec<BigInt> {
        self.points
            .iter()
            .map(|p| BigInt::from(e.0.iter().all(|&i| p[i]) as i64))
            .collect()
    }
}

/// `e_{μ_1} ⋯ e_{μ_r}` stored as the strictly decreasing string `μ_1 > … > μ_r`.
/// The derived order is the lexicographic order described in the module docs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IdempotentProduct(Vec<usize>);

impl TryFrom<Vec<usize>> for IdempotentProduct {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        IdempotentProduct::new(v)
    }
}

impl From<IdempotentProduct> for Vec<usize> {
    fn from(e: IdempotentProduct) -> Self {
        e.0
    }
}

impl IdempotentProduct {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Structural("product indices must strictly decrease".into()));
        }
        Ok(IdempotentProduct(indices))
    }

    pub fn one() -> Self {
        IdempotentProduct(vec![])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn top(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// All products on coordinates `< dim`, in increasing order.
    pub fn all(dim: usize) -> Vec<IdempotentProduct> {
        assert!(dim < 31, "cube dimension {dim} too large to enumerate products");
        let mut out: Vec<IdempotentProduct> = (0..1u32 << dim)
            .map(|m| IdempotentProduct((0..dim).rev().filter(|&i| m >> i & 1 == 1).collect()))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for IdempotentProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Greedy basis: keep each product whose evaluation vector is not an integer
/// combination of the vectors of smaller products.
pub fn noebeling_basis(s: &CubeSubset) -> Result<Vec<IdempotentProduct>> {
    if s.is_empty() {
        return Err(Error::Structural("the subset must be nonempty".into()));
    }
    let mut lattice = HermiteLattice::new(s.len());
    let mut basis = Vec::new();
    for e in IdempotentProduct::all(s.dim) {
        if lattice.insert(&s.evaluate(&e)) {
            basis.push(e);
        }
        if basis.len() == s.len() && lattice.index() == Some(BigInt::from(1)) {
            break;
        }
    }
    Ok(basis)
}

/// The evaluation matrix (rows: products, columns: points) and its determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCertificate {
    pub matrix: IntMatrix,
    #[serde(serialize_with = "crate::exact::serialize_bigint")]
    pub determinant: BigInt,
}

pub fn evaluation_matrix(s: &CubeSubset, e: &[IdempotentProduct]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = e.iter().map(|p| s.evaluate(p)).collect();
    IntMatrix::from_dense_shape(e.len(), s.len(), &rows)
}

pub fn basis_certificate(s: &CubeSubset, e: &[IdempotentProduct]) -> Result<BasisCertificate> {
    if e.len() != s.len() {
        return Err(Error::Certificate(format!(
            "{} products cannot form a basis of functions on {} points",
            e.len(),
            s.len()
        )));
    }
    let matrix = evaluation_matrix(s, e);
    let determinant = matrix.determinant()?;
    if determinant != BigInt::from(1) && determinant != BigInt::from(-1) {
        return Err(Error::Certificate(format!(
            "evaluation matrix has determinant {determinant}"
        )));
    }
    Ok(BasisCertificate { matrix, determinant })
}

/// Coefficients of `f: S → Z` in the basis `e`.
pub fn expand(s: &CubeSubset, e: &[IdempotentProduct], f: &[BigInt]) -> Result<Vec<BigInt>> {
    let m = evaluation_matrix(s, e).transpose();
    let rhs = IntMatrix::from_dense_shape(f.len(), 1, &f.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>());
    let x = crate::exact::solve(&m, &rhs)?.ok_or_else(|| Error::Certificate("function outside the span".into()))?;
    Ok((0..x.rows()).map(|i| x.get(i, 0)).collect())
}

/// Bases for a tower of projections `S_0 ← S_1 ← …`, stage `k` living in the
/// first `dim(S_k)` coordinates of stage `k + 1`.
pub fn tower_extend(stages: &[CubeSubset]) -> Result<Vec<Vec<IdempotentProduct>>> {
    for w in stages.windows(2) {
        if w[0].dim > w[1].dim {
            return Err(Error::Structural("tower dimensions must not decrease".into()));
        }
        let image: BTreeSet<Vec<bool>> = w[1].project(w[0].dim).points.into_iter().collect();
        let lower: BTreeSet<Vec<bool>> = w[0].points.iter().cloned().collect();
        if image != lower {
            return Err(Error::Structural(
                "stage is not the projection of the next stage".into(),
            ));
        }
    }
    let bases: Vec<Vec<IdempotentProduct>> = stages.iter().map(noebeling_basis).collect::<Result<_>>()?;
    for (k, w) in bases.windows(2).enumerate() {
        let next: BTreeSet<&IdempotentProduct> = w[1].iter().collect();
        if let Some(missing) = w[0].iter().find(|e| !next.contains(e)) {
            return Err(Error::Structural(format!(
                "basis element {missing} of stage {k} is lost at stage {}",
                k + 1
            )));
        }
    }
    Ok(bases)
}

/// A profinite set presented by finite stages `S_0 ← S_1 ← … ← S_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfiniteTower {
    sizes: Vec<usize>,
    /// `maps[k][x]` is the image in `S_k` of `x ∈ S_{k+1}`.
    maps: Vec<Vec<usize>>,
}

impl ProfiniteTower {
    pub fn new(sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.is_empty() || maps.len() + 1 != sizes.len() {
            return Err(Error::Structural(
                "a tower with k + 1 stages needs k transition maps".into(),
            ));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.len() != sizes[k + 1] || m.iter().any(|&y| y >= sizes[k]) {
                return Err(Error::Structural(format!("transition map {k} has the wrong shape")));
            }
            if m.iter().collect::<BTreeSet<_>>().len() != sizes[k] {
                return Err(Error::Structural(format!("transition map {k} is not surjective")));
            }
        }
        Ok(ProfiniteTower { sizes, maps })
    }

    pub fn constant(size: usize, stages: usize) -> Self {
        ProfiniteTower {
            sizes: vec![size; stages],
            maps: vec![(0..size).collect(); stages.saturating_sub(1)],
        }
    }

    /// `{0,1}^0 ← {0,1}^1 ← … ← {0,1}^k`, forgetting the last coordinate.
    /// Points are indexed by their binary expansion, first coordinate least
    /// significant.
    pub fn cantor(k: usize) -> Self {
        ProfiniteTower {
            sizes: (0..=k).map(|j| 1 << j).collect(),
            maps: (1..=k)
                .map(|j| (0..1usize << j).map(|x| x & ((1 << (j - 1)) - 1)).collect())
                .collect(),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn stages(&self) -> usize {
        self.sizes.len()
    }

    /// A compatible embedding of every stage in a cube. Stage `j + 1` adds
    /// enough bits to tell apart the points of each fiber over `S_j`.
    pub fn cube_embedding(&self) -> Vec<CubeSubset> {
        let bits = |n: usize| {
            if n <= 1 {
                0
            } else {
                (usize::BITS - (n - 1).leading_zeros()) as usize
            }
        };
        let mut coords: Vec<Vec<bool>> = vec![Vec::new(); self.sizes[0]];
        let b0 = bits(self.sizes[0]);
        for (x, c) in coords.iter_mut().enumerate() {
            c.extend((0..b0).map(|i| x >> i & 1 == 1));
        }
        let mut out = vec![CubeSubset::new(b0, coords.clone()).expect("binary codes are distinct")];
        for m in &self.maps {
            let mut fiber_pos = vec![0usize; coords.len()];
            let mut pos = Vec::with_capacity(m.len());
            for &y in m {
                pos.push(fiber_pos[y]);
                fiber_pos[y] += 1;
            }
            let b = bits(fiber_pos.iter().copied().max().unwrap_or(1));
            let next: Vec<Vec<bool>> = m
                .iter()
                .zip(&pos)
                .map(|(&y, &p)| {
                    let mut c = coords[y].clone();
                    c.extend((0..b).map(|i| p >> i & 1 == 1));
                    c
                })
                .collect();
            let dim = next.first().map_or(0, Vec::len);
            out.push(CubeSubset::new(dim, next.clone()).expect("fiber codes are distinct"));
            coords = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(ix: &[usize]) -> IdempotentProduct {
        IdempotentProduct::new(ix.to_vec()).unwrap()
    }

    #[test]
    fn order_on_products() {
        let all = IdempotentProduct::all(3);
        let want = [&[][..], &[0], &[1], &[1, 0], &[2], &[2, 0], &[2, 1], &[2, 1, 0]];
        assert_eq!(all, want.iter().map(|x| e(x)).collect::<Vec<_>>());
    }

    #[test]
    fn point() {
        let s = CubeSubset::new(0, vec![vec![]]).unwrap();
        let b = noebeling_basis(&s).unwrap();
        assert_eq!(b, vec![IdempotentProduct::one()]);
        assert_eq!(basis_certificate(&s, &b).unwrap().determinant, BigInt::from(1));
    }

    #[test]
    fn interval() {
        let s = CubeSubset::full(1);
        assert_eq!(noebeling_basis(&s).unwrap(), vec![e(&[]), e(&[0])]);
    }

    #[test]
    fn diagonal() {
        let s = CubeSubset::new(2, vec![vec![false, false], vec![true, true]]).unwrap();
        assert_eq!(noebeling_basis(&s).unwrap(), vec![e(&[]), e(&[0])]);
    }

    #[test]
    fn full_square_certificate() {
        let s = CubeSubset::full(2);
        let b = noebeling_basis(&s).unwrap();
        assert_eq!(b.len(), 4);
        assert!(basis_certificate(&s, &b).unwrap().determinant.magnitude() == &1u32.into());
    }

    #[test]
    fn short_basis_is_rejected() {
        let s = CubeSubset::new(2, vec![vec![false, false], vec![true, false], vec![true, true]]).unwrap();
        let mut b = noebeling_basis(&s).unwrap();
        b.pop();
        assert!(matches!(basis_certificate(&s, &b), Err(Error::Certificate(_))));
    }

    #[test]
    fn towers() {
        let bases = tower_extend(&[
            CubeSubset::full(1),
            CubeSubset::new(2, vec![vec![false, false], vec![true, true]]).unwrap(),
        ])
        .unwrap();
        assert_eq!(bases[0], vec![e(&[]), e(&[0])]);
        let single = ProfiniteTower::constant(1, 4).cube_embedding();
        assert!(tower_extend(&single)
            .unwrap()
            .iter()
            .all(|b| b == &vec![IdempotentProduct::one()]));
        let cantor = tower_extend(&ProfiniteTower::cantor(4).cube_embedding()).unwrap();
        assert_eq!(cantor.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn incompatible_tower() {
        let bad = [CubeSubset::new(1, vec![vec![true]]).unwrap(), CubeSubset::full(2)];
        assert!(matches!(tower_extend(&bad), Err(Error::Structural(_))));
        assert!(ProfiniteTower::new(vec![2, 2], vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn json() {
        let s: CubeSubset = serde_json::from_str(r#"{"dim":2,"points":[[0,1],[1,1]]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert!(serde_json::from_str::<CubeSubset>(r#"{"dim":1,"points":[[2]]}"#).is_err());
    }
}
