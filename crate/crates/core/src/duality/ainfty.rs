//! Window models of `A_∞ = Z((T^{-1}))` over `A = Z[T]`.
//!
//! Everything is graded by `deg T = 1`, `deg U = -1`, so `UT - 1` is
//! homogeneous and each graded piece is a finite computation. `U^a T^b`
//! lives in the window when `0 ≤ a, b ≤ N`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::window::{safe_zone, GradedModuleReport, LaurentWindow};
use crate::error::{Error, Result};
use crate::exact::{rank, Cokernel, FgAbGroup, GradedGroup, IntMatrix};

fn triplets_matrix(rows: usize, cols: usize, entries: Vec<(usize, usize, i64)>) -> IntMatrix {
    let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (r, c, v) in entries {
        *acc.entry((r, c)).or_default() += v;
    }
    IntMatrix::from_triplets(rows, cols, acc.into_iter().map(|((r, c), v)| (r, c, BigInt::from(v))))
        .expect("indices in range")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationPiece {
    pub degree: i64,
    pub generators: usize,
    pub relations: usize,
    pub injective: bool,
    pub cokernel: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub window: usize,
    pub safe_zone: (i64, i64),
    pub pieces: Vec<PresentationPiece>,
    /// The class of `1` generates the degree-0 cokernel.
    pub unit_generates: bool,
    pub passed: bool,
}

impl PresentationReport {
    pub fn cokernels(&self) -> GradedGroup {
        let mut g = GradedGroup::new();
        for p in &self.pieces {
            g.add(p.degree, p.cokernel.clone());
        }
        g
    }
}

/// `UT - 1` on the degree-`d` piece of `Z[[U]] ⊗ A`, restricted to sources
/// whose image stays in the window. Rows and columns are indexed by the
/// `U`-exponent `a`, starting at `max(0, -d)`.
fn presentation_piece(window: usize, d: i64) -> (usize, IntMatrix) {
    let n = window as i64;
    let (a0, a1) = (0.max(-d), n.min(n - d));
    let len = (a1 - a0 + 1) as usize;
    let entries = (0..len.saturating_sub(1))
        .flat_map(|j| [(j + 1, j, 1), (j, j, -1)])
        .collect();
    (a0 as usize, triplets_matrix(len, len.saturating_sub(1), entries))
}

/// `0 → Z[[U]]⊗A →(UT-1) Z[[U]]⊗A → A_∞ → 0` on the safe zone: `UT - 1` is
/// injective and each cokernel piece is `Z`, the degree piece of `A_∞`.
pub fn ainfty_presentation_check(window: usize) -> Result<PresentationReport> {
    let (lo, hi) = safe_zone(window)?;
    let mut pieces = Vec::new();
    let mut unit_generates = false;
    for d in lo..=hi {
        let (_, m) = presentation_piece(window, d);
        let coker = Cokernel::new(&m);
        if d == 0 {
            // 1 = U^0 T^0 is the first basis vector of the degree-0 piece
            let mut one = vec![BigInt::from(0); m.rows()];
            one[0] = BigInt::one();
            let image = coker.project(&one);
            unit_generates = image.len() == 1 && image[0].abs().is_one();
        }
        pieces.push(PresentationPiece {
            degree: d,
            generators: m.rows(),
            relations: m.cols(),
            injective: rank(&m) == m.cols(),
            cokernel: coker.group(),
        });
    }
    let passed = unit_generates && pieces.iter().all(|p| p.injective && p.cokernel == FgAbGroup::free(1));
    Ok(PresentationReport {
        window,
        safe_zone: (lo, hi),
        pieces,
        unit_generates,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotencePiece {
    pub degree: i64,
    pub generators: usize,
    pub relations: usize,
    pub tensor: FgAbGroup,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotenceReport {
    pub window: usize,
    pub safe_zone: (i64, i64),
    pub pieces: Vec<IdempotencePiece>,
    /// `T^{-1} · T^{-1} = T^{-2}` in the Laurent window.
    pub monomial_check: bool,
    pub passed: bool,
}

/// `A_∞ ⊗_A A_∞ → A_∞` on the safe zone. The tensor product is presented
/// on `Z[[U, V]] ⊗ A` by `UT - 1` and `VT - 1`; multiplication sends
/// `U^a V^c T^b` to `T^{b-a-c}`.
pub fn ainfty_idempotence(window: usize) -> Result<IdempotenceReport> {
    if window < 4 {
        return Err(Error::WindowUnderflow(format!(
            "idempotence needs a window of at least 4, got {window}"
        )));
    }
    let (lo, hi) = safe_zone(window)?;
    let n = window as i64;
    let mut pieces = Vec::new();
    for d in lo..=hi {
        let gens: Vec<(i64, i64)> = (0..=n)
            .flat_map(|a| (0..=n).map(move |c| (a, c)))
            .filter(|&(a, c)| (0..=n).contains(&(d + a + c)))
            .collect();
        let index: BTreeMap<(i64, i64), usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut entries = Vec::new();
        let mut col = 0;
        for &(a, c) in &gens {
            for next in [(a + 1, c), (a, c + 1)] {
                if let Some(&j) = index.get(&next) {
                    entries.push((j, col, 1));
                    entries.push((index[&(a, c)], col, -1));
                    col += 1;
                }
            }
        }
        let rel = triplets_matrix(gens.len(), col, entries);
        let tensor = Cokernel::new(&rel).group();
        let mult = IntMatrix::from_dense(&[vec![1i64; gens.len()]])?;
        let kills_relations = mult.mul(&rel)?.is_zero();
        pieces.push(IdempotencePiece {
            degree: d,
            generators: gens.len(),
            relations: col,
            // a surjection Z → Z is an isomorphism
            bijective: kills_relations && !gens.is_empty() && tensor == FgAbGroup::free(1),
            tensor,
        });
    }
    let t = LaurentWindow::monomial("T", window, -1)?;
    let t2 = t.mul(&t)?;
    let monomial_check = !t2.truncated() && t2 == LaurentWindow::monomial("T", window, -2)?;
    let passed = monomial_check && pieces.iter().all(|p| p.bijective);
    Ok(IdempotenceReport {
        window,
        safe_zone: (lo, hi),
        pieces,
        monomial_check,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingPiece {
    pub degree: i64,
    pub size: usize,
    pub determinant: i64,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub window: usize,
    pub safe_zone: (i64, i64),
    pub pieces: Vec<VanishingPiece>,
    pub passed: bool,
}

/// `A[U^{-1}]/A →(UT-1) A[U^{-1}]/A` on the safe zone. As a Hom-space it is
/// graded dually, with `U^{-a}T^b` in degree `-(a + b)`. The degree `-k`
/// piece has basis `U^{-a} T^{k-a}` for `1 ≤ a ≤ k`, and `UT - 1` sends
/// `U^{-a}T^b` to `U^{-a+1}T^{b+1} - U^{-a}T^b`, the first term vanishing
/// for `a = 1`. Degrees `≥ 0` are zero.
pub fn rhom_ainfty_vanishing(window: usize) -> Result<VanishingReport> {
    let (lo, hi) = safe_zone(window)?;
    let mut pieces = Vec::new();
    for k in 1..=-lo {
        let size = k as usize;
        let entries = (0..size).flat_map(|j| {
            let mut e = vec![(j, j, -1)];
            if j > 0 {
                e.push((j - 1, j, 1));
            }
            e
        });
        let m = triplets_matrix(size, size, entries.collect());
        let det = m.determinant()?;
        pieces.push(VanishingPiece {
            degree: -k,
            size,
            acyclic: det.abs().is_one(),
            determinant: i64::try_from(det).unwrap_or(0),
        });
    }
    let passed = pieces.iter().all(|p| p.acyclic);
    Ok(VanishingReport {
        window,
        safe_zone: (lo, hi),
        pieces,
        passed,
    })
}

/// A graded `A`-module `⊕ P_i ⊗ A·g_i` with `g_i` in degree `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeAModule {
    pub summands: Vec<(i64, FgAbGroup)>,
}

impl FreeAModule {
    pub fn free(rank: usize) -> Self {
        FreeAModule {
            summands: vec![(0, FgAbGroup::free(1)); rank],
        }
    }

    pub fn tensor_group(&self, p: &FgAbGroup) -> Self {
        FreeAModule {
            summands: self.summands.iter().map(|(e, g)| (*e, g.tensor(p))).collect(),
        }
    }
}

/// `(A_∞/A)` in the window: per degree, the cokernel of `A_d → (A_∞)_d` on
/// the monomial bases `T^d`.
pub fn boundary_quotient(window: usize) -> Result<GradedGroup> {
    if window == 0 {
        return Err(Error::WindowUnderflow("empty window".into()));
    }
    let n = window as i64;
    let mut g = GradedGroup::new();
    for d in -n..=n {
        let inclusion = if d >= 0 {
            IntMatrix::identity(1)
        } else {
            IntMatrix::zeros(1, 0)
        };
        g.add(d, Cokernel::new(&inclusion).group());
    }
    Ok(g)
}

/// `j_! M = M ⊗_A (A_∞/A)[-1]` in the window `[-N, N]`.
pub fn j_shriek(m: &FreeAModule, window: usize) -> Result<GradedModuleReport> {
    let q = boundary_quotient(window)?;
    let n = window as i64;
    let mut out = GradedGroup::new();
    for (e, p) in &m.summands {
        if e.abs() > n {
            return Err(Error::WindowUnderflow(format!(
                "generator degree {e} lies outside the window {window}"
            )));
        }
        for (d, g) in q.iter() {
            if (d + e).abs() <= n {
                out.add(d + e, g.tensor(p));
            }
        }
    }
    Ok(GradedModuleReport::new(-1, out))
}

/// `f^!Z` for `f: Spec Z[T] → Spec Z`: the dual of `f_! A = (A_∞/A)[-1]`
/// with `A_∞` read off the cokernels of `UT - 1`, on the safe zone.
pub fn shriek_unit_line(window: usize) -> Result<GradedModuleReport> {
    let (lo, hi) = safe_zone(window)?;
    let mut quotient = GradedGroup::new();
    for d in lo..=hi {
        // A_d is spanned by T^d = U^0 T^d, present only in degrees d ≥ 0
        let (a0, m) = presentation_piece(window, d);
        let with_a = if d >= 0 && a0 == 0 {
            m.hstack(&IntMatrix::from_triplets(m.rows(), 1, [(0, 0, BigInt::one())])?)?
        } else {
            m
        };
        quotient.add(d, Cokernel::new(&with_a).group());
    }
    GradedModuleReport::new(-1, quotient).graded_dual()
}
