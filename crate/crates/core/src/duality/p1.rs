//! Serre duality on the projective line through the two-chart Čech complex.
//!
//! On `U_0 = Spec Z[t]` and `U_1 = Spec Z[t^{-1}]` a section of `O(n)` is a
//! pair `(f, g)` with `f ∈ Z[t]`, `g ∈ t^n Z[t^{-1}]`, compared on the
//! overlap. The trace `H^1(O(-2)) → Z` is the coefficient of `t^{-1}`,
//! which is the monomial `x_0^{-1} x_1^{-1}` in homogeneous coordinates.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::window::LaurentWindow;
use crate::error::{Error, Result};
use crate::exact::{kernel_basis, solve, Cokernel, FgAbGroup, IntMatrix};

pub const DEFAULT_TWIST_BOUND: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LineBundleOnP1 {
    pub twist: i64,
}

impl LineBundleOnP1 {
    pub fn new(twist: i64) -> Self {
        LineBundleOnP1 { twist }
    }

    /// Chart monomials in `[-W, W]`: `t^0..t^W` on `U_0`, then
    /// `t^{-W}..t^n` on `U_1`.
    fn chart_degrees(&self, window: usize) -> (Vec<i64>, Vec<i64>) {
        let w = window as i64;
        ((0..=w).collect(), (-w..=self.twist.min(w)).collect())
    }

    /// `δ(f, g) = f - g` into the Laurent monomials `t^{-W}..t^W`.
    pub fn coboundary(&self, window: usize) -> IntMatrix {
        let w = window as i64;
        let (u0, u1) = self.chart_degrees(window);
        let entries = u0
            .iter()
            .map(|&k| ((k + w) as usize, BigInt::one()))
            .chain(u1.iter().map(|&k| ((k + w) as usize, -BigInt::one())))
            .enumerate()
            .map(|(col, (row, v))| (row, col, v));
        IntMatrix::from_triplets(2 * window + 1, u0.len() + u1.len(), entries).expect("indices in range")
    }

    pub fn h0(&self, window: usize) -> FgAbGroup {
        FgAbGroup::free(kernel_basis(&self.coboundary(window)).cols())
    }

    pub fn h1(&self, window: usize) -> FgAbGroup {
        Cokernel::new(&self.coboundary(window)).group()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerrePairingReport {
    pub twist: i64,
    pub window: usize,
    pub h0_rank: usize,
    pub h1_rank: usize,
    /// `⟨s_i, c_j⟩ = tr(s_i ∪ c_j)`, rows indexed by `H^0(O(n))`.
    pub pairing: Vec<Vec<i64>>,
    pub determinant: Option<i64>,
    pub perfect: bool,
}

fn laurent(vector: impl Iterator<Item = BigInt>, window: usize) -> Result<LaurentWindow> {
    let w = window as i64;
    LaurentWindow::from_coefficients("t", window, vector.enumerate().map(|(i, c)| (i as i64 - w, c)))
}

/// The pairing `H^0(O(n)) × H^1(O(-n-2)) → H^1(O(-2)) → Z`.
pub fn p1_serre_pairing(n: i64, bound: u64) -> Result<SerrePairingReport> {
    if n.unsigned_abs() > bound {
        return Err(Error::Refused(format!("twist {n} exceeds the bound {bound}")));
    }
    let window = n.unsigned_abs() as usize + 2;
    let line = LineBundleOnP1::new(n);
    let dual = LineBundleOnP1::new(-n - 2);
    let canonical = LineBundleOnP1::new(-2);

    // the t^{-1} coefficient vanishes on coboundaries, so it is a trace
    let residue_row = window - 1;
    let omega = canonical.coboundary(window);
    if canonical.h1(window) != FgAbGroup::free(1) || !omega.row(residue_row).is_empty() {
        return Err(Error::Structural("H^1(O(-2)) is not Z on the residue".into()));
    }

    // sections: kernel vectors, read off on U_0
    let delta = line.coboundary(window);
    let kernel = kernel_basis(&delta);
    let u0 = window + 1;
    let sections: Vec<LaurentWindow> = (0..kernel.cols())
        .map(|j| {
            laurent(
                (0..2 * window + 1).map(|row| {
                    if row >= window && row - window < u0 {
                        kernel.get(row - window, j)
                    } else {
                        BigInt::zero()
                    }
                }),
                window,
            )
        })
        .collect::<Result<_>>()?;

    // classes: lifts of the cokernel coordinates
    let delta_dual = dual.coboundary(window);
    let coker = Cokernel::new(&delta_dual);
    let h1_rank = coker.group().rank();
    let rows = delta_dual.rows();
    let columns: Vec<Vec<BigInt>> = (0..rows)
        .map(|k| {
            coker.project(
                &(0..rows)
                    .map(|i| if i == k { BigInt::one() } else { BigInt::zero() })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let projection = IntMatrix::from_triplets(
        h1_rank,
        rows,
        columns
            .iter()
            .enumerate()
            .flat_map(|(k, c)| c.iter().enumerate().map(move |(r, v)| (r, k, v.clone()))),
    )?;
    let lifts = solve(&projection, &IntMatrix::identity(h1_rank))?
        .ok_or_else(|| Error::Structural("cokernel coordinates do not lift".into()))?;
    let classes: Vec<LaurentWindow> = (0..h1_rank)
        .map(|j| laurent((0..rows).map(|r| lifts.get(r, j)), window))
        .collect::<Result<_>>()?;

    // products leaving the window drop terms of degree > W ≥ 0 or < -W ≤ -2,
    // which are coboundaries in O(-2)
    let mut pairing = Vec::new();
    for s in &sections {
        let row = classes
            .iter()
            .map(|c| {
                let v = s.mul(c)?.coefficient(-1);
                v.to_i64()
                    .ok_or_else(|| Error::Structural("pairing entry overflows".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        pairing.push(row);
    }

    let h0_rank = sections.len();
    let (determinant, perfect) = if h0_rank == 0 && h1_rank == 0 {
        (None, true)
    } else if h0_rank == h1_rank {
        let m = IntMatrix::from_dense(&pairing)?;
        let det = m.determinant()?;
        (det.to_i64(), det.abs().is_one())
    } else {
        (None, false)
    };
    Ok(SerrePairingReport {
        twist: n,
        window,
        h0_rank,
        h1_rank,
        pairing,
        determinant,
        perfect,
    })
}
