//! Truncated Laurent series and graded reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{FgAbGroup, GradedGroup};

/// `[-N/2, N/2]`, the degrees untouched by truncation in a window of
/// radius `N`. Empty (an error) below `N = 2`.
pub fn safe_zone(window: usize) -> Result<(i64, i64)> {
    if window < 2 {
        return Err(Error::WindowUnderflow(format!(
            "window {window} has an empty safe zone"
        )));
    }
    let h = (window / 2) as i64;
    Ok((-h, h))
}

/// An element of `Z((T^{-1}))` with support in `[-N, N]`. Products drop the
/// out-of-window terms and remember that they did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    var: String,
    window: usize,
    coeffs: BTreeMap<i64, BigInt>,
    truncated: bool,
}

impl LaurentWindow {
    pub fn zero(var: &str, window: usize) -> Self {
        LaurentWindow {
            var: var.to_string(),
            window,
            coeffs: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn monomial(var: &str, window: usize, degree: i64) -> Result<Self> {
        let mut w = Self::zero(var, window);
        if degree.unsigned_abs() as usize > window {
            return Err(Error::WindowUnderflow(format!(
                "degree {degree} lies outside the window {window}"
            )));
        }
        w.coeffs.insert(degree, BigInt::from(1));
        Ok(w)
    }

    /// Collects `(degree, coefficient)` pairs, adding repeated degrees.
    pub fn from_coefficients<I>(var: &str, window: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let mut w = Self::zero(var, window);
        for (d, c) in coeffs {
            if d.unsigned_abs() as usize > window {
                return Err(Error::WindowUnderflow(format!(
                    "degree {d} lies outside the window {window}"
                )));
            }
            *w.coeffs.entry(d).or_default() += c;
        }
        w.coeffs.retain(|_, c| !c.is_zero());
        Ok(w)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn coefficient(&self, degree: i64) -> BigInt {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    /// Whether some product leading here dropped a term.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn in_safe_zone(&self) -> bool {
        let h = (self.window / 2) as i64;
        self.coeffs.keys().all(|d| d.abs() <= h)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.var != other.var || self.window != other.window {
            return Err(Error::ShapeMismatch("Laurent windows differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&d, c) in &other.coeffs {
            *out.coeffs.entry(d).or_default() += c;
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.window as i64;
        let mut out = Self::zero(&self.var, self.window);
        out.truncated = self.truncated || other.truncated;
        for (&a, x) in &self.coeffs {
            for (&b, y) in &other.coeffs {
                if (a + b).abs() > n {
                    out.truncated = true;
                } else {
                    *out.coeffs.entry(a + b).or_default() += x * y;
                }
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// Internal grading together with a homological shift: the object
/// `(⊕_d M_d)[shift]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedModuleReport {
    pub shift: i64,
    pub degrees: GradedGroup,
}

impl GradedModuleReport {
    pub fn new(shift: i64, degrees: GradedGroup) -> Self {
        GradedModuleReport { shift, degrees }
    }

    /// Degrees within `[lo, hi]` only.
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        let mut g = GradedGroup::new();
        for (d, x) in self.degrees.iter().filter(|&(d, _)| lo <= d && d <= hi) {
            g.add(d, x.clone());
        }
        GradedModuleReport::new(self.shift, g)
    }

    /// `RHom(-, Z)` of a degreewise free report: internal degree `d ↦ -d`
    /// and the homological shift negated.
    pub fn graded_dual(&self) -> Result<Self> {
        let mut free = GradedGroup::new();
        for (d, g) in self.degrees.iter() {
            if !g.is_free() {
                return Err(Error::Structural(format!(
                    "degree {d} has torsion, so its dual is not concentrated"
                )));
            }
            free.add(-d, g.clone());
        }
        Ok(GradedModuleReport::new(-self.shift, free))
    }

    pub fn tensor_group(&self, p: &FgAbGroup) -> Self {
        let mut g = GradedGroup::new();
        for (d, x) in self.degrees.iter() {
            g.add(d, x.tensor(p));
        }
        GradedModuleReport::new(self.shift, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_multiply_and_truncate() {
        let t = LaurentWindow::monomial("T", 4, -1).unwrap();
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t2, LaurentWindow::monomial("T", 4, -2).unwrap());
        assert!(!t2.truncated());
        let big = LaurentWindow::monomial("T", 4, 3).unwrap();
        let p = big.mul(&big).unwrap();
        assert!(p.truncated() && p.support().is_empty());
        assert!(LaurentWindow::monomial("T", 4, 5).is_err());
        assert!(t.in_safe_zone() && !big.in_safe_zone());
    }

    #[test]
    fn sums_distribute() {
        let m = |d| LaurentWindow::monomial("T", 4, d).unwrap();
        let p = m(1).add(&m(-1)).unwrap().mul(&m(-1)).unwrap();
        assert_eq!(p, m(0).add(&m(-2)).unwrap());
        assert_eq!(p.coefficient(-2), BigInt::from(1));
        assert!(m(1).add(&LaurentWindow::zero("U", 4)).is_err());
    }

    #[test]
    fn safe_zone_needs_two() {
        assert!(safe_zone(1).is_err());
        assert_eq!(safe_zone(8).unwrap(), (-4, 4));
    }

    #[test]
    fn report_json() {
        let r = GradedModuleReport::new(1, GradedGroup::concentrated(0, FgAbGroup::free(1)));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"shift":1,"degrees":{"0":{"rank":1,"torsion":[]}}}"#
        );
        assert_eq!(r.graded_dual().unwrap().shift, -1);
        let t = GradedModuleReport::new(0, GradedGroup::concentrated(0, FgAbGroup::cyclic(2)));
        assert!(t.graded_dual().is_err());
    }
}
