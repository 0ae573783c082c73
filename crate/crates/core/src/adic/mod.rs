//! Rational subsets `U(g_1, ..., g_m / f)` as formal data, and the
//! refinement of a rational cover by a standard one. Terms are symbols with
//! formal multiplication only; no ideal membership is decided.

mod refine;
mod term;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use refine::{standard_refinement, Certificate, Refinement, RefinementMember, MAX_PRODUCTS};
pub use term::Term;

/// `{x : |g_i(x)| ≤ |f(x)| ≠ 0}`. The denominator is always one of the terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSubset", into = "RawSubset")]
pub struct RationalSubset {
    terms: BTreeSet<Term>,
    denominator: Term,
}

#[derive(Serialize, Deserialize)]
struct RawSubset {
    numerators: Vec<Term>,
    denominator: Term,
}

impl TryFrom<RawSubset> for RationalSubset {
    type Error = Error;

    fn try_from(raw: RawSubset) -> Result<Self> {
        Ok(RationalSubset::new(raw.numerators, raw.denominator))
    }
}

impl From<RationalSubset> for RawSubset {
    fn from(u: RationalSubset) -> Self {
        RawSubset {
            numerators: u.terms.into_iter().collect(),
            denominator: u.denominator,
        }
    }
}

impl RationalSubset {
    pub fn new(numerators: impl IntoIterator<Item = Term>, denominator: Term) -> Self {
        let mut terms: BTreeSet<Term> = numerators.into_iter().collect();
        terms.insert(denominator.clone());
        RationalSubset { terms, denominator }
    }

    /// The whole space `U(1/1)`.
    pub fn whole() -> Self {
        RationalSubset::new([], Term::one())
    }

    /// Sorted terms, denominator included.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = &Term> {
        self.terms.iter()
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    pub fn denominator(&self) -> &Term {
        &self.denominator
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for RationalSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        write!(f, "U({} / {})", terms.join(", "), self.denominator)
    }
}

/// `U(g/f) ∩ U(g'/f') = U({g_i g'_j} / f f')`.
pub fn intersect_rational(u: &RationalSubset, v: &RationalSubset) -> RationalSubset {
    let products = u.terms().flat_map(|a| v.terms().map(move |b| a.mul(b)));
    RationalSubset::new(products, u.denominator.mul(&v.denominator))
}

/// A finite family of rational subsets, with the caller's assertion that
/// each subset's terms generate the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCover {
    pub subsets: Vec<RationalSubset>,
    #[serde(default)]
    pub unit_ideal: bool,
}

impl RationalCover {
    pub fn new(subsets: Vec<RationalSubset>, unit_ideal: bool) -> Result<Self> {
        let cover = RationalCover { subsets, unit_ideal };
        cover.validate()?;
        Ok(cover)
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsets.is_empty() {
            return Err(Error::Structural("a rational cover needs at least one subset".into()));
        }
        Ok(())
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let cover: RationalCover = serde_json::from_str(src).map_err(|e| Error::Parse {
            offset: e.column(),
            message: e.to_string(),
        })?;
        cover.validate()?;
        Ok(cover)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn denominator_joins_the_terms() {
        let u = RationalSubset::new([t("T")], t("1"));
        assert_eq!(u.len(), 2);
        assert_eq!(u.to_string(), "U(1, T / 1)");
    }

    #[test]
    fn intersections() {
        let big = RationalSubset::new([t("T")], t("1"));
        let small = RationalSubset::new([t("1")], t("T"));
        let both = intersect_rational(&big, &small);
        assert_eq!(both, RationalSubset::new([t("1"), t("T"), t("T^2")], t("T")));
        assert_eq!(intersect_rational(&big, &RationalSubset::whole()), big);
        assert_eq!(intersect_rational(&RationalSubset::whole(), &small), small);
        let square = intersect_rational(&big, &big);
        assert_eq!(square.denominator(), &t("1"));
        assert_eq!(square.len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"subsets":[{"numerators":["T"],"denominator":"1"},{"numerators":["1"],"denominator":"T"}],"unit_ideal":true}"#;
        let cover = RationalCover::from_json(src).unwrap();
        assert_eq!(cover.subsets[0].len(), 2);
        let again = RationalCover::from_json(&serde_json::to_string(&cover).unwrap()).unwrap();
        assert_eq!(again, cover);
        assert!(RationalCover::from_json(r#"{"subsets":[],"unit_ideal":true}"#).is_err());
        assert!(RationalCover::from_json(r#"{"subsets":[{"numerators":["2x"],"denominator":"1"}]}"#).is_err());
    }
}
