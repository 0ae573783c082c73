use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{RationalCover, Term};
use crate::error::{Error, Result};

/// Largest number of factor tuples enumerated.
pub const MAX_PRODUCTS: usize = 1 << 16;

/// Why `U(T / s) ⊆ U_i`: `s = h_1 ⋯ h_n` with `h_i = f_i`, and for every
/// term `g` of `U_i` the product with `h_i` replaced by `g` lies in `T`, so
/// `|g| |s / f_i| ≤ |s|` on `U(T / s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subset: usize,
    pub factors: Vec<Term>,
    pub witnesses: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementMember {
    pub denominator: Term,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    /// `T`: every product `h_1 ⋯ h_n` with `h_i` a term of `U_i`.
    pub products: Vec<Term>,
    /// `S`: one standard subset `U(T / s)` per member.
    pub members: Vec<RefinementMember>,
    /// `∏ |terms of U_i|`.
    pub bound: usize,
}

fn tuples(cover: &RationalCover) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for u in &cover.subsets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                u.terms().map(move |h| {
                    let mut next = prefix.clone();
                    next.push(h.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// The standard rational cover by `U(T / s)`, `s ∈ S`, where `S` holds the
/// products with some factor equal to the corresponding denominator. Each
/// member is certified by the lexicographically first such tuple and its
/// first matching position.
pub fn standard_refinement(cover: &RationalCover) -> Result<Refinement> {
    cover.validate()?;
    if !cover.unit_ideal {
        return Err(Error::Refused(
            "the cover does not assert that each subset's terms generate the unit ideal".into(),
        ));
    }
    let bound = cover
        .subsets
        .iter()
        .try_fold(1usize, |acc, u| acc.checked_mul(u.len()))
        .filter(|&b| b <= MAX_PRODUCTS)
        .ok_or_else(|| Error::Refused(format!("more than {MAX_PRODUCTS} products")))?;

    let all = tuples(cover);
    let products: BTreeSet<Term> = all.iter().map(Term::product).collect();
    let mut members: BTreeMap<Term, Certificate> = BTreeMap::new();
    for factors in all {
        let Some(i) = (0..factors.len()).find(|&i| &factors[i] == cover.subsets[i].denominator()) else {
            continue;
        };
        let s = Term::product(&factors);
        if members.contains_key(&s) {
            continue;
        }
        let rest = Term::product(factors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h));
        let witnesses = cover.subsets[i].terms().map(|g| g.mul(&rest)).collect();
        members.insert(
            s,
            Certificate {
                subset: i,
                factors,
                witnesses,
            },
        );
    }
    Ok(Refinement {
        products: products.into_iter().collect(),
        members: members
            .into_iter()
            .map(|(denominator, certificate)| RefinementMember {
                denominator,
                certificate,
            })
            .collect(),
        bound,
    })
}

impl Refinement {
    /// Rechecks every certificate against the cover.
    pub fn verify(&self, cover: &RationalCover) -> Result<()> {
        let products: BTreeSet<&Term> = self.products.iter().collect();
        let fail = |m: String| Err(Error::Certificate(m));
        if self.members.len() > self.bound || self.products.len() > self.bound {
            return fail(format!(
                "{} members exceed the bound {}",
                self.members.len(),
                self.bound
            ));
        }
        for m in &self.members {
            let c = &m.certificate;
            let Some(u) = cover.subsets.get(c.subset) else {
                return fail(format!("{} is assigned to a missing subset", m.denominator));
            };
            if c.factors.len() != cover.subsets.len()
                || c.factors.iter().zip(&cover.subsets).any(|(h, v)| !v.contains_term(h))
            {
                return fail(format!("factors of {} are not terms of the cover", m.denominator));
            }
            if &c.factors[c.subset] != u.denominator() {
                return fail(format!("{} has no denominator at position {}", m.denominator, c.subset));
            }
            if Term::product(&c.factors) != m.denominator || !products.contains(&m.denominator) {
                return fail(format!("{} is not the product of its factors", m.denominator));
            }
            let rest = Term::product(
                c.factors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c.subset)
                    .map(|(_, h)| h),
            );
            let expected: Vec<Term> = u.terms().map(|g| g.mul(&rest)).collect();
            if c.witnesses != expected || c.witnesses.iter().any(|w| !products.contains(w)) {
                return fail(format!("witnesses for {} do not lie in T", m.denominator));
            }
        }
        Ok(())
    }

    pub fn denominators(&self) -> Vec<&Term> {
        self.members.iter().map(|m| &m.denominator).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::RationalSubset;
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn cover(subsets: &[(&[&str], &str)]) -> RationalCover {
        let subsets = subsets
            .iter()
            .map(|(g, f)| RationalSubset::new(g.iter().map(|s| t(s)), t(f)))
            .collect();
        RationalCover::new(subsets, true).unwrap()
    }

    #[test]
    fn two_halves_of_the_disc() {
        let c = cover(&[(&["T", "1"], "T"), (&["T", "1"], "1")]);
        let r = standard_refinement(&c).unwrap();
        assert_eq!(r.products, vec![t("1"), t("T"), t("T^2")]);
        assert_eq!(r.denominators(), vec![&t("1"), &t("T"), &t("T^2")]);
        assert_eq!(r.bound, 4);
        r.verify(&c).unwrap();
        let one = &r.members[0].certificate;
        assert_eq!((one.subset, one.factors.clone()), (1, vec![t("1"), t("1")]));
    }

    #[test]
    fn single_subset() {
        let c = cover(&[(&["g"], "f")]);
        let r = standard_refinement(&c).unwrap();
        assert_eq!(r.denominators(), vec![&t("f")]);
        assert_eq!(r.members[0].certificate.subset, 0);
    }

    #[test]
    fn refuses_without_the_flag() {
        let mut c = cover(&[(&["g"], "f")]);
        c.unit_ideal = false;
        assert!(matches!(standard_refinement(&c), Err(Error::Refused(_))));
    }

    #[test]
    fn tampered_certificates_fail() {
        let c = cover(&[(&["a", "b"], "f"), (&["c"], "g")]);
        let mut r = standard_refinement(&c).unwrap();
        assert_eq!(r.products.len(), 6);
        r.verify(&c).unwrap();
        r.members[0].certificate.subset = 1 - r.members[0].certificate.subset;
        assert!(matches!(r.verify(&c), Err(Error::Certificate(_))));
    }
}
