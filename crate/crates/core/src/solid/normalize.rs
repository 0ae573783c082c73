//! Normal forms.
//!
//! A normal form is a finite formal sum of terms with multiplicities. A term
//! is a shifted tensor product of at most one adic factor `Z_p[[V]]` (prime
//! optional, variables a multiset), at most one product `∏_{I_1×…×I_k} Z`
//! over named sets, Laurent boundaries and irreducible duals. The
//! normalizer computes this form directly by structural recursion, so the
//! result does not depend on any rewriting order.

use std::collections::BTreeMap;
use std::fmt;

use super::expr::{Atom, IndexSet, SolidExpr};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdicFactor {
    pub prime: Option<u64>,
    pub vars: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub shift: i64,
    pub adic: Option<AdicFactor>,
    pub prod: Vec<String>,
    pub laurent: Vec<String>,
    /// Duals of unshifted, non-unit terms.
    pub duals: Vec<Term>,
}

impl Term {
    pub fn unit() -> Self {
        Term::default()
    }

    fn is_unit_unshifted(&self) -> bool {
        self.adic.is_none() && self.prod.is_empty() && self.laurent.is_empty() && self.duals.is_empty()
    }

    /// `None` when the product vanishes.
    fn tensor(&self, other: &Term) -> Option<Term> {
        let adic = match (&self.adic, &other.adic) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => {
                let prime = match (a.prime, b.prime) {
                    (Some(p), Some(q)) if p != q => return None,
                    (p, q) => p.or(q),
                };
                Some(AdicFactor {
                    prime,
                    vars: merged(&a.vars, &b.vars),
                })
            }
        };
        Some(Term {
            shift: self.shift + other.shift,
            adic,
            prod: merged(&self.prod, &other.prod),
            laurent: merged(&self.laurent, &other.laurent),
            duals: merged(&self.duals, &other.duals),
        })
    }

    fn dual(&self) -> Term {
        let inner = Term {
            shift: 0,
            ..self.clone()
        };
        if inner.is_unit_unshifted() {
            Term {
                shift: -self.shift,
                ..Term::unit()
            }
        } else {
            Term {
                shift: -self.shift,
                duals: vec![inner],
                ..Term::unit()
            }
        }
    }

    fn to_expr(&self) -> SolidExpr {
        let mut factors = Vec::new();
        if let Some(a) = &self.adic {
            factors.push(SolidExpr::Atom(match (a.prime, a.vars.is_empty()) {
                (Some(p), true) => Atom::PAdic(p),
                (Some(p), false) => Atom::AdicSeries(p, a.vars.clone()),
                (None, _) => Atom::PowerSeries(a.vars.clone()),
            }));
        }
        if !self.prod.is_empty() {
            let names: Vec<IndexSet> = self.prod.iter().cloned().map(IndexSet::Named).collect();
            let index = if names.len() == 1 {
                names.into_iter().next().unwrap()
            } else {
                IndexSet::Product(names)
            };
            factors.push(SolidExpr::Atom(Atom::ProdZ(index)));
        }
        for t in &self.laurent {
            factors.push(SolidExpr::Atom(Atom::LaurentBoundary(t.clone())));
        }
        for d in &self.duals {
            factors.push(SolidExpr::dual(d.to_expr()));
        }
        let body = match factors.len() {
            0 => SolidExpr::unit(),
            1 => factors.pop().unwrap(),
            _ => SolidExpr::Tensor(factors),
        };
        if self.shift == 0 {
            body
        } else {
            SolidExpr::shift(self.shift, body)
        }
    }
}

fn merged<T: Clone + Ord>(a: &[T], b: &[T]) -> Vec<T> {
    let mut v: Vec<T> = a.iter().chain(b).cloned().collect();
    v.sort();
    v
}

/// A formal sum of terms with positive multiplicities; empty means `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    terms: BTreeMap<Term, u64>,
}

fn too_large() -> Error {
    Error::Structural("multiplicity exceeds 2^64".into())
}

impl NormalForm {
    pub fn zero() -> Self {
        NormalForm::default()
    }

    fn single(t: Term) -> Self {
        NormalForm::with_multiplicity(t, 1)
    }

    fn with_multiplicity(t: Term, m: u64) -> Self {
        let mut terms = BTreeMap::new();
        if m > 0 {
            terms.insert(t, m);
        }
        NormalForm { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, u64)> {
        self.terms.iter().map(|(t, &m)| (t, m))
    }

    fn add_assign(&mut self, t: Term, m: u64) -> Result<()> {
        let slot = self.terms.entry(t).or_insert(0);
        *slot = slot.checked_add(m).ok_or_else(too_large)?;
        Ok(())
    }

    fn add(mut self, other: NormalForm) -> Result<NormalForm> {
        for (t, m) in other.terms {
            self.add_assign(t, m)?;
        }
        Ok(self)
    }

    fn tensor(&self, other: &NormalForm) -> Result<NormalForm> {
        let mut out = NormalForm::zero();
        for (a, &m) in &self.terms {
            for (b, &n) in &other.terms {
                if let Some(t) = a.tensor(b) {
                    out.add_assign(t, m.checked_mul(n).ok_or_else(too_large)?)?;
                }
            }
        }
        Ok(out)
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Result<NormalForm> {
        let mut out = NormalForm::zero();
        for (t, &m) in &self.terms {
            out.add_assign(f(t), m)?;
        }
        Ok(out)
    }

    /// The normal form as an expression; multiplicity `m > 1` is written
    /// `Prod(m) (x) term`.
    pub fn to_expr(&self) -> SolidExpr {
        let mut parts: Vec<SolidExpr> = self
            .terms
            .iter()
            .map(|(t, &m)| {
                let e = t.to_expr();
                if m == 1 {
                    return e;
                }
                let count = SolidExpr::Atom(Atom::ProdZ(IndexSet::Finite(m)));
                if *t == Term::unit() {
                    count
                } else {
                    SolidExpr::tensor(vec![count, e])
                }
            })
            .collect();
        match parts.len() {
            0 => SolidExpr::zero(),
            1 => parts.pop().unwrap(),
            _ => SolidExpr::Sum(parts),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Index set as a polynomial: monomial of names to multiplicity.
fn index_polynomial(i: &IndexSet) -> Result<BTreeMap<Vec<String>, u64>> {
    let mut out = BTreeMap::new();
    match i {
        IndexSet::Named(n) => {
            out.insert(vec![n.clone()], 1);
        }
        IndexSet::Finite(k) => {
            if *k > 0 {
                out.insert(vec![], *k);
            }
        }
        IndexSet::Union(xs) => {
            for x in xs {
                for (m, c) in index_polynomial(x)? {
                    let slot = out.entry(m).or_insert(0u64);
                    *slot = slot.checked_add(c).ok_or_else(too_large)?;
                }
            }
        }
        IndexSet::Product(xs) => {
            out.insert(vec![], 1);
            for x in xs {
                let p = index_polynomial(x)?;
                let mut next = BTreeMap::new();
                for (ma, ca) in &out {
                    for (mb, cb) in &p {
                        let slot = next.entry(merged(ma, mb)).or_insert(0u64);
                        let c = ca.checked_mul(*cb).ok_or_else(too_large)?;
                        *slot = slot.checked_add(c).ok_or_else(too_large)?;
                    }
                }
                out = next;
            }
        }
    }
    Ok(out)
}

pub fn normal_form(e: &SolidExpr) -> Result<NormalForm> {
    e.validate()?;
    nf(e)
}

fn nf(e: &SolidExpr) -> Result<NormalForm> {
    let adic = |prime: Option<u64>, vars: &[String]| {
        let mut vars = vars.to_vec();
        vars.sort();
        NormalForm::single(Term {
            adic: Some(AdicFactor { prime, vars }),
            ..Term::unit()
        })
    };
    Ok(match e {
        SolidExpr::Atom(a) => match a {
            Atom::Unit => NormalForm::single(Term::unit()),
            // the solidification of R vanishes
            Atom::Zero | Atom::Real => NormalForm::zero(),
            Atom::PAdic(p) => adic(Some(*p), &[]),
            Atom::PowerSeries(v) => adic(None, v),
            Atom::AdicSeries(p, v) => adic(Some(*p), v),
            Atom::LaurentBoundary(t) => NormalForm::single(Term {
                laurent: vec![t.clone()],
                ..Term::unit()
            }),
            Atom::ProdZ(i) => {
                let mut out = NormalForm::zero();
                for (prod, c) in index_polynomial(i)? {
                    out.add_assign(Term { prod, ..Term::unit() }, c)?;
                }
                out
            }
        },
        SolidExpr::Sum(xs) => xs.iter().try_fold(NormalForm::zero(), |acc, x| acc.add(nf(x)?))?,
        SolidExpr::Tensor(xs) => xs
            .iter()
            .try_fold(NormalForm::single(Term::unit()), |acc, x| acc.tensor(&nf(x)?))?,
        SolidExpr::Shift(k, x) => nf(x)?.map_terms(|t| Term {
            shift: t.shift + k,
            ..t.clone()
        })?,
        SolidExpr::DualToZ(x) => nf(x)?.map_terms(Term::dual)?,
    })
}

/// Normalizes `e` and returns the normal form as an expression.
pub fn normalize(e: &SolidExpr) -> Result<SolidExpr> {
    Ok(normal_form(e)?.to_expr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solid::parse_expr;

    fn n(s: &str) -> String {
        normalize(&parse_expr(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn basic_identities() {
        assert_eq!(n("Zp(2) (x) R"), "0");
        assert_eq!(n("Zp(2) (x) Zp(3)"), "0");
        assert_eq!(n("Zp(5) (x) Zp(5)"), "Zp(5)");
        assert_eq!(n("Zp(5) (x) PS(T)"), "Zp(5)[[T]]");
        assert_eq!(n("PS(U) (x) PS(T)"), "PS(T,U)");
    }

    #[test]
    fn units_shifts_and_sums() {
        assert_eq!(n("1 (x) Laurent(T)"), "Laurent(T)");
        assert_eq!(n("(Zp(2) (+) 0)[1] (x) 1[2]"), "Zp(2)[3]");
        assert_eq!(n("Laurent(T)[0]"), "Laurent(T)");
        assert_eq!(n("(1 (+) 1) (x) (1 (+) 1 (+) 1)"), "Prod(6)");
        assert_eq!(n("Zp(2) (+) Zp(2)"), "Prod(2) (x) Zp(2)");
    }

    #[test]
    fn products() {
        assert_eq!(n("Prod(I) (x) Prod(J)"), "Prod(I*J)");
        assert_eq!(n("Prod(J*I)"), "Prod(I*J)");
        assert_eq!(n("Prod(0)"), "0");
        assert_eq!(n("Prod(1)"), "1");
        assert_eq!(n("Prod(2) (x) Prod(3)"), "Prod(6)");
        assert_eq!(n("Prod(I+J)"), "Prod(I) (+) Prod(J)");
        assert_eq!(n("Prod(2*I)"), "Prod(2) (x) Prod(I)");
    }

    #[test]
    fn duals() {
        assert_eq!(n("Dual(0)"), "0");
        assert_eq!(n("Dual(1)"), "1");
        assert_eq!(n("Dual(Laurent(T)[2])"), "Dual(Laurent(T))[-2]");
        assert_eq!(n("Dual(Zp(2) (+) 1)"), "1 (+) Dual(Zp(2))");
        assert_eq!(n("Dual(Dual(Zp(3)))"), "Dual(Dual(Zp(3)))");
    }

    #[test]
    fn structural_errors() {
        let empty = SolidExpr::Tensor(vec![]);
        assert!(matches!(normalize(&empty), Err(Error::Structural(_))));
        assert!(matches!(normalize(&SolidExpr::padic(9)), Err(Error::Structural(_))));
    }
}
