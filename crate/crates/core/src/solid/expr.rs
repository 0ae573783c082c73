use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A formal index set for `∏_I Z`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexSet {
    Named(String),
    Finite(u64),
    Product(Vec<IndexSet>),
    Union(Vec<IndexSet>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `Z`, the tensor unit.
    Unit,
    Zero,
    ProdZ(IndexSet),
    /// `Z_p`, or `Z_p[[vars]]` when combined with power series.
    PAdic(u64),
    /// `Z[[vars]]`; repeated names stand for distinct variables.
    PowerSeries(Vec<String>),
    /// `Z_p[[vars]]`.
    AdicSeries(u64, Vec<String>),
    /// `Z((T^{-1})) / Z[T]`.
    LaurentBoundary(String),
    Real,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolidExpr {
    Atom(Atom),
    Tensor(Vec<SolidExpr>),
    Sum(Vec<SolidExpr>),
    Shift(i64, Box<SolidExpr>),
    DualToZ(Box<SolidExpr>),
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl SolidExpr {
    pub fn atom(a: Atom) -> Self {
        SolidExpr::Atom(a)
    }

    pub fn zero() -> Self {
        SolidExpr::Atom(Atom::Zero)
    }

    pub fn unit() -> Self {
        SolidExpr::Atom(Atom::Unit)
    }

    pub fn padic(p: u64) -> Self {
        SolidExpr::Atom(Atom::PAdic(p))
    }

    pub fn power_series(vars: &[&str]) -> Self {
        SolidExpr::Atom(Atom::PowerSeries(vars.iter().map(|v| v.to_string()).collect()))
    }

    pub fn tensor(parts: Vec<SolidExpr>) -> Self {
        SolidExpr::Tensor(parts)
    }

    pub fn sum(parts: Vec<SolidExpr>) -> Self {
        SolidExpr::Sum(parts)
    }

    pub fn shift(k: i64, e: SolidExpr) -> Self {
        SolidExpr::Shift(k, Box::new(e))
    }

    pub fn dual(e: SolidExpr) -> Self {
        SolidExpr::DualToZ(Box::new(e))
    }

    /// Structural well-formedness: nonempty nodes, prime `p`, nonempty
    /// variable lists and index-set nodes.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Structural(m));
        match self {
            SolidExpr::Atom(a) => match a {
                Atom::PAdic(p) | Atom::AdicSeries(p, _) if !is_prime(*p) => bad(format!("{p} is not prime")),
                Atom::PowerSeries(v) | Atom::AdicSeries(_, v) if v.is_empty() => {
                    bad("power series without variables".into())
                }
                Atom::ProdZ(i) => validate_index(i),
                _ => Ok(()),
            },
            SolidExpr::Tensor(xs) | SolidExpr::Sum(xs) => {
                if xs.is_empty() {
                    return bad("empty tensor or sum node".into());
                }
                xs.iter().try_for_each(SolidExpr::validate)
            }
            SolidExpr::Shift(_, e) | SolidExpr::DualToZ(e) => e.validate(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SolidExpr::Atom(_) => 1,
            SolidExpr::Tensor(xs) | SolidExpr::Sum(xs) => 1 + xs.iter().map(SolidExpr::depth).max().unwrap_or(0),
            SolidExpr::Shift(_, e) | SolidExpr::DualToZ(e) => 1 + e.depth(),
        }
    }
}

fn validate_index(i: &IndexSet) -> Result<()> {
    match i {
        IndexSet::Named(n) if n.is_empty() => Err(Error::Structural("empty index-set name".into())),
        IndexSet::Product(xs) | IndexSet::Union(xs) => {
            if xs.is_empty() {
                return Err(Error::Structural("empty index-set node".into()));
            }
            xs.iter().try_for_each(validate_index)
        }
        _ => Ok(()),
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Named(n) => write!(f, "{n}"),
            IndexSet::Finite(k) => write!(f, "{k}"),
            IndexSet::Product(xs) => {
                let parts: Vec<String> = xs
                    .iter()
                    .map(|x| match x {
                        IndexSet::Union(_) => format!("({x})"),
                        _ => x.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
            IndexSet::Union(xs) => {
                let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Unit => write!(f, "1"),
            Atom::Zero => write!(f, "0"),
            Atom::ProdZ(i) => write!(f, "Prod({i})"),
            Atom::PAdic(p) => write!(f, "Zp({p})"),
            Atom::PowerSeries(v) => write!(f, "PS({})", v.join(",")),
            Atom::AdicSeries(p, v) => write!(f, "Zp({p})[[{}]]", v.join(",")),
            Atom::LaurentBoundary(t) => write!(f, "Laurent({t})"),
            Atom::Real => write!(f, "R"),
        }
    }
}

impl SolidExpr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: sum level, 1: tensor level, 2: postfix operand
        match self {
            SolidExpr::Atom(a) => write!(f, "{a}"),
            SolidExpr::Sum(xs) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " (+) ")?;
                    }
                    x.fmt_prec(f, 1)?;
                }
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SolidExpr::Tensor(xs) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " (x) ")?;
                    }
                    x.fmt_prec(f, 2)?;
                }
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            SolidExpr::Shift(k, e) => {
                e.fmt_prec(f, 2)?;
                write!(f, "[{k}]")
            }
            SolidExpr::DualToZ(e) => {
                write!(f, "Dual(")?;
                e.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SolidExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Serialize for SolidExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
