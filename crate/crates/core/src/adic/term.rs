use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A formal product of named symbols; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    factors: BTreeMap<String, u32>,
}

impl Term {
    pub fn one() -> Self {
        Term::default()
    }

    pub fn symbol(name: &str) -> Self {
        Term {
            factors: BTreeMap::from([(name.to_string(), 1)]),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Term) -> Term {
        let mut out = self.clone();
        for (s, k) in &other.factors {
            *out.factors.entry(s.clone()).or_default() += k;
        }
        out
    }

    pub fn product<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
        terms.into_iter().fold(Term::one(), |acc, t| acc.mul(t))
    }

    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(s, &k)| if k == 1 { s.clone() } else { format!("{s}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for Term {
    type Err = Error;

    /// `1`, `T`, `T*U`, `T^2*U` (whitespace ignored, `1` factors absorbed).
    fn from_str(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                message: "empty term".into(),
            });
        }
        let mut term = Term::one();
        let mut offset = 0;
        for factor in s.split('*') {
            let err = |m: String| Error::Parse { offset, message: m };
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => (
                    n,
                    p.parse::<u32>().map_err(|e| err(format!("bad exponent `{p}`: {e}")))?,
                ),
                None => (factor, 1),
            };
            if name == "1" {
                offset += factor.len() + 1;
                continue;
            }
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(err(format!("bad symbol `{name}`")));
            }
            if power > 0 {
                *term.factors.entry(name.to_string()).or_default() += power;
            }
            offset += factor.len() + 1;
        }
        Ok(term)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
