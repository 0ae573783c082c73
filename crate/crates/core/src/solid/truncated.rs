//! Level-`N` truncations of solid expressions as finitely presented graded
//! abelian groups.
//!
//! `Z_p` becomes `Z/p^N`, `Z[[T]]` becomes `Z[T]/T^N`, the Laurent boundary
//! becomes free on `T^{-1}, …, T^{-N}` and `∏_k Z` becomes `Z^k`. Tensor
//! products are taken on presentations (underived), duals send a free
//! summand in degree `d` to degree `-d` and a torsion summand to `-d-1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use super::expr::{Atom, IndexSet, SolidExpr};
use super::normalize::normal_form;
use crate::error::{Error, Result};
use crate::exact::{invariant_factors, FgAbGroup, GradedGroup, IntMatrix};

/// Upper bound on generators in a single realization.
pub const MAX_GENERATORS: usize = 1 << 14;

/// `coker(relations)` with one labeled generator per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: IntMatrix,
}

impl Presentation {
    fn free(generators: Vec<String>) -> Self {
        let n = generators.len();
        Presentation {
            generators,
            relations: IntMatrix::zeros(n, 0),
        }
    }

    /// Generator `i` subject to `moduli[i] · g_i = 0` (0 for none).
    fn diagonal(generators: Vec<String>, moduli: &[BigInt]) -> Self {
        let n = generators.len();
        let cols: Vec<usize> = (0..n).filter(|&i| !moduli[i].is_zero()).collect();
        let relations = IntMatrix::from_triplets(
            n,
            cols.len(),
            cols.iter().enumerate().map(|(c, &i)| (i, c, moduli[i].clone())),
        )
        .expect("one entry per column");
        Presentation { generators, relations }
    }

    fn len(&self) -> usize {
        self.generators.len()
    }

    /// Per-generator moduli when every relation involves one generator.
    fn moduli(&self) -> Option<Vec<BigInt>> {
        let mut per_col: Vec<Option<(usize, BigInt)>> = vec![None; self.relations.cols()];
        for (i, j, v) in self.relations.triplets() {
            if per_col[j].is_some() {
                return None;
            }
            per_col[j] = Some((i, v.clone()));
        }
        let mut moduli = vec![BigInt::zero(); self.len()];
        for (i, v) in per_col.into_iter().flatten() {
            moduli[i] = moduli[i].gcd(&v);
        }
        Some(moduli)
    }

    pub fn group(&self) -> FgAbGroup {
        if let Some(moduli) = self.moduli() {
            return FgAbGroup::from_cyclic_orders(0, moduli);
        }
        self.group_reference()
    }

    fn group_reference(&self) -> FgAbGroup {
        let f = invariant_factors(&self.relations);
        FgAbGroup::from_cyclic_orders(self.len() - f.len(), f)
    }

    /// Drops generators killed by a unit relation, when relations are
    /// diagonal.
    fn simplify(self) -> Self {
        let Some(moduli) = self.moduli() else {
            return self;
        };
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !moduli[i].is_one()).collect();
        Presentation::diagonal(
            keep.iter().map(|&i| self.generators[i].clone()).collect(),
            &keep.iter().map(|&i| moduli[i].clone()).collect::<Vec<_>>(),
        )
    }

    fn direct_sum(&self, other: &Presentation) -> Presentation {
        Presentation {
            generators: self.generators.iter().chain(&other.generators).cloned().collect(),
            relations: self.relations.block_diag(&other.relations),
        }
    }

    fn tensor(&self, other: &Presentation) -> Presentation {
        let generators: Vec<String> = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| tensor_label(a, b)))
            .collect();
        if let (Some(a), Some(b)) = (self.moduli(), other.moduli()) {
            // Z/a ⊗ Z/b = Z/gcd(a, b)
            let moduli: Vec<BigInt> = a.iter().flat_map(|x| b.iter().map(move |y| x.gcd(y))).collect();
            return Presentation::diagonal(generators, &moduli).simplify();
        }
        self.tensor_reference(other, generators)
    }

    fn tensor_reference(&self, other: &Presentation, generators: Vec<String>) -> Presentation {
        let (n, m) = (self.len(), other.len());
        let left = self.relations.kron(&IntMatrix::identity(m));
        let right = IntMatrix::identity(n).kron(&other.relations);
        Presentation {
            generators,
            relations: left.hstack(&right).expect("both blocks have n·m rows"),
        }
        .simplify()
    }
}

fn tensor_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", x) | (x, "1") => x.to_string(),
        _ => format!("{a}⊗{b}"),
    }
}

/// A graded finitely presented abelian group at truncation level `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedModule {
    pub level: usize,
    pub degrees: BTreeMap<i64, Presentation>,
}

impl TruncatedModule {
    fn zero(level: usize) -> Self {
        TruncatedModule {
            level,
            degrees: BTreeMap::new(),
        }
    }

    fn concentrated(level: usize, p: Presentation) -> Self {
        let mut m = TruncatedModule::zero(level);
        if p.len() > 0 {
            m.degrees.insert(0, p);
        }
        m
    }

    /// Canonical isomorphism invariant.
    pub fn groups(&self) -> GradedGroup {
        let mut g = GradedGroup::new();
        for (&d, p) in &self.degrees {
            g.add(d, p.group());
        }
        g
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.values().map(Presentation::len).sum()
    }

    fn insert_sum(&mut self, d: i64, p: Presentation) {
        if p.len() == 0 {
            return;
        }
        let merged = match self.degrees.remove(&d) {
            Some(q) => q.direct_sum(&p),
            None => p,
        };
        self.degrees.insert(d, merged);
    }

    fn direct_sum(mut self, other: TruncatedModule) -> Result<Self> {
        guard(self.generator_count() + other.generator_count())?;
        for (d, p) in other.degrees {
            self.insert_sum(d, p);
        }
        Ok(self)
    }

    fn tensor(&self, other: &TruncatedModule) -> Result<Self> {
        guard(self.generator_count().saturating_mul(other.generator_count()))?;
        let mut out = TruncatedModule::zero(self.level);
        for (&d, p) in &self.degrees {
            for (&e, q) in &other.degrees {
                out.insert_sum(d + e, p.tensor(q));
            }
        }
        Ok(out)
    }

    fn shifted(self, k: i64) -> Self {
        TruncatedModule {
            level: self.level,
            degrees: self.degrees.into_iter().map(|(d, p)| (d + k, p)).collect(),
        }
    }

    fn dual(&self) -> Self {
        let mut out = TruncatedModule::zero(self.level);
        for (&d, p) in &self.degrees {
            let g = p.group();
            let free = (0..g.rank()).map(|i| format!("({d}:{i})*")).collect();
            out.insert_sum(-d, Presentation::free(free));
            let labels = (0..g.torsion().len()).map(|i| format!("Ext({d}:{i})")).collect();
            out.insert_sum(-d - 1, Presentation::diagonal(labels, g.torsion()));
        }
        out
    }
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_GENERATORS {
        Err(Error::Refused(format!(
            "realization needs {n} generators, above the limit {MAX_GENERATORS}"
        )))
    } else {
        Ok(())
    }
}

enum Realized {
    Module(TruncatedModule),
    /// The real line, realizable only against bounded torsion.
    Real,
}

fn finite_index(i: &IndexSet) -> Result<u64> {
    let overflow = || Error::Refused("index set too large".into());
    match i {
        IndexSet::Finite(k) => Ok(*k),
        IndexSet::Named(n) => Err(Error::SymbolicOnly(format!("index set {n} is not finite"))),
        IndexSet::Product(xs) => xs
            .iter()
            .try_fold(1u64, |a, x| a.checked_mul(finite_index(x)?).ok_or_else(overflow)),
        IndexSet::Union(xs) => xs
            .iter()
            .try_fold(0u64, |a, x| a.checked_add(finite_index(x)?).ok_or_else(overflow)),
    }
}

fn monomial_label(vars: &[String], exps: &[usize]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// `Z/p^cut [vars]` truncated to exponents below `level`, with monomials of
/// exponent at least `cut` killed.
fn adic_atom(prime: Option<u64>, vars: &[String], level: usize, cut: usize) -> Result<Presentation> {
    let k = vars.len() as u32;
    let count = level.checked_pow(k).filter(|&c| c <= MAX_GENERATORS);
    let Some(count) = count else {
        return Err(Error::Refused(format!(
            "{level}^{k} monomials exceed the limit {MAX_GENERATORS}"
        )));
    };
    let torsion = prime.map_or(BigInt::zero(), |p| Pow::pow(&BigInt::from(p), cut));
    let mut labels = Vec::with_capacity(count);
    let mut moduli = Vec::with_capacity(count);
    for mut idx in 0..count {
        let exps: Vec<usize> = (0..vars.len())
            .map(|_| {
                let e = idx % level;
                idx /= level;
                e
            })
            .collect();
        labels.push(monomial_label(vars, &exps));
        moduli.push(if exps.iter().any(|&e| e >= cut) {
            BigInt::one()
        } else {
            torsion.clone()
        });
    }
    Ok(Presentation::diagonal(labels, &moduli))
}

fn realize_node(e: &SolidExpr, level: usize, cut: usize) -> Result<Realized> {
    let module = |p: Presentation| Ok(Realized::Module(TruncatedModule::concentrated(level, p)));
    match e {
        SolidExpr::Atom(a) => match a {
            Atom::Unit => module(Presentation::free(vec!["1".into()])),
            Atom::Zero => Ok(Realized::Module(TruncatedModule::zero(level))),
            Atom::Real => Ok(Realized::Real),
            Atom::PAdic(p) => module(adic_atom(Some(*p), &[], level, cut)?),
            Atom::PowerSeries(v) => module(adic_atom(None, v, level, cut)?),
            Atom::AdicSeries(p, v) => module(adic_atom(Some(*p), v, level, cut)?),
            Atom::LaurentBoundary(t) => {
                let labels = (1..=level).map(|k| format!("{t}^-{k}")).collect();
                let moduli: Vec<BigInt> = (1..=level)
                    .map(|k| if k > cut { BigInt::one() } else { BigInt::zero() })
                    .collect();
                module(Presentation::diagonal(labels, &moduli))
            }
            Atom::ProdZ(i) => {
                let k = finite_index(i)? as usize;
                guard(k)?;
                module(Presentation::free((0..k).map(|j| format!("δ{j}")).collect()))
            }
        },
        SolidExpr::Sum(xs) => {
            let mut out = TruncatedModule::zero(level);
            for x in xs {
                match realize_node(x, level, cut)? {
                    Realized::Module(m) => out = out.direct_sum(m)?,
                    Realized::Real => return Err(not_realizable()),
                }
            }
            Ok(Realized::Module(out))
        }
        SolidExpr::Tensor(xs) => {
            let mut out = TruncatedModule::concentrated(level, Presentation::free(vec!["1".into()]));
            let mut real = false;
            for x in xs {
                match realize_node(x, level, cut)? {
                    Realized::Module(m) => out = out.tensor(&m)?,
                    Realized::Real => real = true,
                }
            }
            match real {
                false => Ok(Realized::Module(out)),
                // R is p-divisible, so it dies against any bounded-torsion module
                true if out.groups().is_torsion() => Ok(Realized::Module(TruncatedModule::zero(level))),
                true => Err(not_realizable()),
            }
        }
        SolidExpr::Shift(k, x) => Ok(match realize_node(x, level, cut)? {
            Realized::Module(m) => Realized::Module(m.shifted(*k)),
            Realized::Real => Realized::Real,
        }),
        SolidExpr::DualToZ(x) => match realize_node(x, level, cut)? {
            Realized::Module(m) => Ok(Realized::Module(m.dual())),
            Realized::Real => Err(not_realizable()),
        },
    }
}

fn not_realizable() -> Error {
    Error::NotRealizable("the real line has no finite truncation here".into())
}

pub fn truncated_realization(e: &SolidExpr, level: usize) -> Result<TruncatedModule> {
    reduced_realization(e, level, level)
}

/// The level-`level` realization with every atom cut down to level `cut`:
/// monomials of exponent `≥ cut` and `p^cut` killed. With `cut = level - 1`
/// this is the reduction of level `level` to level `level - 1`.
pub fn reduced_realization(e: &SolidExpr, level: usize, cut: usize) -> Result<TruncatedModule> {
    if level == 0 || cut > level {
        return Err(Error::Structural(format!(
            "invalid truncation level {level} with cut {cut}"
        )));
    }
    e.validate()?;
    match realize_node(e, level, cut)? {
        Realized::Module(m) => Ok(m),
        Realized::Real => Err(not_realizable()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Realizations {
    Isomorphic { groups: GradedGroup },
    Different { lhs: GradedGroup, rhs: GradedGroup },
    Unavailable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub level: usize,
    pub lhs_normal: String,
    pub rhs_normal: String,
    pub normal_forms_equal: bool,
    pub realizations: Realizations,
    pub holds: bool,
}

impl IdentityReport {
    /// No finite truncation exists, so only the symbolic verdict is available.
    pub fn symbolic_only(&self) -> bool {
        matches!(self.realizations, Realizations::Unavailable { .. })
    }
}

/// Holds when both sides normalize to the same form and their level truncations
/// are isomorphic.
pub fn identity_check(lhs: &SolidExpr, rhs: &SolidExpr, level: usize) -> Result<IdentityReport> {
    let (nl, nr) = (normal_form(lhs)?, normal_form(rhs)?);
    let realize = |e| truncated_realization(e, level).map(|m| m.groups());
    let realizations = match (realize(lhs), realize(rhs)) {
        (Ok(a), Ok(b)) if a == b => Realizations::Isomorphic { groups: a },
        (Ok(lhs), Ok(rhs)) => Realizations::Different { lhs, rhs },
        (Err(e @ (Error::SymbolicOnly(_) | Error::NotRealizable(_) | Error::Refused(_))), _)
        | (_, Err(e @ (Error::SymbolicOnly(_) | Error::NotRealizable(_) | Error::Refused(_)))) => {
            Realizations::Unavailable { reason: e.to_string() }
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let normal_forms_equal = nl == nr;
    Ok(IdentityReport {
        level,
        holds: normal_forms_equal && matches!(realizations, Realizations::Isomorphic { .. }),
        lhs_normal: nl.to_string(),
        rhs_normal: nr.to_string(),
        normal_forms_equal,
        realizations,
    })
}
