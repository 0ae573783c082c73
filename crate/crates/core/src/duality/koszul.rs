//! Graded polynomial data, Koszul complexes and `f^!` of the unit.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ainfty::shriek_unit_line;
use super::window::{safe_zone, GradedModuleReport};
use crate::error::{Error, Result};
use crate::exact::{ChainComplex, FgAbGroup, GradedGroup, IntMatrix};

/// A polynomial over `Z` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Polynomial {
    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; nvars], BigInt::from(c));
        }
        Polynomial { nvars, terms }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial {
            nvars,
            terms: BTreeMap::from([(e, BigInt::one())]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common total degree, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    /// Parses `2*x^2*y - 3x + 1` over the given variable names.
    pub fn parse(src: &str, vars: &[String]) -> Result<Self> {
        let err = |m: String| Error::Parse { offset: 0, message: m };
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            rest = tail;
            let digits = term.chars().take_while(char::is_ascii_digit).count();
            let mut coeff = if digits > 0 {
                term[..digits].parse::<BigInt>().map_err(|e| err(e.to_string()))?
            } else {
                BigInt::one()
            };
            coeff *= sign;
            let mut exps = vec![0u32; vars.len()];
            for factor in term[digits..].split('*').filter(|f| !f.is_empty()) {
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|e| err(format!("bad exponent in {factor}: {e}")))?,
                    ),
                    None => (factor, 1),
                };
                let i = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| err(format!("unknown variable `{name}`")))?;
                exps[i] += power;
            }
            if digits == 0 && term[digits..].is_empty() {
                return Err(err(format!("empty term in `{src}`")));
            }
            *terms.entry(exps).or_default() += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            nvars: vars.len(),
            terms,
        })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z[vars]/(relations)`, written `Z`, `Z[x,y]` or `Z[x,y]/(x, y^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub vars: Vec<String>,
    pub relations: Vec<Polynomial>,
    /// Written with a quotient, possibly by the empty sequence.
    pub quotient: bool,
}

impl RingSpec {
    pub fn parse(src: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse {
            offset: 0,
            message: m.to_string(),
        };
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = s.strip_prefix('Z').ok_or_else(|| err("a ring starts with Z"))?;
        let (vars, rest) = match rest.strip_prefix('[') {
            Some(r) => {
                let close = r.find(']').ok_or_else(|| err("unclosed ["))?;
                let vars: Vec<String> = r[..close].split(',').map(str::to_string).collect();
                if vars
                    .iter()
                    .any(|v| v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
                {
                    return Err(err("bad variable list"));
                }
                (vars, &r[close + 1..])
            }
            None => (Vec::new(), rest),
        };
        if rest.is_empty() {
            return Ok(RingSpec {
                vars,
                relations: Vec::new(),
                quotient: false,
            });
        }
        let inner = rest
            .strip_prefix("/(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("expected /(f_1, ..., f_c)"))?;
        let relations = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| Polynomial::parse(p, &vars))
                .collect::<Result<_>>()?
        };
        Ok(RingSpec {
            vars,
            relations,
            quotient: true,
        })
    }
}

/// Chain complexes indexed by an internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedComplex {
    pub pieces: BTreeMap<i64, ChainComplex>,
}

impl GradedComplex {
    pub fn homology(&self, i: i64) -> Result<GradedGroup> {
        let mut g = GradedGroup::new();
        for (&d, c) in &self.pieces {
            if (c.lo() - 1..=c.hi() + 1).contains(&i) {
                g.add(d, c.homology(i)?);
            }
        }
        Ok(g)
    }

    pub fn cohomology(&self, k: i64) -> Result<GradedGroup> {
        self.homology(-k)
    }
}

fn monomials(nvars: usize, degree: i64) -> Vec<Vec<u32>> {
    if degree < 0 {
        return Vec::new();
    }
    if nvars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut tail in monomials(nvars - 1, degree - first) {
            tail.insert(0, first as u32);
            out.push(tail);
        }
    }
    out
}

fn subsets(c: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << c)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..c).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

struct KoszulData {
    nvars: usize,
    seq: Vec<Polynomial>,
    degrees: Vec<i64>,
}

impl KoszulData {
    fn new(nvars: usize, seq: &[Polynomial]) -> Result<Self> {
        let mut degrees = Vec::new();
        for f in seq {
            if f.nvars != nvars {
                return Err(Error::ShapeMismatch("sequence element over a different ring".into()));
            }
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| Error::Structural(format!("{f} is zero or not homogeneous")))?;
            degrees.push(d as i64);
        }
        Ok(KoszulData {
            nvars,
            seq: seq.to_vec(),
            degrees,
        })
    }

    fn weight(&self, s: &[usize]) -> i64 {
        s.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Basis `(S, m)` with `|S| = k` and `deg m = offset(S)`.
    fn basis(&self, k: usize, offset: impl Fn(&[usize]) -> i64) -> Vec<(Vec<usize>, Vec<u32>)> {
        subsets(self.seq.len(), k)
            .into_iter()
            .flat_map(|s| {
                let d = offset(&s);
                monomials(self.nvars, d).into_iter().map(move |m| (s.clone(), m))
            })
            .collect()
    }
}

type Basis = Vec<(Vec<usize>, Vec<u32>)>;

fn index_of(basis: &Basis) -> BTreeMap<&(Vec<usize>, Vec<u32>), usize> {
    basis.iter().enumerate().map(|(i, b)| (b, i)).collect()
}

/// Koszul complex `⋀^• R^c` of a homogeneous sequence in `Z[x_1..x_n]`, one
/// finite complex per internal degree `0..=cap`, with `e_i` of degree
/// `deg f_i` and `d(e_S) = Σ_j ± f_{s_j} e_{S \ s_j}`.
pub fn koszul_complex(nvars: usize, seq: &[Polynomial], cap: usize) -> Result<GradedComplex> {
    let data = KoszulData::new(nvars, seq)?;
    let c = seq.len();
    let mut pieces = BTreeMap::new();
    for d in 0..=cap as i64 {
        let bases: Vec<Basis> = (0..=c).map(|k| data.basis(k, |s| d - data.weight(s))).collect();
        let mut diffs = Vec::new();
        for k in 1..=c {
            let target = index_of(&bases[k - 1]);
            let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
            for (col, (s, m)) in bases[k].iter().enumerate() {
                for (pos, &j) in s.iter().enumerate() {
                    let mut rest = s.clone();
                    rest.remove(pos);
                    for (e, coeff) in data.seq[j].terms() {
                        let row = target[&(rest.clone(), add_exps(m, e))];
                        let v = if pos % 2 == 0 { coeff.clone() } else { -coeff };
                        *entries.entry((row, col)).or_default() += v;
                    }
                }
            }
            let m = IntMatrix::from_triplets(
                bases[k - 1].len(),
                bases[k].len(),
                entries.into_iter().map(|((r, c), v)| (r, c, v)),
            )?;
            diffs.push((k as i64, m));
        }
        pieces.insert(d, ChainComplex::new(0, bases.iter().map(Vec::len).collect(), diffs)?);
    }
    Ok(GradedComplex { pieces })
}

/// `Hom_R(K, R)` as cochain complexes, one per internal degree in
/// `[-Σ deg f_i, cap - Σ deg f_i]`, where every piece is complete.
pub fn koszul_dual(nvars: usize, seq: &[Polynomial], cap: usize) -> Result<GradedComplex> {
    let data = KoszulData::new(nvars, seq)?;
    let c = seq.len();
    let total: i64 = data.degrees.iter().sum();
    let mut pieces = BTreeMap::new();
    for d in -total..=cap as i64 - total {
        let bases: Vec<Basis> = (0..=c).map(|k| data.basis(k, |s| d + data.weight(s))).collect();
        let mut cobs = Vec::new();
        for k in 0..c {
            let target = index_of(&bases[k + 1]);
            let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
            for (col, (s, m)) in bases[k].iter().enumerate() {
                for j in (0..c).filter(|j| !s.contains(j)) {
                    let pos = s.iter().filter(|&&i| i < j).count();
                    let mut bigger = s.clone();
                    bigger.insert(pos, j);
                    for (e, coeff) in data.seq[j].terms() {
                        let row = target[&(bigger.clone(), add_exps(m, e))];
                        let v = if pos % 2 == 0 { coeff.clone() } else { -coeff };
                        *entries.entry((row, col)).or_default() += v;
                    }
                }
            }
            let m = IntMatrix::from_triplets(
                bases[k + 1].len(),
                bases[k].len(),
                entries.into_iter().map(|((r, c), v)| (r, c, v)),
            )?;
            cobs.push((k as i64, m));
        }
        pieces.insert(
            d,
            ChainComplex::from_cochains(0, bases.iter().map(Vec::len).collect(), cobs)?,
        );
    }
    Ok(GradedComplex { pieces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShriekUnitReport {
    pub ring: String,
    pub case: &'static str,
    /// Rank as a module over the source ring.
    pub rank: usize,
    #[serde(skip)]
    pub shift: i64,
    pub generator: String,
    /// The graded pieces match `rank` copies of the ring, shifted.
    pub invertible: bool,
    #[serde(flatten)]
    pub report: GradedModuleReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShriekOptions {
    /// Window for Laurent computations.
    pub window: usize,
    /// Internal degree cap for Koszul computations.
    pub cap: usize,
    /// Declared codimension of a quotient, checked when present.
    pub codimension: Option<usize>,
}

impl Default for ShriekOptions {
    fn default() -> Self {
        ShriekOptions {
            window: 8,
            cap: 4,
            codimension: None,
        }
    }
}

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

/// `f^! Z` for `Z[T_1..T_n] → Z` via the boundary `A_∞/A` in each variable,
/// or `f^! R` for `R → R/(f_1..f_c)` via the Koszul complex.
pub fn shriek_unit(ring: &RingSpec, options: ShriekOptions) -> Result<ShriekUnitReport> {
    let name = ring_name(ring);
    if !ring.quotient {
        return polynomial_case(name, ring.vars.len(), options.window);
    }
    let c = ring.relations.len();
    if let Some(declared) = options.codimension {
        if declared != c {
            return Err(Error::Codimension(format!(
                "declared codimension {declared} but {c} equations given"
            )));
        }
    }
    let nvars = ring.vars.len();
    let dual = koszul_dual(nvars, &ring.relations, options.cap)?;
    for k in (0..=c as i64).filter(|&k| k != c as i64) {
        let h = dual.cohomology(k)?;
        if !h.is_zero() {
            return Err(Error::Codimension(format!(
                "Ext^{k} is nonzero, so the sequence is not regular of codimension {c}"
            )));
        }
    }
    let top = dual.cohomology(c as i64)?;
    let quotient = koszul_complex(nvars, &ring.relations, options.cap)?.homology(0)?;
    let total: i64 = ring
        .relations
        .iter()
        .filter_map(Polynomial::homogeneous_degree)
        .map(i64::from)
        .sum();
    let lowest = (0..=options.cap as i64).find(|&t| !quotient.get(t).is_trivial());
    let rank = lowest.map_or(0, |t| {
        top.get(t - total).minimal_generators() / quotient.get(t).minimal_generators()
    });
    let invertible = (0..=options.cap as i64).all(|t| {
        let a = quotient.get(t);
        top.get(t - total) == (0..rank).fold(FgAbGroup::trivial(), |acc, _| acc.direct_sum(&a))
    });
    Ok(ShriekUnitReport {
        ring: name,
        case: "regular_quotient",
        rank,
        shift: -(c as i64),
        generator: format!("det(I/I^2)^* in internal degree {}", -total),
        invertible,
        report: GradedModuleReport::new(-(c as i64), top),
    })
}

fn ring_name(ring: &RingSpec) -> String {
    let mut s = String::from("Z");
    if !ring.vars.is_empty() {
        s += &format!("[{}]", ring.vars.join(","));
    }
    if ring.quotient {
        let rels: Vec<String> = ring.relations.iter().map(|p| p.to_string()).collect();
        s += &format!("/({})", rels.join(", "));
    }
    s
}

fn polynomial_case(name: String, n: usize, window: usize) -> Result<ShriekUnitReport> {
    if n == 0 {
        return Ok(ShriekUnitReport {
            ring: name,
            case: "identity",
            rank: 1,
            shift: 0,
            generator: "1".into(),
            invertible: true,
            report: GradedModuleReport::new(0, GradedGroup::concentrated(0, FgAbGroup::free(1))),
        });
    }
    let (_, h) = safe_zone(window)?;
    let line = shriek_unit_line(window)?;
    // n-fold tensor product; degrees up to h + n - 1 only see complete data
    let mut product = GradedGroup::concentrated(0, FgAbGroup::free(1));
    for _ in 0..n {
        let mut next = GradedGroup::new();
        for (a, x) in product.iter() {
            for (b, y) in line.degrees.iter() {
                next.add(a + b, x.tensor(y));
            }
        }
        product = next;
    }
    let (lo, hi) = (n as i64, h + n as i64 - 1);
    let report = GradedModuleReport::new(line.shift * n as i64, product).restricted(lo, hi);
    let rank = report.degrees.get(lo).rank();
    let invertible = (lo..=hi).all(|d| report.degrees.get(d) == FgAbGroup::free(rank * binomial(d - 1, n as i64 - 1)));
    Ok(ShriekUnitReport {
        ring: name,
        case: "polynomial",
        rank,
        shift: report.shift,
        generator: if n == 1 {
            "dT in internal degree 1".into()
        } else {
            format!("dT_1 ^ ... ^ dT_{n} in internal degree {n}")
        },
        invertible,
        report,
    })
}

/// Whether the graded pieces of `K` in positive homological degrees vanish;
/// a necessary condition for regularity up to the cap.
pub fn looks_regular(nvars: usize, seq: &[Polynomial], cap: usize) -> Result<bool> {
    let k = koszul_complex(nvars, seq, cap)?;
    for i in 1..=seq.len() as i64 {
        if !k.homology(i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn polynomial_parsing() {
        let v = vars(&["x", "y"]);
        let p = Polynomial::parse("2*x^2*y - 3x + 1", &v).unwrap();
        assert_eq!(p.terms().count(), 3);
        assert_eq!(p.homogeneous_degree(), None);
        assert_eq!(
            Polynomial::parse("x*y + y^2", &v).unwrap().homogeneous_degree(),
            Some(2)
        );
        assert_eq!(Polynomial::parse("x - x", &v).unwrap(), Polynomial::constant(2, 0));
        assert!(Polynomial::parse("z", &v).is_err());
        let r = RingSpec::parse("Z[x,y]/(x, y^2)").unwrap();
        assert_eq!(r.relations.len(), 2);
        assert!(!RingSpec::parse("Z[T]").unwrap().quotient);
        assert!(RingSpec::parse("Q[x]").is_err());
    }

    #[test]
    fn empty_sequence_is_the_ring() {
        let k = koszul_complex(1, &[], 3).unwrap();
        let h0 = k.homology(0).unwrap();
        assert!((0..=3).all(|d| h0.get(d) == FgAbGroup::free(1)));
    }

    #[test]
    fn integers_mod_two() {
        let seq = [Polynomial::constant(0, 2)];
        let k = koszul_complex(0, &seq, 0).unwrap();
        assert_eq!(k.pieces[&0].ranks(), &[1, 1]);
        assert_eq!(k.homology(0).unwrap().get(0), FgAbGroup::cyclic(2));
        let dual = koszul_dual(0, &seq, 0).unwrap();
        assert_eq!(dual.cohomology(1).unwrap().get(0), FgAbGroup::cyclic(2));
        assert!(dual.cohomology(0).unwrap().is_zero());
    }

    #[test]
    fn origin_in_the_plane() {
        let seq = [Polynomial::variable(2, 0), Polynomial::variable(2, 1)];
        let dual = koszul_dual(2, &seq, 4).unwrap();
        let h2 = dual.cohomology(2).unwrap();
        assert_eq!(h2, GradedGroup::concentrated(-2, FgAbGroup::free(1)));
        assert!(dual.cohomology(0).unwrap().is_zero() && dual.cohomology(1).unwrap().is_zero());
        assert!(looks_regular(2, &seq, 4).unwrap());
        let twice = [Polynomial::variable(2, 0), Polynomial::variable(2, 0)];
        assert!(!looks_regular(2, &twice, 4).unwrap());
    }

    #[test]
    fn shriek_of_the_line() {
        let r = shriek_unit(&RingSpec::parse("Z[T]").unwrap(), ShriekOptions::default()).unwrap();
        assert_eq!((r.rank, r.shift, r.invertible), (1, 1, true));
        let plane = shriek_unit(&RingSpec::parse("Z[x,y]").unwrap(), ShriekOptions::default()).unwrap();
        assert_eq!((plane.rank, plane.shift, plane.invertible), (1, 2, true));
        let id = shriek_unit(&RingSpec::parse("Z").unwrap(), ShriekOptions::default()).unwrap();
        assert_eq!((id.rank, id.shift), (1, 0));
    }

    #[test]
    fn shriek_of_quotients() {
        let r = shriek_unit(&RingSpec::parse("Z[x]/(x)").unwrap(), ShriekOptions::default()).unwrap();
        assert_eq!((r.rank, r.shift, r.invertible), (1, -1, true));
        let same = shriek_unit(&RingSpec::parse("Z[x]/()").unwrap(), ShriekOptions::default()).unwrap();
        assert_eq!((same.rank, same.shift), (1, 0));
        for c in 1..=3 {
            let names = ["x", "y", "z"][..c].join(",");
            let ring = RingSpec::parse(&format!("Z[{names},w]/({names})")).unwrap();
            let r = shriek_unit(&ring, ShriekOptions::default()).unwrap();
            assert_eq!((r.rank, r.shift, r.invertible), (1, -(c as i64), true), "{names}");
        }
        let bad = ShriekOptions {
            codimension: Some(2),
            ..ShriekOptions::default()
        };
        assert!(matches!(
            shriek_unit(&RingSpec::parse("Z[x]/(x)").unwrap(), bad),
            Err(Error::Codimension(_))
        ));
        assert!(matches!(
            shriek_unit(&RingSpec::parse("Z[x,y]/(x,x)").unwrap(), ShriekOptions::default()),
            Err(Error::Codimension(_))
        ));
    }
}
