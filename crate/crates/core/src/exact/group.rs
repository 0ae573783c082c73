//! Finitely generated abelian groups in invariant-factor form, and explicit
//! finite abelian groups with enumerable elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::BigIntJson;
use crate::error::{Error, Result};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
///
/// The representation is unique per isomorphism class, so structural
/// equality is isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidGroup(format!("invariant factor {d} is below 2")));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FgAbGroup {
                rank: 0,
                torsion: vec![BigInt::from(n)],
            },
        }
    }

    /// Canonical form of `Z^rank ⊕ ⊕ Z/n_i` for arbitrary cyclic orders
    /// (order 0 contributes a free summand, order 1 nothing).
    pub fn from_cyclic_orders<I, T>(rank: usize, orders: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut rank = rank;
        let mut finite = Vec::new();
        for n in orders {
            let n: BigInt = n.into();
            let n = if n < BigInt::zero() { -n } else { n };
            if n.is_zero() {
                rank += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        FgAbGroup {
            rank,
            torsion: diagonal_invariant_factors(finite),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::from_cyclic_orders(
            self.rank + other.rank,
            self.torsion.iter().chain(other.torsion.iter()).cloned(),
        )
    }

    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders: Vec<BigInt> = Vec::new();
        for _ in 0..other.rank {
            orders.extend(self.torsion.iter().cloned());
        }
        for _ in 0..self.rank {
            orders.extend(other.torsion.iter().cloned());
        }
        for a in &self.torsion {
            orders.extend(other.torsion.iter().map(|b| a.gcd(b)));
        }
        FgAbGroup::from_cyclic_orders(self.rank * other.rank, orders)
    }

    /// Number of cyclic summands in the canonical form.
    pub fn minimal_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Prime-power decomposition `(p, p^k)` of the torsion part, sorted.
    /// Display helper only; the canonical form stays invariant factors.
    pub fn primary_decomposition(&self) -> Vec<(u64, BigInt)> {
        let mut out = Vec::new();
        for d in &self.torsion {
            let mut n = d.clone();
            let mut p = 2u64;
            while n > BigInt::one() {
                let bp = BigInt::from(p);
                if &bp * &bp > n {
                    let prime = n.to_u64().expect("residual prime factor fits in u64");
                    out.push((prime, n.clone()));
                    break;
                }
                if n.is_multiple_of(&bp) {
                    let mut q = BigInt::one();
                    while n.is_multiple_of(&bp) {
                        n /= &bp;
                        q *= &bp;
                    }
                    out.push((p, q));
                }
                p += 1;
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct FgAbGroupRepr {
    rank: usize,
    torsion: Vec<BigIntJson>,
}

impl Serialize for FgAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FgAbGroupRepr {
            rank: self.rank,
            torsion: self.torsion.iter().cloned().map(BigIntJson).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FgAbGroupRepr::deserialize(d)?;
        FgAbGroup::new(repr.rank, repr.torsion.into_iter().map(|t| t.0).collect()).map_err(serde::de::Error::custom)
    }
}

/// `Z/n_1 ⊕ ... ⊕ Z/n_k` with elements as residue tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

pub type Element = Vec<u64>;

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic orders must be at least 1".into()));
        }
        Ok(FinAbGroup { orders })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        FinAbGroup { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Parses `Z/2`, `Z/2+Z/4`, `2,4` or `0` (trivial).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "0" {
            return Ok(Self::trivial());
        }
        let orders = spec
            .split([',', '+'])
            .map(|part| {
                let part = part.trim();
                let digits = part.strip_prefix("Z/").unwrap_or(part);
                digits
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidGroup(format!("cannot read cyclic factor {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Element {
        a.iter().zip(&self.orders).map(|(x, n)| (n - x) % n).collect()
    }

    pub fn scale(&self, k: i64, a: &[u64]) -> Element {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| ((k as i128 * x as i128).rem_euclid(n as i128)) as u64)
            .collect()
    }

    /// Mixed-radix index of an element, first coordinate least significant.
    pub fn index_of(&self, a: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, n) in a.iter().zip(&self.orders).rev() {
            idx = idx * (*n as usize) + *x as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Element {
        self.orders
            .iter()
            .map(|&n| {
                let x = idx % n as usize;
                idx /= n as usize;
                x as u64
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Order of a single element.
    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| n / n.gcd(&x))
            .fold(1, |acc, k| acc.lcm(&k))
    }

    pub fn canonical(&self) -> FgAbGroup {
        FgAbGroup::from_cyclic_orders(0, self.orders.iter().copied())
    }

    /// Every isomorphism class of abelian group of order `n`, as invariant
    /// factor chains.
    pub fn all_of_order(n: u64) -> Vec<FinAbGroup> {
        fn rec(remaining: u64, last: u64, cur: &mut Vec<u64>, out: &mut Vec<FinAbGroup>) {
            if remaining == 1 {
                out.push(FinAbGroup { orders: cur.clone() });
                return;
            }
            let mut d = last;
            while d <= remaining {
                if remaining.is_multiple_of(d) {
                    cur.push(d);
                    rec(remaining / d, d, cur, out);
                    cur.pop();
                }
                d += last;
            }
        }
        let mut out = Vec::new();
        if n == 1 {
            return vec![Self::trivial()];
        }
        for d in 2..=n {
            if n.is_multiple_of(d) {
                rec(n / d, d, &mut vec![d], &mut out);
            }
        }
        out
    }

    /// All homomorphisms to `target`, by brute force over generator images.
    pub fn homomorphisms_to(&self, target: &FinAbGroup) -> Vec<GroupHom> {
        let candidates: Vec<Vec<Element>> = self
            .orders
            .iter()
            .map(|&n| {
                target
                    .elements()
                    .filter(|b| target.scale(n as i64, b) == target.zero())
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<Element> = Vec::new();
        fn rec(
            k: usize,
            candidates: &[Vec<Element>],
            cur: &mut Vec<Element>,
            out: &mut Vec<GroupHom>,
            src: &FinAbGroup,
            tgt: &FinAbGroup,
        ) {
            if k == candidates.len() {
                out.push(GroupHom {
                    source: src.clone(),
                    target: tgt.clone(),
                    images: cur.clone(),
                });
                return;
            }
            for b in &candidates[k] {
                cur.push(b.clone());
                rec(k + 1, candidates, cur, out, src, tgt);
                cur.pop();
            }
        }
        rec(0, &candidates, &mut cur, &mut out, self, target);
        out
    }
}

/// A homomorphism given by the images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub images: Vec<Element>,
}

impl GroupHom {
    pub fn apply(&self, a: &[u64]) -> Element {
        let mut acc = self.target.zero();
        for (x, img) in a.iter().zip(&self.images) {
            acc = self.target.add(&acc, &self.target.scale(*x as i64, img));
        }
        acc
    }
}

/// `Hom(A, Q/Z)` for finite `A`, in canonical form.
///
/// A character of `Z/n` is determined by the image `k/n` of the generator,
/// so the dual of `⊕ Z/n_i` is `⊕ (1/n_i)Z/Z ≅ ⊕ Z/n_i`.
pub fn pontrjagin_dual_finite(a: &FinAbGroup) -> FgAbGroup {
    FgAbGroup::from_cyclic_orders(0, a.orders().iter().copied())
}

/// Pairwise coprime integers `> 1` such that every input is a product of
/// their powers.
fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    for v in values {
        let mut pending = vec![v.clone()];
        while let Some(x) = pending.pop() {
            if x.is_one() {
                continue;
            }
            match base.iter().position(|b| !b.gcd(&x).is_one()) {
                None => base.push(x),
                Some(i) => {
                    let b = base.swap_remove(i);
                    let g = b.gcd(&x);
                    pending.push(g.clone());
                    pending.push(&b / &g);
                    pending.push(&x / &g);
                }
            }
        }
    }
    base.sort();
    base.dedup();
    base
}

/// Invariant factors of `diag(values)`, each value `> 1`. Each value is
/// split over a coprime base; per base element the exponents are sorted
/// and recombined, so the `i`-th smallest factor is the product of the
/// `i`-th smallest powers.
fn diagonal_invariant_factors(values: Vec<BigInt>) -> Vec<BigInt> {
    let mut distinct: Vec<BigInt> = values.clone();
    distinct.sort();
    distinct.dedup();
    let base = coprime_base(&distinct);
    let mut exponents: Vec<Vec<u32>> = vec![Vec::with_capacity(values.len()); base.len()];
    for v in &values {
        let mut rest = v.clone();
        for (q, e) in base.iter().zip(exponents.iter_mut()) {
            let mut k = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                k += 1;
            }
            e.push(k);
        }
        debug_assert!(rest.is_one());
    }
    let n = values.len();
    for e in &mut exponents {
        e.sort_unstable();
    }
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| {
            base.iter().zip(&exponents).fold(BigInt::one(), |acc, (q, e)| {
                acc * num_traits::pow(q.clone(), e[i] as usize)
            })
        })
        .collect();
    out.retain(|d| !d.is_one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{invariant_factors, IntMatrix};
    use num_rational::Ratio;
    use std::collections::BTreeMap;

    #[test]
    fn tensor_products() {
        let a = FgAbGroup::from_cyclic_orders(1, [4u64]);
        let b = FgAbGroup::from_cyclic_orders(2, [6u64]);
        // (Z + Z/4)(Z^2 + Z/6) = Z^2 + Z/6 + (Z/4)^2 + Z/2
        assert_eq!(a.tensor(&b), FgAbGroup::from_cyclic_orders(2, [6u64, 4, 4, 2]));
        assert!(FgAbGroup::cyclic(3).tensor(&FgAbGroup::cyclic(4)).is_trivial());
    }

    #[test]
    fn diagonal_factors_match_smith_form() {
        let cases: Vec<Vec<i64>> = vec![
            vec![4, 6],
            vec![12, 18, 8],
            vec![2, 3, 5, 7],
            vec![36, 10, 15, 9, 4],
            vec![6, 6, 6],
            vec![1024, 96, 81, 5],
        ];
        for c in cases {
            let k = c.len();
            let diag =
                IntMatrix::from_triplets(k, k, c.iter().enumerate().map(|(i, &n)| (i, i, BigInt::from(n)))).unwrap();
            let reference: Vec<BigInt> = invariant_factors(&diag).into_iter().filter(|d| !d.is_one()).collect();
            assert_eq!(
                diagonal_invariant_factors(c.iter().map(|&n| BigInt::from(n)).collect()),
                reference,
                "{c:?}"
            );
        }
    }

    /// Isomorphism class of a finite abelian group from the counts of
    /// elements of each order.
    fn order_profile(elements: &[Vec<Ratio<i64>>]) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in elements {
            let ord = e.iter().map(|q| *q.denom()).fold(1, |a: i64, b| a.lcm(&b));
            *out.entry(ord).or_default() += 1;
        }
        out
    }

    fn profile_of(a: &FinAbGroup) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in a.elements() {
            *out.entry(a.element_order(&e) as i64).or_default() += 1;
        }
        out
    }

    /// Characters into Q/Z enumerated directly: each generator of Z/n goes to
    /// some k/N in [0,1) with n * k/N an integer.
    fn characters(a: &FinAbGroup) -> Vec<Vec<Ratio<i64>>> {
        let big_n = a.orders().iter().fold(1i64, |acc, &n| acc.lcm(&(n as i64)));
        let per_gen: Vec<Vec<Ratio<i64>>> = a
            .orders()
            .iter()
            .map(|&n| {
                (0..big_n)
                    .map(|k| Ratio::new(k, big_n))
                    .filter(|q| (*q * Ratio::from_integer(n as i64)).is_integer())
                    .collect()
            })
            .collect();
        let mut out = vec![Vec::new()];
        for choices in per_gen {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |q| {
                        let mut p = prefix.clone();
                        p.push(*q);
                        p
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(FgAbGroup::from_cyclic_orders(0, [2u64, 3]).to_string(), "Z/6");
        assert_eq!(
            FgAbGroup::from_cyclic_orders(1, [4u64, 2, 1]).to_string(),
            "Z ⊕ Z/2 ⊕ Z/4"
        );
        assert_eq!(
            FgAbGroup::from_cyclic_orders(0, [6u64, 4]).torsion(),
            &[BigInt::from(2), BigInt::from(12)]
        );
        assert!(FgAbGroup::new(0, vec![BigInt::from(4), BigInt::from(6)]).is_err());
        assert!(FgAbGroup::new(0, vec![BigInt::from(1)]).is_err());
        assert_eq!(
            FgAbGroup::from_cyclic_orders(0, [12u64]).primary_decomposition(),
            vec![(2, BigInt::from(4)), (3, BigInt::from(3))]
        );
        let j = serde_json::to_string(&FgAbGroup::from_cyclic_orders(2, [2u64])).unwrap();
        assert_eq!(j, r#"{"rank":2,"torsion":[2]}"#);
    }

    #[test]
    fn groups_of_small_order() {
        let counts: Vec<usize> = (1..=16).map(|n| FinAbGroup::all_of_order(n).len()).collect();
        // number of abelian groups of order n: product of partition numbers of exponents
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        for g in FinAbGroup::all_of_order(16) {
            assert_eq!(g.order(), 16);
        }
    }

    #[test]
    fn dual_examples() {
        assert!(pontrjagin_dual_finite(&FinAbGroup::trivial()).is_trivial());
        for n in 2..=9 {
            let a = FinAbGroup::cyclic(n).unwrap();
            assert_eq!(pontrjagin_dual_finite(&a), a.canonical());
        }
        let a = FinAbGroup::new(vec![2, 4]).unwrap();
        let chars = characters(&a);
        assert_eq!(chars.len(), 8);
        assert_eq!(order_profile(&chars), profile_of(&a));
        assert_eq!(pontrjagin_dual_finite(&a).to_string(), "Z/2 ⊕ Z/4");
    }

    #[test]
    fn dual_matches_enumerated_characters() {
        for n in 1..=12 {
            for a in FinAbGroup::all_of_order(n) {
                let chars = characters(&a);
                let dual = pontrjagin_dual_finite(&a);
                let dual_fin = FinAbGroup::new(dual.torsion().iter().map(|d| d.to_u64().unwrap()).collect()).unwrap();
                assert_eq!(order_profile(&chars), profile_of(&dual_fin));
                // involution up to isomorphism
                assert_eq!(pontrjagin_dual_finite(&dual_fin), a.canonical());
            }
        }
    }

    #[test]
    fn homomorphism_counts() {
        // |Hom(Z/m, Z/n)| = gcd(m, n)
        for m in 1..=6u64 {
            for n in 1..=6u64 {
                let a = FinAbGroup::cyclic(m).unwrap();
                let b = FinAbGroup::cyclic(n).unwrap();
                assert_eq!(a.homomorphisms_to(&b).len() as u64, m.gcd(&n));
            }
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(FinAbGroup::parse("Z/2+Z/4").unwrap().orders(), &[2, 4]);
        assert_eq!(FinAbGroup::parse("3").unwrap().orders(), &[3]);
        assert_eq!(FinAbGroup::parse("0").unwrap().order(), 1);
        assert!(FinAbGroup::parse("Z/x").is_err());
    }
}
