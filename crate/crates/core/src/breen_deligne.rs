//! The explicit length-two Breen–Deligne resolution
//! `Z[A^3] ⊕ Z[A^2] → Z[A^2] → Z[A] → A → 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{invariant_factors, solve, ChainComplex, Cokernel, FgAbGroup, FinAbGroup, GroupHom, IntMatrix};

/// A formal sum `Σ c_M [M]` of integer matrices acting on
/// `Z[A^source] → Z[A^target]` by `[v] ↦ Σ c_M [M v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalMap {
    source: usize,
    target: usize,
    terms: Vec<(i64, Vec<Vec<i64>>)>,
}

impl UniversalMap {
    /// Each matrix must be `target × source`.
    pub fn new(source: usize, target: usize, terms: Vec<(i64, Vec<Vec<i64>>)>) -> Result<Self> {
        for (_, m) in &terms {
            if m.len() != target || m.iter().any(|r| r.len() != source) {
                return Err(Error::ShapeMismatch(format!(
                    "universal map term is not {target}x{source}"
                )));
            }
        }
        Ok(UniversalMap { source, target, terms })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// The matrix of the map on the bases `A^source`, `A^target` of `a`,
    /// tuples indexed in mixed radix with the first factor most significant.
    pub fn evaluate(&self, a: &FinAbGroup) -> IntMatrix {
        let n = a.order();
        let cols = n.pow(self.source as u32);
        let rows = n.pow(self.target as u32);
        let mut entries = std::collections::BTreeMap::<(usize, usize), i64>::new();
        for col in 0..cols {
            let v = tuple(a, col, self.source);
            for (c, m) in &self.terms {
                let w: Vec<Vec<u64>> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&v)
                            .fold(a.zero(), |acc, (&k, x)| a.add(&acc, &a.scale(k, x)))
                    })
                    .collect();
                *entries.entry((tuple_index(a, &w), col)).or_insert(0) += c;
            }
        }
        IntMatrix::from_triplets(
            rows,
            cols,
            entries
                .into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|((r, c), v)| (r, c, BigInt::from(v))),
        )
        .expect("indices are in range")
    }
}

fn tuple(a: &FinAbGroup, mut idx: usize, len: usize) -> Vec<Vec<u64>> {
    let n = a.order();
    let mut out = vec![Vec::new(); len];
    for slot in out.iter_mut().rev() {
        *slot = a.element(idx % n);
        idx /= n;
    }
    out
}

fn tuple_index(a: &FinAbGroup, t: &[Vec<u64>]) -> usize {
    t.iter().fold(0, |acc, x| acc * a.order() + a.index_of(x))
}

/// `[a, b] ↦ [a + b] - [a] - [b]`.
pub fn d1() -> UniversalMap {
    UniversalMap::new(
        2,
        1,
        vec![(1, vec![vec![1, 1]]), (-1, vec![vec![1, 0]]), (-1, vec![vec![0, 1]])],
    )
    .expect("well-formed")
}

/// Associativity `[a, b, c] ↦ [b, c] - [a + b, c] + [a, b + c] - [a, b]`.
pub fn d2_associativity() -> UniversalMap {
    UniversalMap::new(
        3,
        2,
        vec![
            (1, vec![vec![0, 1, 0], vec![0, 0, 1]]),
            (-1, vec![vec![1, 1, 0], vec![0, 0, 1]]),
            (1, vec![vec![1, 0, 0], vec![0, 1, 1]]),
            (-1, vec![vec![1, 0, 0], vec![0, 1, 0]]),
        ],
    )
    .expect("well-formed")
}

/// Symmetry `[a, b] ↦ [a, b] - [b, a]`.
pub fn d2_symmetry() -> UniversalMap {
    UniversalMap::new(
        2,
        2,
        vec![(1, vec![vec![1, 0], vec![0, 1]]), (-1, vec![vec![0, 1], vec![1, 0]])],
    )
    .expect("well-formed")
}

/// Multiplication by `n` on `A`, as the map `[a] ↦ [n a]` on `Z[A^arity]`.
pub fn bracket(n: i64, arity: usize) -> UniversalMap {
    let m = (0..arity)
        .map(|i| (0..arity).map(|j| if i == j { n } else { 0 }).collect())
        .collect();
    UniversalMap::new(arity, arity, vec![(1, m)]).expect("well-formed")
}

/// The un-augmented complex `C_2 = Z[A^3] ⊕ Z[A^2] → C_1 = Z[A^2] → C_0 = Z[A]`
/// together with the augmentation `Z[A] → A`.
#[derive(Clone, Debug)]
pub struct BdComplex {
    pub group: FinAbGroup,
    pub complex: ChainComplex,
}

pub fn bd_complex(a: &FinAbGroup) -> BdComplex {
    let d1 = d1().evaluate(a);
    let d2 = d2_associativity()
        .evaluate(a)
        .hstack(&d2_symmetry().evaluate(a))
        .expect("both blocks land in Z[A^2]");
    let n = a.order();
    let complex = ChainComplex::new(0, vec![n, n * n, n * n * n + n * n], vec![(1, d1), (2, d2)])
        .expect("the Breen–Deligne differentials compose to zero");
    BdComplex {
        group: a.clone(),
        complex,
    }
}

impl BdComplex {
    /// The augmentation `[a] ↦ a`, sending basis element `i` to the element.
    pub fn augmentation(&self, idx: usize) -> Vec<u64> {
        self.group.element(idx)
    }

    /// The class `Σ c_i a_i ∈ A` of a chain in `Z[A]`.
    pub fn augment(&self, chain: &[BigInt]) -> Vec<u64> {
        let a = &self.group;
        let modulus = BigInt::from(a.order());
        chain.iter().enumerate().fold(a.zero(), |acc, (i, c)| {
            let c = i64::try_from(c.mod_floor(&modulus)).expect("reduced coefficient fits");
            a.add(&acc, &a.scale(c, &a.element(i)))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub group: FgAbGroup,
    /// `H_1` of the un-augmented complex, the homology at `Z[A^2]`.
    pub h1: FgAbGroup,
    /// `Z[A] / im d_1`, which must match `A`.
    pub cokernel: FgAbGroup,
    /// The augmentation kills `im d_1` and is onto.
    pub augmentation_compatible: bool,
    pub exact_at_za: bool,
    pub exact_at_za2: bool,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.exact_at_za && self.exact_at_za2
    }
}

pub fn bd_exactness_check(a: &FinAbGroup) -> ExactnessReport {
    let bd = bd_complex(a);
    let d1 = bd.complex.differential(1);
    let h1 = bd.complex.homology(1).expect("degree in range");
    let cokernel = Cokernel::new(&d1).group();
    let kills_image = (0..d1.cols()).all(|j| {
        let col: Vec<BigInt> = (0..d1.rows()).map(|i| d1.get(i, j)).collect();
        bd.augment(&col) == a.zero()
    });
    // basis elements map onto all of A
    let onto = a.order()
        == (0..a.order())
            .map(|i| bd.augmentation(i))
            .collect::<std::collections::BTreeSet<_>>()
            .len();
    let augmentation_compatible = kills_image && onto;
    ExactnessReport {
        group: a.canonical(),
        exact_at_za: augmentation_compatible && cokernel == a.canonical(),
        exact_at_za2: h1.is_trivial(),
        h1,
        cokernel,
        augmentation_compatible,
    }
}

/// Integer homotopy data `h_0: C_0 → C_1`, `h_1: C_1 → C_2` between `n·id`
/// and `[n]` in degrees 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyCertificate {
    pub n: i64,
    pub group: FgAbGroup,
    pub h0: IntMatrix,
    pub h1: IntMatrix,
}

fn scaled_minus_bracket(a: &FinAbGroup, n: i64, arity: usize) -> IntMatrix {
    let size = a.order().pow(arity as u32);
    IntMatrix::identity(size)
        .scale(&BigInt::from(n))
        .sub(&bracket(n, arity).evaluate(a))
        .expect("square of equal size")
}

/// Solves `n - [n] = d_1 h_0` on `Z[A]` and `n - [n] - h_0 d_1 = d_2 h_1` on
/// `Z[A^2]`.
pub fn multiplication_homotopy(a: &FinAbGroup, n: i64) -> Result<HomotopyCertificate> {
    let bd = bd_complex(a);
    let d1 = bd.complex.differential(1);
    let d2 = bd.complex.differential(2);
    let t0 = scaled_minus_bracket(a, n, 1);
    let h0 = solve(&d1, &t0)?.ok_or_else(|| Error::Infeasible(format!("no h_0 for n = {n}")))?;
    let t1 = scaled_minus_bracket(a, n, 2).sub(&h0.mul(&d1)?)?;
    let h1 = solve(&d2, &t1)?.ok_or_else(|| Error::Infeasible(format!("no h_1 for n = {n}")))?;
    let cert = HomotopyCertificate {
        n,
        group: a.canonical(),
        h0,
        h1,
    };
    cert.verify(a)?;
    Ok(cert)
}

impl HomotopyCertificate {
    /// Rechecks both homotopy equations exactly.
    pub fn verify(&self, a: &FinAbGroup) -> Result<()> {
        let bd = bd_complex(a);
        let d1 = bd.complex.differential(1);
        let d2 = bd.complex.differential(2);
        let lhs0 = scaled_minus_bracket(a, self.n, 1);
        let lhs1 = scaled_minus_bracket(a, self.n, 2);
        if d1.mul(&self.h0)? != lhs0 || d2.mul(&self.h1)?.add(&self.h0.mul(&d1)?)? != lhs1 {
            return Err(Error::Certificate(format!(
                "homotopy equations fail for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h1.is_zero()
    }
}

/// The chain map `Z[A^r] → Z[B^r]` induced by `f` in every degree.
pub fn induced_chain_map(f: &GroupHom, degree: usize) -> IntMatrix {
    let (a, b) = (&f.source, &f.target);
    let arities: &[usize] = match degree {
        0 => &[1],
        1 => &[2],
        _ => &[3, 2],
    };
    let blocks: Vec<IntMatrix> = arities
        .iter()
        .map(|&r| {
            let cols = a.order().pow(r as u32);
            let rows = b.order().pow(r as u32);
            let entries = (0..cols).map(|j| {
                let image: Vec<Vec<u64>> = tuple(a, j, r).iter().map(|x| f.apply(x)).collect();
                (tuple_index(b, &image), j, BigInt::one())
            });
            IntMatrix::from_triplets(rows, cols, entries).expect("one entry per column")
        })
        .collect();
    blocks
        .iter()
        .skip(1)
        .fold(blocks[0].clone(), |acc, m| acc.block_diag(m))
}

/// `d_B ∘ f_* = f_* ∘ d_A` in degrees 1 and 2.
pub fn commutes_with(f: &GroupHom) -> bool {
    let ca = bd_complex(&f.source).complex;
    let cb = bd_complex(&f.target).complex;
    (1..=2).all(|i| {
        let left = cb
            .differential(i)
            .mul(&induced_chain_map(f, i as usize))
            .expect("shapes agree");
        let right = induced_chain_map(f, i as usize - 1)
            .mul(&ca.differential(i))
            .expect("shapes agree");
        left == right
    })
}

/// Invariant factors of `d_2`, exposed for batch reporting.
pub fn d2_invariant_factors(a: &FinAbGroup) -> Vec<BigInt> {
    invariant_factors(&bd_complex(a).complex.differential(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> FinAbGroup {
        FinAbGroup::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn trivial_group_ranks() {
        let bd = bd_complex(&FinAbGroup::trivial());
        assert_eq!(bd.complex.ranks(), &[1, 1, 2]);
        let r = bd_exactness_check(&FinAbGroup::trivial());
        assert!(r.exact());
        assert!(r.cokernel.is_trivial());
    }

    #[test]
    fn d1_on_z2() {
        let a = g(&[2]);
        let d1 = d1().evaluate(&a);
        // basis of Z[A^2]: (0,0), (0,1), (1,0), (1,1)
        assert_eq!(d1.get(0, 3), BigInt::from(1));
        assert_eq!(d1.get(1, 3), BigInt::from(-2));
    }

    #[test]
    fn small_groups_are_exact() {
        for orders in [&[2][..], &[3], &[2, 2]] {
            let a = g(orders);
            let r = bd_exactness_check(&a);
            assert!(r.exact(), "{orders:?}: {r:?}");
            assert_eq!(r.cokernel, a.canonical());
        }
    }

    #[test]
    fn augmentation_detects_a_wrong_group() {
        // cokernel of d_1 alone determines A, not just its order
        let r = bd_exactness_check(&g(&[4]));
        assert_eq!(r.cokernel, FgAbGroup::cyclic(4));
        assert_ne!(r.cokernel, FgAbGroup::from_cyclic_orders(0, [2u64, 2]));
    }

    #[test]
    fn homotopies() {
        let one = multiplication_homotopy(&g(&[3]), 1).unwrap();
        assert!(one.is_zero());
        multiplication_homotopy(&g(&[2]), 0).unwrap();
        let c = multiplication_homotopy(&g(&[3]), 2).unwrap();
        c.verify(&g(&[3])).unwrap();
    }

    #[test]
    fn functoriality_on_small_homs() {
        let a = g(&[2]);
        let b = g(&[4]);
        for f in a.homomorphisms_to(&b).into_iter().chain(b.homomorphisms_to(&a)) {
            assert!(commutes_with(&f));
        }
    }

    #[test]
    fn universal_maps_commute_with_homs() {
        let a = g(&[2, 2]);
        let b = g(&[4]);
        for f in a.homomorphisms_to(&b) {
            let m = d2_symmetry();
            let left = m.evaluate(&b).mul(&induced_chain_map(&f, 1)).unwrap();
            let right = induced_chain_map(&f, 1).mul(&m.evaluate(&a)).unwrap();
            assert_eq!(left, right);
        }
    }
}
