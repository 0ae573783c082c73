use condensed_lab::exact::{invariant_factors, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
            .prop_map(|rows| IntMatrix::from_dense(&rows).unwrap())
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// `d_1 ⋯ d_k = gcd of the k × k minors`.
fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                g = g.gcd(&m.submatrix(&rows, &cols).determinant().unwrap());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_is_certified(m in matrix()) {
        let sf = smith_normal_form(&m);
        prop_assert_eq!(sf.u.mul(&m).unwrap().mul(&sf.v).unwrap(), sf.d.clone());
        prop_assert!(sf.u.is_unimodular() && sf.v.is_unimodular());
        prop_assert!(sf.d.is_diagonal());
        let factors = sf.invariant_factors();
        prop_assert!(factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert!(factors.iter().all(|d| d > &BigInt::zero()));
        prop_assert_eq!(invariant_factors(&m), factors);
    }

    #[test]
    fn factors_match_minors(m in matrix().prop_filter("small", |m| m.rows() <= 5 && m.cols() <= 5)) {
        let mut running = BigInt::one();
        let mut expected = Vec::new();
        for dk in determinantal_divisors(&m) {
            expected.push(&dk / &running);
            running = dk;
        }
        prop_assert_eq!(invariant_factors(&m), expected);
    }
}
