use std::collections::BTreeSet;

use condensed_lab::noebeling::{
    basis_certificate, evaluation_matrix, expand, noebeling_basis, tower_extend, CubeSubset, IdempotentProduct,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn subset(dim: usize) -> impl Strategy<Value = CubeSubset> {
    proptest::collection::btree_set(0u32..(1 << dim), 1..=(1usize << dim)).prop_map(move |codes| {
        let points = codes
            .iter()
            .map(|m| (0..dim).map(|i| m >> i & 1 == 1).collect())
            .collect();
        CubeSubset::new(dim, points).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_has_full_size_and_is_unimodular(s in subset(7)) {
        let e = noebeling_basis(&s).unwrap();
        prop_assert_eq!(e.len(), s.len());
        let cert = basis_certificate(&s, &e).unwrap();
        prop_assert!(cert.determinant == BigInt::from(1) || cert.determinant == BigInt::from(-1));
    }

    #[test]
    fn products_avoiding_the_top_coordinate_give_the_projection_basis(s in subset(6)) {
        let e = noebeling_basis(&s).unwrap();
        let lower: Vec<IdempotentProduct> = e.into_iter().filter(|p| p.top() != Some(5)).collect();
        prop_assert_eq!(lower, noebeling_basis(&s.project(5)).unwrap());
    }

    #[test]
    fn every_function_expands_with_integer_coefficients(
        s in subset(5),
        values in proptest::collection::vec(-50i64..=50, 32),
    ) {
        let e = noebeling_basis(&s).unwrap();
        let f: Vec<BigInt> = values[..s.len()].iter().map(|&v| BigInt::from(v)).collect();
        let c = expand(&s, &e, &f).unwrap();
        let back = evaluation_matrix(&s, &e).transpose().mul_vec(&c);
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn four_stage_towers_are_nested(s in subset(4)) {
        let stages: Vec<CubeSubset> = (1..=4).map(|k| s.project(k)).collect();
        let bases = tower_extend(&stages).unwrap();
        for (stage, basis) in stages.iter().zip(&bases) {
            prop_assert_eq!(basis.len(), stage.len());
        }
        for w in bases.windows(2) {
            let next: BTreeSet<_> = w[1].iter().collect();
            prop_assert!(w[0].iter().all(|p| next.contains(p)));
        }
    }
}
