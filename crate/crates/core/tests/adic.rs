use std::collections::BTreeSet;

use condensed_lab::adic::*;
use proptest::prelude::*;

fn term() -> impl Strategy<Value = Term> {
    proptest::collection::vec((0usize..3, 0u32..3), 0..3).prop_map(|fs| {
        let names = ["T", "U", "V"];
        let src: Vec<String> = fs.iter().map(|&(i, k)| format!("{}^{k}", names[i])).collect();
        if src.is_empty() {
            Term::one()
        } else {
            src.join("*").parse().unwrap()
        }
    })
}

fn subset() -> impl Strategy<Value = RationalSubset> {
    (proptest::collection::vec(term(), 0..3), term()).prop_map(|(g, f)| RationalSubset::new(g, f))
}

fn cover() -> impl Strategy<Value = RationalCover> {
    proptest::collection::vec(subset(), 1..=3).prop_map(|s| RationalCover::new(s, true).unwrap())
}

/// Products with a denominator factor, by explicit index arithmetic.
fn expected_members(c: &RationalCover) -> BTreeSet<Term> {
    let terms: Vec<Vec<&Term>> = c.subsets.iter().map(|u| u.terms().collect()).collect();
    let total: usize = terms.iter().map(Vec::len).product();
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        let mut product = Term::one();
        let mut hit = false;
        for (i, ts) in terms.iter().enumerate() {
            let h = ts[code % ts.len()];
            code /= ts.len();
            hit |= h == c.subsets[i].denominator();
            product = product.mul(h);
        }
        if hit {
            out.insert(product);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn refinements_are_certified(c in cover()) {
        let r = standard_refinement(&c).unwrap();
        r.verify(&c).unwrap();
        let bound: usize = c.subsets.iter().map(RationalSubset::len).product();
        prop_assert_eq!(r.bound, bound);
        prop_assert!(r.members.len() <= bound);
        let got: BTreeSet<Term> = r.denominators().into_iter().cloned().collect();
        prop_assert_eq!(got, expected_members(&c));
    }

    #[test]
    fn intersection_laws(u in subset(), v in subset(), w in subset()) {
        prop_assert_eq!(intersect_rational(&u, &v), intersect_rational(&v, &u));
        prop_assert_eq!(
            intersect_rational(&intersect_rational(&u, &v), &w),
            intersect_rational(&u, &intersect_rational(&v, &w))
        );
        prop_assert_eq!(intersect_rational(&u, &RationalSubset::whole()), u.clone());
        let uu = intersect_rational(&u, &u);
        prop_assert!(u.terms().all(|g| uu.contains_term(&g.mul(u.denominator()))));
    }
}

#[test]
fn cover_file_round_trip() {
    let src = r#"{"subsets": [
        {"numerators": ["T", "1"], "denominator": "T"},
        {"numerators": ["T", "1"], "denominator": "1"}
    ], "unit_ideal": true}"#;
    let c = RationalCover::from_json(src).unwrap();
    let r = standard_refinement(&c).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["members"].as_array().unwrap().len(), 3);
    assert_eq!(json["members"][2]["denominator"], "T^2");
}
