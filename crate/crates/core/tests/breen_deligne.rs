use condensed_lab::breen_deligne::{bd_exactness_check, commutes_with, multiplication_homotopy};
use condensed_lab::exact::FinAbGroup;

#[test]
fn exact_for_every_group_of_order_at_most_16() {
    for n in 1..=16 {
        for a in FinAbGroup::all_of_order(n) {
            let r = bd_exactness_check(&a);
            assert!(r.exact(), "{a:?}: {r:?}");
            assert_eq!(r.cokernel, a.canonical());
        }
    }
}

#[test]
fn multiplication_homotopies_exist_for_small_groups() {
    for order in 1..=9 {
        for a in FinAbGroup::all_of_order(order) {
            for n in -3..=3 {
                let c = multiplication_homotopy(&a, n).unwrap_or_else(|e| panic!("{a:?}, n = {n}: {e}"));
                c.verify(&a).unwrap();
            }
        }
    }
}

#[test]
fn induced_maps_are_chain_maps() {
    let groups: Vec<FinAbGroup> = (1..=4).flat_map(FinAbGroup::all_of_order).collect();
    for a in &groups {
        for b in &groups {
            for f in a.homomorphisms_to(b) {
                assert!(commutes_with(&f), "{f:?}");
            }
        }
    }
}
