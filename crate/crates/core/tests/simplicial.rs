use condensed_lab::exact::{FgAbGroup, FinAbGroup};
use condensed_lab::simplicial::{em_homology, Coefficients};

fn finite(orders: &[u64]) -> Coefficients {
    Coefficients::Finite(FinAbGroup::new(orders.to_vec()).unwrap())
}

fn h(p: &Coefficients, n: usize, i: usize) -> FgAbGroup {
    em_homology(p, n, i).unwrap().accepted().unwrap().clone()
}

#[test]
fn eilenberg_maclane_spaces_of_finite_groups() {
    for orders in [&[2][..], &[3], &[4], &[2, 2]] {
        let p = finite(orders);
        for n in 1..=3 {
            assert_eq!(h(&p, n, 0), FgAbGroup::free(1), "{orders:?}, n = {n}");
            for i in 1..n {
                assert!(h(&p, n, i).is_trivial(), "{orders:?}, n = {n}, i = {i}");
            }
            assert_eq!(h(&p, n, n), p.group(), "{orders:?}, n = {n}");
        }
    }
}

#[test]
fn circle_and_infinite_projective_space() {
    let z = Coefficients::Lattice { rank: 1, window: 2 };
    let circle: Vec<FgAbGroup> = (0..4).map(|i| h(&z, 1, i)).collect();
    assert_eq!(
        circle,
        [
            FgAbGroup::free(1),
            FgAbGroup::free(1),
            FgAbGroup::trivial(),
            FgAbGroup::trivial()
        ]
    );
    let cp: Vec<FgAbGroup> = (0..4).map(|i| h(&z, 2, i)).collect();
    assert_eq!(
        cp,
        [
            FgAbGroup::free(1),
            FgAbGroup::trivial(),
            FgAbGroup::free(1),
            FgAbGroup::trivial()
        ]
    );
}

#[test]
fn homology_of_b_z2_is_periodic() {
    // H_i(RP^∞) = Z, Z/2, 0, Z/2, 0
    let p = finite(&[2]);
    let got: Vec<FgAbGroup> = (0..5).map(|i| h(&p, 1, i)).collect();
    let two = FgAbGroup::cyclic(2);
    assert_eq!(
        got,
        [
            FgAbGroup::free(1),
            two.clone(),
            FgAbGroup::trivial(),
            two,
            FgAbGroup::trivial()
        ]
    );
}
