use condensed_lab::duality::*;
use condensed_lab::exact::{FgAbGroup, GradedGroup};
use proptest::prelude::*;

fn restrict(g: &GradedGroup, lo: i64, hi: i64) -> GradedGroup {
    let mut out = GradedGroup::new();
    for (d, x) in g.iter().filter(|&(d, _)| lo <= d && d <= hi) {
        out.add(d, x.clone());
    }
    out
}

#[test]
fn window_checks_pass_and_are_stable() {
    for n in [4usize, 8] {
        let (lo, hi) = safe_zone(n).unwrap();
        let p = ainfty_presentation_check(n).unwrap();
        let p2 = ainfty_presentation_check(2 * n).unwrap();
        assert!(p.passed && p2.passed);
        assert_eq!(p.cokernels(), restrict(&p2.cokernels(), lo, hi));

        let i = ainfty_idempotence(n).unwrap();
        let i2 = ainfty_idempotence(2 * n).unwrap();
        assert!(i.passed && i2.passed);
        for piece in &i.pieces {
            let twin = i2.pieces.iter().find(|q| q.degree == piece.degree).unwrap();
            assert_eq!(
                (piece.tensor.clone(), piece.bijective),
                (twin.tensor.clone(), twin.bijective)
            );
        }

        let v = rhom_ainfty_vanishing(n).unwrap();
        let v2 = rhom_ainfty_vanishing(2 * n).unwrap();
        assert!(v.passed && v2.passed);
        assert!(v.pieces.iter().all(|p| v2.pieces.contains(p)));

        let s = shriek_unit_line(n).unwrap();
        let s2 = shriek_unit_line(2 * n).unwrap();
        assert_eq!(s, s2.restricted(lo, hi));

        let x = xy_boundary_dualizing(n).unwrap();
        let x2 = xy_boundary_dualizing(2 * n).unwrap();
        assert_eq!(x.dualizing, x2.dualizing.restricted(lo, hi));
    }
}

#[test]
fn unit_of_the_line_is_dual_to_compact_support() {
    for n in [4usize, 8, 16] {
        let (lo, hi) = safe_zone(n).unwrap();
        let j = j_shriek(&FreeAModule::free(1), n).unwrap().restricted(lo, hi);
        assert_eq!(j.graded_dual().unwrap(), shriek_unit_line(n).unwrap());
        let r = shriek_unit(
            &RingSpec::parse("Z[T]").unwrap(),
            ShriekOptions {
                window: n,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((r.rank, r.shift, r.invertible), (1, 1, true));
    }
}

#[test]
fn compact_support_of_free_modules() {
    let j = j_shriek(&FreeAModule::free(1), 6).unwrap();
    assert_eq!(j.shift, -1);
    assert_eq!(j.degrees.support(), (-6..=-1).collect::<Vec<_>>());
    assert!(j_shriek(&FreeAModule::free(0), 6).unwrap().degrees.is_zero());
    let two = j_shriek(&FreeAModule::free(2), 6).unwrap();
    assert!(two.degrees.iter().all(|(_, g)| *g == FgAbGroup::free(2)));
}

#[test]
fn regular_quotients_up_to_codimension_three() {
    for c in 1..=3usize {
        let names = ["x", "y", "z"][..c].join(",");
        let ring = RingSpec::parse(&format!("Z[{names}]/({names})")).unwrap();
        let r = shriek_unit(&ring, ShriekOptions::default()).unwrap();
        assert_eq!(
            (r.rank, r.shift, r.invertible),
            (1, -(c as i64), true),
            "codimension {c}"
        );
    }
    let powers = RingSpec::parse("Z[x,y]/(x^2, y^3)").unwrap();
    let r = shriek_unit(
        &powers,
        ShriekOptions {
            cap: 6,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!((r.rank, r.shift, r.invertible), (1, -2, true));
}

#[test]
fn serre_duality_on_the_line() {
    for n in -8..=8 {
        let r = p1_serre_pairing(n, DEFAULT_TWIST_BOUND).unwrap();
        assert!(r.perfect, "twist {n}: {:?}", r.pairing);
        if n >= 0 {
            assert_eq!((r.h0_rank, r.h1_rank), ((n + 1) as usize, (n + 1) as usize));
        }
    }
}

fn monomial_sequence(exps: &[(usize, u32)], nvars: usize) -> Vec<Polynomial> {
    let names: Vec<String> = (0..nvars).map(|i| format!("v{i}")).collect();
    exps.iter()
        .map(|&(i, e)| Polynomial::parse(&format!("v{i}^{e}"), &names).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_formula(rank in 0usize..4, n in 1u64..6, window in 2usize..10) {
        let p = FgAbGroup::cyclic(n).direct_sum(&FgAbGroup::free(1));
        let lhs = j_shriek(&FreeAModule::free(rank).tensor_group(&p), window).unwrap();
        let rhs = j_shriek(&FreeAModule::free(rank), window).unwrap().tensor_group(&p);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn koszul_homology_is_order_independent(
        exps in proptest::collection::vec(1u32..3, 1..=3),
        perm_seed in any::<u64>(),
    ) {
        let nvars = exps.len();
        let seq: Vec<(usize, u32)> = exps.iter().copied().enumerate().collect();
        let mut shuffled = seq.clone();
        let len = shuffled.len();
        shuffled.rotate_left((perm_seed % len as u64) as usize);
        if perm_seed & 1 == 1 {
            shuffled.reverse();
        }
        let a = monomial_sequence(&seq, nvars);
        let b = monomial_sequence(&shuffled, nvars);
        let cap = 4;
        let ka = koszul_complex(nvars, &a, cap).unwrap();
        let kb = koszul_complex(nvars, &b, cap).unwrap();
        let da = koszul_dual(nvars, &a, cap).unwrap();
        let db = koszul_dual(nvars, &b, cap).unwrap();
        for i in 0..=nvars as i64 {
            prop_assert_eq!(ka.homology(i).unwrap(), kb.homology(i).unwrap());
            prop_assert_eq!(da.cohomology(i).unwrap(), db.cohomology(i).unwrap());
        }
    }
}
