//! The battery of checks behind `suite`, one per acceptance criterion.

use std::collections::BTreeSet;

use condensed_lab::adic::{standard_refinement, RationalCover, RationalSubset, Term};
use condensed_lab::breen_deligne::{bd_exactness_check, multiplication_homotopy};
use condensed_lab::cech::{split_homotopy_norm, torus_cohomology, FiniteHypercover};
use condensed_lab::duality::{
    ainfty_idempotence, ainfty_presentation_check, p1_serre_pairing, rhom_ainfty_vanishing, safe_zone, shriek_unit,
    xy_boundary_dualizing, RingSpec, ShriekOptions, DEFAULT_TWIST_BOUND,
};
use condensed_lab::exact::{smith_normal_form, FgAbGroup, FinAbGroup, GradedGroup, IntMatrix};
use condensed_lab::noebeling::{basis_certificate, noebeling_basis, tower_extend, CubeSubset};
use condensed_lab::simplicial::{em_homology, Coefficients};
use condensed_lab::solid::{identity_check, normalize, parse_expr, BASIC_IDENTITIES};
use condensed_lab::Result;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "smith normal form certification"),
    (2, "eilenberg-maclane homology"),
    (3, "breen-deligne resolution"),
    (4, "noebeling bases"),
    (5, "torus cohomology"),
    (6, "split hypercover homotopy"),
    (7, "solid identities"),
    (8, "coherent duality"),
    (9, "rational cover refinement"),
    (10, "determinism"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub quick: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Per-criterion seed derived from the suite seed.
pub fn derived_seed(seed: u64, criterion: u8) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(criterion as u64)
}

pub fn run_suite(quick: bool, seed: u64) -> SuiteReport {
    let checks = CRITERIA.par_iter().map(|&(k, _)| check(k, quick, seed)).collect();
    SuiteReport { quick, checks }
}

/// Runs one criterion. Errors count as failures and are kept in the detail.
pub fn check(criterion: u8, quick: bool, seed: u64) -> Check {
    let s = derived_seed(seed, criterion);
    let (randomized, result) = match criterion {
        1 => (true, snf_certification(if quick { 50 } else { 500 }, s)),
        2 => (false, eilenberg_maclane()),
        3 => (
            false,
            breen_deligne(if quick { 8 } else { 16 }, if quick { 4 } else { 9 }),
        ),
        4 => (
            true,
            noebeling(if quick { 20 } else { 200 }, if quick { 5 } else { 20 }, s),
        ),
        5 => (false, torus(if quick { 2 } else { 3 })),
        6 => (
            true,
            split_homotopy(if quick { 5 } else { 20 }, if quick { 10 } else { 100 }, s),
        ),
        7 => (false, solid(if quick { &[2, 4, 8][..] } else { &[2, 4, 8, 16][..] })),
        8 => (false, duality()),
        9 => (true, adic(if quick { 10 } else { 50 }, s)),
        10 => (true, determinism(s)),
        _ => (false, Ok((false, json!({ "error": "unknown criterion" })))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
    Check {
        criterion,
        name: CRITERIA
            .iter()
            .find(|c| c.0 == criterion)
            .map_or("unknown", |c| c.1)
            .to_string(),
        passed,
        seed: randomized.then_some(s),
        detail,
    }
}

type Outcome = Result<(bool, Value)>;

pub fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=8usize), rng.gen_range(1..=8usize));
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect())
        .collect();
    IntMatrix::from_dense(&rows).expect("rectangular")
}

fn snf_certification(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut top_rank = 0;
    for i in 0..count {
        let m = random_matrix(&mut rng);
        let sf = smith_normal_form(&m);
        let factors = sf.invariant_factors();
        let chain = factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let ok = sf.u.mul(&m)?.mul(&sf.v)? == sf.d
            && sf.u.is_unimodular()
            && sf.v.is_unimodular()
            && sf.d.is_diagonal()
            && chain
            && factors.iter().all(Signed::is_positive);
        if !ok {
            failures.push(i);
        }
        top_rank = top_rank.max(sf.rank());
    }
    Ok((
        failures.is_empty(),
        json!({ "matrices": count, "max_rank": top_rank, "failures": failures }),
    ))
}

fn eilenberg_maclane() -> Outcome {
    let mut cases = 0;
    let mut failures = Vec::new();
    for orders in [&[2u64][..], &[3], &[4], &[2, 2]] {
        let p = Coefficients::Finite(FinAbGroup::new(orders.to_vec())?);
        for n in 1..=3 {
            for i in 0..=n {
                let want = match i {
                    0 => FgAbGroup::free(1),
                    i if i == n => p.group(),
                    _ => FgAbGroup::trivial(),
                };
                cases += 1;
                if em_homology(&p, n, i)?.accepted()? != &want {
                    failures.push(format!("{orders:?} n={n} i={i}"));
                }
            }
        }
    }
    let z = Coefficients::Lattice { rank: 1, window: 2 };
    for (n, expected) in [(1, [1, 1, 0, 0]), (2, [1, 0, 1, 0])] {
        for (i, &r) in expected.iter().enumerate() {
            cases += 1;
            if em_homology(&z, n, i)?.accepted()? != &FgAbGroup::free(r) {
                failures.push(format!("K(Z,{n}) i={i}"));
            }
        }
    }
    Ok((failures.is_empty(), json!({ "cases": cases, "failures": failures })))
}

fn breen_deligne(max_order: u64, max_homotopy_order: u64) -> Outcome {
    let mut groups = 0;
    let mut failures = Vec::new();
    for order in 1..=max_order {
        for a in FinAbGroup::all_of_order(order) {
            groups += 1;
            if !bd_exactness_check(&a).exact() {
                failures.push(format!("exactness {:?}", a.orders()));
            }
            if order <= max_homotopy_order {
                for n in -3..=3 {
                    if multiplication_homotopy(&a, n).and_then(|c| c.verify(&a)).is_err() {
                        failures.push(format!("homotopy {:?} n={n}", a.orders()));
                    }
                }
            }
        }
    }
    Ok((failures.is_empty(), json!({ "groups": groups, "failures": failures })))
}

pub fn random_cube_subset(rng: &mut ChaCha8Rng, dim: usize) -> CubeSubset {
    let mut codes: Vec<u32> = (0..1u32 << dim).collect();
    codes.shuffle(rng);
    let size = rng.gen_range(1..=codes.len());
    let mut chosen = codes[..size].to_vec();
    chosen.sort_unstable();
    let points = chosen
        .iter()
        .map(|m| (0..dim).map(|i| m >> i & 1 == 1).collect())
        .collect();
    CubeSubset::new(dim, points).expect("distinct points")
}

fn noebeling(subsets: usize, towers: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..subsets {
        let s = random_cube_subset(&mut rng, 7);
        let e = noebeling_basis(&s)?;
        if e.len() != s.len() || basis_certificate(&s, &e).is_err() {
            failures.push(format!("subset {i}"));
        }
    }
    for i in 0..towers {
        let top = random_cube_subset(&mut rng, 4);
        let stages: Vec<CubeSubset> = (1..=4).map(|k| top.project(k)).collect();
        let bases = tower_extend(&stages)?;
        let sized = stages.iter().zip(&bases).all(|(s, b)| s.len() == b.len());
        let nested = bases.windows(2).all(|w| {
            let next: BTreeSet<_> = w[1].iter().collect();
            w[0].iter().all(|p| next.contains(p))
        });
        if !(sized && nested) {
            failures.push(format!("tower {i}"));
        }
    }
    Ok((
        failures.is_empty(),
        json!({ "subsets": subsets, "towers": towers, "failures": failures }),
    ))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn torus(max_factors: usize) -> Outcome {
    let mut ranks = Vec::new();
    let mut ok = true;
    for j in 0..=max_factors {
        let row: Vec<usize> = (0..=j)
            .map(|i| torus_cohomology(j, i, 3).map(|g| g.rank()))
            .collect::<Result<_>>()?;
        let free = (0..=j)
            .map(|i| torus_cohomology(j, i, 3))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(FgAbGroup::is_free);
        ok &= free && row.iter().enumerate().all(|(i, &r)| r == binomial(j, i)) && row.iter().sum::<usize>() == 1 << j;
        ranks.push(row);
    }
    Ok((ok, json!({ "ranks": ranks })))
}

/// The Čech nerve of a random surjection onto at most 3 points from at most
/// 6, split by a random section.
pub fn random_split_cover(rng: &mut ChaCha8Rng) -> Result<FiniteHypercover> {
    let target = rng.gen_range(1..=3usize);
    let source = rng.gen_range(target..=6usize);
    let mut map: Vec<usize> = (0..target).collect();
    map.extend((target..source).map(|_| rng.gen_range(0..target)));
    let section: Vec<usize> = (0..target)
        .map(|y| {
            let fiber: Vec<usize> = (0..source).filter(|&x| map[x] == y).collect();
            fiber[rng.gen_range(0..fiber.len())]
        })
        .collect();
    FiniteHypercover::cech_nerve(target, &map, Some(&section), 3)
}

fn split_homotopy(covers: usize, trials: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for i in 0..covers {
        let h = random_split_cover(&mut rng)?;
        let r = split_homotopy_norm(&h, trials, rng.gen())?;
        if !r.passed() {
            failures.push(i);
        }
        ratios.push(format!("{}/{}", r.max_ratio.0, r.max_ratio.1));
    }
    Ok((
        failures.is_empty(),
        json!({ "covers": covers, "trials_per_cover": trials, "max_ratios": ratios, "failures": failures }),
    ))
}

fn solid(levels: &[usize]) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (l, r) in BASIC_IDENTITIES {
        let (le, re) = (parse_expr(l)?, parse_expr(r)?);
        let normal = normalize(&le)? == normalize(&re)?;
        let holds: Vec<bool> = levels
            .iter()
            .map(|&n| identity_check(&le, &re, n).map(|c| c.holds))
            .collect::<Result<_>>()?;
        ok &= normal && holds.iter().all(|&h| h);
        rows.push(json!({ "lhs": l, "rhs": r, "normal_forms_equal": normal, "levels": levels, "holds": holds }));
    }
    Ok((ok, json!({ "identities": rows })))
}

fn restrict(g: &GradedGroup, lo: i64, hi: i64) -> GradedGroup {
    let mut out = GradedGroup::new();
    for (d, x) in g.iter().filter(|&(d, _)| lo <= d && d <= hi) {
        out.add(d, x.clone());
    }
    out
}

fn duality() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut note = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    for n in [4usize, 8] {
        let (lo, hi) = safe_zone(n)?;
        let (p, p2) = (ainfty_presentation_check(n)?, ainfty_presentation_check(2 * n)?);
        note(
            p.passed && p.cokernels() == restrict(&p2.cokernels(), lo, hi),
            format!("presentation {n}"),
        );
        let (i, i2) = (ainfty_idempotence(n)?, ainfty_idempotence(2 * n)?);
        let same = i.pieces.iter().all(|a| {
            i2.pieces
                .iter()
                .any(|b| b.degree == a.degree && b.tensor == a.tensor && b.bijective)
        });
        note(i.passed && same, format!("idempotence {n}"));
        let (v, v2) = (rhom_ainfty_vanishing(n)?, rhom_ainfty_vanishing(2 * n)?);
        note(
            v.passed && v.pieces.iter().all(|a| v2.pieces.contains(a)),
            format!("vanishing {n}"),
        );
    }
    let line = shriek_unit(&RingSpec::parse("Z[T]")?, ShriekOptions::default())?;
    note((line.rank, line.shift) == (1, 1), "shriek_unit Z[T]".into());
    for c in 1..=3usize {
        let names = ["x", "y", "z"][..c].join(",");
        let r = shriek_unit(
            &RingSpec::parse(&format!("Z[{names}]/({names})"))?,
            ShriekOptions::default(),
        )?;
        note((r.rank, r.shift) == (1, -(c as i64)), format!("koszul c={c}"));
    }
    let (x4, x8) = (xy_boundary_dualizing(4)?, xy_boundary_dualizing(8)?);
    let (lo, hi) = safe_zone(4)?;
    note(x4.dualizing == x8.dualizing.restricted(lo, hi), "xy stability".into());
    for t in -8..=8 {
        note(
            p1_serre_pairing(t, DEFAULT_TWIST_BOUND)?.perfect,
            format!("p1 twist {t}"),
        );
    }
    Ok((failures.is_empty(), json!({ "failures": failures })))
}

fn random_term(rng: &mut ChaCha8Rng) -> Term {
    let mut t = Term::one();
    for name in ["T", "U", "V"] {
        for _ in 0..rng.gen_range(0..3) {
            t = t.mul(&Term::symbol(name));
        }
    }
    t
}

/// At most 3 subsets with at most 3 terms each, denominator included.
pub fn random_cover(rng: &mut ChaCha8Rng) -> RationalCover {
    let subsets = (0..rng.gen_range(1..=3))
        .map(|_| {
            let f = random_term(rng);
            let g: Vec<Term> = (0..rng.gen_range(0..=2)).map(|_| random_term(rng)).collect();
            RationalSubset::new(g, f)
        })
        .collect();
    RationalCover::new(subsets, true).expect("nonempty")
}

fn adic(count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for i in 0..count {
        let c = random_cover(&mut rng);
        let r = standard_refinement(&c)?;
        let bound: usize = c.subsets.iter().map(RationalSubset::len).product();
        if r.verify(&c).is_err() || r.members.len() > bound {
            failures.push(i);
        }
        sizes.push(r.members.len());
    }
    Ok((
        failures.is_empty(),
        json!({ "covers": count, "refinement_sizes": sizes, "failures": failures }),
    ))
}

/// Reruns the randomized quick checks and compares their JSON.
fn determinism(seed: u64) -> Outcome {
    let run = || -> Result<String> {
        let parts = [
            snf_certification(20, seed)?,
            noebeling(10, 3, seed)?,
            split_homotopy(3, 5, seed)?,
            adic(10, seed)?,
        ];
        Ok(serde_json::to_string(&parts.iter().map(|p| &p.1).collect::<Vec<_>>()).expect("values serialize"))
    };
    let (a, b) = (run()?, run()?);
    Ok((a == b, json!({ "bytes": a.len() })))
}
