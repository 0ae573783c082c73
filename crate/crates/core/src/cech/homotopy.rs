//! The contracting homotopy of a split hypercover and its sup-norm bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hypercover::{cech_cohomology, FiniteHypercover};
use crate::error::{Error, Result};
use crate::exact::{FgAbGroup, IntMatrix};

/// An integer cochain with its sup norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedCochain {
    values: Vec<BigInt>,
}

impl NormedCochain {
    pub fn new(values: Vec<BigInt>) -> Self {
        NormedCochain { values }
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn norm(&self) -> BigInt {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// `‖h f‖ / ‖f‖`, defined as 0 for `f = 0`.
pub fn norm_ratio(hf: &NormedCochain, f: &NormedCochain) -> BigRational {
    if f.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(hf.norm(), f.norm())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyNormReport {
    pub trials: usize,
    pub seed: u64,
    /// Largest observed `‖h f‖ / ‖f‖`, as `[numerator, denominator]`.
    pub max_ratio: (String, String),
    pub within_bound: bool,
    pub all_contracted: bool,
}

impl HomotopyNormReport {
    pub fn passed(&self) -> bool {
        self.within_bound && self.all_contracted
    }
}

/// Draws random cochains with entries in `[-100, 100]`, turns each into a
/// cocycle `f = c - h δ c`, and checks `δ h f = f` and `‖h f‖ ≤ ‖f‖`.
/// Trial `t` uses stream `t` of the seeded generator.
pub fn split_homotopy_norm(h: &FiniteHypercover, trials: usize, seed: u64) -> Result<HomotopyNormReport> {
    if !h.is_split() {
        return Err(Error::Structural("hypercover carries no splitting".into()));
    }
    let top = h.levels();
    if top == 0 {
        return Err(Error::Structural("need at least two levels to test cocycles".into()));
    }
    let deltas: Vec<IntMatrix> = (0..=top).map(|k| h.coboundary(k)).collect();
    let pullbacks: Vec<IntMatrix> = (0..=top).map(|k| h.splitting_pullback(k).expect("split")).collect();
    let mut max_ratio = BigRational::zero();
    let mut all_contracted = true;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        // cochains in degrees 0..top-1 so that δ stays materialized
        let k = t % top;
        let c: Vec<BigInt> = (0..h.size(k))
            .map(|_| BigInt::from(rng.gen_range(-100i64..=100)))
            .collect();
        let dc = deltas[k + 1].mul_vec(&c);
        let hdc = pullbacks[k + 1].mul_vec(&dc);
        let f: Vec<BigInt> = c.iter().zip(&hdc).map(|(a, b)| a - b).collect();
        let hf = pullbacks[k].mul_vec(&f);
        if deltas[k].mul_vec(&hf) != f {
            all_contracted = false;
        }
        let r = norm_ratio(&NormedCochain::new(hf), &NormedCochain::new(f));
        if r > max_ratio {
            max_ratio = r;
        }
    }
    Ok(HomotopyNormReport {
        trials,
        seed,
        within_bound: max_ratio <= BigRational::from_integer(1.into()),
        max_ratio: (max_ratio.numer().to_string(), max_ratio.denom().to_string()),
        all_contracted,
    })
}

/// A surjection `map: S' → S` of finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Surjection {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
}

/// Compatible surjections `S'_j → S_j` with transition maps
/// `S'_{j+1} → S'_j` and `S_{j+1} → S_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectionTower {
    pub stages: Vec<Surjection>,
    pub source_transitions: Vec<Vec<usize>>,
    pub target_transitions: Vec<Vec<usize>>,
}

impl SurjectionTower {
    pub fn new(
        stages: Vec<Surjection>,
        source_transitions: Vec<Vec<usize>>,
        target_transitions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = stages.len();
        if n == 0 || source_transitions.len() + 1 != n || target_transitions.len() + 1 != n {
            return Err(Error::Structural(
                "a tower of k + 1 stages needs k transitions on each side".into(),
            ));
        }
        for s in &stages {
            if s.map.len() != s.source || s.map.iter().any(|&y| y >= s.target) {
                return Err(Error::Structural("stage map has the wrong shape".into()));
            }
            let mut hit = vec![false; s.target];
            s.map.iter().for_each(|&y| hit[y] = true);
            if !hit.into_iter().all(|b| b) {
                return Err(Error::Structural("stage map is not surjective".into()));
            }
        }
        for j in 0..n - 1 {
            let (lo, hi) = (&stages[j], &stages[j + 1]);
            let (ps, pt) = (&source_transitions[j], &target_transitions[j]);
            if ps.len() != hi.source
                || pt.len() != hi.target
                || ps.iter().any(|&x| x >= lo.source)
                || pt.iter().any(|&y| y >= lo.target)
            {
                return Err(Error::Structural("transition map has the wrong shape".into()));
            }
            if (0..hi.source).any(|x| lo.map[ps[x]] != pt[hi.map[x]]) {
                return Err(Error::Structural(format!("stages {j} and {} do not commute", j + 1)));
            }
        }
        Ok(SurjectionTower {
            stages,
            source_transitions,
            target_transitions,
        })
    }

    /// `{0,1}^j → {0,1}^{j-1}` forgetting the last coordinate, `1 ≤ j ≤ k`,
    /// with transitions forgetting the last coordinate as well.
    pub fn binary(k: usize) -> Self {
        let stages = (1..=k)
            .map(|j| Surjection {
                source: 1 << j,
                target: 1 << (j - 1),
                map: (0..1usize << j).map(|x| x & ((1 << (j - 1)) - 1)).collect(),
            })
            .collect();
        let forget = |j: usize| (0..1usize << j).map(|x| x & ((1 << (j - 1)) - 1)).collect();
        let source_transitions = (2..=k).map(forget).collect();
        let target_transitions = (2..=k).map(|j| forget(j - 1)).collect();
        SurjectionTower::new(stages, source_transitions, target_transitions).expect("binary tower commutes")
    }

    pub fn constant(size: usize, stages: usize) -> Self {
        let id: Vec<usize> = (0..size).collect();
        SurjectionTower::new(
            vec![
                Surjection {
                    source: size,
                    target: size,
                    map: id.clone()
                };
                stages
            ],
            vec![id.clone(); stages - 1],
            vec![id; stages - 1],
        )
        .expect("identity tower commutes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    /// `H^0, H^1, …, H^max_degree`.
    pub cohomology: Vec<FgAbGroup>,
    pub exact: bool,
}

/// Čech cohomology of each stage through `max_degree`; exactness means
/// `H^0 = Z^{S_j}` and `H^k = 0` for `k ≥ 1`.
pub fn profinite_stage_acyclicity(tower: &SurjectionTower, max_degree: usize) -> Result<Vec<StageReport>> {
    tower
        .stages
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let h = FiniteHypercover::cech_nerve(s.target, &s.map, None, max_degree + 1)?;
            let cohomology: Vec<FgAbGroup> = (0..=max_degree)
                .map(|k| cech_cohomology(&h, k))
                .collect::<Result<_>>()?;
            let exact = cohomology[0] == FgAbGroup::free(s.target) && cohomology[1..].iter().all(FgAbGroup::is_trivial);
            Ok(StageReport {
                stage: j,
                cohomology,
                exact,
            })
        })
        .collect()
}
