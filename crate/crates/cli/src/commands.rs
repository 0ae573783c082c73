use std::path::Path;

use condensed_lab::adic::{standard_refinement, RationalCover};
use condensed_lab::breen_deligne::{bd_exactness_check, multiplication_homotopy};
use condensed_lab::cech::{split_homotopy_norm, torus_cohomology, HypercoverSpec};
use condensed_lab::duality::{
    ainfty_idempotence, ainfty_presentation_check, p1_serre_pairing, rhom_ainfty_vanishing, safe_zone, shriek_unit,
    xy_boundary_dualizing, RingSpec, ShriekOptions,
};
use condensed_lab::exact::{smith_normal_form, BigIntJson, ChainComplex, FgAbGroup, FinAbGroup, IntMatrix};
use condensed_lab::noebeling::{basis_certificate, noebeling_basis, CubeSubset};
use condensed_lab::simplicial::{em_homology, Coefficients};
use condensed_lab::solid::{identity_check, normalize, parse_expr};
use condensed_lab::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Config;
use crate::report::{params, Outcome, RunReport};
use crate::{AdicCommand, CechCommand, Command, DualityCommand, SolidCommand};

#[derive(Debug, PartialEq, Eq)]
pub enum CliError {
    /// Bad input; reported on stderr with exit code 2.
    Usage(String),
}

enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidGroup(_) => Failure::Usage(e.to_string()),
            other => Failure::Math(other),
        }
    }
}

type Computed = Result<(Outcome, Value), Failure>;

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn finish(
    command: &str,
    parameters: Map<String, Value>,
    seed: Option<u64>,
    computed: Computed,
) -> Result<RunReport, CliError> {
    let (outcome, payload) = match computed {
        Ok(x) => x,
        Err(Failure::Usage(m)) => return Err(CliError::Usage(m)),
        Err(Failure::Math(e)) => (Outcome::Fail, json!({ "error": e.to_string() })),
    };
    let report = RunReport::new(command, parameters, outcome, payload);
    Ok(match seed {
        Some(s) => report.with_seed(s),
        None => report,
    })
}

/// Reads `Z`, `Z^r` as lattices and anything else as a finite group.
pub fn coefficients(spec: &str, window: u32) -> Result<Coefficients, Error> {
    let s = spec.trim();
    if s == "Z" {
        return Ok(Coefficients::Lattice { rank: 1, window });
    }
    if let Some(r) = s.strip_prefix("Z^") {
        let rank = r
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("bad lattice rank in {s:?}")))?;
        return Ok(Coefficients::Lattice { rank, window });
    }
    Ok(Coefficients::Finite(FinAbGroup::parse(s)?))
}

fn snf(matrix: &str) -> Computed {
    let rows: Vec<Vec<i64>> = serde_json::from_str(matrix)
        .map_err(|e| Failure::Usage(format!("matrix must be JSON rows of integers: {e}")))?;
    let m = IntMatrix::from_dense(&rows).map_err(|e| Failure::Usage(e.to_string()))?;
    let sf = smith_normal_form(&m);
    let certified = sf.u.mul(&m)?.mul(&sf.v)? == sf.d && sf.u.is_unimodular() && sf.v.is_unimodular();
    let factors: Vec<BigIntJson> = sf.invariant_factors().into_iter().map(BigIntJson).collect();
    let payload = json!({
        "invariant_factors": value(&factors),
        "rank": sf.rank(),
        "u": value(&sf.u),
        "d": value(&sf.d),
        "v": value(&sf.v),
    });
    Ok((Outcome::from_bool(certified), payload))
}

fn homology(path: &Path, degree: Option<i64>) -> Computed {
    let c: ChainComplex = read_json(path)?;
    let groups: Vec<(i64, FgAbGroup)> = match degree {
        Some(i) => vec![(i, c.homology(i)?)],
        None => c.homology_all(),
    };
    let map: Map<String, Value> = groups.iter().map(|(i, g)| (i.to_string(), value(g))).collect();
    Ok((Outcome::Pass, json!({ "homology": map })))
}

fn em(group: &str, n: usize, degree: usize, window: u32) -> Computed {
    let p = coefficients(group, window)?;
    let h = em_homology(&p, n, degree)?;
    let mut payload = value(&h.group);
    if let (Some(w), Value::Object(obj)) = (h.window, &mut payload) {
        obj.insert("stable".into(), json!(h.stable));
        obj.insert("window".into(), json!(w));
    }
    Ok((Outcome::from_bool(h.stable), payload))
}

fn bd_check(orders: &str) -> Computed {
    let a = FinAbGroup::parse(orders)?;
    let r = bd_exactness_check(&a);
    Ok((Outcome::from_bool(r.exact()), value(&r)))
}

fn bd_homotopy(orders: &str, n: i64) -> Computed {
    let a = FinAbGroup::parse(orders)?;
    let cert = multiplication_homotopy(&a, n)?;
    cert.verify(&a)?;
    Ok((Outcome::Pass, value(&cert)))
}

fn noebeling(path: &Path) -> Computed {
    let s: CubeSubset = read_json(path)?;
    let basis = noebeling_basis(&s)?;
    let cert = basis_certificate(&s, &basis)?;
    Ok((
        Outcome::Pass,
        json!({ "basis": value(&basis), "certificate": value(&cert) }),
    ))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn torus(factors: usize, degree: Option<usize>, bound: usize) -> Computed {
    let degrees: Vec<usize> = match degree {
        Some(i) => vec![i],
        None => (0..=factors).collect(),
    };
    let mut map = Map::new();
    let mut ok = true;
    for i in degrees {
        let g = torus_cohomology(factors, i, bound)?;
        ok &= g == FgAbGroup::free(binomial(factors, i));
        map.insert(i.to_string(), value(&g));
    }
    Ok((Outcome::from_bool(ok), json!({ "cohomology": map })))
}

fn cech_homotopy(path: &Path, trials: usize, seed: u64) -> Computed {
    let spec: HypercoverSpec = read_json(path)?;
    let h = spec.build()?;
    let r = split_homotopy_norm(&h, trials, seed)?;
    Ok((Outcome::from_bool(r.passed()), value(&r)))
}

fn solid_check(lhs: &str, rhs: &str, level: usize) -> Computed {
    let r = identity_check(&parse_expr(lhs)?, &parse_expr(rhs)?, level)?;
    let outcome = if r.holds {
        Outcome::Pass
    } else if r.normal_forms_equal && r.symbolic_only() {
        Outcome::Symbolic
    } else {
        Outcome::Fail
    };
    Ok((outcome, value(&r)))
}

fn xy(window: usize) -> Computed {
    let r = xy_boundary_dualizing(window)?;
    let (lo, hi) = safe_zone(window)?;
    let stable = xy_boundary_dualizing(2 * window)?.dualizing.restricted(lo, hi) == r.dualizing;
    Ok((Outcome::from_bool(stable), value(&r.dualizing)))
}

fn ainfty(window: usize) -> Computed {
    let p = ainfty_presentation_check(window)?;
    let i = ainfty_idempotence(window)?;
    let v = rhom_ainfty_vanishing(window)?;
    let ok = p.passed && i.passed && v.passed;
    Ok((
        Outcome::from_bool(ok),
        json!({ "presentation": value(&p), "idempotence": value(&i), "vanishing": value(&v) }),
    ))
}

fn refine(path: &Path) -> Computed {
    let cover: RationalCover = read_json(path)?;
    cover.validate()?;
    let r = standard_refinement(&cover)?;
    r.verify(&cover)?;
    Ok((Outcome::Pass, value(&r)))
}

pub fn execute(command: &Command, config: &Config) -> Result<RunReport, CliError> {
    match command {
        Command::Snf { matrix } => finish("snf", params([("matrix", json!(matrix))]), None, snf(matrix)),
        Command::Homology { complex, degree } => finish(
            "homology",
            params([
                ("complex", json!(complex.display().to_string())),
                ("degree", json!(degree)),
            ]),
            None,
            homology(complex, *degree),
        ),
        Command::EmHomology {
            group,
            n,
            degree,
            window,
        } => {
            let window = window.unwrap_or(config.lattice_window);
            let p = params([
                ("group", json!(group)),
                ("n", json!(n)),
                ("degree", json!(degree)),
                ("window", json!(window)),
            ]);
            finish("em-homology", p, None, em(group, *n, *degree, window))
        }
        Command::BdCheck { orders } => finish("bd-check", params([("orders", json!(orders))]), None, bd_check(orders)),
        Command::BdHomotopy { orders, n } => finish(
            "bd-homotopy",
            params([("orders", json!(orders)), ("n", json!(n))]),
            None,
            bd_homotopy(orders, *n),
        ),
        Command::Noebeling { points } => finish(
            "noebeling",
            params([("points", json!(points.display().to_string()))]),
            None,
            noebeling(points),
        ),
        Command::Cech(CechCommand::Torus { factors, degree }) => finish(
            "cech torus",
            params([("factors", json!(factors)), ("degree", json!(degree))]),
            None,
            torus(*factors, *degree, config.torus_bound),
        ),
        Command::Cech(CechCommand::Homotopy { cover, trials, seed }) => {
            let trials = trials.unwrap_or(config.trials);
            finish(
                "cech homotopy",
                params([("cover", json!(cover.display().to_string())), ("trials", json!(trials))]),
                Some(*seed),
                cech_homotopy(cover, trials, *seed),
            )
        }
        Command::Solid(SolidCommand::Normalize { expr }) => {
            let computed = parse_expr(expr)
                .and_then(|e| normalize(&e))
                .map(|nf| (Outcome::Pass, json!({ "normal_form": nf.to_string() })))
                .map_err(Failure::from);
            finish("solid normalize", params([("expr", json!(expr))]), None, computed)
        }
        Command::Solid(SolidCommand::Check { lhs, rhs, level }) => {
            let level = level.unwrap_or(config.level);
            finish(
                "solid check",
                params([("lhs", json!(lhs)), ("rhs", json!(rhs)), ("level", json!(level))]),
                None,
                solid_check(lhs, rhs, level),
            )
        }
        Command::Duality(DualityCommand::ShriekUnit {
            ring,
            window,
            cap,
            codimension,
        }) => {
            let options = ShriekOptions {
                window: window.unwrap_or(config.window),
                cap: cap.unwrap_or(config.degree_cap),
                codimension: *codimension,
            };
            let p = params([
                ("ring", json!(ring)),
                ("window", json!(options.window)),
                ("cap", json!(options.cap)),
                ("codimension", json!(codimension)),
            ]);
            let computed = RingSpec::parse(ring)
                .and_then(|r| shriek_unit(&r, options))
                .map(|r| (Outcome::from_bool(r.invertible), value(&r)))
                .map_err(Failure::from);
            finish("duality shriek-unit", p, None, computed)
        }
        Command::Duality(DualityCommand::P1 { twist }) => {
            let computed = p1_serre_pairing(*twist, config.twist_bound)
                .map(|r| (Outcome::from_bool(r.perfect), value(&r)))
                .map_err(Failure::from);
            finish(
                "duality p1",
                params([("twist", json!(twist)), ("bound", json!(config.twist_bound))]),
                None,
                computed,
            )
        }
        Command::Duality(DualityCommand::Xy { window }) => {
            let window = window.unwrap_or(config.window);
            finish("duality xy", params([("window", json!(window))]), None, xy(window))
        }
        Command::Duality(DualityCommand::Ainfty { window }) => {
            let window = window.unwrap_or(config.window);
            finish(
                "duality ainfty",
                params([("window", json!(window))]),
                None,
                ainfty(window),
            )
        }
        Command::Adic(AdicCommand::Refine { cover }) => finish(
            "adic refine",
            params([("cover", json!(cover.display().to_string()))]),
            None,
            refine(cover),
        ),
        Command::Suite { quick, seed } => {
            let report = crate::suite::run_suite(*quick, *seed);
            let outcome = Outcome::from_bool(report.passed());
            finish(
                "suite",
                params([("quick", json!(quick))]),
                Some(*seed),
                Ok((outcome, value(&report))),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_specs() {
        assert_eq!(
            coefficients("Z", 2).unwrap(),
            Coefficients::Lattice { rank: 1, window: 2 }
        );
        assert_eq!(
            coefficients("Z^3", 1).unwrap(),
            Coefficients::Lattice { rank: 3, window: 1 }
        );
        assert!(matches!(coefficients("Z/2+Z/2", 1).unwrap(), Coefficients::Finite(_)));
        assert!(coefficients("Q", 1).is_err());
    }

    #[test]
    fn parse_errors_are_usage_errors() {
        let c = Config::default();
        let cmd = Command::Solid(SolidCommand::Normalize { expr: "Zp(".into() });
        assert!(matches!(execute(&cmd, &c), Err(CliError::Usage(_))));
        let cmd = Command::Duality(DualityCommand::P1 { twist: 20 });
        assert_eq!(execute(&cmd, &c).unwrap().outcome, Outcome::Fail);
    }
}
