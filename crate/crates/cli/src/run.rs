use std::collections::BTreeMap;
use std::time::Instant;

use equigh::field::Coefficients;
use equigh::formulas::{euclid_sphere_bounds, finiteness_count, model_ball_volume, zeta, FinitenessInput};
use equigh::gh::{function_pair_search, ggh, ggh_bounds, ggh_exact, ggh_oracle};
use equigh::group::{count_homs_to_symmetric, covering_ball_count, FiniteGroup};
use equigh::harness::{random_campaign, run_paper_examples, CampaignLimits, PaperSuiteOptions};
use equigh::interleaving::{barcodes, default_coefficients, interleaving_lower_bounds, InterleavingOptions};
use equigh::io::{
    any_space_json, barcode_json, certificate_json, gh_report_json, interleaving_report_json, net_report_json,
    packing_report_json, read_space, scalar_json, space_json, to_canonical, write_report, write_text,
};
use equigh::samples::{sample_space, SampleSpec};
use equigh::space::NetMode;
use equigh::vr::{build_vr, Label};
use equigh::{AnySpace, Error, GMetricSpace, Result, Scalar};
use serde_json::{json, Value};

use crate::{Command, FormulaOp, GhMode, NetModeArg, RunConfig, SpaceSource, Suite};

/// Canonical JSON output and whether every checked verdict passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub text: String,
    pub pass: bool,
}

macro_rules! with_one {
    ($s:expr, |$a:ident| $body:expr) => {
        match $s {
            AnySpace::Exact($a) => $body,
            AnySpace::Float($a) => $body,
        }
    };
}

macro_rules! with_pair {
    ($x:expr, $y:expr, |$a:ident, $b:ident| $body:expr) => {
        match ($x, $y) {
            (AnySpace::Exact($a), AnySpace::Exact($b)) => $body,
            (x, y) => {
                let ($a, $b) = (x.to_float(), y.to_float());
                $body
            }
        }
    };
}

fn load(src: &SpaceSource, seed: Option<u64>) -> Result<AnySpace> {
    match src {
        SpaceSource::File(path) => read_space(path),
        SpaceSource::Sample(text) => {
            let mut spec = SampleSpec::parse(text)?;
            if let Some(s) = seed.filter(|_| !text.contains("seed=")) {
                spec.seed = s;
            }
            sample_space(&spec)
        }
    }
}

fn parse_scale<S: Scalar>(text: &Option<String>) -> Result<Option<S>> {
    text.as_ref()
        .map(|t| S::parse_text(t).ok_or_else(|| Error::BadParams(format!("`{t}` is not a valid scale"))))
        .transpose()
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let x = config.x.as_ref().map(|s| load(s, config.seed)).transpose()?;
    let mut y = config.y.as_ref().map(|s| load(s, config.seed)).transpose()?;
    if let (Some(hom), Some(xs), Some(ys)) = (&config.restrict_y, &x, &y) {
        y = Some(ys.pullback(xs.group(), hom)?);
    }
    let mut pass = true;
    let value = match &config.command {
        Command::Gh { mode, quotients } => {
            let (x, y) = (x.expect("checked"), y.expect("checked"));
            with_pair!(x, y, |a, b| {
                if *quotients {
                    gh(config, *mode, &a.quotient().0, &b.quotient().0)?
                } else {
                    gh(config, *mode, &a, &b)?
                }
            })
        }
        Command::Persist { max_dim, degrees, r_max, export_boundary } => {
            with_one!(x.expect("checked"), |s| {
                let complex = build_vr(&s, *max_dim, parse_scale(r_max)?, config.budgets.simplices)?;
                if let Some(path) = export_boundary {
                    write_text(path, &complex.boundary_text())?;
                }
                let degrees = degrees.clone().unwrap_or_else(|| (0..*max_dim).collect());
                let coeffs = Coefficients::from_characteristic(config.p.unwrap_or(2))?;
                let codes = barcodes(&complex, Label::Full, coeffs, &degrees)?;
                json!({
                    "exact": s.is_exact_space(),
                    "field": coeffs.characteristic(),
                    "simplices": complex.count_by_dim(),
                    "barcodes": codes.iter().map(barcode_json).collect::<Vec<_>>(),
                })
            })
        }
        Command::Eigen { max_dim, degrees, r_max, g, lambda } => {
            with_one!(x.expect("checked"), |s| {
                let group = s.group();
                let g = g.or_else(|| group.generators().first().copied()).unwrap_or(group.identity());
                if g >= group.order() {
                    return Err(Error::BadParams(format!("group element {g} out of range")));
                }
                let order = group.element_order(g);
                let coeffs = match config.p {
                    Some(p) => Coefficients::from_characteristic(p)?,
                    None => default_coefficients(order),
                };
                let complex = build_vr(&s, *max_dim, parse_scale(r_max)?, config.budgets.simplices)?;
                let degrees = degrees.clone().unwrap_or_else(|| (0..*max_dim).collect());
                let lambdas: Vec<usize> = match lambda {
                    Some(l) => vec![*l],
                    None => (0..order).collect(),
                };
                let mut codes = Vec::new();
                for l in lambdas {
                    codes.extend(barcodes(&complex, Label::Eigen { g, lambda: l }, coeffs, &degrees)?);
                }
                json!({
                    "exact": s.is_exact_space(),
                    "g": g,
                    "order": order,
                    "field": coeffs.characteristic(),
                    "barcodes": codes.iter().map(barcode_json).collect::<Vec<_>>(),
                })
            })
        }
        Command::DILower { degrees, r_max_x, r_max_y, eigen } => {
            let (x, y) = (x.expect("checked"), y.expect("checked"));
            with_pair!(x, y, |a, b| {
                let opts = InterleavingOptions {
                    degrees: degrees.clone(),
                    p: config.p,
                    r_max_x: parse_scale(r_max_x)?,
                    r_max_y: parse_scale(r_max_y)?,
                    max_simplices: config.budgets.simplices,
                    eigen: *eigen,
                    ..Default::default()
                };
                interleaving_report_json(&interleaving_lower_bounds(&a, &b, &opts)?)
            })
        }
        Command::Quotient => with_one!(x.expect("checked"), |s| space_json(&s.quotient().0)),
        Command::Net { epsilon, mode, packing } => {
            with_one!(x.expect("checked"), |s| {
                let eps = parse_scale(&Some(epsilon.clone()))?.expect("given");
                let mode = match mode {
                    NetModeArg::Greedy => NetMode::Greedy,
                    NetModeArg::Exact => NetMode::Exact,
                };
                let mut out = json!({ "net": net_report_json(&s.g_invariant_net(eps, mode, config.budgets.nodes)?) });
                if *packing {
                    let check = s.packing_upper_bound_check(eps, config.budgets.nodes)?;
                    pass &= check.holds;
                    out["packing_check"] = packing_report_json(&check);
                }
                out
            })
        }
        Command::Sep { point } => {
            with_one!(x.expect("checked"), |s| {
                let mut out = json!({
                    "exact": s.is_exact_space(),
                    "diam": scalar_json(s.diam()),
                    "sep_G": s.sep_g().map_or(json!("inf"), scalar_json),
                });
                if let Some(p) = point {
                    if *p >= s.len() {
                        return Err(Error::BadParams(format!("point {p} out of range")));
                    }
                    out["displacement"] = json!(s.displacement(*p).into_iter().map(scalar_json).collect::<Vec<_>>());
                }
                out
            })
        }
        Command::Formulas { op, params } => formulas(config, *op, params)?,
        Command::Verify { suite, count, max_points, spheres } => {
            let reports = match suite {
                Suite::Paper => run_paper_examples(PaperSuiteOptions { spheres: *spheres }),
                Suite::Random => {
                    let limits = CampaignLimits { max_points: *max_points, ..Default::default() };
                    random_campaign(config.seed.unwrap_or(0), *count, &limits)
                }
            };
            let failures = reports.iter().filter(|r| !r.passed()).count();
            pass = failures == 0;
            json!({
                "suite": match suite { Suite::Paper => "paper", Suite::Random => "random" },
                "seed": config.seed,
                "passed": pass,
                "failures": failures,
                "reports": reports,
            })
        }
        Command::Sample => any_space_json(&x.expect("checked")),
    };
    if let Some(path) = &config.out {
        write_report(path, &value)?;
    }
    if config.verbosity > 0 {
        eprintln!("equigh: done in {:.3} s", start.elapsed().as_secs_f64());
    }
    Ok(Outcome { text: to_canonical(&value), value, pass })
}

trait ExactFlag {
    fn is_exact_space(&self) -> bool;
}

impl<S: Scalar> ExactFlag for GMetricSpace<S> {
    fn is_exact_space(&self) -> bool {
        S::EXACT
    }
}

fn gh<S: Scalar>(config: &RunConfig, mode: GhMode, x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> Result<Value> {
    let budget = config.budgets.gh();
    let mut result = match mode {
        GhMode::Auto => ggh(x, y, budget)?,
        GhMode::Exact => ggh_exact(x, y, budget)?,
        GhMode::Oracle => ggh_oracle(x, y)?,
        GhMode::BoundsOnly => {
            let certs = ggh_bounds(x, y)?;
            return Ok(json!({
                "exact": S::EXACT,
                "certificates": certs.iter().map(certificate_json).collect::<Vec<_>>(),
            }));
        }
        GhMode::FunctionPair => match function_pair_search(x, y, budget)? {
            Some(r) => r,
            None => {
                return Ok(json!({
                    "exact": S::EXACT,
                    "method": "function_pair",
                    "value": null,
                    "note": "no equivariant function pair exists",
                }))
            }
        },
    };
    if result.lower_certificates.is_empty() {
        result.lower_certificates = ggh_bounds(x, y)?;
    }
    Ok(gh_report_json(&result))
}

fn formulas(config: &RunConfig, op: FormulaOp, params: &[(String, String)]) -> Result<Value> {
    let map: BTreeMap<&str, &str> = params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let allowed: &[&str] = match op {
        FormulaOp::Zeta => &["n"],
        FormulaOp::EuclidBounds => &["m", "n"],
        FormulaOp::Nu => &["n", "kappa", "r"],
        FormulaOp::Finiteness => &["n", "C", "D", "kappa", "K", "t", "group"],
        FormulaOp::Homs => &["group", "j"],
        FormulaOp::CoveringCount => &["group", "n"],
    };
    if let Some(k) = map.keys().find(|k| !allowed.contains(k)) {
        return Err(Error::BadParams(format!("unknown parameter `{k}`; expected {allowed:?}")));
    }
    fn get<T: std::str::FromStr>(map: &BTreeMap<&str, &str>, key: &str) -> Result<T> {
        let v = map.get(key).ok_or_else(|| Error::BadParams(format!("missing parameter `{key}`")))?;
        v.parse().map_err(|_| Error::BadParams(format!("bad value `{v}` for `{key}`")))
    }
    let group = |map: &BTreeMap<&str, &str>| FiniteGroup::by_name(map.get("group").copied().unwrap_or("trivial"));
    Ok(match op {
        FormulaOp::Zeta => json!({ "op": "zeta", "n": get::<u64>(&map, "n")?, "value": zeta(get(&map, "n")?) }),
        FormulaOp::EuclidBounds => {
            let b = euclid_sphere_bounds(get(&map, "m")?, get(&map, "n")?)?;
            json!({ "op": "euclid-bounds", "lower": b.lower, "upper": b.upper })
        }
        FormulaOp::Nu => {
            json!({ "op": "nu", "value": model_ball_volume(get(&map, "n")?, get(&map, "kappa")?, get(&map, "r")?)? })
        }
        FormulaOp::Finiteness => {
            let input = FinitenessInput {
                n: get(&map, "n")?,
                c: get(&map, "C")?,
                d: get(&map, "D")?,
                kappa: get(&map, "kappa")?,
                k: get(&map, "K")?,
                t: get(&map, "t")?,
                group: group(&map)?,
            };
            let r = finiteness_count(&input, config.budgets.hom())?;
            json!({ "op": "finiteness", "r_CK": r.r_ck, "rho": r.rho, "M": r.m, "count": r.count.to_string() })
        }
        FormulaOp::Homs => {
            let j: usize = get(&map, "j")?;
            json!({ "op": "homs", "j": j, "count": count_homs_to_symmetric(&group(&map)?, j, config.budgets.hom())? })
        }
        FormulaOp::CoveringCount => {
            let n: usize = get(&map, "n")?;
            let c = covering_ball_count(&group(&map)?, n, config.budgets.hom())?;
            json!({ "op": "covering-count", "n": n, "count": c.to_string() })
        }
    })
}
