use std::f64::consts::PI;
use std::path::Path;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use equigh::formulas::euclid_sphere_bounds;
use equigh::gh::{glue_and_hausdorff, GCorrespondence};
use equigh::interleaving::m_multiplicity;
use equigh::persistence::{Bar, Barcode};
use equigh::samples::{sample_space, SampleSpec};
use equigh::{AnySpace, GMetricSpace, Q};
use num_traits::Signed;
use serde_json::Value;

const TOL_SPHERE: f64 = 0.15;
const TOL_PIN: f64 = 1e-9;
const TOL_SEP: f64 = 1e-12;
const TOL_ZETA2: f64 = 5e-5;
const TOL_CLOSED: f64 = 1e-15;
const TOL_BRANCHED: f64 = 0.1;

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Check { ok, detail: detail.into() }
    }
}

fn equigh(args: &[&str]) -> Value {
    let out = Process::new(env!("CARGO_BIN_EXE_equigh")).args(args).output().unwrap();
    assert!(out.status.success() || out.status.code() == Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) if s == "inf" => f64::INFINITY,
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        },
        _ => panic!("not a number: {v}"),
    }
}

fn exact(name: &str) -> GMetricSpace<Q> {
    match sample_space(&SampleSpec::parse(name).unwrap()).unwrap() {
        AnySpace::Exact(s) => s,
        AnySpace::Float(_) => panic!("{name} is not exact"),
    }
}

/// Half the least distortion over every G-invariant relation, surjective on both sides.
fn brute_ggh(x: &GMetricSpace<Q>, y: &GMetricSpace<Q>) -> Q {
    let pairs: Vec<(usize, usize)> = (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).collect();
    let mut best: Option<Q> = None;
    for mask in 1u64..(1 << pairs.len()) {
        let r: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p).collect();
        let onto_x = (0..x.len()).all(|i| r.iter().any(|p| p.0 == i));
        let onto_y = (0..y.len()).all(|j| r.iter().any(|p| p.1 == j));
        let invariant = x.group().elements().all(|g| {
            r.iter().all(|&(i, j)| r.contains(&(x.action().apply(g, i), y.action().apply(g, j))))
        });
        if !(onto_x && onto_y && invariant) {
            continue;
        }
        let mut dis = Q::from_integer(0);
        for &(a, b) in &r {
            for &(c, d) in &r {
                dis = dis.max((x.d(a, c) - y.d(b, d)).abs());
            }
        }
        best = Some(best.map_or(dis, |b| b.min(dis)));
    }
    best.unwrap() / Q::from_integer(2)
}

fn bars(v: &Value) -> Vec<(f64, f64)> {
    v["bars"].as_array().unwrap().iter().map(|b| (num(&b[0]), num(&b[1]))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Bottleneck distance over every matching, each side padded with diagonal slots.
fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let n = a.len() + b.len();
    let left: Vec<Option<(f64, f64)>> = a.iter().copied().map(Some).chain(std::iter::repeat(None).take(b.len())).collect();
    let right: Vec<Option<(f64, f64)>> = b.iter().copied().map(Some).chain(std::iter::repeat(None).take(a.len())).collect();
    let cost = |l: Option<(f64, f64)>, r: Option<(f64, f64)>| match (l, r) {
        (None, None) => 0.0,
        (Some((s, t)), None) | (None, Some((s, t))) => (t - s) / 2.0,
        (Some((s, t)), Some((u, v))) => {
            let dd = if t.is_infinite() && v.is_infinite() { 0.0 } else { (t - v).abs() };
            (s - u).abs().max(dd)
        }
    };
    permutations(n)
        .iter()
        .map(|p| (0..n).map(|i| cost(left[i], right[p[i]])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Check {
    let (x, y) = ("x=paper:z3_threepoints", "y=paper:z3_threepoints_scaled2");
    let gh = equigh(&["gh", "--exact", "--sample", x, "--sample", y]);
    let quot = equigh(&["gh", "--quotients", "--sample", x, "--sample", y]);
    let oracle = brute_ggh(&exact("paper:z3_threepoints"), &exact("paper:z3_threepoints_scaled2"));
    let ok = gh["value"] == "1/2" && quot["value"] == "0/1" && oracle == Q::new(1, 2);
    Check::new(ok, format!("gh = {}, quotients = {}, relation oracle = {oracle}", gh["value"], quot["value"]))
}

fn criterion_2() -> Check {
    let x = exact("paper:z3_threepoints");
    let y = exact("paper:z3_threepoints_scaled2");
    let corr = GCorrespondence::generated(&x, &y, &[(0, 0)]).unwrap();
    let glued = glue_and_hausdorff(&x, &y, &corr).unwrap();
    let z = exact("paper:tripod");
    let (zq, ids) = z.quotient();
    let tripod = (z.hausdorff(&[1, 2, 3], &[4, 5, 6]), zq.hausdorff(&[ids[1]], &[ids[4]]));
    let half = Q::new(1, 2);
    let ok = glued.hausdorff == half && glued.quotient_hausdorff == half && tripod == (half, half);
    Check::new(
        ok,
        format!("Z: {} / {}, Z/G: {} / {}", glued.hausdorff, tripod.0, glued.quotient_hausdorff, tripod.1),
    )
}

fn criterion_3() -> Check {
    let r = equigh(&[
        "dI-lower",
        "--sample",
        "x=paper:sixpoint_X",
        "--sample",
        "y=paper:sixpoint_Y",
        "--restrict-y",
        "0,2",
        "--degrees",
        "0",
    ]);
    let find = |side: &str, lambda: Option<u64>| -> Value {
        r[side]
            .as_array()
            .unwrap()
            .iter()
            .find(|b| match lambda {
                None => b["label"] == "full",
                Some(l) => b["label"]["lambda"] == l,
            })
            .unwrap()
            .clone()
    };
    let full_same = bars(&find("barcodes_x", None)) == bars(&find("barcodes_y", None));
    let full_bn = num(&r["bottleneck_full"][0]["value"]);
    // λ = -1 is the eigenvalue of index 1 for an element of order 2
    let minus = bars(&find("barcodes_x", Some(1)));
    let three = minus == vec![(0.0, 1.0); 3];
    let bc = Barcode::new(0, 5, equigh::vr::Label::Eigen { g: 1, lambda: 1 }, vec![Bar::finite(Q::from_integer(0), Q::from_integer(1)); 3]);
    let m3 = m_multiplicity(&bc, 3);
    let oracle = (0..2u64)
        .map(|l| brute_bottleneck(&bars(&find("barcodes_x", Some(l))), &bars(&find("barcodes_y", Some(l)))))
        .fold(0.0, f64::max);
    let reported = r["bottleneck_eigen"].as_array().unwrap().iter().map(|e| num(&e["value"])).fold(0.0, f64::max);
    let combined = num(&r["certified_lower_bound"]);
    let ok = full_same && full_bn == 0.0 && three && m3 == Q::new(1, 4) && r["m_odd"][0]["m_odd"] == "1/4"
        && combined >= 0.25 && reported == 0.5 && oracle == 0.5;
    Check::new(
        ok,
        format!(
            "H0 bottleneck {full_bn}, eigen(-1) {minus:?}, m3 {m3}, eigen bottleneck {reported} (matching oracle {oracle}), combined {combined}"
        ),
    )
}

fn criterion_4() -> Check {
    let r = equigh(&[
        "dI-lower",
        "--sample",
        "x=circle_uniform,points=60",
        "--sample",
        "y=sphere_geodesic,n=2,points=300,scheme=fibonacci",
        "--r-max-y",
        "2.1",
        "--degrees",
        "1",
        "--no-eigen",
    ]);
    let v = num(&r["bottleneck_full"][0]["value"]);
    let target = PI / 3.0;
    Check::new((v - target).abs() <= TOL_SPHERE, format!("H1 bottleneck {v:.6}, target {target:.6} +- {TOL_SPHERE}"))
}

fn criterion_5(dir: &Path) -> Check {
    let x = equigh(&["sample", "--sample", "circle_uniform,points=16"]);
    let mut y = x.clone();
    let n = x["dist"].as_array().unwrap().len();
    let id: Vec<usize> = (0..n).collect();
    y["action"] = serde_json::json!([id, id]);
    let (px, py) = (dir.join("circle.json"), dir.join("circle_trivial.json"));
    std::fs::write(&px, x.to_string()).unwrap();
    std::fs::write(&py, y.to_string()).unwrap();
    let r = equigh(&["gh", "--bounds-only", "--space-x", px.to_str().unwrap(), "--space-y", py.to_str().unwrap()]);
    let cert = |name: &str| {
        r["certificates"].as_array().unwrap().iter().find(|c| c["name"] == name).map(|c| num(&c["value"])).unwrap()
    };
    let (lo, up) = (cert("lower_displacement"), cert("upper"));
    let ok = (lo - PI / 2.0).abs() <= TOL_PIN && (up - PI / 2.0).abs() <= TOL_PIN;
    Check::new(ok, format!("lower_displacement {lo}, upper {up}, target pi/2 +- {TOL_PIN:e}"))
}

fn criterion_6() -> Check {
    let sep = |spec: String| num(&equigh(&["sep", "--sample", &spec])["sep_G"]);
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        for n in 1..=3 {
            worst = worst.max((sep(format!("sphere_geodesic,n={n},points=40,seed={seed}")) - PI).abs());
            worst = worst.max((sep(format!("cube_linf,n={n},points=40,seed={seed}")) - 2.0).abs());
            let want = 2.0 / ((n + 1) as f64).sqrt();
            let got = sep(format!("sphere_linf,n={n},points=40,seed={seed},scheme=include-designated-points"));
            worst = worst.max((got - want).abs());
        }
    }
    Check::new(worst <= TOL_SEP, format!("max deviation {worst:e} over 27 samples, tolerance {TOL_SEP:e}"))
}

fn criterion_7() -> Check {
    let counts: Vec<u64> = (1..=8)
        .map(|j| equigh(&["formulas", "--op", "homs", "--params", &format!("group=Z2,j={j}")])["count"].as_u64().unwrap())
        .collect();
    let mut a = vec![1u64, 2];
    for n in 3..=8u64 {
        a.push(a[n as usize - 2] + (n - 1) * a[n as usize - 3]);
    }
    Check::new(counts == a && a == [1, 2, 4, 10, 26, 76, 232, 764], format!("{counts:?}"))
}

fn criterion_8() -> Check {
    let z = |n: u64| num(&equigh(&["formulas", "--op", "zeta", "--params", &format!("n={n}")])["value"]);
    let lower = |m: u64, n: u64| {
        num(&equigh(&["formulas", "--op", "euclid-bounds", "--params", &format!("m={m},n={n}")])["lower"])
    };
    let (z1, z2) = (z(1), z(2));
    let (l1, l2) = (lower(1, 2), lower(2, 3));
    let ordered = (1..=50u64).all(|m| {
        (m + 1..=m + 3).all(|n| {
            let b = euclid_sphere_bounds(m, n).unwrap();
            b.upper.is_none_or(|u| b.lower <= u)
        })
    });
    let ok = (z1 - 2.0 * PI / 3.0).abs() <= TOL_CLOSED
        && (z2 - 1.9106).abs() <= TOL_ZETA2
        && (l1 - 3f64.sqrt() / 2.0).abs() <= TOL_CLOSED
        && (l2 - (2.0f64 / 3.0).sqrt()).abs() <= TOL_CLOSED
        && ordered;
    Check::new(ok, format!("zeta1 {z1}, zeta2 {z2:.6}, lower(1) {l1}, lower(2) {l2}, lower <= upper to m = 50: {ordered}"))
}

fn criterion_9() -> Check {
    let r = equigh(&[
        "dI-lower",
        "--sample",
        "x=paper:z3_branched,s=3,arms=3,resolution=1/20",
        "--sample",
        "y=paper:z3_branched,s=3,arms=3,resolution=1/20,loops=false",
        "--r-max-x",
        "6/5",
        "--r-max-y",
        "6/5",
        "--degrees",
        "1",
    ]);
    let v = num(&r["certified_lower_bound"]);
    let target = 3.0 / 6.0;
    Check::new((v - target).abs() <= TOL_BRANCHED, format!("H1 lower bound {v}, target {target} +- {TOL_BRANCHED}"))
}

fn criterion_10() -> Check {
    let r = equigh(&["verify", "--suite", "random", "--count", "200", "--seed", "1"]);
    let failures = r["failures"].as_u64().unwrap();
    let instances = r["reports"].as_array().unwrap().len();
    Check::new(failures == 0 && instances == 200, format!("{instances} instances, {failures} violations"))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let secs = Duration::from_secs;
    let criteria: Vec<(u32, &str, Duration, Box<dyn Fn() -> Check>)> = vec![
        (1, "Z3 three points: exact 1/2, quotients 0", secs(1), Box::new(criterion_1)),
        (2, "tripod gluing: Hausdorff 1/2 in Z and Z/G", secs(1), Box::new(criterion_2)),
        (3, "six points: H0 equal, eigen bars, m3, combined bound", secs(5), Box::new(criterion_3)),
        (4, "circle vs sphere H1 bottleneck", secs(120), Box::new(criterion_4)),
        (5, "displacement pinning on the circle", secs(1), Box::new(|| criterion_5(dir.path()))),
        (6, "Sep^G of sphere and cube samples", secs(1), Box::new(criterion_6)),
        (7, "hom(Z2, S_n) counts", secs(10), Box::new(criterion_7)),
        (8, "zeta and Euclidean sphere bounds", secs(1), Box::new(criterion_8)),
        (9, "branched Z3 H1 lower bound", secs(60), Box::new(criterion_9)),
        (10, "random property campaign", secs(600), Box::new(criterion_10)),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, run) in &criteria {
        let start = Instant::now();
        let check = run();
        let took = start.elapsed();
        let ok = check.ok && took <= *limit;
        println!(
            "criterion {n} [{}] {name}: {} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            check.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failed.push(*n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
