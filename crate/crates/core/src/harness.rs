//! End-to-end checks: the worked-example suite and seeded random campaigns.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::formulas::{euclid_sphere_bounds, zeta};
use crate::gh::{
    function_pair_search, ggh_bounds, ggh_exact, ggh_oracle, glue_and_hausdorff, GCorrespondence, GHResult, GhBudget,
    Method,
};
use crate::group::{count_homs_to_symmetric, FiniteGroup, GroupAction, HomBudget};
use crate::interleaving::{interleaving_lower_bounds, InterleavingOptions, InterleavingReport};
use crate::io::{opt_scalar_json, scalar_json};
use crate::samples::{sample_space, SampleSpec};
use crate::scalar::{Scalar, Q, TAU_CMP};
use crate::space::{AnySpace, GMetricSpace};
use crate::vr::Label;

/// One checked relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub lhs: Value,
    /// `">="`, `"=="`, `"in"` or `"holds"`
    pub relation: String,
    pub rhs: Value,
    pub slack: f64,
    pub pass: bool,
}

impl Verdict {
    /// `lhs >= rhs`.
    pub fn ge<S: Scalar>(name: &str, lhs: S, rhs: S) -> Self {
        Verdict {
            name: name.into(),
            lhs: scalar_json(lhs),
            relation: ">=".into(),
            rhs: scalar_json(rhs),
            slack: lhs.to_f64() - rhs.to_f64(),
            pass: rhs.le_tol(lhs, TAU_CMP),
        }
    }

    pub fn eq<S: Scalar>(name: &str, lhs: S, rhs: S) -> Self {
        Verdict {
            name: name.into(),
            lhs: scalar_json(lhs),
            relation: "==".into(),
            rhs: scalar_json(rhs),
            slack: -(lhs.to_f64() - rhs.to_f64()).abs(),
            pass: lhs.eq_tol(rhs, TAU_CMP),
        }
    }

    /// `lo <= value <= hi`.
    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        let slack = (value - lo).min(hi - value);
        Verdict {
            name: name.into(),
            lhs: json!(value),
            relation: "in".into(),
            rhs: json!([lo, hi]),
            slack,
            pass: slack >= -TAU_CMP,
        }
    }

    pub fn holds(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            lhs: json!(ok),
            relation: "holds".into(),
            rhs: json!(detail.into()),
            slack: if ok { 0.0 } else { -1.0 },
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhSummary {
    pub value: Value,
    pub method: Method,
    pub certificates: Vec<Value>,
}

impl GhSummary {
    fn of<S: Scalar>(r: &GHResult<S>) -> Self {
        GhSummary {
            value: scalar_json(r.value),
            method: r.method,
            certificates: r
                .lower_certificates
                .iter()
                .map(|c| json!({ "name": c.name, "lower": c.lower, "value": opt_scalar_json(c.value) }))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeLower {
    pub degree: usize,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub instance: String,
    pub seed: Option<u64>,
    pub exact: bool,
    pub ggh: Option<GhSummary>,
    /// Certified lower bounds on `d_I^G` per degree.
    pub interleaving: Vec<DegreeLower>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl StabilityReport {
    fn new(instance: &str, exact: bool) -> Self {
        StabilityReport {
            instance: instance.into(),
            seed: None,
            exact,
            ggh: None,
            interleaving: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    fn fail(&mut self, name: &str, err: impl std::fmt::Display) {
        self.push(Verdict::holds(name, false, format!("error: {err}")));
    }
}

pub fn all_passed(reports: &[StabilityReport]) -> bool {
    reports.iter().all(StabilityReport::passed)
}

/// Per-degree maximum of all interleaving constituents.
pub fn lower_by_degree<S: Scalar>(r: &InterleavingReport<S>) -> Vec<(usize, S)> {
    r.degrees
        .iter()
        .map(|&d| {
            let v = r
                .bottleneck_full
                .iter()
                .filter(|b| b.degree == d)
                .map(|b| b.value)
                .chain(r.bottleneck_eigen.iter().filter(|b| b.degree == d).map(|b| b.value))
                .chain(r.m_odd.iter().filter(|b| b.degree == d).map(|b| b.certified))
                .fold(S::zero(), S::max_of);
            (d, v)
        })
        .collect()
}

fn record_interleaving<S: Scalar>(report: &mut StabilityReport, r: &InterleavingReport<S>) {
    report.interleaving =
        lower_by_degree(r).into_iter().map(|(degree, v)| DegreeLower { degree, value: scalar_json(v) }).collect();
    report.notes.extend(r.notes.iter().cloned());
}

fn exact_sample(text: &str) -> Result<GMetricSpace<Q>> {
    match sample_space(&SampleSpec::parse(text)?)? {
        AnySpace::Exact(s) => Ok(s),
        AnySpace::Float(_) => unreachable!("worked examples are exact"),
    }
}

fn float_sample(spec: SampleSpec) -> Result<GMetricSpace<f64>> {
    Ok(sample_space(&spec)?.to_float())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperSuiteOptions {
    /// Include the sampled circle-versus-sphere comparison (tens of seconds).
    pub spheres: bool,
}

impl Default for PaperSuiteOptions {
    fn default() -> Self {
        PaperSuiteOptions { spheres: true }
    }
}

/// Runs the worked-example suite.
pub fn run_paper_examples(opts: PaperSuiteOptions) -> Vec<StabilityReport> {
    let mut jobs: Vec<(&str, fn() -> Result<StabilityReport>)> = vec![
        ("z3_threepoints", z3_threepoints),
        ("tripod", tripod),
        ("sixpoint", sixpoint),
        ("z3_branched", z3_branched),
        ("circle_displacement", circle_displacement),
        ("separation", separation),
        ("stabilizer_obstruction", stabilizer_obstruction),
        ("hom_counts", hom_counts),
        ("formulas", formulas),
    ];
    if opts.spheres {
        jobs.push(("circle_vs_sphere", circle_vs_sphere));
    }
    jobs.into_par_iter()
        .map(|(name, job)| {
            job().unwrap_or_else(|e| {
                let mut r = StabilityReport::new(name, true);
                r.fail("runs", e);
                r
            })
        })
        .collect()
}

fn z3_threepoints() -> Result<StabilityReport> {
    let x = exact_sample("paper:z3_threepoints")?;
    let y = exact_sample("paper:z3_threepoints_scaled2")?;
    let mut r = StabilityReport::new("z3_threepoints", true);
    let exact = ggh_exact(&x, &y, GhBudget::default())?;
    r.push(Verdict::eq("ggh_exact", exact.value, Q::new(1, 2)));
    r.push(Verdict::eq("ggh_oracle", ggh_oracle(&x, &y)?.value, Q::new(1, 2)));
    let (qx, _) = x.quotient();
    let (qy, _) = y.quotient();
    r.push(Verdict::holds("quotients are singletons", qx.len() == 1 && qy.len() == 1, "|X/G| = |Y/G| = 1"));
    r.push(Verdict::eq("gh_quotients", ggh_exact(&qx, &qy, GhBudget::default())?.value, Q::from_integer(0)));
    r.ggh = Some(GhSummary::of(&exact));
    Ok(r)
}

fn tripod() -> Result<StabilityReport> {
    let x = exact_sample("paper:z3_threepoints")?;
    let y = exact_sample("paper:z3_threepoints_scaled2")?;
    let mut r = StabilityReport::new("tripod", true);
    let corr = GCorrespondence::generated(&x, &y, &[(0, 0)])?;
    let glued = glue_and_hausdorff(&x, &y, &corr)?;
    r.push(Verdict::eq("glued hausdorff in Z", glued.hausdorff, Q::new(1, 2)));
    r.push(Verdict::eq("glued hausdorff in Z/G", glued.quotient_hausdorff, Q::new(1, 2)));
    // the tripod itself: X at the inner vertices, Y at the leaves
    let z = exact_sample("paper:tripod")?;
    let (ix, iy) = ([1, 2, 3], [4, 5, 6]);
    let sub = |idx: &[usize]| idx.iter().map(|&i| idx.iter().map(|&j| z.d(i, j)).collect()).collect::<Vec<Vec<Q>>>();
    r.push(Verdict::holds(
        "tripod embeds X and Y isometrically",
        sub(&ix) == x.dist_rows() && sub(&iy) == y.dist_rows(),
        "inner vertices pairwise 1, leaves pairwise 2",
    ));
    r.push(Verdict::eq("tripod hausdorff in Z", z.hausdorff(&ix, &iy), Q::new(1, 2)));
    let (zq, ids) = z.quotient();
    r.push(Verdict::eq("tripod hausdorff in Z/G", zq.hausdorff(&[ids[1]], &[ids[4]]), Q::new(1, 2)));
    Ok(r)
}

fn sixpoint() -> Result<StabilityReport> {
    let x = exact_sample("paper:sixpoint_X")?;
    let y4 = exact_sample("paper:sixpoint_Y")?;
    // Z2 acts on Y through the square of the Z4 generator
    let y = y4.pullback(x.group(), &[0, 2])?;
    let mut r = StabilityReport::new("sixpoint", true);
    let opts = InterleavingOptions { degrees: vec![0], ..Default::default() };
    let il = interleaving_lower_bounds(&x, &y, &opts)?;
    let full = il.bottleneck_full.iter().find(|b| b.degree == 0).map(|b| b.value).unwrap_or_default();
    r.push(Verdict::eq("bottleneck_full H0", full, Q::from_integer(0)));
    let eigen = il.bottleneck_eigen.iter().find(|b| b.degree == 0 && b.lambda == 1).map(|b| b.value).unwrap_or_default();
    r.push(Verdict::eq("eigen bottleneck (g=-1, lambda=-1)", eigen, Q::new(1, 2)));
    let code = il.barcodes_x.iter().find(|c| c.degree == 0 && c.label == Label::Eigen { g: 1, lambda: 1 });
    let three_unit = code.is_some_and(|c| {
        c.bars.len() == 3 && c.bars.iter().all(|b| b.birth == Q::from_integer(0) && b.death == Some(Q::from_integer(1)))
    });
    r.push(Verdict::holds("eigen barcode of X is 3 x (0,1]", three_unit, "three copies of (0,1]"));
    let modd = il.m_odd.iter().find(|b| b.side == "X" && b.degree == 0).map(|b| b.m_odd).unwrap_or_default();
    r.push(Verdict::eq("m_odd of X", modd, Q::new(1, 4)));
    r.push(Verdict::ge("combined lower", il.combined_lower, Q::new(1, 4)));
    let gh = ggh_exact(&x, &y, GhBudget::default())?;
    r.push(Verdict::ge("2 ggh >= combined lower", gh.value + gh.value, il.combined_lower));
    r.ggh = Some(GhSummary::of(&gh));
    record_interleaving(&mut r, &il);
    Ok(r)
}

fn z3_branched() -> Result<StabilityReport> {
    let s = 3.0;
    let x = exact_sample("paper:z3_branched,s=3,arms=3,resolution=1/20")?;
    let y = exact_sample("paper:z3_branched,s=3,arms=3,resolution=1/20,loops=false")?;
    let cap = Q::new(6, 5);
    let opts = InterleavingOptions { degrees: vec![1], r_max_x: Some(cap), r_max_y: Some(cap), ..Default::default() };
    let il = interleaving_lower_bounds(&x, &y, &opts)?;
    let mut r = StabilityReport::new("z3_branched", true);
    let v = lower_by_degree(&il)[0].1.to_f64();
    r.push(Verdict::within("H1 lower bound near s/6", v, s / 6.0 - 0.1, s / 6.0 + 0.1));
    record_interleaving(&mut r, &il);
    r.notes.push("resolution 1/20; tolerance 0.1 covers the discretization gap".into());
    Ok(r)
}

fn circle_vs_sphere() -> Result<StabilityReport> {
    let x = float_sample(SampleSpec::parse("circle_uniform,points=60")?)?;
    let y = float_sample(SampleSpec::parse("sphere_geodesic,n=2,points=300,scheme=fibonacci")?)?;
    let opts = InterleavingOptions { degrees: vec![1], r_max_y: Some(2.1), eigen: false, ..Default::default() };
    let il = interleaving_lower_bounds(&x, &y, &opts)?;
    let mut r = StabilityReport::new("circle_vs_sphere", false);
    let v = il.bottleneck_full[0].value;
    let target = zeta(1) / 2.0;
    r.push(Verdict::within("H1 bottleneck near zeta_1/2", v, target - 0.15, target + 0.15));
    let gap = 2.0 * PI / 60.0;
    r.notes.push(format!("tolerance 0.15; mesh-derived tolerance 2 x circle gap = {}", 2.0 * gap));
    record_interleaving(&mut r, &il);
    Ok(r)
}

fn circle_displacement() -> Result<StabilityReport> {
    let x = float_sample(SampleSpec::parse("circle_uniform,points=8")?)?;
    let y = x.with_action(GroupAction::trivial_on(x.group().clone(), x.len()))?;
    let certs = ggh_bounds(&x, &y)?;
    let get = |name: &str| certs.iter().find(|c| c.name == name).and_then(|c| c.value).unwrap_or(f64::NAN);
    let mut r = StabilityReport::new("circle_displacement", false);
    let half_pi = PI / 2.0;
    r.push(Verdict::within("lower_displacement", get("lower_displacement"), half_pi - 1e-9, half_pi + 1e-9));
    r.push(Verdict::within("upper", get("upper"), half_pi - 1e-9, half_pi + 1e-9));
    Ok(r)
}

fn separation() -> Result<StabilityReport> {
    let mut r = StabilityReport::new("separation", false);
    let cases: [(&str, f64); 5] = [
        ("sphere_geodesic,n=1,points=40,seed=1", PI),
        ("sphere_geodesic,n=2,points=60,seed=2", PI),
        ("cube_linf,n=2,points=40,seed=3", 2.0),
        ("sphere_linf,n=2,points=40,seed=4,scheme=include-designated-points", 2.0 / 3f64.sqrt()),
        ("sphere_linf,n=3,points=40,seed=5,scheme=include-designated-points", 1.0),
    ];
    for (spec, want) in cases {
        let sep = float_sample(SampleSpec::parse(spec)?)?.sep_g().unwrap_or(f64::INFINITY);
        r.push(Verdict::within(&format!("sep {spec}"), sep, want - 1e-12, want + 1e-12));
    }
    Ok(r)
}

fn stabilizer_obstruction() -> Result<StabilityReport> {
    let z2 = FiniteGroup::cyclic(2);
    let x = GMetricSpace::new(vec![vec![Q::from_integer(0)]], GroupAction::trivial_on(z2.clone(), 1))?;
    let one = Q::from_integer(1);
    let y = GMetricSpace::new(vec![vec![Q::from_integer(0), one], vec![one, Q::from_integer(0)]], z2.regular_action())?;
    let mut r = StabilityReport::new("stabilizer_obstruction", true);
    let exact = ggh_exact(&x, &y, GhBudget::default())?;
    r.push(Verdict::eq("ggh_exact", exact.value, Q::new(1, 2)));
    let fp = function_pair_search(&x, &y, GhBudget::default())?;
    r.push(Verdict::holds("no equivariant function pair", fp.is_none(), "a fixed point cannot map into a free orbit"));
    r.ggh = Some(GhSummary::of(&exact));
    Ok(r)
}

fn hom_counts() -> Result<StabilityReport> {
    let mut r = StabilityReport::new("hom_counts", true);
    let z2 = FiniteGroup::cyclic(2);
    let expected = [1u64, 2, 4, 10, 26, 76, 232, 764];
    let mut rec = vec![0u64, 1, 2];
    for n in 3..=8u64 {
        rec.push(rec[n as usize - 1] + (n - 1) * rec[n as usize - 2]);
    }
    for n in 1..=8usize {
        let count = count_homs_to_symmetric(&z2, n, HomBudget::default())?;
        r.push(Verdict::holds(
            &format!("|hom(Z2,S{n})|"),
            count == rec[n] && count == expected[n - 1],
            format!("enumerated {count}, recursion {}", rec[n]),
        ));
    }
    Ok(r)
}

fn formulas() -> Result<StabilityReport> {
    let mut r = StabilityReport::new("formulas", false);
    r.push(Verdict::eq("zeta_1", zeta(1), 2.0 * PI / 3.0));
    r.push(Verdict::within("zeta_2", zeta(2), 1.9106 - 5e-5, 1.9106 + 5e-5));
    let b12 = euclid_sphere_bounds(1, 2)?;
    r.push(Verdict::eq("euclid lower (1,2)", b12.lower, 3f64.sqrt() / 2.0));
    r.push(Verdict::eq("euclid upper (1,2)", b12.upper.unwrap_or(f64::NAN), 3f64.sqrt() / 2.0));
    r.push(Verdict::eq("euclid lower (2,3)", euclid_sphere_bounds(2, 3)?.lower, (2.0f64 / 3.0).sqrt()));
    r.push(Verdict::eq("euclid lower (1,3)", euclid_sphere_bounds(1, 3)?.lower, 3f64.sqrt() / 2.0));
    let mut worst = f64::INFINITY;
    for m in 1..=50 {
        let b = euclid_sphere_bounds(m, m + 1)?;
        worst = worst.min(b.upper.unwrap_or(f64::NAN) - b.lower);
    }
    r.push(Verdict::ge("min over m <= 50 of upper - lower", worst, 0.0));
    Ok(r)
}

// ---- random campaign ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignLimits {
    pub max_points: usize,
    /// Orders of the cyclic groups to draw from (1 is the trivial group).
    pub group_orders: Vec<usize>,
}

impl Default for CampaignLimits {
    fn default() -> Self {
        CampaignLimits { max_points: 4, group_orders: vec![1, 2, 3] }
    }
}

/// A random `G`-action of a cyclic group: random orbit sizes among `{1, m}`.
fn random_action(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<GroupAction> {
    let group = FiniteGroup::cyclic(m);
    if m == 1 {
        return Ok(GroupAction::trivial_on(group, n));
    }
    let mut gen: Vec<usize> = (0..n).collect();
    let mut next = 0;
    while next < n {
        if n - next >= m && rng.gen_bool(0.6) {
            for k in 0..m {
                gen[next + k] = next + (k + 1) % m;
            }
            next += m;
        } else {
            next += 1;
        }
    }
    GroupAction::from_generator_images(group, &[gen])
}

/// Random positive weights, maximized over the diagonal action, then closed
/// under shortest paths. The result is an invariant metric.
pub fn random_gspace(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<GMetricSpace<Q>> {
    let action = random_action(rng, m, n)?;
    let mut w = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(1..=6);
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    let mut sym = w.clone();
    for i in 0..n {
        for j in 0..n {
            for g in action.group().elements() {
                sym[i][j] = sym[i][j].max(w[action.apply(g, i)][action.apply(g, j)]);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                sym[i][j] = sym[i][j].min(sym[i][k] + sym[k][j]);
            }
        }
    }
    let dist = sym.iter().map(|row| row.iter().map(|&v| Q::new(v, 2)).collect()).collect();
    GMetricSpace::new(dist, action)
}

fn campaign_instance(seed: u64, limits: &CampaignLimits) -> StabilityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = limits.group_orders[rng.gen_range(0..limits.group_orders.len())];
    let mut size = || rng.gen_range(1..=limits.max_points.max(1));
    let (nx, ny, nw) = (size(), size(), size());
    let mut report = StabilityReport::new(&format!("random Z{m} |X|={nx} |Y|={ny} |W|={nw}"), true);
    report.seed = Some(seed);
    let spaces = (|| -> Result<_> {
        Ok((random_gspace(&mut rng, m, nx)?, random_gspace(&mut rng, m, ny)?, random_gspace(&mut rng, m, nw)?))
    })();
    match spaces {
        Ok((x, y, w)) => {
            if let Err(e) = check_instance(&mut report, &x, &y, &w) {
                report.fail("runs", e);
            }
        }
        Err(e) => report.fail("generates", e),
    }
    report
}

fn check_instance(r: &mut StabilityReport, x: &GMetricSpace<Q>, y: &GMetricSpace<Q>, w: &GMetricSpace<Q>) -> Result<()> {
    let b = GhBudget::default();
    let zero = Q::from_integer(0);
    let xy = ggh_exact(x, y, b)?;
    let d = xy.value;
    let yx = ggh_exact(y, x, b)?.value;
    let xw = ggh_exact(x, w, b)?.value;
    let yw = ggh_exact(y, w, b)?.value;
    r.push(Verdict::eq("identity d(X,X) = 0", ggh_exact(x, x, b)?.value, zero));
    r.push(Verdict::ge("nonnegativity", d, zero));
    r.push(Verdict::eq("symmetry", d, yx));
    r.push(Verdict::ge("triangle d(X,Y) + d(Y,W) >= d(X,W)", d + yw, xw));
    r.push(Verdict::eq("exact == oracle", d, ggh_oracle(x, y)?.value));
    let trivial = ggh_exact(&x.forget_action(), &y.forget_action(), b)?.value;
    r.push(Verdict::ge("ggh >= gh without action", d, trivial));
    let (qx, _) = x.quotient();
    let (qy, _) = y.quotient();
    r.push(Verdict::ge("ggh >= gh of quotients", d, ggh_exact(&qx, &qy, b)?.value));
    r.push(Verdict::ge("half max diam >= ggh", x.diam().max_of(y.diam()).half(), d));
    for c in ggh_bounds(x, y)? {
        if let Some(v) = c.value {
            if c.lower {
                r.push(Verdict::ge(&format!("ggh >= {}", c.name), d, v));
            }
        }
    }
    match function_pair_search(x, y, b)? {
        Some(fp) => {
            r.push(Verdict::ge("function pair >= ggh", fp.value, d));
            r.notes.push(format!("function pair {} exact", if fp.value == d { "matches" } else { "exceeds" }));
        }
        None => r.notes.push("no equivariant function pair".into()),
    }
    let il = interleaving_lower_bounds(x, y, &InterleavingOptions::default())?;
    for (degree, v) in lower_by_degree(&il) {
        r.push(Verdict::ge(&format!("2 ggh >= d_I lower (H{degree})"), d + d, v));
    }
    let own = interleaving_lower_bounds(x, x, &InterleavingOptions::default())?;
    r.push(Verdict::eq("d_I lower (X, X) = 0", own.combined_lower, zero));
    record_interleaving(r, &il);
    r.ggh = Some(GhSummary::of(&xy));
    Ok(())
}

/// `count` instances seeded `seed, seed+1, ...`; reports sorted by seed.
pub fn random_campaign(seed: u64, count: usize, limits: &CampaignLimits) -> Vec<StabilityReport> {
    let mut out: Vec<StabilityReport> =
        (0..count as u64).into_par_iter().map(|i| campaign_instance(seed.wrapping_add(i), limits)).collect();
    out.sort_by_key(|r| r.seed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_spaces_are_valid_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for m in 1..=3 {
            let x = random_gspace(&mut a, m, 4).unwrap();
            assert_eq!(x, random_gspace(&mut b, m, 4).unwrap());
        }
    }

    #[test]
    fn small_campaign_passes() {
        let reports = random_campaign(11, 6, &CampaignLimits::default());
        assert_eq!(reports.len(), 6);
        for r in &reports {
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
