//! Generators for the sampled spheres and the small worked-example spaces.
//!
//! Sample specs are written `kind[,key=value]*`, e.g.
//! `circle_uniform,points=60` or `paper:z3_branched,s=3,resolution=0.05`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAction, Perm};
use crate::scalar::{Scalar, Q};
use crate::space::{AnySpace, GMetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    SphereGeodesic,
    SphereEuclidean,
    SphereLinf,
    CubeLinf,
    CircleUniform,
    Z3ThreePoints,
    Z3ThreePointsScaled2,
    Tripod,
    SixPointX,
    SixPointY,
    Z3Branched,
}

impl SampleKind {
    pub const ALL: [(&'static str, SampleKind); 11] = [
        ("sphere_geodesic", SampleKind::SphereGeodesic),
        ("sphere_euclidean", SampleKind::SphereEuclidean),
        ("sphere_linf", SampleKind::SphereLinf),
        ("cube_linf", SampleKind::CubeLinf),
        ("circle_uniform", SampleKind::CircleUniform),
        ("paper:z3_threepoints", SampleKind::Z3ThreePoints),
        ("paper:z3_threepoints_scaled2", SampleKind::Z3ThreePointsScaled2),
        ("paper:tripod", SampleKind::Tripod),
        ("paper:sixpoint_X", SampleKind::SixPointX),
        ("paper:sixpoint_Y", SampleKind::SixPointY),
        ("paper:z3_branched", SampleKind::Z3Branched),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, k)| *k == self).map(|(n, _)| *n).expect("listed")
    }
}

/// How sphere and cube samples are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Seeded uniform points together with their antipodes.
    UniformSymmetric,
    /// As above, but the first pairs are the designated points `±e_0` and
    /// `±(1,..,1)/√(n+1)` (cube: `±(1,..,1)`).
    IncludeDesignated,
    /// Deterministic quasi-uniform points (circle: equally spaced; 2-sphere:
    /// Fibonacci spiral on a hemisphere) with their antipodes.
    Fibonacci,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(kind: SampleKind) -> Self {
        SampleSpec { kind, params: BTreeMap::new(), seed: 0 }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(',');
        let kind_name = parts.next().unwrap_or_default().trim();
        let kind = SampleKind::ALL
            .iter()
            .find(|(n, _)| *n == kind_name)
            .map(|(_, k)| *k)
            .ok_or_else(|| Error::BadParams(format!("unknown sample kind `{kind_name}`")))?;
        let mut spec = SampleSpec::new(kind);
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::BadParams(format!("sample parameter `{part}` is not key=value")))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "seed" {
                spec.seed = v.parse().map_err(|_| Error::BadParams(format!("bad seed `{v}`")))?;
            } else {
                spec.params.insert(k.to_string(), v.to_string());
            }
        }
        Ok(spec)
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::BadParams(format!("bad value `{v}` for `{key}`"))),
        }
    }

    fn get_q(&self, key: &str, default: Q) -> Result<Q> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => Q::parse_text(v)
                .filter(|q| *q > Q::zero())
                .ok_or_else(|| Error::BadParams(format!("`{key}` must be a positive rational, got `{v}`"))),
        }
    }

    fn scheme(&self) -> Result<Scheme> {
        match self.params.get("scheme").map(String::as_str) {
            None | Some("uniform-symmetric") => Ok(Scheme::UniformSymmetric),
            Some("include-designated-points") => Ok(Scheme::IncludeDesignated),
            Some("fibonacci") => Ok(Scheme::Fibonacci),
            Some(other) => Err(Error::BadParams(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Builds a validated sample space.
pub fn sample_space(spec: &SampleSpec) -> Result<AnySpace> {
    for key in spec.params.keys() {
        if !allowed_params(spec.kind).contains(&key.as_str()) {
            return Err(Error::BadParams(format!("`{key}` is not a parameter of {}", spec.kind.name())));
        }
    }
    use SampleKind::*;
    match spec.kind {
        SphereGeodesic | SphereEuclidean | SphereLinf | CubeLinf => {
            let n: usize = spec.get("n", 1)?;
            let points: usize = spec.get("points", 20)?;
            if n == 0 || points == 0 || points % 2 == 1 {
                return Err(Error::BadParams("need n >= 1 and an even, positive point count".into()));
            }
            let coords = sphere_like_points(spec.kind, n, points / 2, spec.scheme()?, spec.seed)?;
            let metric: fn(&[f64], &[f64]) -> f64 = match spec.kind {
                SphereGeodesic => geodesic_angle,
                SphereEuclidean => euclidean,
                _ => linf,
            };
            antipodal_space(&coords, metric).map(AnySpace::Float)
        }
        CircleUniform => {
            let points: usize = spec.get("points", 20)?;
            if points < 2 || points % 2 == 1 {
                return Err(Error::BadParams("circle_uniform needs an even point count >= 2".into()));
            }
            circle_uniform(points / 2).map(AnySpace::Float)
        }
        Z3ThreePoints => three_points(1).map(AnySpace::Exact),
        Z3ThreePointsScaled2 => three_points(2).map(AnySpace::Exact),
        Tripod => tripod().map(AnySpace::Exact),
        SixPointX => sixpoint_x().map(AnySpace::Exact),
        SixPointY => sixpoint_y().map(AnySpace::Exact),
        Z3Branched => {
            let arms: usize = spec.get("arms", 3)?;
            let s = spec.get_q("s", Q::from_integer(3))?;
            let arm_length = spec.get_q("arm_length", Q::from_integer(1))?;
            let resolution = spec.get_q("resolution", Q::new(1, 20))?;
            let loops: bool = spec.get("loops", true)?;
            branched(arms, s, arm_length, resolution, loops).map(AnySpace::Exact)
        }
    }
}

fn allowed_params(kind: SampleKind) -> &'static [&'static str] {
    use SampleKind::*;
    match kind {
        SphereGeodesic | SphereEuclidean | SphereLinf | CubeLinf => &["n", "points", "scheme"],
        CircleUniform => &["points"],
        Z3Branched => &["arms", "s", "arm_length", "resolution", "loops"],
        _ => &[],
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// One representative per antipodal pair.
fn sphere_like_points(kind: SampleKind, n: usize, half: usize, scheme: Scheme, seed: u64) -> Result<Vec<Vec<f64>>> {
    let dim = n + 1;
    let cube = kind == SampleKind::CubeLinf;
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(half);
    if scheme == Scheme::IncludeDesignated {
        if cube {
            pts.push(vec![1.0; dim]);
            let mut e0 = vec![0.0; dim];
            e0[0] = 1.0;
            pts.push(e0);
        } else {
            let mut e0 = vec![0.0; dim];
            e0[0] = 1.0;
            pts.push(e0);
            pts.push(vec![1.0 / (dim as f64).sqrt(); dim]);
        }
        pts.truncate(half);
    }
    if scheme == Scheme::Fibonacci {
        if cube || n > 2 {
            return Err(Error::BadParams("the fibonacci scheme covers the round 1- and 2-sphere only".into()));
        }
        for i in 0..half {
            if n == 1 {
                let t = PI * i as f64 / half as f64;
                pts.push(vec![t.cos(), t.sin()]);
            } else {
                let golden = PI * (3.0 - 5f64.sqrt());
                let z = (i as f64 + 0.5) / half as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                pts.push(vec![r * phi.cos(), r * phi.sin(), z]);
            }
        }
        return Ok(pts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while pts.len() < half {
        if cube {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let face = rng.gen_range(0..dim);
            v[face] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            pts.push(v);
        } else {
            let mut v: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
            normalize(&mut v);
            pts.push(v);
        }
    }
    Ok(pts)
}

/// Angle between unit vectors, stable near 0 and π.
fn geodesic_angle(x: &[f64], y: &[f64]) -> f64 {
    let diff = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let sum = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
    2.0 * diff.atan2(sum)
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn linf(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Points `reps ∪ -reps` (point `i + half` is the antipode of `i`) with the antipodal Z2 action.
fn antipodal_space(reps: &[Vec<f64>], metric: fn(&[f64], &[f64]) -> f64) -> Result<GMetricSpace<f64>> {
    let half = reps.len();
    let pts: Vec<Vec<f64>> = reps
        .iter()
        .cloned()
        .chain(reps.iter().map(|v| v.iter().map(|x| -x).collect()))
        .collect();
    let n = pts.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = metric(&pts[i], &pts[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let swap: Perm = (0..n).map(|i| (i + half) % n).collect();
    let action = GroupAction::from_generator_images(FiniteGroup::cyclic(2), &[swap])?;
    GMetricSpace::new(dist, action)
}

/// `2k` equally spaced points on the geodesic circle of length `2π`; the
/// antipodal map is the index shift by `k`.
pub fn circle_uniform(k: usize) -> Result<GMetricSpace<f64>> {
    let n = 2 * k;
    let step = PI / k as f64;
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let gap = i.abs_diff(j);
                    gap.min(n - gap) as f64 * step
                })
                .collect()
        })
        .collect();
    let shift: Perm = (0..n).map(|i| (i + k) % n).collect();
    let action = GroupAction::from_generator_images(FiniteGroup::cyclic(2), &[shift])?;
    GMetricSpace::new(dist, action)
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Three points at pairwise distance `scale`, cyclically permuted by Z3.
fn three_points(scale: i64) -> Result<GMetricSpace<Q>> {
    let dist = (0..3).map(|i| (0..3).map(|j| if i == j { q(0) } else { q(scale) }).collect()).collect();
    let prefix = if scale == 1 { "x" } else { "y" };
    GMetricSpace::new(dist, FiniteGroup::cyclic(3).regular_action())?
        .with_labels((0..3).map(|i| format!("{prefix}{i}")).collect())
}

/// All-pairs hop counts of an unweighted graph.
fn hop_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

fn scaled(hops: Vec<Vec<usize>>, unit: Q) -> Vec<Vec<Q>> {
    hops.into_iter().map(|row| row.into_iter().map(|h| unit * q(h as i64)).collect()).collect()
}

/// Tripod with center `c`, the points of the unit three-point space at
/// distance 1/2 from `c` and those of the doubled one at distance 1, each
/// `x_i` on the same leg as `y_i`. Z3 rotates the legs.
fn tripod() -> Result<GMetricSpace<Q>> {
    // 0 = c, 1..=3 = x_i, 4..=6 = y_i; unit edge = 1/2
    let edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)];
    let dist = scaled(hop_distances(7, &edges), Q::new(1, 2));
    let rot: Perm = vec![0, 2, 3, 1, 5, 6, 4];
    let action = GroupAction::from_generator_images(FiniteGroup::cyclic(3), &[rot])?;
    let labels = ["c", "x0", "x1", "x2", "y0", "y1", "y2"].map(String::from).to_vec();
    GMetricSpace::new(dist, action)?.with_labels(labels)
}

/// Two triangles `a1a2a3`, `b1b2b3` joined by the edge `a1b1`, shortest-path
/// metric, with Z2 exchanging `a_i` and `b_i`.
fn sixpoint_x() -> Result<GMetricSpace<Q>> {
    let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)];
    let dist = scaled(hop_distances(6, &edges), q(1));
    let swap: Perm = vec![3, 4, 5, 0, 1, 2];
    let action = GroupAction::from_generator_images(FiniteGroup::cyclic(2), &[swap])?;
    let labels = ["a1", "a2", "a3", "b1", "b2", "b3"].map(String::from).to_vec();
    GMetricSpace::new(dist, action)?.with_labels(labels)
}

/// Six points at pairwise distance 1 with Z4 (element 1 = `i`) cycling
/// `u1 → u2 → u3 → u4` and swapping `v1, v2`.
fn sixpoint_y() -> Result<GMetricSpace<Q>> {
    let dist = (0..6).map(|i| (0..6).map(|j| if i == j { q(0) } else { q(1) }).collect()).collect();
    let gen: Perm = vec![1, 2, 3, 0, 5, 4];
    let action = GroupAction::from_generator_images(FiniteGroup::cyclic(4), &[gen])?;
    let labels = ["u1", "u2", "u3", "u4", "v1", "v2"].map(String::from).to_vec();
    GMetricSpace::new(dist, action)?.with_labels(labels)
}

/// Discretized geodesic space: `arms` legs of length `arm_length` leaving a
/// fixed center, each ending in a loop of length `s` (or bare legs when
/// `loops` is false). `Z_arms` rotates the legs.
fn branched(arms: usize, s: Q, arm_length: Q, resolution: Q, loops: bool) -> Result<GMetricSpace<Q>> {
    if arms < 1 {
        return Err(Error::BadParams("need at least one arm".into()));
    }
    let steps = |len: Q, what: &str| -> Result<usize> {
        let k = len / resolution;
        if !k.is_integer() || k < q(1) {
            return Err(Error::BadParams(format!("{what} must be a positive multiple of the resolution")));
        }
        Ok(k.to_integer() as usize)
    };
    let arm_steps = steps(arm_length, "arm_length")?;
    let loop_steps = if loops { steps(s, "s")? } else { 0 };
    if loops && loop_steps < 3 {
        return Err(Error::BadParams("a loop needs at least 3 sample points".into()));
    }
    // per arm: arm_steps leg points (last one is the junction), then loop_steps - 1 loop points
    let per_arm = arm_steps + loop_steps.saturating_sub(1);
    let n = 1 + arms * per_arm;
    let idx = |a: usize, t: usize| 1 + a * per_arm + t;
    let mut edges = Vec::new();
    for a in 0..arms {
        edges.push((0, idx(a, 0)));
        for t in 1..arm_steps {
            edges.push((idx(a, t - 1), idx(a, t)));
        }
        if loops {
            let junction = idx(a, arm_steps - 1);
            let mut prev = junction;
            for t in arm_steps..per_arm {
                edges.push((prev, idx(a, t)));
                prev = idx(a, t);
            }
            edges.push((prev, junction));
        }
    }
    let dist = scaled(hop_distances(n, &edges), resolution);
    let rot: Perm = (0..n)
        .map(|p| if p == 0 { 0 } else { idx(((p - 1) / per_arm + 1) % arms, (p - 1) % per_arm) })
        .collect();
    let action = if arms == 1 {
        GroupAction::trivial_on(FiniteGroup::trivial(), n)
    } else {
        GroupAction::from_generator_images(FiniteGroup::cyclic(arms), &[rot])?
    };
    GMetricSpace::new(dist, action)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(spec: &str) -> GMetricSpace<Q> {
        match sample_space(&SampleSpec::parse(spec).unwrap()).unwrap() {
            AnySpace::Exact(s) => s,
            AnySpace::Float(_) => panic!("expected exact"),
        }
    }

    fn float(spec: &str) -> GMetricSpace<f64> {
        match sample_space(&SampleSpec::parse(spec).unwrap()).unwrap() {
            AnySpace::Float(s) => s,
            AnySpace::Exact(_) => panic!("expected float"),
        }
    }

    /// Floyd–Warshall on the stated edge set, independent of the BFS used above.
    fn floyd(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
        let inf = i64::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(a, b) in edges {
            d[a][b] = 1;
            d[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        d
    }

    #[test]
    fn sixpoint_x_matches_floyd_warshall() {
        let x = exact("paper:sixpoint_X");
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)];
        let fw = floyd(6, &edges);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(x.d(i, j), q(fw[i][j]));
            }
        }
        assert_eq!(x.d(0, 3), q(1)); // a1 b1
        assert_eq!(x.d(1, 5), q(3)); // a2 b3
    }

    #[test]
    fn sixpoint_y_is_discrete_with_z4() {
        let y = exact("paper:sixpoint_Y");
        assert_eq!(y.group().order(), 4);
        assert_eq!(y.diam(), q(1));
        assert_eq!(y.action().perm(2), &[2, 3, 0, 1, 4, 5]);
    }

    #[test]
    fn circle_uniform_geodesics() {
        let c = float("circle_uniform,points=8");
        assert!((c.d(0, 1) - PI / 4.0).abs() < 1e-15);
        assert!((c.d(1, 7) - PI / 2.0).abs() < 1e-15);
        assert_eq!(c.action().perm(1)[3], 7);
        assert!((c.sep_g().unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_samples_are_antipodally_closed() {
        for kind in ["sphere_geodesic", "sphere_euclidean", "sphere_linf", "cube_linf"] {
            let s = float(&format!("{kind},n=2,points=40,seed=3"));
            assert_eq!(s.len(), 40);
            assert_eq!(s.group().order(), 2);
            for x in 0..40 {
                assert_eq!(s.action().apply(1, x), (x + 20) % 40);
            }
        }
        let fib = float("sphere_geodesic,n=2,points=30,scheme=fibonacci");
        assert!((fib.sep_g().unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn branched_sizes_and_loop_metric() {
        let y = exact("paper:z3_branched,s=3,resolution=1/4,arm_length=1");
        // 4 leg points + 11 loop points per arm
        assert_eq!(y.len(), 1 + 3 * 15);
        assert_eq!(y.group().order(), 3);
        // junction of arm 0 is point 4; antipode on its loop is 6 steps away
        assert_eq!(y.d(4, 4 + 6), Q::new(3, 2));
        assert_eq!(y.d(0, 4), q(1));
        let x = exact("paper:z3_branched,s=3,resolution=1/4,loops=false");
        assert_eq!(x.len(), 13);
        assert_eq!(x.diam(), q(2));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SampleSpec::parse("nope").is_err());
        assert!(sample_space(&SampleSpec::parse("circle_uniform,points=7").unwrap()).is_err());
        assert!(sample_space(&SampleSpec::parse("circle_uniform,radius=2").unwrap()).is_err());
        assert!(sample_space(&SampleSpec::parse("paper:z3_branched,s=3,resolution=0.7").unwrap()).is_err());
    }
}
