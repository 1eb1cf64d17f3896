//! The equivariant Gromov-Hausdorff distance between finite G-metric spaces.
//!
//! Correspondences are handled as unions of pair-orbits under the diagonal
//! action. Because the action is isometric, the largest discrepancy between
//! two pair-orbits is attained with one side fixed at its representative, so
//! the search works on a `k × k` table of orbit-to-orbit distortions.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAction};
use crate::scalar::{max_scalar, min_scalar, Scalar, TAU_CMP};
use crate::space::GMetricSpace;

/// Pair-orbit cap for the exhaustive oracle.
pub const ORACLE_MAX_PAIR_ORBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GhBudget {
    pub max_pair_orbits: usize,
    pub max_nodes: u64,
}

impl Default for GhBudget {
    fn default() -> Self {
        GhBudget { max_pair_orbits: 400, max_nodes: 5_000_000 }
    }
}

impl GhBudget {
    /// Smaller budget used for the auxiliary solves inside [`ggh_bounds`].
    pub fn certificate() -> Self {
        GhBudget { max_pair_orbits: 100, max_nodes: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Oracle,
    FunctionPair,
    Bound,
}

/// A relation between two G-spaces closed under the diagonal action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GCorrespondence {
    pairs: Vec<(usize, usize)>,
}

impl GCorrespondence {
    /// Checks orbit closure and surjectivity onto both sides.
    pub fn new<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        same_group(x, y)?;
        if pairs.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let mut pairs = pairs;
        pairs.sort_unstable();
        pairs.dedup();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= x.len() || j >= y.len()) {
            return Err(Error::NotCorrespondence(format!("pair ({i}, {j}) is out of range")));
        }
        let (mut hit_x, mut hit_y) = (vec![false; x.len()], vec![false; y.len()]);
        for &(i, j) in &pairs {
            hit_x[i] = true;
            hit_y[j] = true;
        }
        if let Some(i) = hit_x.iter().position(|h| !h) {
            return Err(Error::NotCorrespondence(format!("left point {i} is not covered")));
        }
        if let Some(j) = hit_y.iter().position(|h| !h) {
            return Err(Error::NotCorrespondence(format!("right point {j} is not covered")));
        }
        for g in x.group().elements() {
            for &(i, j) in &pairs {
                let image = (x.action().apply(g, i), y.action().apply(g, j));
                if pairs.binary_search(&image).is_err() {
                    return Err(Error::NotCorrespondence(format!(
                        "not closed: ({i}, {j}) maps to {image:?} under element {g}"
                    )));
                }
            }
        }
        Ok(GCorrespondence { pairs })
    }

    /// The smallest G-correspondence containing `seeds`, if surjective.
    pub fn generated<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, seeds: &[(usize, usize)]) -> Result<Self> {
        same_group(x, y)?;
        let pairs = seeds
            .iter()
            .flat_map(|&(i, j)| x.group().elements().map(move |g| (g, i, j)))
            .map(|(g, i, j)| (x.action().apply(g, i), y.action().apply(g, j)))
            .collect();
        Self::new(x, y, pairs)
    }

    /// `graph(φ) ∪ graph(ψ)` with `ψ` read as a map from right to left.
    pub fn from_function_pair<S: Scalar>(
        x: &GMetricSpace<S>,
        y: &GMetricSpace<S>,
        phi: &[usize],
        psi: &[usize],
    ) -> Result<Self> {
        let pairs = phi.iter().enumerate().map(|(i, &j)| (i, j)).chain(psi.iter().enumerate().map(|(j, &i)| (i, j)));
        Self::new(x, y, pairs.collect())
    }

    pub fn full<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> Result<Self> {
        Self::new(x, y, (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).collect())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn distortion<S: Scalar>(&self, x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> S {
        distortion(x, y, &self.pairs)
    }
}

fn same_group<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> Result<()> {
    if x.group().table() != y.group().table() {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// `max |d_X(x,x') - d_Y(y,y')|` over pairs of pairs (0 for an empty relation).
pub fn distortion<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, pairs: &[(usize, usize)]) -> S {
    let mut worst = S::zero();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            worst = worst.max_of(x.d(i, k).abs_diff(y.d(j, l)));
        }
    }
    worst
}

pub fn try_distortion<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, pairs: &[(usize, usize)]) -> Result<S> {
    if pairs.is_empty() {
        return Err(Error::EmptyRelation);
    }
    Ok(distortion(x, y, pairs))
}

/// Distortion of a single map `f: X -> Y`.
pub fn map_distortion<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, f: &[usize]) -> S {
    let mut worst = S::zero();
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            worst = worst.max_of(x.d(a, b).abs_diff(y.d(f[a], f[b])));
        }
    }
    worst
}

/// `max |d_X(x, ψ(y)) - d_Y(φ(x), y)|`.
pub fn codistortion<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, phi: &[usize], psi: &[usize]) -> S {
    let mut worst = S::zero();
    for a in 0..x.len() {
        for b in 0..y.len() {
            worst = worst.max_of(x.d(a, psi[b]).abs_diff(y.d(phi[a], b)));
        }
    }
    worst
}

/// `f(g·x) = g·f(x)` for every group element.
pub fn is_equivariant<S: Scalar>(from: &GMetricSpace<S>, to: &GMetricSpace<S>, f: &[usize]) -> bool {
    f.len() == from.len()
        && from
            .group()
            .elements()
            .all(|g| (0..from.len()).all(|i| f[from.action().apply(g, i)] == to.action().apply(g, f[i])))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<S> {
    pub name: String,
    pub lower: bool,
    /// `None` when the certificate could not be computed within budget.
    pub value: Option<S>,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub pair_orbits: usize,
    pub nodes: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GHResult<S> {
    pub value: S,
    pub witness: Option<GCorrespondence>,
    pub method: Method,
    pub lower_certificates: Vec<Certificate<S>>,
    pub stats: SearchStats,
}

/// The pair-orbits of `X × Y` and their mutual distortions.
struct PairOrbits<S> {
    orbits: Vec<Vec<(usize, usize)>>,
    /// `cost[a][b]`: largest discrepancy between a pair of orbit `a` and one of orbit `b`.
    cost: Vec<Vec<S>>,
    /// points covered by each orbit
    covers_x: Vec<Vec<usize>>,
    covers_y: Vec<Vec<usize>>,
}

fn count_pair_orbits<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> usize {
    // Burnside: average number of fixed pairs
    let group = x.group();
    let fixed: usize = group
        .elements()
        .map(|g| {
            let fx = (0..x.len()).filter(|&i| x.action().apply(g, i) == i).count();
            let fy = (0..y.len()).filter(|&j| y.action().apply(g, j) == j).count();
            fx * fy
        })
        .sum();
    fixed / group.order()
}

impl<S: Scalar> PairOrbits<S> {
    fn build(x: &GMetricSpace<S>, y: &GMetricSpace<S>, cap: usize) -> Result<Self> {
        let k = count_pair_orbits(x, y);
        if k > cap {
            return Err(Error::BudgetExceeded(format!("{k} pair-orbits exceed the cap of {cap}")));
        }
        let (nx, ny) = (x.len(), y.len());
        let mut seen = vec![false; nx * ny];
        let mut orbits = Vec::with_capacity(k);
        for i in 0..nx {
            for j in 0..ny {
                if seen[i * ny + j] {
                    continue;
                }
                let mut orbit: Vec<(usize, usize)> = x
                    .group()
                    .elements()
                    .map(|g| (x.action().apply(g, i), y.action().apply(g, j)))
                    .collect();
                orbit.sort_unstable();
                orbit.dedup();
                for &(a, b) in &orbit {
                    seen[a * ny + b] = true;
                }
                orbits.push(orbit);
            }
        }
        let cost = orbits
            .iter()
            .map(|a| {
                let (i, j) = a[0];
                orbits
                    .iter()
                    .map(|b| {
                        max_scalar(b.iter().map(|&(k, l)| x.d(i, k).abs_diff(y.d(j, l)))).expect("orbits are nonempty")
                    })
                    .collect()
            })
            .collect();
        let covers_x = orbits.iter().map(|o| dedup(o.iter().map(|p| p.0))).collect();
        let covers_y = orbits.iter().map(|o| dedup(o.iter().map(|p| p.1))).collect();
        Ok(PairOrbits { orbits, cost, covers_x, covers_y })
    }

    fn len(&self) -> usize {
        self.orbits.len()
    }

    fn correspondence(&self, chosen: &[usize]) -> GCorrespondence {
        let mut pairs: Vec<(usize, usize)> = chosen.iter().flat_map(|&o| self.orbits[o].iter().copied()).collect();
        pairs.sort_unstable();
        GCorrespondence { pairs }
    }

    fn distortion_of(&self, chosen: &[usize]) -> S {
        let mut worst = S::zero();
        for (a, &o) in chosen.iter().enumerate() {
            for &p in &chosen[a..] {
                worst = worst.max_of(self.cost[o][p]);
            }
        }
        worst
    }
}

fn dedup(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Strict improvement, up to `TAU_CMP` for floats.
fn improves<S: Scalar>(candidate: S, best: S) -> bool {
    !best.le_tol(candidate, TAU_CMP)
}


/// Cover-branching search: pick the uncovered point with the fewest
/// remaining candidate orbits, try each candidate in order of the distortion
/// it would cause, and exclude it from later siblings.
struct BranchAndBound<'a, S> {
    po: &'a PairOrbits<S>,
    nx: usize,
    /// candidate orbits per point, `x` at `x`, `y` at `nx + y`
    point_orbits: Vec<Vec<usize>>,
    floor: S,
    best: S,
    best_set: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl<S: Scalar> BranchAndBound<'_, S> {
    /// Returns false when the node budget runs out.
    fn run(&mut self, chosen: &mut Vec<usize>, excluded: &mut [bool], cover: &mut [u32], dis: S) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        let cost = &self.po.cost;
        let cost_with = |o: usize| chosen.iter().fold(dis.max_of(cost[o][o]), |m, &c| m.max_of(cost[o][c]));
        let mut pick: Option<Vec<(S, usize)>> = None;
        let mut bound = dis.max_of(self.floor);
        for p in 0..cover.len() {
            if cover[p] > 0 {
                continue;
            }
            let mut cands: Vec<(S, usize)> =
                self.point_orbits[p].iter().filter(|&&o| !excluded[o]).map(|&o| (cost_with(o), o)).collect();
            if cands.is_empty() {
                return true;
            }
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            bound = bound.max_of(cands[0].0);
            if pick.as_ref().map_or(true, |c| cands.len() < c.len()) {
                pick = Some(cands);
            }
        }
        if !improves(bound, self.best) {
            return true;
        }
        let Some(cands) = pick else {
            self.best = dis;
            self.best_set = chosen.clone();
            return true;
        };
        let mut newly_excluded = Vec::new();
        let mut ok = true;
        for (c, o) in cands {
            if !improves(c.max_of(self.floor), self.best) {
                break;
            }
            chosen.push(o);
            self.mark(o, cover, true);
            ok = self.run(chosen, excluded, cover, c);
            self.mark(o, cover, false);
            chosen.pop();
            if !ok {
                break;
            }
            excluded[o] = true;
            newly_excluded.push(o);
        }
        for o in newly_excluded {
            excluded[o] = false;
        }
        ok
    }

    fn mark(&self, o: usize, cover: &mut [u32], add: bool) {
        let points = self.po.covers_x[o].iter().copied().chain(self.po.covers_y[o].iter().map(|&j| self.nx + j));
        for p in points {
            if add {
                cover[p] += 1;
            } else {
                cover[p] -= 1;
            }
        }
    }
}

fn point_orbits<S: Scalar>(po: &PairOrbits<S>, nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new(); nx + ny];
    for o in 0..po.len() {
        for &i in &po.covers_x[o] {
            lists[i].push(o);
        }
        for &j in &po.covers_y[o] {
            lists[nx + j].push(o);
        }
    }
    lists
}

fn half_diam_gap<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> S {
    x.diam().abs_diff(y.diam()).half()
}

/// Exact `d_GH^G` by branch-and-bound over unions of pair-orbits.
pub fn ggh_exact<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, budget: GhBudget) -> Result<GHResult<S>> {
    let start = Instant::now();
    same_group(x, y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let po = PairOrbits::build(x, y, budget.max_pair_orbits)?;
    let all: Vec<usize> = (0..po.len()).collect();
    let full = po.distortion_of(&all);
    let floor = x.diam().abs_diff(y.diam());
    let mut bb = BranchAndBound {
        po: &po,
        nx: x.len(),
        point_orbits: point_orbits(&po, x.len(), y.len()),
        floor,
        best: full,
        best_set: all,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let mut excluded = vec![false; po.len()];
    let mut cover = vec![0; x.len() + y.len()];
    if !bb.run(&mut Vec::new(), &mut excluded, &mut cover, S::zero()) {
        return Err(Error::BudgetExceeded(format!(
            "branch-and-bound exceeded {} nodes (incumbent {})",
            budget.max_nodes,
            bb.best.half().to_text()
        )));
    }
    let mut set = bb.best_set.clone();
    set.sort_unstable();
    let witness = po.correspondence(&set);
    Ok(GHResult {
        value: witness.distortion(x, y).half(),
        witness: Some(witness),
        method: Method::Exact,
        lower_certificates: Vec::new(),
        stats: SearchStats { pair_orbits: po.len(), nodes: bb.nodes, elapsed_ms: elapsed_ms(start) },
    })
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Exhaustive enumeration of every orbit-closed, surjective relation. No pruning.
pub fn ggh_oracle<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> Result<GHResult<S>> {
    let start = Instant::now();
    same_group(x, y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let po = PairOrbits::build(x, y, ORACLE_MAX_PAIR_ORBITS)?;
    struct Enumerate<'a, S> {
        po: &'a PairOrbits<S>,
        nx: usize,
        best: Option<(S, Vec<usize>)>,
        leaves: u64,
    }
    impl<S: Scalar> Enumerate<'_, S> {
        fn go(&mut self, next: usize, chosen: &mut Vec<usize>, cover: &mut [u32], uncovered: usize, dis: S) {
            if next == self.po.len() {
                self.leaves += 1;
                if uncovered == 0 && self.best.as_ref().map_or(true, |(b, _)| dis < *b) {
                    self.best = Some((dis, chosen.clone()));
                }
                return;
            }
            self.go(next + 1, chosen, cover, uncovered, dis);
            let cost = &self.po.cost;
            let added = chosen.iter().fold(dis.max_of(cost[next][next]), |m, &c| m.max_of(cost[next][c]));
            let points: Vec<usize> = self.po.covers_x[next]
                .iter()
                .copied()
                .chain(self.po.covers_y[next].iter().map(|&j| self.nx + j))
                .collect();
            let mut newly = 0;
            for &p in &points {
                if cover[p] == 0 {
                    newly += 1;
                }
                cover[p] += 1;
            }
            chosen.push(next);
            self.go(next + 1, chosen, cover, uncovered - newly, added);
            chosen.pop();
            for &p in &points {
                cover[p] -= 1;
            }
        }
    }
    let mut e = Enumerate { po: &po, nx: x.len(), best: None, leaves: 0 };
    let n = x.len() + y.len();
    e.go(0, &mut Vec::new(), &mut vec![0; n], n, S::zero());
    let (_, set) = e.best.expect("the full product is a correspondence");
    let witness = po.correspondence(&set);
    Ok(GHResult {
        value: witness.distortion(x, y).half(),
        witness: Some(witness),
        method: Method::Oracle,
        lower_certificates: Vec::new(),
        stats: SearchStats { pair_orbits: po.len(), nodes: e.leaves, elapsed_ms: elapsed_ms(start) },
    })
}

/// Best `dis(R(φ,ψ))/2` over equivariant function pairs `φ: X → Y`, `ψ: Y → X`.
///
/// `Ok(None)` when no equivariant map exists in one of the directions.
pub fn function_pair_search<S: Scalar>(
    x: &GMetricSpace<S>,
    y: &GMetricSpace<S>,
    budget: GhBudget,
) -> Result<Option<GHResult<S>>> {
    let start = Instant::now();
    same_group(x, y)?;
    if x.is_empty() || y.is_empty() {
        return Ok(None);
    }
    let po = PairOrbits::build(x, y, budget.max_pair_orbits)?;
    // one slot per orbit of X (choose φ on it) and per orbit of Y (choose ψ);
    // a pair-orbit fills a slot iff it has the orbit's size (stabilizer containment)
    let mut slots: Vec<Vec<usize>> = Vec::new();
    for o in x.action().orbits_and_stabilizers() {
        let rep = o.representative;
        slots.push(
            (0..po.len())
                .filter(|&k| po.orbits[k].len() == o.orbit.len() && po.orbits[k].iter().any(|p| p.0 == rep))
                .collect(),
        );
    }
    for o in y.action().orbits_and_stabilizers() {
        let rep = o.representative;
        slots.push(
            (0..po.len())
                .filter(|&k| po.orbits[k].len() == o.orbit.len() && po.orbits[k].iter().any(|p| p.1 == rep))
                .collect(),
        );
    }
    if slots.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    slots.sort_by_key(Vec::len);

    struct Choose<'a, S> {
        po: &'a PairOrbits<S>,
        slots: &'a [Vec<usize>],
        best: Option<(S, Vec<usize>)>,
        nodes: u64,
        max_nodes: u64,
    }
    impl<S: Scalar> Choose<'_, S> {
        fn go(&mut self, slot: usize, chosen: &mut Vec<usize>, dis: S) -> bool {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return false;
            }
            if slot == self.slots.len() {
                if self.best.as_ref().map_or(true, |(b, _)| improves(dis, *b)) {
                    self.best = Some((dis, chosen.clone()));
                }
                return true;
            }
            let cost = &self.po.cost;
            let mut cands: Vec<(S, usize)> = self.slots[slot]
                .iter()
                .map(|&o| (chosen.iter().fold(dis.max_of(cost[o][o]), |m, &c| m.max_of(cost[o][c])), o))
                .collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (c, o) in cands {
                if self.best.as_ref().is_some_and(|(b, _)| !improves(c, *b)) {
                    break;
                }
                chosen.push(o);
                let ok = self.go(slot + 1, chosen, c);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }
    let mut search = Choose { po: &po, slots: &slots, best: None, nodes: 0, max_nodes: budget.max_nodes };
    if !search.go(0, &mut Vec::new(), S::zero()) {
        return Err(Error::BudgetExceeded(format!("function-pair search exceeded {} nodes", budget.max_nodes)));
    }
    let (_, mut set) = search.best.expect("every slot has a candidate");
    set.sort_unstable();
    set.dedup();
    let witness = po.correspondence(&set);
    Ok(Some(GHResult {
        value: witness.distortion(x, y).half(),
        witness: Some(witness),
        method: Method::FunctionPair,
        lower_certificates: Vec::new(),
        stats: SearchStats { pair_orbits: po.len(), nodes: search.nodes, elapsed_ms: elapsed_ms(start) },
    }))
}

fn certificate<S>(name: &str, lower: bool, value: Option<S>, note: impl Into<String>) -> Certificate<S> {
    Certificate { name: name.to_string(), lower, value, note: note.into() }
}

/// Cheap lower and upper certificates for `d_GH^G(X, Y)`.
pub fn ggh_bounds<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> Result<Vec<Certificate<S>>> {
    same_group(x, y)?;
    let mut out = vec![
        certificate("upper", false, Some(x.diam().max_of(y.diam()).half()), "half the larger diameter"),
        certificate("lower_diam", true, Some(half_diam_gap(x, y)), "half the diameter gap"),
        certificate("lower_displacement", true, Some(displacement_bound(x, y)), "displacement profiles"),
    ];
    let (qx, _) = x.quotient();
    let (qy, _) = y.quotient();
    out.push(match ggh_exact(&qx, &qy, GhBudget::certificate()) {
        Ok(r) => certificate("lower_quotient", true, Some(r.value), "exact GH distance of the quotients"),
        Err(e) => certificate("lower_quotient", true, None, format!("skipped: {e}")),
    });
    out.push(match ggh_exact(&x.forget_action(), &y.forget_action(), GhBudget::certificate()) {
        Ok(r) => certificate("lower_trivial", true, Some(r.value), "exact GH distance without the action"),
        Err(e) => certificate("lower_trivial", true, None, format!("skipped: {e}")),
    });
    Ok(out)
}

/// `½·max(max_x min_y max_g |e_g(x) - e_g(y)|, symmetric)`, `e_g(x) = d(x, g·x)`.
pub fn displacement_bound<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>) -> S {
    let ex: Vec<Vec<S>> = (0..x.len()).map(|i| x.displacement(i)).collect();
    let ey: Vec<Vec<S>> = (0..y.len()).map(|j| y.displacement(j)).collect();
    let gap = |a: &[S], b: &[S]| max_scalar(a.iter().zip(b).map(|(&s, &t)| s.abs_diff(t))).unwrap_or_else(S::zero);
    let one_side = |from: &[Vec<S>], to: &[Vec<S>]| {
        max_scalar(from.iter().filter_map(|a| min_scalar(to.iter().map(|b| gap(a, b))))).unwrap_or_else(S::zero)
    };
    one_side(&ex, &ey).max_of(one_side(&ey, &ex)).half()
}

/// `d_GH` of the pullbacks along `hom: source → G`, a lower bound for `d_GH^G`.
pub fn lower_subgroup<S: Scalar>(
    x: &GMetricSpace<S>,
    y: &GMetricSpace<S>,
    source: &FiniteGroup,
    hom: &[usize],
    budget: GhBudget,
) -> Result<Certificate<S>> {
    let r = ggh_exact(&x.pullback(source, hom)?, &y.pullback(source, hom)?, budget)?;
    Ok(certificate("lower_subgroup", true, Some(r.value), format!("pullback along {hom:?}")))
}

/// Exact value when the search fits the budget, otherwise the certificates
/// (value = best lower bound, `method = bound`).
pub fn ggh<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, budget: GhBudget) -> Result<GHResult<S>> {
    let start = Instant::now();
    let mut certs = ggh_bounds(x, y)?;
    match ggh_exact(x, y, budget) {
        Ok(mut r) => {
            r.lower_certificates = certs;
            Ok(r)
        }
        Err(Error::BudgetExceeded(msg)) => {
            let value = max_scalar(certs.iter().filter(|c| c.lower).filter_map(|c| c.value)).unwrap_or_else(S::zero);
            certs.push(certificate("exact", true, None, format!("skipped: {msg}")));
            Ok(GHResult {
                value,
                witness: None,
                method: Method::Bound,
                lower_certificates: certs,
                stats: SearchStats { pair_orbits: count_pair_orbits(x, y), nodes: 0, elapsed_ms: elapsed_ms(start) },
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gluing<S> {
    /// `X ⊔ Y`, left points first.
    pub space: GMetricSpace<S>,
    pub hausdorff: S,
    pub quotient_hausdorff: S,
}

/// Glues `X` and `Y` along `R` with `d(x,y) = min_R d_X(x,x') + dis(R)/2 + d_Y(y',y)`
/// and measures the Hausdorff distance between the two copies, upstairs and
/// in the quotient.
pub fn glue_and_hausdorff<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, r: &GCorrespondence) -> Result<Gluing<S>> {
    same_group(x, y)?;
    let (nx, ny) = (x.len(), y.len());
    let n = nx + ny;
    let half = r.distortion(x, y).half();
    let mut dist = vec![vec![S::zero(); n]; n];
    for i in 0..nx {
        for k in 0..nx {
            dist[i][k] = x.d(i, k);
        }
    }
    for j in 0..ny {
        for l in 0..ny {
            dist[nx + j][nx + l] = y.d(j, l);
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            let v = min_scalar(r.pairs().iter().map(|&(a, b)| x.d(i, a) + half + y.d(b, j)))
                .ok_or(Error::EmptyRelation)?;
            dist[i][nx + j] = v;
            dist[nx + j][i] = v;
        }
    }
    let perms = x
        .group()
        .elements()
        .map(|g| x.action().perm(g).iter().copied().chain(y.action().perm(g).iter().map(|&j| nx + j)).collect())
        .collect();
    let action = GroupAction::new(x.group().clone(), perms)?;
    let space = GMetricSpace::new(dist, action).map_err(|e| Error::GluingNotMetric(e.to_string()))?;
    let left: Vec<usize> = (0..nx).collect();
    let right: Vec<usize> = (nx..n).collect();
    let hausdorff = space.hausdorff(&left, &right);
    let (quotient, ids) = space.quotient();
    let qleft = dedup(ids[..nx].iter().copied());
    let qright = dedup(ids[nx..].iter().copied());
    let quotient_hausdorff = quotient.hausdorff(&qleft, &qright);
    Ok(Gluing { space, hausdorff, quotient_hausdorff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn three(scale: i64) -> GMetricSpace<Q> {
        let dist = (0..3).map(|i| (0..3).map(|j| if i == j { q(0, 1) } else { q(scale, 1) }).collect()).collect();
        GMetricSpace::new(dist, FiniteGroup::cyclic(3).regular_action()).unwrap()
    }

    #[test]
    fn z3_example() {
        let (x, y) = (three(1), three(2));
        let r = ggh_exact(&x, &y, GhBudget::default()).unwrap();
        assert_eq!(r.value, q(1, 2));
        assert_eq!(ggh_oracle(&x, &y).unwrap().value, q(1, 2));
        assert_eq!(function_pair_search(&x, &y, GhBudget::default()).unwrap().unwrap().value, q(1, 2));
        let plain = ggh_exact(&x.forget_action(), &y.forget_action(), GhBudget::default()).unwrap();
        assert_eq!(plain.value, q(1, 2));
        assert_eq!(GCorrespondence::full(&x, &y).unwrap().distortion(&x, &y), q(2, 1));
    }

    #[test]
    fn identical_spaces_are_at_zero() {
        let x = three(1);
        assert_eq!(ggh_exact(&x, &x, GhBudget::default()).unwrap().value, q(0, 1));
        let certs = ggh_bounds(&x, &x).unwrap();
        assert!(certs.iter().filter(|c| c.lower).all(|c| c.value == Some(q(0, 1))));
    }

    #[test]
    fn correspondence_validation() {
        let (x, y) = (three(1), three(2));
        assert_eq!(GCorrespondence::new(&x, &y, vec![]), Err(Error::EmptyRelation));
        assert!(matches!(GCorrespondence::new(&x, &y, vec![(0, 0)]), Err(Error::NotCorrespondence(_))));
        let r = GCorrespondence::generated(&x, &y, &[(0, 0)]).unwrap();
        assert_eq!(r.pairs(), &[(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn fixed_point_blocks_equivariant_maps() {
        // X: a fixed point plus a free orbit; Y: one free orbit
        let x = GMetricSpace::new(
            vec![vec![q(0, 1), q(1, 1), q(1, 1)], vec![q(1, 1), q(0, 1), q(2, 1)], vec![q(1, 1), q(2, 1), q(0, 1)]],
            GroupAction::from_generator_images(FiniteGroup::cyclic(2), &[vec![0, 2, 1]]).unwrap(),
        )
        .unwrap();
        let y = GMetricSpace::new(
            vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]],
            GroupAction::from_generator_images(FiniteGroup::cyclic(2), &[vec![1, 0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(function_pair_search(&x, &y, GhBudget::default()).unwrap(), None);
        let exact = ggh_exact(&x, &y, GhBudget::default()).unwrap();
        assert_eq!(exact.value, ggh_oracle(&x, &y).unwrap().value);
    }

    #[test]
    fn tripod_gluing() {
        let (x, y) = (three(1), three(2));
        let r = GCorrespondence::generated(&x, &y, &[(0, 0)]).unwrap();
        let glued = glue_and_hausdorff(&x, &y, &r).unwrap();
        assert_eq!(glued.hausdorff, q(1, 2));
        assert_eq!(glued.quotient_hausdorff, q(1, 2));
        let same = glue_and_hausdorff(&x, &x, &GCorrespondence::generated(&x, &x, &[(0, 0)]).unwrap()).unwrap();
        assert_eq!(same.hausdorff, q(0, 1));
    }

    #[test]
    fn budget_fallback() {
        let (x, y) = (three(1), three(2));
        let tiny = GhBudget { max_pair_orbits: 1, max_nodes: 10 };
        assert!(matches!(ggh_exact(&x, &y, tiny), Err(Error::BudgetExceeded(_))));
        let r = ggh(&x, &y, tiny).unwrap();
        assert_eq!(r.method, Method::Bound);
        assert!(r.value <= q(1, 2));
    }
}
