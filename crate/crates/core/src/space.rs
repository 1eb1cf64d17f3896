//! Finite G-metric spaces: validation, diameters, G-separation, quotients,
//! G-invariant nets, and the covering/packing comparison.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAction};
use crate::scalar::{max_scalar, min_scalar, Scalar, Q, TAU_METRIC};

/// A finite metric space with an action of a finite group by isometries.
#[derive(Debug, Clone, PartialEq)]
pub struct GMetricSpace<S> {
    n: usize,
    dist: Vec<S>,
    action: GroupAction,
    labels: Option<Vec<String>>,
}

impl<S: Scalar> GMetricSpace<S> {
    /// Validates the metric axioms and that every group element acts isometrically.
    ///
    /// Float inputs are checked within [`TAU_METRIC`] and symmetrized from the
    /// upper triangle; rationals are checked exactly. Zero distances between
    /// distinct points are accepted (glued spaces may be pseudometric).
    pub fn new(dist: Vec<Vec<S>>, action: GroupAction) -> Result<Self> {
        let n = dist.len();
        if action.degree() != n {
            return Err(Error::Shape(format!(
                "action on {} points for a {n}-point distance matrix",
                action.degree()
            )));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {i} has length {}", row.len())));
            }
        }
        let mut flat = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let v = dist[i][j];
                if !(v >= S::zero()) || !v.to_f64().is_finite() || (i == j && v != S::zero()) {
                    return Err(Error::BadEntry(i, j));
                }
                if i < j && !v.eq_tol(dist[j][i], TAU_METRIC) {
                    return Err(Error::AsymmetricMatrix(i, j));
                }
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                flat[i * n + j] = dist[a][b];
            }
        }
        let space = GMetricSpace { n, dist: flat, action, labels: None };
        space.check_triangle()?;
        space.check_isometric()?;
        Ok(space)
    }

    /// Space with the trivial group acting.
    pub fn metric_only(dist: Vec<Vec<S>>) -> Result<Self> {
        let n = dist.len();
        Self::new(dist, GroupAction::trivial_on(FiniteGroup::trivial(), n))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Shape(format!("{} labels for {} points", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn check_triangle(&self) -> Result<()> {
        let n = self.n;
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let dij = self.d(i, j);
                for k in 0..n {
                    if !self.d(i, k).le_tol(dij + self.d(j, k), TAU_METRIC) {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(Error::TriangleViolation(i, j, k)),
            None => Ok(()),
        }
    }

    fn check_isometric(&self) -> Result<()> {
        for g in self.action.group().elements() {
            let p = self.action.perm(g);
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if !self.d(p[i], p[j]).eq_tol(self.d(i, j), TAU_METRIC) {
                        return Err(Error::NonIsometricAction(g, i, j));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> S {
        self.dist[i * self.n + j]
    }

    pub fn dist_rows(&self) -> Vec<Vec<S>> {
        self.dist.chunks(self.n.max(1)).take(self.n).map(<[S]>::to_vec).collect()
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Same distances, a different (validated) action.
    pub fn with_action(&self, action: GroupAction) -> Result<Self> {
        let s = Self::new(self.dist_rows(), action)?;
        Ok(GMetricSpace { labels: self.labels.clone(), ..s })
    }

    /// Same distances, trivial group.
    pub fn forget_action(&self) -> Self {
        GMetricSpace {
            n: self.n,
            dist: self.dist.clone(),
            action: GroupAction::trivial_on(FiniteGroup::trivial(), self.n),
            labels: self.labels.clone(),
        }
    }

    /// The space viewed through a homomorphism `hom: source -> G`.
    pub fn pullback(&self, source: &FiniteGroup, hom: &[usize]) -> Result<Self> {
        let action = self.action.pullback(source, hom)?;
        Ok(GMetricSpace { n: self.n, dist: self.dist.clone(), action, labels: self.labels.clone() })
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(S) -> T) -> GMetricSpace<T> {
        GMetricSpace {
            n: self.n,
            dist: self.dist.iter().map(|&x| f(x)).collect(),
            action: self.action.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn diam(&self) -> S {
        max_scalar(self.dist.iter().copied()).unwrap_or_else(S::zero)
    }

    /// Minimal displacement `d(x, g·x)` over nontrivial `g`; `None` means `+∞`
    /// (trivial group).
    pub fn sep_g(&self) -> Option<S> {
        let group = self.group();
        let e = group.identity();
        min_scalar(group.elements().filter(|&g| g != e).flat_map(|g| {
            (0..self.n).map(move |x| self.d(x, self.action.apply(g, x)))
        }))
    }

    /// `(d(x, g·x))_g` in group-element order.
    pub fn displacement(&self, x: usize) -> Vec<S> {
        self.group().elements().map(|g| self.d(x, self.action.apply(g, x))).collect()
    }

    /// The canonical quotient metric `d([x],[x']) = min_g d(x, g·x')`, one point
    /// per orbit (represented by its lowest point), with the trivial group.
    /// Also returns the orbit id of every original point.
    pub fn quotient(&self) -> (GMetricSpace<S>, Vec<usize>) {
        let (ids, count) = self.action.orbit_ids();
        let mut reps = vec![usize::MAX; count];
        for (x, &o) in ids.iter().enumerate() {
            if reps[o] == usize::MAX {
                reps[o] = x;
            }
        }
        let perms = self.action.perms();
        let mut dist = vec![vec![S::zero(); count]; count];
        for a in 0..count {
            for b in a + 1..count {
                let v = min_scalar(perms.iter().map(|p| self.d(reps[a], p[reps[b]])))
                    .expect("groups are nonempty");
                dist[a][b] = v;
                dist[b][a] = v;
            }
        }
        let labels = self.labels.as_ref().map(|l| reps.iter().map(|&r| format!("[{}]", l[r])).collect());
        let quotient = GMetricSpace {
            n: count,
            dist: dist.into_iter().flatten().collect(),
            action: GroupAction::trivial_on(FiniteGroup::trivial(), count),
            labels,
        };
        (quotient, ids)
    }

    /// Point-to-set distance, `None` for the empty set.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> Option<S> {
        min_scalar(set.iter().map(|&u| self.d(x, u)))
    }

    /// Hausdorff distance between two subsets.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> S {
        let one = |from: &[usize], to: &[usize]| {
            max_scalar(from.iter().filter_map(|&x| self.dist_to_set(x, to))).unwrap_or_else(S::zero)
        };
        one(a, b).max_of(one(b, a))
    }

    pub fn is_union_of_orbits(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &u in set {
            inside[u] = true;
        }
        set.iter().all(|&u| self.action.perms().iter().all(|p| inside[p[u]]))
    }

    /// A G-invariant ε-net (coverage `d(x, net) <= ε`). Greedy mode closes a
    /// farthest-point net under orbits; exact mode returns a minimum-cardinality
    /// union of orbits, i.e. the covering number `N^G(ε)`.
    pub fn g_invariant_net(&self, epsilon: S, mode: NetMode, node_budget: u64) -> Result<NetReport<S>> {
        if !(epsilon > S::zero()) {
            return Err(Error::PreconditionViolated("epsilon must be positive".into()));
        }
        if self.n == 0 {
            return Ok(NetReport {
                epsilon,
                net: Vec::new(),
                is_g_invariant: true,
                cardinality: 0,
                certified_optimal: true,
            });
        }
        let greedy = self.greedy_net(epsilon);
        match mode {
            NetMode::Greedy => Ok(NetReport {
                epsilon,
                cardinality: greedy.len(),
                net: greedy,
                is_g_invariant: true,
                certified_optimal: false,
            }),
            NetMode::Exact => {
                let net = self.exact_net(epsilon, greedy, node_budget)?;
                Ok(NetReport {
                    epsilon,
                    cardinality: net.len(),
                    net,
                    is_g_invariant: true,
                    certified_optimal: true,
                })
            }
        }
    }

    fn greedy_net(&self, epsilon: S) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        let mut net = Vec::new();
        let add_orbit = |x: usize, net: &mut Vec<usize>, inside: &mut Vec<bool>| {
            for u in self.action.orbit(x) {
                if !inside[u] {
                    inside[u] = true;
                    net.push(u);
                }
            }
        };
        add_orbit(0, &mut net, &mut inside);
        let mut to_net: Vec<S> = (0..self.n).map(|x| self.dist_to_set(x, &net).expect("nonempty")).collect();
        loop {
            let mut far = 0;
            for x in 1..self.n {
                if to_net[x] > to_net[far] {
                    far = x;
                }
            }
            if to_net[far] <= epsilon {
                break;
            }
            let before = net.len();
            add_orbit(far, &mut net, &mut inside);
            for &u in &net[before..] {
                for (x, t) in to_net.iter_mut().enumerate() {
                    *t = t.min_of(self.d(x, u));
                }
            }
        }
        net.sort_unstable();
        net
    }

    fn exact_net(&self, epsilon: S, incumbent: Vec<usize>, node_budget: u64) -> Result<Vec<usize>> {
        let orbits: Vec<Vec<usize>> =
            self.action.orbits_and_stabilizers().into_iter().map(|o| o.orbit).collect();
        // covers[o][x]: orbit o covers point x
        let covers: Vec<Vec<bool>> = orbits
            .iter()
            .map(|o| (0..self.n).map(|x| o.iter().any(|&u| self.d(x, u) <= epsilon)).collect())
            .collect();
        let mut order: Vec<usize> = (0..orbits.len()).collect();
        order.sort_by_key(|&o| (orbits[o].len(), o));

        struct Search<'a> {
            orbits: &'a [Vec<usize>],
            covers: &'a [Vec<bool>],
            order: &'a [usize],
            best: usize,
            best_set: Vec<usize>,
            nodes: u64,
            budget: u64,
        }
        impl Search<'_> {
            fn run(&mut self, chosen: &mut Vec<usize>, cover_count: &mut [u32], size: usize) -> bool {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return false;
                }
                let uncovered = (0..cover_count.len()).filter(|&x| cover_count[x] == 0);
                let pick = uncovered
                    .map(|x| (self.order.iter().filter(|&&o| self.covers[o][x]).count(), x))
                    .min();
                let Some((_, x)) = pick else {
                    if size < self.best {
                        self.best = size;
                        self.best_set = chosen.clone();
                    }
                    return true;
                };
                for &o in self.order {
                    if !self.covers[o][x] || size + self.orbits[o].len() >= self.best {
                        continue;
                    }
                    chosen.push(o);
                    for (y, c) in cover_count.iter_mut().enumerate() {
                        *c += u32::from(self.covers[o][y]);
                    }
                    let ok = self.run(chosen, cover_count, size + self.orbits[o].len());
                    for (y, c) in cover_count.iter_mut().enumerate() {
                        *c -= u32::from(self.covers[o][y]);
                    }
                    chosen.pop();
                    if !ok {
                        return false;
                    }
                }
                true
            }
        }

        let mut search = Search {
            orbits: &orbits,
            covers: &covers,
            order: &order,
            best: incumbent.len(),
            best_set: Vec::new(),
            nodes: 0,
            budget: node_budget,
        };
        if !search.run(&mut Vec::new(), &mut vec![0; self.n], 0) {
            return Err(Error::BudgetExceeded(format!("exact net search exceeded {node_budget} nodes")));
        }
        if search.best_set.is_empty() {
            return Ok(incumbent);
        }
        let mut net: Vec<usize> = search.best_set.iter().flat_map(|&o| orbits[o].iter().copied()).collect();
        net.sort_unstable();
        Ok(net)
    }

    /// Largest G-invariant set whose open ε/2-balls are pairwise disjoint.
    pub fn max_invariant_packing(&self, epsilon: S, node_budget: u64) -> Result<Vec<usize>> {
        let r = epsilon.half();
        let n = self.n;
        // balls of u and v meet iff some point lies strictly within r of both
        let meets = |u: usize, v: usize| u == v || (0..n).any(|z| self.d(z, u) < r && self.d(z, v) < r);
        let orbits: Vec<Vec<usize>> = self
            .action
            .orbits_and_stabilizers()
            .into_iter()
            .map(|o| o.orbit)
            .filter(|o| o.iter().enumerate().all(|(i, &u)| o[i + 1..].iter().all(|&v| !meets(u, v))))
            .collect();
        let k = orbits.len();
        let compatible: Vec<Vec<bool>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| a == b || orbits[a].iter().all(|&u| orbits[b].iter().all(|&v| !meets(u, v))))
                    .collect()
            })
            .collect();
        let suffix: Vec<usize> = {
            let mut s = vec![0; k + 1];
            for i in (0..k).rev() {
                s[i] = s[i + 1] + orbits[i].len();
            }
            s
        };
        let mut best: Vec<usize> = Vec::new();
        let mut best_size = 0usize;
        let mut nodes = 0u64;
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            chosen: &mut Vec<usize>,
            size: usize,
            orbits: &[Vec<usize>],
            compatible: &[Vec<bool>],
            suffix: &[usize],
            best: &mut Vec<usize>,
            best_size: &mut usize,
            nodes: &mut u64,
            budget: u64,
        ) -> bool {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            if size > *best_size {
                *best_size = size;
                *best = chosen.clone();
            }
            if i == orbits.len() || size + suffix[i] <= *best_size {
                return true;
            }
            if chosen.iter().all(|&c| compatible[c][i]) {
                chosen.push(i);
                let ok = rec(i + 1, chosen, size + orbits[i].len(), orbits, compatible, suffix, best, best_size, nodes, budget);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
            rec(i + 1, chosen, size, orbits, compatible, suffix, best, best_size, nodes, budget)
        }
        if !rec(0, &mut Vec::new(), 0, &orbits, &compatible, &suffix, &mut best, &mut best_size, &mut nodes, node_budget) {
            return Err(Error::BudgetExceeded(format!("packing search exceeded {node_budget} nodes")));
        }
        let mut set: Vec<usize> = best.iter().flat_map(|&o| orbits[o].iter().copied()).collect();
        set.sort_unstable();
        Ok(set)
    }

    /// Checks `N^G(ε) <= max |U|` over G-invariant ε/2-packings, for `0 < ε <= Sep^G`.
    pub fn packing_upper_bound_check(&self, epsilon: S, node_budget: u64) -> Result<PackingReport<S>> {
        if let Some(sep) = self.sep_g() {
            if epsilon > sep {
                return Err(Error::PreconditionViolated(format!(
                    "epsilon {} exceeds the G-separation {}",
                    epsilon.to_text(),
                    sep.to_text()
                )));
            }
        }
        let net = self.g_invariant_net(epsilon, NetMode::Exact, node_budget)?;
        let packing = self.max_invariant_packing(epsilon, node_budget)?;
        Ok(PackingReport {
            epsilon,
            covering_number: net.cardinality,
            packing_number: packing.len(),
            holds: net.cardinality <= packing.len(),
            net: net.net,
            packing,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NetMode {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetReport<S> {
    pub epsilon: S,
    pub net: Vec<usize>,
    pub is_g_invariant: bool,
    pub cardinality: usize,
    pub certified_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingReport<S> {
    pub epsilon: S,
    pub covering_number: usize,
    pub packing_number: usize,
    pub holds: bool,
    pub net: Vec<usize>,
    pub packing: Vec<usize>,
}

/// Exponent of a p-diameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

/// A finitely supported probability measure on a space.
#[derive(Debug, Clone)]
pub struct WeightedPointSet<'a, S> {
    base: &'a GMetricSpace<S>,
    support: Vec<usize>,
    weights: Vec<f64>,
}

impl<'a, S: Scalar> WeightedPointSet<'a, S> {
    pub fn new(base: &'a GMetricSpace<S>, support: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::Shape("support and weights must be nonempty and equally long".into()));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support.len() || sorted.last().is_some_and(|&m| m >= base.len()) {
            return Err(Error::BadParams("support indices must be distinct points of the space".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::BadParams("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadParams(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightedPointSet { base, support, weights })
    }

    pub fn uniform(base: &'a GMetricSpace<S>, support: Vec<usize>) -> Result<Self> {
        let w = 1.0 / support.len().max(1) as f64;
        let weights = vec![w; support.len()];
        // uniform weights may miss 1 by an ulp or two
        let total: f64 = weights.iter().sum();
        let mut ws = weights;
        if let Some(last) = ws.last_mut() {
            *last += 1.0 - total;
        }
        Self::new(base, support, ws)
    }

    /// `(ΣΣ w_i w_j d(x_i,x_j)^p)^{1/p}`, or the support diameter for `p = ∞`.
    pub fn p_diameter(&self, p: PExponent) -> f64 {
        match p {
            PExponent::Infinity => self
                .support
                .iter()
                .flat_map(|&a| self.support.iter().map(move |&b| self.base.d(a, b).to_f64()))
                .fold(0.0, f64::max),
            PExponent::Finite(p) => {
                let mut acc = 0.0;
                for (i, &a) in self.support.iter().enumerate() {
                    for (j, &b) in self.support.iter().enumerate() {
                        acc += self.weights[i] * self.weights[j] * self.base.d(a, b).to_f64().powf(p);
                    }
                }
                acc.powf(1.0 / p)
            }
        }
    }
}

/// A space with either exact or float distances.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySpace {
    Exact(GMetricSpace<Q>),
    Float(GMetricSpace<f64>),
}

impl AnySpace {
    pub fn is_exact(&self) -> bool {
        matches!(self, AnySpace::Exact(_))
    }

    pub fn len(&self) -> usize {
        match self {
            AnySpace::Exact(s) => s.len(),
            AnySpace::Float(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn group(&self) -> &FiniteGroup {
        match self {
            AnySpace::Exact(s) => s.group(),
            AnySpace::Float(s) => s.group(),
        }
    }

    pub fn to_float(&self) -> GMetricSpace<f64> {
        match self {
            AnySpace::Exact(s) => s.map_scalar(Scalar::to_f64),
            AnySpace::Float(s) => s.clone(),
        }
    }

    pub fn pullback(&self, source: &FiniteGroup, hom: &[usize]) -> Result<Self> {
        Ok(match self {
            AnySpace::Exact(s) => AnySpace::Exact(s.pullback(source, hom)?),
            AnySpace::Float(s) => AnySpace::Float(s.pullback(source, hom)?),
        })
    }
}

impl From<GMetricSpace<Q>> for AnySpace {
    fn from(s: GMetricSpace<Q>) -> Self {
        AnySpace::Exact(s)
    }
}

impl From<GMetricSpace<f64>> for AnySpace {
    fn from(s: GMetricSpace<f64>) -> Self {
        AnySpace::Float(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupAction;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn z3_three_points(scale: i64) -> GMetricSpace<Q> {
        let dist = (0..3).map(|i| (0..3).map(|j| if i == j { q(0) } else { q(scale) }).collect()).collect();
        GMetricSpace::new(dist, FiniteGroup::cyclic(3).regular_action()).unwrap()
    }

    fn swap_pair() -> GMetricSpace<Q> {
        let z2 = FiniteGroup::cyclic(2);
        GMetricSpace::new(vec![vec![q(0), q(1)], vec![q(1), q(0)]], z2.regular_action()).unwrap()
    }

    #[test]
    fn validates_metric_and_action() {
        let x = z3_three_points(1);
        assert_eq!(x.len(), 3);
        // Z2 swap of two points whose distances to a third differ
        let z2 = FiniteGroup::cyclic(2);
        let act = GroupAction::new(z2, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let dist = vec![vec![q(0), q(1), q(1)], vec![q(1), q(0), q(2)], vec![q(1), q(2), q(0)]];
        assert_eq!(GMetricSpace::new(dist, act), Err(Error::NonIsometricAction(1, 0, 2)));
        let dist = vec![vec![q(0), q(1), q(5)], vec![q(1), q(0), q(1)], vec![q(5), q(1), q(0)]];
        assert!(matches!(GMetricSpace::metric_only(dist), Err(Error::TriangleViolation(..))));
        let dist = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert_eq!(GMetricSpace::metric_only(dist), Err(Error::AsymmetricMatrix(0, 1)));
    }

    #[test]
    fn diameters_and_separation() {
        let x = z3_three_points(2);
        assert_eq!(x.diam(), q(2));
        assert_eq!(x.sep_g(), Some(q(2)));
        assert_eq!(x.displacement(0), vec![q(0), q(2), q(2)]);
        assert_eq!(x.forget_action().sep_g(), None);
    }

    #[test]
    fn quotient_examples() {
        let (qx, ids) = z3_three_points(1).quotient();
        assert_eq!(qx.len(), 1);
        assert_eq!(ids, vec![0, 0, 0]);
        assert_eq!(swap_pair().quotient().0.len(), 1);
        let plain = z3_three_points(1).forget_action();
        let (qp, _) = plain.quotient();
        assert_eq!(qp.dist_rows(), plain.dist_rows());
    }

    #[test]
    fn nets_on_three_point_space() {
        let x = z3_three_points(1);
        for eps in [Q::new(1, 2), Q::new(3, 2)] {
            let r = x.g_invariant_net(eps, NetMode::Exact, 1_000).unwrap();
            assert_eq!(r.cardinality, 3);
            assert!(r.certified_optimal);
        }
        let plain = x.forget_action();
        let r = plain.g_invariant_net(q(2), NetMode::Exact, 1_000).unwrap();
        assert_eq!(r.cardinality, 1);
    }

    #[test]
    fn packing_examples() {
        let r = z3_three_points(1).packing_upper_bound_check(q(1), 1_000).unwrap();
        assert_eq!((r.covering_number, r.packing_number, r.holds), (3, 3, true));
        let r = swap_pair().packing_upper_bound_check(q(1), 1_000).unwrap();
        assert_eq!((r.covering_number, r.packing_number, r.holds), (2, 2, true));
        let single = GMetricSpace::metric_only(vec![vec![q(0)]]).unwrap();
        let r = single.packing_upper_bound_check(q(7), 1_000).unwrap();
        assert_eq!((r.covering_number, r.packing_number), (1, 1));
        assert!(matches!(
            swap_pair().packing_upper_bound_check(q(2), 1_000),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn p_diameter_examples() {
        let pair = GMetricSpace::metric_only(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let dirac = WeightedPointSet::new(&pair, vec![1], vec![1.0]).unwrap();
        assert_eq!(dirac.p_diameter(PExponent::Finite(2.0)), 0.0);
        assert_eq!(dirac.p_diameter(PExponent::Infinity), 0.0);
        let uni = WeightedPointSet::uniform(&pair, vec![0, 1]).unwrap();
        assert_eq!(uni.p_diameter(PExponent::Infinity), 1.0);
        assert!((uni.p_diameter(PExponent::Finite(1.0)) - 0.5).abs() < 1e-15);
        assert!((uni.p_diameter(PExponent::Finite(2.0)) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(WeightedPointSet::new(&pair, vec![0, 1], vec![0.5, 0.4]).is_err());
    }
}
