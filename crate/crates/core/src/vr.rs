//! Vietoris-Rips filtrations with the induced simplicial group action, and
//! filtered chain complexes over a field, optionally projected onto an
//! isotypic component of a cyclic subgroup.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{signed_unit, Field};
use crate::group::GroupAction;
use crate::scalar::{Scalar, TAU_CMP};
use crate::space::GMetricSpace;

/// Default simplex-count guard.
pub const DEFAULT_MAX_SIMPLICES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex<S> {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub value: S,
}

impl<S> Simplex<S> {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Simplices in filtration order: by value, then dimension, then vertices.
#[derive(Debug, Clone)]
pub struct FilteredComplex<S> {
    simplices: Vec<Simplex<S>>,
    max_dim: usize,
    r_max: Option<S>,
    /// whether `r_max` cut off part of the full complex
    truncated: bool,
    action: GroupAction,
    bits: u32,
    index: HashMap<u128, usize>,
}

fn key(vertices: &[usize], bits: u32) -> u128 {
    vertices.iter().fold(0u128, |k, &v| (k << bits) | (v as u128 + 1))
}

/// All simplices of dimension `<= max_dim` and diameter `<= r_max` (all of
/// them when `r_max` is `None`).
///
/// On float inputs with a nontrivial action each value is the largest
/// diameter over the simplex's orbit, so values are exactly invariant.
pub fn build_vr<S: Scalar>(
    space: &GMetricSpace<S>,
    max_dim: usize,
    r_max: Option<S>,
    max_simplices: usize,
) -> Result<FilteredComplex<S>> {
    let n = space.len();
    let bits = usize::BITS - n.leading_zeros();
    if (max_dim as u32 + 1) * bits.max(1) > 128 {
        return Err(Error::BadParams(format!("max_dim {max_dim} is too large for {n} points")));
    }
    let within = |v: S| r_max.map_or(true, |r| v <= r);
    let canonical = !S::EXACT && !space.action().is_trivial();
    let perms = space.action().perms();
    let diam = |vs: &[usize]| {
        let mut m = S::zero();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                m = m.max_of(space.d(u, v));
            }
        }
        m
    };
    let value_of = |vs: &[usize], own: S| {
        if !canonical {
            return own;
        }
        perms.iter().fold(own, |m, p| {
            let image: Vec<usize> = vs.iter().map(|&v| p[v]).collect();
            m.max_of(diam(&image))
        })
    };
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (i + 1..n).filter(|&j| within(space.d(i, j))).collect()).collect();
    let count = std::sync::atomic::AtomicUsize::new(0);

    fn extend<S: Scalar>(
        clique: &mut Vec<usize>,
        cands: &[usize],
        own: S,
        ctx: &Ctx<'_, S>,
        out: &mut Vec<Simplex<S>>,
    ) -> Result<()> {
        let value = (ctx.value_of)(clique, own);
        if !(ctx.within)(value) {
            return Ok(());
        }
        if ctx.count.fetch_add(1, std::sync::atomic::Ordering::Relaxed) >= ctx.cap {
            return Err(Error::SizeBudgetExceeded(ctx.cap));
        }
        out.push(Simplex { vertices: clique.clone(), value });
        if clique.len() > ctx.max_dim {
            return Ok(());
        }
        for (a, &v) in cands.iter().enumerate() {
            let next: Vec<usize> = cands[a + 1..].iter().copied().filter(|w| ctx.nbrs[v].binary_search(w).is_ok()).collect();
            let own_v = clique.iter().fold(own, |m, &u| m.max_of(ctx.space.d(u, v)));
            clique.push(v);
            extend(clique, &next, own_v, ctx, out)?;
            clique.pop();
        }
        Ok(())
    }

    struct Ctx<'a, S> {
        space: &'a GMetricSpace<S>,
        nbrs: &'a [Vec<usize>],
        within: &'a (dyn Fn(S) -> bool + Sync),
        value_of: &'a (dyn Fn(&[usize], S) -> S + Sync),
        count: &'a std::sync::atomic::AtomicUsize,
        cap: usize,
        max_dim: usize,
    }
    let ctx = Ctx {
        space,
        nbrs: &nbrs,
        within: &within,
        value_of: &value_of,
        count: &count,
        cap: max_simplices,
        max_dim,
    };
    let parts: Vec<Result<Vec<Simplex<S>>>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            extend(&mut vec![v], &nbrs[v], S::zero(), &ctx, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut simplices = Vec::new();
    for part in parts {
        simplices.extend(part?);
    }
    simplices.par_sort_by(|a, b| {
        a.value.total_cmp(&b.value).then(a.vertices.len().cmp(&b.vertices.len())).then_with(|| a.vertices.cmp(&b.vertices))
    });
    let index = simplices.iter().enumerate().map(|(i, s)| (key(&s.vertices, bits), i)).collect();
    let truncated = r_max.is_some_and(|r| space.diam() > r);
    Ok(FilteredComplex { simplices, max_dim, r_max, truncated, action: space.action().clone(), bits, index })
}

impl<S: Scalar> FilteredComplex<S> {
    pub fn simplices(&self) -> &[Simplex<S>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn r_max(&self) -> Option<S> {
        self.r_max
    }

    /// True when `r_max` is below the diameter, so bars alive at `r_max` may die later.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(&key(vertices, self.bits)).copied()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim + 1];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        counts
    }

    /// Facet indices of simplex `i`, facet `k` omitting vertex `k`.
    pub fn facets(&self, i: usize) -> Vec<usize> {
        let vs = &self.simplices[i].vertices;
        if vs.len() == 1 {
            return Vec::new();
        }
        (0..vs.len())
            .map(|k| {
                let face: Vec<usize> = vs.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
                self.index_of(&face).expect("complexes are closed under faces")
            })
            .collect()
    }

    /// Image index and orientation sign (`true` = negative) of every simplex under `g`.
    pub fn simplex_action(&self, g: usize) -> Result<Vec<(usize, bool)>> {
        let p = self.action.perm(g);
        self.simplices
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let mut image: Vec<usize> = s.vertices.iter().map(|&v| p[v]).collect();
                let odd = sort_parity(&mut image);
                let j = self.index_of(&image).ok_or(Error::NonInvariantAction(i))?;
                if !self.simplices[j].value.eq_tol(s.value, TAU_CMP) {
                    return Err(Error::NonInvariantAction(i));
                }
                Ok((j, odd))
            })
            .collect()
    }

    /// Plain-text boundary matrix: one line per simplex with its dimension,
    /// filtration value and sorted facet indices.
    pub fn boundary_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.simplices.len() {
            let s = &self.simplices[i];
            let _ = write!(out, "{} {}", s.dim(), s.value.to_text());
            let mut facets = self.facets(i);
            facets.sort_unstable();
            for f in facets {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
        out
    }
}

/// Sorts in place; returns whether the sorting permutation is odd.
fn sort_parity(v: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

/// Which chain complex a barcode describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Full,
    /// Eigenvalue `ω^lambda` of the generator `g`, `ω` a fixed primitive root of unity.
    Eigen { g: usize, lambda: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainColumn<S, E> {
    pub dim: usize,
    pub value: S,
    /// `(row, coefficient)`, rows increasing
    pub boundary: Vec<(usize, E)>,
}

/// A filtered chain complex over a field, columns in filtration order.
#[derive(Debug, Clone)]
pub struct FilteredChains<S, F: Field> {
    pub field: F,
    pub label: Label,
    pub columns: Vec<ChainColumn<S, F::E>>,
    pub max_dim: usize,
    pub truncated_at: Option<S>,
}

fn truncation<S: Scalar>(complex: &FilteredComplex<S>) -> Option<S> {
    if complex.is_truncated() {
        complex.r_max()
    } else {
        None
    }
}

/// The simplicial chain complex with the standard alternating boundary.
pub fn full_chains<S: Scalar, F: Field>(complex: &FilteredComplex<S>, field: F) -> FilteredChains<S, F> {
    let columns = (0..complex.len())
        .into_par_iter()
        .map(|i| {
            let s = &complex.simplices[i];
            let mut boundary: Vec<(usize, F::E)> = complex
                .facets(i)
                .into_iter()
                .enumerate()
                .map(|(k, f)| (f, signed_unit(&field, k % 2 == 1)))
                .collect();
            boundary.sort_by_key(|e| e.0);
            ChainColumn { dim: s.dim(), value: s.value, boundary }
        })
        .collect();
    FilteredChains { label: Label::Full, columns, max_dim: complex.max_dim(), truncated_at: truncation(complex), field }
}

/// Projects the chain complex with `e_λ = (1/m) Σ_t ω^{-λt} (g^t)_*`, `m` the
/// order of `g`.
///
/// The image has one basis vector per `⟨g⟩`-orbit of simplices on which the
/// projector does not vanish, namely `Σ_j ω^{-λj} s_j σ_j` over the orbit
/// `σ_j = ±g^j σ`; boundaries are read off on orbit representatives.
pub fn isotypic_project<S: Scalar, F: Field>(
    complex: &FilteredComplex<S>,
    g: usize,
    lambda: usize,
    field: F,
) -> Result<FilteredChains<S, F>> {
    let group = complex.action().group();
    if g >= group.order() {
        return Err(Error::BadParams(format!("element {g} is not in the group")));
    }
    let m = group.element_order(g);
    if lambda >= m {
        return Err(Error::BadParams(format!("eigenvalue index {lambda} must be below the order {m}")));
    }
    let p = field.characteristic();
    if p != 0 && (m as u64) % p == 0 {
        return Err(Error::BadCharacteristic { p, order: m });
    }
    let omega = field.root_of_unity(m)?;
    let inv_omega_l = field.inv(&field.pow(&omega, lambda));
    let act = complex.simplex_action(g)?;
    let n = complex.len();

    // orbit representative (lowest index), position in orbit and accumulated sign
    let mut rep = vec![usize::MAX; n];
    let mut basis_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<(usize, F::E)>> = Vec::new();
    for i in 0..n {
        if rep[i] != usize::MAX {
            continue;
        }
        let mut members: Vec<(usize, bool)> = vec![(i, false)];
        let (mut cur, mut neg) = (i, false);
        loop {
            let (next, flip) = act[cur];
            neg ^= flip;
            if next == i {
                break;
            }
            members.push((next, neg));
            cur = next;
        }
        // g^L σ = ±σ; the projector survives iff ω^{λL} equals that sign
        let len = members.len();
        let sign_l = signed_unit(&field, neg);
        let survives = field.pow(&field.pow(&omega, lambda), len) == sign_l;
        for &(j, _) in &members {
            rep[j] = i;
        }
        if survives {
            let mut coeff = field.one();
            let vector = members
                .iter()
                .map(|&(j, s)| {
                    let c = field.mul(&coeff, &signed_unit(&field, s));
                    coeff = field.mul(&coeff, &inv_omega_l);
                    (j, c)
                })
                .collect();
            basis_of[i] = orbits.len();
            orbits.push(vector);
        }
    }

    let columns: Vec<ChainColumn<S, F::E>> = orbits
        .par_iter()
        .map(|vector| {
            let head = &complex.simplices[vector[0].0];
            let mut acc: HashMap<usize, F::E> = HashMap::new();
            for (j, c) in vector {
                for (k, f) in complex.facets(*j).into_iter().enumerate() {
                    if rep[f] != f {
                        continue;
                    }
                    let term = field.mul(c, &signed_unit(&field, k % 2 == 1));
                    let entry = acc.entry(f).or_insert_with(|| field.zero());
                    *entry = field.add(entry, &term);
                }
            }
            let mut boundary: Vec<(usize, F::E)> = acc
                .into_iter()
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(f, c)| {
                    debug_assert!(basis_of[f] != usize::MAX, "boundary leaves the isotypic component");
                    (basis_of[f], c)
                })
                .collect();
            boundary.sort_by_key(|e| e.0);
            ChainColumn { dim: head.dim(), value: head.value, boundary }
        })
        .collect();
    Ok(FilteredChains {
        label: Label::Eigen { g, lambda },
        columns,
        max_dim: complex.max_dim(),
        truncated_at: truncation(complex),
        field,
    })
}

impl<S: Scalar, F: Field> FilteredChains<S, F> {
    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim + 1];
        for c in &self.columns {
            counts[c.dim] += 1;
        }
        counts
    }

    /// `∂∘∂ = 0`.
    pub fn boundary_squares_to_zero(&self) -> bool {
        let f = &self.field;
        self.columns.par_iter().all(|col| {
            let mut acc: HashMap<usize, F::E> = HashMap::new();
            for (row, c) in &col.boundary {
                for (r2, c2) in &self.columns[*row].boundary {
                    let e = acc.entry(*r2).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(c, c2));
                }
            }
            acc.values().all(|v| f.is_zero(v))
        })
    }

    /// Faces precede cofaces and have no larger value.
    pub fn is_filtered(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            col.boundary
                .iter()
                .all(|(r, _)| *r < j && self.columns[*r].value <= col.value && self.columns[*r].dim + 1 == col.dim)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::group::FiniteGroup;
    use crate::scalar::Q;

    fn discrete(n: usize, group: FiniteGroup, gen: Vec<usize>) -> GMetricSpace<Q> {
        let dist = (0..n).map(|i| (0..n).map(|j| Q::from_integer((i != j) as i64)).collect()).collect();
        GMetricSpace::new(dist, GroupAction::from_generator_images(group, &[gen]).unwrap()).unwrap()
    }

    #[test]
    fn triangle_complex() {
        let x = discrete(3, FiniteGroup::cyclic(3), vec![1, 2, 0]);
        let c = build_vr(&x, 2, None, DEFAULT_MAX_SIMPLICES).unwrap();
        assert_eq!(c.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(c.simplices()[6].vertices, vec![0, 1, 2]);
        assert_eq!(c.simplices()[6].value, Q::from_integer(1));
        // rotating the triangle is even, so it preserves orientation
        let act = c.simplex_action(1).unwrap();
        assert_eq!(act[6], (6, false));
    }

    #[test]
    fn projections_split_the_chain_groups() {
        let x = discrete(4, FiniteGroup::cyclic(4), vec![1, 2, 3, 0]);
        let c = build_vr(&x, 2, None, DEFAULT_MAX_SIMPLICES).unwrap();
        let f = PrimeField::new(5).unwrap();
        let full = full_chains(&c, f).count_by_dim();
        let mut total = vec![0; 3];
        for lambda in 0..4 {
            let proj = isotypic_project(&c, 1, lambda, f).unwrap();
            assert!(proj.boundary_squares_to_zero());
            assert!(proj.is_filtered());
            for (t, k) in total.iter_mut().zip(proj.count_by_dim()) {
                *t += k;
            }
        }
        assert_eq!(total, full);
    }

    #[test]
    fn characteristic_checks() {
        let x = discrete(3, FiniteGroup::cyclic(3), vec![1, 2, 0]);
        let c = build_vr(&x, 1, None, DEFAULT_MAX_SIMPLICES).unwrap();
        assert!(matches!(isotypic_project(&c, 1, 1, Rationals), Err(Error::BadCharacteristic { .. })));
        assert!(matches!(
            isotypic_project(&c, 1, 1, PrimeField::new(5).unwrap()),
            Err(Error::BadCharacteristic { .. })
        ));
        assert!(matches!(
            isotypic_project(&c, 1, 1, PrimeField::new(3).unwrap()),
            Err(Error::BadCharacteristic { .. })
        ));
    }

    #[test]
    fn boundary_export() {
        let x = discrete(2, FiniteGroup::cyclic(2), vec![1, 0]);
        let c = build_vr(&x, 1, None, DEFAULT_MAX_SIMPLICES).unwrap();
        assert_eq!(c.boundary_text(), "0 0/1\n0 0/1\n1 1/1 0 1\n");
    }

    #[test]
    fn size_guard() {
        let dist = (0..6).map(|i| (0..6).map(|j| Q::from_integer((i != j) as i64)).collect()).collect();
        let x = GMetricSpace::metric_only(dist).unwrap();
        assert_eq!(build_vr(&x, 2, None, 10).unwrap_err(), Error::SizeBudgetExceeded(10));
    }
}
