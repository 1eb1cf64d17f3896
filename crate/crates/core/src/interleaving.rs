//! Eigenspace barcodes, multiplicity functionals and certified lower bounds
//! on the equivariant interleaving distance of Vietoris-Rips modules.

use rayon::prelude::*;

use crate::bottleneck::bottleneck;
use crate::error::{Error, Result};
use crate::field::{default_prime, Coefficients, Field, PrimeField, Rationals};
use crate::group::Perm;
use crate::persistence::{persist, Barcode};
use crate::scalar::{max_scalar, Scalar, TAU_METRIC};
use crate::space::GMetricSpace;
use crate::vr::{build_vr, full_chains, isotypic_project, FilteredComplex, Label, DEFAULT_MAX_SIMPLICES};

/// `m_j = MULTIPLICITY_SCALE · ℓ_j`.
pub const MULTIPLICITY_SCALE: (i64, i64) = (1, 4);

/// Barcodes of a complex, or of one of its isotypic components.
pub fn barcodes<S: Scalar>(
    complex: &FilteredComplex<S>,
    label: Label,
    coeffs: Coefficients,
    degrees: &[usize],
) -> Result<Vec<Barcode<S>>> {
    fn go<S: Scalar, F: Field>(c: &FilteredComplex<S>, label: Label, f: F, degrees: &[usize]) -> Result<Vec<Barcode<S>>> {
        let chains = match label {
            Label::Full => full_chains(c, f),
            Label::Eigen { g, lambda } => isotypic_project(c, g, lambda, f)?,
        };
        persist(&chains, degrees)
    }
    match coeffs {
        Coefficients::Prime(p) => go(complex, label, PrimeField::new(p)?, degrees),
        Coefficients::Rational => go(complex, label, Rationals, degrees),
    }
}

/// Default field for eigen-decompositions of `g`.
pub fn default_coefficients(order: usize) -> Coefficients {
    Coefficients::Prime(default_prime(order))
}

/// Barcodes of every eigenspace module of `g`, indexed `[lambda][degree]`.
pub fn eigen_barcodes<S: Scalar>(
    complex: &FilteredComplex<S>,
    g: usize,
    degrees: &[usize],
    coeffs: Coefficients,
) -> Result<Vec<Vec<Barcode<S>>>> {
    let m = complex.action().group().element_order(g);
    (0..m).into_par_iter().map(|lambda| barcodes(complex, Label::Eigen { g, lambda }, coeffs, degrees)).collect()
}

fn lengths_desc<S: Scalar>(barcode: &Barcode<S>) -> Vec<S> {
    let mut v: Vec<S> = barcode.finite_bars().filter_map(|b| b.length()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `m_j`: a quarter of the `j`-th longest finite bar (`j >= 1`), 0 if there are fewer bars.
pub fn m_multiplicity<S: Scalar>(barcode: &Barcode<S>, j: usize) -> S {
    let scale = S::from_ratio(MULTIPLICITY_SCALE.0, MULTIPLICITY_SCALE.1);
    match j.checked_sub(1).and_then(|i| lengths_desc(barcode).get(i).copied()) {
        Some(l) => l * scale,
        None => S::zero(),
    }
}

/// `max m_j` over odd `j`.
pub fn m_odd<S: Scalar>(barcode: &Barcode<S>) -> S {
    let n = barcode.finite_bars().count();
    max_scalar((1..=n).step_by(2).map(|j| m_multiplicity(barcode, j))).unwrap_or_else(S::zero)
}

/// `max (ℓ_j - ℓ_{j+1})/4` over odd `j`: the parity bound that survives
/// ties between the `j`-th and `(j+1)`-th bars.
pub fn m_odd_gap<S: Scalar>(barcode: &Barcode<S>) -> S {
    let lengths = lengths_desc(barcode);
    let scale = S::from_ratio(MULTIPLICITY_SCALE.0, MULTIPLICITY_SCALE.1);
    max_scalar((0..lengths.len()).step_by(2).map(|i| {
        let next = lengths.get(i + 1).copied().unwrap_or_else(S::zero);
        (lengths[i] - next) * scale
    }))
    .unwrap_or_else(S::zero)
}

/// An isometry `h` of the space with `h∘h = target`, by backtracking.
pub fn isometric_square_root<S: Scalar>(space: &GMetricSpace<S>, target: &[usize], max_nodes: u64) -> Option<Perm> {
    let n = space.len();
    struct Search<'a, S> {
        space: &'a GMetricSpace<S>,
        target: &'a [usize],
        h: Vec<usize>,
        used: Vec<bool>,
        nodes: u64,
        max_nodes: u64,
    }
    const FREE: usize = usize::MAX;
    impl<S: Scalar> Search<'_, S> {
        /// Sets `h(u) = v` and everything it forces; returns the undo log or `None` on conflict.
        fn assign(&mut self, u: usize, v: usize, log: &mut Vec<usize>) -> bool {
            let mut queue = vec![(u, v)];
            while let Some((a, b)) = queue.pop() {
                if self.h[a] != FREE {
                    if self.h[a] != b {
                        return false;
                    }
                    continue;
                }
                if self.used[b] {
                    return false;
                }
                for w in 0..self.h.len() {
                    if self.h[w] != FREE && !self.space.d(b, self.h[w]).eq_tol(self.space.d(a, w), TAU_METRIC) {
                        return false;
                    }
                }
                self.h[a] = b;
                self.used[b] = true;
                log.push(a);
                // h(h(a)) = target(a)
                queue.push((b, self.target[a]));
            }
            true
        }

        fn undo(&mut self, log: &[usize]) {
            for &a in log {
                self.used[self.h[a]] = false;
                self.h[a] = FREE;
            }
        }

        fn run(&mut self) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return None;
            }
            let Some(u) = self.h.iter().position(|&x| x == FREE) else {
                return Some(true);
            };
            for v in 0..self.h.len() {
                if self.used[v] {
                    continue;
                }
                let mut log = Vec::new();
                if self.assign(u, v, &mut log) {
                    match self.run() {
                        Some(true) => return Some(true),
                        None => return None,
                        Some(false) => {}
                    }
                }
                self.undo(&log);
            }
            Some(false)
        }
    }
    let mut s = Search { space, target, h: vec![FREE; n], used: vec![false; n], nodes: 0, max_nodes };
    match s.run() {
        Some(true) => Some(s.h),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterleavingOptions<S> {
    pub degrees: Vec<usize>,
    /// Field characteristic for the full and eigen barcodes (`0` = rationals);
    /// `None` picks the default prime per group element.
    pub p: Option<u64>,
    pub r_max_x: Option<S>,
    pub r_max_y: Option<S>,
    pub max_simplices: usize,
    pub eigen: bool,
    pub root_search_nodes: u64,
}

impl<S> Default for InterleavingOptions<S> {
    fn default() -> Self {
        InterleavingOptions {
            degrees: vec![0, 1],
            p: None,
            r_max_x: None,
            r_max_y: None,
            max_simplices: DEFAULT_MAX_SIMPLICES,
            eigen: true,
            root_search_nodes: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBound<S> {
    pub degree: usize,
    pub value: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBound<S> {
    pub degree: usize,
    pub g: usize,
    pub lambda: usize,
    pub field: u64,
    pub value: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MOddBound<S> {
    /// `"X"` or `"Y"`: the side whose eigen-barcode is measured.
    pub side: String,
    pub degree: usize,
    pub g: usize,
    pub field: u64,
    /// Isometry of the other side squaring to `g`.
    pub root: Perm,
    /// `m_odd` of the eigen-barcode.
    pub m_odd: S,
    /// The gap form entering `combined_lower`.
    pub certified: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterleavingReport<S> {
    pub degrees: Vec<usize>,
    pub bottleneck_full: Vec<DegreeBound<S>>,
    pub bottleneck_eigen: Vec<EigenBound<S>>,
    pub m_odd: Vec<MOddBound<S>>,
    /// Certified lower bound on `d_I^G`: max of all constituents.
    pub combined_lower: S,
    /// Common scale above which both modules were zero-extended.
    pub truncated_at: Option<S>,
    pub barcodes_x: Vec<Barcode<S>>,
    pub barcodes_y: Vec<Barcode<S>>,
    pub notes: Vec<String>,
}

fn common_truncation<S: Scalar>(cx: &FilteredComplex<S>, cy: &FilteredComplex<S>) -> Option<S> {
    let rx = if cx.is_truncated() { cx.r_max() } else { None };
    let ry = if cy.is_truncated() { cy.r_max() } else { None };
    match (rx, ry) {
        (Some(a), Some(b)) => Some(a.min_of(b)),
        (a, b) => a.or(b),
    }
}

fn trunc<S: Scalar>(codes: Vec<Barcode<S>>, r: Option<S>) -> Vec<Barcode<S>> {
    match r {
        Some(r) => codes.iter().map(|b| b.truncate(r)).collect(),
        None => codes,
    }
}

/// Certified lower bounds on the equivariant interleaving distance between
/// the Vietoris-Rips G-persistence modules of `X` and `Y`.
///
/// When either complex is capped below its diameter, both modules are
/// zero-extended above the smaller cap first; interleavings survive that.
pub fn interleaving_lower_bounds<S: Scalar>(
    x: &GMetricSpace<S>,
    y: &GMetricSpace<S>,
    opts: &InterleavingOptions<S>,
) -> Result<InterleavingReport<S>> {
    if x.group().table() != y.group().table() {
        return Err(Error::GroupMismatch);
    }
    let mut degrees = opts.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let Some(&top) = degrees.last() else {
        return Err(Error::BadParams("no degrees requested".into()));
    };
    let (cx, cy) = rayon::join(
        || build_vr(x, top + 1, opts.r_max_x, opts.max_simplices),
        || build_vr(y, top + 1, opts.r_max_y, opts.max_simplices),
    );
    let (cx, cy) = (cx?, cy?);
    let cut = common_truncation(&cx, &cy);
    let mut notes = Vec::new();
    if let Some(r) = cut {
        notes.push(format!("modules zero-extended above {}", r.to_text()));
    }
    let full_coeffs = Coefficients::from_characteristic(opts.p.unwrap_or(2))?;
    let (bx, by) = rayon::join(
        || barcodes(&cx, Label::Full, full_coeffs, &degrees),
        || barcodes(&cy, Label::Full, full_coeffs, &degrees),
    );
    let (bx, by) = (trunc(bx?, cut), trunc(by?, cut));
    let mut bottleneck_full = Vec::new();
    for (a, b) in bx.iter().zip(&by) {
        bottleneck_full.push(DegreeBound { degree: a.degree, value: bottleneck(a, b)? });
    }
    let mut barcodes_x = bx;
    let mut barcodes_y = by;

    let group = x.group();
    let mut bottleneck_eigen = Vec::new();
    let mut m_odd_bounds = Vec::new();
    if opts.eigen && !group.is_trivial() {
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for g in group.elements().filter(|&g| g != group.identity()) {
            let mut sub = group.subgroup_generated(&[g]);
            sub.sort_unstable();
            if seen.contains(&sub) {
                continue;
            }
            seen.push(sub);
            let m = group.element_order(g);
            let coeffs = match opts.p {
                Some(p) => Coefficients::from_characteristic(p)?,
                None => default_coefficients(m),
            };
            let (ex, ey) = rayon::join(
                || eigen_barcodes(&cx, g, &degrees, coeffs),
                || eigen_barcodes(&cy, g, &degrees, coeffs),
            );
            let (ex, ey) = (ex?, ey?);
            for (lambda, (codes_x, codes_y)) in ex.into_iter().zip(ey).enumerate() {
                let (codes_x, codes_y) = (trunc(codes_x, cut), trunc(codes_y, cut));
                for (a, b) in codes_x.iter().zip(&codes_y) {
                    bottleneck_eigen.push(EigenBound {
                        degree: a.degree,
                        g,
                        lambda,
                        field: coeffs.characteristic(),
                        value: bottleneck(a, b)?,
                    });
                }
                barcodes_x.extend(codes_x);
                barcodes_y.extend(codes_y);
            }
        }
        if group.order() == 2 {
            let g = 1 - group.identity();
            let sides = [("X", &cx, y), ("Y", &cy, x)];
            for (name, complex, other) in sides {
                let Some(root) = isometric_square_root(other, other.action().perm(g), opts.root_search_nodes) else {
                    continue;
                };
                // -1 must not be a square, so that the root gives the other
                // side's eigenspace a complex structure
                let coeffs = match opts.p {
                    Some(p) if p == 0 || p % 4 == 3 => Coefficients::from_characteristic(p)?,
                    _ => Coefficients::Prime(7),
                };
                for code in trunc(barcodes(complex, Label::Eigen { g, lambda: 1 }, coeffs, &degrees)?, cut) {
                    m_odd_bounds.push(MOddBound {
                        side: name.to_string(),
                        degree: code.degree,
                        g,
                        field: coeffs.characteristic(),
                        root: root.clone(),
                        m_odd: m_odd(&code),
                        certified: m_odd_gap(&code),
                    });
                }
            }
            if !m_odd_bounds.is_empty() {
                notes.push(format!(
                    "m_j = {}/{} of the j-th longest bar; combined bound uses the gap form",
                    MULTIPLICITY_SCALE.0, MULTIPLICITY_SCALE.1
                ));
            }
        }
    }
    let combined_lower = max_scalar(
        bottleneck_full
            .iter()
            .map(|b| b.value)
            .chain(bottleneck_eigen.iter().map(|b| b.value))
            .chain(m_odd_bounds.iter().map(|b| b.certified)),
    )
    .unwrap_or_else(S::zero);
    Ok(InterleavingReport {
        degrees,
        bottleneck_full,
        bottleneck_eigen,
        m_odd: m_odd_bounds,
        combined_lower,
        truncated_at: cut,
        barcodes_x,
        barcodes_y,
        notes,
    })
}
