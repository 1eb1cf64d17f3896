//! Barcodes by column reduction of filtered boundary matrices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalar::Scalar;
use crate::vr::{FilteredChains, Label};

/// Interval `(birth, death]`; `death = None` is `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar<S> {
    pub birth: S,
    pub death: Option<S>,
}

impl<S: Scalar> Bar<S> {
    pub fn finite(birth: S, death: S) -> Self {
        Bar { birth, death: Some(death) }
    }

    pub fn infinite(birth: S) -> Self {
        Bar { birth, death: None }
    }

    pub fn length(&self) -> Option<S> {
        self.death.map(|d| d - self.birth)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Barcode<S> {
    pub degree: usize,
    /// Characteristic of the coefficient field, 0 for the rationals.
    pub field: u64,
    pub label: Label,
    /// Sorted by birth, then death (infinite last).
    pub bars: Vec<Bar<S>>,
    /// Scale cap of the underlying complex when it is below the diameter;
    /// infinite bars may then die later.
    pub truncated_at: Option<S>,
}

impl<S: Scalar> Barcode<S> {
    pub fn new(degree: usize, field: u64, label: Label, mut bars: Vec<Bar<S>>) -> Self {
        sort_bars(&mut bars);
        Barcode { degree, field, label, bars, truncated_at: None }
    }

    pub fn finite_bars(&self) -> impl Iterator<Item = &Bar<S>> {
        self.bars.iter().filter(|b| b.death.is_some())
    }

    pub fn infinite_count(&self) -> usize {
        self.bars.iter().filter(|b| b.death.is_none()).count()
    }

    /// Rank of the module at scale `t`: bars with `birth <= t < death`.
    pub fn rank_at(&self, t: S) -> usize {
        self.bars.iter().filter(|b| b.birth <= t && b.death.map_or(true, |d| t < d)).count()
    }

    /// The zero-extension above `r`: bars alive at `r` end there, later bars vanish.
    pub fn truncate(&self, r: S) -> Self {
        let bars = self
            .bars
            .iter()
            .filter(|b| b.birth < r)
            .map(|b| Bar { birth: b.birth, death: Some(b.death.map_or(r, |d| d.min_of(r))) })
            .filter(|b| b.death.is_some_and(|d| d > b.birth))
            .collect();
        let mut out = Barcode::new(self.degree, self.field, self.label, bars);
        out.truncated_at = Some(r);
        out
    }
}

fn sort_bars<S: Scalar>(bars: &mut [Bar<S>]) {
    bars.sort_by(|a, b| {
        a.birth.total_cmp(&b.birth).then_with(|| match (a.death, b.death) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        })
    });
}

/// Sparse column arithmetic: `a += factor * b`.
fn axpy<F: Field>(field: &F, a: &[(usize, F::E)], factor: &F::E, b: &[(usize, F::E)]) -> Vec<(usize, F::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(factor, &b[j].1)));
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Barcodes in the requested degrees.
///
/// Dimensions are reduced in increasing order. Rows of simplices that
/// already killed a class are dropped before reduction (compression), and
/// the top dimension stops once every cycle below it has been paired.
pub fn persist<S: Scalar, F: Field>(chains: &FilteredChains<S, F>, degrees: &[usize]) -> Result<Vec<Barcode<S>>> {
    let top = match degrees.iter().max() {
        None => return Ok(Vec::new()),
        Some(&k) => k,
    };
    if top >= chains.max_dim {
        return Err(Error::BadParams(format!(
            "degree {top} needs simplices of dimension {}, the complex stops at {}",
            top + 1,
            chains.max_dim
        )));
    }
    let field = &chains.field;
    let cols = &chains.columns;
    let n = cols.len();
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); chains.max_dim + 1];
    for (j, c) in cols.iter().enumerate() {
        by_dim[c.dim].push(j);
    }
    // negative[i]: column i reduced to a nonzero column (it kills a class)
    let mut negative = vec![false; n];
    // paired_with[i]: the column whose pivot is row i
    let mut paired_with: HashMap<usize, usize> = HashMap::new();
    let mut bars_by_dim: Vec<Vec<Bar<S>>> = vec![Vec::new(); top + 1];

    for dim in 1..=top + 1 {
        let mut positive_below = by_dim[dim - 1].iter().filter(|&&i| !negative[i]).count();
        let mut reduced: HashMap<usize, Vec<(usize, F::E)>> = HashMap::new();
        let mut pivot_col: HashMap<usize, usize> = HashMap::new();
        for &j in &by_dim[dim] {
            if positive_below == 0 && dim == top + 1 {
                break;
            }
            let mut col: Vec<(usize, F::E)> =
                cols[j].boundary.iter().filter(|(r, _)| !negative[*r]).cloned().collect();
            while let Some((low, coeff)) = col.last().cloned() {
                match pivot_col.get(&low) {
                    Some(&k) => {
                        let other = &reduced[&k];
                        let lead = &other.last().expect("pivot columns are nonzero").1;
                        let factor = field.neg(&field.mul(&coeff, &field.inv(lead)));
                        col = axpy(field, &col, &factor, other);
                    }
                    None => break,
                }
            }
            if let Some((low, _)) = col.last() {
                let low = *low;
                pivot_col.insert(low, j);
                paired_with.insert(low, j);
                negative[j] = true;
                positive_below -= 1;
                reduced.insert(j, col);
            }
        }
    }

    for k in 0..=top {
        for &i in &by_dim[k] {
            if negative[i] {
                continue;
            }
            let birth = cols[i].value;
            match paired_with.get(&i) {
                Some(&j) => {
                    let death = cols[j].value;
                    if death > birth {
                        bars_by_dim[k].push(Bar::finite(birth, death));
                    }
                }
                None => bars_by_dim[k].push(Bar::infinite(birth)),
            }
        }
    }
    Ok(degrees
        .iter()
        .map(|&k| {
            let mut b = Barcode::new(k, field.characteristic(), chains.label, bars_by_dim[k].clone());
            b.truncated_at = chains.truncated_at;
            b
        })
        .collect())
}
