//! Distance scalars: exact rationals or binary floats.
//!
//! Every metric routine in the crate is generic over [`Scalar`]. Exact
//! rational inputs give bit-exact answers (the small worked examples); float
//! inputs are compared with the tolerances below.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational distances.
pub type Q = Ratio<i64>;

/// Tolerance for metric axioms and isometry checks on float inputs.
pub const TAU_METRIC: f64 = 1e-9;
/// Tolerance for equality of float objective values.
pub const TAU_CMP: f64 = 1e-12;

pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(self) -> f64;
    /// Lossy for exact types; `None` if the value is not representable.
    fn from_f64(x: f64) -> Option<Self>;

    fn abs(self) -> Self;

    fn half(self) -> Self {
        self * Self::from_ratio(1, 2)
    }

    fn abs_diff(self, other: Self) -> Self {
        (self - other).abs()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Total order used for sorting. NaN never reaches here: inputs are validated.
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// `self <= other`, up to `tol` for floats and exactly for rationals.
    fn le_tol(self, other: Self, tol: f64) -> bool;

    /// `self == other`, up to `tol` for floats and exactly for rationals.
    fn eq_tol(self, other: Self, tol: f64) -> bool {
        self.le_tol(other, tol) && other.le_tol(self, tol)
    }

    /// Canonical text form: `"p/q"` for rationals, shortest round-trip decimal for floats.
    fn to_text(self) -> String;
    fn parse_text(s: &str) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn half(self) -> Self {
        self * 0.5
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn le_tol(self, other: Self, tol: f64) -> bool {
        self <= other + tol
    }

    fn to_text(self) -> String {
        format!("{self:?}")
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            return (d != 0.0).then(|| n / d);
        }
        s.parse().ok().filter(|x: &f64| x.is_finite())
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Ratio::approximate_float(x)
    }

    fn abs(self) -> Self {
        Signed::abs(&self)
    }

    fn le_tol(self, other: Self, _tol: f64) -> bool {
        self <= other
    }

    fn eq_tol(self, other: Self, _tol: f64) -> bool {
        self == other
    }

    fn to_text(self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().ok()?;
                let d: i64 = d.trim().parse().ok()?;
                (d != 0).then(|| Ratio::new(n, d))
            }
            None => {
                if let Ok(n) = s.parse::<i64>() {
                    return Some(Ratio::from_integer(n));
                }
                parse_decimal(s)
            }
        }
    }
}

/// Parses a finite decimal such as `0.25` or `-1.5` into an exact rational.
fn parse_decimal(s: &str) -> Option<Q> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if frac_part.len() > 15 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let den = 10i64.checked_pow(frac_part.len() as u32)?;
    let int: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let num = int.checked_mul(den)?.checked_add(frac)?;
    Some(Ratio::new(if neg { -num } else { num }, den))
}

/// Maximum of a non-empty iterator, `None` when empty.
pub fn max_scalar<S: Scalar>(it: impl IntoIterator<Item = S>) -> Option<S> {
    it.into_iter().reduce(S::max_of)
}

/// Minimum of a non-empty iterator, `None` when empty.
pub fn min_scalar<S: Scalar>(it: impl IntoIterator<Item = S>) -> Option<S> {
    it.into_iter().reduce(S::min_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let q = Q::new(-3, 4);
        assert_eq!(q.to_text(), "-3/4");
        assert_eq!(Q::parse_text("-3/4"), Some(q));
        assert_eq!(Q::parse_text("2"), Some(Q::from_integer(2)));
        assert_eq!(Q::parse_text("0.25"), Some(Q::new(1, 4)));
        assert_eq!(Q::parse_text("1/0"), None);
    }

    #[test]
    fn float_text_is_shortest_round_trip() {
        let x = 0.1 + 0.2;
        assert_eq!(f64::parse_text(&x.to_text()), Some(x));
        assert_eq!(1.0f64.to_text(), "1.0");
    }

    #[test]
    fn tolerant_comparisons() {
        assert!(1.0f64.le_tol(1.0 - 1e-13, TAU_CMP));
        assert!(!1.0f64.le_tol(1.0 - 1e-9, TAU_CMP));
        assert!(!Q::new(1, 2).le_tol(Q::new(1, 3), 1.0));
    }
}
