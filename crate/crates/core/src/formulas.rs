//! Closed-form evaluators: sphere constants, Euclidean-sphere bounds, ball
//! volumes in constant-curvature model spaces and the finiteness count.

use std::f64::consts::PI;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::{covering_ball_count, FiniteGroup, HomBudget};

/// `ζ_n = arccos(-1/(n+1))`, the edge length of a regular `(n+1)`-simplex
/// inscribed in the unit `n`-sphere. Closed forms for `n = 0, 1`.
pub fn zeta(n: u64) -> f64 {
    match n {
        0 => PI,
        1 => 2.0 * PI / 3.0,
        _ => (-1.0 / (n as f64 + 1.0)).acos(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclidBounds {
    pub lower: f64,
    /// Only when `n = m + 1`.
    pub upper: Option<f64>,
}

/// Bounds on `d_GH^{Z2}` between Euclidean spheres `S^m` and `S^n`, `0 < m < n`,
/// with antipodal actions.
pub fn euclid_sphere_bounds(m: u64, n: u64) -> Result<EuclidBounds> {
    if m == 0 || m >= n {
        return Err(Error::DomainError(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    let mf = m as f64;
    let lower = 0.5 * ((2.0 * mf + 4.0) / (mf + 1.0)).sqrt();
    let upper = (n == m + 1).then(|| {
        let eta = if m % 2 == 1 {
            2.0 * ((mf + 2.0) / (mf + 3.0)).sqrt()
        } else {
            (2.0 + 2.0 * (mf / (mf + 4.0)).sqrt()).sqrt()
        };
        0.5 * eta
    });
    Ok(EuclidBounds { lower, upper })
}

/// `vol(S^k)` for the unit sphere.
pub fn unit_sphere_volume(k: u64) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k as f64 - 1.0) * unit_sphere_volume(k - 2),
    }
}

fn s_kappa(kappa: f64, t: f64) -> f64 {
    if kappa > 0.0 {
        (kappa.sqrt() * t).sin() / kappa.sqrt()
    } else if kappa < 0.0 {
        ((-kappa).sqrt() * t).sinh() / (-kappa).sqrt()
    } else {
        t
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature to relative accuracy `rel`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson(f, a, b, fa, fm, fb, whole, rel * scale, 50)
}

/// `ν(n, κ, r) = vol(S^{n-1}) ∫_0^r s_κ(t)^{n-1} dt`, the volume of a radius-`r`
/// ball in the `n`-dimensional model space of curvature `κ`.
pub fn model_ball_volume(n: u64, kappa: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    if !(r > 0.0) || !r.is_finite() || !kappa.is_finite() {
        return Err(Error::DomainError(format!("radius must be positive and finite, got {r}")));
    }
    if kappa > 0.0 && r > PI / kappa.sqrt() {
        return Err(Error::DomainError(format!("radius {r} exceeds π/√κ = {}", PI / kappa.sqrt())));
    }
    let k = (n - 1) as i32;
    let f = move |t: f64| s_kappa(kappa, t).powi(k);
    Ok(unit_sphere_volume(n - 1) * integrate(&f, 0.0, r, 1e-12))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinitenessInput {
    pub n: u64,
    /// convexity-radius bound `C`
    pub c: f64,
    /// diameter bound `D`
    pub d: f64,
    /// curvature lower parameter `κ`
    pub kappa: f64,
    /// sectional-curvature upper bound `K` (no bound when `<= 0`)
    pub k: f64,
    /// lower bound `t` on the G-separation
    pub t: f64,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinitenessReport {
    pub r_ck: f64,
    pub rho: f64,
    /// `M = ⌈ν(D)/ν(ρ)⌉`
    pub m: u64,
    pub count: BigUint,
}

/// `r_{C,K} = min{C, π/(4√K)}`, `ρ = min{r_{C,K}/24, t/6}`,
/// `M = ⌈ν(n,κ,D)/ν(n,κ,ρ)⌉` and the count `Σ_{j≤M} j^{(j²-j)/2}|hom(G,S_j)|`.
pub fn finiteness_count(input: &FinitenessInput, budget: HomBudget) -> Result<FinitenessReport> {
    for (name, v) in [("C", input.c), ("D", input.d), ("t", input.t)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::DomainError(format!("{name} must be positive, got {v}")));
        }
    }
    let r_ck = if input.k > 0.0 { input.c.min(0.25 * PI / input.k.sqrt()) } else { input.c };
    let rho = (r_ck / 24.0).min(input.t / 6.0);
    let ratio = model_ball_volume(input.n, input.kappa, input.d)? / model_ball_volume(input.n, input.kappa, rho)?;
    // absorb quadrature noise before the ceiling
    let m = (ratio * (1.0 - 1e-9)).ceil().max(1.0);
    if m > budget.max_degree as f64 {
        return Err(Error::BudgetExceeded(format!(
            "M = {m} exceeds the homomorphism-enumeration degree cap {}",
            budget.max_degree
        )));
    }
    let m = m as u64;
    let count = covering_ball_count(&input.group, m as usize, budget)?;
    Ok(FinitenessReport { r_ck, rho, m, count })
}
