//! Global extremum searches over `σ ≥ 0`, `t ∈ ℝ` on a box compactified
//! by `σ = tan u`, `t = tan v`.

use super::{AuditRecord, Verdict};
use crate::consts::SQRT_3;
use crate::error::{domain, Result};

/// The maximum claimed for [`h_function`], `−(4/5)(√3 − 2)` to 7 places.
pub const H_CLAIMED_MAX: f64 = 0.2143594;

const CLAIM_TOL: f64 = 1e-9;
const REFINE_STEPS: usize = 200;

/// `(σ²+3σ+2+t²)/((σ+2)²+t²) − (σ²+4σ+3+t²)/((σ+3)²+t²)`.
pub fn h_function(sigma: f64, t: f64) -> f64 {
    let t2 = t * t;
    (sigma * sigma + 3.0 * sigma + 2.0 + t2) / ((sigma + 2.0).powi(2) + t2)
        - (sigma * sigma + 4.0 * sigma + 3.0 + t2) / ((sigma + 3.0).powi(2) + t2)
}

/// `½ log(((σ+2)² + t²)/((σ+3)² + t²))`.
pub fn logratio_function(sigma: f64, t: f64) -> f64 {
    let t2 = t * t;
    0.5 * (((sigma + 2.0).powi(2) + t2) / ((sigma + 3.0).powi(2) + t2)).ln()
}

struct Found {
    value: f64,
    sigma: f64,
    t: f64,
    boundary: f64,
}

/// Maximises `f` over `[0, σ_max] × [−t_max, t_max]`: a `(steps+1)²` grid
/// uniform in `(atan σ, atan t)` followed by pattern refinement. Also
/// returns the largest value seen on the outer edges of the box.
fn maximize(f: impl Fn(f64, f64) -> f64 + Sync, sigma_max: f64, t_max: f64, steps: usize) -> Result<Found> {
    if !(sigma_max > 0.0 && t_max > 0.0) || steps < 2 {
        return Err(domain("search box must be non-degenerate with at least 2 steps"));
    }
    let umax = sigma_max.atan();
    let vmax = t_max.atan();
    let n = steps + 1;
    let coords = |i: usize, j: usize| {
        let u = umax * i as f64 / steps as f64;
        let v = -vmax + 2.0 * vmax * j as f64 / steps as f64;
        (u, v)
    };
    let g = |u: f64, v: f64| f(u.tan(), v.tan());
    let (best, at) = super::par_argmax(n * n, |idx| {
        let (u, v) = coords(idx / n, idx % n);
        g(u, v)
    });
    let (mut u, mut v) = coords(at / n, at % n);
    let mut value = best;
    let (mut hu, mut hv) = (umax / steps as f64, 2.0 * vmax / steps as f64);
    for _ in 0..REFINE_STEPS {
        let mut moved = false;
        for (du, dv) in [(hu, 0.0), (-hu, 0.0), (0.0, hv), (0.0, -hv)] {
            let nu = (u + du).clamp(0.0, umax);
            let nv = (v + dv).clamp(-vmax, vmax);
            let val = g(nu, nv);
            if val > value {
                (u, v, value) = (nu, nv, val);
                moved = true;
            }
        }
        if !moved {
            hu *= 0.5;
            hv *= 0.5;
        }
    }
    let boundary = (0..n)
        .flat_map(|i| {
            let (s, t) = (sigma_max, t_max);
            let frac = i as f64 / steps as f64;
            [
                f(s, -t + 2.0 * t * frac),
                f(s * frac, t),
                f(s * frac, -t),
            ]
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Found { value, sigma: u.tan(), t: v.tan(), boundary })
}

/// Global maximum of [`h_function`]; passes when the sampled maximum does
/// not exceed [`H_CLAIMED_MAX`], and reports the value found.
pub fn extremum_h(sigma_max: f64, t_max: f64, steps: usize) -> Result<AuditRecord> {
    let found = maximize(h_function, sigma_max, t_max, steps)?;
    let ok = found.value <= H_CLAIMED_MAX + CLAIM_TOL;
    Ok(AuditRecord::new("hmax", found.value, H_CLAIMED_MAX, CLAIM_TOL, Verdict::from_check(ok))
        .param("sigma_max", sigma_max)
        .param("t_max", t_max)
        .param("steps", steps as f64)
        .param("argmax_sigma", found.sigma)
        .param("argmax_t", found.t)
        .param("argmax_t_squared", found.t * found.t)
        .param("boundary_max", found.boundary)
        .param("claimed_exact", 0.8 * (2.0 - SQRT_3)))
}

/// Global minimum of [`logratio_function`]; passes when it equals
/// `log(2/3)` within `1e−9` and is attained at the origin.
pub fn extremum_logratio(sigma_max: f64, t_max: f64, steps: usize) -> Result<AuditRecord> {
    let found = maximize(|s, t| -logratio_function(s, t), sigma_max, t_max, steps)?;
    let min = -found.value;
    let target = (2.0f64 / 3.0).ln();
    let at_origin = found.sigma.abs() <= 1e-6 && found.t.abs() <= 1e-6;
    let ok = (min - target).abs() <= CLAIM_TOL && at_origin;
    Ok(AuditRecord::new("logratio", min, target, CLAIM_TOL, Verdict::from_check(ok))
        .param("sigma_max", sigma_max)
        .param("t_max", t_max)
        .param("steps", steps as f64)
        .param("argmin_sigma", found.sigma)
        .param("argmin_t", found.t)
        .param("boundary_min", -found.boundary))
}
