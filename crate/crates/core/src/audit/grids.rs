//! Grid scans for the trigonometric inequality, the `p = 2` positivity
//! claim, the `(x^{−κ} − 1)/(κ(κ+1))` bound and the digamma margin.

use num_complex::Complex64;

use super::{par_argmax, par_argmin, AuditRecord, Verdict};
use crate::consts::{LN_2, PI};
use crate::dirichlet::factorize;
use crate::error::{domain, Result};
use crate::special::{chandee_margin, techlem2_bound_ratio};

/// `1 − r^k cos(kθ)` as `(1 − r^k) + 2r^k sin²(kθ/2)`, free of cancellation
/// near `r = 1`, `θ = 0`.
fn one_minus_power_cos(k: u32, r: f64, theta: f64) -> f64 {
    let rk = r.powi(k as i32);
    let one_minus_rk = -(k as f64 * r.ln()).exp_m1();
    let s = (k as f64 * theta / 2.0).sin();
    one_minus_rk + 2.0 * rk * s * s
}

/// `k²(1 − r cos θ) − (1 − r^k cos kθ)`.
pub fn trig_margin(k: u32, r: f64, theta: f64) -> f64 {
    let k2 = (k as f64) * (k as f64);
    k2 * one_minus_power_cos(1, r, theta) - one_minus_power_cos(k, r, theta)
}

fn check_steps(pairs: &[(&str, usize)]) -> Result<()> {
    for (name, v) in pairs {
        if *v == 0 {
            return Err(domain(format!("{name} must be positive")));
        }
    }
    Ok(())
}

/// Minimum of [`trig_margin`] over `k ≤ k_max`, `r = i/r_steps`
/// (`i = 1..=r_steps`) and `θ = 2πj/theta_steps`.
///
/// Also checks the slack `k² − 1 − (r^k + r) ≥ 1` for `k ≥ 2`.
pub fn verify_trig_inequality(k_max: u32, r_steps: usize, theta_steps: usize, tol: f64) -> Result<AuditRecord> {
    check_steps(&[("k_max", k_max as usize), ("r_steps", r_steps), ("theta_steps", theta_steps)])?;
    let rows = k_max as usize * r_steps;
    let point = |idx: usize| {
        let row = idx / theta_steps;
        let k = (row / r_steps) as u32 + 1;
        let r = (row % r_steps + 1) as f64 / r_steps as f64;
        let theta = 2.0 * PI * (idx % theta_steps) as f64 / theta_steps as f64;
        (k, r, theta)
    };
    let (min, at) = par_argmin(rows * theta_steps, |idx| {
        let (k, r, theta) = point(idx);
        trig_margin(k, r, theta)
    });
    let (k, r, theta) = point(at);
    let slack = if k_max >= 2 {
        par_argmin((k_max as usize - 1) * r_steps, |i| {
            let k = (i / r_steps) as f64 + 2.0;
            let r = (i % r_steps + 1) as f64 / r_steps as f64;
            k * k - 1.0 - (r.powf(k) + r)
        })
        .0
    } else {
        f64::INFINITY
    };
    let ok = min >= -tol && slack >= 1.0 - tol;
    let mut rec = AuditRecord::new("trig", min, 0.0, tol, Verdict::from_check(ok))
        .param("k_max", k_max as f64)
        .param("r_steps", r_steps as f64)
        .param("theta_steps", theta_steps as f64)
        .param("argmin_k", k as f64)
        .param("argmin_r", r)
        .param("argmin_theta", theta);
    if slack.is_finite() {
        rec = rec.param("min_slack", slack);
    }
    Ok(rec)
}

/// Weights `w_k = 1/(2^k k log 2) − 1/(x log x)` for `2^k ≤ x`.
pub fn p2_weights(x: f64) -> Vec<f64> {
    let cut = 1.0 / (x * x.ln());
    (1..)
        .take_while(|&k| 2f64.powi(k) <= x)
        .map(|k| 1.0 / (2f64.powi(k) * k as f64 * LN_2) - cut)
        .collect()
}

/// `log 2 · Σ_k (−1)^{k−1}(1 − r^k cos kθ) w_k`, all terms exact.
pub fn p2_exact(weights: &[f64], r: f64, theta: f64) -> f64 {
    let s: f64 = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let k = i as u32 + 1;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * one_minus_power_cos(k, r, theta) * w
        })
        .sum();
    LN_2 * s
}

/// As [`p2_exact`] for `k ≤ 5`; for `k ≥ 6` odd terms (nonnegative) are
/// dropped and even terms are replaced by their lower bound
/// `−k²(1 − r cos θ) w_k` from the trigonometric inequality.
pub fn p2_bounded(weights: &[f64], r: f64, theta: f64) -> f64 {
    let base = one_minus_power_cos(1, r, theta);
    let s: f64 = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let k = i as u32 + 1;
            match (k <= 5, k % 2) {
                (true, 1) => one_minus_power_cos(k, r, theta) * w,
                (true, _) => -one_minus_power_cos(k, r, theta) * w,
                (false, 1) => 0.0,
                (false, _) => -(k as f64).powi(2) * base * w,
            }
        })
        .sum();
    LN_2 * s
}

const REFINE_STEPS: usize = 200;

/// Coordinate pattern search minimising `f` from `start`, halving the step
/// after every unsuccessful round.
fn pattern_min(
    f: impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    step: (f64, f64),
    clamp: impl Fn(f64, f64) -> (f64, f64),
) -> (f64, f64, f64) {
    let (mut a, mut b) = start;
    let mut best = f(a, b);
    let (mut ha, mut hb) = step;
    for _ in 0..REFINE_STEPS {
        let mut moved = false;
        for (da, db) in [(ha, 0.0), (-ha, 0.0), (0.0, hb), (0.0, -hb)] {
            let (na, nb) = clamp(a + da, b + db);
            let v = f(na, nb);
            if v < best {
                best = v;
                (a, b) = (na, nb);
                moved = true;
            }
        }
        if !moved {
            ha *= 0.5;
            hb *= 0.5;
        }
    }
    (best, a, b)
}

pub(crate) fn is_prime_power(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1
}

/// Minimum over `(r, θ) ∈ (0, 1] × [0, 2π)` of [`p2_bounded`] at cutoff `x`,
/// by grid scan and local refinement.
pub fn verify_p2_positivity(x: f64, r_steps: usize, theta_steps: usize, tol: f64) -> Result<AuditRecord> {
    check_steps(&[("r_steps", r_steps), ("theta_steps", theta_steps)])?;
    if !(x >= 100.0) || !x.is_finite() {
        return Err(domain(format!("p = 2 positivity needs x >= 100, got {x}")));
    }
    if x.fract() == 0.0 && x < u64::MAX as f64 && is_prime_power(x as u64) {
        return Err(domain(format!("x = {x} is a prime power")));
    }
    let w = p2_weights(x);
    let point = |idx: usize| {
        let r = (idx / theta_steps + 1) as f64 / r_steps as f64;
        let theta = 2.0 * PI * (idx % theta_steps) as f64 / theta_steps as f64;
        (r, theta)
    };
    let (grid_min, at) = par_argmin(r_steps * theta_steps, |i| {
        let (r, t) = point(i);
        p2_bounded(&w, r, t)
    });
    let (r0, t0) = point(at);
    let (refined, r, theta) = pattern_min(
        |r, t| p2_bounded(&w, r, t),
        (r0, t0),
        (1.0 / r_steps as f64, 2.0 * PI / theta_steps as f64),
        |r, t| (r.clamp(f64::MIN_POSITIVE, 1.0), t.rem_euclid(2.0 * PI)),
    );
    let min = grid_min.min(refined);
    let (exact_min, _) = par_argmin(r_steps * theta_steps, |i| {
        let (r, t) = point(i);
        p2_exact(&w, r, t)
    });
    Ok(
        AuditRecord::new("p2", min, 0.0, tol, Verdict::from_check(min >= -tol))
            .param("x", x)
            .param("k_max", w.len() as f64)
            .param("r_steps", r_steps as f64)
            .param("theta_steps", theta_steps as f64)
            .param("argmin_r", r)
            .param("argmin_theta", theta)
            .param("grid_min", grid_min)
            .param("exact_grid_min", exact_min),
    )
}

/// Largest `|(x^{−κ} − 1)/(κ(κ+1))| · log 3/(2 log x)` over
/// `Re κ ∈ [0, 10]`, `Im κ ∈ [−10, 10]`, `x ∈ [1.01, 10⁶]` (geometric).
pub fn verify_techlem2(sigma_steps: usize, t_steps: usize, x_steps: usize, tol: f64) -> Result<AuditRecord> {
    check_steps(&[("sigma_steps", sigma_steps), ("t_steps", t_steps), ("x_steps", x_steps)])?;
    let lerp = |i: usize, n: usize, a: f64, b: f64| {
        if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 }
    };
    let point = |idx: usize| {
        let xi = idx % x_steps;
        let ti = (idx / x_steps) % t_steps;
        let si = idx / (x_steps * t_steps);
        let kappa = Complex64::new(lerp(si, sigma_steps, 0.0, 10.0), lerp(ti, t_steps, -10.0, 10.0));
        let x = 1.01 * (1e6f64 / 1.01).powf(lerp(xi, x_steps, 0.0, 1.0));
        (kappa, x)
    };
    let n = sigma_steps * t_steps * x_steps;
    let (max, at) = par_argmax(n, |i| {
        let (k, x) = point(i);
        techlem2_bound_ratio(k, x).unwrap_or(f64::NAN)
    });
    let (kappa, x) = point(at);
    Ok(
        AuditRecord::new("techlem2", max, 1.0, tol, Verdict::from_check(max <= 1.0 + tol))
            .param("points", n as f64)
            .param("argmax_kappa_re", kappa.re)
            .param("argmax_kappa_im", kappa.im)
            .param("argmax_x", x),
    )
}

/// Smallest `log|z| − Re ψ(z)` over `Re z ∈ [1/4, 20]`, `Im z ∈ [−50, 50]`.
pub fn verify_chandee(re_steps: usize, im_steps: usize, tol: f64) -> Result<AuditRecord> {
    check_steps(&[("re_steps", re_steps), ("im_steps", im_steps)])?;
    let lerp = |i: usize, n: usize, a: f64, b: f64| {
        if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 }
    };
    let point = |idx: usize| {
        Complex64::new(lerp(idx / im_steps, re_steps, 0.25, 20.0), lerp(idx % im_steps, im_steps, -50.0, 50.0))
    };
    let (min, at) = par_argmin(re_steps * im_steps, |i| chandee_margin(point(i)).unwrap_or(f64::NAN));
    let z = point(at);
    Ok(
        AuditRecord::new("chandee", min, 0.0, tol, Verdict::from_check(min >= -tol))
            .param("points", (re_steps * im_steps) as f64)
            .param("argmin_re", z.re)
            .param("argmin_im", z.im),
    )
}
