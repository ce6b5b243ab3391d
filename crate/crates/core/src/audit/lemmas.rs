//! Records for the κ-series identity, the zeta constant `B`, the two
//! smoothed prime-sum lemmas and the grouped `A₁…A₅` terms.

use num_complex::Complex64;

use super::{AuditRecord, Verdict, IDENTITY_TOL};
use crate::consts::{EULER_GAMMA, LN_2, PI, ZETA_B};
use crate::error::{domain, Result};
use crate::primes::{smoothed_sum_linear, smoothed_sum_log, PrimeTable, SumVariants};
use crate::special::{kappa_series_closed, kappa_series_direct, techlem2_expression, trivial_zero_tail};

/// Tail tolerance passed to [`kappa_series_direct`] by the audits.
const KAPPA_TAIL_TOL: f64 = 1e-10;

/// `(Re κ, Im κ)` points checked by default.
pub const TECHLEM1_DEFAULT_GRID: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.5, 0.0),
    (1.0, 0.0),
    (2.0, 0.0),
    (5.5, 0.0),
    (0.0, 1.0),
    (1.0, 3.0),
    (0.0, 10.0),
    (0.0, 50.0),
];

/// `closed − direct` for the κ-series at each point, one REPORT record per
/// point. The closed form is not an identity, so nothing is asserted.
pub fn identity_residual_techlem1(kappas: &[Complex64]) -> Result<Vec<AuditRecord>> {
    let mut rows = Vec::with_capacity(kappas.len());
    for &k in kappas {
        let direct = kappa_series_direct(k, KAPPA_TAIL_TOL)?;
        let closed = kappa_series_closed(k);
        rows.push((k, closed, direct));
    }
    let max_abs = rows.iter().map(|(_, c, d)| (c - d.value).abs()).fold(0.0, f64::max);
    Ok(rows
        .into_iter()
        .map(|(k, closed, direct)| {
            AuditRecord::new("techlem1", closed, direct.value, direct.abs_error, Verdict::Report)
                .param("kappa_re", k.re)
                .param("kappa_im", k.im)
                .param("max_abs_residual", max_abs)
        })
        .collect())
}

/// `B = ½ log(4π) − 1 − γ/2`.
pub fn b_constant() -> f64 {
    0.5 * (4.0 * PI).ln() - 1.0 - 0.5 * EULER_GAMMA
}

/// Recomputes `B` and compares it with the tabulated 30-digit constant.
pub fn bconst_record() -> AuditRecord {
    let value = b_constant();
    let ok = (value - ZETA_B).abs() <= IDENTITY_TOL;
    AuditRecord::new("bconst", value, ZETA_B, IDENTITY_TOL, Verdict::from_check(ok))
        .param("value", value)
        .param("two_abs_b", 2.0 * value.abs())
}

fn variant_records(lemma: &str, v: &SumVariants) -> [AuditRecord; 2] {
    [("as_printed", &v.as_printed), ("corrected", &v.corrected)].map(|(name, r)| {
        AuditRecord::new(format!("{lemma}.{name}"), r.lhs, r.main, r.window, Verdict::from_check(r.within_window()))
            .param("x", r.x)
    })
}

/// Linear smoothed sum against both main-term variants at each `x`.
pub fn lemma24_records(tbl: &PrimeTable, xs: &[f64]) -> Result<Vec<AuditRecord>> {
    let mut out = Vec::new();
    for &x in xs {
        out.extend(variant_records("lemma24", &smoothed_sum_linear(tbl, x)?));
    }
    Ok(out)
}

/// Logarithmic smoothed sum against both main-term variants at each `x`.
pub fn lemma26_records(tbl: &PrimeTable, xs: &[f64]) -> Result<Vec<AuditRecord>> {
    let mut out = Vec::new();
    for &x in xs {
        out.extend(variant_records("lemma26", &smoothed_sum_log(tbl, x)?));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

/// The five grouped terms and their combination on one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ATerms {
    /// `l (log x + 1)/x`.
    pub a1: f64,
    /// `(d − 2l) log 2/x`.
    pub a2: f64,
    /// `(d − 2l) T(x)` on the upper side, `d T(x)` on the lower.
    pub a3: f64,
    /// `(1/x) Σ Re S(κᵢ)` over the nonzero `κᵢ`.
    pub a4: f64,
    /// `(d − l)/x` times the worst `Re (x^{−κ} − 1)/(κ(κ+1))` among the κ's.
    pub a5: f64,
    /// Prefactor times `A₁ + A₂ − A₃ − A₄ − A₅`, plus the `±2d/(x log²x)` term.
    pub combined: f64,
    /// `2d/(1+√x)²` (upper) or `−2.05d/(√x−1)²` (lower).
    pub bound: f64,
}

/// Evaluates the grouped terms for `d`, `l = l(f)` and the `d − l` nonzero
/// local parameters `kappas`.
pub fn a_terms(side: Side, d: u32, l: u32, kappas: &[Complex64], x: f64) -> Result<ATerms> {
    if d == 0 || l > d {
        return Err(domain(format!("need 0 <= l <= d and d >= 1, got d={d}, l={l}")));
    }
    if kappas.len() != (d - l) as usize {
        return Err(domain(format!("expected {} nonzero κ's, got {}", d - l, kappas.len())));
    }
    if let Some(k) = kappas.iter().find(|k| !(k.re >= 0.0) || (k.re == 0.0 && k.im == 0.0)) {
        return Err(domain(format!("κ = {k} must be nonzero with Re κ >= 0")));
    }
    if !(x >= 132.0) || !x.is_finite() {
        return Err(domain(format!("need x >= 132, got {x}")));
    }
    let (df, lf) = (d as f64, l as f64);
    let log_x = x.ln();
    let sqrt_x = x.sqrt();
    let tail = trivial_zero_tail(x)?.value;
    let a1 = lf * (log_x + 1.0) / x;
    let a2 = (df - 2.0 * lf) * LN_2 / x;
    let a3 = match side {
        Side::Upper => (df - 2.0 * lf) * tail,
        Side::Lower => df * tail,
    };
    let mut s_sum = 0.0;
    let mut t2: Vec<f64> = Vec::with_capacity(kappas.len());
    for &k in kappas {
        s_sum += kappa_series_direct(k, KAPPA_TAIL_TOL)?.value;
        t2.push(techlem2_expression(k, x)?.re);
    }
    let a4 = s_sum / x;
    // A₅ enters with a minus sign under a negative prefactor: the upper side is
    // hurt by the largest value, the lower side by the smallest.
    let worst = match side {
        Side::Upper => t2.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Side::Lower => t2.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let a5 = if kappas.is_empty() { 0.0 } else { (df - lf) * worst / x };
    let group = a1 + a2 - a3 - a4 - a5;
    let log2 = log_x * log_x;
    let (combined, bound) = match side {
        Side::Upper => (
            -(1.0 / log_x - 2.0 / (sqrt_x * log2)) * (1.0 + 1.0 / sqrt_x).powi(-2) * group
                + 2.0 * df / (x * log2),
            2.0 * df / (1.0 + sqrt_x).powi(2),
        ),
        Side::Lower => (
            -(1.0 / log_x + 2.0 / (sqrt_x * log2)) * (1.0 - 1.0 / sqrt_x).powi(-2) * group
                - 2.0 * df / (x * log2),
            -2.05 * df / (sqrt_x - 1.0).powi(2),
        ),
    };
    Ok(ATerms { a1, a2, a3, a4, a5, combined, bound })
}

/// Checks `combined ≤ 2d/(1+√x)²` (upper) or `combined ≥ −2.05d/(√x−1)²`
/// (lower).
pub fn a_terms_audit(side: Side, d: u32, l: u32, kappas: &[Complex64], x: f64, tol: f64) -> Result<AuditRecord> {
    let t = a_terms(side, d, l, kappas, x)?;
    let ok = match side {
        Side::Upper => t.combined <= t.bound + tol,
        Side::Lower => t.combined >= t.bound - tol,
    };
    let mut rec = AuditRecord::new(format!("aterms.{}", side.name()), t.combined, t.bound, tol, Verdict::from_check(ok))
        .param("d", d as f64)
        .param("l", l as f64)
        .param("x", x)
        .param("A1", t.a1)
        .param("A2", t.a2)
        .param("A3", t.a3)
        .param("A4", t.a4)
        .param("A5", t.a5);
    for (i, k) in kappas.iter().enumerate() {
        rec = rec.param(&format!("kappa{i}_re"), k.re).param(&format!("kappa{i}_im"), k.im);
    }
    Ok(rec)
}
