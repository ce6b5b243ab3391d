//! Explicit upper and lower bounds for `|L(1, f)|` in terms of the analytic
//! conductor, valid once `log C(f) ≥ 23d`.

use serde::Serialize;

use crate::consts::{LOWER_LEAD, UPPER_LEAD};
use crate::error::{domain, Result};
use crate::lfunc::LFunctionInstance;

/// `log C(f) ≥ VALIDITY_FACTOR · d` is the range where the bounds are proven.
pub const VALIDITY_FACTOR: f64 = 23.0;

/// Smallest `x = log²C/(4d²)` the proofs use.
pub const MIN_PROOF_X: f64 = 132.0;

/// The constants `K(d)`, `J₁(d)`, `J₂(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub d: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
    #[serde(rename = "J2")]
    pub j2: f64,
}

/// `e^{z} − 1 − z` without cancellation for small `z`.
fn exp_excess(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let mut term = z * z / 2.0;
        let mut sum = 0.0f64;
        let mut n = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            sum += term;
            n += 1.0;
            term *= z / n;
        }
        sum
    } else {
        z.exp_m1() - z
    }
}

pub fn constants(d: u32) -> Result<BoundConstants> {
    if d == 0 {
        return Err(domain("degree must be at least 1"));
    }
    let df = d as f64;
    Ok(BoundConstants {
        d,
        k: 2.31 + 22.59 / df * exp_excess(0.31 * df),
        j1: 2.0 + 4.18 / df * exp_excess(0.69 * df),
        j2: 9.0 + 16.74 / df * exp_excess(0.69 * df),
    })
}

/// Scaled terms of the upper bound; they sum to `upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperTerms {
    pub leading: f64,
    pub half_d: f64,
    #[serde(rename = "K_term")]
    pub k_term: f64,
}

/// Scaled terms of the lower bound; they sum to `lower_reciprocal`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerTerms {
    pub leading: f64,
    pub half_d: f64,
    #[serde(rename = "J1_term")]
    pub j1_term: f64,
    #[serde(rename = "J2_term")]
    pub j2_term: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundTerms {
    pub upper: UpperTerms,
    pub lower: LowerTerms,
}

/// `(2e^γ log log C)^d` and `(12e^γ/π² · log log C)^d`, without the
/// `1 + o(1)` factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Littlewood {
    pub upper: f64,
    pub lower: f64,
}

/// Both bounds at one `(d, log C)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: u32,
    #[serde(rename = "logC")]
    pub log_c: f64,
    /// `log log C`.
    #[serde(rename = "L")]
    pub loglog_c: f64,
    /// `log²C / (4d²)`, the prime-sum cutoff used in the proofs.
    pub x: f64,
    /// `log C ≥ 23d`. Below it the values are the formulas only.
    pub valid: bool,
    /// Bound on `|L(1, f)|`.
    pub upper: f64,
    /// Bound on `1/|L(1, f)|`.
    pub lower_reciprocal: f64,
    pub constants: BoundConstants,
    pub terms: BoundTerms,
    pub littlewood: Littlewood,
}

/// `Y = log log C − log 2d`.
fn shifted_loglog(d: u32, log_c: f64) -> Result<f64> {
    if d == 0 {
        return Err(domain("degree must be at least 1"));
    }
    if !(log_c > 1.0) || !log_c.is_finite() {
        return Err(domain(format!("log C must exceed 1, got {log_c}")));
    }
    let y = log_c.ln() - (2.0 * d as f64).ln();
    if !(y > 0.0) {
        return Err(domain(format!(
            "log log C = {} must exceed log 2d = {}",
            log_c.ln(),
            (2.0 * d as f64).ln()
        )));
    }
    Ok(y)
}

fn upper_terms(c: &BoundConstants, y: f64) -> UpperTerms {
    let d = c.d as i32;
    let df = c.d as f64;
    let scale = UPPER_LEAD.powi(d);
    UpperTerms {
        leading: scale * y.powi(d),
        half_d: scale * df / 2.0 * y.powi(d - 1),
        k_term: scale * df * c.k / 4.0 * y.powi(d - 2),
    }
}

fn lower_terms(c: &BoundConstants, log_c: f64, y: f64) -> LowerTerms {
    let d = c.d as i32;
    let df = c.d as f64;
    let scale = LOWER_LEAD.powi(d);
    LowerTerms {
        leading: scale * y.powi(d),
        half_d: scale * df / 2.0 * y.powi(d - 1),
        j1_term: scale * df * c.j1 / 4.0 * y.powi(d - 2),
        j2_term: scale * df * df * c.j2 * y.powi(d) / log_c,
    }
}

/// Full report for degree `d` and conductor `C = e^{log_c}`.
///
/// Rejects `log C ≤ 1` and `log log C ≤ log 2d`, where the formulas are
/// undefined or meaningless; values below the validity threshold are
/// returned with `valid = false`.
pub fn bound_report(d: u32, log_c: f64) -> Result<BoundReport> {
    let y = shifted_loglog(d, log_c)?;
    let c = constants(d)?;
    let up = upper_terms(&c, y);
    let lo = lower_terms(&c, log_c, y);
    let loglog_c = log_c.ln();
    let df = d as f64;
    Ok(BoundReport {
        d,
        log_c,
        loglog_c,
        x: log_c * log_c / (4.0 * df * df),
        valid: log_c >= VALIDITY_FACTOR * df,
        upper: up.leading + up.half_d + up.k_term,
        lower_reciprocal: lo.leading + lo.half_d + lo.j1_term + lo.j2_term,
        constants: c,
        terms: BoundTerms { upper: up, lower: lo },
        littlewood: littlewood_reference(d, log_c)?,
    })
}

/// `(2e^γ)^d [Y^d + (d/2)Y^{d−1} + (dK(d)/4)Y^{d−2}]`.
pub fn upper_bound(d: u32, log_c: f64) -> Result<f64> {
    Ok(bound_report(d, log_c)?.upper)
}

/// `(12e^γ/π²)^d [Y^d + (d/2)Y^{d−1} + (dJ₁(d)/4)Y^{d−2} + d²J₂(d)Y^d/log C]`.
pub fn lower_bound_reciprocal(d: u32, log_c: f64) -> Result<f64> {
    Ok(bound_report(d, log_c)?.lower_reciprocal)
}

/// Both bounds at `log C_t(f)`.
pub fn t_aspect_bounds(inst: &LFunctionInstance, t: f64) -> Result<BoundReport> {
    bound_report(inst.degree() as u32, inst.t_aspect_conductor(t).ln())
}

pub fn littlewood_reference(d: u32, log_c: f64) -> Result<Littlewood> {
    if !(log_c > 1.0) || !log_c.is_finite() {
        return Err(domain(format!("log C must exceed 1, got {log_c}")));
    }
    let l = log_c.ln();
    Ok(Littlewood {
        upper: (UPPER_LEAD * l).powi(d as i32),
        lower: (LOWER_LEAD * l).powi(d as i32),
    })
}

/// `(Y + log 2d)^d − [Y^d + (d/2)Y^{d−1} + (dK/4)Y^{d−2}]`: nonnegative
/// exactly when the upper bound is below the Littlewood reference.
pub fn littlewood_margin(d: u32, log_c: f64) -> Result<f64> {
    let y = shifted_loglog(d, log_c)?;
    let c = constants(d)?;
    let t = upper_terms(&c, y);
    let bracket = (t.leading + t.half_d + t.k_term) / UPPER_LEAD.powi(d as i32);
    Ok(log_c.ln().powi(d as i32) - bracket)
}

/// The degree-two bounds with `K(2)/2`, `J₁(2)/2`, `4J₂(2)` rounded up to
/// `2.51`, `2.67`, `89.40`, as functions of `X = log log C`.
pub fn degree_two_corollary(log_c: f64) -> Result<(f64, f64)> {
    shifted_loglog(2, log_c)?;
    let x = log_c.ln();
    let l4 = 4f64.ln();
    let quad = x * x - (2.0 * l4 - 1.0) * x + l4 * l4 - l4;
    let upper = UPPER_LEAD.powi(2) * (quad + 2.51);
    let lower = LOWER_LEAD.powi(2) * (quad + 2.67 + 89.40 * (x * x - 2.0 * l4 * x + l4 * l4) / log_c);
    Ok((upper, lower))
}

/// The degree-one bounds with `K(1)/4`, `J₁(1)/4`, `J₂(1)` rounded up to
/// `0.88`, `0.82`, `14.09`.
pub fn degree_one_remark(log_c: f64) -> Result<(f64, f64)> {
    let y = shifted_loglog(1, log_c)?;
    let upper = UPPER_LEAD * (y + 0.5 + 0.88 / y);
    let lower = LOWER_LEAD * (y + 0.5 + 0.82 / y + 14.09 * y / log_c);
    Ok((upper, lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::{EULER_GAMMA, PI};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// `22.59 Σ_{k≥2} 0.31^k d^{k−1}/k!` and the analogous series.
    fn series_constants(d: u32) -> (f64, f64, f64) {
        let df = d as f64;
        let series = |rate: f64| {
            let mut term = rate * rate * df / 2.0;
            let mut sum = 0.0;
            for k in 2..80 {
                sum += term;
                term *= rate * df / (k + 1) as f64;
            }
            sum
        };
        (2.31 + 22.59 * series(0.31), 2.0 + 4.18 * series(0.69), 9.0 + 16.74 * series(0.69))
    }

    #[test]
    fn reference_constants() {
        let c1 = constants(1).unwrap();
        assert!((c1.k - 3.516873328).abs() < 1e-8);
        assert!((c1.j1 - 3.269530929).abs() < 1e-8);
        assert!((c1.j2 - 14.084198026).abs() < 1e-8);
        assert!(c1.k / 4.0 <= 0.88 && c1.j1 / 4.0 <= 0.82 && c1.j2 <= 14.09);
        let c2 = constants(2).unwrap();
        assert!((c2.k - 5.008692233).abs() < 1e-8);
        assert!((c2.j1 - 5.333344401).abs() < 1e-8);
        assert!((c2.j2 - 22.349326622).abs() < 1e-8);
        assert!(c2.k / 2.0 <= 2.51 && c2.j1 / 2.0 <= 2.67 && 4.0 * c2.j2 <= 89.40);
        assert!(constants(0).is_err());
    }

    #[test]
    fn closed_forms_match_power_series() {
        for d in 1..=10 {
            let c = constants(d).unwrap();
            let (k, j1, j2) = series_constants(d);
            assert!(rel(c.k, k) < 1e-14 && rel(c.j1, j1) < 1e-14 && rel(c.j2, j2) < 1e-14, "d={d}");
        }
    }

    #[test]
    fn constants_increase_in_d() {
        let cs: Vec<_> = (1..=10).map(|d| constants(d).unwrap()).collect();
        for w in cs.windows(2) {
            assert!(w[1].k > w[0].k && w[1].j1 > w[0].j1 && w[1].j2 > w[0].j2);
        }
        assert!(cs.iter().all(|c| c.k >= 2.31 && c.j1 >= 2.0 && c.j2 >= 9.0));
    }

    #[test]
    fn threshold_values() {
        let r = bound_report(1, 23.0).unwrap();
        assert!(r.valid);
        assert!((r.upper - 11.76339964).abs() < 1e-7);
        assert!((r.lower_reciprocal - 10.33519244).abs() < 1e-7);
        assert!((r.littlewood.upper - 2.0 * EULER_GAMMA.exp() * 23f64.ln()).abs() < 1e-12);
        assert_eq!(r.x, 132.25);
        let t = r.terms.upper;
        assert!(rel(t.leading + t.half_d + t.k_term, r.upper) < 1e-15);
        assert!(!bound_report(1, 22.9).unwrap().valid);
    }

    #[test]
    fn rejects_undefined_region() {
        assert!(bound_report(1, 1.0).is_err());
        assert!(bound_report(1, 0.5).is_err());
        assert!(bound_report(1, 2.0).is_err()); // log log C < log 2
        assert!(bound_report(2, 4.0).is_err());
        assert!(bound_report(1, f64::NAN).is_err());
        assert!(bound_report(0, 30.0).is_err());
        assert!(bound_report(1, 2.1).is_ok());
    }

    #[test]
    fn littlewood_at_e() {
        let l = littlewood_reference(1, std::f64::consts::E).unwrap();
        assert!((l.upper - 2.0 * EULER_GAMMA.exp()).abs() < 1e-15);
    }

    #[test]
    fn degree_one_specialisation() {
        let c = constants(1).unwrap();
        for log_c in [23.0, 30.0, 100.0, 10.0 * 10f64.ln()] {
            let y = log_c.ln() - 2f64.ln();
            let r = bound_report(1, log_c).unwrap();
            let up = UPPER_LEAD * (y + 0.5 + c.k / 4.0 / y);
            let lo = LOWER_LEAD * (y + 0.5 + c.j1 / 4.0 / y + c.j2 * y / log_c);
            assert!(rel(r.upper, up) < 1e-12 && rel(r.lower_reciprocal, lo) < 1e-12);
            let (ru, rl) = degree_one_remark(log_c).unwrap();
            assert!(r.upper <= ru && r.lower_reciprocal <= rl);
        }
    }

    #[test]
    fn degree_two_corollary_dominates() {
        for i in 0..100 {
            let log_c = 46.0 + (1e4 - 46.0) * i as f64 / 99.0;
            let r = bound_report(2, log_c).unwrap();
            let (u, l) = degree_two_corollary(log_c).unwrap();
            assert!(r.upper <= u && r.lower_reciprocal <= l, "logC={log_c}");
        }
    }

    #[test]
    fn monotone_on_valid_range() {
        for d in 1..=6u32 {
            let start = 23.0 * d as f64;
            let pts: Vec<f64> = (0..1000).map(|i| start * (1.0 + i as f64 / 100.0)).collect();
            let rs: Vec<_> = pts.iter().map(|&l| bound_report(d, l).unwrap()).collect();
            for w in rs.windows(2) {
                assert!(w[1].upper > w[0].upper, "upper d={d} at {}", w[0].log_c);
                // For d = 1 the J₂ term decays faster than the rest grows just past the threshold.
                if d > 1 || w[0].log_c >= 24.24 {
                    assert!(w[1].lower_reciprocal > w[0].lower_reciprocal, "lower d={d} at {}", w[0].log_c);
                }
            }
        }
    }

    #[test]
    fn degree_one_lower_dips_after_threshold() {
        let a = lower_bound_reciprocal(1, 23.0).unwrap();
        let b = lower_bound_reciprocal(1, 24.0).unwrap();
        let c = lower_bound_reciprocal(1, 30.0).unwrap();
        assert!(b < a && c > a);
    }

    #[test]
    fn littlewood_comparison() {
        for d in 2..=4u32 {
            for i in 0..200 {
                let log_c = 23.0 * d as f64 * 1.05f64.powi(i);
                assert!(littlewood_margin(d, log_c).unwrap() >= 0.0, "d={d} logC={log_c}");
            }
        }
        // d = 1 only beats the classical bound once Y ≥ (K(1)/4)/(log 2 − 1/2).
        assert!(littlewood_margin(1, 23.0).unwrap() < 0.0);
        assert!(littlewood_margin(1, 190.0).unwrap() > 0.0);
    }

    #[test]
    fn t_aspect_matches() {
        let inst = LFunctionInstance::new("zeta", 1, 1, vec![Complex64::new(0.0, 0.0).into()], None).unwrap();
        let big = LFunctionInstance::new("big", 1, 1 << 40, vec![Complex64::new(0.0, 0.0).into()], None).unwrap();
        let c = big.analytic_conductor(Complex64::new(1.0, 0.0));
        assert_eq!(t_aspect_bounds(&big, 0.0).unwrap(), bound_report(1, c.ln()).unwrap());
        // C_t = e^23: |1 + it|/(2π) = e^23
        let t = ((2.0 * PI * 23f64.exp()).powi(2) - 1.0).sqrt();
        let r = t_aspect_bounds(&inst, t).unwrap();
        assert!(rel(r.upper, upper_bound(1, 23.0).unwrap()) < 1e-12);
        let mut prev = r.upper;
        for k in 1..50 {
            let next = t_aspect_bounds(&inst, t * (1.0 + k as f64 * 0.5)).unwrap().upper;
            assert!(next >= prev);
            prev = next;
        }
    }

    proptest! {
        #[test]
        fn valid_implies_large_x(d in 1u32..8, f in 1.0..50.0f64) {
            let r = bound_report(d, 23.0 * d as f64 * f).unwrap();
            prop_assert!(r.valid && r.x >= MIN_PROOF_X);
            prop_assert!(r.loglog_c - (2.0 * d as f64).ln() >= 11.5f64.ln() - 1e-12);
            prop_assert!(r.upper > 0.0 && r.lower_reciprocal > 0.0);
        }
    }
}
