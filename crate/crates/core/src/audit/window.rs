//! Explicit-formula windows: intervals for `|Re B(f)|` and `log|L(1, f)|`
//! obtained by ranging every `|θ| ≤ 1` error parameter over `[−1, 1]`.

use serde::Serialize;

use super::{AuditRecord, Interval, Verdict};
use crate::consts::{LN_2, LN_PI};
use crate::dirichlet::{enumerate_characters, l1_value};
use crate::error::{domain, Error, Result};
use crate::lfunc::{dirichlet_instance, LFunctionInstance};
use crate::numeric::NeumaierSum;
use crate::primes::PrimeTable;
use crate::special::{digamma, kappa_series_direct, techlem2_expression, trivial_zero_tail};

const KAPPA_TAIL_TOL: f64 = 1e-10;
const EPS: f64 = f64::EPSILON;

/// The pieces entering both windows at one cutoff `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowParts {
    pub x: f64,
    /// `log(q/π^d) + Re Σ ψ((1 + κⱼ)/2)`.
    pub gamma_term: f64,
    /// `Re Σ a(n)Λ(n)/n (1 − n/x)`.
    pub linear_sum: f64,
    /// `Re Σ a(n)Λ(n)/(n log n) · log(x/n)/log x`.
    pub log_sum: f64,
    pub tail: f64,
    /// `l(log x + 1)/x + (d − 2l) log 2/x − (1/x) Σ_{κ≠0} Re(S(κ) + (x^{−κ}−1)/(κ(κ+1)))`.
    pub local_terms: f64,
    /// Accumulated absolute error of the above.
    pub abs_error: f64,
}

fn window_parts(inst: &LFunctionInstance, tbl: &PrimeTable, x: f64) -> Result<WindowParts> {
    if !(x >= 132.0) || !x.is_finite() {
        return Err(domain(format!("window needs x >= 132, got {x}")));
    }
    let oracle = inst
        .oracle()
        .ok_or_else(|| Error::OracleCoverage { x, support: 0 })?;
    if !oracle.covers(x) {
        return Err(Error::OracleCoverage { x, support: oracle.support().unwrap_or(0) });
    }
    let d = inst.degree() as f64;
    let l = inst.zero_param_count() as f64;
    let log_x = x.ln();

    let mut err = 0.0;
    let mut gamma_term = (inst.conductor() as f64).ln() - d * LN_PI;
    for k in inst.kappas() {
        let psi = digamma((k + 1.0) / 2.0)?;
        gamma_term += psi.value.re;
        err += psi.abs_error;
    }

    let (mut lin, mut logs) = (0.0, 0.0);
    let (mut lin_c, mut log_c) = (NeumaierSum::new(), NeumaierSum::new());
    for pp in tbl.prime_powers(x)? {
        let a = oracle
            .coefficient(pp.p, pp.k)
            .ok_or(Error::OracleCoverage { x, support: oracle.support().unwrap_or(0) })?;
        let n = pp.n as f64;
        let lam_n = pp.log_p() / n;
        let t1 = a.re * lam_n * (1.0 - n / x);
        let t2 = a.re * lam_n / n.ln() * (x / n).ln() / log_x;
        lin_c.add(t1);
        log_c.add(t2);
        lin += t1.abs();
        logs += t2.abs();
    }
    err += 4.0 * EPS * (lin + logs);

    let tail = trivial_zero_tail(x)?;
    err += d * tail.abs_error;

    let mut kappa_sum = 0.0;
    for p in inst.local_params().iter().filter(|p| !p.is_zero()) {
        let k = p.value();
        let s = kappa_series_direct(k, KAPPA_TAIL_TOL)?;
        let e = techlem2_expression(k, x)?;
        kappa_sum += s.value + e.re;
        err += s.abs_error / x;
    }
    let local_terms = l * (log_x + 1.0) / x + (d - 2.0 * l) * LN_2 / x - kappa_sum / x;

    Ok(WindowParts {
        x,
        gamma_term,
        linear_sum: lin_c.value(),
        log_sum: log_c.value(),
        tail: tail.value,
        local_terms,
        abs_error: err,
    })
}

fn reb_from_parts(p: &WindowParts, d: f64, l: f64) -> Result<Interval> {
    let x = p.x;
    let base = 0.5 * (1.0 - 1.0 / x) * p.gamma_term - p.linear_sum + p.local_terms;
    // T(x) carries (dθ − (1 ± θ)l) over both printed forms: [−d − 2l, d].
    let numerator = Interval::new(base - d * p.tail, base + (d + 2.0 * l) * p.tail)?.widen(p.abs_error);
    let sx = x.sqrt();
    let denom = Interval::new(1.0 + 1.0 / x - 2.0 / sx, 1.0 + 1.0 / x + 2.0 / sx)?;
    let q = numerator.div_positive(denom)?;
    let nonneg = Interval::new(0.0, f64::INFINITY)?;
    Ok(q.intersect(nonneg).unwrap_or(Interval::point(0.0)))
}

/// Interval for `|Re B(f)|` at cutoff `x ≥ 132`.
pub fn reb_window(inst: &LFunctionInstance, tbl: &PrimeTable, x: f64) -> Result<Interval> {
    let p = window_parts(inst, tbl, x)?;
    reb_from_parts(&p, inst.degree() as f64, inst.zero_param_count() as f64)
}

/// Interval for `log|L(1, f)|` at cutoff `x ≥ 132`, with the `|Re B(f)|`
/// interval of [`reb_window`] substituted and both `θ`'s ranged
/// independently.
pub fn explicit_formula_window(inst: &LFunctionInstance, tbl: &PrimeTable, x: f64) -> Result<Interval> {
    let p = window_parts(inst, tbl, x)?;
    let d = inst.degree() as f64;
    let reb = reb_from_parts(&p, d, inst.zero_param_count() as f64)?;
    let log_x = x.ln();
    let log2 = log_x * log_x;
    let sx = x.sqrt();
    let center = p.log_sum + p.gamma_term / (2.0 * log_x);
    let coeff = Interval::new(1.0 / log_x - 2.0 / (sx * log2), 1.0 / log_x + 2.0 / (sx * log2))?;
    let b_part = -coeff.mul(reb);
    let theta_part = Interval::centered(0.0, 2.0 * d / (x * log2));
    Ok((Interval::point(center) + b_part + theta_part).widen(p.abs_error))
}

/// Containment of the exact `log|L(1, χ)|` in the explicit-formula window
/// for every primitive non-principal `χ` with `3 ≤ q ≤ q_max`.
pub fn window_records(tbl: &PrimeTable, q_max: u64, x: f64) -> Result<Vec<AuditRecord>> {
    let mut out = Vec::new();
    for q in 3..=q_max {
        for chi in enumerate_characters(q, true)? {
            if chi.is_principal() {
                continue;
            }
            let inst = dirichlet_instance(&chi)?;
            let w = explicit_formula_window(&inst, tbl, x)?;
            let truth = l1_value(&chi)?;
            let log_abs = truth.value.norm().ln();
            let slack = truth.abs_error / truth.value.norm();
            let mut rec = AuditRecord::new(
                "window",
                log_abs,
                w.midpoint(),
                0.5 * w.width() + slack,
                Verdict::from_check(w.widen(slack).contains(log_abs)),
            )
            .param("q", q as f64)
            .param("index", chi.index() as f64)
            .param("x", x)
            .param("lo", w.lo())
            .param("hi", w.hi());
            if let Ok(b) = reb_window(&inst, tbl, x) {
                rec = rec.param("reB_lo", b.lo()).param("reB_hi", b.hi());
            }
            out.push(rec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::PI;
    use crate::dirichlet::character;

    fn table() -> PrimeTable {
        PrimeTable::build(1_000_000).unwrap()
    }

    #[test]
    fn contains_known_values() {
        let tbl = table();
        let chi3 = dirichlet_instance(&character(3, 1).unwrap()).unwrap();
        let w = explicit_formula_window(&chi3, &tbl, 1e5).unwrap();
        assert!(w.contains((PI / (3.0 * 3f64.sqrt())).ln()), "{w}");
        let chi4 = dirichlet_instance(&character(4, 1).unwrap()).unwrap();
        let w = explicit_formula_window(&chi4, &tbl, 1e5).unwrap();
        assert!(w.contains((PI / 4.0).ln()), "{w}");
    }

    #[test]
    fn reb_nonnegative_and_shrinking() {
        let tbl = table();
        let chi = enumerate_characters(8, true).unwrap().into_iter().find(|c| c.parity() == 0).unwrap();
        let inst = dirichlet_instance(&chi).unwrap();
        let mut prev = f64::INFINITY;
        for x in [1e3, 1e4, 1e5] {
            let w = reb_window(&inst, &tbl, x).unwrap();
            assert!(w.lo() >= 0.0 && w.hi().is_finite());
            assert!(w.width() < prev);
            prev = w.width();
        }
        let w = reb_window(&inst, &tbl, 1e4).unwrap();
        assert!(w.width() <= 4.0 / 1e2 * w.hi() + 1e-3);
    }

    #[test]
    fn rejects_missing_oracle_and_small_x() {
        let tbl = PrimeTable::build(1000).unwrap();
        let h = crate::lfunc::hecke_instance(12, 1).unwrap();
        assert!(matches!(reb_window(&h, &tbl, 500.0), Err(Error::OracleCoverage { .. })));
        let chi = dirichlet_instance(&character(5, 1).unwrap()).unwrap();
        assert!(reb_window(&chi, &tbl, 100.0).is_err());
        assert!(matches!(reb_window(&chi, &tbl, 5000.0), Err(Error::BeyondTable { .. })));
    }
}
