//! Numerical checks of the inequalities, extrema and identities the bounds
//! rest on, and explicit-formula windows for `log|L(1, f)|`.
//!
//! Every check produces an [`AuditRecord`]. Tolerances: analytic identities
//! [`IDENTITY_TOL`], grid inequality margins [`MARGIN_TOL`], agreement
//! between independent oracles [`ORACLE_TOL`].

mod extremum;
mod grids;
mod interval;
mod lemmas;
mod window;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use extremum::{extremum_h, extremum_logratio, h_function, logratio_function, H_CLAIMED_MAX};
pub use grids::{
    p2_bounded, p2_exact, p2_weights, trig_margin, verify_chandee, verify_p2_positivity,
    verify_techlem2, verify_trig_inequality,
};
pub use interval::Interval;
pub use lemmas::{
    a_terms, a_terms_audit, b_constant, bconst_record, identity_residual_techlem1, lemma24_records,
    lemma26_records, ATerms, Side, TECHLEM1_DEFAULT_GRID,
};
pub use window::{explicit_formula_window, reb_window, window_records, WindowParts};

pub const IDENTITY_TOL: f64 = 1e-12;
pub const MARGIN_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// A measured quantity; no claim is asserted.
    Report,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok { Verdict::Pass } else { Verdict::Fail }
    }
}

/// One audited claim: `lhs` against `rhs`, with `residual = lhs − rhs`
/// unless stated otherwise by the producing check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub id: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub window: f64,
    pub residual: f64,
    pub verdict: Verdict,
}

impl AuditRecord {
    pub fn new(id: impl Into<String>, lhs: f64, rhs: f64, window: f64, verdict: Verdict) -> Self {
        Self {
            id: id.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            window,
            residual: lhs - rhs,
            verdict,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

pub fn any_fail(records: &[AuditRecord]) -> bool {
    records.iter().any(AuditRecord::is_fail)
}

/// Smallest `f(i)` over `0..n` with its index; ties go to the lowest index
/// and NaN counts as `−∞`, so the answer does not depend on scheduling.
pub(crate) fn par_argmin(n: usize, f: impl Fn(usize) -> f64 + Sync) -> (f64, usize) {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let v = f(i);
            (if v.is_nan() { f64::NEG_INFINITY } else { v }, i)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        )
}

/// Largest `f(i)`; NaN counts as `+∞`.
pub(crate) fn par_argmax(n: usize, f: impl Fn(usize) -> f64 + Sync) -> (f64, usize) {
    let (v, i) = par_argmin(n, |i| {
        let v = f(i);
        if v.is_nan() { f64::NEG_INFINITY } else { -v }
    });
    (-v, i)
}
