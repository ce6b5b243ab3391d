//! Scalar kernels: complex digamma, digamma at rationals, the trivial-zero
//! tail series `T(x)`, the κ-series and its closed form, and the two
//! digamma-adjacent margins used by the bound proofs.
//!
//! Every series-backed kernel returns a [`SeriesValue`] carrying an
//! absolute error estimate that callers are expected to propagate.

use num_complex::Complex64;
use serde::Serialize;

use crate::consts::{EULER_GAMMA, LN_3, PI};
use crate::error::{domain, Error, Result};
use crate::numeric::NeumaierSum;

const EPS: f64 = f64::EPSILON;

/// A computed value together with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: T,
    pub abs_error: f64,
}

impl<T> SeriesValue<T> {
    pub fn new(value: T, abs_error: f64) -> Self {
        Self { value, abs_error }
    }
}

/// `B_{2k} / (2k)` for `k = 1..=8`.
const DIGAMMA_ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// `|B_18| / 18`, the first omitted coefficient.
const DIGAMMA_FIRST_OMITTED: f64 = 43867.0 / 14364.0;

/// `sec(π/4)^18`: worst-case growth of the Stirling remainder on the closed
/// right half-plane.
const RIGHT_HALF_PLANE_FACTOR: f64 = 512.0;

const DIGAMMA_SHIFT_RADIUS: f64 = 10.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `cot(w)` for complex `w`, stable for large `|Im w|`.
fn cot(w: Complex64) -> Complex64 {
    let (a2, b2) = (2.0 * w.re, 2.0 * w.im);
    if b2.abs() > 40.0 {
        return Complex64::new(0.0, -b2.signum());
    }
    let den = b2.cosh() - a2.cos();
    Complex64::new(a2.sin() / den, -b2.sinh() / den)
}

/// Digamma `ψ(z) = Γ'(z)/Γ(z)`.
///
/// Points with negative real part are reflected through
/// `ψ(z) = ψ(1 − z) − π cot(πz)`; the argument is then shifted upward with
/// `ψ(z) = ψ(z + 1) − 1/z` until `|z| ≥ 10`, where the Stirling expansion
/// through `B₁₆` is summed.
pub fn digamma(z: Complex64) -> Result<SeriesValue<Complex64>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!("digamma of non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(domain(format!("digamma pole at z = {}", z.re)));
    }
    if z.re < 0.0 {
        let reflected = digamma_right_half_plane(Complex64::new(1.0, 0.0) - z);
        let c = cot(z * PI);
        let correction = c * PI;
        // d/dw [π cot(πw)] = −π² csc²(πw) = −π² (1 + cot²)
        let cond = PI * PI * (Complex64::new(1.0, 0.0) + c * c).norm() * z.norm();
        return Ok(SeriesValue::new(
            reflected.value - correction,
            reflected.abs_error + 4.0 * EPS * (correction.norm() + cond),
        ));
    }
    Ok(digamma_right_half_plane(z))
}

fn digamma_right_half_plane(mut z: Complex64) -> SeriesValue<Complex64> {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    while z.norm() < DIGAMMA_SHIFT_RADIUS {
        let r = z.inv();
        shift -= r;
        magnitude += r.norm();
        z += 1.0;
    }
    let r = z.inv();
    let r2 = r * r;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = r2;
    for c in DIGAMMA_ASYMPTOTIC {
        series += power * c;
        power *= r2;
    }
    let log = z.ln();
    let value = log - r * 0.5 - series + shift;
    let truncation =
        DIGAMMA_FIRST_OMITTED * RIGHT_HALF_PLANE_FACTOR * z.norm().powi(-18);
    let rounding = 4.0 * EPS * (log.norm() + 0.5 * r.norm() + series.norm() + magnitude);
    SeriesValue::new(value, truncation + rounding)
}

/// Real digamma `ψ(x)`.
pub fn digamma_real(x: f64) -> Result<SeriesValue<f64>> {
    let v = digamma(Complex64::new(x, 0.0))?;
    Ok(SeriesValue::new(v.value.re, v.abs_error))
}

/// `ψ(a/q)` for `1 ≤ a ≤ q` by Gauss's finite digamma formula
///
/// `ψ(a/q) = −γ − log(2q) − (π/2) cot(πa/q) + 2 Σ_{n=1}^{⌊(q−1)/2⌋} cos(2πna/q) log sin(πn/q)`.
pub fn digamma_rational(a: u64, q: u64) -> Result<SeriesValue<f64>> {
    if a == 0 || q == 0 || a > q {
        return Err(domain(format!("digamma_rational needs 1 <= a <= q, got a={a}, q={q}")));
    }
    if a == q {
        return Ok(SeriesValue::new(-EULER_GAMMA, EPS));
    }
    let qf = q as f64;
    let mut acc = NeumaierSum::new();
    let mut magnitude = 0.0;

    let log2q = (2.0 * qf).ln();
    acc.add(-EULER_GAMMA);
    acc.add(-log2q);
    magnitude += EULER_GAMMA + log2q;

    let cot_term = 0.5 * PI * cot_pi_fraction(a, q);
    acc.add(-cot_term);
    magnitude += cot_term.abs();

    for n in 1..=(q - 1) / 2 {
        let r = (n * a) % q;
        let term = 2.0 * cos_two_pi_fraction(r, q) * sin_pi_fraction(n, q).ln();
        acc.add(term);
        magnitude += term.abs();
    }
    Ok(SeriesValue::new(acc.value(), 4.0 * EPS * magnitude))
}

/// `cos(2π r/q)` with the angle folded into `[0, π]`.
fn cos_two_pi_fraction(r: u64, q: u64) -> f64 {
    let r = r % q;
    let folded = r.min(q - r);
    (2.0 * PI * folded as f64 / q as f64).cos()
}

/// `sin(π n/q)` for `0 < n < q`, folded into `(0, π/2]`.
fn sin_pi_fraction(n: u64, q: u64) -> f64 {
    let folded = n.min(q - n);
    (PI * folded as f64 / q as f64).sin()
}

/// `cot(π a/q)` for `0 < a < q`.
fn cot_pi_fraction(a: u64, q: u64) -> f64 {
    if 2 * a == q {
        return 0.0;
    }
    let (folded, sign) = if 2 * a < q { (a, 1.0) } else { (q - a, -1.0) };
    let angle = PI * folded as f64 / q as f64;
    sign * angle.cos() / angle.sin()
}

/// `T(x) = Σ_{n≥1} x^{−2n−1} / (2n(2n+1))` via the closed form
/// `−(1/(2x)) log(1 − x⁻²) − atanh(1/x) + 1/x`.
///
/// The closed form cancels badly once `x` is away from 1; use
/// [`trivial_zero_tail`] for accurate values.
pub fn trivial_zero_tail_closed_form(x: f64) -> f64 {
    let u = x.recip();
    // 1 − x⁻² = (x − 1)(x + 1)/x², kept in factored form near x = 1
    let log_one_minus_u2 = ((x - 1.0) * (x + 1.0)).ln() - 2.0 * x.ln();
    let atanh_u = 0.5 * ((x + 1.0) / (x - 1.0)).ln();
    -0.5 * u * log_one_minus_u2 - atanh_u + u
}

const TAIL_SERIES_THRESHOLD: f64 = 1.001;

/// `T(x)`, the contribution of the trivial zeros in the prime-sum formulas.
///
/// Summed directly with a geometric tail bound for `x ≥ 1.001`; closer to 1
/// the series converges too slowly and the closed form is used instead.
pub fn trivial_zero_tail(x: f64) -> Result<SeriesValue<f64>> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(domain(format!("trivial_zero_tail needs x > 1, got {x}")));
    }
    if x < TAIL_SERIES_THRESHOLD {
        let u = x.recip();
        let value = trivial_zero_tail_closed_form(x);
        let log_term = 0.5 * u * ((x - 1.0) * (x + 1.0) / (x * x)).ln().abs();
        let atanh_term = 0.5 * ((x + 1.0) / (x - 1.0)).ln();
        return Ok(SeriesValue::new(
            value,
            8.0 * EPS * (log_term + atanh_term + u),
        ));
    }
    let u = x.recip();
    let u2 = u * u;
    let mut acc = NeumaierSum::new();
    let mut power = u * u2;
    let mut n = 1u64;
    loop {
        let two_n = 2.0 * n as f64;
        let term = power / (two_n * (two_n + 1.0));
        acc.add(term);
        if term <= 1e-3 * EPS * acc.value() {
            break;
        }
        power *= u2;
        n += 1;
    }
    let next_two_n = 2.0 * (n + 1) as f64;
    let tail = power * u2 / (next_two_n * (next_two_n + 1.0) * (1.0 - u2));
    let value = acc.value();
    Ok(SeriesValue::new(value + tail, tail + 2.0 * EPS * value))
}

/// Minimum number of terms of the κ-series summed explicitly.
const KAPPA_SERIES_MIN_TERMS: f64 = 1e5;

/// `Re Σ_{n≥1} (2/(κ+1+2n) − 1/(κ+1+n))` by direct summation.
///
/// With `a = κ + 1` each term equals `a / ((a + 2n)(a + n))`, summed up to
/// `N = max(10⁵, ⌈(|κ|+2)/√tail_tol⌉)`. The remainder is estimated by the
/// exact antiderivative `log((a+2t)/(a+t))` with a trapezoid correction;
/// the reported error bounds what that estimate leaves out.
pub fn kappa_series_direct(kappa: Complex64, tail_tol: f64) -> Result<SeriesValue<f64>> {
    if !(kappa.re >= 0.0) || !kappa.im.is_finite() || !kappa.re.is_finite() {
        return Err(domain(format!("kappa series needs Re κ >= 0, got {kappa}")));
    }
    if !(tail_tol > 0.0) {
        return Err(domain(format!("tail tolerance must be positive, got {tail_tol}")));
    }
    let terms = KAPPA_SERIES_MIN_TERMS
        .max(((kappa.norm() + 2.0) / tail_tol.sqrt()).ceil());
    if terms > 1e10 {
        return Err(Error::Resource(format!(
            "kappa series would need {terms:e} terms; loosen tail_tol"
        )));
    }
    let n_max = terms as u64;
    let a = kappa + 1.0;
    let term = |n: f64| (a / ((a + 2.0 * n) * (a + n))).re;

    let mut acc = NeumaierSum::new();
    let mut magnitude = 0.0;
    for n in 1..=n_max {
        let t = term(n as f64);
        acc.add(t);
        magnitude += t.abs();
    }
    let nf = n_max as f64;
    // ∫_N^∞ (2/(a+2t) − 1/(a+t)) dt = log(2(a+N)/(a+2N)); only its real part is needed
    let integral = ((a + nf) * 2.0 / (a + 2.0 * nf)).norm().ln();
    let tail = integral - 0.5 * term(nf);
    let remainder = 1.0 / (6.0 * nf * nf);
    Ok(SeriesValue::new(
        acc.value() + tail,
        remainder + 4.0 * EPS * (magnitude + tail.abs()),
    ))
}


/// The closed form asserted for the κ-series, evaluated verbatim at
/// `σ = Re κ`, `t = Im κ`:
///
/// `½ log 4 + (σ²+3σ+2+t²)/((σ+2)²+t²) − (σ²+4σ+3+t²)/((σ+3)²+t²) + ½ log(((σ+2)²+t²)/((σ+3)²+t²))`.
///
/// This does not equal the series; see [`kappa_series_direct`].
pub fn kappa_series_closed(kappa: Complex64) -> f64 {
    let (s, t) = (kappa.re, kappa.im);
    let t2 = t * t;
    let d2 = (s + 2.0).powi(2) + t2;
    let d3 = (s + 3.0).powi(2) + t2;
    0.5 * 4f64.ln() + (s * s + 3.0 * s + 2.0 + t2) / d2 - (s * s + 4.0 * s + 3.0 + t2) / d3
        + 0.5 * (d2 / d3).ln()
}

/// `(x^{−κ} − 1) / (κ(κ + 1))`, continued to `κ = 0` by its limit `−log x`.
pub fn techlem2_expression(kappa: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(domain(format!("need x > 1, got {x}")));
    }
    if !(kappa.re >= 0.0) {
        return Err(domain(format!("need Re κ >= 0, got {kappa}")));
    }
    let log_x = x.ln();
    let w = -kappa * log_x;
    // (x^{−κ} − 1)/κ = −log x · (e^w − 1)/w
    let ratio = if w.norm() < 0.1 {
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 2..=20 {
            term = term * w / k as f64;
            sum += term;
        }
        -sum * log_x
    } else {
        (w.exp() - 1.0) / kappa
    };
    Ok(ratio / (kappa + 1.0))
}

/// `|(x^{−κ} − 1)/(κ(κ+1))| · log 3 / (2 log x)`; the bound being checked
/// asserts this never exceeds 1 for `Re κ ≥ 0`, `x > 1`.
pub fn techlem2_bound_ratio(kappa: Complex64, x: f64) -> Result<f64> {
    let e = techlem2_expression(kappa, x)?;
    Ok(e.norm() * LN_3 / (2.0 * x.ln()))
}

/// `log|z| − Re ψ(z)`, nonnegative on `Re z ≥ 1/4`.
pub fn chandee_margin(z: Complex64) -> Result<f64> {
    if !(z.re >= 0.25) {
        return Err(domain(format!("chandee_margin needs Re z >= 1/4, got {z}")));
    }
    let psi = digamma(z)?;
    Ok(z.norm().ln() - psi.value.re)
}
