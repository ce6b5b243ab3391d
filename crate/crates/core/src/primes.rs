//! Von Mangoldt sieve and the weighted prime sums
//!
//! - `Σ_{n≤x} Λ(n)/n · (1 − n/x)`,
//! - `Σ_{n≤x} Λ(n)/(n log n) · log(x/n)/log x`,
//! - `Σ_{p^k≤x} log p · (−1)^k (1/(p^k log p^k) − 1/(x log x))`.
//!
//! The first two are compared with their conditional asymptotic main terms
//! in two variants each, see [`SumVariants`].

use serde::Serialize;

use crate::consts::{EULER_GAMMA, LN_2PI, PI, ZETA_B};
use crate::error::{domain, Error, Result};
use crate::numeric::NeumaierSum;
use crate::special::trivial_zero_tail;

/// Largest sieve limit accepted (two gigabytes of `u32` factors).
pub const MAX_SIEVE_LIMIT: u64 = 500_000_000;

/// Smallest-prime-factor table up to `limit`, built by a linear sieve.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// One prime power `n = p^k` with `n ≤ x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    pub fn log_p(&self) -> f64 {
        (self.p as f64).ln()
    }
}

impl PrimeTable {
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the memory budget ({MAX_SIEVE_LIMIT})"
            )));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m >= len {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    /// `Some((p, k))` when `n = p^k` with `k ≥ 1`.
    pub fn prime_power(&self, n: u64) -> Option<(u64, u32)> {
        let p = self.smallest_prime_factor(n)?;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (m == 1).then_some((p, k))
    }

    pub fn is_prime_power(&self, n: u64) -> bool {
        self.prime_power(n).is_some()
    }

    /// `Λ(n)`: `log p` if `n = p^k`, else 0. Zero outside the table.
    pub fn von_mangoldt(&self, n: u64) -> f64 {
        match self.prime_power(n) {
            Some((p, _)) => (p as f64).ln(),
            None => 0.0,
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(domain(format!("x must be finite, got {x}")));
        }
        if x.floor() > self.limit as f64 {
            return Err(Error::BeyondTable { x, limit: self.limit });
        }
        Ok(())
    }

    /// Prime powers `n ≤ x` in increasing order.
    pub fn prime_powers(&self, x: f64) -> Result<impl Iterator<Item = PrimePower> + '_> {
        self.check_x(x)?;
        let top = if x < 2.0 { 1 } else { x.floor() as u64 };
        Ok((2..=top).filter_map(move |n| {
            self.prime_power(n).map(|(p, k)| PrimePower { n, p, k })
        }))
    }
}

/// A prime sum against one candidate main term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedSumResult {
    pub x: f64,
    /// The sum itself, from the sieve.
    pub lhs: f64,
    pub main: f64,
    /// Allowance for the `|θ| ≤ 1` error term.
    pub window: f64,
    /// `lhs − main`.
    pub residual: f64,
}

impl WeightedSumResult {
    fn new(x: f64, lhs: f64, main: f64, window: f64) -> Self {
        Self { x, lhs, main, window, residual: lhs - main }
    }

    pub fn within_window(&self) -> bool {
        self.residual.abs() <= self.window
    }
}

/// The same sieve value compared with the main term as it is usually
/// printed and with the corrected main term.
///
/// For the linear sum the corrected term replaces `2π/x` by `log(2π)/x`
/// (the residue of `ζ'/ζ` at `s = 0`); for the logarithmic sum it replaces
/// `−γ − 1` by `+γ − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumVariants {
    pub as_printed: WeightedSumResult,
    pub corrected: WeightedSumResult,
}

/// `|B|` for the zeros of ζ.
pub fn zeta_b_abs() -> f64 {
    ZETA_B.abs()
}

/// `Σ_{n≤x} Λ(n)/n (1 − n/x)` against `log x − (1+γ) + c/x − T(x)` with
/// `c ∈ {2π, log 2π}` and window `2|B|/√x`.
pub fn smoothed_sum_linear(tbl: &PrimeTable, x: f64) -> Result<SumVariants> {
    if !(x > 1.0) {
        return Err(domain(format!("smoothed_sum_linear needs x > 1, got {x}")));
    }
    let lhs: NeumaierSum = tbl
        .prime_powers(x)?
        .map(|pp| {
            let n = pp.n as f64;
            pp.log_p() / n * (1.0 - n / x)
        })
        .collect();
    let lhs = lhs.value();
    let tail = trivial_zero_tail(x)?.value;
    let base = x.ln() - (1.0 + EULER_GAMMA) - tail;
    let window = 2.0 * zeta_b_abs() / x.sqrt();
    Ok(SumVariants {
        as_printed: WeightedSumResult::new(x, lhs, base + 2.0 * PI / x, window),
        corrected: WeightedSumResult::new(x, lhs, base + LN_2PI / x, window),
    })
}

/// `Σ_{n≤x} Λ(n)/(n log n) · log(x/n)/log x` against
/// `log log x ∓ γ − 1 + γ/log x`, window `2|B|/(√x log²x) + 1/(3x³ log²x)`.
pub fn smoothed_sum_log(tbl: &PrimeTable, x: f64) -> Result<SumVariants> {
    if !(x >= std::f64::consts::E) {
        return Err(domain(format!("smoothed_sum_log needs x >= e, got {x}")));
    }
    let log_x = x.ln();
    let lhs: NeumaierSum = tbl
        .prime_powers(x)?
        .map(|pp| {
            let n = pp.n as f64;
            pp.log_p() / (n * n.ln()) * (x / n).ln() / log_x
        })
        .collect();
    let lhs = lhs.value();
    let log2 = log_x * log_x;
    let window = 2.0 * zeta_b_abs() / (x.sqrt() * log2) + 1.0 / (3.0 * x.powi(3) * log2);
    let common = log_x.ln() - 1.0 + EULER_GAMMA / log_x;
    Ok(SumVariants {
        as_printed: WeightedSumResult::new(x, lhs, common - EULER_GAMMA, window),
        corrected: WeightedSumResult::new(x, lhs, common + EULER_GAMMA, window),
    })
}

/// `Σ_{p^k≤x} log p · (−1)^k (1/(p^k log p^k) − 1/(x log x))`, the extremal
/// configuration `a(p) = −1` of the lower-bound prime sum.
pub fn alternating_prime_power_sum(tbl: &PrimeTable, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(domain(format!("alternating sum needs x >= 2, got {x}")));
    }
    tbl.check_x(x)?;
    if x.fract() == 0.0 && tbl.is_prime_power(x as u64) {
        return Err(domain(format!("x = {x} is a prime power")));
    }
    let cut = 1.0 / (x * x.ln());
    let sum: NeumaierSum = tbl
        .prime_powers(x)?
        .map(|pp| {
            let n = pp.n as f64;
            let sign = if pp.k % 2 == 0 { 1.0 } else { -1.0 };
            pp.log_p() * sign * (1.0 / (n * n.ln()) - cut)
        })
        .collect();
    Ok(sum.value())
}

/// `Σ_{n≤x} Λ(n)/n`.
pub fn mertens_sum(tbl: &PrimeTable, x: f64) -> Result<f64> {
    let sum: NeumaierSum = tbl.prime_powers(x)?.map(|pp| pp.log_p() / pp.n as f64).collect();
    Ok(sum.value())
}
