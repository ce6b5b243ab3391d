//! Dirichlet characters modulo `q`, exact `L(1, χ)` and bound surveys.
//!
//! Characters are indexed lexicographically by their exponent vectors over
//! a fixed set of unit-group generators: the least primitive root of each
//! odd prime power, `−1` for `4`, and `{−1, 5}` for `2^k` with `k ≥ 3`,
//! taken in increasing order of the prime.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::consts::PI;
use crate::error::{Error, Result};
use crate::lfunc::dirichlet_instance;
use crate::numeric::{ComplexSum, NeumaierSum};
use crate::special::{digamma_rational, SeriesValue};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorisation by trial division, primes ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Least primitive root modulo the odd prime power `m = p^e`.
fn least_primitive_root(p: u64, m: u64) -> u64 {
    let order = m / p * (p - 1);
    let order_primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
    (2..m)
        .find(|&g| g % p != 0 && order_primes.iter().all(|&r| pow_mod(g, order / r, m) != 1))
        .expect("odd prime powers have primitive roots")
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Generator {
    prime: u64,
    /// Modulus of the CRT component this generator lives in.
    component: u64,
    generator: u64,
    order: u64,
}

/// The unit group `(ℤ/qℤ)^×` with its fixed generators and discrete-log
/// tables.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<Generator>,
    /// `logs[a]` is the exponent vector of `a`, or `None` if `gcd(a, q) > 1`.
    logs: Vec<Option<Vec<u64>>>,
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        if q > 1 << 24 {
            return Err(Error::Resource(format!("modulus {q} too large for log tables")));
        }
        let mut generators = Vec::new();
        // per-component log tables indexed by residue modulo the component
        let mut component_logs: Vec<(u64, Vec<Option<Vec<u64>>>)> = Vec::new();
        for (p, e) in factorize(q) {
            let m = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        generators.push(Generator { prime: 2, component: 4, generator: 3, order: 2 });
                        let mut t = vec![None; 4];
                        t[1] = Some(vec![0]);
                        t[3] = Some(vec![1]);
                        component_logs.push((4, t));
                    }
                    _ => {
                        let half = m / 4;
                        generators.push(Generator { prime: 2, component: m, generator: m - 1, order: 2 });
                        generators.push(Generator { prime: 2, component: m, generator: 5, order: half });
                        let mut t = vec![None; m as usize];
                        let mut x = 1u64;
                        for j in 0..half {
                            t[x as usize] = Some(vec![0, j]);
                            t[(m - x) as usize] = Some(vec![1, j]);
                            x = x * 5 % m;
                        }
                        component_logs.push((m, t));
                    }
                }
            } else {
                let g = least_primitive_root(p, m);
                let order = m / p * (p - 1);
                generators.push(Generator { prime: p, component: m, generator: g, order });
                let mut t = vec![None; m as usize];
                let mut x = 1u64;
                for j in 0..order {
                    t[x as usize] = Some(vec![j]);
                    x = mul_mod(x, g, m);
                }
                component_logs.push((m, t));
            }
        }
        let logs = (0..q)
            .map(|a| {
                if gcd(a, q) != 1 {
                    return None;
                }
                let mut v = Vec::with_capacity(generators.len());
                for (m, table) in &component_logs {
                    let part = table[(a % m) as usize].as_ref().expect("unit has a log");
                    v.extend_from_slice(part);
                }
                Some(v)
            })
            .collect();
        Ok(Self { modulus: q, generators, logs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the generators; their product is `φ(q)`.
    pub fn orders(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.order).collect()
    }

    pub fn generator_residues(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.generator).collect()
    }

    pub fn size(&self) -> u64 {
        self.generators.iter().map(|g| g.order).product()
    }

    /// Group exponent: lcm of the generator orders.
    fn exponent(&self) -> u64 {
        self.generators
            .iter()
            .fold(1, |acc, g| acc / gcd(acc, g.order) * g.order)
    }

    fn exponents_of(&self, mut index: u64) -> Vec<u64> {
        let mut exps = vec![0; self.generators.len()];
        for (slot, g) in exps.iter_mut().zip(&self.generators).rev() {
            *slot = index % g.order;
            index /= g.order;
        }
        exps
    }

    fn index_of(&self, exps: &[u64]) -> u64 {
        exps.iter()
            .zip(&self.generators)
            .fold(0, |acc, (&e, g)| acc * g.order + e)
    }

    fn conductor_of(&self, exps: &[u64]) -> u64 {
        let mut conductor = 1;
        let mut i = 0;
        while i < self.generators.len() {
            let g = &self.generators[i];
            if g.prime == 2 && g.component >= 8 {
                let (a, b) = (exps[i], exps[i + 1]);
                let half = self.generators[i + 1].order;
                conductor *= if b == 0 {
                    if a == 0 { 1 } else { 4 }
                } else {
                    // order of the 5-part is 2^j; conductor 2^{j+2}
                    let ord = half / gcd(b, half);
                    4 * ord
                };
                i += 2;
                continue;
            }
            if g.prime == 2 {
                conductor *= if exps[i] == 0 { 1 } else { 4 };
            } else {
                let ord = g.order / gcd(exps[i], g.order);
                if ord > 1 {
                    let mut c = g.prime;
                    let mut o = ord;
                    while o % g.prime == 0 {
                        o /= g.prime;
                        c *= g.prime;
                    }
                    conductor *= c;
                }
            }
            i += 1;
        }
        conductor
    }

    /// The character with the given lexicographic index.
    pub fn character(&self, index: u64) -> Result<DirichletCharacter> {
        if index >= self.size() {
            return Err(Error::InvalidCharacter(format!(
                "index {index} out of range for modulus {} ({} characters)",
                self.modulus,
                self.size()
            )));
        }
        let exponents = self.exponents_of(index);
        let order = self.exponent();
        let angles = self
            .logs
            .iter()
            .map(|logs| {
                logs.as_ref().map(|logs| {
                    let mut acc = 0u64;
                    for ((&l, &e), g) in logs.iter().zip(&exponents).zip(&self.generators) {
                        let scale = order / g.order;
                        acc = (acc + mul_mod(mul_mod(l, e, order), scale, order)) % order;
                    }
                    acc
                })
            })
            .collect::<Vec<_>>();
        let q = self.modulus;
        let minus_one = angles[((q - 1) % q) as usize].unwrap_or(0);
        let conductor = self.conductor_of(&exponents);
        Ok(DirichletCharacter {
            modulus: q,
            index,
            exponents,
            conductor,
            parity: u8::from(minus_one != 0),
            order,
            angles,
        })
    }
}

/// A Dirichlet character, with its values stored as exact angles
/// `χ(a) = exp(2πi · angle(a) / order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    exponents: Vec<u64>,
    conductor: u64,
    parity: u8,
    order: u64,
    angles: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `0` if `χ(−1) = 1`, `1` if `χ(−1) = −1`.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn is_real(&self) -> bool {
        self.angles.iter().flatten().all(|&a| 2 * a % self.order == 0)
    }

    /// Angle numerator of `χ(n)` over [`Self::angle_denominator`], `None`
    /// when `gcd(n, q) > 1`.
    pub fn angle(&self, n: u64) -> Option<u64> {
        self.angles[(n % self.modulus) as usize]
    }

    pub fn angle_denominator(&self) -> u64 {
        self.order
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.angle(n) {
            None => Complex64::new(0.0, 0.0),
            Some(a) => unit_root(a, self.order),
        }
    }

    /// Label used in serialized instances: `dirichlet:q:index`.
    pub fn label(&self) -> String {
        format!("dirichlet:{}:{}", self.modulus, self.index)
    }
}

/// `exp(2πi a/m)`, exact at multiples of a quarter turn.
fn unit_root(a: u64, m: u64) -> Complex64 {
    let a = a % m;
    if a == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * a == m {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * a == m {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * a == 3 * m {
        return Complex64::new(0.0, -1.0);
    }
    let theta = 2.0 * PI * a as f64 / m as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// All `φ(q)` characters modulo `q` in index order, or only the primitive
/// ones.
pub fn enumerate_characters(q: u64, primitive_only: bool) -> Result<Vec<DirichletCharacter>> {
    let group = UnitGroup::new(q)?;
    let chars: Vec<_> = (0..group.size())
        .into_par_iter()
        .map(|i| group.character(i))
        .collect::<Result<_>>()?;
    Ok(if primitive_only {
        chars.into_iter().filter(|c| c.is_primitive()).collect()
    } else {
        chars
    })
}

pub fn character(q: u64, index: u64) -> Result<DirichletCharacter> {
    UnitGroup::new(q)?.character(index)
}

/// Index of the complex-conjugate character.
pub fn conjugate_index(chi: &DirichletCharacter) -> Result<u64> {
    let group = UnitGroup::new(chi.modulus)?;
    let exps: Vec<u64> = chi
        .exponents
        .iter()
        .zip(group.orders())
        .map(|(&e, o)| (o - e) % o)
        .collect();
    Ok(group.index_of(&exps))
}

fn require_nonprincipal(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_principal() {
        return Err(Error::InvalidCharacter(format!(
            "{} is principal; L(s, χ) has a pole at s = 1",
            chi.label()
        )));
    }
    Ok(())
}

/// `L(1, χ) = −(1/q) Σ_{a=1}^{q−1} χ(a) ψ(a/q)` for non-principal `χ`,
/// with `ψ(a/q)` from Gauss's finite formula.
pub fn l1_value(chi: &DirichletCharacter) -> Result<SeriesValue<Complex64>> {
    require_nonprincipal(chi)?;
    let q = chi.modulus;
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    let mut magnitude = 0.0;
    for a in 1..q {
        if chi.angle(a).is_none() {
            continue;
        }
        let psi = digamma_rational(a, q)?;
        let term = chi.value(a) * psi.value;
        acc.add(term);
        err += psi.abs_error;
        magnitude += term.norm();
    }
    let qf = q as f64;
    Ok(SeriesValue::new(
        -acc.value() / qf,
        (err + 4.0 * f64::EPSILON * magnitude) / qf,
    ))
}

/// Per-modulus partial harmonic sums for the Dirichlet-series route to
/// `L(1, χ)`: `H_a = Σ_{j<N/q} 1/(a + jq)` for `a = 1..=q`, where `N` is
/// `max(10⁶, q²)` rounded up to a multiple of `q`.
#[derive(Clone, Debug)]
pub struct SeriesBlocks {
    modulus: u64,
    terms: u64,
    harmonic: Vec<f64>,
}

const SERIES_MIN_TERMS: u64 = 1_000_000;

impl SeriesBlocks {
    pub fn new(q: u64) -> Self {
        let target = SERIES_MIN_TERMS.max(q * q);
        let blocks = target.div_ceil(q);
        let qf = q as f64;
        let harmonic = (1..=q)
            .into_par_iter()
            .map(|a| {
                let mut s = NeumaierSum::new();
                // largest terms last keeps the running sum small while adding tiny terms
                for j in (0..blocks).rev() {
                    s.add(1.0 / (a as f64 + j as f64 * qf));
                }
                s.value()
            })
            .collect();
        Self { modulus: q, terms: blocks * q, harmonic }
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

/// `L(1, χ) = Σ χ(n)/n` summed to `N` terms with the periodic tail
/// `Σ_{n>N} χ(n)/n` expanded in powers of `1/N`.
///
/// Independent of the digamma route in [`l1_value`].
pub fn l1_value_series(chi: &DirichletCharacter, blocks: &SeriesBlocks) -> Result<SeriesValue<Complex64>> {
    require_nonprincipal(chi)?;
    if blocks.modulus != chi.modulus {
        return Err(Error::InvalidCharacter(format!(
            "series blocks built for modulus {}, character has modulus {}",
            blocks.modulus, chi.modulus
        )));
    }
    let q = chi.modulus;
    let qf = q as f64;
    let n = blocks.terms as f64;
    let mut partial = ComplexSum::new();
    let (mut m1, mut m2, mut m3) = (ComplexSum::new(), ComplexSum::new(), ComplexSum::new());
    let mut magnitude = 0.0;
    for a in 1..=q {
        let v = chi.value(a);
        if v.norm() == 0.0 {
            continue;
        }
        let h = blocks.harmonic[(a - 1) as usize];
        partial.add(v * h);
        magnitude += h;
        let af = a as f64;
        m1.add(v * af);
        m2.add(v * af * af);
        m3.add(v * af * af * af);
    }
    // Σ_{j≥0} Σ_a χ(a)/(N + jq + a) with 1/(M+a) = Σ (−a)^r/M^{r+1}, Σ_a χ(a) = 0,
    // and Σ_j M_j^{-2}, M_j^{-3}, M_j^{-4} by Euler–Maclaurin.
    let inv_n = 1.0 / n;
    let s2 = inv_n / qf + 0.5 * inv_n * inv_n + qf * inv_n.powi(3) / 6.0;
    let s3 = 0.5 * inv_n * inv_n / qf + 0.5 * inv_n.powi(3);
    let s4 = inv_n.powi(3) / (3.0 * qf);
    let tail = -m1.value() * s2 + m2.value() * s3 - m3.value() * s4;
    let remainder = qf.powi(4) * inv_n.powi(4);
    Ok(SeriesValue::new(
        partial.value() + tail,
        remainder + 8.0 * f64::EPSILON * magnitude,
    ))
}

/// One row of a bound survey. Field names double as CSV column names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub q: u64,
    pub char_index: u64,
    pub conductor: u64,
    pub parity: u8,
    #[serde(rename = "re_L1")]
    pub re_l1: f64,
    #[serde(rename = "im_L1")]
    pub im_l1: f64,
    #[serde(rename = "abs_L1")]
    pub abs_l1: f64,
    #[serde(rename = "C_chi")]
    pub c_chi: f64,
    /// `None` when `log log C(χ) ≤ log 2`, where the formula is undefined.
    pub bound_upper: Option<f64>,
    pub bound_valid: bool,
    pub ratio: Option<f64>,
}

pub const SURVEY_CSV_HEADER: &str =
    "q,char_index,conductor,parity,re_L1,im_L1,abs_L1,C_chi,bound_upper,bound_valid,ratio";

fn survey_record(chi: &DirichletCharacter) -> Result<SurveyRecord> {
    let l1 = l1_value(chi)?.value;
    let inst = dirichlet_instance(chi)?;
    let c_chi = inst.analytic_conductor(Complex64::new(1.0, 0.0));
    let report = bounds::bound_report(1, c_chi.ln()).ok();
    let abs_l1 = l1.norm();
    Ok(SurveyRecord {
        q: chi.modulus(),
        char_index: chi.index(),
        conductor: chi.conductor(),
        parity: chi.parity(),
        re_l1: l1.re + 0.0,
        im_l1: l1.im + 0.0,
        abs_l1,
        c_chi,
        bound_upper: report.as_ref().map(|r| r.upper),
        bound_valid: report.as_ref().is_some_and(|r| r.valid),
        ratio: report.as_ref().map(|r| abs_l1 / r.upper),
    })
}

/// One record per primitive non-principal character with `3 ≤ q ≤ q_max`,
/// ordered by `(q, index)`. When `out` is given, `<out>.csv` and
/// `<out>.json` are written as well.
pub fn survey(q_max: u64, out: Option<&Path>) -> Result<Vec<SurveyRecord>> {
    if q_max < 3 {
        return Err(Error::Domain(format!("survey needs q_max >= 3, got {q_max}")));
    }
    let per_modulus: Vec<Vec<SurveyRecord>> = (3..=q_max)
        .into_par_iter()
        .map(|q| {
            enumerate_characters(q, true)?
                .par_iter()
                .filter(|c| !c.is_principal())
                .map(survey_record)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let records: Vec<SurveyRecord> = per_modulus.into_iter().flatten().collect();
    if let Some(stem) = out {
        write_survey(&records, stem)?;
    }
    Ok(records)
}

pub fn survey_csv(records: &[SurveyRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        return Ok(format!("{SURVEY_CSV_HEADER}\n"));
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `<stem>.csv` and `<stem>.json` (a JSON array of records).
pub fn write_survey(records: &[SurveyRecord], stem: &Path) -> Result<()> {
    let csv_path = stem.with_extension("csv");
    let json_path = stem.with_extension("json");
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    std::fs::write(&csv_path, survey_csv(records)?).map_err(io(&csv_path))?;
    let mut json = serde_json::to_string_pretty(records)?;
    json.push('\n');
    std::fs::write(&json_path, json).map_err(io(&json_path))?;
    Ok(())
}
