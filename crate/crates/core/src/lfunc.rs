//! Degree-`d` L-function instances: conductor, local parameters `κⱼ` at
//! infinity and an optional oracle for the Dirichlet coefficients at prime
//! powers.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::consts::PI;
use crate::dirichlet::{character, DirichletCharacter};
use crate::error::{Error, Result};

/// A local parameter `κⱼ`. Factory-built instances keep exact rationals so
/// that `κ = 0` is detected without a tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalParam {
    Rational(Ratio<i64>),
    Complex(Complex64),
}

impl LocalParam {
    pub fn value(&self) -> Complex64 {
        match *self {
            LocalParam::Rational(r) => Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
            LocalParam::Complex(z) => z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LocalParam::Rational(r) => *r.numer() == 0,
            LocalParam::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }
}

impl From<Complex64> for LocalParam {
    fn from(z: Complex64) -> Self {
        LocalParam::Complex(z)
    }
}

impl From<Ratio<i64>> for LocalParam {
    fn from(r: Ratio<i64>) -> Self {
        LocalParam::Rational(r)
    }
}

/// Satake parameters `α_{j}(p)` at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeLocal {
    prime: u64,
    alphas: Vec<Complex64>,
}

impl SatakeLocal {
    pub fn new(prime: u64, alphas: Vec<Complex64>) -> Result<Self> {
        if prime < 2 {
            return Err(Error::InvalidInstance(format!("{prime} is not a prime")));
        }
        if let Some(a) = alphas.iter().find(|a| !(a.norm() <= 1.0)) {
            return Err(Error::InvalidInstance(format!(
                "Satake parameter {a} at p = {prime} has modulus > 1"
            )));
        }
        Ok(Self { prime, alphas })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// `a(p^k) = Σⱼ αⱼ^k`.
    pub fn coefficient(&self, k: u32) -> Complex64 {
        self.alphas.iter().map(|a| a.powu(k)).sum()
    }
}

/// Source of `a_f(p^k)`.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffOracle {
    /// `a(p^k) = χ(p)^k`.
    Dirichlet(DirichletCharacter),
    /// Satake parameters for every prime up to `support`; coefficients at
    /// larger primes are unknown.
    Satake {
        locals: BTreeMap<u64, SatakeLocal>,
        support: u64,
    },
}

impl CoeffOracle {
    /// `None` when `p` lies beyond the oracle's support.
    pub fn coefficient(&self, p: u64, k: u32) -> Option<Complex64> {
        match self {
            CoeffOracle::Dirichlet(chi) => {
                let v = chi.value(p);
                Some(if k == 1 { v } else { v.powu(k) })
            }
            CoeffOracle::Satake { locals, support } => {
                if p > *support {
                    None
                } else {
                    locals.get(&p).map(|l| l.coefficient(k))
                }
            }
        }
    }

    /// Largest `p` with a known coefficient, `None` if unbounded.
    pub fn support(&self) -> Option<u64> {
        match self {
            CoeffOracle::Dirichlet(_) => None,
            CoeffOracle::Satake { support, .. } => Some(*support),
        }
    }

    pub fn covers(&self, x: f64) -> bool {
        self.support().is_none_or(|s| x.floor() <= s as f64)
    }
}

/// A degree-`d` L-function as seen by the bounds: `q`, `κ₁..κ_d` and
/// optionally its coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LFunctionInstance {
    label: String,
    conductor: u64,
    local_params: Vec<LocalParam>,
    oracle: Option<CoeffOracle>,
}

impl LFunctionInstance {
    pub fn new(
        label: impl Into<String>,
        degree: usize,
        conductor: u64,
        local_params: Vec<LocalParam>,
        oracle: Option<CoeffOracle>,
    ) -> Result<Self> {
        let label = label.into();
        if degree == 0 {
            return Err(Error::InvalidInstance("degree must be at least 1".into()));
        }
        if conductor == 0 {
            return Err(Error::InvalidInstance("conductor must be at least 1".into()));
        }
        if local_params.len() != degree {
            return Err(Error::InvalidInstance(format!(
                "degree {degree} needs {degree} local parameters, got {}",
                local_params.len()
            )));
        }
        if let Some(k) = local_params.iter().map(LocalParam::value).find(|k| !(k.re >= 0.0) || !k.im.is_finite()) {
            return Err(Error::InvalidInstance(format!("local parameter {k} has negative real part")));
        }
        if let Some(CoeffOracle::Satake { locals, .. }) = &oracle {
            if let Some(l) = locals.values().find(|l| l.alphas.len() != degree) {
                return Err(Error::InvalidInstance(format!(
                    "{} Satake parameters at p = {} for degree {degree}",
                    l.alphas.len(),
                    l.prime
                )));
            }
        }
        Ok(Self { label, conductor, local_params, oracle })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.local_params.len()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn local_params(&self) -> &[LocalParam] {
        &self.local_params
    }

    pub fn kappas(&self) -> Vec<Complex64> {
        self.local_params.iter().map(LocalParam::value).collect()
    }

    pub fn oracle(&self) -> Option<&CoeffOracle> {
        self.oracle.as_ref()
    }

    /// `l(f)`: the number of `κⱼ` exactly equal to zero.
    pub fn zero_param_count(&self) -> usize {
        self.local_params.iter().filter(|k| k.is_zero()).count()
    }

    /// `C(f, s) = q/π^d ∏ⱼ |(s + κⱼ)/2|`.
    pub fn analytic_conductor(&self, s: Complex64) -> f64 {
        let prod: f64 = self.kappas().iter().map(|k| ((s + k) / 2.0).norm()).product();
        self.conductor as f64 / PI.powi(self.degree() as i32) * prod
    }

    /// `C_t(f) = C(f, 1 + it)`.
    pub fn t_aspect_conductor(&self, t: f64) -> f64 {
        self.analytic_conductor(Complex64::new(1.0, t))
    }

    /// `a_f(p^k)`, `None` without an oracle or beyond its support.
    pub fn coefficient(&self, p: u64, k: u32) -> Option<Complex64> {
        self.oracle.as_ref()?.coefficient(p, k)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&InstanceJson::from_instance(self)?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<InstanceJson>(text)?.into_instance()
    }
}

impl fmt::Display for LFunctionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (d = {}, q = {})", self.label, self.degree(), self.conductor)
    }
}

/// The L-function of a primitive non-principal character: `d = 1`,
/// `κ = 𝔞` (the parity), `a(p^k) = χ(p)^k`.
pub fn dirichlet_instance(chi: &DirichletCharacter) -> Result<LFunctionInstance> {
    if chi.is_principal() {
        return Err(Error::InvalidCharacter(format!("{} is principal", chi.label())));
    }
    if !chi.is_primitive() {
        return Err(Error::InvalidCharacter(format!(
            "{} is induced from conductor {}",
            chi.label(),
            chi.conductor()
        )));
    }
    LFunctionInstance::new(
        chi.label(),
        1,
        chi.modulus(),
        vec![LocalParam::Rational(Ratio::from_integer(chi.parity() as i64))],
        Some(CoeffOracle::Dirichlet(chi.clone())),
    )
}

/// A holomorphic Hecke cusp form of weight `k` and level `q`:
/// `d = 2`, `κ = {(k−1)/2, (k+1)/2}`, no coefficient oracle.
pub fn hecke_instance(k: u32, q: u64) -> Result<LFunctionInstance> {
    if k == 0 {
        return Err(Error::InvalidInstance("weight must be at least 1".into()));
    }
    let k = k as i64;
    LFunctionInstance::new(
        format!("hecke:{k}:{q}"),
        2,
        q,
        vec![
            LocalParam::Rational(Ratio::new(k - 1, 2)),
            LocalParam::Rational(Ratio::new(k + 1, 2)),
        ],
        None,
    )
}

#[derive(Serialize, Deserialize)]
struct KappaJson {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    label: String,
    d: usize,
    q: u64,
    kappas: Vec<KappaJson>,
    oracle: String,
}

impl InstanceJson {
    fn from_instance(inst: &LFunctionInstance) -> Result<Self> {
        let oracle = match &inst.oracle {
            None => "none".to_string(),
            Some(CoeffOracle::Dirichlet(chi)) => chi.label(),
            Some(CoeffOracle::Satake { .. }) => {
                return Err(Error::InvalidInstance(
                    "Satake oracles have no JSON representation".into(),
                ))
            }
        };
        Ok(Self {
            label: inst.label.clone(),
            d: inst.degree(),
            q: inst.conductor,
            kappas: inst.kappas().into_iter().map(|k| KappaJson { re: k.re, im: k.im }).collect(),
            oracle,
        })
    }

    fn into_instance(self) -> Result<LFunctionInstance> {
        let oracle = match self.oracle.as_str() {
            "none" => None,
            s => {
                let parts: Vec<&str> = s.split(':').collect();
                let parse = |t: &str| {
                    t.parse::<u64>()
                        .map_err(|_| Error::InvalidInstance(format!("bad oracle label {s:?}")))
                };
                match parts.as_slice() {
                    ["dirichlet", q, idx] => {
                        let chi = character(parse(q)?, parse(idx)?)?;
                        let inst = dirichlet_instance(&chi)?;
                        let kappa_ok = self.kappas.len() == 1
                            && self.kappas[0].re == chi.parity() as f64
                            && self.kappas[0].im == 0.0;
                        if self.d != 1 || self.q != chi.modulus() || !kappa_ok {
                            return Err(Error::InvalidInstance(format!(
                                "fields do not match oracle {s}"
                            )));
                        }
                        return Ok(LFunctionInstance { label: self.label, ..inst });
                    }
                    _ => return Err(Error::InvalidInstance(format!("bad oracle label {s:?}"))),
                }
            }
        };
        let params = self
            .kappas
            .into_iter()
            .map(|k| LocalParam::Complex(Complex64::new(k.re, k.im)))
            .collect();
        LFunctionInstance::new(self.label, self.d, self.q, params, oracle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::enumerate_characters;
    use proptest::prelude::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn conductor_examples() {
        let chi4 = character(4, 1).unwrap();
        let inst = dirichlet_instance(&chi4).unwrap();
        assert_eq!((inst.degree(), inst.conductor(), inst.kappas()[0]), (1, 4, one()));
        assert!((inst.analytic_conductor(one()) - 4.0 / PI).abs() < 1e-15);

        let h = hecke_instance(12, 1).unwrap();
        assert_eq!(h.kappas(), vec![Complex64::new(5.5, 0.0), Complex64::new(6.5, 0.0)]);
        assert!((h.analytic_conductor(one()) - 3.25 * 3.75 / (PI * PI)).abs() < 1e-14);

        let h = hecke_instance(2, 11).unwrap();
        assert!((h.analytic_conductor(one()) - 11.0 * 0.75 * 1.25 / (PI * PI)).abs() < 1e-14);
        assert_eq!(hecke_instance(1, 23).unwrap().zero_param_count(), 1);
        assert!(hecke_instance(0, 1).is_err());
    }

    #[test]
    fn even_characters_give_q_over_two_pi() {
        for q in 3..=60 {
            for chi in enumerate_characters(q, true).unwrap() {
                if chi.is_principal() {
                    continue;
                }
                let inst = dirichlet_instance(&chi).unwrap();
                assert_eq!(inst.kappas()[0].re, chi.parity() as f64);
                if chi.parity() == 0 {
                    assert_eq!(inst.zero_param_count(), 1);
                    let c = inst.analytic_conductor(one());
                    assert!((c - q as f64 / (2.0 * PI)).abs() < 1e-13 * c);
                }
            }
        }
    }

    #[test]
    fn dirichlet_oracle_coefficients() {
        let chi = character(15, 3).unwrap();
        if chi.is_primitive() {
            let inst = dirichlet_instance(&chi).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13] {
                for k in 1..4 {
                    let a = inst.coefficient(p, k).unwrap().norm();
                    let expect = if 15 % p == 0 { 0.0 } else { 1.0 };
                    assert!((a - expect).abs() < 1e-14);
                }
            }
        }
        assert!(dirichlet_instance(&character(3, 0).unwrap()).is_err());
        // the only non-principal character mod 6 is induced from mod 3
        assert!(dirichlet_instance(&character(6, 1).unwrap()).is_err());
    }

    #[test]
    fn t_aspect_example() {
        let inst = LFunctionInstance::new("zeta", 1, 1, vec![Complex64::new(0.0, 0.0).into()], None).unwrap();
        assert!((inst.t_aspect_conductor(2.0) - 5f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(inst.t_aspect_conductor(0.0), inst.analytic_conductor(one()));
    }

    #[test]
    fn validation() {
        let neg = vec![LocalParam::Complex(Complex64::new(-0.5, 0.0))];
        assert!(LFunctionInstance::new("x", 1, 1, neg, None).is_err());
        let two = vec![LocalParam::Complex(one()), LocalParam::Complex(one())];
        assert!(LFunctionInstance::new("x", 1, 1, two, None).is_err());
        assert!(LFunctionInstance::new("x", 0, 1, vec![], None).is_err());
        assert!(LFunctionInstance::new("x", 1, 0, vec![one().into()], None).is_err());
        assert!(SatakeLocal::new(2, vec![Complex64::new(1.0, 0.1)]).is_err());
    }

    #[test]
    fn satake_oracle() {
        let alpha = Complex64::from_polar(1.0, 0.3);
        let local = SatakeLocal::new(2, vec![alpha, alpha.conj()]).unwrap();
        let locals = BTreeMap::from([(2, local)]);
        let oracle = CoeffOracle::Satake { locals, support: 3 };
        let c = oracle.coefficient(2, 3).unwrap();
        assert!((c.re - 2.0 * 0.9f64.cos()).abs() < 1e-14 && c.im.abs() < 1e-14);
        assert_eq!(oracle.coefficient(5, 1), None);
        assert!(oracle.covers(3.9) && !oracle.covers(4.0));
    }

    #[test]
    fn json_round_trip() {
        let chi = enumerate_characters(8, true).unwrap().into_iter().find(|c| c.parity() == 0).unwrap();
        let inst = dirichlet_instance(&chi).unwrap();
        let text = inst.to_json().unwrap();
        assert_eq!(
            text,
            format!(r#"{{"label":"{0}","d":1,"q":8,"kappas":[{{"re":0.0,"im":0.0}}],"oracle":"{0}"}}"#, chi.label())
        );
        let back = LFunctionInstance::from_json(&text).unwrap();
        assert_eq!(back, inst);

        let h = hecke_instance(12, 1).unwrap();
        let back = LFunctionInstance::from_json(&h.to_json().unwrap()).unwrap();
        assert_eq!(back.kappas(), h.kappas());
        assert!(back.oracle().is_none());

        let bad = r#"{"label":"x","d":1,"q":5,"kappas":[{"re":0.0,"im":0.0}],"oracle":"dirichlet:8:1"}"#;
        assert!(LFunctionInstance::from_json(bad).is_err());
    }

    fn kappa() -> impl Strategy<Value = Complex64> {
        (0.0..20.0f64, -50.0..50.0f64).prop_map(|(re, im)| Complex64::new(re, im))
    }

    fn instance() -> impl Strategy<Value = LFunctionInstance> {
        (1u64..10_000, prop::collection::vec(kappa(), 1..5)).prop_map(|(q, ks)| {
            let d = ks.len();
            LFunctionInstance::new("random", d, q, ks.into_iter().map(Into::into).collect(), None).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn t_aspect_is_conductor_on_the_one_line(inst in instance(), t in -1e4..1e4f64) {
            prop_assert_eq!(inst.t_aspect_conductor(t), inst.analytic_conductor(Complex64::new(1.0, t)));
        }

        #[test]
        fn conductor_is_multiplicative(a in instance(), b in instance(), s_im in -100.0..100.0f64) {
            let mut params = a.local_params().to_vec();
            params.extend_from_slice(b.local_params());
            let joint = LFunctionInstance::new("joint", params.len(), a.conductor() * b.conductor(), params, None).unwrap();
            let s = Complex64::new(1.0, s_im);
            let lhs = joint.analytic_conductor(s);
            let rhs = a.analytic_conductor(s) * b.analytic_conductor(s);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn negative_real_part_rejected(re in -10.0..-1e-9f64, im in -10.0..10.0f64) {
            let p = vec![LocalParam::Complex(Complex64::new(re, im))];
            prop_assert!(LFunctionInstance::new("bad", 1, 1, p, None).is_err());
        }
    }
}
