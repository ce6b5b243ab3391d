//! Shared mathematical constants, fixed at 30 significant digits so that
//! every module sees bit-identical `f64` values.

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;
pub const PI: f64 = std::f64::consts::PI;
pub const LN_2: f64 = std::f64::consts::LN_2;
pub const LN_3: f64 = 1.09861228866810969139524523692;
pub const LN_PI: f64 = 1.14472988584940017414342735135;
pub const LN_2PI: f64 = 1.83787706640934548356065947281;
/// `e^γ`.
pub const EXP_GAMMA: f64 = 1.78107241799019798523650410311;
/// `12 e^γ / π²`, the per-degree factor of the reciprocal bound.
pub const LOWER_LEAD: f64 = 2.16552438652184916024437607638;
/// `log ζ(2) = log(π²/6)`.
pub const LN_ZETA2: f64 = 0.497700302470745347474377344325;
pub const SQRT_3: f64 = 1.73205080756887729352744634151;

/// `B = ½ log(4π) − 1 − γ/2`, minus the sum of `Re 1/ρ` over the
/// nontrivial zeros of ζ.
pub const ZETA_B: f64 = -0.0230957089661210338143102479065;

/// `2 e^γ`, the per-degree factor of the upper bound.
pub const UPPER_LEAD: f64 = 2.0 * EXP_GAMMA;
