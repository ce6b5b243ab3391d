use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{domain, Result};

/// A closed interval `[lo, hi]` of reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    /// `[c − r, c + r]` for `r ≥ 0`.
    pub fn centered(c: f64, r: f64) -> Self {
        let r = r.abs();
        Self { lo: c - r, hi: c + r }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn widen(self, r: f64) -> Self {
        let r = r.abs();
        Self { lo: self.lo - r, hi: self.hi + r }
    }

    pub fn scale(self, c: f64) -> Self {
        if c >= 0.0 {
            Self { lo: c * self.lo, hi: c * self.hi }
        } else {
            Self { lo: c * self.hi, hi: c * self.lo }
        }
    }

    pub fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Self {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `self / o` for an interval `o` of strictly positive numbers.
    pub fn div_positive(self, o: Self) -> Result<Self> {
        if !(o.lo > 0.0) {
            return Err(domain(format!("divisor {o} is not strictly positive")));
        }
        Ok(self.mul(Self { lo: 1.0 / o.hi, hi: 1.0 / o.lo }))
    }

    /// Union hull of two intervals.
    pub fn hull(self, o: Self) -> Self {
        Self { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn intersect(self, o: Self) -> Option<Self> {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        let a = Interval::new(-1.0, 2.0).unwrap();
        assert_eq!(a.scale(-2.0), Interval::new(-4.0, 2.0).unwrap());
        assert_eq!(-a, Interval::new(-2.0, 1.0).unwrap());
        assert_eq!(a.mul(a), Interval::new(-2.0, 4.0).unwrap());
        let d = a.div_positive(Interval::new(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(d, Interval::new(-2.0, 4.0).unwrap());
        assert!(a.div_positive(a).is_err());
        assert_eq!(a.intersect(Interval::new(3.0, 4.0).unwrap()), None);
        assert!(Interval::centered(1.0, -0.5).contains(1.5));
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_pointwise(a in -10.0..10.0f64, b in -10.0..10.0f64, ra in 0.0..3.0f64, rb in 0.0..3.0f64, s in -1.0..1.0f64, t in -1.0..1.0f64) {
            let x = Interval::centered(a, ra);
            let y = Interval::centered(b, rb);
            let (p, q) = (a + s * ra, b + t * rb);
            prop_assert!((x + y).widen(1e-12).contains(p + q));
            prop_assert!((x - y).widen(1e-12).contains(p - q));
            prop_assert!(x.mul(y).widen(1e-9).contains(p * q));
            prop_assert!(x.lo() <= x.hi());
        }
    }
}
