//! Non-negative reals with an extended binary exponent.
//!
//! Products of many eigenvalues (`λ^N` for `N` in the hundreds or thousands)
//! leave the `f64` range long before they stop mattering relative to each
//! other. `ScaledReal` keeps a mantissa in `[1, 2)` and an `i64` exponent so
//! the complete homogeneous polynomial recurrence never underflows.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    exponent: i64,
}

const EXP_BIAS: i64 = 1023;
const MANTISSA_MASK: u64 = (1 << 52) - 1;

/// Splits a finite positive `x` into `(m, e)` with `m` in `[1, 2)`.
fn split(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let (x, shift) = if x < f64::MIN_POSITIVE {
        (x * 2f64.powi(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - EXP_BIAS;
    let m = f64::from_bits((bits & MANTISSA_MASK) | ((EXP_BIAS as u64) << 52));
    (m, e + shift)
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: ScaledReal = ScaledReal {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Panics on negative or non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(
            x.is_finite() && x >= 0.0,
            "ScaledReal holds finite non-negative values, got {x}"
        );
        if x == 0.0 {
            return Self::ZERO;
        }
        let (mantissa, exponent) = split(x);
        ScaledReal { mantissa, exponent }
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    fn renormalize(mantissa: f64, exponent: i64) -> Self {
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = split(mantissa);
        ScaledReal {
            mantissa: m,
            exponent: exponent + e,
        }
    }

    /// Nearest `f64`; flushes to zero or saturates to infinity out of range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exponent > 1023 {
            return f64::INFINITY;
        }
        if self.exponent < -1074 {
            return 0.0;
        }
        // two steps keep subnormal results exact
        let half = self.exponent / 2;
        self.mantissa * 2f64.powi(half as i32) * 2f64.powi((self.exponent - half) as i32)
    }

    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exponent as f64 + self.mantissa.log2()
    }

    pub fn ln(&self) -> f64 {
        self.log2() * std::f64::consts::LN_2
    }

    pub fn log10(&self) -> f64 {
        self.log2() * std::f64::consts::LOG10_2
    }

    pub fn scale_by(&self, factor: f64) -> Self {
        *self * ScaledReal::from_f64(factor)
    }
}

impl Default for ScaledReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for ScaledReal {
    fn from(x: f64) -> Self {
        ScaledReal::from_f64(x)
    }
}

impl Mul for ScaledReal {
    type Output = ScaledReal;

    fn mul(self, rhs: ScaledReal) -> ScaledReal {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::renormalize(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl MulAssign for ScaledReal {
    fn mul_assign(&mut self, rhs: ScaledReal) {
        *self = *self * rhs;
    }
}

impl Add for ScaledReal {
    type Output = ScaledReal;

    fn add(self, rhs: ScaledReal) -> ScaledReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent - small.exponent;
        if gap > 60 {
            return big;
        }
        let m = big.mantissa + small.mantissa * 2f64.powi(-(gap as i32));
        Self::renormalize(m, big.exponent)
    }
}

impl AddAssign for ScaledReal {
    fn add_assign(&mut self, rhs: ScaledReal) {
        *self = *self + rhs;
    }
}

impl PartialOrd for ScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => Some(
                self.exponent
                    .cmp(&other.exponent)
                    .then(self.mantissa.partial_cmp(&other.mantissa)?),
            ),
        }
    }
}

impl fmt::Display for ScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let l10 = self.log10();
        let e = l10.floor();
        write!(f, "{:.6}e{}", 10f64.powf(l10 - e), e as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(ScaledReal::ZERO.is_zero());
        assert_eq!(ScaledReal::ONE.to_f64(), 1.0);
        assert_eq!((ScaledReal::ZERO * ScaledReal::ONE).to_f64(), 0.0);
        assert_eq!(ScaledReal::from_f64(0.0), ScaledReal::ZERO);
    }

    #[test]
    fn mantissa_range() {
        for x in [1e-310, 3e-200, 0.75, 1.0, 1.5, 2.0, 7.0e100] {
            let s = ScaledReal::from_f64(x);
            assert!((1.0..2.0).contains(&s.mantissa()), "{x}: {s:?}");
            assert_eq!(s.to_f64(), x);
        }
    }

    #[test]
    fn deep_underflow_keeps_logarithm() {
        let half = ScaledReal::from_f64(0.5);
        let mut acc = ScaledReal::ONE;
        for _ in 0..5000 {
            acc *= half;
        }
        assert_eq!(acc.exponent(), -5000);
        assert_eq!(acc.to_f64(), 0.0);
        assert_relative_eq!(acc.log2(), -5000.0);
    }

    #[test]
    fn addition_across_scales() {
        let a = ScaledReal::from_f64(1.0);
        let b = ScaledReal::from_f64(1e-30);
        assert_eq!((a + b).to_f64(), 1.0);
        let c = ScaledReal::from_f64(3.0) + ScaledReal::from_f64(5.0);
        assert_eq!(c.to_f64(), 8.0);
    }

    #[test]
    fn ordering() {
        assert!(ScaledReal::from_f64(1e-300) < ScaledReal::from_f64(1e-299));
        assert!(ScaledReal::ZERO < ScaledReal::from_f64(1e-320));
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(a in 1e-100f64..1e100, b in 1e-100f64..1e100) {
            let (sa, sb) = (ScaledReal::from_f64(a), ScaledReal::from_f64(b));
            prop_assert!(((sa * sb).to_f64() / (a * b) - 1.0).abs() < 1e-15);
            prop_assert!(((sa + sb).to_f64() / (a + b) - 1.0).abs() < 1e-15);
        }
    }
}
