//! Sign plus log-magnitude scalar: keeps Gamma-heavy products finite far
//! beyond f64 range.

use std::ops::{Div, Mul, Neg};

/// A real number stored as a sign in {-1, 0, +1} and the natural log of its
/// absolute value. `sign == 0` represents exactly zero; `log_mag` carries no
/// meaning in that case.
#[derive(Clone, Copy, Debug)]
pub struct LogSigned {
    sign: i8,
    log_mag: f64,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: LogSigned = LogSigned {
        sign: 1,
        log_mag: 0.0,
    };

    /// From an ordinary float. Zero maps to the exact-zero representation.
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                log_mag: v.abs().ln(),
            }
        }
    }

    /// From a sign and the natural log of the magnitude.
    pub fn from_sign_ln(sign: i8, log_mag: f64) -> Self {
        assert!(sign == -1 || sign == 0 || sign == 1, "bad sign {sign}");
        if sign == 0 {
            Self::ZERO
        } else {
            Self { sign, log_mag }
        }
    }

    /// Positive value from its natural log.
    pub fn positive_ln(log_mag: f64) -> Self {
        Self { sign: 1, log_mag }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// ln |x|; negative infinity for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    /// Back to f64. Overflows to +/-inf, underflows to 0.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            1 => self.log_mag.exp(),
            _ => -self.log_mag.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            log_mag: self.log_mag,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero LogSigned");
        Self {
            sign: self.sign,
            log_mag: -self.log_mag,
        }
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;
    fn mul(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 || rhs.sign == 0 {
            LogSigned::ZERO
        } else {
            LogSigned {
                sign: self.sign * rhs.sign,
                log_mag: self.log_mag + rhs.log_mag,
            }
        }
    }
}

impl Div for LogSigned {
    type Output = LogSigned;
    fn div(self, rhs: LogSigned) -> LogSigned {
        assert!(rhs.sign != 0, "division by zero LogSigned");
        if self.sign == 0 {
            LogSigned::ZERO
        } else {
            LogSigned {
                sign: self.sign * rhs.sign,
                log_mag: self.log_mag - rhs.log_mag,
            }
        }
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;
    fn neg(self) -> LogSigned {
        LogSigned {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }
}

impl PartialEq for LogSigned {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.log_mag == other.log_mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(LogSigned::ZERO.is_zero());
        assert_eq!(LogSigned::ZERO.to_f64(), 0.0);
        assert_eq!(LogSigned::ONE.to_f64(), 1.0);
        assert_eq!(LogSigned::from_value(0.0), LogSigned::ZERO);
    }

    #[test]
    fn sign_algebra() {
        let a = LogSigned::from_value(-3.0);
        let b = LogSigned::from_value(2.0);
        assert_eq!((a * b).sign(), -1);
        assert_eq!((a * a).sign(), 1);
        assert_eq!((a / b).sign(), -1);
        assert_eq!((a * LogSigned::ZERO).sign(), 0);
        assert_eq!((-a).sign(), 1);
    }

    proptest! {
        // exp-composition round-trips at ulp scale across the full
        // |log_mag| <= 700 window.
        #[test]
        fn roundtrip(log in -700.0f64..700.0, neg in proptest::bool::ANY) {
            let sign = if neg { -1 } else { 1 };
            let x = LogSigned::from_sign_ln(sign, log);
            let back = LogSigned::from_value(x.to_f64());
            prop_assert_eq!(back.sign(), sign);
            let rel = (back.ln_abs() - log).abs() / log.abs().max(1.0);
            prop_assert!(rel < 1e-15, "rel {} at log {}", rel, log);
        }

        #[test]
        fn mul_matches_f64(a in -200.0f64..200.0, b in -200.0f64..200.0) {
            let x = LogSigned::from_sign_ln(1, a);
            let y = LogSigned::from_sign_ln(-1, b);
            let prod = (x * y).to_f64();
            let expect = -(a + b).exp();
            prop_assert!((prod - expect).abs() <= 1e-12 * expect.abs());
        }
    }
}
