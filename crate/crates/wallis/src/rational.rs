//! Exact integer and rational helpers built on arbitrary precision arithmetic.
//!
//! `Rational` (an alias for `Ratio<BigInt>`) is always kept in lowest terms
//! with a positive denominator, which is exactly the invariant the exact
//! layers (number sequences, symbolic coefficients, series coefficients)
//! rely on.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number: arbitrary-precision numerator and positive
/// arbitrary-precision denominator, stored in lowest terms.
pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair (reduced on construction).
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=n as u64 {
        acc *= j;
    }
    acc
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// k!! as a big integer, with (-1)!! = 0!! = 1.
pub fn double_factorial(k: i64) -> BigInt {
    assert!(k >= -1, "double factorial needs k >= -1, got {k}");
    let mut acc = BigInt::one();
    let mut j = k;
    while j >= 2 {
        acc *= j;
        j -= 2;
    }
    acc
}

/// Convert a rational to f64 without overflowing on huge numerators or
/// denominators: both sides are shifted down to ~64 significant bits and the
/// lost exponent is reapplied at the end.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let nbits = numer.bits() as i64;
    let dbits = denom.bits() as i64;
    let nshift = (nbits - 64).max(0);
    let dshift = (dbits - 64).max(0);
    let n = (numer.abs() >> nshift as u64).to_f64().unwrap_or(f64::MAX);
    let d = (denom >> dshift as u64).to_f64().unwrap_or(f64::MAX);
    let mut v = n / d;
    let pow = nshift - dshift;
    // Apply in two halves so a transient step cannot overflow when the
    // final value is representable.
    let half = (pow / 2) as i32;
    v *= 2f64.powi(half);
    v *= 2f64.powi((pow - half as i64) as i32);
    if numer.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}
