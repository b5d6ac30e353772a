//! Fourier transform of monomials restricted to the unit sphere.
//!
//! The transform of the surface measure itself is (2pi)^{n/2}
//! Psi_{(n-2)/2}(xi); pulling a factor x_j down from the kernel e^{-i x.xi}
//! costs one derivative and one factor of i, so
//!
//! ```text
//! \int x^alpha e^{-i x.xi} dsigma(x)
//!     = i^{|alpha|} d^alpha [ (2pi)^{n/2} Psi_{(n-2)/2}(xi) ]
//! ```
//!
//! which [`transform_exact`] evaluates through the exact [`PsiField`]
//! calculus. [`leading_term`] produces the structured small-|xi| leading
//! form, and [`transform_at_zero`] the xi -> 0 limit, which reproduces the
//! closed-form sphere integrals.
//!
//! i-powers are tracked as integers mod 4 throughout, never as floating
//! phases, so the realness/imaginarity of results is exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::One;

use crate::closed_form::ClosedFormValue;
use crate::error::{Error, Result};
use crate::index::IntMultiIndex;
use crate::logsigned::LogSigned;
use crate::psi_calculus::{PsiField, MAX_DERIVATIVE_ORDER};
use crate::rational::{double_factorial as df_exact, rational_to_f64, Rational};
use crate::specfun::{log_gamma, psi};

/// Even/odd split of a multi-index: alpha = alpha_even + alpha_odd, where
/// alpha_odd keeps exactly the odd entries, plus the count mu of odd
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityDecomposition {
    pub alpha: IntMultiIndex,
    pub alpha_odd: IntMultiIndex,
    pub alpha_even: IntMultiIndex,
    pub mu_odd: u32,
}

impl ParityDecomposition {
    pub fn new(alpha: &IntMultiIndex) -> Self {
        let odd: Vec<u32> = alpha
            .alpha()
            .iter()
            .map(|&a| if a % 2 == 1 { a } else { 0 })
            .collect();
        let even: Vec<u32> = alpha
            .alpha()
            .iter()
            .zip(&odd)
            .map(|(&a, &o)| a - o)
            .collect();
        let mu_odd = odd.iter().filter(|&&o| o != 0).count() as u32;
        Self {
            alpha: alpha.clone(),
            alpha_odd: IntMultiIndex::new(odd).expect("same dim"),
            alpha_even: IntMultiIndex::new(even).expect("same dim"),
            mu_odd,
        }
    }
}

/// i^q as an exact complex unit, q taken mod 4.
fn i_power(q: u64) -> Complex64 {
    match q % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Exact transform of x^alpha restricted to the sphere, at frequency xi
/// (|xi| <= 30, total derivative order |alpha| <= 64).
///
/// The result is purely real when the number of odd exponents is even and
/// purely imaginary when it is odd; the vanishing part is an exact zero.
pub fn transform_exact(alpha: &IntMultiIndex, xi: &[f64]) -> Result<Complex64> {
    let n = alpha.dim();
    if xi.len() != n {
        return Err(Error::CoordinateOutOfRange {
            index: xi.len(),
            dim: n,
        });
    }
    let order = alpha.total();
    if order > MAX_DERIVATIVE_ORDER as u64 {
        return Err(Error::DerivativeOrderTooLarge(
            order as u32,
            MAX_DERIVATIVE_ORDER,
        ));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let mut field = PsiField::psi(nu, n)?;
    for (axis, &a) in alpha.alpha().iter().enumerate() {
        for _ in 0..a {
            field = field.partial_derivative(axis)?;
        }
    }
    let scale = (n as f64 / 2.0) * (2.0 * PI).ln();
    let real_part = scale.exp() * field.evaluate(xi)?;
    Ok(i_power(order) * real_part)
}

/// Structured leading term of the small-|xi| expansion:
/// scalar * (-i)^{mu} * prod_{odd m} xi_m * Psi_{order}(|xi|), where the
/// scalar is (2pi)^{n/2} prod (alpha^e_m - 1)!! prod alpha^o_m!! and
/// order = (n + |alpha| + mu - 2)/2. The difference from the exact
/// transform is o(|xi|).
#[derive(Clone, Debug)]
pub struct LeadingTerm {
    /// Exact product of the double factorials (integer-valued).
    pub double_factorial_scalar: Rational,
    /// Full scalar including (2pi)^{n/2}, in log space.
    pub scalar: LogSigned,
    /// mu(alpha^o): the power of the imaginary unit carried by the term
    /// (each odd coordinate contributes one factor -i xi_m).
    pub imaginary_power: u32,
    /// One power of xi_m per odd coordinate.
    pub xi_monomial: IntMultiIndex,
    /// Order of the accompanying Psi factor.
    pub psi_order: f64,
}

impl LeadingTerm {
    /// Numeric value at xi.
    pub fn evaluate(&self, xi: &[f64]) -> Result<Complex64> {
        let radius = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut mag = self.scalar.to_f64() * psi(self.psi_order, radius)?;
        for (j, &g) in self.xi_monomial.alpha().iter().enumerate() {
            if g > 0 {
                mag *= xi[j].powi(g as i32);
            }
        }
        // (-i)^mu = i^{3 mu}
        Ok(i_power(3 * self.imaginary_power as u64) * mag)
    }

    /// Canonical rendering, e.g.
    /// `(2π)^{3/2}·3·(-i)^1·ξ1·Ψ[5/2]`.
    pub fn render(&self, dim: usize) -> String {
        let mut out = format!("(2π)^{{{}/2}}", dim);
        if !self.double_factorial_scalar.is_one() {
            out.push_str(&format!("·{}", self.double_factorial_scalar.numer()));
        }
        if self.imaginary_power > 0 {
            out.push_str(&format!("·(-i)^{}", self.imaginary_power));
            for (j, &g) in self.xi_monomial.alpha().iter().enumerate() {
                if g > 0 {
                    out.push_str(&format!("·ξ{}", j + 1));
                }
            }
        }
        let doubled = (2.0 * self.psi_order).round() as i64;
        if doubled % 2 == 0 {
            out.push_str(&format!("·Ψ[{}]", doubled / 2));
        } else {
            out.push_str(&format!("·Ψ[{}/2]", doubled));
        }
        out
    }
}

/// Leading term of the transform of x^alpha.
pub fn leading_term(alpha: &IntMultiIndex) -> LeadingTerm {
    let n = alpha.dim();
    let parity = ParityDecomposition::new(alpha);
    let mut scalar_exact = Rational::one();
    for &a in parity.alpha_even.alpha() {
        if a != 0 {
            scalar_exact *= Rational::from_integer(df_exact(a as i64 - 1));
        }
    }
    for &o in parity.alpha_odd.alpha() {
        if o != 0 {
            scalar_exact *= Rational::from_integer(df_exact(o as i64));
        }
    }
    let log_scalar =
        (n as f64 / 2.0) * (2.0 * PI).ln() + rational_to_f64(&scalar_exact).ln();
    let xi_monomial = IntMultiIndex::new(
        parity
            .alpha_odd
            .alpha()
            .iter()
            .map(|&o| u32::from(o != 0))
            .collect(),
    )
    .expect("same dim");
    let psi_order =
        (n as f64 + alpha.total() as f64 + parity.mu_odd as f64 - 2.0) / 2.0;
    LeadingTerm {
        double_factorial_scalar: scalar_exact,
        scalar: LogSigned::positive_ln(log_scalar),
        imaginary_power: parity.mu_odd,
        xi_monomial,
        psi_order,
    }
}

/// The xi -> 0 limit of the transform: zero when any exponent is odd,
/// otherwise (2pi)^{n/2} 2^{-(n+|alpha|-2)/2} prod (alpha_m - 1)!!
/// / Gamma((n+|alpha|)/2) -- the closed-form sphere integral again.
pub fn transform_at_zero(alpha: &IntMultiIndex) -> Result<ClosedFormValue> {
    let parity = ParityDecomposition::new(alpha);
    if parity.mu_odd != 0 {
        return Ok(ClosedFormValue::from_log(LogSigned::ZERO));
    }
    let n = alpha.dim() as f64;
    let total = alpha.total() as f64;
    let mut log = (n / 2.0) * (2.0 * PI).ln()
        - 0.5 * (n + total - 2.0) * std::f64::consts::LN_2
        - log_gamma((n + total) / 2.0)?;
    for a in alpha.sorted() {
        if a != 0 {
            log += crate::specfun::double_factorial(a as i64 - 1)?.ln_abs();
        }
    }
    Ok(ClosedFormValue::from_log(LogSigned::positive_ln(log)))
}
