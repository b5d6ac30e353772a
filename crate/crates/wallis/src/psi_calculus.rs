//! Exact symbolic differentiation of the Bessel quotient Psi_nu.
//!
//! Repeated application of the rewrite rule d/dt[t^p Psi_{nu+j}] =
//! p t^{p-1} Psi_{nu+j} - t^{p+1} Psi_{nu+j+1} turns the k-th derivative of
//! Psi_nu into a polynomial in t whose coefficients multiply shifted orders
//! Psi_{nu+j}; [`PsiPoly`] holds that univariate form with exact rational
//! coefficients, [`PsiField`] the multivariate analogue for
//! Psi_nu(xi) = J_nu(|xi|)/|xi|^nu with monomials in xi.
//!
//! The named extractors return the classical coefficient values: the
//! constant term of D^{2k} is (-1)^k (2k-1)!!, the t-term of D^{2k+1} is
//! (-1)^{k+1} (2k+1)!!, and the t^2/t^4 magnitudes are k(2k-1)!! and
//! k(k-1)(2k-1)!!/6. No general coefficient formula is used beyond these:
//! everything else is produced by the rewriting passes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::index::IntMultiIndex;
use crate::rational::{rational_to_f64, Rational};
use crate::specfun::psi;

/// Cap on symbolic derivative order; (2*64-1)!! is still a cheap big
/// integer, anything larger is almost certainly a caller bug.
pub const MAX_DERIVATIVE_ORDER: u32 = 64;

/// Cap on the named coefficient extractors.
pub const MAX_COEFF_INDEX: u32 = 32;

/// One summand coeff * t^power * Psi_{nu+shift}(t).
#[derive(Clone, Debug, PartialEq)]
pub struct PsiTerm {
    pub coeff: Rational,
    pub power: u32,
    pub shift: u32,
}

/// Exact sum of terms coeff * t^power * Psi_{nu+shift}(t), kept sorted by
/// (shift, power) with no duplicates and no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiPoly {
    base_order: f64,
    terms: Vec<PsiTerm>,
}

impl PsiPoly {
    /// The bare function Psi_nu as a one-term polynomial.
    pub fn psi(nu: f64) -> Self {
        Self {
            base_order: nu,
            terms: vec![PsiTerm {
                coeff: Rational::one(),
                power: 0,
                shift: 0,
            }],
        }
    }

    pub fn base_order(&self) -> f64 {
        self.base_order
    }

    pub fn terms(&self) -> &[PsiTerm] {
        &self.terms
    }

    /// Signed coefficient at (power, shift); zero when absent.
    pub fn coefficient(&self, power: u32, shift: u32) -> Rational {
        self.terms
            .iter()
            .find(|t| t.power == power && t.shift == shift)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn normalize(base_order: f64, raw: Vec<PsiTerm>) -> Self {
        let mut merged: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for t in raw {
            *merged
                .entry((t.shift, t.power))
                .or_insert_with(Rational::zero) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((shift, power), coeff)| PsiTerm {
                coeff,
                power,
                shift,
            })
            .collect();
        Self { base_order, terms }
    }

    /// One exact rewriting pass of d/dt.
    pub fn differentiate(&self) -> Self {
        let mut raw = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                raw.push(PsiTerm {
                    coeff: t.coeff.clone() * Rational::from_integer(t.power.into()),
                    power: t.power - 1,
                    shift: t.shift,
                });
            }
            raw.push(PsiTerm {
                coeff: -t.coeff.clone(),
                power: t.power + 1,
                shift: t.shift + 1,
            });
        }
        Self::normalize(self.base_order, raw)
    }

    /// Numeric value at t (|t| <= 30, through [`psi`]).
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        // Kahan-compensated accumulation over the terms.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for term in &self.terms {
            let v =
                rational_to_f64(&term.coeff) * t.powi(term.power as i32) * psi(self.base_order + term.shift as f64, t)?;
            let y = v - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        Ok(sum)
    }
}

fn fmt_coeff_mag(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mag = c.abs();
    if mag.denom().is_one() {
        write!(f, "{}", mag.numer())
    } else {
        write!(f, "{}/{}", mag.numer(), mag.denom())
    }
}

impl fmt::Display for PsiPoly {
    /// Canonical rendering, e.g. `3*Ψ[ν+2] - 6*t^2*Ψ[ν+3] + t^4*Ψ[ν+4]`:
    /// terms in (shift, power) order, signs pulled out, unit coefficients
    /// elided in front of a power of t.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !term.coeff.abs().is_one() {
                fmt_coeff_mag(&term.coeff, f)?;
                write!(f, "*")?;
            }
            match term.power {
                0 => {}
                1 => write!(f, "t*")?,
                p => write!(f, "t^{p}*")?,
            }
            if term.shift == 0 {
                write!(f, "Ψ[ν]")?;
            } else {
                write!(f, "Ψ[ν+{}]", term.shift)?;
            }
        }
        Ok(())
    }
}

fn derivative_chain(nu: f64, k: u32) -> PsiPoly {
    let mut poly = PsiPoly::psi(nu);
    for _ in 0..k {
        poly = poly.differentiate();
    }
    poly
}

/// D^k Psi_nu as a [`PsiPoly`], built by k rewriting passes.
pub fn derivative_poly(nu: f64, k: u32) -> Result<PsiPoly> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(Error::DerivativeOrderTooLarge(k, MAX_DERIVATIVE_ORDER));
    }
    Ok(derivative_chain(nu, k))
}

fn check_coeff_index(k: u32, min: u32) -> Result<()> {
    if k < min || k > MAX_COEFF_INDEX {
        return Err(Error::BadIndex {
            value: k as i64,
            constraint: "coefficient index outside supported range",
        });
    }
    Ok(())
}

/// Constant coefficient of D^{2k} Psi_nu: the (power 0, shift k) entry,
/// equal to (-1)^k (2k-1)!!.
pub fn coeff_constant(k: u32) -> Result<Rational> {
    check_coeff_index(k, 1)?;
    Ok(derivative_chain(0.0, 2 * k).coefficient(0, k))
}

/// Coefficient of the t term of D^{2k+1} Psi_nu: the (power 1, shift k+1)
/// entry, equal to (-1)^{k+1} (2k+1)!!.
pub fn coeff_linear(k: u32) -> Result<Rational> {
    check_coeff_index(k, 1)?;
    // 2k+1 can exceed the public derivative cap by one at k = 32; the
    // rewriting chain itself has no such limit
    Ok(derivative_chain(0.0, 2 * k + 1).coefficient(1, k + 1))
}

/// Signed t^2 coefficient of D^{2k} Psi_nu (power 2, shift k+1); its
/// magnitude is k (2k-1)!!.
pub fn coeff_t2(k: u32) -> Result<Rational> {
    check_coeff_index(k, 1)?;
    Ok(derivative_chain(0.0, 2 * k).coefficient(2, k + 1))
}

/// Signed t^4 coefficient of D^{2k} Psi_nu (power 4, shift k+2); its
/// magnitude is k(k-1)(2k-1)!!/6.
pub fn coeff_t4(k: u32) -> Result<Rational> {
    check_coeff_index(k, 2)?;
    Ok(derivative_chain(0.0, 2 * k).coefficient(4, k + 2))
}

/// One summand coeff * xi^monomial * Psi_{nu+shift}(|xi|).
#[derive(Clone, Debug, PartialEq)]
pub struct PsiFieldTerm {
    pub coeff: Rational,
    pub monomial: IntMultiIndex,
    pub shift: u32,
}

/// Exact sum of terms coeff * xi^gamma * Psi_{nu+j}(|xi|) over R^n,
/// canonically ordered with no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiField {
    base_order: f64,
    dim: usize,
    terms: Vec<PsiFieldTerm>,
}

impl PsiField {
    /// The bare radial function Psi_nu(xi) in dimension n >= 3.
    pub fn psi(nu: f64, dim: usize) -> Result<Self> {
        Ok(Self {
            base_order: nu,
            dim,
            terms: vec![PsiFieldTerm {
                coeff: Rational::one(),
                monomial: IntMultiIndex::zeros(dim)?,
                shift: 0,
            }],
        })
    }

    pub fn base_order(&self) -> f64 {
        self.base_order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[PsiFieldTerm] {
        &self.terms
    }

    /// Signed coefficient of xi^monomial Psi_{nu+shift}; zero when absent.
    pub fn coefficient(&self, monomial: &IntMultiIndex, shift: u32) -> Rational {
        self.terms
            .iter()
            .find(|t| &t.monomial == monomial && t.shift == shift)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn normalize(base_order: f64, dim: usize, raw: Vec<PsiFieldTerm>) -> Self {
        let mut merged: BTreeMap<(u32, Vec<u32>), Rational> = BTreeMap::new();
        for t in raw {
            *merged
                .entry((t.shift, t.monomial.alpha().to_vec()))
                .or_insert_with(Rational::zero) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((shift, mono), coeff)| PsiFieldTerm {
                coeff,
                monomial: IntMultiIndex::new(mono).expect("dim preserved"),
                shift,
            })
            .collect();
        Self {
            base_order,
            dim,
            terms,
        }
    }

    /// Exact partial derivative along `axis` (0-based):
    /// d/dxi_j [xi^g Psi_{nu+s}] = g_j xi^{g-e_j} Psi_{nu+s}
    ///                             - xi^{g+e_j} Psi_{nu+s+1}.
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::CoordinateOutOfRange {
                index: axis,
                dim: self.dim,
            });
        }
        let mut raw = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let g = t.monomial.get(axis);
            if g > 0 {
                raw.push(PsiFieldTerm {
                    coeff: t.coeff.clone() * Rational::from_integer(g.into()),
                    monomial: t.monomial.bump(axis, -1),
                    shift: t.shift,
                });
            }
            raw.push(PsiFieldTerm {
                coeff: -t.coeff.clone(),
                monomial: t.monomial.bump(axis, 1),
                shift: t.shift + 1,
            });
        }
        Ok(Self::normalize(self.base_order, self.dim, raw))
    }

    /// Numeric value at xi (needs |xi| <= 30 for [`psi`]).
    pub fn evaluate(&self, xi: &[f64]) -> Result<f64> {
        assert_eq!(xi.len(), self.dim, "dimension mismatch");
        let radius = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for term in &self.terms {
            let mut v = rational_to_f64(&term.coeff)
                * psi(self.base_order + term.shift as f64, radius)?;
            for (j, &g) in term.monomial.alpha().iter().enumerate() {
                if g > 0 {
                    v *= xi[j].powi(g as i32);
                }
            }
            let y = v - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        Ok(sum)
    }
}

impl fmt::Display for PsiField {
    /// Canonical rendering, e.g. `-Ψ[ν+1] + ξ1^2*Ψ[ν+2]` (coordinates are
    /// 1-based in the output).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !term.coeff.abs().is_one() {
                fmt_coeff_mag(&term.coeff, f)?;
                write!(f, "*")?;
            }
            for (j, &g) in term.monomial.alpha().iter().enumerate() {
                match g {
                    0 => {}
                    1 => write!(f, "ξ{}*", j + 1)?,
                    _ => write!(f, "ξ{}^{}*", j + 1, g)?,
                }
            }
            if term.shift == 0 {
                write!(f, "Ψ[ν]")?;
            } else {
                write!(f, "Ψ[ν+{}]", term.shift)?;
            }
        }
        Ok(())
    }
}

/// Free-function form of [`PsiField::partial_derivative`].
pub fn partial_derivative_field(field: &PsiField, axis: usize) -> Result<PsiField> {
    field.partial_derivative(axis)
}

/// Free-function form of [`PsiField::evaluate`].
pub fn evaluate_field(field: &PsiField, xi: &[f64]) -> Result<f64> {
    field.evaluate(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{double_factorial as df, rat_int};
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn golden_low_order_derivatives() {
        let renders: Vec<String> = (1..=5u32)
            .map(|k| derivative_poly(1.0, k).unwrap().to_string())
            .collect();
        assert_eq!(renders[0], "-t*Ψ[ν+1]");
        assert_eq!(renders[1], "-Ψ[ν+1] + t^2*Ψ[ν+2]");
        assert_eq!(renders[2], "3*t*Ψ[ν+2] - t^3*Ψ[ν+3]");
        assert_eq!(renders[3], "3*Ψ[ν+2] - 6*t^2*Ψ[ν+3] + t^4*Ψ[ν+4]");
        assert_eq!(renders[4], "-15*t*Ψ[ν+3] + 10*t^3*Ψ[ν+4] - t^5*Ψ[ν+5]");
    }

    #[test]
    fn golden_exact_coefficients() {
        let d4 = derivative_poly(0.5, 4).unwrap();
        assert_eq!(d4.coefficient(0, 2), rat_int(3));
        assert_eq!(d4.coefficient(2, 3), rat_int(-6));
        assert_eq!(d4.coefficient(4, 4), rat_int(1));
        let d5 = derivative_poly(0.5, 5).unwrap();
        assert_eq!(d5.coefficient(1, 3), rat_int(-15));
        assert_eq!(d5.coefficient(3, 4), rat_int(10));
        assert_eq!(d5.coefficient(5, 5), rat_int(-1));
    }

    #[test]
    fn parity_and_term_count() {
        for k in 0..=40u32 {
            let poly = derivative_poly(2.0, k).unwrap();
            assert_eq!(poly.terms().len() as u32, k / 2 + 1, "term count at k={k}");
            for t in poly.terms() {
                assert_eq!(t.power % 2, k % 2, "power parity at k={k}");
                assert!(t.power <= k);
                assert!(t.shift <= k);
            }
        }
    }

    #[test]
    fn leading_terms_and_alternating_signs() {
        for k in 1..=16u32 {
            let even = derivative_poly(0.0, 2 * k).unwrap();
            assert_eq!(even.coefficient(2 * k, 2 * k), rat_int(1));
            let odd = derivative_poly(0.0, 2 * k + 1).unwrap();
            assert_eq!(odd.coefficient(2 * k + 1, 2 * k + 1), rat_int(-1));
            // signs alternate down the power ladder
            for (i, t) in even.terms().iter().enumerate() {
                let _ = i;
                let j = (t.power / 2) as i64;
                let expect_neg = (k as i64 - j) % 2 == 1;
                assert_eq!(t.coeff.is_negative(), expect_neg, "k={k} power={}", t.power);
            }
        }
    }

    #[test]
    fn recurrence_closure() {
        for k in 0..=12u32 {
            let next = derivative_poly(1.5, k + 1).unwrap();
            let stepped = derivative_poly(1.5, k).unwrap().differentiate();
            assert_eq!(next, stepped);
        }
    }

    #[test]
    fn named_coefficient_identities() {
        for k in 1..=32u32 {
            let dfk = Rational::from_integer(df(2 * k as i64 - 1));
            let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(coeff_constant(k).unwrap(), sign.clone() * &dfk, "c_k at {k}");
            let dflin = Rational::from_integer(df(2 * k as i64 + 1));
            assert_eq!(coeff_linear(k).unwrap(), -sign.clone() * &dflin, "d_k at {k}");
            let t2 = coeff_t2(k).unwrap();
            assert_eq!(t2.abs(), Rational::from_integer(BigInt::from(k)) * &dfk);
            if k >= 2 {
                let t4 = coeff_t4(k).unwrap();
                let want = Rational::from_integer(BigInt::from(k) * BigInt::from(k - 1)) * &dfk
                    / rat_int(6);
                assert_eq!(t4.abs(), want, "c_{{k+2}} at {k}");
            }
            // 2 c_{k+1} + c_k = (2k+1)!! in magnitudes
            let lhs = rat_int(2) * coeff_t2(k).unwrap().abs() + coeff_constant(k).unwrap().abs();
            assert_eq!(lhs, dflin);
        }
        assert_eq!(coeff_constant(7).unwrap(), rat_int(-135_135));
        // (-1)^{k+1} (2k+1)!! at k = 6
        assert_eq!(coeff_linear(6).unwrap(), rat_int(-135_135));
        assert_eq!(coeff_linear(6).unwrap().abs(), rat_int(135_135));
        assert_eq!(coeff_t2(5).unwrap().abs(), rat_int(4725));
        assert!(coeff_constant(0).is_err());
        assert!(coeff_constant(33).is_err());
        assert!(derivative_poly(0.0, 65).is_err());
    }

    /// Independent oracle: differentiate the defining power series of
    /// Psi_nu termwise (no rewrite rules involved).
    fn dpsi_series(nu: f64, k: u32, t: f64) -> f64 {
        let mut sum = 0.0f64;
        for j in 0..200u32 {
            let p = 2 * j as i64;
            if p < k as i64 {
                continue;
            }
            let mut fall = 1.0f64;
            for i in 0..k as i64 {
                fall *= (p - i) as f64;
            }
            let ln_base = -(nu + 2.0 * j as f64) * std::f64::consts::LN_2
                - crate::specfun::log_gamma(j as f64 + 1.0).unwrap()
                - crate::specfun::log_gamma(nu + j as f64 + 1.0).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * fall * ln_base.exp() * t.powi((p - k as i64) as i32);
            sum += term;
            if j > 20 && term.abs() < 1e-25 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    /// k-th central finite difference with two Richardson steps.
    fn fd_derivative(nu: f64, k: u32, t: f64, h: f64) -> f64 {
        let stencil = |h: f64| -> f64 {
            let mut acc = 0.0f64;
            for i in 0..=k {
                let c = crate::rational::binomial(k, i);
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let x = t + (k as f64 / 2.0 - i as f64) * h;
                acc += sign * rational_to_f64(&Rational::from_integer(c)) * psi(nu, x).unwrap();
            }
            acc / h.powi(k as i32)
        };
        let d1 = stencil(h);
        let d2 = stencil(h / 2.0);
        let d3 = stencil(h / 4.0);
        let r1 = (4.0 * d2 - d1) / 3.0;
        let r2 = (4.0 * d3 - d2) / 3.0;
        (16.0 * r2 - r1) / 15.0
    }

    #[test]
    fn numeric_consistency_against_series_and_fd() {
        let nu = 1.5;
        for k in 1..=6u32 {
            for &t in &[0.5f64, 2.0] {
                let sym = derivative_poly(nu, k).unwrap().evaluate(t).unwrap();
                let series = dpsi_series(nu, k, t);
                assert_relative_eq!(sym, series, max_relative = 1e-10);
                let fd = fd_derivative(nu, k, t, 0.3);
                assert_relative_eq!(sym, fd, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn field_second_partial_matches_display() {
        let base = PsiField::psi(1.0, 3).unwrap();
        let d1 = base.partial_derivative(0).unwrap();
        assert_eq!(d1.to_string(), "-ξ1*Ψ[ν+1]");
        let d11 = d1.partial_derivative(0).unwrap();
        assert_eq!(d11.to_string(), "-Ψ[ν+1] + ξ1^2*Ψ[ν+2]");
        let d12 = base
            .partial_derivative(0)
            .unwrap()
            .partial_derivative(1)
            .unwrap();
        assert_eq!(d12.to_string(), "ξ1*ξ2*Ψ[ν+2]");
        assert!(base.partial_derivative(3).is_err());
    }

    #[test]
    fn field_values_at_zero() {
        let nu = 0.5f64;
        let base = PsiField::psi(nu, 3).unwrap();
        let want = psi(nu, 0.0).unwrap();
        assert_relative_eq!(base.evaluate(&[0.0; 3]).unwrap(), want, max_relative = 1e-14);
        let d2 = base
            .partial_derivative(0)
            .unwrap()
            .partial_derivative(0)
            .unwrap();
        assert_relative_eq!(
            d2.evaluate(&[0.0; 3]).unwrap(),
            -psi(nu + 1.0, 0.0).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn field_partial_matches_finite_difference() {
        // d/dxi_2 of a second-derivative field, against central differences
        let base = PsiField::psi(1.5, 3).unwrap();
        let parent = base
            .partial_derivative(0)
            .unwrap()
            .partial_derivative(1)
            .unwrap();
        let child = parent.partial_derivative(1).unwrap();
        let xi = [0.4, -0.7, 1.1];
        let h = 1e-4;
        let mut up = xi;
        up[1] += h;
        let mut dn = xi;
        dn[1] -= h;
        let fd = (parent.evaluate(&up).unwrap() - parent.evaluate(&dn).unwrap()) / (2.0 * h);
        assert_relative_eq!(child.evaluate(&xi).unwrap(), fd, max_relative = 1e-5);
    }

    proptest! {
        // mixed partials commute termwise
        #[test]
        fn mixed_partials_commute(
            ax1 in 0usize..3,
            ax2 in 0usize..3,
            steps in proptest::collection::vec(0usize..3, 0..4),
        ) {
            let mut field = PsiField::psi(2.0, 3).unwrap();
            for s in steps {
                field = field.partial_derivative(s).unwrap();
            }
            let a = field.partial_derivative(ax1).unwrap().partial_derivative(ax2).unwrap();
            let b = field.partial_derivative(ax2).unwrap().partial_derivative(ax1).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
