//! Leading-order asymptotics of the sphere and ball integrals as a chosen
//! subset of the exponents grows without bound.
//!
//! With m growing coordinates G and fixed coordinates F, the sphere integral
//! of x^{2beta} behaves like
//!
//! ```text
//! 2 (2pi)^{(m-1)/2} e^{sum_F beta_k} prod_F Gamma(beta_k + 1/2)
//!   * prod_G beta_k^{beta_k} / |beta|^{|beta| + (n-1)/2}
//! ```
//!
//! and the ball integral drops the factor 2 and raises the |beta| exponent
//! to (n+1)/2. Which coordinates grow is declared by the caller: the shape
//! of the formula depends on the split, not on the actual magnitudes.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::closed_form::ClosedFormValue;
use crate::error::{Error, Result};
use crate::index::RealMultiIndex;
use crate::logsigned::LogSigned;
use crate::specfun::log_gamma;

/// An asymptotic evaluation request: the exponents plus the set of
/// coordinate positions (0-based) treated as growing.
#[derive(Clone, Debug)]
pub struct AsymptoticRequest {
    idx: RealMultiIndex,
    growing: BTreeSet<usize>,
}

impl AsymptoticRequest {
    /// Build a request. Growing coordinates must be in range, nonempty and
    /// strictly positive (beta^beta is meaningless otherwise); fixed
    /// coordinates keep the usual beta_k > -1/2 constraint from the index.
    pub fn new(idx: RealMultiIndex, growing: impl IntoIterator<Item = usize>) -> Result<Self> {
        let growing: BTreeSet<usize> = growing.into_iter().collect();
        if growing.is_empty() {
            return Err(Error::EmptyGrowingSet);
        }
        for &g in &growing {
            if g >= idx.dim() {
                return Err(Error::CoordinateOutOfRange {
                    index: g,
                    dim: idx.dim(),
                });
            }
            let value = idx.beta()[g];
            if value <= 0.0 {
                return Err(Error::GrowingExponentNotPositive { index: g, value });
            }
        }
        Ok(Self { idx, growing })
    }

    /// All coordinates growing.
    pub fn all_growing(idx: RealMultiIndex) -> Result<Self> {
        let dim = idx.dim();
        Self::new(idx, 0..dim)
    }

    pub fn index(&self) -> &RealMultiIndex {
        &self.idx
    }

    pub fn growing(&self) -> impl Iterator<Item = usize> + '_ {
        self.growing.iter().copied()
    }

    pub fn growing_count(&self) -> usize {
        self.growing.len()
    }
}

/// ln of the factors shared by the sphere and ball forms:
/// (m-1)/2 ln(2pi) + sum_F (beta_k + ln Gamma(beta_k + 1/2))
/// + sum_G beta_k ln beta_k.
fn log_common(req: &AsymptoticRequest) -> Result<f64> {
    let m = req.growing.len() as f64;
    let mut acc = 0.5 * (m - 1.0) * (2.0 * PI).ln();
    // Sorted coordinate order within each group keeps results stable.
    let mut fixed: Vec<f64> = Vec::new();
    let mut grow: Vec<f64> = Vec::new();
    for (k, &b) in req.idx.beta().iter().enumerate() {
        if req.growing.contains(&k) {
            grow.push(b);
        } else {
            fixed.push(b);
        }
    }
    fixed.sort_by(f64::total_cmp);
    grow.sort_by(f64::total_cmp);
    for b in fixed {
        acc += b + log_gamma(b + 0.5)?;
    }
    for b in grow {
        acc += b * b.ln();
    }
    Ok(acc)
}

/// Asymptotic sphere integral of x^{2beta}.
pub fn sphere_asymptotic(req: &AsymptoticRequest) -> Result<ClosedFormValue> {
    let n = req.idx.dim() as f64;
    let total = req.idx.total();
    let log = f64::ln(2.0) + log_common(req)? - (total + 0.5 * (n - 1.0)) * total.ln();
    Ok(ClosedFormValue::from_log(LogSigned::positive_ln(log)))
}

/// Asymptotic ball integral of x^{2beta}: sphere form divided by 2|beta|.
pub fn ball_asymptotic(req: &AsymptoticRequest) -> Result<ClosedFormValue> {
    let n = req.idx.dim() as f64;
    let total = req.idx.total();
    let log = log_common(req)? - (total + 0.5 * (n + 1.0)) * total.ln();
    Ok(ClosedFormValue::from_log(LogSigned::positive_ln(log)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{ball_integral_real, sphere_integral_real};
    use approx::assert_relative_eq;

    fn ratio_sphere(beta: Vec<f64>, growing: Vec<usize>) -> f64 {
        let idx = RealMultiIndex::new(beta).unwrap();
        let exact = sphere_integral_real(&idx).unwrap().value.ln_abs();
        let req = AsymptoticRequest::new(idx, growing).unwrap();
        let asym = sphere_asymptotic(&req).unwrap().value.ln_abs();
        (exact - asym).exp()
    }

    fn ratio_ball(beta: Vec<f64>, growing: Vec<usize>) -> f64 {
        let idx = RealMultiIndex::new(beta).unwrap();
        let exact = ball_integral_real(&idx).unwrap().value.ln_abs();
        let req = AsymptoticRequest::new(idx, growing).unwrap();
        let asym = ball_asymptotic(&req).unwrap().value.ln_abs();
        (exact - asym).exp()
    }

    #[test]
    fn all_growing_matches_reduced_formula() {
        // with every coordinate growing the fixed-product factors drop out
        let idx = RealMultiIndex::new(vec![40.0, 55.0, 70.0]).unwrap();
        let req = AsymptoticRequest::all_growing(idx.clone()).unwrap();
        let got = sphere_asymptotic(&req).unwrap().value.ln_abs();
        let total = idx.total();
        let want = f64::ln(2.0)
            + (2.0 * PI).ln()
            + idx.beta().iter().map(|b| b * b.ln()).sum::<f64>()
            - (total + 1.0) * total.ln();
        assert_relative_eq!(got, want, max_relative = 1e-14);
    }

    #[test]
    fn sphere_ratio_accuracy() {
        let r = ratio_sphere(vec![100.0, 100.0, 100.0], vec![0, 1, 2]);
        assert!(r > 0.99 && r < 1.01, "ratio {r}");
        // partial growth with fixed Gamma factors
        for (b, band) in [(125.0, 0.005), (250.0, 0.0025), (500.0, 0.001)] {
            let r = ratio_sphere(vec![b, 0.5, 0.5], vec![0]);
            assert!((r - 1.0).abs() < band, "b={b}: ratio {r}");
        }
    }

    #[test]
    fn ratio_error_decreases_under_doubling() {
        for n in [3usize, 5] {
            let mut last_sphere = f64::INFINITY;
            let mut last_ball = f64::INFINITY;
            for b in [25.0, 50.0, 100.0, 200.0] {
                let beta = vec![b; n];
                let all: Vec<usize> = (0..n).collect();
                let es = (ratio_sphere(beta.clone(), all.clone()) - 1.0).abs();
                let eb = (ratio_ball(beta, all) - 1.0).abs();
                assert!(es < last_sphere, "sphere error not decreasing at b={b}");
                assert!(eb < last_ball, "ball error not decreasing at b={b}");
                last_sphere = es;
                last_ball = eb;
            }
        }
    }

    #[test]
    fn ball_is_sphere_over_two_beta() {
        let idx = RealMultiIndex::new(vec![200.0, 200.0, 1.0, 1.0]).unwrap();
        let req = AsymptoticRequest::new(idx.clone(), vec![0, 1]).unwrap();
        let sphere = sphere_asymptotic(&req).unwrap().value.ln_abs();
        let ball = ball_asymptotic(&req).unwrap().value.ln_abs();
        let want = sphere - f64::ln(2.0) - idx.total().ln();
        assert_relative_eq!(ball, want, max_relative = 1e-12);
    }

    #[test]
    fn partial_growth_converges_monotonically() {
        let mut last = f64::INFINITY;
        for b in [200.0, 400.0, 800.0] {
            let r = ratio_ball(vec![b, b, 1.0, 1.0], vec![0, 1]);
            let err = (r - 1.0).abs();
            assert!(err < last, "b={b}: error {err} not below {last}");
            last = err;
        }
    }

    #[test]
    fn stirling_gamma_ratio_check() {
        // the Gamma-ratio asymptotic behind the formula, against direct
        // log-Gamma, within sum 1/(8 beta_k) absolute log error
        for beta in [[20.0, 25.0, 30.0], [50.0, 60.0, 70.0]] {
            let idx = RealMultiIndex::new(beta.to_vec()).unwrap();
            let total = idx.total();
            let n = 3.0;
            let exact: f64 = beta.iter().map(|&b| log_gamma(b + 0.5).unwrap()).sum::<f64>()
                - log_gamma(total + n / 2.0).unwrap();
            let m = beta.len() as f64;
            let approx = 0.5 * (m - 1.0) * (2.0 * PI).ln()
                + beta.iter().map(|&b| b * b.ln()).sum::<f64>()
                - (total + 0.5 * (n - 1.0)) * total.ln();
            let budget: f64 = beta.iter().map(|&b| 1.0 / (8.0 * b)).sum();
            assert!(
                (exact - approx).abs() <= budget,
                "log error {} over budget {}",
                (exact - approx).abs(),
                budget
            );
        }
    }

    #[test]
    fn request_validation() {
        let idx = RealMultiIndex::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(AsymptoticRequest::new(idx.clone(), Vec::<usize>::new()).is_err());
        assert!(AsymptoticRequest::new(idx.clone(), vec![5]).is_err());
        let with_zero = RealMultiIndex::new(vec![0.0, 2.0, 3.0]).unwrap();
        assert!(AsymptoticRequest::new(with_zero.clone(), vec![0]).is_err());
        assert!(AsymptoticRequest::new(with_zero, vec![1, 2]).is_ok());
    }
}
