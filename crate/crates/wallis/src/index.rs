//! Multi-indices over R^n: real exponent vectors for x^{2beta} and
//! nonnegative integer exponent vectors for x^alpha.

use crate::error::{Error, Result};

/// Minimum supported dimension.
pub const MIN_DIM: usize = 3;

/// Vector of real exponents beta with every beta_k > -1/2; represents the
/// monomial x^{2beta} = prod |x_k|^{2 beta_k}.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMultiIndex {
    beta: Vec<f64>,
}

impl RealMultiIndex {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.len() < MIN_DIM {
            return Err(Error::DimensionTooSmall(beta.len()));
        }
        for (index, &value) in beta.iter().enumerate() {
            if !(value > -0.5) || !value.is_finite() {
                return Err(Error::ExponentTooSmall { index, value });
            }
        }
        Ok(Self { beta })
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// |beta|, summed in sorted order so permuted inputs agree bitwise.
    pub fn total(&self) -> f64 {
        let mut sorted = self.beta.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.iter().sum()
    }

    /// Exponents in sorted order; used wherever a symmetric function of the
    /// entries must not depend on their arrangement.
    pub fn sorted(&self) -> Vec<f64> {
        let mut sorted = self.beta.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
    }

    /// Componentwise scale by a positive integer factor. Fails if a scaled
    /// entry leaves the beta_k > -1/2 domain.
    pub fn scale(&self, factor: u32) -> Result<Self> {
        Self::new(self.beta.iter().map(|b| b * factor as f64).collect())
    }
}

/// Vector of nonnegative integer exponents alpha for the monomial x^alpha.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMultiIndex {
    alpha: Vec<u32>,
}

impl IntMultiIndex {
    pub fn new(alpha: Vec<u32>) -> Result<Self> {
        if alpha.len() < MIN_DIM {
            return Err(Error::DimensionTooSmall(alpha.len()));
        }
        Ok(Self { alpha })
    }

    /// The zero multi-index in dimension n.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn get(&self, k: usize) -> u32 {
        self.alpha[k]
    }

    /// |alpha| = sum of the entries.
    pub fn total(&self) -> u64 {
        self.alpha.iter().map(|&a| a as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0)
    }

    pub fn all_even(&self) -> bool {
        self.alpha.iter().all(|&a| a % 2 == 0)
    }

    /// lambda * alpha componentwise.
    pub fn scale(&self, lambda: u32) -> Self {
        Self {
            alpha: self.alpha.iter().map(|&a| a * lambda).collect(),
        }
    }

    /// alpha / 2 when every entry is even.
    pub fn halve(&self) -> Option<Self> {
        if self.all_even() {
            Some(Self {
                alpha: self.alpha.iter().map(|&a| a / 2).collect(),
            })
        } else {
            None
        }
    }

    /// View as real exponents (for the Gamma-form closed expressions).
    pub fn to_real(&self) -> RealMultiIndex {
        RealMultiIndex {
            beta: self.alpha.iter().map(|&a| a as f64).collect(),
        }
    }

    /// Entries in ascending order (for order-independent products).
    pub fn sorted(&self) -> Vec<u32> {
        let mut sorted = self.alpha.clone();
        sorted.sort_unstable();
        sorted
    }

    pub(crate) fn bump(&self, k: usize, delta: i32) -> Self {
        let mut alpha = self.alpha.clone();
        alpha[k] = (alpha[k] as i64 + delta as i64) as u32;
        Self { alpha }
    }
}
