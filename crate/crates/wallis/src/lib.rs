//! Integration of monomials over the unit sphere and unit ball in R^n.
//!
//! The crate evaluates, in overflow-safe log arithmetic:
//!
//! - closed-form integrals of x^{2beta} (real exponents beta_k > -1/2) and
//!   x^alpha (integer exponents) over the unit sphere and unit ball
//!   ([`closed_form`]);
//! - their large-exponent asymptotics ([`asymptotics`]);
//! - the Fourier transform of x^alpha restricted to the sphere, via an exact
//!   symbolic calculus for derivatives of the Bessel quotient
//!   Psi_nu(t) = J_nu(t)/t^nu ([`psi_calculus`], [`fourier_sphere`]);
//! - termwise-integrated series of trigonometric and hyperbolic functions of
//!   a monomial argument, with certified truncation bounds
//!   ([`series_integrals`]);
//! - independent verification oracles: seeded Monte Carlo on sphere and
//!   ball, a plane-wave 1-D reduction, and deterministic adaptive
//!   quadrature for n = 3 ([`oracle`]).

pub mod asymptotics;
pub mod closed_form;
pub mod error;
pub mod fourier_sphere;
pub mod index;
pub mod logsigned;
pub mod oracle;
pub mod psi_calculus;
pub mod rational;
pub mod series_integrals;
pub mod specfun;

pub use error::{Error, Result};
pub use index::{IntMultiIndex, RealMultiIndex};
pub use logsigned::LogSigned;
pub use rational::Rational;
