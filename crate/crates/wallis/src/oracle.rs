//! Independent numerical verification oracles.
//!
//! - [`mc_sphere`] / [`mc_ball`]: seeded, shard-parallel Monte Carlo with
//!   deterministic substreams (identical (seed, shards, samples) reproduce
//!   bitwise-identical estimates);
//! - [`mc_sphere_complex`]: the same sampler with complex accumulation for
//!   Fourier integrands;
//! - [`plane_wave_integral`]: the 1-D reduction
//!   `int g(y.x) dsigma = omega_{n-1} int_{-1}^{1} (1-t^2)^{(n-3)/2} g(|y|t) dt`;
//! - [`quad_sphere_n3`]: deterministic nested adaptive quadrature over
//!   spherical angles for n = 3, usable where negative exponents make the
//!   Monte Carlo variance infinite.
//!
//! The quadrature engine is a globally adaptive Gauss-Kronrod 15 scheme
//! with the QUADPACK error rescale; the worst interval is bisected until
//! the summed error bound drops below the requested tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::closed_form::{ball_volume, surface_area};
use crate::error::{Error, Result};
use crate::index::RealMultiIndex;

/// Tag identifying which oracle produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    McSphere,
    McBall,
    PlaneWave1d,
    QuadN3,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::McSphere => "mc_sphere",
            Method::McBall => "mc_ball",
            Method::PlaneWave1d => "plane_wave_1d",
            Method::QuadN3 => "quad_n3",
        }
    }
}

/// Estimate with uncertainty. For Monte Carlo, `std_error` is the standard
/// error of the mean; for the deterministic methods it is the quadrature
/// error bound and `samples` counts integrand evaluations.
#[derive(Clone, Copy, Debug)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub method: Method,
    /// Set by the monomial-aware wrappers when some exponent is in the
    /// infinite-variance regime beta_k <= -1/4 (the estimate converges but
    /// the reported standard error is unreliable there).
    pub infinite_variance_hint: bool,
}

/// Complex-valued Monte Carlo estimate with per-component standard errors.
#[derive(Clone, Copy, Debug)]
pub struct ComplexOracleEstimate {
    pub value: Complex64,
    pub std_error_re: f64,
    pub std_error_im: f64,
    pub samples: u64,
    pub method: Method,
}

/// Reproducible run configuration: a 64-bit seed and a shard count.
/// Shards map to independent generator substreams; results are combined in
/// shard order, so they do not depend on scheduling.
#[derive(Clone, Copy, Debug)]
pub struct SeededRun {
    pub seed: u64,
    pub shards: u32,
}

impl SeededRun {
    pub fn new(seed: u64, shards: u32) -> Result<Self> {
        if shards == 0 {
            return Err(Error::BadParameter {
                name: "shards",
                value: 0.0,
                constraint: "at least one shard is required",
            });
        }
        Ok(Self { seed, shards })
    }
}

fn shard_counts(samples: u64, shards: u32) -> Vec<u64> {
    let base = samples / shards as u64;
    let rem = samples % shards as u64;
    (0..shards as u64)
        .map(|i| base + u64::from(i < rem))
        .collect()
}

fn shard_rng(run: &SeededRun, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    rng.set_stream(shard + 1);
    rng
}

/// Kahan-compensated accumulator for the shard sums.
#[derive(Clone, Copy, Default)]
struct Acc {
    sum: f64,
    comp: f64,
}

impl Acc {
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let s = self.sum + y;
        self.comp = (s - self.sum) - y;
        self.sum = s;
    }
}

fn sample_direction(rng: &mut ChaCha8Rng, point: &mut [f64]) {
    loop {
        let mut norm2 = 0.0f64;
        for x in point.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *x = g;
            norm2 += g * g;
        }
        if norm2 > 0.0 {
            let inv = norm2.sqrt().recip();
            for x in point.iter_mut() {
                *x *= inv;
            }
            return;
        }
    }
}

fn check_mc_args(n: usize, samples: u64) -> Result<()> {
    if n < crate::index::MIN_DIM {
        return Err(Error::DimensionTooSmall(n));
    }
    if samples == 0 {
        return Err(Error::BadParameter {
            name: "samples",
            value: 0.0,
            constraint: "at least one sample is required",
        });
    }
    Ok(())
}

fn mc_run<F>(f: F, n: usize, run: &SeededRun, samples: u64, ball: bool) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_mc_args(n, samples)?;
    let counts = shard_counts(samples, run.shards);
    let partials: Vec<(f64, f64)> = counts
        .par_iter()
        .enumerate()
        .map(|(i, &count)| {
            let mut rng = shard_rng(run, i as u64);
            let mut point = vec![0.0f64; n];
            let mut sum = Acc::default();
            let mut sumsq = Acc::default();
            for _ in 0..count {
                sample_direction(&mut rng, &mut point);
                if ball {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    let r = u.powf(1.0 / n as f64);
                    for x in point.iter_mut() {
                        *x *= r;
                    }
                }
                let v = f(&point);
                sum.add(v);
                sumsq.add(v * v);
            }
            (sum.sum, sumsq.sum)
        })
        .collect();
    // combine in fixed shard order
    let mut sum = Acc::default();
    let mut sumsq = Acc::default();
    for (s, s2) in partials {
        sum.add(s);
        sumsq.add(s2);
    }
    Ok((sum.sum, sumsq.sum))
}

fn finish_estimate(
    sum: f64,
    sumsq: f64,
    samples: u64,
    measure: f64,
    method: Method,
) -> OracleEstimate {
    let nf = samples as f64;
    let mean = sum / nf;
    let var = if samples > 1 {
        ((sumsq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    OracleEstimate {
        value: measure * mean,
        std_error: measure * (var / nf).sqrt(),
        samples,
        method,
        infinite_variance_hint: false,
    }
}

/// Monte Carlo integral of `f` over the unit sphere in R^n: omega_n times
/// the sample mean over uniform directions g/|g|, g standard normal.
pub fn mc_sphere<F>(f: F, n: usize, run: &SeededRun, samples: u64) -> Result<OracleEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let (sum, sumsq) = mc_run(f, n, run, samples, false)?;
    Ok(finish_estimate(
        sum,
        sumsq,
        samples,
        surface_area(n),
        Method::McSphere,
    ))
}

/// Monte Carlo integral of `f` over the unit ball in R^n: v_n times the
/// sample mean over points (g/|g|) u^{1/n}.
pub fn mc_ball<F>(f: F, n: usize, run: &SeededRun, samples: u64) -> Result<OracleEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let (sum, sumsq) = mc_run(f, n, run, samples, true)?;
    Ok(finish_estimate(
        sum,
        sumsq,
        samples,
        ball_volume(n),
        Method::McBall,
    ))
}

/// Complex-integrand Monte Carlo over the unit sphere.
pub fn mc_sphere_complex<F>(
    f: F,
    n: usize,
    run: &SeededRun,
    samples: u64,
) -> Result<ComplexOracleEstimate>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    check_mc_args(n, samples)?;
    let counts = shard_counts(samples, run.shards);
    let partials: Vec<[f64; 4]> = counts
        .par_iter()
        .enumerate()
        .map(|(i, &count)| {
            let mut rng = shard_rng(run, i as u64);
            let mut point = vec![0.0f64; n];
            let mut acc = [Acc::default(); 4];
            for _ in 0..count {
                sample_direction(&mut rng, &mut point);
                let v = f(&point);
                acc[0].add(v.re);
                acc[1].add(v.re * v.re);
                acc[2].add(v.im);
                acc[3].add(v.im * v.im);
            }
            [acc[0].sum, acc[1].sum, acc[2].sum, acc[3].sum]
        })
        .collect();
    let mut acc = [Acc::default(); 4];
    for p in partials {
        for (a, v) in acc.iter_mut().zip(p) {
            a.add(v);
        }
    }
    let re = finish_estimate(acc[0].sum, acc[1].sum, samples, surface_area(n), Method::McSphere);
    let im = finish_estimate(acc[2].sum, acc[3].sum, samples, surface_area(n), Method::McSphere);
    Ok(ComplexOracleEstimate {
        value: Complex64::new(re.value, im.value),
        std_error_re: re.std_error,
        std_error_im: im.std_error,
        samples,
        method: Method::McSphere,
    })
}

/// The monomial x^{2beta} as an integrand closure.
fn monomial_integrand(beta: &RealMultiIndex) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |x: &[f64]| {
        let mut v = 1.0f64;
        for (xi, &b) in x.iter().zip(beta.beta()) {
            if b != 0.0 {
                v *= xi.abs().powf(2.0 * b);
            }
        }
        v
    }
}

/// Monte Carlo sphere integral of x^{2beta}; flags the infinite-variance
/// regime (some beta_k <= -1/4) in the estimate metadata.
pub fn mc_sphere_monomial(
    beta: &RealMultiIndex,
    run: &SeededRun,
    samples: u64,
) -> Result<OracleEstimate> {
    let mut est = mc_sphere(monomial_integrand(beta), beta.dim(), run, samples)?;
    est.infinite_variance_hint = beta.beta().iter().any(|&b| b <= -0.25);
    Ok(est)
}

/// Monte Carlo ball integral of x^{2beta}, with the same variance flag.
pub fn mc_ball_monomial(
    beta: &RealMultiIndex,
    run: &SeededRun,
    samples: u64,
) -> Result<OracleEstimate> {
    let mut est = mc_ball(monomial_integrand(beta), beta.dim(), run, samples)?;
    est.infinite_variance_hint = beta.beta().iter().any(|&b| b <= -0.25);
    Ok(est)
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    for j in 0..3 {
        let idx = 2 * j + 1;
        let x = h * XGK[idx];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[idx] = f1;
        fv[14 - idx] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = h * XGK[idx];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[idx] = f1;
        fv[14 - idx] = f2;
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    let mean = resk * 0.5;
    let mut resasc = 0.0f64;
    for (i, v) in fv.iter().enumerate() {
        let w = WGK[if i < 8 { i } else { 14 - i }];
        resasc += w * (v - mean).abs();
    }
    let value = resk * h;
    let err = rescale_error((resk - resg) * h, resabs * h.abs(), resasc * h.abs());
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

pub(crate) struct QuadOutcome {
    pub value: f64,
    pub error_bound: f64,
    pub evals: u64,
}

/// Globally adaptive integration of `f` over [a, b] to absolute tolerance.
/// `splits` are interior points where the domain is pre-subdivided (known
/// singular locations); intervals narrower than ~1e-14 of the span are not
/// refined further.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
    splits: &[f64],
) -> Result<QuadOutcome> {
    let mut edges = vec![a];
    for &s in splits {
        if s > a && s < b {
            edges.push(s);
        }
    }
    edges.push(b);
    let mut heap = BinaryHeap::new();
    let mut total_value = 0.0f64;
    let mut total_err = 0.0f64;
    let mut stuck_err = 0.0f64;
    let mut evals = 0u64;
    for w in edges.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        evals += 15;
        total_value += v;
        total_err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    let min_width = (b - a).abs() * 1e-14;
    let mut panels = heap.len();
    while total_err + stuck_err > abs_tol && panels < max_panels {
        let Some(worst) = heap.pop() else { break };
        if (worst.b - worst.a).abs() < min_width {
            // cannot refine further; park its error
            total_err -= worst.err;
            stuck_err += worst.err;
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evals += 30;
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        panels += 1;
    }
    let error_bound = total_err + stuck_err;
    if error_bound > abs_tol || !total_value.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            estimate: total_value,
            error_bound,
            tolerance: abs_tol,
        });
    }
    Ok(QuadOutcome {
        value: total_value,
        error_bound,
        evals,
    })
}

/// Absolute tolerance used by [`plane_wave_integral`].
pub const PLANE_WAVE_TOL: f64 = 1e-10;

/// Fritz John's plane-wave reduction: integrates g(y.x) over the unit
/// sphere in R^n as omega_{n-1} int_{-1}^{1} (1-t^2)^{(n-3)/2} g(|y|t) dt.
/// For n = 3 the weight is identically 1; for n >= 4 it vanishes at the
/// endpoints. Adaptive quadrature to absolute tolerance 1e-10.
pub fn plane_wave_integral<G>(g: G, y: &[f64], n: usize) -> Result<OracleEstimate>
where
    G: Fn(f64) -> f64,
{
    if n < crate::index::MIN_DIM {
        return Err(Error::DimensionTooSmall(n));
    }
    if y.len() != n {
        return Err(Error::CoordinateOutOfRange {
            index: y.len(),
            dim: n,
        });
    }
    let radius = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let exponent = (n as f64 - 3.0) / 2.0;
    let integrand = move |t: f64| {
        let weight = if n == 3 {
            1.0
        } else {
            (1.0 - t * t).max(0.0).powf(exponent)
        };
        weight * g(radius * t)
    };
    let omega_slice = surface_area(n - 1);
    let out = integrate(
        &integrand,
        -1.0,
        1.0,
        PLANE_WAVE_TOL / omega_slice,
        20_000,
        &[0.0],
    )?;
    Ok(OracleEstimate {
        value: omega_slice * out.value,
        std_error: omega_slice * out.error_bound,
        samples: out.evals,
        method: Method::PlaneWave1d,
        infinite_variance_hint: false,
    })
}

/// Deterministic sphere integral for n = 3: nested adaptive quadrature in
/// spherical angles with the sin(theta) Jacobian, pre-split along the
/// coordinate great circles where negative-exponent monomials blow up.
pub fn quad_sphere_n3<F>(f: F, tolerance: f64) -> Result<OracleEstimate>
where
    F: Fn(&[f64]) -> f64,
{
    if !(tolerance > 0.0) {
        return Err(Error::BadParameter {
            name: "tolerance",
            value: tolerance,
            constraint: "tolerance must be positive",
        });
    }
    use std::cell::Cell;
    use std::f64::consts::PI;
    let inner_tol = tolerance / (4.0 * PI);
    let outer_tol = tolerance / 2.0;
    let inner_evals = Cell::new(0u64);
    let inner_failed = Cell::new(false);
    let phi_splits = [PI / 2.0, PI, 1.5 * PI];
    let outer = |theta: f64| -> f64 {
        let (sin_t, cos_t) = theta.sin_cos();
        // the sin(theta) Jacobian stays inside the inner integrand: it
        // tames the 1/sin(theta) growth of negative-exponent monomials
        // near the poles, keeping the inner absolute tolerance meaningful
        let inner = |phi: f64| -> f64 {
            let (sin_p, cos_p) = phi.sin_cos();
            sin_t * f(&[sin_t * cos_p, sin_t * sin_p, cos_t])
        };
        match integrate(&inner, 0.0, 2.0 * PI, inner_tol, 40_000, &phi_splits) {
            Ok(out) => {
                inner_evals.set(inner_evals.get() + out.evals);
                out.value
            }
            Err(_) => {
                inner_failed.set(true);
                f64::NAN
            }
        }
    };
    let result = integrate(&outer, 0.0, PI, outer_tol, 40_000, &[PI / 2.0]);
    match result {
        Ok(out) if !inner_failed.get() => Ok(OracleEstimate {
            value: out.value,
            // inner tolerance integrates over theta in [0, pi] with
            // |sin| <= 1, contributing at most pi * inner_tol
            std_error: out.error_bound + PI * inner_tol,
            samples: out.evals + inner_evals.get(),
            method: Method::QuadN3,
            infinite_variance_hint: false,
        }),
        Ok(out) => Err(Error::QuadratureNonConvergence {
            estimate: out.value,
            error_bound: f64::INFINITY,
            tolerance,
        }),
        Err(e) => Err(e),
    }
}
