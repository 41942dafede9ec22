//! Closed-form hyperball volumes under the combined metric.
//!
//! The volume factors into per-domain angular measures and a radial integral
//! over the simplex of per-domain radii. Everything is composed in log-space:
//! the closed form mixes factorials and Gamma values that overflow `f64`
//! beyond `n ~ 170`, while the logs stay small. `exp` happens only at the
//! API edge, via [`LogVolume::value`].

use crate::error::{Error, Result};
use crate::space::{SpaceSpec, WeightSet};
use crate::SimilarityParams;

/// A positive hypervolume carried as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogVolume {
    log_value: f64,
}

impl LogVolume {
    pub(crate) fn from_log(log_value: f64) -> Self {
        debug_assert!(log_value.is_finite());
        LogVolume { log_value }
    }

    /// ln V.
    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    /// exp(ln V); `f64::INFINITY` when the volume overflows double precision.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// A ball of radius `r` in a given space, optionally weighted.
///
/// The center is irrelevant to volume by translation invariance; balls are
/// taken around the origin.
#[derive(Debug, Clone, Copy)]
pub struct BallQuery<'a> {
    r: f64,
    spec: &'a SpaceSpec,
    weights: Option<&'a WeightSet>,
}

impl<'a> BallQuery<'a> {
    pub fn new(spec: &'a SpaceSpec, weights: Option<&'a WeightSet>, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("radius must be positive and finite, got {r}")));
        }
        Ok(BallQuery { r, spec, weights })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn spec(&self) -> &'a SpaceSpec {
        self.spec
    }

    pub fn weights(&self) -> Option<&'a WeightSet> {
        self.weights
    }
}

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_74;

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::f64::consts::PI.ln() - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// ln Gamma(x) for x > 0. Relative error below 1e-13 on `[0.5, 200]`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("log_gamma requires positive finite x, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Total angular measure of directions in an `m`-dimensional subspace:
/// `2 pi^(m/2) / Gamma(m/2)`, the surface measure of the unit `(m-1)`-sphere.
///
/// For `m = 1` the formula evaluates to 2, matching the two half-lines from
/// the origin, so singleton domains need no special case.
pub fn angular_measure(m: usize) -> Result<LogVolume> {
    if m < 1 {
        return Err(Error::invalid("angular_measure requires m >= 1"));
    }
    let m = m as f64;
    let log = std::f64::consts::LN_2 + 0.5 * m * std::f64::consts::PI.ln()
        - ln_gamma_unchecked(0.5 * m);
    Ok(LogVolume::from_log(log))
}

/// The iterated integral over per-domain radii `r_1, ..., r_k >= 0` with
/// `sum r_i <= r` and integrand `prod r_i^(n_i - 1)`, in closed form:
/// `r^n / Gamma(n+1) * prod Gamma(n_i)` with `n = sum n_i`.
pub fn radial_simplex_integral(r: f64, sizes: &[usize]) -> Result<LogVolume> {
    if sizes.is_empty() {
        return Err(Error::invalid("radial_simplex_integral requires at least one domain size"));
    }
    if sizes.iter().any(|&s| s < 1) {
        return Err(Error::invalid("all domain sizes must be >= 1"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("radius must be positive and finite, got {r}")));
    }
    let n: usize = sizes.iter().sum();
    let mut log = n as f64 * r.ln() - ln_gamma_unchecked(n as f64 + 1.0);
    for &s in sizes {
        log += ln_gamma_unchecked(s as f64);
    }
    Ok(LogVolume::from_log(log))
}

fn log_volume_unweighted(spec: &SpaceSpec, r: f64) -> f64 {
    let n = spec.n() as f64;
    let ln_pi = std::f64::consts::PI.ln();
    let mut log = n * r.ln() - ln_gamma_unchecked(n + 1.0);
    for size in spec.domain_sizes() {
        let nd = size as f64;
        log += ln_gamma_unchecked(nd + 1.0) + 0.5 * nd * ln_pi - ln_gamma_unchecked(0.5 * nd + 1.0);
    }
    log
}

/// Sum of `ln(w_delta * sqrt(w_d))` over every dimension: the log of the
/// normalizer that weighting divides out of the unweighted volume.
fn log_stretch_normalizer(spec: &SpaceSpec, w: &WeightSet) -> f64 {
    let mut log = 0.0;
    for d in spec.domains() {
        let wd = w.domain_weight(&d.name).unwrap();
        for dim in &d.dimensions {
            log += wd.ln() + 0.5 * w.dimension_weight(dim).unwrap().ln();
        }
    }
    log
}

/// Volume of the ball under the unweighted combined metric:
/// `r^n / n! * prod_delta (n_delta! * pi^(n_delta/2) / Gamma(n_delta/2 + 1))`.
pub fn ball_volume_unweighted(q: &BallQuery) -> Result<LogVolume> {
    if q.weights().is_some() {
        return Err(Error::invalid("ball_volume_unweighted takes a query without weights"));
    }
    Ok(LogVolume::from_log(log_volume_unweighted(q.spec(), q.r())))
}

/// Volume of the ball under the weighted combined metric: the unweighted
/// volume divided by the per-dimension stretch factors `w_delta * sqrt(w_d)`.
pub fn ball_volume_weighted(q: &BallQuery) -> Result<LogVolume> {
    let w = q
        .weights()
        .ok_or_else(|| Error::invalid("ball_volume_weighted requires weights"))?;
    let log = log_volume_unweighted(q.spec(), q.r()) - log_stretch_normalizer(q.spec(), w);
    Ok(LogVolume::from_log(log))
}

/// Dispatches on the presence of weights in the query.
pub fn ball_volume(q: &BallQuery) -> Result<LogVolume> {
    match q.weights() {
        Some(_) => ball_volume_weighted(q),
        None => ball_volume_unweighted(q),
    }
}

/// Per-dimension stretch factors `s_d = w_delta * sqrt(w_d)`, in canonical
/// order. The weighted unit ball is the image of the unweighted unit ball
/// under `x_d -> x_d / s_d`.
pub fn weight_stretch_factors(spec: &SpaceSpec, w: &WeightSet) -> Result<Vec<f64>> {
    crate::space::validate_weights(spec, w)?;
    let mut out = Vec::with_capacity(spec.n());
    for d in spec.domains() {
        let wd = w.domain_weight(&d.name).unwrap();
        for dim in &d.dimensions {
            out.push(wd * w.dimension_weight(dim).unwrap().sqrt());
        }
    }
    Ok(out)
}

/// Inverts the volume formula: the radius whose ball has volume `v`.
/// Closed form from `V(r) = V(1) * r^n`.
pub fn radius_from_volume(spec: &SpaceSpec, weights: Option<&WeightSet>, v: f64) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::invalid(format!("volume must be positive and finite, got {v}")));
    }
    let unit = BallQuery::new(spec, weights, 1.0)?;
    let log_unit = ball_volume(&unit)?.log_value();
    Ok(((v.ln() - log_unit) / spec.n() as f64).exp())
}

/// The radius of the similarity region `{y : Sim(p, y) >= alpha}`:
/// `r = -ln(alpha) / c`.
pub fn radius_from_similarity(params: SimilarityParams, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(-alpha.ln() / params.c())
}
