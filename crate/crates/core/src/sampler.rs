//! Monte-Carlo volume oracle and exact uniform in-ball sampling.
//!
//! Both routines are deterministic for a fixed seed regardless of thread
//! count: work is partitioned into fixed chunks, each chunk draws from its
//! own ChaCha stream (`set_stream(chunk_index)`), and aggregation is
//! order-independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FlatMetric;
use crate::space::Point;
use crate::volume::{ball_volume, weight_stretch_factors, BallQuery};

/// Trial budget, seed, and chunking for the Monte-Carlo estimator.
///
/// `chunk_size` is part of the reproducibility contract: it fixes the
/// partition of trials into RNG substreams, so changing it changes the
/// stream (while thread count never does).
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64, chunk_size: u64) -> Result<Self> {
        if trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if chunk_size < 1 {
            return Err(Error::invalid("chunk_size must be >= 1"));
        }
        Ok(McConfig {
            trials,
            seed,
            chunk_size,
        })
    }
}

/// Result of a rejection-sampling volume estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub volume_estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
    pub bounding_box_volume: f64,
    pub seed: u64,
}

/// Half-widths of the tightest axis-aligned box containing the ball:
/// `h_d = r / s_d` per dimension (`s_d = 1` unweighted).
pub fn bounding_box(q: &BallQuery) -> Result<Vec<f64>> {
    let n = q.spec().n();
    match q.weights() {
        None => Ok(vec![q.r(); n]),
        Some(w) => {
            let s = weight_stretch_factors(q.spec(), w)?;
            Ok(s.iter().map(|s| q.r() / s).collect())
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Estimates the ball volume by rejection sampling in the bounding box.
pub fn mc_volume(q: &BallQuery, cfg: &McConfig) -> Result<EstimateReport> {
    let half_widths = bounding_box(q)?;
    let box_volume: f64 = half_widths.iter().map(|h| 2.0 * h).product();
    let metric = FlatMetric::new(q.spec(), q.weights());
    let r = q.r();
    let n = q.spec().n();

    let chunks = cfg.trials.div_ceil(cfg.chunk_size);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(cfg.seed, c);
            let trials_here = cfg.chunk_size.min(cfg.trials - c * cfg.chunk_size);
            let mut coords = vec![0.0f64; n];
            let mut hits = 0u64;
            for _ in 0..trials_here {
                for (x, h) in coords.iter_mut().zip(&half_widths) {
                    *x = h * (2.0 * rng.gen::<f64>() - 1.0);
                }
                if metric.distance_from_origin(&coords) <= r {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let p = hits as f64 / cfg.trials as f64;
    Ok(EstimateReport {
        volume_estimate: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / cfg.trials as f64).sqrt(),
        trials: cfg.trials,
        hits,
        bounding_box_volume: box_volume,
        seed: cfg.seed,
    })
}

/// Expected hit count of [`mc_volume`]; low values mean the rejection
/// estimator will be noisy.
pub fn predicted_hits(q: &BallQuery, trials: u64) -> Result<f64> {
    let half_widths = bounding_box(q)?;
    let log_box: f64 = half_widths.iter().map(|h| (2.0 * h).ln()).sum();
    let log_ball = ball_volume(q)?.log_value();
    Ok(trials as f64 * (log_ball - log_box).exp())
}

const SAMPLE_CHUNK: u64 = 8192;

/// Draws `count` points exactly uniformly from the ball.
///
/// Unweighted construction: total radius `s = r * U^(1/n)`, split into
/// per-domain radii by a Dirichlet(n_1, ..., n_k) draw, then a uniform
/// direction per domain. In the weighted case the unweighted sample is
/// stretched dimension-wise by `1 / s_d`.
pub fn sample_in_ball(q: &BallQuery, count: u64, seed: u64) -> Result<Vec<Point>> {
    if count < 1 {
        return Err(Error::invalid("count must be >= 1"));
    }
    let spec = q.spec();
    let n = spec.n();
    let sizes = spec.domain_sizes();
    let stretch = match q.weights() {
        Some(w) => Some(weight_stretch_factors(spec, w)?),
        None => None,
    };
    let gammas: Vec<Gamma<f64>> = sizes
        .iter()
        .map(|&s| Gamma::new(s as f64, 1.0).expect("positive shape"))
        .collect();
    let r = q.r();
    let inv_n = 1.0 / n as f64;

    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let per_chunk: Vec<Vec<Point>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let here = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut out = Vec::with_capacity(here as usize);
            let mut coords = vec![0.0f64; n];
            for _ in 0..here {
                let total = r * rng.gen::<f64>().powf(inv_n);
                // Dirichlet split via normalized Gamma variates
                let draws: Vec<f64> = gammas.iter().map(|g| g.sample(&mut rng)).collect();
                let sum: f64 = draws.iter().sum();
                for (i, (&size, draw)) in sizes.iter().zip(&draws).enumerate() {
                    let radius = total * draw / sum;
                    let range = spec.domain_range(i);
                    let mut norm_sq = 0.0;
                    for j in range.clone() {
                        let g: f64 = StandardNormal.sample(&mut rng);
                        coords[j] = g;
                        norm_sq += g * g;
                    }
                    let scale = radius / norm_sq.sqrt();
                    for j in range {
                        coords[j] *= scale;
                    }
                    debug_assert!(size >= 1);
                }
                let point = match &stretch {
                    Some(s) => coords.iter().zip(s).map(|(x, s)| x / s).collect(),
                    None => coords.clone(),
                };
                out.push(Point::new(point).expect("sampled coordinates are finite"));
            }
            out
        })
        .collect();

    Ok(per_chunk.into_iter().flatten().collect())
}
