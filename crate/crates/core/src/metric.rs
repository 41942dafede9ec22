//! The combined conceptual-space metric and the similarity function.
//!
//! Within a domain the distance is weighted Euclidean,
//! `sqrt(sum_d w_d (x_d - y_d)^2)`; across the space it is the weighted
//! Manhattan sum `sum_delta w_delta * d_delta`. Summation follows the
//! canonical domain order so results are bit-reproducible across runs.
//! Plain summation is used; dimension counts at desk scale do not warrant
//! compensated sums.

use crate::error::{Error, Result};
use crate::space::{Point, SpaceSpec, WeightSet};

/// Sensitivity constant of the similarity function `exp(-c * d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityParams {
    c: f64,
}

impl SimilarityParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!("similarity constant c must be positive and finite, got {c}")));
        }
        Ok(SimilarityParams { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Weights and coordinate layout flattened for repeated distance
/// evaluations (the Monte-Carlo inner loop).
pub(crate) struct FlatMetric {
    domains: Vec<FlatDomain>,
}

struct FlatDomain {
    weight: f64,
    start: usize,
    end: usize,
    dim_weights: Vec<f64>,
}

impl FlatMetric {
    pub fn new(spec: &SpaceSpec, weights: Option<&WeightSet>) -> Self {
        let domains = spec
            .domains()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let range = spec.domain_range(i);
                let (weight, dim_weights) = match weights {
                    Some(w) => (
                        w.domain_weight(&d.name).unwrap(),
                        d.dimensions.iter().map(|dim| w.dimension_weight(dim).unwrap()).collect(),
                    ),
                    // Unweighted metric: plain sums, not uniform weights.
                    None => (1.0, vec![1.0; d.dimensions.len()]),
                };
                FlatDomain {
                    weight,
                    start: range.start,
                    end: range.end,
                    dim_weights,
                }
            })
            .collect();
        FlatMetric { domains }
    }

    pub fn distance_from_origin(&self, coords: &[f64]) -> f64 {
        self.domains
            .iter()
            .map(|d| {
                let sq: f64 = coords[d.start..d.end]
                    .iter()
                    .zip(&d.dim_weights)
                    .map(|(x, w)| w * x * x)
                    .sum();
                d.weight * sq.sqrt()
            })
            .sum()
    }
}

/// Weighted Euclidean distance between `x` and `y` within one domain.
pub fn domain_distance(
    spec: &SpaceSpec,
    weights: &WeightSet,
    domain: &str,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    let i = spec.domain_index(domain)?;
    spec.check_point(x)?;
    spec.check_point(y)?;
    Ok(domain_distance_by_index(spec, weights, i, x.coords(), y.coords()))
}

fn domain_distance_by_index(
    spec: &SpaceSpec,
    weights: &WeightSet,
    i: usize,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let d = &spec.domains()[i];
    let range = spec.domain_range(i);
    let sq: f64 = range
        .clone()
        .zip(&d.dimensions)
        .map(|(j, dim)| {
            let w = weights.dimension_weight(dim).unwrap_or(0.0);
            let diff = x[j] - y[j];
            w * diff * diff
        })
        .sum();
    sq.sqrt()
}

/// The combined distance: weighted Manhattan sum of per-domain distances.
pub fn combined_distance(spec: &SpaceSpec, weights: &WeightSet, x: &Point, y: &Point) -> Result<f64> {
    spec.check_point(x)?;
    spec.check_point(y)?;
    let mut total = 0.0;
    for (i, d) in spec.domains().iter().enumerate() {
        let w = weights.domain_weight(&d.name).unwrap_or(0.0);
        total += w * domain_distance_by_index(spec, weights, i, x.coords(), y.coords());
    }
    Ok(total)
}

/// `Sim(x, y) = exp(-c * d(x, y))`, always in `(0, 1]`.
pub fn similarity(
    spec: &SpaceSpec,
    weights: &WeightSet,
    params: SimilarityParams,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    let d = combined_distance(spec, weights, x, y)?;
    Ok((-params.c() * d).exp())
}
