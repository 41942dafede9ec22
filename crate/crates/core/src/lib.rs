//! Geometry of conceptual spaces.
//!
//! A conceptual space is a real vector space whose dimensions are grouped
//! into domains. Distance inside a domain is weighted Euclidean; distance
//! across the whole space is the weighted Manhattan sum of the per-domain
//! distances. This crate provides:
//!
//! - [`space`]: the space definition (domains, dimensions, weights, points)
//!   and its JSON file format;
//! - [`metric`]: the combined distance and the similarity function
//!   `exp(-c * d)`;
//! - [`volume`]: closed-form hyperball volumes under the combined metric,
//!   computed in log-space, together with the special functions they need;
//! - [`sampler`]: a seeded Monte-Carlo volume estimator (rejection sampling
//!   in the bounding box) and an exact uniform in-ball sampler, both
//!   deterministic for a fixed seed regardless of thread count.

pub mod error;
pub mod metric;
pub mod sampler;
pub mod space;
pub mod volume;

pub use error::{Error, Result};
pub use metric::SimilarityParams;
pub use sampler::{EstimateReport, McConfig};
pub use space::{DomainSpec, Point, SpaceSpec, WeightSet};
pub use volume::{BallQuery, LogVolume};
