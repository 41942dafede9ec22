//! Space definition: domains, dimensions, weights, and points.
//!
//! The on-disk format is a UTF-8 JSON document:
//!
//! ```json
//! {
//!   "domains": [
//!     {"name": "color", "dimensions": ["hue", "sat", "bri"]},
//!     {"name": "size", "dimensions": ["diam"]}
//!   ],
//!   "weights": {
//!     "domains": {"color": 1.0, "size": 1.0},
//!     "dimensions": {"hue": 0.3333, "sat": 0.3333, "bri": 0.3334, "diam": 1.0}
//!   }
//! }
//! ```
//!
//! The `weights` key is optional; when absent, the uniform weights
//! (`w_d = 1/n_delta`, `w_delta = 1`) apply.

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for the weight-sum constraints on file input.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// One domain: a named, ordered group of dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub name: String,
    pub dimensions: Vec<String>,
}

/// The domain structure of a conceptual space.
///
/// Dimension order is canonical: point coordinates follow the file order of
/// domains and, within each domain, the file order of dimensions. All types
/// here are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSpec {
    domains: Vec<DomainSpec>,
    n: usize,
    offsets: Vec<usize>,
}

impl SpaceSpec {
    pub fn new(domains: Vec<DomainSpec>) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut domain_names = HashSet::new();
        let mut dim_names = HashSet::new();
        for d in &domains {
            if d.dimensions.is_empty() {
                return Err(Error::EmptyDomain(d.name.clone()));
            }
            if !domain_names.insert(d.name.as_str()) {
                return Err(Error::DuplicateDomain(d.name.clone()));
            }
            for dim in &d.dimensions {
                if !dim_names.insert(dim.as_str()) {
                    return Err(Error::DuplicateDimension(dim.clone()));
                }
            }
        }
        let mut offsets = Vec::with_capacity(domains.len() + 1);
        let mut n = 0;
        for d in &domains {
            offsets.push(n);
            n += d.dimensions.len();
        }
        offsets.push(n);
        Ok(SpaceSpec {
            domains,
            n,
            offsets,
        })
    }

    /// Total number of dimensions.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of domains, `k`.
    pub fn domain_count(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[DomainSpec] {
        &self.domains
    }

    /// Per-domain dimension counts, in canonical order.
    pub fn domain_sizes(&self) -> Vec<usize> {
        self.domains.iter().map(|d| d.dimensions.len()).collect()
    }

    /// Coordinate range of domain `i` within a point vector.
    pub fn domain_range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn domain_index(&self, name: &str) -> Result<usize> {
        self.domains
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::UnknownDomain(name.to_string()))
    }

    /// All dimension names in canonical order.
    pub fn dimension_names(&self) -> Vec<&str> {
        self.domains
            .iter()
            .flat_map(|d| d.dimensions.iter().map(String::as_str))
            .collect()
    }

    /// Checks that a point conforms to this space.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.coords.len() != self.n {
            return Err(Error::PointLength {
                expected: self.n,
                actual: p.coords.len(),
            });
        }
        Ok(())
    }
}

/// Domain weights `w_delta` and dimension weights `w_d`.
///
/// Constraints: all weights positive, dimension weights sum to 1 within each
/// domain, domain weights sum to the number of domains. Construct with
/// [`WeightSet::new`] (validates and renormalizes) or [`WeightSet::uniform`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    domain_weights: BTreeMap<String, f64>,
    dimension_weights: BTreeMap<String, f64>,
}

impl WeightSet {
    /// Validates the given weights against `spec` and renormalizes them so
    /// that the sum constraints hold exactly in floating point.
    pub fn new(
        spec: &SpaceSpec,
        domain_weights: BTreeMap<String, f64>,
        dimension_weights: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let raw = WeightSet {
            domain_weights,
            dimension_weights,
        };
        validate_weights(spec, &raw)?;
        Ok(raw.renormalized(spec))
    }

    /// The uniform default: `w_d = 1/n_delta`, `w_delta = 1`.
    pub fn uniform(spec: &SpaceSpec) -> Self {
        let mut domain_weights = BTreeMap::new();
        let mut dimension_weights = BTreeMap::new();
        for d in spec.domains() {
            domain_weights.insert(d.name.clone(), 1.0);
            let w = 1.0 / d.dimensions.len() as f64;
            for dim in &d.dimensions {
                dimension_weights.insert(dim.clone(), w);
            }
        }
        WeightSet {
            domain_weights,
            dimension_weights,
        }
    }

    pub fn domain_weight(&self, name: &str) -> Option<f64> {
        self.domain_weights.get(name).copied()
    }

    pub fn dimension_weight(&self, name: &str) -> Option<f64> {
        self.dimension_weights.get(name).copied()
    }

    pub fn domain_weights(&self) -> &BTreeMap<String, f64> {
        &self.domain_weights
    }

    pub fn dimension_weights(&self) -> &BTreeMap<String, f64> {
        &self.dimension_weights
    }

    /// Weights flattened into canonical spec order:
    /// one `w_delta` per domain, one `w_d` per dimension.
    pub fn flattened(&self, spec: &SpaceSpec) -> (Vec<f64>, Vec<f64>) {
        let domain_w = spec
            .domains()
            .iter()
            .map(|d| self.domain_weights[&d.name])
            .collect();
        let dim_w = spec
            .domains()
            .iter()
            .flat_map(|d| d.dimensions.iter().map(|dim| self.dimension_weights[dim]))
            .collect();
        (domain_w, dim_w)
    }

    /// Divides each domain's dimension weights by their sum and rescales the
    /// domain weights so both sum constraints hold exactly.
    fn renormalized(&self, spec: &SpaceSpec) -> Self {
        let mut out = self.clone();
        for d in spec.domains() {
            let sum: f64 = d.dimensions.iter().map(|dim| self.dimension_weights[dim]).sum();
            for dim in &d.dimensions {
                *out.dimension_weights.get_mut(dim).unwrap() /= sum;
            }
        }
        let dsum: f64 = self.domain_weights.values().sum();
        let scale = spec.domain_count() as f64 / dsum;
        for w in out.domain_weights.values_mut() {
            *w *= scale;
        }
        out
    }
}

/// Checks every `WeightSet` invariant against `spec`, reporting the first
/// violated constraint.
pub fn validate_weights(spec: &SpaceSpec, w: &WeightSet) -> Result<()> {
    for (name, &value) in &w.domain_weights {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonpositiveWeight {
                kind: "domain",
                name: name.clone(),
                value,
            });
        }
    }
    for (name, &value) in &w.dimension_weights {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonpositiveWeight {
                kind: "dimension",
                name: name.clone(),
                value,
            });
        }
    }
    // Exact coverage: same domains, same dimensions, nothing extra.
    for d in spec.domains() {
        if !w.domain_weights.contains_key(&d.name) {
            return Err(Error::WeightCoverage(format!("missing weight for domain `{}`", d.name)));
        }
        for dim in &d.dimensions {
            if !w.dimension_weights.contains_key(dim) {
                return Err(Error::WeightCoverage(format!("missing weight for dimension `{dim}`")));
            }
        }
    }
    if w.domain_weights.len() != spec.domain_count() {
        return Err(Error::WeightCoverage(
            "weights name a domain not in the space".to_string(),
        ));
    }
    if w.dimension_weights.len() != spec.n() {
        return Err(Error::WeightCoverage(
            "weights name a dimension not in the space".to_string(),
        ));
    }
    for d in spec.domains() {
        let sum: f64 = d.dimensions.iter().map(|dim| w.dimension_weights[dim]).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::DimensionWeightSum {
                domain: d.name.clone(),
                actual: sum,
                residual: (sum - 1.0).abs(),
            });
        }
    }
    let k = spec.domain_count() as f64;
    let dsum: f64 = w.domain_weights.values().sum();
    if (dsum - k).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::DomainWeightSum {
            expected: k,
            actual: dsum,
            residual: (dsum - k).abs(),
        });
    }
    Ok(())
}

/// A point in the space: one coordinate per dimension, canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index });
        }
        Ok(Point { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[derive(Serialize, Deserialize)]
struct WeightsFile {
    domains: BTreeMap<String, f64>,
    dimensions: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    domains: Vec<DomainSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<WeightsFile>,
}

/// Parses a space-definition document. Weights, when present, are validated
/// and renormalized; `None` means the caller should fall back to
/// [`WeightSet::uniform`].
pub fn parse_space(text: &str) -> Result<(SpaceSpec, Option<WeightSet>)> {
    let (spec, weights) = parse_space_lenient(text)?;
    let weights = match weights {
        Some(w) => {
            validate_weights(&spec, &w)?;
            Some(w.renormalized(&spec))
        }
        None => None,
    };
    Ok((spec, weights))
}

/// Like [`parse_space`] but skips weight validation, so callers can report
/// every violated constraint instead of the first.
pub fn parse_space_lenient(text: &str) -> Result<(SpaceSpec, Option<WeightSet>)> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let spec = SpaceSpec::new(file.domains)?;
    let weights = file.weights.map(|w| WeightSet {
        domain_weights: w.domains,
        dimension_weights: w.dimensions,
    });
    Ok((spec, weights))
}

/// Serializes a space (and optional weights) back to the JSON file format.
pub fn serialize_space(spec: &SpaceSpec, weights: Option<&WeightSet>) -> String {
    let file = SpaceFile {
        domains: spec.domains().to_vec(),
        weights: weights.map(|w| WeightsFile {
            domains: w.domain_weights.clone(),
            dimensions: w.dimension_weights.clone(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("space serialization cannot fail")
}
