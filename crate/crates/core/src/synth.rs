//! Seeded Gaussian-mixture tables shaped like T105, T525 and T2100.
//!
//! The exact tables behind the published reference inertias are not
//! available, so each generated instance carries its own reference: the
//! within inertia of its ground-truth partition.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{batch_centroids, sq_dist, within_inertia, BoundingBox, Dataset};

/// Draw attempts per center before giving up on the separation constraint.
const MAX_CENTER_DRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub class_sizes: Vec<usize>,
    /// Per-coordinate variance of each class.
    pub class_variances: Vec<f64>,
    pub p: usize,
    pub center_box: BoundingBox,
    pub min_center_separation: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn n(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.class_sizes.is_empty() || self.class_sizes.contains(&0) {
            return Err(Error::InvalidParameter("class sizes must be positive".into()));
        }
        if self.class_variances.len() != self.class_sizes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.class_sizes.len(),
                actual: self.class_variances.len(),
            });
        }
        if self.class_variances.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("class variances must be positive".into()));
        }
        if self.p == 0 || self.center_box.dim() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                actual: self.center_box.dim(),
            });
        }
        if !(self.min_center_separation >= 0.0) {
            return Err(Error::InvalidParameter("separation must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    T105,
    T525,
    T2100,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::T105, Preset::T525, Preset::T2100];
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Preset::T105 => "T105",
            Preset::T525 => "T525",
            Preset::T2100 => "T2100",
        })
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T105" => Ok(Preset::T105),
            "T525" => Ok(Preset::T525),
            "T2100" => Ok(Preset::T2100),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Generator settings for a named table.
///
/// * T105: 105 objects, one class of 51 and six of 9; six unit-variance
///   classes and a seventh with variance 3.
/// * T525: 525 objects, one class of 265 and the other 260 split as
///   44/43/43/43/43/44, variances as T105.
/// * T2100: 2100 objects in seven classes of 300 with variances
///   0.5, 1.0, ..., 3.5.
///
/// All tables use p = 6, centers in `[0, 10]^6` at least 5 apart.
pub fn preset(name: Preset, seed: u64) -> GeneratorSpec {
    let p = 6;
    let t105_variances = vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
    let (class_sizes, class_variances) = match name {
        Preset::T105 => (vec![51, 9, 9, 9, 9, 9, 9], t105_variances),
        Preset::T525 => (vec![265, 44, 43, 43, 43, 43, 44], t105_variances),
        Preset::T2100 => (vec![300; 7], (1..=7).map(|v| v as f64 * 0.5).collect()),
    };
    GeneratorSpec {
        name: format!("{name}-seed{seed}"),
        class_sizes,
        class_variances,
        p,
        center_box: BoundingBox::cube(p, 0.0, 10.0).expect("valid cube"),
        min_center_separation: 5.0,
        seed,
    }
}

fn place_centers(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    let min_sq = spec.min_center_separation * spec.min_center_separation;
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(spec.k());
    for _ in 0..spec.k() {
        let mut placed = false;
        for _ in 0..MAX_CENTER_DRAWS {
            let c = spec.center_box.sample(rng);
            if centers.iter().all(|o| sq_dist(o, &c) >= min_sq) {
                centers.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::SeparationUnattainable {
                k: spec.k(),
                separation: spec.min_center_separation,
                attempts: MAX_CENTER_DRAWS,
            });
        }
    }
    Ok(centers)
}

/// Draws the mixture. Objects are stored class by class; truth labels and
/// empirical class means are attached.
pub fn generate(spec: &GeneratorSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers = place_centers(spec, &mut rng)?;
    let mut data = Vec::with_capacity(spec.n() * spec.p);
    let mut labels = Vec::with_capacity(spec.n());
    for (k, (&size, &var)) in spec.class_sizes.iter().zip(&spec.class_variances).enumerate() {
        let noise = Normal::new(0.0, var.sqrt()).expect("positive variance");
        for _ in 0..size {
            data.extend(centers[k].iter().map(|c| c + noise.sample(&mut rng)));
            labels.push(k);
        }
    }
    let points = Matrix::from_vec(spec.n(), spec.p, data)?;
    let dataset = Dataset::new(spec.name.clone(), points)?;
    let means = batch_centroids(&dataset, &labels, &Matrix::from_rows(&centers)?)?;
    dataset.with_truth_labels(labels)?.with_truth_centroids(means)
}

/// Within inertia of the ground-truth partition around its class means.
pub fn reference_inertia(data: &Dataset) -> Result<f64> {
    let labels = data.truth_labels().ok_or(Error::MissingLabels)?;
    let k = data.truth_k().unwrap_or(0);
    let fallback = Matrix::zeros(k, data.p());
    let means = batch_centroids(data, labels, &fallback)?;
    within_inertia(data, labels, &means)
}
