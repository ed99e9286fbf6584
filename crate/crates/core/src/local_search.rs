//! Lloyd's K-means used as a local search, and its hybrid with the colony.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aco::{run_colony, AcoParams, RunOutcome};
use crate::error::{Error, Result};
use crate::eval::{Algorithm, RunRecord};
use crate::matrix::Matrix;
use crate::model::{batch_centroids, bounding_box, sq_dist, AntSolution, Dataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    /// Stop once consecutive inertias differ by less than this (absolute).
    pub convergence_tol: f64,
    /// Hard cap on Lloyd steps.
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            convergence_tol: 1e-4,
            max_iter: 500,
        }
    }
}

impl KMeansConfig {
    /// The looser `1e-3` threshold used by the standalone K-means baseline.
    pub fn coarse() -> Self {
        Self {
            convergence_tol: 1e-3,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "K-means convergence tolerance must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "K-means needs at least one iteration".into(),
            ));
        }
        Ok(())
    }
}

/// Index of the nearest centroid; ties go to the lowest index.
fn nearest(x: &[f64], centroids: &Matrix) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, g) in centroids.iter_rows().enumerate() {
        let d = sq_dist(x, g);
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// One Lloyd step: nearest-centroid reassignment followed by barycenter
/// recomputation. Empty classes keep their centroid.
pub fn lloyd_step(data: &Dataset, solution: &mut AntSolution) -> Result<f64> {
    if solution.n() != data.n() {
        return Err(Error::DimensionMismatch {
            expected: data.n(),
            actual: solution.n(),
        });
    }
    let labels: Vec<usize> = data
        .points()
        .iter_rows()
        .map(|x| nearest(x, solution.centroids()))
        .collect();
    let centroids = batch_centroids(data, &labels, solution.centroids())?;
    solution.set_partition(&labels, centroids);
    solution.ensure_inertia(data)
}

/// Repeats [`lloyd_step`] until the inertia changes by less than
/// `convergence_tol` or `max_iter` steps were taken. At least one step is
/// always taken. Returns the number of steps.
pub fn kmeans_local_search(
    data: &Dataset,
    solution: &mut AntSolution,
    config: &KMeansConfig,
) -> Result<usize> {
    let mut previous = if solution.is_complete() {
        Some(solution.ensure_inertia(data)?)
    } else {
        None
    };
    let mut steps = 0;
    loop {
        let w = lloyd_step(data, solution)?;
        steps += 1;
        if matches!(previous, Some(p) if (p - w).abs() < config.convergence_tol)
            || steps >= config.max_iter
        {
            return Ok(steps);
        }
        previous = Some(w);
    }
}

/// BACO with every ant refined by K-means after each iteration's pheromone
/// updates; refined centroids seed the next construction.
pub fn run_bacok(data: &Dataset, params: &AcoParams, config: &KMeansConfig) -> Result<RunOutcome> {
    config.validate()?;
    let refine = |d: &Dataset, ant: &mut AntSolution| kmeans_local_search(d, ant, config).map(drop);
    run_colony(data, params, Algorithm::Bacok, Some(&refine))
}

/// Plain K-means from `k` centroids drawn uniformly in the bounding box.
pub fn run_kmeans(data: &Dataset, k: usize, seed: u64, config: &KMeansConfig) -> Result<RunOutcome> {
    config.validate()?;
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bbox = bounding_box(data);
    let rows: Vec<Vec<f64>> = (0..k).map(|_| bbox.sample(&mut rng)).collect();
    let mut solution = AntSolution::new(data.n(), Matrix::from_rows(&rows)?);
    let steps = kmeans_local_search(data, &mut solution, config)?;
    let w = solution.ensure_inertia(data)?;
    Ok(RunOutcome {
        record: RunRecord {
            algorithm: Algorithm::Km,
            seed,
            final_w: w,
            iterations: steps,
            elapsed_seconds: start.elapsed().as_secs_f64(),
            hit: false,
            intensification_skipped: false,
        },
        best: solution,
        history: vec![w],
    })
}
