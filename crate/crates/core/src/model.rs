//! Datasets, partitions and the inertia criteria.
//!
//! Cluster indices are 0-based throughout the library. Within inertia carries
//! the `1/n` factor, so values are mean squared distances to the assigned
//! barycenter.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Immutable `n x p` point set with optional ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    points: Matrix,
    truth_labels: Option<Vec<usize>>,
    truth_centroids: Option<Matrix>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, points: Matrix) -> Result<Self> {
        if points.rows() == 0 || points.cols() == 0 {
            return Err(Error::InvalidDataset(format!(
                "need at least one object and one variable, got {}x{}",
                points.rows(),
                points.cols()
            )));
        }
        if let Some(pos) = points.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite coordinate at object {}, variable {}",
                pos / points.cols(),
                pos % points.cols()
            )));
        }
        Ok(Self {
            name: name.into(),
            points,
            truth_labels: None,
            truth_centroids: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(name: impl Into<String>, rows: &[R]) -> Result<Self> {
        Self::new(name, Matrix::from_rows(rows)?)
    }

    /// Attaches ground-truth labels (0-based). The number of truth classes is
    /// `max(label) + 1`.
    pub fn with_truth_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: labels.len(),
            });
        }
        self.truth_labels = Some(labels);
        Ok(self)
    }

    pub fn with_truth_centroids(mut self, centroids: Matrix) -> Result<Self> {
        if centroids.cols() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                actual: centroids.cols(),
            });
        }
        self.truth_centroids = Some(centroids);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.points.rows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.points.cols()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn truth_labels(&self) -> Option<&[usize]> {
        self.truth_labels.as_deref()
    }

    pub fn truth_k(&self) -> Option<usize> {
        self.truth_labels
            .as_ref()
            .map(|l| l.iter().copied().max().map_or(0, |m| m + 1))
    }

    pub fn truth_centroids(&self) -> Option<&Matrix> {
        self.truth_centroids.as_ref()
    }

    /// Overall barycenter `g`.
    pub fn barycenter(&self) -> Vec<f64> {
        let mut g = vec![0.0; self.p()];
        for x in self.points.iter_rows() {
            for (gj, xj) in g.iter_mut().zip(x) {
                *gj += xj;
            }
        }
        let n = self.n() as f64;
        g.iter_mut().for_each(|v| *v /= n);
        g
    }

    /// Total inertia `I = (1/n) sum ||x_i - g||^2`; equals `W + B` for every
    /// partition.
    pub fn total_inertia(&self) -> f64 {
        let g = self.barycenter();
        self.points.iter_rows().map(|x| sq_dist(x, &g)).sum::<f64>() / self.n() as f64
    }
}

/// Axis-aligned box holding every object of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u)) {
            return Err(Error::InvalidParameter(
                "bounding box lower corner must not exceed upper corner".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^p`.
    pub fn cube(p: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; p], vec![hi; p])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// Uniform draw inside the box. Degenerate axes return their single value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| if u > l { rng.gen_range(l..=u) } else { l })
            .collect()
    }
}

/// One ant's (possibly partial) partition of the objects.
///
/// `assignment[i]` is `None` until object `i` has been classified; the
/// classified objects form the ant's tabu list. The within inertia is cached
/// and dropped on every mutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntSolution {
    assignment: Vec<Option<usize>>,
    centroids: Matrix,
    class_sizes: Vec<usize>,
    classified: usize,
    inertia: Option<f64>,
}

impl AntSolution {
    /// Empty solution for `n` objects around the given starting centroids.
    pub fn new(n: usize, centroids: Matrix) -> Self {
        let k = centroids.rows();
        Self {
            assignment: vec![None; n],
            centroids,
            class_sizes: vec![0; k],
            classified: 0,
            inertia: None,
        }
    }

    /// Complete solution from a labelling; centroids are the class means and
    /// empty classes keep the matching row of `fallback`.
    pub fn from_labels(data: &Dataset, labels: &[usize], fallback: &Matrix) -> Result<Self> {
        if labels.len() != data.n() {
            return Err(Error::DimensionMismatch {
                expected: data.n(),
                actual: labels.len(),
            });
        }
        let centroids = batch_centroids(data, labels, fallback)?;
        let mut class_sizes = vec![0; centroids.rows()];
        for &l in labels {
            class_sizes[l] += 1;
        }
        let mut sol = Self {
            assignment: labels.iter().map(|&l| Some(l)).collect(),
            centroids,
            class_sizes,
            classified: data.n(),
            inertia: None,
        };
        sol.ensure_inertia(data)?;
        Ok(sol)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.centroids.rows()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn centroids(&self) -> &Matrix {
        &self.centroids
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// Number of objects in the tabu list.
    pub fn tabu_len(&self) -> usize {
        self.classified
    }

    pub fn is_classified(&self, i: usize) -> bool {
        self.assignment[i].is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.classified == self.n()
    }

    /// Cached within inertia, `None` when stale.
    pub fn inertia(&self) -> Option<f64> {
        self.inertia
    }

    /// Complete assignment as plain labels.
    pub fn labels(&self) -> Result<Vec<usize>> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(i, a)| a.ok_or(Error::Unassigned(i)))
            .collect()
    }

    /// Classifies object `i` into class `k`: records the tabu entry, bumps
    /// the class size and moves the centroid incrementally.
    pub fn assign(&mut self, i: usize, k: usize, x: &[f64]) -> Result<()> {
        if k >= self.k() {
            return Err(Error::ClusterOutOfRange { index: k, k: self.k() });
        }
        if self.assignment[i].is_some() {
            return Err(Error::InvalidParameter(format!(
                "object {i} is already in the tabu list"
            )));
        }
        self.assignment[i] = Some(k);
        self.classified += 1;
        self.class_sizes[k] += 1;
        self.update_centroid_incremental(k, x)
    }

    /// `g_k := ((|C_k| - 1) g_k + x) / |C_k|`, where `class_sizes[k]` already
    /// counts `x`. A class of size one moves onto `x` regardless of its prior
    /// centroid.
    pub fn update_centroid_incremental(&mut self, k: usize, x: &[f64]) -> Result<()> {
        if k >= self.k() {
            return Err(Error::ClusterOutOfRange { index: k, k: self.k() });
        }
        if x.len() != self.centroids.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.centroids.cols(),
                actual: x.len(),
            });
        }
        let size = self.class_sizes[k];
        let g = self.centroids.row_mut(k);
        if size <= 1 {
            g.copy_from_slice(x);
        } else {
            let m = size as f64;
            for (gj, xj) in g.iter_mut().zip(x) {
                *gj = ((m - 1.0) * *gj + xj) / m;
            }
        }
        self.inertia = None;
        Ok(())
    }

    /// Empties the tabu list and class counts; centroids are kept as the
    /// starting point of the next construction.
    pub fn reset_tabu(&mut self) {
        self.assignment.iter_mut().for_each(|a| *a = None);
        self.class_sizes.iter_mut().for_each(|s| *s = 0);
        self.classified = 0;
        self.inertia = None;
    }

    /// Replaces the partition wholesale (complete labels and centroids).
    pub(crate) fn set_partition(&mut self, labels: &[usize], centroids: Matrix) {
        debug_assert_eq!(labels.len(), self.n());
        debug_assert_eq!(centroids.rows(), self.k());
        self.class_sizes.iter_mut().for_each(|s| *s = 0);
        for (a, &l) in self.assignment.iter_mut().zip(labels) {
            *a = Some(l);
            self.class_sizes[l] += 1;
        }
        self.classified = labels.len();
        self.centroids = centroids;
        self.inertia = None;
    }

    /// Computes and caches W if stale.
    pub fn ensure_inertia(&mut self, data: &Dataset) -> Result<f64> {
        if let Some(w) = self.inertia {
            return Ok(w);
        }
        let w = within_inertia(data, &self.assignment, &self.centroids)?;
        self.inertia = Some(w);
        Ok(w)
    }
}

/// Squared Euclidean distance without dimension checks.
#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(sq_dist(a, b))
}

fn check_partition<A>(data: &Dataset, assignment: &[A], centroids: &Matrix) -> Result<()> {
    if assignment.len() != data.n() {
        return Err(Error::DimensionMismatch {
            expected: data.n(),
            actual: assignment.len(),
        });
    }
    if centroids.cols() != data.p() {
        return Err(Error::DimensionMismatch {
            expected: data.p(),
            actual: centroids.cols(),
        });
    }
    Ok(())
}

fn label_of<A: Copy + Into<Option<usize>>>(i: usize, a: A, k: usize) -> Result<usize> {
    let l = a.into().ok_or(Error::Unassigned(i))?;
    if l >= k {
        return Err(Error::ClusterOutOfRange { index: l, k });
    }
    Ok(l)
}

/// `W = (1/n) sum_k sum_{x_i in C_k} ||x_i - g_k||^2`.
///
/// Accepts either complete labels (`&[usize]`) or a partial assignment
/// (`&[Option<usize>]`), in which case unclassified objects are an error.
pub fn within_inertia<A>(data: &Dataset, assignment: &[A], centroids: &Matrix) -> Result<f64>
where
    A: Copy + Into<Option<usize>>,
{
    check_partition(data, assignment, centroids)?;
    let k = centroids.rows();
    let mut total = 0.0;
    for (i, &a) in assignment.iter().enumerate() {
        let l = label_of(i, a, k)?;
        total += sq_dist(data.point(i), centroids.row(l));
    }
    Ok(total / data.n() as f64)
}

/// `B = sum_k (|C_k|/n) ||g_k - g||^2` with `g` the overall barycenter.
pub fn between_inertia<A>(data: &Dataset, assignment: &[A], centroids: &Matrix) -> Result<f64>
where
    A: Copy + Into<Option<usize>>,
{
    check_partition(data, assignment, centroids)?;
    let k = centroids.rows();
    let mut sizes = vec![0usize; k];
    for (i, &a) in assignment.iter().enumerate() {
        sizes[label_of(i, a, k)?] += 1;
    }
    let g = data.barycenter();
    let n = data.n() as f64;
    Ok(sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(c, &s)| s as f64 / n * sq_dist(centroids.row(c), &g))
        .sum())
}

/// Class means of a complete labelling. Classes with no members keep the
/// matching row of `previous`, which also fixes K.
pub fn batch_centroids(data: &Dataset, labels: &[usize], previous: &Matrix) -> Result<Matrix> {
    check_partition(data, labels, previous)?;
    let k = previous.rows();
    let mut sums = Matrix::zeros(k, data.p());
    let mut sizes = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::ClusterOutOfRange { index: l, k });
        }
        sizes[l] += 1;
        for (s, x) in sums.row_mut(l).iter_mut().zip(data.point(i)) {
            *s += x;
        }
    }
    for (c, &size) in sizes.iter().enumerate() {
        if size == 0 {
            sums.row_mut(c).copy_from_slice(previous.row(c));
        } else {
            let m = size as f64;
            sums.row_mut(c).iter_mut().for_each(|v| *v /= m);
        }
    }
    Ok(sums)
}

pub fn bounding_box(data: &Dataset) -> BoundingBox {
    let mut lower = data.point(0).to_vec();
    let mut upper = lower.clone();
    for x in data.points().iter_rows().skip(1) {
        for ((l, u), v) in lower.iter_mut().zip(upper.iter_mut()).zip(x) {
            *l = l.min(*v);
            *u = u.max(*v);
        }
    }
    BoundingBox { lower, upper }
}
