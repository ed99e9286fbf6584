//! Run records, multistart summaries and the centroid index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::sq_dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "KM")]
    Km,
    #[serde(rename = "BACO")]
    Baco,
    #[serde(rename = "BACOK")]
    Bacok,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Algorithm::Km => "KM",
            Algorithm::Baco => "BACO",
            Algorithm::Bacok => "BACOK",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "km" | "kmeans" => Ok(Algorithm::Km),
            "baco" => Ok(Algorithm::Baco),
            "bacok" => Ok(Algorithm::Bacok),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub final_w: f64,
    pub iterations: usize,
    pub elapsed_seconds: f64,
    /// Whether `final_w` matched the reference inertia.
    pub hit: bool,
    /// Set when the best inertia was zero and best-ant intensification had
    /// to be skipped.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub intensification_skipped: bool,
}

/// Aggregate of a multistart, in the column order
/// `performance_pct, w_stddev, time_mean, time_stddev`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub performance_pct: f64,
    pub w_stddev: f64,
    pub time_mean: f64,
    pub time_stddev: f64,
    pub runs: usize,
}

impl SummaryStats {
    pub const CSV_HEADER: &'static str = "performance_pct,w_stddev,time_mean,time_stddev";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.performance_pct, self.w_stddev, self.time_mean, self.time_stddev
        )
    }

    pub fn hits(&self) -> usize {
        (self.performance_pct * self.runs as f64 / 100.0).round() as usize
    }
}

/// `|w - reference| / reference <= rel_tol`.
pub fn is_hit(w: f64, reference: f64, rel_tol: f64) -> bool {
    (w - reference).abs() <= rel_tol * reference.abs()
}

/// Population mean and standard deviation.
pub(crate) fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (count, sum) = values.clone().fold((0usize, 0.0), |(c, s), v| (c + 1, s + v));
    if count == 0 {
        return (0.0, 0.0);
    }
    let mean = sum / count as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
    (mean, var.sqrt())
}

/// Share of runs whose final inertia matches `w_reference`, with the spread
/// of inertia and time over all runs.
pub fn performance_percentage(records: &[RunRecord], w_reference: f64, rel_tol: f64) -> SummaryStats {
    let runs = records.len();
    let hits = records
        .iter()
        .filter(|r| is_hit(r.final_w, w_reference, rel_tol))
        .count();
    // sort first so the floating-point sums do not depend on record order
    let mut ws: Vec<f64> = records.iter().map(|r| r.final_w).collect();
    let mut ts: Vec<f64> = records.iter().map(|r| r.elapsed_seconds).collect();
    ws.sort_by(f64::total_cmp);
    ts.sort_by(f64::total_cmp);
    let (_, w_stddev) = mean_std(ws.iter().copied());
    let (time_mean, time_stddev) = mean_std(ts.iter().copied());
    SummaryStats {
        performance_pct: if runs == 0 {
            0.0
        } else {
            100.0 * hits as f64 / runs as f64
        },
        w_stddev,
        time_mean,
        time_stddev,
        runs,
    }
}

fn orphans(from: &Matrix, to: &Matrix) -> usize {
    let mut mapped = vec![false; to.rows()];
    for a in from.iter_rows() {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, b) in to.iter_rows().enumerate() {
            let d = sq_dist(a, b);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        mapped[best] = true;
    }
    mapped.iter().filter(|m| !**m).count()
}

/// Centroid index: map every centroid to its nearest counterpart in the
/// other set, count the counterparts nobody mapped to, and take the larger
/// count over both directions. Zero means the two clusterings have the same
/// cluster-level structure.
pub fn centroid_index(a: &Matrix, b: &Matrix) -> Result<usize> {
    if a.rows() == 0 || b.rows() == 0 {
        return Err(Error::EmptyCentroids);
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            actual: b.cols(),
        });
    }
    Ok(orphans(a, b).max(orphans(b, a)))
}
