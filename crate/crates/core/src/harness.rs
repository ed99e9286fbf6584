//! Single runs, seeded multistart benchmarks and parameter-grid sweeps.
//!
//! Runs execute on the current rayon pool; results are always collected in
//! run-index (and grid) order so outputs do not depend on scheduling.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::{run_baco, AcoParams, RunOutcome};
use crate::error::{Error, Result};
use crate::eval::{is_hit, performance_percentage, Algorithm, RunRecord, SummaryStats};
use crate::ingest::{format_labels, format_matrix, write_text};
use crate::local_search::{run_bacok, run_kmeans, KMeansConfig};
use crate::model::Dataset;
use crate::synth::reference_inertia;

/// Algorithm plus everything needed to run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solver {
    pub algorithm: Algorithm,
    pub params: AcoParams,
    pub kmeans: KMeansConfig,
}

impl Solver {
    pub fn new(algorithm: Algorithm, params: AcoParams) -> Self {
        Self {
            algorithm,
            params,
            kmeans: KMeansConfig::default(),
        }
    }

    /// One run with the given seed (overrides `params.seed`).
    pub fn run(&self, data: &Dataset, seed: u64) -> Result<RunOutcome> {
        let params = AcoParams {
            seed,
            ..self.params.clone()
        };
        match self.algorithm {
            Algorithm::Km => run_kmeans(data, params.k_clusters, seed, &self.kmeans),
            Algorithm::Baco => run_baco(data, &params),
            Algorithm::Bacok => run_bacok(data, &params, &self.kmeans),
        }
    }
}

/// Where the reference inertia used for hit counting came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceSource {
    /// Supplied by the caller.
    Given,
    /// Within inertia of the dataset's ground-truth partition.
    Truth,
    /// Best inertia observed in the multistart itself.
    SelfReferential,
}

/// Reference from the caller or the ground truth; `None` means the caller
/// has to fall back to the best observed value.
fn known_reference(data: &Dataset, given: Option<f64>) -> Result<Option<(f64, ReferenceSource)>> {
    if let Some(w) = given {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidParameter("reference inertia must be positive".into()));
        }
        return Ok(Some((w, ReferenceSource::Given)));
    }
    if data.truth_labels().is_some() {
        return Ok(Some((reference_inertia(data)?, ReferenceSource::Truth)));
    }
    Ok(None)
}

fn resolve_reference<'a>(
    data: &Dataset,
    given: Option<f64>,
    records: impl Iterator<Item = &'a RunRecord>,
) -> Result<(f64, ReferenceSource)> {
    match known_reference(data, given)? {
        Some(r) => Ok(r),
        None => {
            let best = records.map(|r| r.final_w).fold(f64::INFINITY, f64::min);
            Ok((best, ReferenceSource::SelfReferential))
        }
    }
}

fn finish_records(records: &mut [RunRecord], reference: f64, rel_tol: f64, timing: bool) {
    for r in records {
        r.hit = is_hit(r.final_w, reference, rel_tol);
        if !timing {
            r.elapsed_seconds = 0.0;
        }
    }
}

/// Executes `seeds.len()` runs in parallel, returning outcomes in seed order.
fn run_many(data: &Dataset, solver: &Solver, seeds: &[u64]) -> Result<Vec<RunOutcome>> {
    seeds
        .par_iter()
        .map(|&seed| solver.run(data, seed))
        .collect()
}

/// Runs one seeded solve; the hit flag is set against the ground-truth or
/// given reference when one is available.
pub fn cluster(data: &Dataset, solver: &Solver, seed: u64, w_reference: Option<f64>) -> Result<RunOutcome> {
    let mut outcome = solver.run(data, seed)?;
    if let Some((w, _)) = known_reference(data, w_reference)? {
        outcome.record.hit = is_hit(outcome.record.final_w, w, solver.params.hit_rel_tol);
    }
    Ok(outcome)
}

/// Writes `assignments.txt` (1-based labels), `centroids.csv` and `run.json`
/// into `dir`.
pub fn write_solution(dir: impl AsRef<Path>, outcome: &RunOutcome) -> Result<()> {
    let dir = dir.as_ref();
    write_text(dir.join("assignments.txt"), &format_labels(&outcome.best.labels()?))?;
    write_text(dir.join("centroids.csv"), &format_matrix(outcome.best.centroids()))?;
    let json = serde_json::to_string_pretty(&outcome.record)?;
    write_text(dir.join("run.json"), &(json + "\n"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkOptions {
    pub runs: usize,
    /// Run `r` uses seed `master_seed + r`.
    pub master_seed: u64,
    pub w_reference: Option<f64>,
    /// Record wall-clock times; when off, times are reported as zero.
    pub timing: bool,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        Self {
            runs: 100,
            master_seed: 0,
            w_reference: None,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub reference_w: f64,
    pub reference_source: ReferenceSource,
    pub summary: SummaryStats,
    pub records: Vec<RunRecord>,
    /// Lowest-inertia run; earliest run index on ties.
    #[serde(skip)]
    pub best: Option<RunOutcome>,
}

impl BenchmarkReport {
    pub const CSV_HEADER: &'static str =
        "dataset,algorithm,reference_w,reference_source,performance_pct,w_stddev,time_mean,time_stddev";

    pub fn csv_row(&self) -> String {
        let source = serde_json::to_value(self.reference_source)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        format!(
            "{},{},{:?},{},{}",
            self.dataset,
            self.algorithm,
            self.reference_w,
            source,
            self.summary.csv_row()
        )
    }

    /// Writes `summary.csv`, `summary.json`, `runs.json` and the best run's
    /// solution files into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        write_text(
            dir.join("summary.csv"),
            &format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row()),
        )?;
        let summary = SummaryRow {
            dataset: &self.dataset,
            algorithm: self.algorithm,
            reference_w: self.reference_w,
            reference_source: self.reference_source,
            summary: &self.summary,
        };
        write_text(dir.join("summary.json"), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
        write_text(dir.join("runs.json"), &(serde_json::to_string_pretty(&self.records)? + "\n"))?;
        if let Some(best) = &self.best {
            write_solution(dir.join("best"), best)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    dataset: &'a str,
    algorithm: Algorithm,
    reference_w: f64,
    reference_source: ReferenceSource,
    #[serde(flatten)]
    summary: &'a SummaryStats,
}

/// Multistart benchmark with hit counting against a reference inertia.
pub fn benchmark(data: &Dataset, solver: &Solver, options: &BenchmarkOptions) -> Result<BenchmarkReport> {
    if options.runs == 0 {
        return Err(Error::InvalidParameter("need at least one run".into()));
    }
    let seeds: Vec<u64> = (0..options.runs as u64)
        .map(|r| options.master_seed.wrapping_add(r))
        .collect();
    let outcomes = run_many(data, solver, &seeds)?;
    let mut records: Vec<RunRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    let (reference_w, reference_source) =
        resolve_reference(data, options.w_reference, records.iter())?;
    finish_records(&mut records, reference_w, solver.params.hit_rel_tol, options.timing);
    let summary = performance_percentage(&records, reference_w, solver.params.hit_rel_tol);
    let best = outcomes
        .into_iter()
        .zip(&records)
        .fold(None, |acc: Option<RunOutcome>, (mut o, r)| {
            o.record = r.clone();
            match acc {
                Some(b) if b.record.final_w <= o.record.final_w => Some(b),
                _ => Some(o),
            }
        });
    Ok(BenchmarkReport {
        dataset: data.name().to_string(),
        algorithm: solver.algorithm,
        reference_w,
        reference_source,
        summary,
        records,
        best,
    })
}

/// How sweep runs are seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedScheme {
    /// Run `r` of every cell uses `master ^ mix(r)`: cells are compared on
    /// common random numbers.
    #[default]
    Paired,
    /// Run `r` of a cell uses `master ^ mix(cell parameters, r)`.
    PerCell,
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run` in the cell with parameters `cell`. Depends only on the
/// cell's own values, so any sub-grid reproduces the full grid's runs.
pub fn sweep_seed(master: u64, scheme: SeedScheme, cell: [f64; 4], run: usize) -> u64 {
    let mut h = mix64(run as u64);
    if scheme == SeedScheme::PerCell {
        for v in cell {
            h = mix64(h ^ v.to_bits());
        }
    }
    master ^ h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub alpha_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub runs_per_cell: usize,
    pub master_seed: u64,
    pub seed_scheme: SeedScheme,
    pub w_reference: Option<f64>,
}

impl SweepSpec {
    /// The full published grid: rho in 0.1..0.9, alpha and beta in 0..6 by
    /// 0.5, Q in 50..500 by 50.
    pub fn full_grid(runs_per_cell: usize) -> Self {
        let halves: Vec<f64> = (0..=12).map(|v| v as f64 * 0.5).collect();
        Self {
            alpha_values: halves.clone(),
            beta_values: halves,
            rho_values: (1..=9).map(|v| v as f64 / 10.0).collect(),
            q_values: (1..=10).map(|v| v as f64 * 50.0).collect(),
            runs_per_cell,
            master_seed: 0,
            seed_scheme: SeedScheme::Paired,
            w_reference: None,
        }
    }

    pub fn cardinality(&self) -> usize {
        self.alpha_values.len() * self.beta_values.len() * self.rho_values.len() * self.q_values.len()
    }

    /// Cells in grid order: alpha slowest, then beta, rho, Q fastest.
    pub fn cells(&self) -> Vec<[f64; 4]> {
        let mut out = Vec::with_capacity(self.cardinality());
        for &a in &self.alpha_values {
            for &b in &self.beta_values {
                for &r in &self.rho_values {
                    for &q in &self.q_values {
                        out.push([a, b, r, q]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub q: f64,
    pub stats: SummaryStats,
}

/// Performance surface over a parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub alpha_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub runs_per_cell: usize,
    pub reference_w: f64,
    pub reference_source: ReferenceSource,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub const CSV_HEADER: &'static str = "alpha,beta,rho,q,performance_pct,w_stddev";

    pub fn get(&self, alpha: f64, beta: f64, rho: f64, q: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.alpha == alpha && c.beta == beta && c.rho == rho && c.q == q)
    }

    /// Long-format table, one row per cell in grid order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.alpha, c.beta, c.rho, c.q, c.stats.performance_pct, c.stats.w_stddev
            ));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Runs `runs_per_cell` seeded solves for every (alpha, beta, rho, Q) cell.
///
/// All cells share one reference inertia: the given one, the ground truth's,
/// or (when neither exists) the best value seen anywhere in the grid.
pub fn sweep(data: &Dataset, solver: &Solver, spec: &SweepSpec) -> Result<SweepGrid> {
    let spec = SweepSpec {
        alpha_values: sorted(&spec.alpha_values),
        beta_values: sorted(&spec.beta_values),
        rho_values: sorted(&spec.rho_values),
        q_values: sorted(&spec.q_values),
        ..spec.clone()
    };
    if spec.cardinality() == 0 {
        return Err(Error::InvalidParameter("every sweep axis needs at least one value".into()));
    }
    if spec.runs_per_cell == 0 {
        return Err(Error::InvalidParameter("need at least one run per cell".into()));
    }
    let cells = spec.cells();
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.runs_per_cell).map(move |r| (c, r)))
        .collect();
    let records: Vec<RunRecord> = tasks
        .par_iter()
        .map(|&(c, r)| {
            let [alpha, beta, rho, q] = cells[c];
            let cell_solver = Solver {
                params: AcoParams {
                    alpha,
                    beta,
                    rho,
                    q,
                    ..solver.params.clone()
                },
                ..solver.clone()
            };
            let seed = sweep_seed(spec.master_seed, spec.seed_scheme, cells[c], r);
            cell_solver.run(data, seed).map(|o| o.record)
        })
        .collect::<Result<_>>()?;
    let (reference_w, reference_source) = resolve_reference(data, spec.w_reference, records.iter())?;
    let cells = cells
        .iter()
        .zip(records.chunks(spec.runs_per_cell))
        .map(|(&[alpha, beta, rho, q], recs)| SweepCell {
            alpha,
            beta,
            rho,
            q,
            stats: performance_percentage(recs, reference_w, solver.params.hit_rel_tol),
        })
        .collect();
    Ok(SweepGrid {
        alpha_values: spec.alpha_values,
        beta_values: spec.beta_values,
        rho_values: spec.rho_values,
        q_values: spec.q_values,
        runs_per_cell: spec.runs_per_cell,
        reference_w,
        reference_source,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn blobs() -> Dataset {
        let rows = [
            [0.0, 0.0],
            [0.4, 0.1],
            [0.2, 0.5],
            [6.0, 6.0],
            [6.3, 5.8],
            [5.9, 6.4],
            [0.0, 7.0],
            [0.3, 7.2],
        ];
        Dataset::from_rows("blobs", &rows).unwrap()
    }

    fn solver(algorithm: Algorithm) -> Solver {
        Solver::new(algorithm, AcoParams::new(3).with_ants(5))
    }

    #[test]
    fn single_run_benchmark_is_all_or_nothing() {
        let data = blobs();
        let opts = BenchmarkOptions {
            runs: 1,
            w_reference: Some(0.1),
            ..BenchmarkOptions::default()
        };
        let report = benchmark(&data, &solver(Algorithm::Km), &opts).unwrap();
        assert!([0.0, 100.0].contains(&report.summary.performance_pct));
    }

    #[test]
    fn self_referential_benchmark_hits_its_best() {
        let data = blobs();
        let opts = BenchmarkOptions {
            runs: 7,
            master_seed: 3,
            ..BenchmarkOptions::default()
        };
        let report = benchmark(&data, &solver(Algorithm::Km), &opts).unwrap();
        assert_eq!(report.reference_source, ReferenceSource::SelfReferential);
        assert!(report.summary.performance_pct >= 100.0 / 7.0);
        let seeds: Vec<u64> = report.records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, (3..10).collect::<Vec<_>>());
        assert_eq!(report.best.as_ref().unwrap().record.final_w, report.reference_w);
    }

    #[test]
    fn truth_labels_supply_the_reference() {
        let data = blobs().with_truth_labels(vec![0, 0, 0, 1, 1, 1, 2, 2]).unwrap();
        let opts = BenchmarkOptions {
            runs: 4,
            timing: false,
            ..BenchmarkOptions::default()
        };
        let report = benchmark(&data, &solver(Algorithm::Bacok), &opts).unwrap();
        assert_eq!(report.reference_source, ReferenceSource::Truth);
        assert_eq!(report.reference_w, reference_inertia(&data).unwrap());
        assert!(report.records.iter().all(|r| r.elapsed_seconds == 0.0));
        assert_eq!(report.summary.time_mean, 0.0);
    }

    #[test]
    fn sweep_cardinality_and_order() {
        let data = blobs();
        let spec = SweepSpec {
            alpha_values: vec![1.0, 0.25],
            beta_values: vec![2.5, 0.0],
            rho_values: vec![0.5],
            q_values: vec![250.0],
            runs_per_cell: 5,
            master_seed: 1,
            seed_scheme: SeedScheme::Paired,
            w_reference: None,
        };
        let grid = sweep(&data, &solver(Algorithm::Baco), &spec).unwrap();
        assert_eq!(grid.cells.len(), 4);
        assert_eq!(grid.cells.iter().map(|c| c.stats.runs).sum::<usize>(), 20);
        let order: Vec<(f64, f64)> = grid.cells.iter().map(|c| (c.alpha, c.beta)).collect();
        assert_eq!(order, vec![(0.25, 0.0), (0.25, 2.5), (1.0, 0.0), (1.0, 2.5)]);
        let csv = grid.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("alpha,beta,rho,q,performance_pct,w_stddev\n"));
    }

    #[test]
    fn sub_grid_reproduces_full_grid_cells() {
        let data = blobs();
        for scheme in [SeedScheme::Paired, SeedScheme::PerCell] {
            let full = SweepSpec {
                alpha_values: vec![0.25, 1.0],
                beta_values: vec![1.0, 2.5],
                rho_values: vec![0.5],
                q_values: vec![100.0],
                runs_per_cell: 3,
                master_seed: 9,
                seed_scheme: scheme,
                w_reference: Some(0.05),
            };
            let part = SweepSpec {
                alpha_values: vec![1.0],
                beta_values: vec![2.5],
                ..full.clone()
            };
            let s = solver(Algorithm::Baco);
            let a = sweep(&data, &s, &full).unwrap();
            let b = sweep(&data, &s, &part).unwrap();
            assert_eq!(
                a.get(1.0, 2.5, 0.5, 100.0).unwrap().stats.w_stddev,
                b.cells[0].stats.w_stddev
            );
        }
    }

    #[test]
    fn seeds_differ_across_runs_and_schemes() {
        let cell = [0.25, 2.5, 0.5, 250.0];
        let other = [0.25, 2.5, 0.5, 50.0];
        assert_ne!(sweep_seed(0, SeedScheme::Paired, cell, 0), sweep_seed(0, SeedScheme::Paired, cell, 1));
        assert_eq!(sweep_seed(0, SeedScheme::Paired, cell, 4), sweep_seed(0, SeedScheme::Paired, other, 4));
        assert_ne!(sweep_seed(0, SeedScheme::PerCell, cell, 4), sweep_seed(0, SeedScheme::PerCell, other, 4));
    }

    #[test]
    fn solution_files_are_written() {
        let data = blobs();
        let dir = tempfile::tempdir().unwrap();
        let out = cluster(&data, &solver(Algorithm::Bacok), 7, None).unwrap();
        write_solution(dir.path(), &out).unwrap();
        let labels = std::fs::read_to_string(dir.path().join("assignments.txt")).unwrap();
        assert_eq!(labels.lines().count(), data.n());
        let centroids = crate::ingest::load_centroids(dir.path().join("centroids.csv"), 2).unwrap();
        assert_eq!(&centroids, out.best.centroids());
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
        assert_eq!(json["algorithm"], "BACOK");
        assert_eq!(json["seed"], 7);
        let _ = Matrix::zeros(1, 1);
    }

    #[test]
    fn invalid_requests() {
        let data = blobs();
        let opts = BenchmarkOptions {
            runs: 0,
            ..BenchmarkOptions::default()
        };
        assert!(benchmark(&data, &solver(Algorithm::Km), &opts).is_err());
        let mut spec = SweepSpec::full_grid(1);
        spec.q_values.clear();
        assert!(sweep(&data, &solver(Algorithm::Baco), &spec).is_err());
        assert_eq!(SweepSpec::full_grid(1).cardinality(), 15210);
    }
}
