//! Clustering by ant colony optimisation, with K-means local search.
//!
//! A colony of ants builds partitions object by object, guided by pheromone
//! trails and the distance to current centroids. The hybrid variant polishes
//! every ant's partition with Lloyd's algorithm after each iteration.
//!
//! ```
//! use antclust::{generate, preset, run_bacok, AcoParams, KMeansConfig, Preset};
//!
//! let data = generate(&preset(Preset::T105, 1)).unwrap();
//! let params = AcoParams::new(7).with_seed(3).with_ants(5);
//! let out = run_bacok(&data, &params, &KMeansConfig::default()).unwrap();
//! assert_eq!(out.best.labels().unwrap().len(), 105);
//! ```

pub mod aco;
pub mod error;
pub mod eval;
pub mod harness;
pub mod ingest;
pub mod local_search;
pub mod matrix;
pub mod model;
pub mod synth;

pub use aco::{run_baco, AcoParams, PheromoneMatrix, RunOutcome};
pub use error::{Error, Result};
pub use eval::{centroid_index, performance_percentage, Algorithm, RunRecord, SummaryStats};
pub use harness::{
    benchmark, cluster, sweep, write_solution, BenchmarkOptions, BenchmarkReport, ReferenceSource,
    SeedScheme, Solver, SweepGrid, SweepSpec,
};
pub use ingest::{load_centroids, load_points, IngestConfig};
pub use local_search::{kmeans_local_search, lloyd_step, run_bacok, run_kmeans, KMeansConfig};
pub use matrix::Matrix;
pub use model::{between_inertia, within_inertia, AntSolution, BoundingBox, Dataset};
pub use synth::{generate, preset, reference_inertia, GeneratorSpec, Preset};
