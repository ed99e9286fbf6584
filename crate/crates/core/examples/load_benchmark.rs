//! Load a benchmark table from disk and run a short BACOK multistart on it.
//!
//! cargo run --release --example load_benchmark -- <file> <layout> [runs]
//!
//! `layout` is one of iris, wine, glass, winequality-red, winequality-white,
//! a1..a3, s1..s4. Without arguments the bundled iris excerpt is used.

use antclust::ingest::{load_points, registry};
use antclust::{benchmark, AcoParams, Algorithm, BenchmarkOptions, Solver};

fn main() -> antclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/iris_excerpt.csv").into());
    let layout = args.next().unwrap_or_else(|| "iris".into());
    let runs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);

    let entry = registry(&layout)
        .ok_or_else(|| antclust::Error::InvalidParameter(format!("unknown layout `{layout}`")))?;
    let data = load_points(&path, &entry.config)?;
    println!("{}: n = {}, p = {}, K = {}", data.name(), data.n(), data.p(), entry.k);

    let solver = Solver::new(Algorithm::Bacok, AcoParams::new(entry.k));
    let options = BenchmarkOptions {
        runs,
        ..BenchmarkOptions::default()
    };
    let report = benchmark(&data, &solver, &options)?;
    println!(
        "reference W = {:.6} ({:?}), performance {}%, W std {:.6}, mean time {:.4}s",
        report.reference_w,
        report.reference_source,
        report.summary.performance_pct,
        report.summary.w_stddev,
        report.summary.time_mean
    );
    if let Some(best) = &report.best {
        println!("best run: seed {}, W = {:.6}", best.record.seed, best.record.final_w);
    }
    Ok(())
}
