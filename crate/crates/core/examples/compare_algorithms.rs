//! K-means, BACO and BACOK side by side on generated T105 tables.
//!
//! cargo run --release --example compare_algorithms -- [instances] [runs]

use antclust::{benchmark, generate, preset, AcoParams, Algorithm, BenchmarkOptions, Preset, Solver};

fn main() -> antclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let runs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(50);

    println!("{:<14} {:<6} {:>10} {:>10} {:>10}", "table", "algo", "perf %", "W std", "time s");
    for seed in 0..instances {
        let data = generate(&preset(Preset::T105, seed))?;
        let options = BenchmarkOptions {
            runs,
            master_seed: 1000,
            ..BenchmarkOptions::default()
        };
        for algorithm in [Algorithm::Km, Algorithm::Baco, Algorithm::Bacok] {
            let solver = Solver::new(algorithm, AcoParams::new(7));
            let report = benchmark(&data, &solver, &options)?;
            println!(
                "{:<14} {:<6} {:>10.1} {:>10.4} {:>10.4}",
                data.name(),
                algorithm,
                report.summary.performance_pct,
                report.summary.w_stddev,
                report.summary.time_mean
            );
        }
        println!("{:<14} reference W = {:.6}", "", antclust::reference_inertia(&data)?);
    }
    Ok(())
}
