//! A small (alpha, beta) performance surface on a generated T105 table,
//! printed as a pivot with beta across the columns.
//!
//! cargo run --release --example parameter_sweep -- [table seed] [runs per cell] [ants] [km|baco|bacok]

use antclust::{generate, preset, sweep, AcoParams, Algorithm, Preset, Solver, SweepSpec};

fn main() -> antclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let table_seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let runs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);
    let ants: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let algorithm: Algorithm = args.next().map(|a| a.parse()).transpose()?.unwrap_or(Algorithm::Bacok);

    let data = generate(&preset(Preset::T105, table_seed))?;
    let solver = Solver::new(algorithm, AcoParams::new(7).with_ants(ants));
    let spec = SweepSpec {
        alpha_values: vec![0.0, 0.25, 2.5],
        beta_values: vec![0.0, 2.5, 5.0],
        rho_values: vec![0.5],
        q_values: vec![250.0],
        runs_per_cell: runs,
        ..SweepSpec::full_grid(runs)
    };
    let grid = sweep(&data, &solver, &spec)?;

    println!("{} reference W = {:.6} ({:?})", data.name(), grid.reference_w, grid.reference_source);
    print!("{:>8}", "a \\ b");
    for b in &grid.beta_values {
        print!("{b:>8}");
    }
    println!();
    for &a in &grid.alpha_values {
        print!("{a:>8}");
        for &b in &grid.beta_values {
            let cell = grid.get(a, b, 0.5, 250.0).expect("cell in grid");
            print!("{:>8.0}", cell.stats.performance_pct);
        }
        println!();
    }
    Ok(())
}
