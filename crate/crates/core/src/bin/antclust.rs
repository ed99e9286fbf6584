use std::path::PathBuf;
use std::process::ExitCode;

use antclust::harness::{self, BenchmarkOptions, SeedScheme, Solver, SweepSpec};
use antclust::ingest::{self, registry, Delimiter, IngestConfig};
use antclust::{generate, preset, AcoParams, Algorithm, Dataset, Error, KMeansConfig, Preset};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "antclust", version, about = "Ant colony clustering with K-means local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded run; writes assignments.txt, centroids.csv and run.json.
    Cluster {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "reference-w")]
        reference_w: Option<f64>,
        #[arg(long, default_value = "antclust-out")]
        out: PathBuf,
        /// Report zero elapsed time so outputs are reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Seeded multistart; writes summary.csv, summary.json, runs.json and best/.
    Benchmark {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Master seed; run r uses seed + r.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long = "reference-w")]
        reference_w: Option<f64>,
        #[arg(long, default_value = "antclust-out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Parameter grid; writes a long-format CSV with one row per cell.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25])]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [2.5])]
        betas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5])]
        rhos: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [250.0])]
        qs: Vec<f64>,
        /// Use the full published grid instead of the value lists.
        #[arg(long, conflicts_with_all = ["alphas", "betas", "rhos", "qs"])]
        full_grid: bool,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Paired)]
        seed_scheme: SchemeArg,
        #[arg(long = "reference-w")]
        reference_w: Option<f64>,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Writes a synthetic table as CSV with a trailing 0-based label column.
    Generate {
        #[arg(long, value_parser = parse_preset)]
        preset: Preset,
        #[arg(long, default_value_t = 0)]
        preset_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Synthetic table (t105, t525, t2100).
    #[arg(long, value_parser = parse_preset, conflicts_with = "data", required_unless_present = "data")]
    preset: Option<Preset>,
    #[arg(long, default_value_t = 0)]
    preset_seed: u64,
    /// Numeric table on disk.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Known layout (iris, wine, glass, winequality-red, winequality-white, a1-a3, s1-s4).
    #[arg(long)]
    layout: Option<String>,
    #[arg(long, value_enum)]
    delimiter: Option<DelimiterArg>,
    /// 0-based label column, excluded from the features.
    #[arg(long)]
    label_column: Option<usize>,
    /// 0-based columns to ignore.
    #[arg(long, value_delimiter = ',')]
    drop_columns: Vec<usize>,
    #[arg(long)]
    header: bool,
    /// z-score every feature before clustering.
    #[arg(long)]
    standardize: bool,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::Bacok)]
    algo: AlgoArg,
    /// Number of clusters; defaults to the layout's or preset's.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 2.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 250.0)]
    q: f64,
    #[arg(long, default_value_t = 20)]
    ants: usize,
    #[arg(long, default_value_t = 10)]
    stagnation: usize,
    /// K-means stopping threshold (default 1e-4).
    #[arg(long)]
    kmeans_tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Km,
    Baco,
    Bacok,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Comma,
    Whitespace,
    Tab,
    Semicolon,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Paired,
    PerCell,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl DataArgs {
    /// Dataset plus the cluster count implied by its source, if any.
    fn load(&self) -> antclust::Result<(Dataset, Option<usize>)> {
        if let Some(p) = self.preset {
            let spec = preset(p, self.preset_seed);
            let k = spec.k();
            return Ok((generate(&spec)?, Some(k)));
        }
        let path = self.data.as_ref().expect("clap requires --data or --preset");
        let (mut config, k) = match &self.layout {
            Some(name) => {
                let entry = registry(name)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown layout `{name}`")))?;
                (entry.config, Some(entry.k))
            }
            None => (IngestConfig::default(), None),
        };
        if let Some(d) = self.delimiter {
            config.delimiter = match d {
                DelimiterArg::Comma => Delimiter::Comma,
                DelimiterArg::Whitespace => Delimiter::Whitespace,
                DelimiterArg::Tab => Delimiter::Tab,
                DelimiterArg::Semicolon => Delimiter::Semicolon,
            };
        }
        if self.label_column.is_some() {
            config.label_column = self.label_column;
        }
        if !self.drop_columns.is_empty() {
            config.drop_columns = self.drop_columns.clone();
        }
        config.has_header |= self.header;
        config.standardize |= self.standardize;
        let data = ingest::load_points(path, &config)?;
        let k = k.or_else(|| data.truth_k());
        Ok((data, k))
    }
}

impl SolverArgs {
    fn solver(&self, default_k: Option<usize>) -> antclust::Result<Solver> {
        let k = self
            .k
            .or(default_k)
            .ok_or_else(|| Error::InvalidParameter("--k is required for this dataset".into()))?;
        let algorithm = match self.algo {
            AlgoArg::Km => Algorithm::Km,
            AlgoArg::Baco => Algorithm::Baco,
            AlgoArg::Bacok => Algorithm::Bacok,
        };
        let params = AcoParams::new(k)
            .with_weights(self.alpha, self.beta)
            .with_rho(self.rho)
            .with_q(self.q)
            .with_ants(self.ants)
            .with_stagnation_limit(self.stagnation);
        params.validate()?;
        let mut solver = Solver::new(algorithm, params);
        if let Some(tol) = self.kmeans_tol {
            solver.kmeans = KMeansConfig {
                convergence_tol: tol,
                ..solver.kmeans
            };
            solver.kmeans.validate()?;
        }
        Ok(solver)
    }
}

fn set_threads(threads: Option<usize>) -> antclust::Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> antclust::Result<()> {
    match cli.command {
        Command::Cluster {
            data,
            solver,
            seed,
            reference_w,
            out,
            no_timing,
        } => {
            let (data, k) = data.load()?;
            let solver = solver.solver(k)?;
            let mut outcome = harness::cluster(&data, &solver, seed, reference_w)?;
            if no_timing {
                outcome.record.elapsed_seconds = 0.0;
            }
            harness::write_solution(&out, &outcome)?;
            println!(
                "{} {} seed {}: W = {:?} after {} iterations",
                data.name(),
                solver.algorithm,
                seed,
                outcome.record.final_w,
                outcome.record.iterations
            );
        }
        Command::Benchmark {
            data,
            solver,
            seed,
            runs,
            reference_w,
            out,
            threads,
            no_timing,
        } => {
            set_threads(threads)?;
            let (data, k) = data.load()?;
            let solver = solver.solver(k)?;
            let options = BenchmarkOptions {
                runs,
                master_seed: seed,
                w_reference: reference_w,
                timing: !no_timing,
            };
            let report = harness::benchmark(&data, &solver, &options)?;
            report.write(&out)?;
            println!("{}\n{}", harness::BenchmarkReport::CSV_HEADER, report.csv_row());
        }
        Command::Sweep {
            data,
            solver,
            alphas,
            betas,
            rhos,
            qs,
            full_grid,
            runs,
            seed,
            seed_scheme,
            reference_w,
            out,
            threads,
        } => {
            set_threads(threads)?;
            let (data, k) = data.load()?;
            let solver = solver.solver(k)?;
            let mut spec = SweepSpec::full_grid(runs);
            if !full_grid {
                spec.alpha_values = alphas;
                spec.beta_values = betas;
                spec.rho_values = rhos;
                spec.q_values = qs;
            }
            spec.master_seed = seed;
            spec.seed_scheme = match seed_scheme {
                SchemeArg::Paired => SeedScheme::Paired,
                SchemeArg::PerCell => SeedScheme::PerCell,
            };
            spec.w_reference = reference_w;
            let grid = harness::sweep(&data, &solver, &spec)?;
            grid.write_csv(&out)?;
            println!(
                "{} cells, {} runs each, reference W = {:?} ({:?}) -> {}",
                grid.cells.len(),
                grid.runs_per_cell,
                grid.reference_w,
                grid.reference_source,
                out.display()
            );
        }
        Command::Generate {
            preset: name,
            preset_seed,
            out,
        } => {
            let data = generate(&preset(name, preset_seed))?;
            ingest::write_points(&out, &data, true)?;
            println!(
                "{}: {} x {}, reference W = {:?}",
                data.name(),
                data.n(),
                data.p(),
                antclust::reference_inertia(&data)?
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
