//! Generate the three synthetic tables, print their structure and export
//! them as CSV (with a trailing label column) into a directory.
//!
//! cargo run --example synthetic_tables -- [seed] [out dir]

use antclust::ingest::write_points;
use antclust::{generate, preset, reference_inertia, Preset};

fn main() -> antclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let out_dir = args.next();

    for name in Preset::ALL {
        let spec = preset(name, seed);
        let data = generate(&spec)?;
        println!(
            "{:<14} n = {:>4}  K = {}  sizes {:?}  variances {:?}  truth W = {:.6}",
            data.name(),
            data.n(),
            spec.k(),
            spec.class_sizes,
            spec.class_variances,
            reference_inertia(&data)?
        );
        if let Some(dir) = &out_dir {
            let path = std::path::Path::new(dir).join(format!("{}.csv", data.name()));
            write_points(&path, &data, true)?;
            println!("{:<14} -> {}", "", path.display());
        }
    }
    Ok(())
}
