//! Cluster a generated T105 table with BACOK and compare against the truth.

use antclust::{centroid_index, generate, preset, reference_inertia, run_bacok, AcoParams, KMeansConfig, Preset};

fn main() -> antclust::Result<()> {
    let data = generate(&preset(Preset::T105, 0))?;
    let params = AcoParams::new(7).with_seed(42);
    let out = run_bacok(&data, &params, &KMeansConfig::default())?;

    println!("{}: n = {}, p = {}", data.name(), data.n(), data.p());
    println!("best W       {:.8}", out.record.final_w);
    println!("truth W      {:.8}", reference_inertia(&data)?);
    println!("iterations   {}", out.record.iterations);
    println!("class sizes  {:?}", out.best.class_sizes());
    let truth = data.truth_centroids().expect("generated tables carry their centroids");
    println!("CI vs truth  {}", centroid_index(out.best.centroids(), truth)?);

    let trace: Vec<String> = out.history.iter().map(|w| format!("{w:.4}")).collect();
    println!("best W by iteration: {}", trace.join(" "));
    Ok(())
}
