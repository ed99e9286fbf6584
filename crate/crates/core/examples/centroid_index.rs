//! Centroid index between clusterings: zero when every cluster has a
//! counterpart, positive when clusters are merged or split.

use antclust::{centroid_index, generate, preset, run_kmeans, KMeansConfig, Matrix, Preset};

fn main() -> antclust::Result<()> {
    let a = Matrix::from_rows(&[[0.0, 0.0], [5.0, 5.0], [9.0, 1.0]])?;
    println!("identical sets          CI = {}", centroid_index(&a, &a)?);

    let close = Matrix::from_rows(&[[0.0, 0.0], [0.1, 0.0]])?;
    let far = Matrix::from_rows(&[[0.0, 0.0], [100.0, 100.0]])?;
    println!("one orphan              CI = {}", centroid_index(&close, &far)?);

    // plain K-means from random starts often merges two true clusters
    let data = generate(&preset(Preset::T105, 0))?;
    let truth = data.truth_centroids().expect("generated tables carry their centroids");
    for seed in 0..8 {
        let out = run_kmeans(&data, 7, seed, &KMeansConfig::coarse())?;
        println!(
            "K-means seed {seed}          CI = {}  W = {:.5}",
            centroid_index(out.best.centroids(), truth)?,
            out.record.final_w
        );
    }
    Ok(())
}
