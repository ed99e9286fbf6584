use antclust::aco::{assignment_probabilities, roulette_select, PheromoneMatrix};
use antclust::ingest::{format_matrix, load_centroids, load_points, write_points, IngestConfig};
use antclust::model::batch_centroids;
use antclust::{
    between_inertia, kmeans_local_search, within_inertia, AcoParams, AntSolution, Dataset, KMeansConfig, Matrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Points plus a labelling into at most `k` classes.
fn partitioned() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>, usize)> {
    (1usize..40, 1usize..5, 1usize..6).prop_flat_map(|(n, p, k)| {
        (
            prop::collection::vec(prop::collection::vec(-1e3..1e3f64, p), n),
            prop::collection::vec(0..k, n),
            Just(k),
        )
    })
}

proptest! {
    #[test]
    fn within_plus_between_is_total((rows, labels, k) in partitioned()) {
        let data = Dataset::from_rows("p", &rows).unwrap();
        let g = batch_centroids(&data, &labels, &Matrix::zeros(k, data.p())).unwrap();
        let w = within_inertia(&data, &labels, &g).unwrap();
        let b = between_inertia(&data, &labels, &g).unwrap();
        let t = data.total_inertia();
        prop_assert!(w >= 0.0 && b >= -1e-12);
        prop_assert!((w + b - t).abs() <= 1e-9 * t.max(1.0));
    }

    #[test]
    fn local_search_never_worsens((rows, labels, k) in partitioned()) {
        let data = Dataset::from_rows("p", &rows).unwrap();
        let mut sol = AntSolution::from_labels(&data, &labels, &Matrix::zeros(k, data.p())).unwrap();
        let before = sol.inertia().unwrap();
        kmeans_local_search(&data, &mut sol, &KMeansConfig::default()).unwrap();
        prop_assert!(sol.inertia().unwrap() <= before + 1e-9 * before.max(1.0));
        prop_assert!(sol.is_complete());
    }

    #[test]
    fn probabilities_form_a_distribution(
        (rows, _, k) in partitioned(),
        alpha in 0.0..6.0f64,
        beta in 0.0..50.0f64,
        tau in prop::collection::vec(prop_oneof![Just(0.0), 0.0..1e6f64], 8),
    ) {
        let data = Dataset::from_rows("p", &rows).unwrap();
        let centroids: Vec<Vec<f64>> = (0..k).map(|c| rows[c % rows.len()].clone()).collect();
        let ant = AntSolution::new(data.n(), Matrix::from_rows(&centroids).unwrap());
        let mut gamma = PheromoneMatrix::filled(data.n(), k, 1e-3);
        for c in 0..k {
            gamma.set(0, c, tau[c]);
        }
        let params = AcoParams::new(k).with_weights(alpha, beta);
        match assignment_probabilities(&data, 0, &ant, &gamma, &params) {
            Ok(probs) => {
                prop_assert!(probs.iter().all(|q| (0.0..=1.0).contains(q)));
                prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            }
            // only a row with no pheromone at all can leave nothing to choose
            Err(_) => prop_assert!(alpha > 0.0 && tau[..k].iter().all(|&t| t == 0.0)),
        }
    }

    #[test]
    fn roulette_avoids_zero_classes(
        weights in prop::collection::vec(prop_oneof![Just(0.0), 1e-9..1.0f64], 1..10),
        seed in any::<u64>(),
    ) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let k = roulette_select(&weights, &mut rng).unwrap();
            prop_assert!(weights[k] > 0.0);
        }
    }

    #[test]
    fn centroid_files_round_trip(rows in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 3), 1..10)) {
        let m = Matrix::from_rows(&rows).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        std::fs::write(&path, format_matrix(&m)).unwrap();
        prop_assert_eq!(load_centroids(&path, 3).unwrap(), m);
    }

    #[test]
    fn labelled_tables_round_trip((rows, labels, _) in partitioned()) {
        let data = Dataset::from_rows("t", &rows).unwrap().with_truth_labels(labels).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_points(&path, &data, true).unwrap();
        let config = IngestConfig {
            has_header: true,
            label_column: Some(data.p()),
            ..IngestConfig::default()
        };
        let back = load_points(&path, &config).unwrap();
        prop_assert_eq!(back.points(), data.points());
        // labels are renumbered in order of first appearance
        let relabel = |ls: &[usize]| {
            let mut seen = Vec::new();
            ls.iter().map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i,
                None => { seen.push(*l); seen.len() - 1 }
            }).collect::<Vec<_>>()
        };
        prop_assert_eq!(relabel(back.truth_labels().unwrap()), relabel(data.truth_labels().unwrap()));
    }
}
