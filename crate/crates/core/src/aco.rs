//! The ant colony: pheromone trails, the assignment law, roulette selection,
//! solution construction and the BACO outer loop.
//!
//! Each ant builds a full partition per iteration. Ants interleave object by
//! object (slot-major, ant-minor), each drawing a uniformly random object
//! outside its tabu list and choosing its class with probability
//!
//! ```text
//! p_ik = tau_ik^alpha * eta_ik^beta / sum_r tau_ir^alpha * eta_ir^beta,   eta_ik = 1 / ||x_i - g_k||^2
//! ```
//!
//! Weights are evaluated in log space so large `beta` or tiny distances never
//! overflow; the normalised vector is the same.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{Algorithm, RunRecord};
use crate::matrix::Matrix;
use crate::model::{bounding_box, sq_dist, AntSolution, Dataset};

/// Colony parameters. `Default` carries the tuned values
/// `alpha = 0.25, beta = 2.5, rho = 0.5, Q = 250, M = 20`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    /// Pheromone exponent.
    pub alpha: f64,
    /// Visibility exponent.
    pub beta: f64,
    /// Evaporation rate in `[0, 1]`.
    pub rho: f64,
    /// Pheromone amplification constant.
    pub q: f64,
    pub m_ants: usize,
    /// Consecutive non-improving iterations tolerated before stopping.
    pub stagnation_limit: usize,
    pub k_clusters: usize,
    pub seed: u64,
    /// Initial trail intensity.
    pub tau0: f64,
    /// Floor applied to squared distances before taking reciprocals.
    pub d_epsilon: f64,
    /// Relative tolerance for matching a reference inertia.
    pub hit_rel_tol: f64,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            alpha: 0.25,
            beta: 2.5,
            rho: 0.5,
            q: 250.0,
            m_ants: 20,
            stagnation_limit: 10,
            k_clusters: 2,
            seed: 0,
            tau0: 1e-3,
            d_epsilon: 1e-12,
            hit_rel_tol: 1e-4,
        }
    }
}

impl AcoParams {
    pub fn new(k_clusters: usize) -> Self {
        Self {
            k_clusters,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_weights(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_ants(mut self, m_ants: usize) -> Self {
        self.m_ants = m_ants;
        self
    }

    pub fn with_stagnation_limit(mut self, limit: usize) -> Self {
        self.stagnation_limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be a finite nonnegative number");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be a finite nonnegative number");
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad("rho must lie in [0, 1]");
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return bad("Q must be positive");
        }
        if self.m_ants == 0 {
            return bad("the colony needs at least one ant");
        }
        if self.k_clusters == 0 {
            return bad("K must be at least 1");
        }
        if self.stagnation_limit == 0 {
            return bad("stagnation limit must be positive");
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return bad("tau0 must be positive");
        }
        if !(self.d_epsilon > 0.0) {
            return bad("d_epsilon must be positive");
        }
        if !(self.hit_rel_tol > 0.0) {
            return bad("hit tolerance must be positive");
        }
        Ok(())
    }
}

/// `n x K` matrix of nonnegative trail intensities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PheromoneMatrix(Matrix);

impl PheromoneMatrix {
    pub fn filled(n: usize, k: usize, value: f64) -> Self {
        Self(Matrix::filled(n, k, value))
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        Self(Matrix::zeros(n, k))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.0.get(i, k)
    }

    pub fn set(&mut self, i: usize, k: usize, value: f64) {
        self.0.set(i, k, value);
    }

    #[inline]
    pub fn deposit(&mut self, i: usize, k: usize, amount: f64) {
        self.0.add(i, k, amount);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn values(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn total(&self) -> f64 {
        self.0.as_slice().iter().sum()
    }

    pub fn clear(&mut self) {
        self.0.fill(0.0);
    }
}

/// Full state of one colony between iterations.
#[derive(Debug, Clone)]
pub struct ColonyState {
    pub ants: Vec<AntSolution>,
    /// Best solution seen so far (`h*`).
    pub best: AntSolution,
    /// Inertia of `best`; `+inf` until the first construction completes.
    pub best_inertia: f64,
    pub gamma: PheromoneMatrix,
    pub gamma_aux: PheromoneMatrix,
    pub counter: usize,
    pub iteration: usize,
    rngs: Vec<ChaCha8Rng>,
    pools: Vec<Vec<usize>>,
}

impl ColonyState {
    /// Replaces `best` with the lowest-inertia ant if it is strictly better.
    /// Returns whether `best` changed.
    pub fn update_best(&mut self) -> bool {
        let candidate = self
            .ants
            .iter()
            .enumerate()
            .filter_map(|(m, a)| a.inertia().map(|w| (m, w)))
            .fold(None, |acc: Option<(usize, f64)>, (m, w)| match acc {
                Some((_, bw)) if bw <= w => acc,
                _ => Some((m, w)),
            });
        match candidate {
            Some((m, w)) if w < self.best_inertia => {
                self.best = self.ants[m].clone();
                self.best_inertia = w;
                true
            }
            _ => false,
        }
    }
}

/// Per-ant generator: the master seed with the ant index as ChaCha stream, so
/// each ant's draws do not depend on how many ants share the colony.
fn ant_rng(seed: u64, m: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(m as u64);
    rng
}

/// `eta = 1 / max(||x - g||^2, d_epsilon)`.
pub fn visibility(x: &[f64], centroid: &[f64], d_epsilon: f64) -> f64 {
    1.0 / sq_dist(x, centroid).max(d_epsilon)
}

/// Fills `probs` with the assignment law for point `x` and writes the
/// clamped squared distances to `dists`. `log_tau` holds `alpha * ln(tau)`
/// per class (zero when `alpha == 0`).
fn fill_probabilities(
    x: &[f64],
    centroids: &Matrix,
    log_tau: &[f64],
    beta: f64,
    d_epsilon: f64,
    dists: &mut [f64],
    probs: &mut [f64],
) -> bool {
    let mut max_log = f64::NEG_INFINITY;
    for k in 0..centroids.rows() {
        let d = sq_dist(x, centroids.row(k)).max(d_epsilon);
        dists[k] = d;
        let lw = if beta == 0.0 {
            log_tau[k]
        } else {
            log_tau[k] - beta * d.ln()
        };
        probs[k] = lw;
        max_log = max_log.max(lw);
    }
    if max_log == f64::NEG_INFINITY || max_log.is_nan() {
        return false;
    }
    let mut total = 0.0;
    for w in probs.iter_mut() {
        *w = (*w - max_log).exp();
        total += *w;
    }
    probs.iter_mut().for_each(|w| *w /= total);
    true
}

#[inline]
fn log_tau_weight(alpha: f64, tau: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        alpha * tau.ln()
    }
}

/// Probability that `ant` puts object `i` in each class.
pub fn assignment_probabilities(
    data: &Dataset,
    i: usize,
    ant: &AntSolution,
    gamma: &PheromoneMatrix,
    params: &AcoParams,
) -> Result<Vec<f64>> {
    let k = ant.k();
    if gamma.shape() != (data.n(), k) {
        let (rows, cols) = gamma.shape();
        return Err(Error::ShapeMismatch {
            expected_rows: data.n(),
            expected_cols: k,
            actual_rows: rows,
            actual_cols: cols,
        });
    }
    let log_tau: Vec<f64> = gamma
        .row(i)
        .iter()
        .map(|&t| log_tau_weight(params.alpha, t))
        .collect();
    let mut dists = vec![0.0; k];
    let mut probs = vec![0.0; k];
    if !fill_probabilities(
        data.point(i),
        ant.centroids(),
        &log_tau,
        params.beta,
        params.d_epsilon,
        &mut dists,
        &mut probs,
    ) {
        return Err(Error::DegenerateWeights(i));
    }
    Ok(probs)
}

/// Draws a class index with the given probabilities. Zero-probability
/// classes are never returned.
pub fn roulette_select<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    let mut total = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::InvalidProbability(k));
        }
        total += p;
    }
    if total <= 0.0 {
        return Err(Error::InvalidParameter(
            "roulette needs positive total probability".into(),
        ));
    }
    Ok(spin(probs, total, rng))
}

#[inline]
fn spin<R: Rng + ?Sized>(probs: &[f64], total: f64, rng: &mut R) -> usize {
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = k;
            if u < acc {
                return k;
            }
        }
    }
    // rounding left u at or above the running sum
    last_positive
}

/// Builds a colony: every ant gets K centroids drawn uniformly in the
/// dataset's bounding box, `Gamma` is filled with `tau0` and `Gamma_aux`
/// is zero.
pub fn init_colony(data: &Dataset, params: &AcoParams) -> Result<ColonyState> {
    params.validate()?;
    let n = data.n();
    let k = params.k_clusters;
    let bbox = bounding_box(data);
    let mut rngs: Vec<ChaCha8Rng> = (0..params.m_ants).map(|m| ant_rng(params.seed, m)).collect();
    let ants: Vec<AntSolution> = rngs
        .iter_mut()
        .map(|rng| {
            let rows: Vec<Vec<f64>> = (0..k).map(|_| bbox.sample(rng)).collect();
            AntSolution::new(n, Matrix::from_rows(&rows).expect("rows share the box dimension"))
        })
        .collect();
    Ok(ColonyState {
        best: ants[0].clone(),
        best_inertia: f64::INFINITY,
        ants,
        gamma: PheromoneMatrix::filled(n, k, params.tau0),
        gamma_aux: PheromoneMatrix::zeros(n, k),
        counter: 0,
        iteration: 0,
        rngs,
        pools: vec![Vec::with_capacity(n); params.m_ants],
    })
}

/// One construction sweep: every ant classifies every object.
///
/// Tabu lists are emptied first; ants start from their current centroids.
/// Local deposits `Q / d_ik` go to `Gamma_aux`, while probabilities read the
/// global `Gamma`, which stays fixed for the whole sweep. On return every ant
/// holds a complete partition with a valid cached inertia.
pub fn construct_iteration(
    state: &mut ColonyState,
    data: &Dataset,
    params: &AcoParams,
) -> Result<()> {
    let n = data.n();
    let k = params.k_clusters;
    if state.gamma.shape() != (n, k) || state.gamma_aux.shape() != (n, k) {
        let (rows, cols) = state.gamma.shape();
        return Err(Error::ShapeMismatch {
            expected_rows: n,
            expected_cols: k,
            actual_rows: rows,
            actual_cols: cols,
        });
    }
    for (ant, pool) in state.ants.iter_mut().zip(state.pools.iter_mut()) {
        ant.reset_tabu();
        pool.clear();
        pool.extend(0..n);
    }
    let log_tau: Vec<f64> = state
        .gamma
        .values()
        .iter()
        .map(|&t| log_tau_weight(params.alpha, t))
        .collect();
    let mut dists = vec![0.0; k];
    let mut probs = vec![0.0; k];

    for _slot in 0..n {
        for m in 0..state.ants.len() {
            let rng = &mut state.rngs[m];
            let pool = &mut state.pools[m];
            let i = pool.swap_remove(rng.gen_range(0..pool.len()));
            let ant = &mut state.ants[m];
            let x = data.point(i);
            if !fill_probabilities(
                x,
                ant.centroids(),
                &log_tau[i * k..(i + 1) * k],
                params.beta,
                params.d_epsilon,
                &mut dists,
                &mut probs,
            ) {
                return Err(Error::DegenerateWeights(i));
            }
            let class = spin(&probs, 1.0, rng);
            state.gamma_aux.deposit(i, class, params.q / dists[class]);
            ant.assign(i, class, x)?;
        }
    }
    for ant in &mut state.ants {
        ant.ensure_inertia(data)?;
    }
    Ok(())
}

/// `Gamma := (1 - rho) Gamma + rho Gamma_aux`.
pub fn global_pheromone_update(
    gamma: &mut PheromoneMatrix,
    gamma_aux: &PheromoneMatrix,
    rho: f64,
) -> Result<()> {
    if gamma.shape() != gamma_aux.shape() {
        let (er, ec) = gamma.shape();
        let (ar, ac) = gamma_aux.shape();
        return Err(Error::ShapeMismatch {
            expected_rows: er,
            expected_cols: ec,
            actual_rows: ar,
            actual_cols: ac,
        });
    }
    for (g, d) in gamma.0.as_mut_slice().iter_mut().zip(gamma_aux.values()) {
        *g = (1.0 - rho) * *g + rho * d;
    }
    Ok(())
}

/// Adds `Q / W(best)` to the trail of every (object, class) pair used by the
/// best solution. Returns `false`, leaving `gamma` untouched, when the best
/// inertia is zero.
pub fn intensify_best(gamma: &mut PheromoneMatrix, best: &AntSolution, q: f64) -> Result<bool> {
    let w = best
        .inertia()
        .ok_or_else(|| Error::InvalidParameter("best solution has no valid inertia".into()))?;
    if gamma.shape() != (best.n(), best.k()) {
        let (rows, cols) = gamma.shape();
        return Err(Error::ShapeMismatch {
            expected_rows: best.n(),
            expected_cols: best.k(),
            actual_rows: rows,
            actual_cols: cols,
        });
    }
    if w <= 0.0 {
        return Ok(false);
    }
    let amount = q / w;
    for (i, k) in best.labels()?.into_iter().enumerate() {
        gamma.deposit(i, k, amount);
    }
    Ok(true)
}

/// Result of one colony run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best: AntSolution,
    pub record: RunRecord,
    /// Best inertia after each iteration.
    pub history: Vec<f64>,
}

impl RunOutcome {
    pub fn inertia(&self) -> f64 {
        self.record.final_w
    }
}

type Refiner<'a> = dyn Fn(&Dataset, &mut AntSolution) -> Result<()> + Sync + 'a;

/// Shared outer loop of BACO and BACOK. `refine`, when present, is applied to
/// every ant after the pheromone updates.
pub(crate) fn run_colony(
    data: &Dataset,
    params: &AcoParams,
    algorithm: Algorithm,
    refine: Option<&Refiner<'_>>,
) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut state = init_colony(data, params)?;
    // inertia remembered at the last stagnation check; the first completed
    // iteration only establishes it
    let mut remembered: Option<f64> = None;
    let mut skipped = false;
    let mut history = Vec::new();

    while state.counter <= params.stagnation_limit {
        state.counter += 1;
        state.iteration += 1;

        construct_iteration(&mut state, data, params)?;
        state.update_best();
        global_pheromone_update(&mut state.gamma, &state.gamma_aux, params.rho)?;
        state.gamma_aux.clear();
        if !intensify_best(&mut state.gamma, &state.best, params.q)? {
            skipped = true;
        }

        match remembered {
            None => remembered = Some(state.best_inertia),
            Some(w) if state.best_inertia < w => {
                state.counter = 0;
                remembered = Some(state.best_inertia);
            }
            Some(_) => {}
        }

        if let Some(refine) = refine {
            state
                .ants
                .par_iter_mut()
                .try_for_each(|ant| refine(data, ant))?;
            state.update_best();
        }
        history.push(state.best_inertia);
    }

    let record = RunRecord {
        algorithm,
        seed: params.seed,
        final_w: state.best_inertia,
        iterations: state.iteration,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        hit: false,
        intensification_skipped: skipped,
    };
    Ok(RunOutcome {
        best: state.best,
        record,
        history,
    })
}

/// Basic ant colony clustering without local search.
pub fn run_baco(data: &Dataset, params: &AcoParams) -> Result<RunOutcome> {
    run_colony(data, params, Algorithm::Baco, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> Dataset {
        Dataset::from_rows(
            "blobs",
            &[
                [0.0, 0.0],
                [0.5, 0.2],
                [0.1, 0.6],
                [10.0, 10.0],
                [10.4, 9.7],
                [9.8, 10.3],
            ],
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn visibility_examples() {
        assert_eq!(visibility(&[2.0], &[0.0], 1e-12), 0.25);
        assert_eq!(visibility(&[1.0, 1.0], &[1.0, 1.0], 1e-12), 1e12);
    }

    #[test]
    fn visibility_decreases_along_rays() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let dir: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut prev = f64::INFINITY;
            for step in 1..40 {
                let r = step as f64 * 0.25;
                let x: Vec<f64> = g.iter().zip(&dir).map(|(a, d)| a + r * d).collect();
                let eta = visibility(&x, &g, 1e-12);
                assert!(eta < prev);
                prev = eta;
            }
        }
    }

    fn ant_with_centroids(n: usize, rows: &[[f64; 1]]) -> AntSolution {
        AntSolution::new(n, Matrix::from_rows(rows).unwrap())
    }

    #[test]
    fn probabilities_hand_example() {
        // eta = (1, 3) from squared distances (1, 1/3)
        let data = Dataset::from_rows("x", &[[0.0]]).unwrap();
        let ant = ant_with_centroids(1, &[[1.0], [(1.0f64 / 3.0).sqrt()]]);
        let gamma = PheromoneMatrix::filled(1, 2, 1.0);
        let params = AcoParams::new(2).with_weights(1.0, 1.0);
        let p = assignment_probabilities(&data, 0, &ant, &gamma, &params).unwrap();
        assert!(close(p[0], 0.25, 1e-12) && close(p[1], 0.75, 1e-12), "{p:?}");
    }

    #[test]
    fn probabilities_uniform_under_symmetry() {
        let data = Dataset::from_rows("x", &[[0.0, 0.0]]).unwrap();
        let rows: Vec<[f64; 2]> = (0..7)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 7.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let ant = AntSolution::new(1, Matrix::from_rows(&rows).unwrap());
        let gamma = PheromoneMatrix::filled(1, 7, 0.3);
        let p = assignment_probabilities(&data, 0, &ant, &gamma, &AcoParams::new(7)).unwrap();
        for v in p {
            assert!(close(v, 1.0 / 7.0, 1e-12));
        }
    }

    #[test]
    fn zero_exponents_give_uniform() {
        let data = Dataset::from_rows("x", &[[0.0]]).unwrap();
        let ant = ant_with_centroids(1, &[[1.0], [5.0], [0.0]]);
        let mut gamma = PheromoneMatrix::zeros(1, 3);
        gamma.set(0, 0, 9.0);
        gamma.set(0, 1, 0.01);
        let params = AcoParams::new(3).with_weights(0.0, 0.0);
        let p = assignment_probabilities(&data, 0, &ant, &gamma, &params).unwrap();
        for v in p {
            assert!(close(v, 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn probabilities_survive_huge_beta() {
        let data = Dataset::from_rows("x", &[[0.0]]).unwrap();
        let ant = ant_with_centroids(1, &[[1e-7], [2.0]]);
        let gamma = PheromoneMatrix::filled(1, 2, 1.0);
        let params = AcoParams::new(2).with_weights(1.0, 50.0);
        let p = assignment_probabilities(&data, 0, &ant, &gamma, &params).unwrap();
        assert!(p.iter().all(|v| v.is_finite()));
        assert_eq!(p[0], 1.0);
    }

    #[test]
    fn all_zero_trail_is_an_error() {
        let data = Dataset::from_rows("x", &[[0.0]]).unwrap();
        let ant = ant_with_centroids(1, &[[1.0], [2.0]]);
        let gamma = PheromoneMatrix::zeros(1, 2);
        let params = AcoParams::new(2).with_weights(1.0, 1.0);
        assert!(matches!(
            assignment_probabilities(&data, 0, &ant, &gamma, &params),
            Err(Error::DegenerateWeights(0))
        ));
    }

    #[test]
    fn roulette_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            assert_eq!(roulette_select(&[1.0, 0.0, 0.0], &mut rng).unwrap(), 0);
        }
        for _ in 0..100_000 {
            let k = roulette_select(&[0.0, 0.5, 0.0, 0.5, 0.0], &mut rng).unwrap();
            assert!(k == 1 || k == 3);
        }
        assert!(matches!(
            roulette_select(&[0.5, -0.1, 0.6], &mut rng),
            Err(Error::InvalidProbability(1))
        ));
    }

    #[test]
    fn init_colony_respects_box_and_seed() {
        let data = two_blobs();
        let bbox = bounding_box(&data);
        let params = AcoParams::new(3).with_ants(5).with_seed(99);
        let a = init_colony(&data, &params).unwrap();
        for ant in &a.ants {
            assert!(ant.centroids().iter_rows().all(|g| bbox.contains(g)));
            assert_eq!(ant.tabu_len(), 0);
        }
        assert!(a.gamma.values().iter().all(|&t| t == params.tau0));
        assert_eq!(a.gamma_aux.total(), 0.0);
        assert_eq!(a.best_inertia, f64::INFINITY);
        assert_eq!(a.counter, 0);
        let b = init_colony(&data, &params).unwrap();
        assert_eq!(a.ants, b.ants);
    }

    #[test]
    fn ant_streams_do_not_depend_on_colony_size() {
        let data = two_blobs();
        let small = init_colony(&data, &AcoParams::new(2).with_ants(2).with_seed(4)).unwrap();
        let large = init_colony(&data, &AcoParams::new(2).with_ants(6).with_seed(4)).unwrap();
        assert_eq!(small.ants[..], large.ants[..2]);
    }

    #[test]
    fn construction_completes_tabu_and_tracks_deposits() {
        let data = two_blobs();
        let params = AcoParams::new(2).with_ants(4).with_seed(5);
        let mut state = init_colony(&data, &params).unwrap();

        // shadow accumulator: replay the same draws and sum Q/d independently
        let mut shadow = state.clone();
        let mut expected = 0.0;
        for pool in shadow.pools.iter_mut() {
            pool.extend(0..data.n());
        }
        for _ in 0..data.n() {
            for m in 0..shadow.ants.len() {
                let rng = &mut shadow.rngs[m];
                let pool = &mut shadow.pools[m];
                let i = pool.swap_remove(rng.gen_range(0..pool.len()));
                let ant = &mut shadow.ants[m];
                let probs =
                    assignment_probabilities(&data, i, ant, &shadow.gamma, &params).unwrap();
                let k = roulette_select(&probs, rng).unwrap();
                let d = sq_dist(data.point(i), ant.centroids().row(k)).max(params.d_epsilon);
                expected += params.q / d;
                ant.assign(i, k, data.point(i)).unwrap();
            }
        }

        construct_iteration(&mut state, &data, &params).unwrap();
        for (ant, twin) in state.ants.iter().zip(&shadow.ants) {
            assert_eq!(ant.tabu_len(), data.n());
            assert!(ant.inertia().is_some());
            assert_eq!(ant.assignment(), twin.assignment());
        }
        let total = state.gamma_aux.total();
        assert!((total - expected).abs() <= 1e-9 * expected, "{total} vs {expected}");
    }

    #[test]
    fn single_object_single_class() {
        let data = Dataset::from_rows("one", &[[3.0, -1.0]]).unwrap();
        let params = AcoParams::new(1).with_ants(3);
        let mut state = init_colony(&data, &params).unwrap();
        construct_iteration(&mut state, &data, &params).unwrap();
        for ant in &state.ants {
            assert_eq!(ant.assignment(), &[Some(0)]);
            assert_eq!(ant.centroids().row(0), &[3.0, -1.0]);
            assert_eq!(ant.inertia(), Some(0.0));
        }
    }

    #[test]
    fn huge_beta_reproduces_nearest_centroid_partition() {
        let data = two_blobs();
        let mut params = AcoParams::new(2).with_ants(5).with_seed(8);
        params.beta = 50.0;
        let mut state = init_colony(&data, &params).unwrap();
        let truth = Matrix::from_rows(&[[0.2, 0.27], [10.07, 10.0]]).unwrap();
        for ant in &mut state.ants {
            *ant = AntSolution::new(data.n(), truth.clone());
        }
        construct_iteration(&mut state, &data, &params).unwrap();
        for ant in &state.ants {
            let labels = ant.labels().unwrap();
            assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
        }
    }

    #[test]
    fn global_update_examples() {
        let mut g = PheromoneMatrix::filled(1, 1, 0.2);
        let d = PheromoneMatrix::filled(1, 1, 0.4);
        global_pheromone_update(&mut g, &d, 0.5).unwrap();
        assert!(close(g.get(0, 0), 0.3, 1e-15));

        let mut g = PheromoneMatrix::filled(2, 2, 0.7);
        global_pheromone_update(&mut g, &d.clone(), 0.0).unwrap_err();
        let d2 = PheromoneMatrix::filled(2, 2, 0.4);
        global_pheromone_update(&mut g, &d2, 0.0).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.7));
        global_pheromone_update(&mut g, &d2, 1.0).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.4));
    }

    fn solved(data: &Dataset, labels: &[usize], k: usize) -> AntSolution {
        AntSolution::from_labels(data, labels, &Matrix::zeros(k, data.p())).unwrap()
    }

    #[test]
    fn intensification_touches_one_entry_per_object() {
        let data = two_blobs();
        let best = solved(&data, &[0, 0, 0, 1, 1, 1], 3);
        let w = best.inertia().unwrap();
        let mut g = PheromoneMatrix::filled(6, 3, 0.5);
        assert!(intensify_best(&mut g, &best, 250.0).unwrap());
        let changed = g.values().iter().filter(|&&v| v != 0.5).count();
        assert_eq!(changed, 6);
        assert_eq!(g.values().len() - changed, 6 * 2);
        assert!(close(g.get(4, 1), 0.5 + 250.0 / w, 1e-12));

        intensify_best(&mut g, &best, 250.0).unwrap();
        assert!(close(g.get(4, 1), 0.5 + 2.0 * 250.0 / w, 1e-12));
    }

    #[test]
    fn intensification_amount_at_reference_inertia() {
        assert!(close(250.0 / 7.62467183, 32.788_296_411_178_13, 1e-12));
    }

    #[test]
    fn intensification_skipped_for_perfect_clustering() {
        let data = Dataset::from_rows("d", &[[1.0], [1.0]]).unwrap();
        let best = solved(&data, &[0, 0], 2);
        let mut g = PheromoneMatrix::filled(2, 2, 0.1);
        assert!(!intensify_best(&mut g, &best, 250.0).unwrap());
        assert!(g.values().iter().all(|&v| v == 0.1));
    }

    #[test]
    fn baco_is_deterministic_and_monotone() {
        let data = two_blobs();
        let params = AcoParams::new(2).with_ants(6).with_seed(3);
        let a = run_baco(&data, &params).unwrap();
        let b = run_baco(&data, &params).unwrap();
        assert_eq!(a.best.assignment(), b.best.assignment());
        assert_eq!(a.record.final_w, b.record.final_w);
        assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.history.last().copied(), Some(a.record.final_w));
        assert_eq!(a.record.algorithm, Algorithm::Baco);
    }

    #[test]
    fn params_validation() {
        assert!(AcoParams::new(3).validate().is_ok());
        assert!(AcoParams::new(0).validate().is_err());
        assert!(AcoParams::new(3).with_rho(1.5).validate().is_err());
        assert!(AcoParams::new(3).with_ants(0).validate().is_err());
        assert!(AcoParams::new(3).with_weights(-1.0, 1.0).validate().is_err());
        assert!(AcoParams::new(3).with_q(0.0).validate().is_err());
    }
}
