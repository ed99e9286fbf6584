//! Drive the colony by hand: construction, pheromone evaporation and
//! best-ant intensification, printing the trail mass and the ants' inertias.

use antclust::aco::{construct_iteration, global_pheromone_update, init_colony, intensify_best};
use antclust::{generate, preset, AcoParams, Preset};

fn main() -> antclust::Result<()> {
    let data = generate(&preset(Preset::T105, 0))?;
    let params = AcoParams::new(7).with_ants(10).with_seed(5);
    let mut colony = init_colony(&data, &params)?;

    for it in 1..=8 {
        construct_iteration(&mut colony, &data, &params)?;
        colony.update_best();
        global_pheromone_update(&mut colony.gamma, &colony.gamma_aux, params.rho)?;
        colony.gamma_aux.clear();
        intensify_best(&mut colony.gamma, &colony.best, params.q)?;

        let ws: Vec<f64> = colony.ants.iter().filter_map(|a| a.inertia()).collect();
        let mean = ws.iter().sum::<f64>() / ws.len() as f64;
        println!(
            "iteration {it}: best W {:.4}, mean ant W {:.4}, trail mass {:.1}",
            colony.best_inertia,
            mean,
            colony.gamma.total()
        );
    }

    // how sharply the trail now points each of the first objects at a class
    for i in 0..5 {
        let row = colony.gamma.row(i);
        let total: f64 = row.iter().sum();
        let shares: Vec<String> = row.iter().map(|t| format!("{:.2}", t / total)).collect();
        println!("object {i}: trail shares [{}]", shares.join(", "));
    }
    Ok(())
}
