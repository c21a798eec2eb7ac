//! `tau_n` swings between the two branch functions at epoch ends.

use mff::experiments::tau_oscillation_study;
use mff::{EpochSchedule, ModelParams};

fn main() -> mff::Result<()> {
    let params = ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0])?;
    let schedule = EpochSchedule::squares(2, 2);
    let depths = [15, 255, 4095, 65535];
    let rows = tau_oscillation_study(&params, &schedule, &[-2.0, 0.0, 2.0], &depths)?;
    println!("{:>5} {:>6} {:>8} {:>9} {:>9} {:>9} nearer", "q", "n", "N_n/n", "tau_n", "theta_a", "theta_b");
    for r in rows {
        println!(
            "{:>5} {:>6} {:>8.4} {:>9.5} {:>9.5} {:>9.5} {:?}",
            r.q, r.depth, r.density_a, r.tau_n, r.theta_a, r.theta_b, r.nearer
        );
    }
    Ok(())
}
