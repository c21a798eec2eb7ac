//! Monte-Carlo evidence for the level-set formalism.

use mff::experiments::mc_formalism_check;
use mff::{EpochSchedule, ModelParams};

fn main() -> mff::Result<()> {
    let params = ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0])?;
    let schedule = EpochSchedule::squares(2, 2);
    let r = mc_formalism_check(&params, &schedule, 0.9, 500, 65535, 42)?;
    println!("alpha = {}, mean nu-exponent = {:.5} +- {:.5}", r.alpha, r.mean_exponent, r.standard_error);
    println!("h_a = {:.5}, h_b = {:.5}", r.targets.h_a, r.targets.h_b);
    for p in &r.probes {
        println!(
            "depth {:>6}: N_n/n = {:.4}, own exponent {:.5} (predicted {:.5})",
            p.depth, p.density_a, p.mean, p.predicted
        );
    }
    println!("pass: {}", r.pass);
    Ok(())
}
