//! Tilting by `q` and by a target exponent `alpha`.

use mff::measure::{tilt_alpha, tilt_q};
use mff::partition_spectrum::{phi, theta_prime};
use mff::{Alphabet, ModelParams};

fn main() -> mff::Result<()> {
    let params = ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0])?;
    for q in [-2.0, 0.0, 1.0, 2.0, 50.0] {
        let t = tilt_q(&params, q)?;
        println!("q = {q:>5}: a~ = {:.4?}  b~ = {:.4?}", t.a, t.b);
    }

    let alpha = -theta_prime(&params, Alphabet::A2, 2.0);
    let t = tilt_alpha(&params, alpha)?;
    println!("alpha = {alpha:.10}: q_a = {:.8}, q_b = {:.8}", t.q_a, t.q_b);
    let h = 1e-6;
    let slope = (phi(&params, &t, h) - phi(&params, &t, -h)) / (2.0 * h);
    println!("phi(0) = {}, phi'(0) = {slope:.8}", phi(&params, &t, 0.0));
    Ok(())
}
