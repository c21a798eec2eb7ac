//! Ball masses as brackets and their local exponents.

use mff::experiments::ball_exponent;
use mff::projection::nu_log_mass_ball;
use mff::{DigitMeasure, EpochSchedule, IsometryCode, ModelParams};

fn main() -> mff::Result<()> {
    let s = EpochSchedule::squares(2, 2);
    let nu = DigitMeasure::base(&ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0])?, &s)?;
    let code = IsometryCode::Identity;
    let x = 1.0 / 3.0;
    for k in [4, 8, 16, 24, 32] {
        let r = 0.5f64.powi(k);
        let b = nu_log_mass_ball(&nu, &code, x, r, 48)?;
        let (lo, hi) = ball_exponent(&nu, &code, x, r, 48)?;
        println!(
            "r = 2^-{k:<2}: ln nu(B) in [{:.6}, {:.6}], exponent in [{lo:.5}, {hi:.5}]",
            b.log_lower, b.log_upper
        );
    }
    Ok(())
}
