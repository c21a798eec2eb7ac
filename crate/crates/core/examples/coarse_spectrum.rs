//! Histogram of coarse exponents at a finite depth.

use mff::experiments::coarse_spectrum;
use mff::{DigitMeasure, EpochSchedule, IsometryCode, ModelParams};

fn main() -> mff::Result<()> {
    let s = EpochSchedule::squares(2, 2);
    let nu = DigitMeasure::base(&ModelParams::new(vec![0.25, 0.75], vec![0.25, 0.75])?, &s)?;
    for bin in coarse_spectrum(&nu, &IsometryCode::Identity, 20, 24)? {
        let bar = "#".repeat((bin.log_count_normalized * 40.0) as usize);
        println!("{:>6.3} {:>8} {bar}", bin.alpha_mid, bin.count);
    }
    Ok(())
}
