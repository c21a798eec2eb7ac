//! Basic intervals, neighbors and Gray transport.

use mff::projection::{gray_encode, interval_containing, neighbors, nu_log_mass_interval, word_of_index};
use mff::{DigitMeasure, EpochSchedule, IsometryCode, ModelParams};

fn main() -> mff::Result<()> {
    let s = EpochSchedule::squares(2, 2);
    let mu = DigitMeasure::base(&ModelParams::new(vec![0.25, 0.75], vec![0.4, 0.6])?, &s)?;

    let i = interval_containing(&s, 0.3, 5)?;
    let (lo, hi) = neighbors(&s, &i)?;
    println!("I_5(0.3) = {} = [{}, {}]", i.word(), i.left(&s)?, i.right(&s)?);
    println!("neighbors: {:?} {:?}", lo.map(|i| i.word().to_string()), hi.map(|i| i.word().to_string()));

    println!("{:>5} {:>6} {:>10} {:>10} {:>10}", "index", "word", "preimage", "ln nu", "ln nu_g");
    for idx in 0..16 {
        let w = word_of_index(&s, 4, idx)?;
        let interval = mff::projection::interval_of_word(&s, &w)?;
        println!(
            "{idx:>5} {w:>6} {:>10} {:>10.4} {:>10.4}",
            gray_encode(&w)?.to_string(),
            nu_log_mass_interval(&mu, &IsometryCode::Identity, &interval)?,
            nu_log_mass_interval(&mu, &IsometryCode::GrayBinary, &interval)?
        );
    }
    Ok(())
}
