//! The projected measure is not doubling, yet neighbor ratios stay controlled
//! outside the exceptional sets.

use mff::diagnostics::{doubling_report, exceptional_mass_exact, exhaustive_ratio_check, neighbor_log_ratio, threshold};
use mff::projection::interval_containing;
use mff::{DigitMeasure, EpochSchedule, ModelParams, NeighborSide};

fn main() -> mff::Result<()> {
    let s = EpochSchedule::squares(2, 2);
    let params = ModelParams::new(vec![0.25, 0.75], vec![0.25, 0.75])?;
    let nu = DigitMeasure::base(&params, &s)?;

    for n in [4, 8, 16, 32] {
        let i = interval_containing(&s, 0.5, n)?;
        let r = neighbor_log_ratio(&nu, i.word(), NeighborSide::Plus)?.unwrap();
        println!("n = {n:>2}: ln nu(I_n(1/2)) / nu(I_n^+) = {r:.3}");
    }
    for n in [9, 12, 14] {
        let r = exhaustive_ratio_check(&nu, n, 1 << 20)?;
        let e = exceptional_mass_exact(&nu, n, 1 << 20)?;
        println!(
            "n = {n}: <n> = {}, off-E_n max ratio {:.3} <= {:.3}, violations {}, nu(E_n) = {e:.4}",
            threshold(n),
            r.max_log_ratio,
            r.log_ratio_limit,
            r.violations
        );
    }
    let report = doubling_report(&nu, &nu, 400, 2000, 1)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
