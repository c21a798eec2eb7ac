//! Epoch schedules, word geometry and the ultrametric.

use mff::symbolic_space::{common_prefix_len, EpochSchedule, SchedulePreset, Word};

fn main() -> mff::Result<()> {
    let s = EpochSchedule::squares(2, 3);
    println!("epoch starts: {:?}", &s.boundaries()[..6]);
    for (alphabet, first, last) in s.runs(20)? {
        println!("  {alphabet:?} on positions {first}..={last}");
    }
    for n in [1, 3, 15, 255, 65535] {
        println!(
            "n = {n:>6}  N_n = {:>6}  density = {:.4}  ln|w| = {:.3}",
            s.count_a(n)?,
            s.count_a(n)? as f64 / n as f64,
            s.log_diameter(n)?
        );
    }

    let w: Word = "01120".parse()?;
    let v: Word = "01102".parse()?;
    println!("common prefix of {w} and {v}: {}", common_prefix_len(&w, &v));
    println!("ln d(w, v) = {:.4}", s.distance(&w, &v)?);

    let f = EpochSchedule::new(SchedulePreset::Factorial, 2, 2, 1 << 20)?;
    println!("factorial epoch starts: {:?}", &f.boundaries()[..7]);
    let g = EpochSchedule::new(SchedulePreset::Geometric { ratio: 4 }, 2, 2, 1 << 12)?;
    println!("geometric schedule warning: {}", g.warning().unwrap_or("none"));
    Ok(())
}
