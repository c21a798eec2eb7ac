//! Weak doubling diagnostics for the projected measure.
//!
//! The projected measure is not doubling: adjacent basic intervals can carry
//! wildly different masses. Off the exceptional sets `E_n`, where a neighbor
//! splits from `I_n(x)` only near the end of the word, the ratio is bounded by
//! `C0^(sqrt(n) + 1)`, and `E_n` itself has mass at most `2 C1^sqrt(n)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{tilt_q, DigitMeasure, ModelParams};
use crate::partition_spectrum::check_budget;
use crate::projection::{neighbor_split_depth, NeighborSide};
use crate::symbolic_space::{Alphabet, EpochSchedule, Word};

/// `floor(n - sqrt(n))`.
pub fn threshold(n: usize) -> usize {
    let s = n.isqrt();
    if s * s == n {
        n - s
    } else {
        n - s - 1
    }
}

/// The constants of the weak doubling bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublingConstants {
    /// Largest ratio between two weights of the same alphabet.
    pub c0: f64,
    /// Largest weight of the measure whose exceptional mass is bounded.
    pub c1: f64,
    /// Smallest base weight.
    pub c2: f64,
    /// Set when every weight is uniform, so `c0 = 1`.
    pub degenerate: bool,
}

impl DoublingConstants {
    /// Ratio constants from `base`, `c1` from the weights of `sampling`.
    pub fn from_measures(base: &DigitMeasure, sampling: &DigitMeasure) -> Self {
        let both = |m: &DigitMeasure| {
            let mut all = m.weights(Alphabet::A1).to_vec();
            all.extend_from_slice(m.weights(Alphabet::A2));
            all
        };
        let ratio = |w: &[f64]| max_of(w) / min_of(w);
        let c0 = ratio(base.weights(Alphabet::A1)).max(ratio(base.weights(Alphabet::A2)));
        Self {
            c0,
            c1: max_of(&both(sampling)),
            c2: min_of(&both(base)),
            degenerate: c0 <= 1.0,
        }
    }
}

fn max_of(w: &[f64]) -> f64 {
    w.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(w: &[f64]) -> f64 {
    w.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `C0`, `C1` (or `C1(q)` from the `q`-tilted weights) and `C2`.
pub fn constants(params: &ModelParams, q: Option<f64>) -> Result<DoublingConstants> {
    let ratio = |w: &[f64]| max_of(w) / min_of(w);
    let c0 = ratio(params.a()).max(ratio(params.b()));
    let c1 = match q {
        None => max_of(params.a()).max(max_of(params.b())),
        Some(q) => {
            let t = tilt_q(params, q)?;
            max_of(&t.a).max(max_of(&t.b))
        }
    };
    Ok(DoublingConstants {
        c0,
        c1,
        c2: min_of(params.a()).min(min_of(params.b())),
        degenerate: c0 <= 1.0,
    })
}

/// Whether `I_n` (with `n = w.depth()`) lies in `E_n`: some existing neighbor
/// splits from it before depth `<n>`.
pub fn en_membership(schedule: &EpochSchedule, w: &Word) -> Result<bool> {
    let t = threshold(w.depth());
    for side in [NeighborSide::Minus, NeighborSide::Plus] {
        match neighbor_split_depth(schedule, w, side) {
            Ok(s) if s < t => return Ok(true),
            Ok(_) | Err(Error::Boundary { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(false)
}

/// `ln m(I) - ln m(I^side)`, or `None` at the boundary.
///
/// Only the digits after the split depth differ, so the cost is the length of
/// the trailing run.
pub fn neighbor_log_ratio(measure: &DigitMeasure, w: &Word, side: NeighborSide) -> Result<Option<f64>> {
    let schedule = measure.schedule();
    let s = match neighbor_split_depth(schedule, w, side) {
        Ok(s) => s,
        Err(Error::Boundary { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let digits = w.digits();
    let mut ratio = 0.0;
    for j in s + 1..=digits.len() {
        let d = digits[j - 1];
        let other = if j == s + 1 {
            match side {
                NeighborSide::Plus => d + 1,
                NeighborSide::Minus => d - 1,
            }
        } else {
            match side {
                NeighborSide::Plus => 0,
                NeighborSide::Minus => schedule.size_at(j)? - 1,
            }
        };
        ratio += measure.log_weight(j, d)? - measure.log_weight(j, other)?;
    }
    Ok(Some(ratio))
}

/// `(sqrt(n) + 1) ln C0`.
pub fn log_ratio_limit(n: usize, c0: f64) -> f64 {
    ((n as f64).sqrt() + 1.0) * c0.ln()
}

/// Exhaustive check of the ratio bound over every depth-`n` word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExhaustiveRatioCheck {
    pub n: usize,
    pub words: u64,
    pub non_members: u64,
    pub violations: u64,
    /// Largest `|ln nu(I) - ln nu(I^±)|` seen on a non-member.
    pub max_log_ratio: f64,
    pub log_ratio_limit: f64,
}

/// Checks `|ln nu(I) - ln nu(I^±)| <= (sqrt(n) + 1) ln C0` for every depth-`n`
/// word outside `E_n`.
pub fn exhaustive_ratio_check(base: &DigitMeasure, n: usize, budget: u64) -> Result<ExhaustiveRatioCheck> {
    let schedule = base.schedule();
    check_budget(schedule, n, budget)?;
    let consts = DoublingConstants::from_measures(base, base);
    let limit = log_ratio_limit(n, consts.c0);
    let mut report = ExhaustiveRatioCheck {
        n,
        words: 0,
        non_members: 0,
        violations: 0,
        max_log_ratio: 0.0,
        log_ratio_limit: limit,
    };
    for_each_word(schedule, n, |w| {
        report.words += 1;
        if en_membership(schedule, w)? {
            return Ok(());
        }
        report.non_members += 1;
        let mut violated = false;
        for side in [NeighborSide::Minus, NeighborSide::Plus] {
            if let Some(r) = neighbor_log_ratio(base, w, side)? {
                report.max_log_ratio = report.max_log_ratio.max(r.abs());
                violated |= r.abs() > limit + 1e-12;
            }
        }
        report.violations += u64::from(violated);
        Ok(())
    })?;
    Ok(report)
}

/// Exact `m(E_n)` by summing over every depth-`n` word.
pub fn exceptional_mass_exact(measure: &DigitMeasure, n: usize, budget: u64) -> Result<f64> {
    let schedule = measure.schedule();
    check_budget(schedule, n, budget)?;
    let mut total = 0.0;
    for_each_word(schedule, n, |w| {
        if en_membership(schedule, w)? {
            total += measure.log_mass(w)?.exp();
        }
        Ok(())
    })?;
    Ok(total)
}

fn for_each_word(schedule: &EpochSchedule, n: usize, mut visit: impl FnMut(&Word) -> Result<()>) -> Result<()> {
    let sizes: Vec<u32> = (1..=n).map(|j| schedule.size_at(j)).collect::<Result<_>>()?;
    let mut w = Word::new(vec![0; n]);
    loop {
        visit(&w)?;
        let mut digits = w.into_digits();
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < sizes[k] {
                break;
            }
            digits[k] = 0;
        }
        w = Word::new(digits);
    }
}

/// Monte-Carlo view of the weak doubling property at depth `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub n: usize,
    pub samples: u64,
    pub frac_in_en: f64,
    /// `2 C1^sqrt(n)`.
    pub bound: f64,
    /// Non-members of `E_n` whose neighbor ratio breaks the bound.
    pub ratio_violations: u64,
    pub non_members: u64,
    pub max_log_ratio: f64,
    pub log_ratio_limit: f64,
    pub constants: DoublingConstants,
}

/// Samples `samples` words of depth `n` from `sampling` and inspects the
/// neighbor ratios of `base` at each.
pub fn doubling_report(
    sampling: &DigitMeasure,
    base: &DigitMeasure,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<DoublingReport> {
    if samples == 0 {
        return Err(Error::Config("doubling report needs at least one sample".into()));
    }
    let schedule = base.schedule();
    schedule.alphabet_at(n)?;
    let consts = DoublingConstants::from_measures(base, sampling);
    let limit = log_ratio_limit(n, consts.c0);
    let per_sample: Vec<(bool, Option<f64>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = sampling.sample_indexed(n, seed, i)?;
            if en_membership(schedule, &w)? {
                return Ok((true, None));
            }
            let mut worst = 0.0f64;
            for side in [NeighborSide::Minus, NeighborSide::Plus] {
                if let Some(r) = neighbor_log_ratio(base, &w, side)? {
                    worst = worst.max(r.abs());
                }
            }
            Ok((false, Some(worst)))
        })
        .collect::<Result<_>>()?;
    let mut members = 0u64;
    let mut violations = 0u64;
    let mut max_log_ratio = 0.0f64;
    for (member, worst) in per_sample {
        members += u64::from(member);
        if let Some(r) = worst {
            max_log_ratio = max_log_ratio.max(r);
            violations += u64::from(r > limit + 1e-12);
        }
    }
    Ok(DoublingReport {
        n,
        samples,
        frac_in_en: members as f64 / samples as f64,
        bound: 2.0 * consts.c1.powf((n as f64).sqrt()),
        ratio_violations: violations,
        non_members: samples - members,
        max_log_ratio,
        log_ratio_limit: limit,
        constants: consts,
    })
}
