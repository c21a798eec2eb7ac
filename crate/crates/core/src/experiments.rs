//! Finite-depth experiments: exponent traces, Monte-Carlo checks of the
//! level-set formalism, oscillation of `tau_n`, and coarse spectra.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{tilt_alpha, DigitMeasure, ModelParams};
use crate::numeric::log_sum_exp;
use crate::partition_spectrum::{entropy_tilted, spectrum_point, tau_n, theta, SpectrumPoint, ENUMERATION_BUDGET};
use crate::projection::{for_each_interval, nu_log_mass_ball, IsometryCode};
use crate::symbolic_space::{Alphabet, EpochSchedule};

/// Tilted weights above this are treated as a collapsing tilt.
pub const DEGENERATE_TILT_WEIGHT: f64 = 1.0 - 1e-3;

/// What a trace measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    /// `mu` on symbolic cylinders.
    Cylinder,
    /// `nu` on basic intervals.
    Interval,
    /// `nu_g` on basic intervals through a non-trivial code.
    CodedInterval,
}

/// `ln m(I_n(x)) / ln |I_n|` at increasing depths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentTrace {
    pub kind: TraceKind,
    pub depths: Vec<usize>,
    pub values: Vec<f64>,
}

fn check_depths(depths: &[usize], available: usize) -> Result<()> {
    if depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("depths {depths:?} must be strictly increasing")));
    }
    if let Some(&d) = depths.first() {
        if d == 0 {
            return Err(Error::Config("depths start at 1".into()));
        }
    }
    if let Some(&d) = depths.last() {
        if d > available {
            return Err(Error::Config(format!(
                "depth {d} exceeds the {available} digits supplied"
            )));
        }
    }
    Ok(())
}

/// Exponent trace of `nu_g` along the interval nest coded by `digits`.
pub fn exponent_trace(
    measure: &DigitMeasure,
    code: &IsometryCode,
    kind: TraceKind,
    digits: &[u32],
    depths: &[usize],
) -> Result<ExponentTrace> {
    let schedule = measure.schedule();
    code.validate(schedule)?;
    check_depths(depths, digits.len())?;
    let mut values = Vec::with_capacity(depths.len());
    let mut log_mass = 0.0;
    let mut next = depths.iter().peekable();
    let last = depths.last().copied().unwrap_or(0);
    for (alphabet, first, end) in schedule.runs(last)? {
        let logs = measure.log_weights(alphabet);
        for j in first..=end {
            let prev = if j == 1 { 0 } else { digits[j - 2] };
            let pre = code.preimage_digit(alphabet, prev, digits[j - 1]);
            log_mass += logs.get(pre as usize).ok_or(Error::InvalidDigit {
                position: j,
                digit: digits[j - 1],
                size: logs.len() as u32,
            })?;
            if next.peek() == Some(&&j) {
                next.next();
                values.push(log_mass / schedule.log_diameter(j)?);
            }
        }
    }
    Ok(ExponentTrace {
        kind,
        depths: depths.to_vec(),
        values,
    })
}

/// Bracket of `ln nu_g(B(x, r)) / ln r`.
pub fn ball_exponent(
    measure: &DigitMeasure,
    code: &IsometryCode,
    x: f64,
    r: f64,
    depth_cap: usize,
) -> Result<(f64, f64)> {
    if r.is_nan() || r >= 1.0 {
        return Err(Error::Config(format!("ball exponent needs r < 1, got {r}")));
    }
    let b = nu_log_mass_ball(measure, code, x, r, depth_cap)?;
    let ln_r = r.ln();
    Ok((b.log_upper / ln_r, b.log_lower / ln_r))
}

/// Mean of the sampled own-measure exponent at one probe depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OwnExponentProbe {
    pub depth: usize,
    /// `N_n / n`.
    pub density_a: f64,
    pub mean: f64,
    pub standard_error: f64,
    /// Entropy mixture weighted by the epoch content up to `depth`.
    pub predicted: f64,
    /// `3 SE` plus one digit's spread over the depth.
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of a Monte-Carlo check at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormalismReport {
    pub alpha: f64,
    pub samples: u64,
    pub depth: usize,
    pub mean_exponent: f64,
    pub sd_exponent: f64,
    pub standard_error: f64,
    /// Largest spread of one digit's contribution, divided by the depth.
    pub bias_allowance: f64,
    pub mean_pass: bool,
    pub probes: Vec<OwnExponentProbe>,
    pub own_exponent_min: f64,
    pub own_exponent_max: f64,
    pub targets: SpectrumPoint,
    pub degenerate_tilt: bool,
    pub pass: bool,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Largest spread of `-ln w / ln c` over the digits of one alphabet.
fn per_digit_range(weights: [&[f64]; 2], sizes: [u32; 2]) -> f64 {
    weights
        .iter()
        .zip(sizes)
        .map(|(w, c)| {
            let e: Vec<f64> = w.iter().map(|p| -p.ln() / f64::from(c).ln()).collect();
            let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Draws `samples` digit streams from the `alpha`-calibrated measure and
/// compares the `nu`-exponent at depth `n` with `alpha`, and the own-measure
/// exponents at epoch ends with the entropy mixtures.
pub fn mc_formalism_check(
    params: &ModelParams,
    schedule: &EpochSchedule,
    alpha: f64,
    samples: u64,
    n: usize,
    seed: u64,
) -> Result<FormalismReport> {
    if samples == 0 {
        return Err(Error::Config("the Monte-Carlo check needs at least one sample".into()));
    }
    if n == 0 {
        return Err(Error::Config("the Monte-Carlo depth must be positive".into()));
    }
    let tilt = tilt_alpha(params, alpha)?;
    let targets = spectrum_point(params, alpha)?;
    let base = DigitMeasure::base(params, schedule)?;
    let own = DigitMeasure::tilted_alpha(schedule, &tilt)?;

    let mut probe_depths: Vec<usize> = schedule.epoch_end_depths(n).into_iter().filter(|&d| d < n).collect();
    probe_depths.push(n);
    let probe_log_diam: Vec<f64> = probe_depths
        .iter()
        .map(|&d| schedule.log_diameter(d))
        .collect::<Result<_>>()?;
    let log_diam_n = schedule.log_diameter(n)?;

    let per_sample: Vec<(f64, Vec<f64>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut base_log = 0.0;
            let mut own_log = 0.0;
            let mut k = 0;
            let mut own_exps = Vec::with_capacity(probe_depths.len());
            own.sample_with(n, seed, i, |j, alphabet, d| {
                base_log += base.log_weights(alphabet)[d as usize];
                own_log += own.log_weights(alphabet)[d as usize];
                if j == probe_depths[k] {
                    own_exps.push(own_log / probe_log_diam[k]);
                    k = (k + 1).min(probe_depths.len() - 1);
                }
            })?;
            Ok((base_log / log_diam_n, own_exps))
        })
        .collect::<Result<_>>()?;

    let exps: Vec<f64> = per_sample.iter().map(|(e, _)| *e).collect();
    let (mean, sd) = mean_sd(&exps);
    let se = sd / (samples as f64).sqrt();
    let sizes = [schedule.c1(), schedule.c2()];
    let bias_allowance = per_digit_range([params.a(), params.b()], sizes) / n as f64;
    let mean_pass = (mean - alpha).abs() <= 3.0 * se + bias_allowance;

    let own_range = per_digit_range([&tilt.a, &tilt.b], sizes);
    let (ln_c1, ln_c2) = (f64::from(schedule.c1()).ln(), f64::from(schedule.c2()).ln());
    let mut probes = Vec::with_capacity(probe_depths.len());
    for (k, &d) in probe_depths.iter().enumerate() {
        let column: Vec<f64> = per_sample.iter().map(|(_, o)| o[k]).collect();
        let (m, s) = mean_sd(&column);
        let se = s / (samples as f64).sqrt();
        let na = schedule.count_a(d)? as f64;
        let nb = d as f64 - na;
        let predicted =
            (na * targets.h_a * ln_c1 + nb * targets.h_b * ln_c2) / (na * ln_c1 + nb * ln_c2);
        let tolerance = 3.0 * se + own_range / d as f64;
        probes.push(OwnExponentProbe {
            depth: d,
            density_a: na / d as f64,
            mean: m,
            standard_error: se,
            predicted,
            tolerance,
            pass: (m - predicted).abs() <= tolerance,
        });
    }
    let own_exponent_min = probes.iter().map(|p| p.mean).fold(f64::INFINITY, f64::min);
    let own_exponent_max = probes.iter().map(|p| p.mean).fold(f64::NEG_INFINITY, f64::max);
    let degenerate_tilt = tilt
        .a
        .iter()
        .chain(&tilt.b)
        .any(|&w| w > DEGENERATE_TILT_WEIGHT);
    let pass = mean_pass && probes.iter().all(|p| p.pass);
    Ok(FormalismReport {
        alpha,
        samples,
        depth: n,
        mean_exponent: mean,
        sd_exponent: sd,
        standard_error: se,
        bias_allowance,
        mean_pass,
        probes,
        own_exponent_min,
        own_exponent_max,
        targets,
        degenerate_tilt,
        pass,
    })
}

/// One `(q, depth)` cell of an oscillation study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationRow {
    pub q: f64,
    pub depth: usize,
    pub density_a: f64,
    pub tau_n: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub dist_a: f64,
    pub dist_b: f64,
    /// The branch `tau_n` is closer to.
    pub nearer: Alphabet,
}

/// `tau_n(q)` against both branch limits for every `q` and depth.
pub fn tau_oscillation_study(
    params: &ModelParams,
    schedule: &EpochSchedule,
    qs: &[f64],
    depths: &[usize],
) -> Result<Vec<OscillationRow>> {
    let mut rows = Vec::with_capacity(qs.len() * depths.len());
    for &q in qs {
        let theta_a = theta(params, Alphabet::A1, q);
        let theta_b = theta(params, Alphabet::A2, q);
        for &d in depths {
            let t = tau_n(params, schedule, d, q)?;
            let (dist_a, dist_b) = ((t - theta_a).abs(), (t - theta_b).abs());
            rows.push(OscillationRow {
                q,
                depth: d,
                density_a: schedule.count_a(d)? as f64 / d as f64,
                tau_n: t,
                theta_a,
                theta_b,
                dist_a,
                dist_b,
                nearer: if dist_a <= dist_b { Alphabet::A1 } else { Alphabet::A2 },
            });
        }
    }
    Ok(rows)
}

/// One histogram bin of coarse exponents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumBin {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub alpha_mid: f64,
    pub count: u64,
    /// `ln count / -ln |I_n|`, the coarse spectrum value.
    pub log_count_normalized: f64,
    /// Total `ln nu_g` mass of the intervals in the bin.
    pub log_mass: f64,
}

/// Histogram of `ln nu_g(I) / ln |I|` over all depth-`n` intervals.
///
/// Bins split the range of possible exponents evenly; empty bins are omitted.
pub fn coarse_spectrum(measure: &DigitMeasure, code: &IsometryCode, n: usize, bins: usize) -> Result<Vec<SpectrumBin>> {
    if bins == 0 {
        return Err(Error::Config("coarse spectrum needs at least one bin".into()));
    }
    let schedule = measure.schedule();
    let log_diam = schedule.log_diameter(n)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for alphabet in [Alphabet::A1, Alphabet::A2] {
        let c = f64::from(schedule.alphabet_size(alphabet)).ln();
        for &l in measure.log_weights(alphabet) {
            lo = lo.min(-l / c);
            hi = hi.max(-l / c);
        }
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut masses = vec![Vec::new(); bins];
    for_each_interval(measure, code, n, ENUMERATION_BUDGET, |_, lm| {
        let alpha = lm / log_diam;
        // exponents take few distinct values; the nudge keeps a value sitting
        // on a bin edge from being split by rounding
        let idx = if width > 0.0 {
            (((alpha - lo) / width + 1e-9).floor().max(0.0) as usize).min(bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
        masses[idx].push(lm);
    })?;
    Ok(counts
        .iter()
        .zip(&masses)
        .enumerate()
        .filter(|(_, (&c, _))| c > 0)
        .map(|(i, (&c, m))| {
            let alpha_lo = lo + width * i as f64;
            let alpha_hi = if i + 1 == bins { hi } else { lo + width * (i + 1) as f64 };
            SpectrumBin {
                alpha_lo,
                alpha_hi,
                alpha_mid: 0.5 * (alpha_lo + alpha_hi),
                count: c,
                log_count_normalized: (c as f64).ln() / -log_diam,
                log_mass: log_sum_exp(m),
            }
        })
        .collect())
}

/// Expected `nu`-exponent contribution of one digit under `tilted`:
/// `-sum tilted_i ln base_i / ln c`.
pub fn calibrated_digit_exponent(base: &[f64], tilted: &[f64]) -> f64 {
    let c = base.len() as f64;
    -base.iter().zip(tilted).map(|(b, t)| t * b.ln()).sum::<f64>() / c.ln()
}

/// Expected own-measure exponent contribution of one digit: the tilted entropy.
pub fn own_digit_exponent(tilted: &[f64]) -> f64 {
    entropy_tilted(tilted, tilted.len() as u32)
}
