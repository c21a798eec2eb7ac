use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{RunConfig, SampleMeasure};
use super::format::{num, Csv};
use super::svg::{Plot, Series};
use super::Report;
use crate::diagnostics::{
    constants, doubling_report, en_membership, exceptional_mass_exact, exhaustive_ratio_check,
};
use crate::error::{Error, Result};
use crate::experiments::{coarse_spectrum, exponent_trace, mc_formalism_check, TraceKind};
use crate::measure::{tilt_alpha, DigitMeasure, ModelParams, MAX_ABS_Q};
use crate::partition_spectrum::{
    check_budget, partition_sums_bruteforce, spectrum_domain, spectrum_point, tau_limits, tau_n,
    theta, ENUMERATION_BUDGET,
};
use crate::projection::{
    diameter, for_each_interval, gray_encode, interval_containing, neighbors, nu_log_mass_ball,
    nu_log_mass_interval, word_of_index, IsometryCode,
};
use crate::symbolic_space::{common_prefix_len, Alphabet, EpochSchedule, Word, DEFAULT_MAX_DEPTH};

/// Validated model built from a config.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ModelParams,
    pub schedule: EpochSchedule,
    pub code: IsometryCode,
}

impl Model {
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        let (a, b) = config.weights.parse()?;
        if let Some([c1, c2]) = config.alphabets {
            if (c1 as usize, c2 as usize) != (a.len(), b.len()) {
                return Err(Error::Config(format!(
                    "alphabets: declared sizes ({c1}, {c2}) but weights have {} and {} entries",
                    a.len(),
                    b.len()
                )));
            }
        }
        let params = ModelParams::new(a, b)?;
        let schedule = EpochSchedule::new(
            config.schedule.clone(),
            params.c1(),
            params.c2(),
            config.max_depth.unwrap_or(DEFAULT_MAX_DEPTH),
        )?;
        config.isometry.validate(&schedule)?;
        Ok(Self {
            params,
            schedule,
            code: config.isometry.clone(),
        })
    }

    pub fn base(&self) -> Result<DigitMeasure> {
        DigitMeasure::base(&self.params, &self.schedule)
    }
}

pub fn cmd_tau(config: &RunConfig, want_svg: bool) -> Result<Report> {
    let model = Model::from_config(config)?;
    let section = config.tau.clone().unwrap_or_default();
    let qs = section.q.values();
    let mut header: Vec<String> = ["q", "theta_a", "theta_b", "tau_lower", "tau_upper"]
        .map(String::from)
        .to_vec();
    header.extend(section.depths.iter().map(|d| format!("tau_n@{d}")));
    let mut csv = Csv::new(&config.echo(), &header);
    let mut curves = vec![Vec::new(); 2 + section.depths.len()];
    for &q in &qs {
        let ta = theta(&model.params, Alphabet::A1, q);
        let tb = theta(&model.params, Alphabet::A2, q);
        let (upper, lower) = tau_limits(&model.params, q);
        let mut cells = vec![num(q), num(ta), num(tb), num(lower), num(upper)];
        curves[0].push((q, ta));
        curves[1].push((q, tb));
        for (k, &d) in section.depths.iter().enumerate() {
            let t = tau_n(&model.params, &model.schedule, d, q)?;
            cells.push(num(t));
            curves[2 + k].push((q, t));
        }
        csv.row(&cells);
    }
    let svg = want_svg.then(|| {
        let mut names = vec!["theta_a".to_string(), "theta_b".to_string()];
        names.extend(section.depths.iter().map(|d| format!("tau_n, n = {d}")));
        Plot {
            title: "Scaling functions".into(),
            x_label: "q".into(),
            y_label: "tau".into(),
            series: names.iter().zip(curves).map(|(n, c)| Series::line(n, c)).collect(),
        }
        .render()
    });
    Ok(Report {
        body: csv.finish(),
        svg,
        passed: true,
    })
}

pub fn cmd_spectrum(config: &RunConfig, want_svg: bool) -> Result<Report> {
    let model = Model::from_config(config)?;
    let section = config.spectrum.clone().unwrap_or_default();
    let domain = spectrum_domain(&model.params);
    let alphas = match &section.alpha {
        Some(grid) => grid.values(),
        None if domain.is_empty() => Vec::new(),
        None => domain.interior_grid(50),
    };
    let header = [
        "alpha", "q_a", "q_b", "h_a", "h_b", "f_dim", "f_Dim", "Dim_valid", "in_domain",
    ]
    .map(String::from);
    let mut csv = Csv::new(&config.echo(), &header);
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for &alpha in &alphas {
        match spectrum_point(&model.params, alpha) {
            Ok(p) => {
                let f_dim = p.hausdorff_dim;
                let f_big = if p.packing_valid { p.packing_dim } else { p.upper_legendre };
                lower.push((alpha, f_dim));
                upper.push((alpha, f_big));
                csv.row(&[
                    num(alpha),
                    num(p.q_a),
                    num(p.q_b),
                    num(p.h_a),
                    num(p.h_b),
                    num(f_dim),
                    num(f_big),
                    p.packing_valid.to_string(),
                    "true".into(),
                ]);
            }
            Err(Error::Domain { .. } | Error::Degenerate { .. }) => {
                let mut cells = vec![num(alpha)];
                cells.extend(std::iter::repeat_n(String::new(), 7));
                cells.push("false".into());
                csv.row(&cells);
            }
            Err(e) => return Err(e),
        }
    }
    let svg = if want_svg {
        let mut series = vec![Series::line("f_dim", lower), Series::line("f_Dim", upper)];
        if let Some(coarse) = &section.coarse {
            let bins = coarse_spectrum(&model.base()?, &model.code, coarse.depth, coarse.bins)?;
            series.push(Series::points(
                &format!("coarse, n = {}", coarse.depth),
                bins.iter().map(|b| (b.alpha_mid, b.log_count_normalized)).collect(),
            ));
        }
        Some(
            Plot {
                title: "Dimension spectra".into(),
                x_label: "alpha".into(),
                y_label: "dimension".into(),
                series,
            }
            .render(),
        )
    } else {
        None
    };
    Ok(Report {
        body: csv.finish(),
        svg,
        passed: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Suite {
    name: &'static str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    checks: Vec<Check>,
}

impl Suite {
    fn from_checks(name: &'static str, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name,
            status,
            reason: None,
            checks,
        }
    }

    fn skipped(name: &'static str, reason: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::Skipped,
            reason: Some(reason.into()),
            checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct VerifyReport<'a> {
    status: Status,
    config: &'a RunConfig,
    suites: Vec<Suite>,
}

pub fn cmd_verify(config: &RunConfig) -> Result<Report> {
    let model = Model::from_config(config)?;
    let v = config.verify.clone().unwrap_or_default();
    let qs: Vec<f64> = v.q.iter().copied().filter(|q| q.abs() <= MAX_ABS_Q).collect();
    let suites = vec![
        oracle_suite(&model, &qs, v.oracle_depth)?,
        normalization_suite(&model, v.oracle_depth)?,
        identity_suite(&model, &qs, v.identity_depth)?,
        doubling_suite(&model, &v.ratio_depths, v.doubling_samples, v.doubling_depth, config.seed)?,
        isometry_suite(&model, v.isometry_depth, config.seed)?,
        formalism_suite(&model, v.mc_alpha, v.mc_samples, v.mc_depth, config.seed)?,
    ];
    let passed = suites.iter().all(|s| s.status != Status::Fail);
    let report = VerifyReport {
        status: if passed { Status::Pass } else { Status::Fail },
        config,
        suites,
    };
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    Ok(Report {
        body,
        svg: None,
        passed,
    })
}

fn oracle_suite(model: &Model, qs: &[f64], depth: usize) -> Result<Suite> {
    check_budget(&model.schedule, depth, ENUMERATION_BUDGET)?;
    let base = model.base()?;
    let mut worst = 0.0f64;
    for n in 1..=depth {
        let sums = partition_sums_bruteforce(&base, n, qs)?;
        let log_diam = model.schedule.log_diameter(n)?;
        for (&q, &z) in qs.iter().zip(&sums) {
            let closed = -tau_n(&model.params, &model.schedule, n, q)? * log_diam;
            worst = worst.max((z - closed).abs());
        }
    }
    Ok(Suite::from_checks(
        "partition-sum-oracle",
        vec![Check::at_most("max |ln Z_n(q) + tau_n(q) ln|w||", worst, 1e-9)],
    ))
}

fn normalization_suite(model: &Model, depth: usize) -> Result<Suite> {
    let mut worst = theta(&model.params, Alphabet::A1, 1.0)
        .abs()
        .max(theta(&model.params, Alphabet::A2, 1.0).abs());
    for n in 1..=depth.max(1) {
        worst = worst.max(tau_n(&model.params, &model.schedule, n, 1.0)?.abs());
    }
    Ok(Suite::from_checks(
        "normalization",
        vec![Check::at_most("max |tau(1)|", worst, 1e-12)],
    ))
}

fn identity_suite(model: &Model, qs: &[f64], depth: usize) -> Result<Suite> {
    check_budget(&model.schedule, depth, ENUMERATION_BUDGET)?;
    let base = model.base()?;
    let mut identity_err = 0.0f64;
    let mut bound_excess = f64::NEG_INFINITY;
    for &q in qs {
        let tilted = DigitMeasure::tilted_q(&model.params, &model.schedule, q)?;
        let (_, lower) = tau_limits(&model.params, q);
        for n in 1..=depth {
            let t = tau_n(&model.params, &model.schedule, n, q)?;
            let log_diam = model.schedule.log_diameter(n)?;
            let mut failure = None;
            for_each_interval(&base, &IsometryCode::Identity, n, ENUMERATION_BUDGET, |digits, lm| {
                match tilted.log_mass_digits(digits) {
                    Ok(lt) => {
                        identity_err = identity_err.max((lt - (q * lm + t * log_diam)).abs());
                        bound_excess = bound_excess.max(lt - (q * lm + lower * log_diam));
                    }
                    Err(e) => failure = Some(e),
                }
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }
    Ok(Suite::from_checks(
        "tilted-mass-identity",
        vec![
            Check::at_most("max |ln mu_q(w) - q ln mu(w) - tau_n(q) ln|w||", identity_err, 1e-9),
            Check::at_most("max ln mu_q(w) - q ln mu(w) - tau_lower(q) ln|w|", bound_excess.max(0.0), 1e-9),
        ],
    ))
}

fn doubling_suite(model: &Model, depths: &[usize], samples: u64, depth: usize, seed: u64) -> Result<Suite> {
    let base = model.base()?;
    let mut checks = Vec::new();
    for &n in depths {
        let r = exhaustive_ratio_check(&base, n, ENUMERATION_BUDGET)?;
        checks.push(Check::at_most(format!("ratio violations off E_n, n = {n}"), r.violations as f64, 0.0));
        for q in [None, Some(2.0), Some(-2.0)] {
            let m = match q {
                None => base.clone(),
                Some(q) => DigitMeasure::tilted_q(&model.params, &model.schedule, q)?,
            };
            let c1 = constants(&model.params, q)?.c1;
            let mass = exceptional_mass_exact(&m, n, ENUMERATION_BUDGET)?;
            let label = q.map_or("nu".to_string(), |q| format!("nu_q, q = {q}"));
            checks.push(Check::at_most(
                format!("{label}: mass of E_n, n = {n}"),
                mass,
                2.0 * c1.powf((n as f64).sqrt()),
            ));
        }
    }
    if samples > 0 {
        let r = doubling_report(&base, &base, depth, samples, seed)?;
        checks.push(Check::at_most(
            format!("sampled ratio violations off E_n, n = {depth}"),
            r.ratio_violations as f64,
            0.0,
        ));
        let m = samples as f64;
        checks.push(Check::at_most(
            format!("sampled fraction in E_n, n = {depth}"),
            r.frac_in_en,
            r.bound + 3.0 * (r.bound / m).sqrt() + 1.0 / m,
        ));
    }
    Ok(Suite::from_checks("weak-doubling", checks))
}

fn isometry_suite(model: &Model, depth: usize, seed: u64) -> Result<Suite> {
    let s = &model.schedule;
    if s.c1() != 2 || s.c2() != 2 {
        return Ok(Suite::skipped("gray-isometry", "Gray codes need binary alphabets"));
    }
    let gray = IsometryCode::GrayBinary;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prefix_mismatches = 0u64;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=32);
        let x = Word::new((0..n).map(|_| rng.gen_range(0..2)).collect());
        let y = Word::new((0..n).map(|_| rng.gen_range(0..2)).collect());
        let l = common_prefix_len(&x, &y);
        let gl = common_prefix_len(&gray.apply(s, &x)?, &gray.apply(s, &y)?);
        let hl = common_prefix_len(&gray.preimage(s, &x)?, &gray.preimage(s, &y)?);
        prefix_mismatches += u64::from(gl != l) + u64::from(hl != l);
    }
    let mut flip_failures = 0u64;
    let mut worst_ratio = 0.0f64;
    let base = model.base()?;
    for n in 1..=depth {
        check_budget(s, n, ENUMERATION_BUDGET)?;
        let mut prev = gray_encode(&word_of_index(s, n, 0)?)?;
        for idx in 1..1u128 << n {
            let next = gray_encode(&word_of_index(s, n, idx)?)?;
            let flips = prev.digits().iter().zip(next.digits()).filter(|(a, b)| a != b).count();
            flip_failures += u64::from(flips != 1);
            prev = next;
        }
        let mut last: Option<f64> = None;
        for_each_interval(&base, &gray, n, ENUMERATION_BUDGET, |_, lm| {
            if let Some(p) = last {
                worst_ratio = worst_ratio.max((lm - p).abs());
            }
            last = Some(lm);
        })?;
    }
    let ln_c0 = constants(&model.params, None)?.c0.ln();
    Ok(Suite::from_checks(
        "gray-isometry",
        vec![
            Check::at_most("common-prefix mismatches on 10000 random pairs", prefix_mismatches as f64, 0.0),
            Check::at_most("adjacent preimages not one flip apart", flip_failures as f64, 0.0),
            Check::at_most("max |ln nu_g(I) - ln nu_g(I')| over adjacent pairs", worst_ratio, ln_c0 + 1e-12),
        ],
    ))
}

fn formalism_suite(model: &Model, alpha: Option<f64>, samples: u64, depth: usize, seed: u64) -> Result<Suite> {
    if samples == 0 {
        return Ok(Suite::skipped("monte-carlo-formalism", "no samples requested"));
    }
    let alpha = match alpha {
        Some(a) => a,
        None => {
            let d = spectrum_domain(&model.params);
            if d.is_empty() {
                return Ok(Suite::skipped("monte-carlo-formalism", "empty spectrum domain"));
            }
            0.5 * (d.lo + d.hi)
        }
    };
    let r = mc_formalism_check(&model.params, &model.schedule, alpha, samples, depth, seed)?;
    let mut checks = vec![
        Check::at_most(
            format!("|mean nu-exponent - alpha|, alpha = {alpha}, n = {depth}"),
            (r.mean_exponent - alpha).abs(),
            3.0 * r.standard_error + r.bias_allowance,
        ),
    ];
    for p in &r.probes {
        checks.push(Check::at_most(
            format!("own exponent at depth {} vs entropy mixture {}", p.depth, num(p.predicted)),
            (p.mean - p.predicted).abs(),
            p.tolerance,
        ));
    }
    Ok(Suite::from_checks("monte-carlo-formalism", checks))
}

fn periodic(pattern: &[u32], n: usize) -> Vec<u32> {
    pattern.iter().copied().cycle().take(n).collect()
}

pub fn cmd_sample(config: &RunConfig, want_svg: bool) -> Result<Report> {
    let model = Model::from_config(config)?;
    let section = config.sample.clone().unwrap_or_default();
    let sampler = match section.measure {
        SampleMeasure::Base => model.base()?,
        SampleMeasure::TiltedQ(q) => DigitMeasure::tilted_q(&model.params, &model.schedule, q)?,
        SampleMeasure::Alpha(alpha) => {
            DigitMeasure::tilted_alpha(&model.schedule, &tilt_alpha(&model.params, alpha)?)?
        }
    };
    let base = model.base()?;
    let header = ["sample", "depth", "x", "exponent", "own_exponent"].map(String::from);
    let mut csv = Csv::new(&config.echo(), &header);
    let max_depth = section.depths.iter().copied().max().unwrap_or(0);
    let count = if section.pattern.is_some() { 1 } else { section.count };
    let kind = if model.code == IsometryCode::Identity {
        TraceKind::Interval
    } else {
        TraceKind::CodedInterval
    };
    if let Some(p) = &section.pattern {
        if p.is_empty() {
            return Err(Error::Config("sample.pattern must not be empty".into()));
        }
    }
    let traces: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| {
            // image digits: the expansion of the point in [0, 1]
            let (image, symbolic) = match &section.pattern {
                Some(p) => {
                    let image = Word::new(periodic(p, max_depth));
                    model.schedule.validate_word(&image)?;
                    let symbolic = model.code.preimage(&model.schedule, &image)?;
                    (image, symbolic)
                }
                None => {
                    let symbolic = sampler.sample_indexed(max_depth, config.seed, i)?;
                    (model.code.apply(&model.schedule, &symbolic)?, symbolic)
                }
            };
            let x = crate::projection::gamma_point(&model.schedule, image.digits())?;
            let nu = exponent_trace(&base, &model.code, kind, image.digits(), &section.depths)?;
            let own = exponent_trace(
                &sampler,
                &IsometryCode::Identity,
                TraceKind::Cylinder,
                symbolic.digits(),
                &section.depths,
            )?;
            Ok((x, nu, own))
        })
        .collect::<Result<_>>()?;
    let mut series = Vec::new();
    for (i, (x, nu, own)) in traces.iter().enumerate() {
        for ((d, e), o) in nu.depths.iter().zip(&nu.values).zip(&own.values) {
            csv.row(&[i.to_string(), d.to_string(), num(*x), num(*e), num(*o)]);
        }
        if i < 6 {
            series.push(Series::line(
                &format!("sample {i}"),
                nu.depths.iter().map(|&d| d as f64).zip(nu.values.iter().copied()).collect(),
            ));
        }
    }
    let svg = want_svg.then(|| {
        Plot {
            title: "Local exponent traces".into(),
            x_label: "depth".into(),
            y_label: "ln nu(I_n) / ln |I_n|".into(),
            series,
        }
        .render()
    });
    Ok(Report {
        body: csv.finish(),
        svg,
        passed: true,
    })
}

pub fn cmd_project(config: &RunConfig) -> Result<Report> {
    let model = Model::from_config(config)?;
    let section = config
        .project
        .clone()
        .ok_or_else(|| Error::Config("project: section missing".into()))?;
    let n = section.depth;
    let base = model.base()?;
    if section.points.is_empty() {
        let header = ["index", "word", "left", "right", "log_length", "log_nu"].map(String::from);
        let mut csv = Csv::new(&config.echo(), &header);
        let log_len = model.schedule.log_diameter(n)?;
        let len = diameter(&model.schedule, n)?;
        let mut index = 0u64;
        for_each_interval(&base, &model.code, n, ENUMERATION_BUDGET, |digits, lm| {
            let word = Word::new(digits.to_vec());
            csv.row(&[
                index.to_string(),
                word.to_string(),
                num(index as f64 * len),
                num((index + 1) as f64 * len),
                num(log_len),
                num(lm),
            ]);
            index += 1;
        })?;
        return Ok(Report {
            body: csv.finish(),
            svg: None,
            passed: true,
        });
    }
    let header = [
        "x",
        "word",
        "left",
        "right",
        "log_nu",
        "log_nu_minus",
        "log_nu_plus",
        "in_en",
        "ball_log_lower",
        "ball_log_upper",
    ]
    .map(String::from);
    let mut csv = Csv::new(&config.echo(), &header);
    let nu = |i: &Option<crate::projection::BasicInterval>| -> Result<String> {
        Ok(match i {
            Some(i) => num(nu_log_mass_interval(&base, &model.code, i)?),
            None => String::new(),
        })
    };
    for &x in &section.points {
        let i = interval_containing(&model.schedule, x, n)?;
        let (minus, plus) = neighbors(&model.schedule, &i)?;
        let (lo, hi) = match section.radius {
            Some(r) => {
                let b = nu_log_mass_ball(&base, &model.code, x, r, section.ball_depth.unwrap_or(n))?;
                (num(b.log_lower), num(b.log_upper))
            }
            None => (String::new(), String::new()),
        };
        csv.row(&[
            num(x),
            i.word().to_string(),
            num(i.left(&model.schedule)?),
            num(i.right(&model.schedule)?),
            num(nu_log_mass_interval(&base, &model.code, &i)?),
            nu(&minus)?,
            nu(&plus)?,
            en_membership(&model.schedule, i.word())?.to_string(),
            lo,
            hi,
        ]);
    }
    Ok(Report {
        body: csv.finish(),
        svg: None,
        passed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> RunConfig {
        let text = format!(
            r#"{{"weights": {{"a": ["1/4", "3/4"], "b": ["1/3", "2/3"]}}{extra}}}"#
        );
        RunConfig::from_json(&text).unwrap()
    }

    fn data_rows(body: &str) -> Vec<Vec<String>> {
        body.lines().skip(2).map(|l| l.split(',').map(String::from).collect()).collect()
    }

    #[test]
    fn tau_rows() {
        let c = config(r#", "tau": {"q": [1, 2], "depths": [255]}"#);
        let r = cmd_tau(&c, true).unwrap();
        let lines: Vec<&str> = r.body.lines().collect();
        assert!(lines[0].starts_with("# mff-config: "));
        assert_eq!(lines[1], "q,theta_a,theta_b,tau_lower,tau_upper,tau_n@255");
        let rows = data_rows(&r.body);
        for cell in &rows[0][1..] {
            assert!(cell.parse::<f64>().unwrap().abs() < 1e-15);
        }
        let ta: f64 = rows[1][1].parse().unwrap();
        let tb: f64 = rows[1][2].parse().unwrap();
        assert!((ta + 0.6780719).abs() < 1e-7 && (tb + 0.8479969).abs() < 1e-7);
        assert!(r.svg.unwrap().starts_with("<svg"));
        let empty = cmd_tau(&config(r#", "tau": {"q": []}"#), false).unwrap();
        assert_eq!(empty.body.lines().count(), 2);
    }

    #[test]
    fn spectrum_marks_out_of_domain_rows() {
        let alpha = 3f64.log2() - 0.8;
        let c = config(&format!(r#", "spectrum": {{"alpha": [{alpha:?}, 0.1]}}"#));
        let r = cmd_spectrum(&c, false).unwrap();
        let rows = data_rows(&r.body);
        let h_b: f64 = rows[0][4].parse().unwrap();
        assert!((h_b - 0.7219281).abs() < 1e-6);
        assert_eq!(rows[1][8], "false");
        assert_eq!(rows[1][1], "");
    }

    #[test]
    fn validation_errors_name_the_field() {
        let text = r#"{"weights": {"a": ["0.25", "0.65"], "b": ["1/3", "2/3"]}}"#;
        let c = RunConfig::from_json(text).unwrap();
        let err = cmd_verify(&c).unwrap_err().to_string();
        assert!(err.contains("weights.a"), "{err}");
    }

    #[test]
    fn sample_pattern_trace() {
        let c = config(r#", "sample": {"pattern": [1], "depths": [10, 100, 1000]}"#);
        let text = c.echo().replace("\"1/3\",\"2/3\"", "\"1/4\",\"3/4\"");
        let c = RunConfig::from_json(&text).unwrap();
        let r = cmd_sample(&c, false).unwrap();
        for row in data_rows(&r.body) {
            let e: f64 = row[3].parse().unwrap();
            assert!((e - 0.4150375).abs() < 1e-7);
        }
        let empty = cmd_sample(&config(r#", "sample": {"count": 3}"#), false).unwrap();
        assert_eq!(empty.body.lines().count(), 2);
    }

    #[test]
    fn project_lists_intervals_and_points() {
        let c = config(r#", "project": {"depth": 3}"#);
        let r = cmd_project(&c).unwrap();
        let rows = data_rows(&r.body);
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[3][1], "011");
        assert_eq!(rows[3][2], "0.375");
        let nu: f64 = rows[3][5].parse().unwrap();
        assert!((nu - (1.0f64 / 9.0).ln()).abs() < 1e-15);
        let c = config(r#", "project": {"depth": 3, "points": [0.5], "radius": 0.125}"#);
        let rows = data_rows(&cmd_project(&c).unwrap().body);
        assert_eq!(rows[0][1], "011");
        let lo: f64 = rows[0][8].parse().unwrap();
        let hi: f64 = rows[0][9].parse().unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn verify_passes_and_skips_monte_carlo() {
        let c = config(r#", "verify": {"oracle_depth": 8, "identity_depth": 8, "ratio_depths": [9], "doubling_samples": 100, "isometry_depth": 10, "mc_samples": 0}"#);
        let r = cmd_verify(&c).unwrap();
        assert!(r.passed, "{}", r.body);
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["suites"][5]["status"], "skipped");
        assert_eq!(v["config"]["weights"]["a"][0], "1/4");
    }

    #[test]
    fn budget_overrun_is_a_resource_error() {
        let c = config(r#", "verify": {"oracle_depth": 40}"#);
        assert!(matches!(cmd_verify(&c), Err(Error::Resource { .. })));
    }
}
