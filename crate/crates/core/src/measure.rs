//! Inhomogeneous multinomial measures and their tilted companions.
//!
//! A [`DigitMeasure`] is a product measure on the mixed symbolic space: the
//! digit at position `j` is drawn from the `A1` weights or the `A2` weights
//! according to the epoch of `j`. The base measure uses the model weights
//! `a`, `b`; the tilted measures replace them with normalized powers
//! `a_i^q / sum a_k^q`. All masses are kept as natural logarithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::tilted_weights;
use crate::partition_spectrum::theta_prime_of;
use crate::symbolic_space::{Alphabet, EpochSchedule, Word};

/// Tolerance on `sum(weights) == 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;
/// Largest accepted `|q|` for tilting.
pub const MAX_ABS_Q: f64 = 1e4;
/// Stopping tolerance on `|theta'(q) + alpha|` when solving for a tilt.
pub const TILT_TOLERANCE: f64 = 1e-12;

/// Weight vectors `a` (for `A1`) and `b` (for `A2`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    a: Vec<f64>,
    b: Vec<f64>,
    log_a: Vec<f64>,
    log_b: Vec<f64>,
}

impl ModelParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        check_probability_vector("a", &a)?;
        check_probability_vector("b", &b)?;
        let log_a = a.iter().map(|x| x.ln()).collect();
        let log_b = b.iter().map(|x| x.ln()).collect();
        Ok(Self { a, b, log_a, log_b })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c1(&self) -> u32 {
        self.a.len() as u32
    }

    pub fn c2(&self) -> u32 {
        self.b.len() as u32
    }

    pub fn weights(&self, alphabet: Alphabet) -> &[f64] {
        match alphabet {
            Alphabet::A1 => &self.a,
            Alphabet::A2 => &self.b,
        }
    }

    pub fn log_weights(&self, alphabet: Alphabet) -> &[f64] {
        match alphabet {
            Alphabet::A1 => &self.log_a,
            Alphabet::A2 => &self.log_b,
        }
    }

    pub fn alphabet_size(&self, alphabet: Alphabet) -> u32 {
        self.weights(alphabet).len() as u32
    }

    /// Whether every weight of the alphabet is the same.
    pub fn is_uniform(&self, alphabet: Alphabet) -> bool {
        let w = self.weights(alphabet);
        w.iter().all(|&x| x == w[0])
    }
}

fn check_probability_vector(name: &str, w: &[f64]) -> Result<()> {
    if w.len() < 2 {
        return Err(Error::Config(format!(
            "weights.{name}: need at least 2 weights, got {}",
            w.len()
        )));
    }
    if let Some((i, x)) = w
        .iter()
        .enumerate()
        .find(|(_, &x)| !(x > 0.0 && x < 1.0))
    {
        return Err(Error::Config(format!(
            "weights.{name}[{i}] = {x} is not in the open interval (0, 1)"
        )));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::Config(format!(
            "weights.{name} sums to {sum}, expected 1 within {WEIGHT_SUM_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// Per-alphabet weights after tilting by `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TiltedWeights {
    pub q: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// `a_i^q / sum_k a_k^q` and likewise for `b`, in log space.
pub fn tilt_q(params: &ModelParams, q: f64) -> Result<TiltedWeights> {
    check_q(q)?;
    Ok(TiltedWeights {
        q,
        a: tilted_weights(params.log_weights(Alphabet::A1), q),
        b: tilted_weights(params.log_weights(Alphabet::A2), q),
    })
}

fn check_q(q: f64) -> Result<()> {
    if !q.is_finite() || q.abs() > MAX_ABS_Q {
        return Err(Error::Config(format!(
            "tilt exponent q = {q} must be finite with |q| <= {MAX_ABS_Q}"
        )));
    }
    Ok(())
}

/// Weights calibrated so that both alphabets have mean local exponent `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaTilt {
    pub alpha: f64,
    pub q_a: f64,
    pub q_b: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Solves `-theta_a'(q_a) = -theta_b'(q_b) = alpha` and tilts each alphabet
/// by its own exponent.
pub fn tilt_alpha(params: &ModelParams, alpha: f64) -> Result<AlphaTilt> {
    let q_a = solve_tilt_exponent(params, Alphabet::A1, alpha)?;
    let q_b = solve_tilt_exponent(params, Alphabet::A2, alpha)?;
    Ok(AlphaTilt {
        alpha,
        q_a,
        q_b,
        a: tilted_weights(params.log_weights(Alphabet::A1), q_a),
        b: tilted_weights(params.log_weights(Alphabet::A2), q_b),
    })
}

/// The `q` with `-theta'(q) = alpha` for one alphabet, by monotone bisection.
pub fn solve_tilt_exponent(params: &ModelParams, alphabet: Alphabet, alpha: f64) -> Result<f64> {
    let logs = params.log_weights(alphabet);
    let c = params.alphabet_size(alphabet);
    let ln_c = f64::from(c).ln();
    let name = match alphabet {
        Alphabet::A1 => "a",
        Alphabet::A2 => "b",
    };
    if params.is_uniform(alphabet) {
        let forced = -logs[0] / ln_c;
        return if (alpha - forced).abs() <= TILT_TOLERANCE {
            Ok(1.0)
        } else {
            Err(Error::Degenerate {
                alphabet: name,
                forced,
                value: alpha,
            })
        };
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let (lo_alpha, hi_alpha) = (-max / ln_c, -min / ln_c);
    if !(alpha > lo_alpha && alpha < hi_alpha) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
            lo: lo_alpha,
            hi: hi_alpha,
        });
    }
    // theta' is nondecreasing, so f(q) = theta'(q) + alpha is too.
    let f = |q: f64| theta_prime_of(logs, c, q) + alpha;
    let (mut lo, mut hi) = (-2.0f64, 2.0f64);
    while f(lo) > 0.0 {
        lo *= 2.0;
        if lo < -MAX_ABS_Q {
            return Err(out_of_reach(alpha, lo_alpha, hi_alpha));
        }
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > MAX_ABS_Q {
            return Err(out_of_reach(alpha, lo_alpha, hi_alpha));
        }
    }
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < best.0 {
            best = (fm.abs(), mid);
        }
        if fm.abs() <= TILT_TOLERANCE * 1e-3 || mid <= lo || mid >= hi {
            break;
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.1)
}

fn out_of_reach(alpha: f64, lo: f64, hi: f64) -> Error {
    Error::Domain {
        what: "alpha (tilt exponent beyond |q| <= 1e4)",
        value: alpha,
        lo,
        hi,
    }
}

/// Which weight system a [`DigitMeasure`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureKind {
    Base,
    TiltedQ { q: f64 },
    TiltedAlpha { alpha: f64, q_a: f64, q_b: f64 },
}

/// A product measure on the mixed symbolic space.
#[derive(Debug, Clone)]
pub struct DigitMeasure {
    schedule: EpochSchedule,
    kind: MeasureKind,
    weights: [Vec<f64>; 2],
    log_weights: [Vec<f64>; 2],
    cumulative: [Vec<f64>; 2],
}

impl DigitMeasure {
    /// The measure `mu` itself.
    pub fn base(params: &ModelParams, schedule: &EpochSchedule) -> Result<Self> {
        Self::from_weights(
            schedule,
            MeasureKind::Base,
            params.a().to_vec(),
            params.b().to_vec(),
        )
    }

    /// `mu_q`, with weights `a_i^q / sum a_k^q` in every epoch.
    pub fn tilted_q(params: &ModelParams, schedule: &EpochSchedule, q: f64) -> Result<Self> {
        let t = tilt_q(params, q)?;
        Self::from_weights(schedule, MeasureKind::TiltedQ { q }, t.a, t.b)
    }

    /// The measure driven by the alpha-calibrated weights.
    pub fn tilted_alpha(schedule: &EpochSchedule, tilt: &AlphaTilt) -> Result<Self> {
        Self::from_weights(
            schedule,
            MeasureKind::TiltedAlpha {
                alpha: tilt.alpha,
                q_a: tilt.q_a,
                q_b: tilt.q_b,
            },
            tilt.a.clone(),
            tilt.b.clone(),
        )
    }

    fn from_weights(
        schedule: &EpochSchedule,
        kind: MeasureKind,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> Result<Self> {
        if a.len() != schedule.c1() as usize || b.len() != schedule.c2() as usize {
            return Err(Error::Config(format!(
                "weights have {} and {} entries but the schedule alphabets have sizes {} and {}",
                a.len(),
                b.len(),
                schedule.c1(),
                schedule.c2()
            )));
        }
        let logs = |w: &[f64]| w.iter().map(|x| x.ln()).collect::<Vec<_>>();
        let cumulative = |w: &[f64]| {
            let mut acc = 0.0;
            let mut out: Vec<f64> = w
                .iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect();
            // the final bucket catches every u in [0, 1)
            *out.last_mut().unwrap() = f64::INFINITY;
            out
        };
        Ok(Self {
            schedule: schedule.clone(),
            kind,
            log_weights: [logs(&a), logs(&b)],
            cumulative: [cumulative(&a), cumulative(&b)],
            weights: [a, b],
        })
    }

    pub fn schedule(&self) -> &EpochSchedule {
        &self.schedule
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn weights(&self, alphabet: Alphabet) -> &[f64] {
        &self.weights[slot(alphabet)]
    }

    pub fn log_weights(&self, alphabet: Alphabet) -> &[f64] {
        &self.log_weights[slot(alphabet)]
    }

    /// `ln p_j` for digit `digit` at position `j`.
    pub fn log_weight(&self, j: usize, digit: u32) -> Result<f64> {
        let alphabet = self.schedule.alphabet_at(j)?;
        self.log_weights(alphabet)
            .get(digit as usize)
            .copied()
            .ok_or(Error::InvalidDigit {
                position: j,
                digit,
                size: self.schedule.alphabet_size(alphabet),
            })
    }

    /// `ln mu(w) = sum_j ln p_j`, streamed over epoch runs.
    pub fn log_mass(&self, w: &Word) -> Result<f64> {
        self.log_mass_digits(w.digits())
    }

    pub fn log_mass_digits(&self, digits: &[u32]) -> Result<f64> {
        let mut total = 0.0;
        for (alphabet, first, last) in self.schedule.runs(digits.len())? {
            let logs = self.log_weights(alphabet);
            for (offset, &d) in digits[first - 1..last].iter().enumerate() {
                total += *logs.get(d as usize).ok_or(Error::InvalidDigit {
                    position: first + offset,
                    digit: d,
                    size: logs.len() as u32,
                })?;
            }
        }
        Ok(total)
    }

    fn draw(&self, alphabet: Alphabet, rng: &mut ChaCha8Rng) -> u32 {
        let u: f64 = rng.gen();
        let cum = &self.cumulative[slot(alphabet)];
        cum.iter().position(|&c| u < c).unwrap() as u32
    }

    /// Streams `depth` independently drawn digits to `visit(position, alphabet, digit)`.
    ///
    /// The random stream is selected by `(seed, index)` alone, so sample `i`
    /// of a batch does not depend on how the batch is split across workers.
    pub fn sample_with(
        &self,
        depth: usize,
        seed: u64,
        index: u64,
        mut visit: impl FnMut(usize, Alphabet, u32),
    ) -> Result<()> {
        let mut rng = sample_rng(seed, index);
        for (alphabet, first, last) in self.schedule.runs(depth)? {
            for j in first..=last {
                let d = self.draw(alphabet, &mut rng);
                visit(j, alphabet, d);
            }
        }
        Ok(())
    }

    pub fn sample_indexed(&self, depth: usize, seed: u64, index: u64) -> Result<Word> {
        let mut digits = Vec::with_capacity(depth);
        self.sample_with(depth, seed, index, |_, _, d| digits.push(d))?;
        Ok(Word::new(digits))
    }

    pub fn sample(&self, depth: usize, seed: u64) -> Result<Word> {
        self.sample_indexed(depth, seed, 0)
    }
}

fn slot(alphabet: Alphabet) -> usize {
    match alphabet {
        Alphabet::A1 => 0,
        Alphabet::A2 => 1,
    }
}

/// RNG for sample `index` under master `seed`: one ChaCha8 key per seed,
/// one stream per sample index.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{log_add_exp, log_sum_exp};
    use crate::partition_spectrum::tau_n;

    fn running() -> ModelParams {
        ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap()
    }

    fn uniform() -> ModelParams {
        ModelParams::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(vec![0.5, 0.4], vec![0.5, 0.5]).is_err());
        assert!(ModelParams::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(ModelParams::new(vec![1.0], vec![0.5, 0.5]).is_err());
        let err = ModelParams::new(vec![0.45, 0.45], vec![0.5, 0.5]).unwrap_err();
        assert!(err.to_string().contains("weights.a"));
    }

    #[test]
    fn log_mass_examples() {
        let s = EpochSchedule::squares(2, 2);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        assert!((mu.log_mass(&w("011")).unwrap() - (1.0f64 / 9.0).ln()).abs() < 1e-15);
        assert!((mu.log_mass(&w("011")).unwrap() + 2.1972246).abs() < 1e-7);
        assert_eq!(mu.log_mass(&Word::empty()).unwrap(), 0.0);
        let u = DigitMeasure::base(&uniform(), &s).unwrap();
        assert!((u.log_mass(&w("01101")).unwrap() + 5.0 * 2f64.ln()).abs() < 1e-14);
        assert!(matches!(
            mu.log_mass(&w("021")),
            Err(Error::InvalidDigit { position: 2, .. })
        ));
    }

    #[test]
    fn tilt_q_examples() {
        let t = tilt_q(&running(), 2.0).unwrap();
        assert!((t.a[0] - 0.1).abs() < 1e-15 && (t.a[1] - 0.9).abs() < 1e-15);
        assert!((t.b[0] - 0.2).abs() < 1e-15 && (t.b[1] - 0.8).abs() < 1e-15);
        let one = tilt_q(&running(), 1.0).unwrap();
        for (x, y) in one.a.iter().zip(running().a()) {
            assert!((x - y).abs() < 1e-15);
        }
        let zero = tilt_q(&running(), 0.0).unwrap();
        assert_eq!(zero.a, vec![0.5, 0.5]);
        assert_eq!(zero.b, vec![0.5, 0.5]);
        assert!(tilt_q(&running(), 2e4).is_err());
        assert!(tilt_q(&running(), f64::NAN).is_err());
    }

    #[test]
    fn tilt_q_survives_extreme_exponents() {
        let t = tilt_q(&running(), -1e4).unwrap();
        assert!(t.a.iter().all(|x| x.is_finite()));
        assert!((t.a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(t.a[0] > 0.999);
    }

    #[test]
    fn tilt_is_invariant_under_common_rescaling() {
        let p = running();
        let q = 1.7;
        let shifted: Vec<f64> = p.log_weights(Alphabet::A1).iter().map(|l| l + 3.0 / q).collect();
        let direct = tilted_weights(p.log_weights(Alphabet::A1), q);
        let rescaled = tilted_weights(&shifted, q);
        for (x, y) in direct.iter().zip(&rescaled) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn tilt_alpha_recovers_q_two_for_b() {
        // -theta_b'(2) = log2(3) - 0.8 for b = (1/3, 2/3)
        let alpha = 3f64.log2() - 0.8;
        let t = tilt_alpha(&running(), alpha).unwrap();
        assert!((t.q_b - 2.0).abs() < 1e-9, "q_b = {}", t.q_b);
        assert!((t.b[0] - 0.2).abs() < 1e-10);
        assert!((t.b[1] - 0.8).abs() < 1e-10);
    }

    #[test]
    fn tilt_alpha_identity_at_entropy() {
        let p = ModelParams::new(vec![0.25, 0.75], vec![0.25, 0.75]).unwrap();
        let h = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let t = tilt_alpha(&p, h).unwrap();
        assert!((t.q_a - 1.0).abs() < 1e-9 && (t.q_b - 1.0).abs() < 1e-9);
        assert!((t.a[0] - 0.25).abs() < 1e-10);
    }

    #[test]
    fn tilt_alpha_errors() {
        let half = ModelParams::new(vec![0.5, 0.5], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!(matches!(
            tilt_alpha(&half, 0.9),
            Err(Error::Degenerate { alphabet: "a", .. })
        ));
        assert!(matches!(
            tilt_alpha(&running(), 0.5),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            tilt_alpha(&running(), 1.7),
            Err(Error::Domain { .. })
        ));
        // the forced value on the uniform side is accepted
        let t = tilt_alpha(&half, 1.0).unwrap();
        assert_eq!(t.q_a, 1.0);
    }

    #[test]
    fn compatibility_over_children() {
        let s = EpochSchedule::squares(2, 3);
        let p = ModelParams::new(vec![0.25, 0.75], vec![0.2, 0.5, 0.3]).unwrap();
        let mu = DigitMeasure::base(&p, &s).unwrap();
        for i in 0..1000u64 {
            let depth = (i % 30) as usize;
            let word = mu.sample_indexed(depth, 11, i).unwrap();
            let size = s.size_at(depth + 1).unwrap();
            let children: Vec<f64> = (0..size)
                .map(|d| {
                    let mut c = word.clone();
                    c.push(d);
                    mu.log_mass(&c).unwrap()
                })
                .collect();
            let parent = mu.log_mass(&word).unwrap();
            assert!((log_sum_exp(&children) - parent).abs() < 1e-10);
        }
    }

    #[test]
    fn tilted_mass_matches_power_identity() {
        let s = EpochSchedule::squares(2, 2);
        let p = running();
        let mu = DigitMeasure::base(&p, &s).unwrap();
        for q in [-2.0, -1.0, 0.5, 2.0] {
            let mu_q = DigitMeasure::tilted_q(&p, &s, q).unwrap();
            for n in 0..=12usize {
                let tau = if n == 0 { 0.0 } else { tau_n(&p, &s, n, q).unwrap() };
                let ld = s.log_diameter(n).unwrap();
                for idx in 0..(1u32 << n) {
                    let word = Word::new((0..n).map(|k| (idx >> k) & 1).collect());
                    let lhs = mu_q.log_mass(&word).unwrap();
                    let rhs = q * mu.log_mass(&word).unwrap() + tau * ld;
                    assert!((lhs - rhs).abs() < 1e-9, "q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_stream_separated() {
        let s = EpochSchedule::squares(2, 2);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        assert_eq!(mu.sample(200, 5).unwrap(), mu.sample(200, 5).unwrap());
        assert_ne!(
            mu.sample_indexed(200, 5, 0).unwrap(),
            mu.sample_indexed(200, 5, 1).unwrap()
        );
    }

    #[test]
    fn uniform_sample_frequency_is_close_to_half() {
        let s = EpochSchedule::squares(2, 2);
        let u = DigitMeasure::base(&uniform(), &s).unwrap();
        let word = u.sample(10_000, 99).unwrap();
        let zeros = word.digits().iter().filter(|&&d| d == 0).count();
        assert!((zeros as f64 / 1e4 - 0.5).abs() < 0.02);
    }

    #[test]
    fn sample_frequency_in_a1_epochs_matches_weight() {
        let s = EpochSchedule::squares(2, 2);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        let (mut hits, mut total) = (0usize, 0usize);
        mu.sample_with(20_000, 3, 0, |_, alphabet, d| {
            if alphabet == Alphabet::A1 {
                total += 1;
                hits += (d == 0) as usize;
            }
        })
        .unwrap();
        assert!(total > 10_000);
        assert!((hits as f64 / total as f64 - 0.25).abs() < 0.02);
    }

    #[test]
    fn measure_rejects_mismatched_alphabets() {
        let s = EpochSchedule::squares(3, 2);
        assert!(DigitMeasure::base(&running(), &s).is_err());
    }

    #[test]
    fn log_add_exp_of_two_children_is_parent() {
        let s = EpochSchedule::squares(2, 2);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        let kids = log_add_exp(mu.log_mass(&w("0110")).unwrap(), mu.log_mass(&w("0111")).unwrap());
        assert!((kids - mu.log_mass(&w("011")).unwrap()).abs() < 1e-15);
    }
}
