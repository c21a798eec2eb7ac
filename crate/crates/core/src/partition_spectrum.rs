//! Scaling functions and their Legendre transforms.
//!
//! `theta_a(q) = log_{c1} sum a_i^q` and `theta_b(q) = log_{c2} sum b_j^q` are
//! the two building blocks. The finite-depth exponent `tau_n` is a weighted
//! mediant of them, its upper and lower limits are their pointwise max and
//! min, and the dimension spectra are Legendre transforms of these.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{tilt_alpha, AlphaTilt, DigitMeasure, ModelParams};
use crate::numeric::{entropy_nats, log_sum_exp};
use crate::symbolic_space::{Alphabet, EpochSchedule};

/// Default largest number of cylinders an exhaustive enumeration may visit.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;
/// Default half-width of the `q` window used for Legendre transforms.
pub const LEGENDRE_Q_BOUND: f64 = 64.0;
/// Tolerance of the packing-side condition `max(theta_a*, theta_b*) = B*`.
pub const PACKING_CONDITION_TOLERANCE: f64 = 1e-8;

/// `log_c sum exp(q * logs)`.
pub fn theta_of(logs: &[f64], c: u32, q: f64) -> f64 {
    let terms: Vec<f64> = logs.iter().map(|&l| q * l).collect();
    log_sum_exp(&terms) / f64::from(c).ln()
}

/// `d/dq log_c sum exp(q * logs)`: the tilted mean of `logs`, over `ln c`.
pub fn theta_prime_of(logs: &[f64], c: u32, q: f64) -> f64 {
    let terms: Vec<f64> = logs.iter().map(|&l| q * l).collect();
    let norm = log_sum_exp(&terms);
    let mean: f64 = terms
        .iter()
        .zip(logs)
        .map(|(&t, &l)| (t - norm).exp() * l)
        .sum();
    mean / f64::from(c).ln()
}

pub fn theta(params: &ModelParams, which: Alphabet, q: f64) -> f64 {
    theta_of(params.log_weights(which), params.alphabet_size(which), q)
}

pub fn theta_prime(params: &ModelParams, which: Alphabet, q: f64) -> f64 {
    theta_prime_of(params.log_weights(which), params.alphabet_size(which), q)
}

/// Closed-form `tau_{mu,n}(q)` from the `A1` count `N_n`.
pub fn tau_n(params: &ModelParams, schedule: &EpochSchedule, n: usize, q: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Range {
            position: 0,
            max_depth: schedule.max_depth(),
        });
    }
    check_alphabets(params, schedule)?;
    let na = schedule.count_a(n)? as f64;
    let nb = n as f64 - na;
    let lse = |which: Alphabet| {
        let terms: Vec<f64> = params.log_weights(which).iter().map(|&l| q * l).collect();
        log_sum_exp(&terms)
    };
    let num = na * lse(Alphabet::A1) + nb * lse(Alphabet::A2);
    let den = na * f64::from(params.c1()).ln() + nb * f64::from(params.c2()).ln();
    Ok(num / den)
}

fn check_alphabets(params: &ModelParams, schedule: &EpochSchedule) -> Result<()> {
    if params.c1() != schedule.c1() || params.c2() != schedule.c2() {
        return Err(Error::Config(format!(
            "weights describe alphabets of sizes ({}, {}) but the schedule uses ({}, {})",
            params.c1(),
            params.c2(),
            schedule.c1(),
            schedule.c2()
        )));
    }
    Ok(())
}

/// Fails with [`Error::Resource`] when depth `n` has more than `budget` cylinders.
pub fn check_budget(schedule: &EpochSchedule, n: usize, budget: u64) -> Result<()> {
    let count = schedule.cylinder_count(n)?;
    if count.round() > budget as f64 {
        return Err(Error::Resource {
            required: count.round(),
            budget,
        });
    }
    Ok(())
}

/// `ln sum_{|z| = n} mu(z)^q` by visiting every depth-`n` cylinder.
pub fn partition_sum_bruteforce(measure: &DigitMeasure, n: usize, q: f64) -> Result<f64> {
    Ok(partition_sums_bruteforce(measure, n, &[q])?[0])
}

/// [`partition_sum_bruteforce`] for several exponents in one enumeration.
///
/// Subtrees below a fixed split depth are summed in parallel and merged in
/// index order, so the result does not depend on the worker count.
pub fn partition_sums_bruteforce(measure: &DigitMeasure, n: usize, qs: &[f64]) -> Result<Vec<f64>> {
    let schedule = measure.schedule();
    check_budget(schedule, n, ENUMERATION_BUDGET)?;
    let logs: Vec<&[f64]> = (1..=n)
        .map(|j| schedule.alphabet_at(j).map(|a| measure.log_weights(a)))
        .collect::<Result<_>>()?;
    let mut split = 0;
    let mut chunks = 1usize;
    while split < n && chunks < PARALLEL_CHUNKS {
        chunks *= logs[split].len();
        split += 1;
    }
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rest = chunk;
            let mut prefix = 0.0;
            for k in (0..split).rev() {
                prefix += logs[k][rest % logs[k].len()];
                rest /= logs[k].len();
            }
            subtree_sums(&logs[split..], prefix, qs)
        })
        .collect();
    Ok((0..qs.len())
        .map(|i| log_sum_exp(&parts.iter().map(|p| p[i]).collect::<Vec<_>>()))
        .collect())
}

const PARALLEL_CHUNKS: usize = 256;

/// `ln sum_z exp(q * (root + ln mu(z)))` over all digit strings `z` drawn
/// from `logs`, for each `q`.
fn subtree_sums(logs: &[&[f64]], root: f64, qs: &[f64]) -> Vec<f64> {
    let n = logs.len();
    let m = qs.len();
    // per position and exponent, weights^q rescaled so the largest is 1;
    // each leaf is then a running product with no exp
    let mut shift: Vec<f64> = qs.iter().map(|q| q * root).collect();
    let mut scaled: Vec<Vec<f64>> = Vec::with_capacity(n);
    for l in logs {
        let mut table = vec![0.0; l.len() * m];
        for (i, &q) in qs.iter().enumerate() {
            let top = l.iter().map(|&x| q * x).fold(f64::NEG_INFINITY, f64::max);
            shift[i] += top;
            for (d, &x) in l.iter().enumerate() {
                table[d * m + i] = (q * x - top).exp();
            }
        }
        scaled.push(table);
    }
    let mut digits = vec![0usize; n];
    let mut prod = vec![1.0f64; (n + 1) * m];
    for k in 0..n {
        for i in 0..m {
            prod[(k + 1) * m + i] = prod[k * m + i] * scaled[k][i];
        }
    }
    let mut sum = vec![0.0f64; m];
    let mut carry = vec![0.0f64; m];
    loop {
        for i in 0..m {
            // Kahan summation
            let y = prod[n * m + i] - carry[i];
            let t = sum[i] + y;
            carry[i] = (t - sum[i]) - y;
            sum[i] = t;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return shift.iter().zip(&sum).map(|(s, t)| s + t.ln()).collect();
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < logs[k].len() {
                break;
            }
            digits[k] = 0;
        }
        for j in k..n {
            let d = digits[j];
            for i in 0..m {
                prod[(j + 1) * m + i] = prod[j * m + i] * scaled[j][d * m + i];
            }
        }
    }
}

/// `(tau_upper(q), tau_lower(q)) = (max, min)(theta_a(q), theta_b(q))`.
pub fn tau_limits(params: &ModelParams, q: f64) -> (f64, f64) {
    let ta = theta(params, Alphabet::A1, q);
    let tb = theta(params, Alphabet::A2, q);
    (ta.max(tb), ta.min(tb))
}

/// `tau_n` on a grid together with its limiting envelopes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauCurve {
    pub depth: usize,
    pub qs: Vec<f64>,
    pub theta_a: Vec<f64>,
    pub theta_b: Vec<f64>,
    pub tau_n: Vec<f64>,
    pub tau_upper: Vec<f64>,
    pub tau_lower: Vec<f64>,
}

impl TauCurve {
    pub fn new(params: &ModelParams, schedule: &EpochSchedule, depth: usize, qs: &[f64]) -> Result<Self> {
        let mut curve = TauCurve {
            depth,
            qs: qs.to_vec(),
            theta_a: Vec::with_capacity(qs.len()),
            theta_b: Vec::with_capacity(qs.len()),
            tau_n: Vec::with_capacity(qs.len()),
            tau_upper: Vec::with_capacity(qs.len()),
            tau_lower: Vec::with_capacity(qs.len()),
        };
        for &q in qs {
            let (upper, lower) = tau_limits(params, q);
            curve.theta_a.push(theta(params, Alphabet::A1, q));
            curve.theta_b.push(theta(params, Alphabet::A2, q));
            curve.tau_n.push(tau_n(params, schedule, depth, q)?);
            curve.tau_upper.push(upper);
            curve.tau_lower.push(lower);
        }
        Ok(curve)
    }
}

/// Whether `B = max(theta_a, theta_b)` is differentiable at `q`: either a
/// single branch is active or the branches cross with equal slopes.
pub fn upper_differentiable(params: &ModelParams, q: f64) -> bool {
    let gap = theta(params, Alphabet::A1, q) - theta(params, Alphabet::A2, q);
    gap.abs() > 1e-9
        || (theta_prime(params, Alphabet::A1, q) - theta_prime(params, Alphabet::A2, q)).abs() <= 1e-9
}

/// `B'(q)`, or `None` at a kink.
pub fn upper_derivative(params: &ModelParams, q: f64) -> Option<f64> {
    if !upper_differentiable(params, q) {
        return None;
    }
    let ta = theta(params, Alphabet::A1, q);
    let tb = theta(params, Alphabet::A2, q);
    Some(if ta >= tb {
        theta_prime(params, Alphabet::A1, q)
    } else {
        theta_prime(params, Alphabet::A2, q)
    })
}

/// The functions whose Legendre transform the toolkit evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumFunction {
    ThetaA,
    ThetaB,
    TauUpper,
    TauLower,
}

/// `f*(alpha) = inf_q (alpha q + f(q))` over `|q| <= 64`; `-inf` when the
/// infimum over the real line diverges.
pub fn legendre(params: &ModelParams, f: SpectrumFunction, alpha: f64) -> f64 {
    legendre_bounded(params, f, alpha, LEGENDRE_Q_BOUND)
}

pub fn legendre_bounded(params: &ModelParams, f: SpectrumFunction, alpha: f64, q_bound: f64) -> f64 {
    match f {
        SpectrumFunction::ThetaA => theta_conjugate(params, Alphabet::A1, alpha, q_bound),
        SpectrumFunction::ThetaB => theta_conjugate(params, Alphabet::A2, alpha, q_bound),
        SpectrumFunction::TauUpper => {
            let (sa_minus, sa_plus) = slope_limits(params, Alphabet::A1);
            let (sb_minus, sb_plus) = slope_limits(params, Alphabet::A2);
            let value = |q: f64| tau_limits(params, q).0;
            let right_derivative = |q: f64| {
                let ta = theta(params, Alphabet::A1, q);
                let tb = theta(params, Alphabet::A2, q);
                let da = theta_prime(params, Alphabet::A1, q);
                let db = theta_prime(params, Alphabet::A2, q);
                if ta > tb {
                    da
                } else if tb > ta {
                    db
                } else {
                    da.max(db)
                }
            };
            convex_conjugate(
                value,
                right_derivative,
                sa_minus.min(sb_minus),
                sa_plus.max(sb_plus),
                alpha,
                q_bound,
            )
        }
        // tau_lower need not be convex; the infimum of a pointwise minimum is
        // the minimum of the two infima.
        SpectrumFunction::TauLower => theta_conjugate(params, Alphabet::A1, alpha, q_bound)
            .min(theta_conjugate(params, Alphabet::A2, alpha, q_bound)),
    }
}

/// Asymptotic slopes `(lim_{q -> -inf}, lim_{q -> +inf})` of `theta`.
fn slope_limits(params: &ModelParams, which: Alphabet) -> (f64, f64) {
    let logs = params.log_weights(which);
    let ln_c = f64::from(params.alphabet_size(which)).ln();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = logs.iter().copied().fold(f64::INFINITY, f64::min);
    (min / ln_c, max / ln_c)
}

fn theta_conjugate(params: &ModelParams, which: Alphabet, alpha: f64, q_bound: f64) -> f64 {
    let (s_minus, s_plus) = slope_limits(params, which);
    convex_conjugate(
        |q| theta(params, which, q),
        |q| theta_prime(params, which, q),
        s_minus,
        s_plus,
        alpha,
        q_bound,
    )
}

/// Infimum of `alpha q + f(q)` for convex `f` with the given right derivative
/// and asymptotic slopes, by bisection on the sign of the derivative.
fn convex_conjugate(
    value: impl Fn(f64) -> f64,
    right_derivative: impl Fn(f64) -> f64,
    slope_minus: f64,
    slope_plus: f64,
    alpha: f64,
    q_bound: f64,
) -> f64 {
    const EDGE: f64 = 1e-12;
    if alpha + slope_plus < -EDGE || alpha + slope_minus > EDGE {
        return f64::NEG_INFINITY;
    }
    let g = |q: f64| alpha * q + value(q);
    if slope_plus - slope_minus <= EDGE {
        // affine: constant objective on the only admissible alpha
        return g(0.0);
    }
    let (mut lo, mut hi) = (-q_bound, q_bound);
    if alpha + right_derivative(lo) >= 0.0 {
        return g(lo);
    }
    if alpha + right_derivative(hi) < 0.0 {
        return g(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alpha + right_derivative(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    g(lo).min(g(hi))
}

/// `-sum w_i ln w_i / ln base`.
pub fn entropy_tilted(weights: &[f64], base: u32) -> f64 {
    entropy_nats(weights) / f64::from(base).ln()
}

/// Open interval of exponents reachable by both alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumDomain {
    pub lo: f64,
    pub hi: f64,
}

impl SpectrumDomain {
    pub fn is_empty(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan() || self.lo >= self.hi
    }

    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lo && alpha < self.hi
    }

    /// `count` evenly spaced interior points.
    pub fn interior_grid(&self, count: usize) -> Vec<f64> {
        (1..=count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (count + 1) as f64)
            .collect()
    }
}

/// Intersection of the ranges of `-theta_a'` and `-theta_b'`.
pub fn spectrum_domain(params: &ModelParams) -> SpectrumDomain {
    let (a_minus, a_plus) = slope_limits(params, Alphabet::A1);
    let (b_minus, b_plus) = slope_limits(params, Alphabet::A2);
    SpectrumDomain {
        lo: (-a_plus).max(-b_plus),
        hi: (-a_minus).min(-b_minus),
    }
}

/// Dimension data at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    pub q_a: f64,
    pub q_b: f64,
    /// Entropy of the tilted `a` weights, equal to `theta_a*(alpha)`.
    pub h_a: f64,
    pub h_b: f64,
    /// `min(h_a, h_b) = b*(alpha)`: Hausdorff dimension of the level set.
    pub hausdorff_dim: f64,
    /// `max(h_a, h_b)`: packing dimension when `packing_valid` holds.
    pub packing_dim: f64,
    /// `B*(alpha)`, the Legendre transform of the upper envelope.
    pub upper_legendre: f64,
    pub hausdorff_valid: bool,
    /// Whether `max(theta_a*, theta_b*) = B*` at this exponent.
    pub packing_valid: bool,
}

pub fn spectrum_point(params: &ModelParams, alpha: f64) -> Result<SpectrumPoint> {
    let tilt = tilt_alpha(params, alpha)?;
    let h_a = entropy_tilted(&tilt.a, params.c1());
    let h_b = entropy_tilted(&tilt.b, params.c2());
    let packing_dim = h_a.max(h_b);
    let upper_legendre = legendre(params, SpectrumFunction::TauUpper, alpha);
    Ok(SpectrumPoint {
        alpha,
        q_a: tilt.q_a,
        q_b: tilt.q_b,
        h_a,
        h_b,
        hausdorff_dim: h_a.min(h_b),
        packing_dim,
        upper_legendre,
        hausdorff_valid: true,
        packing_valid: (packing_dim - upper_legendre).abs() <= PACKING_CONDITION_TOLERANCE,
    })
}

/// `max(log_{c1} sum a_i^t a~_i, log_{c2} sum b_j^t b~_j)` for the tilt at `alpha`.
///
/// Each sum is evaluated as `LSE((t + q) ln w) - LSE(q ln w)`, so `phi(0)`
/// is exactly zero.
pub fn phi(params: &ModelParams, tilt: &AlphaTilt, t: f64) -> f64 {
    let side = |which: Alphabet, q: f64| {
        let logs = params.log_weights(which);
        let shifted: Vec<f64> = logs.iter().map(|&l| (t + q) * l).collect();
        let base: Vec<f64> = logs.iter().map(|&l| q * l).collect();
        (log_sum_exp(&shifted) - log_sum_exp(&base)) / f64::from(params.alphabet_size(which)).ln()
    };
    side(Alphabet::A1, tilt.q_a).max(side(Alphabet::A2, tilt.q_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::tilt_q;

    fn running() -> ModelParams {
        ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0]).unwrap()
    }

    fn homogeneous() -> ModelParams {
        ModelParams::new(vec![0.25, 0.75], vec![0.25, 0.75]).unwrap()
    }

    fn uniform() -> ModelParams {
        ModelParams::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap()
    }

    // -theta_b'(2) for b = (1/3, 2/3): (5 ln 3 - 4 ln 2) / (5 ln 2)
    fn alpha_q2() -> f64 {
        3f64.log2() - 0.8
    }

    #[test]
    fn theta_examples() {
        let p = running();
        assert!((theta(&p, Alphabet::A1, 2.0) - 0.625f64.log2()).abs() < 1e-15);
        assert!((theta(&p, Alphabet::A1, 2.0) + 0.6780719).abs() < 1e-7);
        assert!(theta(&p, Alphabet::A1, 1.0).abs() < 1e-15);
        assert!((theta(&p, Alphabet::A1, 0.0) - 1.0).abs() < 1e-15);
        assert!((theta(&p, Alphabet::A2, 2.0) + 0.8479969).abs() < 1e-7);
    }

    #[test]
    fn theta_prime_examples() {
        let p = running();
        assert!((theta_prime(&p, Alphabet::A2, 2.0) + alpha_q2()).abs() < 1e-14);
        assert!((theta_prime(&uniform(), Alphabet::A1, 3.7) + 1.0).abs() < 1e-15);
        assert!((theta_prime(&p, Alphabet::A1, 0.0) + 1.2075187).abs() < 1e-7);
    }

    #[test]
    fn theta_prime_matches_finite_differences() {
        let p = running();
        let h = 1e-5;
        for i in -20..=20 {
            let q = i as f64 * 0.25;
            for which in [Alphabet::A1, Alphabet::A2] {
                let fd = (theta(&p, which, q + h) - theta(&p, which, q - h)) / (2.0 * h);
                assert!((fd - theta_prime(&p, which, q)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn tau_n_examples() {
        let s = EpochSchedule::squares(2, 2);
        let p = running();
        let expected = (0.625f64.log2() + 2.0 * (5.0f64 / 9.0).log2()) / 3.0;
        assert!((tau_n(&p, &s, 3, 2.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected + 0.7913553).abs() < 1e-7);
        assert!(tau_n(&p, &s, 40, 1.0).unwrap().abs() < 1e-15);
        let h = homogeneous();
        for n in [1, 7, 300] {
            let t = tau_n(&h, &s, n, -1.3).unwrap();
            assert!((t - theta(&h, Alphabet::A1, -1.3)).abs() < 1e-13);
        }
        assert!(tau_n(&p, &s, 0, 2.0).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let s = EpochSchedule::squares(2, 2);
        let u = DigitMeasure::base(&uniform(), &s).unwrap();
        let v = partition_sum_bruteforce(&u, 5, 2.0).unwrap();
        assert!((v + 5.0 * 2f64.ln()).abs() < 1e-13);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        let v = partition_sum_bruteforce(&mu, 3, 2.0).unwrap();
        assert!((v - (0.625f64 * (5.0f64 / 9.0).powi(2)).ln()).abs() < 1e-14);
        assert!((v - 0.1929012f64.ln()).abs() < 1e-6);
        assert!(partition_sum_bruteforce(&mu, 9, 1.0).unwrap().abs() < 1e-13);
    }

    #[test]
    fn bruteforce_rejects_over_budget() {
        let s = EpochSchedule::squares(2, 2);
        let mu = DigitMeasure::base(&running(), &s).unwrap();
        assert!(matches!(
            partition_sum_bruteforce(&mu, 25, 2.0),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn tau_limits_examples() {
        let (u, l) = tau_limits(&running(), 2.0);
        assert!((u + 0.6780719).abs() < 1e-7 && (l + 0.8479969).abs() < 1e-7);
        let (u, l) = tau_limits(&running(), 1.0);
        assert!(u.abs() < 1e-15 && l.abs() < 1e-15);
        let h = homogeneous();
        let (u, l) = tau_limits(&h, 0.3);
        assert_eq!(u, l);
    }

    #[test]
    fn legendre_examples() {
        let p = running();
        let alpha0 = -theta_prime(&p, Alphabet::A1, 0.0);
        assert!((legendre(&p, SpectrumFunction::ThetaA, alpha0) - 1.0).abs() < 1e-10);
        let hb = legendre(&p, SpectrumFunction::ThetaB, alpha_q2());
        assert!((hb - 0.7219281).abs() < 1e-7);
        let u = uniform();
        assert!((legendre(&u, SpectrumFunction::ThetaA, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(legendre(&u, SpectrumFunction::ThetaA, 1.1), f64::NEG_INFINITY);
        assert_eq!(legendre(&p, SpectrumFunction::ThetaA, 0.3), f64::NEG_INFINITY);
        assert_eq!(legendre(&p, SpectrumFunction::ThetaA, 2.5), f64::NEG_INFINITY);
    }

    #[test]
    fn legendre_at_closed_endpoint_is_finite() {
        // infimum not attained but finite: log_c(#maximal weights) = 0
        let p = running();
        let v = legendre(&p, SpectrumFunction::ThetaA, -(0.75f64).log2());
        assert!(v.is_finite() && v.abs() < 1e-6);
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy_tilted(&[0.2, 0.8], 2) - 0.7219281).abs() < 1e-7);
        assert!((entropy_tilted(&[0.5, 0.5], 2) - 1.0).abs() < 1e-15);
        assert!((entropy_tilted(&[0.1, 0.9], 2) - 0.4689956).abs() < 1e-7);
    }

    #[test]
    fn entropy_identity_on_grid() {
        let p = running();
        for i in 0..=40 {
            let q = -5.0 + 0.25 * i as f64;
            let t = tilt_q(&p, q).unwrap();
            for (which, w) in [(Alphabet::A1, &t.a), (Alphabet::A2, &t.b)] {
                let lhs = entropy_tilted(w, 2);
                let rhs = theta(&p, which, q) - q * theta_prime(&p, which, q);
                assert!((lhs - rhs).abs() < 1e-10, "q={q}");
            }
        }
    }

    #[test]
    fn domain_examples() {
        let d = spectrum_domain(&running());
        assert!((d.lo - 0.5849625).abs() < 1e-7 && (d.hi - 1.5849625).abs() < 1e-7);
        let h = spectrum_domain(&homogeneous());
        assert!((h.lo + 0.75f64.log2()).abs() < 1e-15 && (h.hi - 2.0).abs() < 1e-15);
        assert!(spectrum_domain(&uniform()).is_empty());
        assert!(!d.contains(d.lo) && d.contains(1.0));
    }

    #[test]
    fn mixed_alphabet_domain_brackets_one() {
        // max w >= 1/c >= min w, so both exponent ranges straddle 1
        let p = ModelParams::new(vec![0.5, 0.3, 0.2], vec![0.02, 0.98]).unwrap();
        let d = spectrum_domain(&p);
        assert!(d.contains(1.0));
        assert!((d.lo + 0.5f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert!((d.hi + 0.2f64.ln() / 3f64.ln()).abs() < 1e-15);
        let one_uniform = ModelParams::new(vec![0.5, 0.5], vec![0.1, 0.9]).unwrap();
        assert!(spectrum_domain(&one_uniform).is_empty());
    }

    #[test]
    fn spectrum_point_homogeneous() {
        let h = homogeneous();
        let alpha = entropy_tilted(&[0.25, 0.75], 2);
        assert!((alpha - 0.8112781).abs() < 1e-7);
        let sp = spectrum_point(&h, alpha).unwrap();
        assert!((sp.q_a - 1.0).abs() < 1e-9 && (sp.q_b - 1.0).abs() < 1e-9);
        assert!((sp.hausdorff_dim - alpha).abs() < 1e-9);
        assert!((sp.packing_dim - alpha).abs() < 1e-9);
        assert!(sp.packing_valid);
    }

    #[test]
    fn spectrum_point_running_parameters() {
        let p = running();
        let sp = spectrum_point(&p, alpha_q2()).unwrap();
        assert!((sp.q_b - 2.0).abs() < 1e-8);
        assert!((sp.h_b - 0.7219281).abs() < 1e-7);
        assert!((sp.h_a - legendre(&p, SpectrumFunction::ThetaA, alpha_q2())).abs() < 1e-9);
        assert_eq!(sp.hausdorff_dim, sp.h_a.min(sp.h_b));
        let d = spectrum_domain(&p);
        assert!(spectrum_point(&p, d.lo).is_err());
        assert!(spectrum_point(&p, d.hi).is_err());
    }

    #[test]
    fn phi_examples() {
        let p = running();
        let tilt = tilt_alpha(&p, 0.9).unwrap();
        assert_eq!(phi(&p, &tilt, 0.0), 0.0);
        let h = 1e-5;
        let fd = (phi(&p, &tilt, h) - phi(&p, &tilt, -h)) / (2.0 * h);
        assert!((fd + 0.9).abs() < 1e-6, "fd = {fd}");
        let hom = homogeneous();
        let alpha = entropy_tilted(&[0.25, 0.75], 2);
        let tilt = tilt_alpha(&hom, alpha).unwrap();
        assert!((phi(&hom, &tilt, 1.0) - 0.625f64.log2()).abs() < 1e-8);
    }

    #[test]
    fn upper_envelope_conjugate_dominates_components() {
        let p = running();
        let d = spectrum_domain(&p);
        for alpha in d.interior_grid(50) {
            let up = legendre(&p, SpectrumFunction::TauUpper, alpha);
            let a = legendre(&p, SpectrumFunction::ThetaA, alpha);
            let b = legendre(&p, SpectrumFunction::ThetaB, alpha);
            assert!(up >= a.max(b) - 1e-8, "alpha={alpha}");
        }
    }

    #[test]
    fn packing_condition_holds_where_upper_envelope_is_smooth() {
        let p = running();
        let d = spectrum_domain(&p);
        for i in -40..=40 {
            let q = i as f64 * 0.1 + 0.05;
            if let Some(db) = upper_derivative(&p, q) {
                let alpha = -db;
                if d.contains(alpha) {
                    let sp = spectrum_point(&p, alpha).unwrap();
                    assert!(sp.packing_valid, "q={q} alpha={alpha}");
                }
            }
        }
    }

    #[test]
    fn crossings_are_kinks() {
        let p = running();
        // theta_a and theta_b cross at q = 0 and q = 1 with different slopes
        assert!(!upper_differentiable(&p, 0.0));
        assert!(!upper_differentiable(&p, 1.0));
        assert!(upper_differentiable(&p, 0.5));
        assert!(upper_differentiable(&homogeneous(), 1.0));
    }

    #[test]
    fn tau_curve_envelopes() {
        let s = EpochSchedule::squares(2, 2);
        let qs: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.5).collect();
        let c = TauCurve::new(&running(), &s, 100, &qs).unwrap();
        for i in 0..qs.len() {
            assert!(c.tau_lower[i] <= c.tau_n[i] + 1e-15);
            assert!(c.tau_n[i] <= c.tau_upper[i] + 1e-15);
        }
    }
}
