//! Projection of the symbolic space onto `[0, 1]`.
//!
//! A depth-`n` word is read as a mixed-radix integer `iota(w)`, and its
//! cylinder maps to the basic interval
//! `[iota(w) |w|, (iota(w) + 1) |w|]` where `|w|` is the cylinder diameter.
//! Navigation between neighboring intervals is done digit-wise with carries,
//! so depths far beyond machine integers are supported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DigitMeasure;
use crate::numeric::log_sum_exp;
use crate::partition_spectrum::check_budget;
use crate::symbolic_space::{Alphabet, EpochSchedule, Word};

/// Float inputs resolve at most this many binary digits.
pub const FLOAT_BITS: f64 = 52.0;

/// `sum_j d_j |w|_j` over the digits, where `|w|_j` is the depth-`j` diameter.
pub fn gamma_point(schedule: &EpochSchedule, digits: &[u32]) -> Result<f64> {
    let mut scale = 1.0f64;
    let mut x = 0.0f64;
    for (alphabet, first, last) in schedule.runs(digits.len())? {
        let c = f64::from(schedule.alphabet_size(alphabet));
        for &d in &digits[first - 1..last] {
            scale /= c;
            x += f64::from(d) * scale;
        }
    }
    Ok(x)
}

/// `c1^-N_n c2^-(n - N_n)` as a float, exact when both sizes are powers of two.
pub fn diameter(schedule: &EpochSchedule, n: usize) -> Result<f64> {
    let na = schedule.count_a(n)?;
    let pow = |c: u32, k: usize| f64::from(c).powi(-i32::try_from(k).unwrap_or(i32::MAX));
    Ok(pow(schedule.c1(), na) * pow(schedule.c2(), n - na))
}

/// The image under the projection of the cylinder of `word`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicInterval {
    word: Word,
}

impl BasicInterval {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn depth(&self) -> usize {
        self.word.depth()
    }

    pub fn left(&self, schedule: &EpochSchedule) -> Result<f64> {
        gamma_point(schedule, self.word.digits())
    }

    pub fn right(&self, schedule: &EpochSchedule) -> Result<f64> {
        Ok(self.left(schedule)? + diameter(schedule, self.depth())?)
    }

    pub fn log_length(&self, schedule: &EpochSchedule) -> Result<f64> {
        schedule.log_diameter(self.depth())
    }

    /// `iota(w)`, or `None` if it does not fit in 128 bits.
    pub fn index(&self, schedule: &EpochSchedule) -> Result<Option<u128>> {
        let mut idx: u128 = 0;
        for (j, &d) in self.word.digits().iter().enumerate() {
            let c = u128::from(schedule.size_at(j + 1)?);
            match idx.checked_mul(c).and_then(|v| v.checked_add(u128::from(d))) {
                Some(v) => idx = v,
                None => return Ok(None),
            }
        }
        Ok(Some(idx))
    }
}

pub fn interval_of_word(schedule: &EpochSchedule, w: &Word) -> Result<BasicInterval> {
    schedule.validate_word(w)?;
    Ok(BasicInterval { word: w.clone() })
}

/// The depth-`n` word whose interval has mixed-radix index `index`.
pub fn word_of_index(schedule: &EpochSchedule, n: usize, index: u128) -> Result<Word> {
    let mut digits = vec![0u32; n];
    let mut rest = index;
    for j in (1..=n).rev() {
        let c = u128::from(schedule.size_at(j)?);
        digits[j - 1] = (rest % c) as u32;
        rest /= c;
    }
    if rest != 0 {
        return Err(Error::Config(format!(
            "index {index} exceeds the number of depth-{n} intervals"
        )));
    }
    Ok(Word::new(digits))
}

fn check_float_resolution(schedule: &EpochSchedule, n: usize) -> Result<()> {
    let bits = -schedule.log_diameter(n)? / std::f64::consts::LN_2;
    if bits > FLOAT_BITS + 1e-9 {
        return Err(Error::Precision { depth: n, bits });
    }
    Ok(())
}

/// The depth-`n` basic interval containing `x`; at an interior endpoint the
/// left interval is chosen, and `x = 0` gives the first interval.
pub fn interval_containing(schedule: &EpochSchedule, x: f64, n: usize) -> Result<BasicInterval> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Config(format!("x = {x} is not in [0, 1]")));
    }
    check_float_resolution(schedule, n)?;
    // t is the relative position of x in (left, right] of the current interval
    let mut t = x;
    let mut digits = Vec::with_capacity(n);
    for j in 1..=n {
        let c = schedule.size_at(j)?;
        let scaled = t * f64::from(c);
        let d = (scaled.ceil() - 1.0).clamp(0.0, f64::from(c - 1));
        t = scaled - d;
        digits.push(d as u32);
    }
    Ok(BasicInterval {
        word: Word::new(digits),
    })
}

/// Left (`Minus`) or right (`Plus`) neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborSide {
    Minus,
    Plus,
}

impl NeighborSide {
    fn name(self) -> &'static str {
        match self {
            NeighborSide::Minus => "left",
            NeighborSide::Plus => "right",
        }
    }
}

/// Same-depth neighbor by digit-wise increment or decrement with carry.
pub fn neighbor(schedule: &EpochSchedule, interval: &BasicInterval, side: NeighborSide) -> Result<Option<BasicInterval>> {
    let mut digits = interval.word.digits().to_vec();
    for j in (1..=digits.len()).rev() {
        let c = schedule.size_at(j)?;
        let d = &mut digits[j - 1];
        match side {
            NeighborSide::Plus if *d + 1 < c => {
                *d += 1;
                return Ok(Some(BasicInterval { word: Word::new(digits) }));
            }
            NeighborSide::Plus => *d = 0,
            NeighborSide::Minus if *d > 0 => {
                *d -= 1;
                return Ok(Some(BasicInterval { word: Word::new(digits) }));
            }
            NeighborSide::Minus => *d = c - 1,
        }
    }
    Ok(None)
}

/// `(I^-, I^+)`.
pub fn neighbors(
    schedule: &EpochSchedule,
    interval: &BasicInterval,
) -> Result<(Option<BasicInterval>, Option<BasicInterval>)> {
    Ok((
        neighbor(schedule, interval, NeighborSide::Minus)?,
        neighbor(schedule, interval, NeighborSide::Plus)?,
    ))
}

/// Length of the common prefix of a word and its same-depth neighbor, from
/// the trailing run of maximal (`Plus`) or zero (`Minus`) digits.
pub fn neighbor_split_depth(schedule: &EpochSchedule, w: &Word, side: NeighborSide) -> Result<usize> {
    let n = w.depth();
    let mut run = 0;
    for j in (1..=n).rev() {
        let d = w.digits()[j - 1];
        let extremal = match side {
            NeighborSide::Plus => d + 1 == schedule.size_at(j)?,
            NeighborSide::Minus => d == 0,
        };
        if !extremal {
            break;
        }
        run += 1;
    }
    if run == n {
        return Err(Error::Boundary { side: side.name() });
    }
    Ok(n - run - 1)
}

/// An isometry `g` of the symbolic space applied before projecting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IsometryCode {
    #[default]
    Identity,
    /// `g` is the prefix-XOR map (binary-reflected Gray decoding). Its
    /// inverse, Gray encoding, sends index-adjacent words to words that
    /// differ in one digit.
    GrayBinary,
    /// Position-wise digit permutations, one per alphabet.
    DigitPermutation { a: Vec<u32>, b: Vec<u32> },
}

impl IsometryCode {
    /// Checks the code against the alphabets of `schedule`.
    pub fn validate(&self, schedule: &EpochSchedule) -> Result<()> {
        match self {
            IsometryCode::Identity => Ok(()),
            IsometryCode::GrayBinary => {
                if schedule.c1() == 2 && schedule.c2() == 2 {
                    Ok(())
                } else {
                    Err(Error::UnsupportedCode(format!(
                        "gray-binary needs binary alphabets, got c1 = {}, c2 = {}",
                        schedule.c1(),
                        schedule.c2()
                    )))
                }
            }
            IsometryCode::DigitPermutation { a, b } => {
                check_permutation("a", a, schedule.c1())?;
                check_permutation("b", b, schedule.c2())
            }
        }
    }

    /// `g(w)`.
    pub fn apply(&self, schedule: &EpochSchedule, w: &Word) -> Result<Word> {
        self.validate(schedule)?;
        match self {
            IsometryCode::Identity => Ok(w.clone()),
            IsometryCode::GrayBinary => gray_decode(w),
            IsometryCode::DigitPermutation { a, b } => {
                permute(schedule, w, |alphabet, d| match alphabet {
                    Alphabet::A1 => a[d as usize],
                    Alphabet::A2 => b[d as usize],
                })
            }
        }
    }

    /// `g^{-1}(w)`: the symbolic word whose image lands on `w`.
    pub fn preimage(&self, schedule: &EpochSchedule, w: &Word) -> Result<Word> {
        self.validate(schedule)?;
        match self {
            IsometryCode::Identity => Ok(w.clone()),
            IsometryCode::GrayBinary => gray_encode(w),
            IsometryCode::DigitPermutation { a, b } => {
                let (ia, ib) = (invert(a), invert(b));
                permute(schedule, w, |alphabet, d| match alphabet {
                    Alphabet::A1 => ia[d as usize],
                    Alphabet::A2 => ib[d as usize],
                })
            }
        }
    }

    /// Digit `j` of `g^{-1}(w)` from digit `j` of `w` and digit `j - 1` of `w`.
    /// Every supported code is prefix-causal, so preimages can be streamed.
    pub(crate) fn preimage_digit(&self, alphabet: Alphabet, previous: u32, digit: u32) -> u32 {
        match self {
            IsometryCode::Identity => digit,
            IsometryCode::GrayBinary => digit ^ previous,
            IsometryCode::DigitPermutation { a, b } => {
                let perm = match alphabet {
                    Alphabet::A1 => a,
                    Alphabet::A2 => b,
                };
                perm.iter().position(|&p| p == digit).unwrap() as u32
            }
        }
    }
}

fn check_permutation(name: &str, perm: &[u32], c: u32) -> Result<()> {
    let mut seen = vec![false; c as usize];
    if perm.len() != c as usize {
        return Err(Error::UnsupportedCode(format!(
            "permutation {name} has {} entries for an alphabet of size {c}",
            perm.len()
        )));
    }
    for &p in perm {
        match seen.get_mut(p as usize) {
            Some(s) if !*s => *s = true,
            _ => {
                return Err(Error::UnsupportedCode(format!(
                    "permutation {name} = {perm:?} is not a bijection of 0..{c}"
                )))
            }
        }
    }
    Ok(())
}

fn invert(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    inv
}

fn permute(schedule: &EpochSchedule, w: &Word, f: impl Fn(Alphabet, u32) -> u32) -> Result<Word> {
    let mut out = Vec::with_capacity(w.depth());
    for (alphabet, first, last) in schedule.runs(w.depth())? {
        out.extend(w.digits()[first - 1..last].iter().map(|&d| f(alphabet, d)));
    }
    Ok(Word::new(out))
}

fn check_binary(w: &Word) -> Result<()> {
    if let Some(d) = w.digits().iter().find(|&&d| d > 1) {
        return Err(Error::UnsupportedCode(format!(
            "Gray codes act on binary words only, found digit {d}"
        )));
    }
    Ok(())
}

/// `y_j = x_j XOR x_{j-1}` with `x_0 = 0`.
pub fn gray_encode(w: &Word) -> Result<Word> {
    check_binary(w)?;
    let mut prev = 0;
    Ok(Word::new(
        w.digits()
            .iter()
            .map(|&d| {
                let y = d ^ prev;
                prev = d;
                y
            })
            .collect(),
    ))
}

/// `y_j = x_1 XOR ... XOR x_j`.
pub fn gray_decode(w: &Word) -> Result<Word> {
    check_binary(w)?;
    let mut acc = 0;
    Ok(Word::new(
        w.digits()
            .iter()
            .map(|&d| {
                acc ^= d;
                acc
            })
            .collect(),
    ))
}

/// `ln nu_g(I) = ln mu(g^{-1}(word of I))`.
pub fn nu_log_mass_interval(measure: &DigitMeasure, code: &IsometryCode, interval: &BasicInterval) -> Result<f64> {
    let schedule = measure.schedule();
    measure.log_mass(&code.preimage(schedule, interval.word())?)
}

/// Lower and upper bounds on a log-mass; equal when the value is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassBracket {
    pub log_lower: f64,
    pub log_upper: f64,
}

impl MassBracket {
    pub fn is_exact(&self) -> bool {
        self.log_lower == self.log_upper
    }
}

/// `ln nu_g([x - r, x + r] ∩ [0, 1])` by splitting the ball into maximal
/// basic intervals down to `depth_cap`. Cylinders at the cap that straddle
/// an endpoint only enter the upper bound.
pub fn nu_log_mass_ball(
    measure: &DigitMeasure,
    code: &IsometryCode,
    x: f64,
    r: f64,
    depth_cap: usize,
) -> Result<MassBracket> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Config(format!("ball radius r = {r} must be positive")));
    }
    let schedule = measure.schedule();
    code.validate(schedule)?;
    check_float_resolution(schedule, depth_cap)?;
    let lo = (x - r).max(0.0);
    let hi = (x + r).min(1.0);
    if lo <= 0.0 && hi >= 1.0 {
        return Ok(MassBracket {
            log_lower: 0.0,
            log_upper: 0.0,
        });
    }
    let mut lengths = Vec::with_capacity(depth_cap + 1);
    let mut alphabets = Vec::with_capacity(depth_cap);
    lengths.push(1.0f64);
    for j in 1..=depth_cap {
        let alphabet = schedule.alphabet_at(j)?;
        alphabets.push(alphabet);
        let c = f64::from(schedule.alphabet_size(alphabet));
        lengths.push(lengths[j - 1] / c);
    }
    let mut full = Vec::new();
    let mut partial = Vec::new();
    // (depth, left endpoint, log mass of the preimage prefix, last image digit)
    let mut stack = vec![(0usize, 0.0f64, 0.0f64, 0u32)];
    while let Some((k, left, log_mass, last)) = stack.pop() {
        let right = left + lengths[k];
        if right <= lo || left >= hi {
            continue;
        }
        if left >= lo && right <= hi {
            full.push(log_mass);
            continue;
        }
        if k == depth_cap {
            partial.push(log_mass);
            continue;
        }
        let alphabet = alphabets[k];
        let logs = measure.log_weights(alphabet);
        for d in (0..logs.len() as u32).rev() {
            let pre = code.preimage_digit(alphabet, last, d);
            stack.push((
                k + 1,
                left + f64::from(d) * lengths[k + 1],
                log_mass + logs[pre as usize],
                d,
            ));
        }
    }
    let log_lower = log_sum_exp(&full);
    let log_upper = if partial.is_empty() {
        log_lower
    } else {
        full.extend(partial);
        log_sum_exp(&full)
    };
    Ok(MassBracket {
        log_lower,
        log_upper,
    })
}

/// Calls `visit(word, ln nu_g(I_word))` for every depth-`n` interval, in
/// index order.
pub fn for_each_interval(
    measure: &DigitMeasure,
    code: &IsometryCode,
    n: usize,
    budget: u64,
    mut visit: impl FnMut(&[u32], f64),
) -> Result<()> {
    let schedule = measure.schedule();
    code.validate(schedule)?;
    check_budget(schedule, n, budget)?;
    let alphabets: Vec<Alphabet> = (1..=n).map(|j| schedule.alphabet_at(j)).collect::<Result<_>>()?;
    let sizes: Vec<u32> = alphabets.iter().map(|&a| schedule.alphabet_size(a)).collect();
    let mut digits = vec![0u32; n];
    let mut prefix = vec![0.0f64; n + 1];
    let refresh = |from: usize, digits: &[u32], prefix: &mut [f64]| {
        for i in from..n {
            let prev = if i == 0 { 0 } else { digits[i - 1] };
            let pre = code.preimage_digit(alphabets[i], prev, digits[i]);
            prefix[i + 1] = prefix[i] + measure.log_weights(alphabets[i])[pre as usize];
        }
    };
    refresh(0, &digits, &mut prefix);
    loop {
        visit(&digits, prefix[n]);
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
        refresh(k, &digits, &mut prefix);
    }
}
