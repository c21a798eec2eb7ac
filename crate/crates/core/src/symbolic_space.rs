//! Mixed symbolic spaces.
//!
//! Positions `j = 1, 2, ...` are grouped into epochs `[T_k, T_{k+1})`. Odd
//! epochs (`k = 1, 3, ...`) draw their letters from the alphabet `A1 = {0..c1}`,
//! even epochs from `A2 = {0..c2}`. Everything metric about the space
//! (cylinder diameters, the ultrametric) is a function of the number `N_n` of
//! `A1` positions among the first `n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default largest supported position.
pub const DEFAULT_MAX_DEPTH: usize = 1 << 20;

/// How the epoch boundaries `T_k` are generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum SchedulePreset {
    /// `T_1 = 1, T_2 = 2, T_{k+1} = T_k^2`.
    Squares,
    /// `T_k = k!`.
    Factorial,
    /// `T_k = ratio^(k-1)`.
    Geometric { ratio: u64 },
    /// Caller-supplied boundaries; the final epoch is unbounded.
    Explicit { boundaries: Vec<u64> },
}

/// Which of the two alphabets a position uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    A1,
    A2,
}

/// Epoch schedule of a mixed symbolic space, precomputed up to `max_depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochSchedule {
    preset: SchedulePreset,
    c1: u32,
    c2: u32,
    max_depth: usize,
    /// `T_1, T_2, ...`; for generated presets the last entry exceeds `max_depth`.
    boundaries: Vec<usize>,
    /// `a_before[i] = N_{T_{i+1} - 1}` (0-based `i`), the `A1` count before epoch `i`.
    a_before: Vec<usize>,
    warning: Option<String>,
}

impl EpochSchedule {
    pub fn new(preset: SchedulePreset, c1: u32, c2: u32, max_depth: usize) -> Result<Self> {
        if c1 < 2 || c2 < 2 {
            return Err(Error::Config(format!(
                "alphabet sizes must be at least 2, got c1 = {c1}, c2 = {c2}"
            )));
        }
        if max_depth == 0 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        let boundaries = match &preset {
            SchedulePreset::Squares => generate(max_depth, |k, prev| {
                if k == 1 {
                    Some(2)
                } else {
                    prev.checked_mul(prev)
                }
            })?,
            SchedulePreset::Factorial => {
                generate(max_depth, |k, prev| prev.checked_mul(k as usize + 1))?
            }
            SchedulePreset::Geometric { ratio } => {
                if *ratio < 2 {
                    return Err(Error::Config(format!(
                        "geometric ratio must be at least 2, got {ratio}"
                    )));
                }
                let r = usize::try_from(*ratio)
                    .map_err(|_| Error::Config("geometric ratio does not fit in usize".into()))?;
                generate(max_depth, |_, prev| prev.checked_mul(r))?
            }
            SchedulePreset::Explicit { boundaries } => {
                if boundaries.first() != Some(&1) {
                    return Err(Error::Config(
                        "explicit schedule must start with T_1 = 1".into(),
                    ));
                }
                if let Some(w) = boundaries.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(Error::Config(format!(
                        "explicit schedule must be strictly increasing, found {} then {}",
                        w[0], w[1]
                    )));
                }
                boundaries
                    .iter()
                    .map(|&t| {
                        usize::try_from(t)
                            .map_err(|_| Error::Config(format!("boundary {t} does not fit in usize")))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let mut a_before = Vec::with_capacity(boundaries.len());
        let mut acc = 0usize;
        for (i, &t) in boundaries.iter().enumerate() {
            a_before.push(acc);
            if i % 2 == 0 {
                if let Some(&next) = boundaries.get(i + 1) {
                    acc += next - t;
                }
            }
        }
        let warning = match preset {
            SchedulePreset::Squares | SchedulePreset::Factorial => None,
            _ => Some(
                "T_{k+1}/T_k is not guaranteed to diverge; the limsup/liminf statements \
                 about N_n/n are the caller's responsibility"
                    .to_string(),
            ),
        };
        Ok(Self {
            preset,
            c1,
            c2,
            max_depth,
            boundaries,
            a_before,
            warning,
        })
    }

    /// The canonical `T_k = 1, 2, 4, 16, 256, 65536, ...` schedule.
    pub fn squares(c1: u32, c2: u32) -> Self {
        Self::new(SchedulePreset::Squares, c1, c2, DEFAULT_MAX_DEPTH)
            .expect("squares preset is valid for c >= 2")
    }

    pub fn preset(&self) -> &SchedulePreset {
        &self.preset
    }

    pub fn c1(&self) -> u32 {
        self.c1
    }

    pub fn c2(&self) -> u32 {
        self.c2
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Epoch starts `T_1, T_2, ...` known to the schedule.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// Set for presets whose divergence hypothesis cannot be vouched for.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if n > self.max_depth {
            Err(Error::Range {
                position: n,
                max_depth: self.max_depth,
            })
        } else {
            Ok(())
        }
    }

    /// 0-based index of the epoch containing position `j >= 1`.
    fn epoch_index(&self, j: usize) -> usize {
        self.boundaries.partition_point(|&t| t <= j) - 1
    }

    pub fn alphabet_at(&self, j: usize) -> Result<Alphabet> {
        if j == 0 {
            return Err(Error::Range {
                position: 0,
                max_depth: self.max_depth,
            });
        }
        self.check_range(j)?;
        Ok(if self.epoch_index(j).is_multiple_of(2) {
            Alphabet::A1
        } else {
            Alphabet::A2
        })
    }

    pub fn alphabet_size(&self, alphabet: Alphabet) -> u32 {
        match alphabet {
            Alphabet::A1 => self.c1,
            Alphabet::A2 => self.c2,
        }
    }

    pub fn size_at(&self, j: usize) -> Result<u32> {
        Ok(self.alphabet_size(self.alphabet_at(j)?))
    }

    /// `N_n`, the number of `A1` positions among `1..=n`.
    pub fn count_a(&self, n: usize) -> Result<usize> {
        self.check_range(n)?;
        if n == 0 {
            return Ok(0);
        }
        let i = self.epoch_index(n);
        let partial = if i.is_multiple_of(2) {
            n - self.boundaries[i] + 1
        } else {
            0
        };
        Ok(self.a_before[i] + partial)
    }

    /// Natural log of the diameter `c1^{-N_n} c2^{-(n - N_n)}` of a depth-`n` cylinder.
    pub fn log_diameter(&self, n: usize) -> Result<f64> {
        let na = self.count_a(n)?;
        Ok(-(na as f64 * f64::from(self.c1).ln() + (n - na) as f64 * f64::from(self.c2).ln()))
    }

    /// Number of depth-`n` cylinders, as a float (it overflows integers quickly).
    pub fn cylinder_count(&self, n: usize) -> Result<f64> {
        Ok((-self.log_diameter(n)?).exp())
    }

    /// Maximal constant-alphabet runs covering positions `1..=n`, as
    /// `(alphabet, first, last)` with inclusive 1-based bounds.
    pub fn runs(&self, n: usize) -> Result<Vec<(Alphabet, usize, usize)>> {
        self.check_range(n)?;
        let mut out = Vec::new();
        for (i, &start) in self.boundaries.iter().enumerate() {
            if start > n {
                break;
            }
            let end = self
                .boundaries
                .get(i + 1)
                .map_or(n, |&next| (next - 1).min(n));
            let alphabet = if i % 2 == 0 { Alphabet::A1 } else { Alphabet::A2 };
            out.push((alphabet, start, end));
        }
        Ok(out)
    }

    /// Depths `T_k - 1` (k >= 2) that lie in `1..=limit`, where `N_n / n` is extremal.
    pub fn epoch_end_depths(&self, limit: usize) -> Vec<usize> {
        let limit = limit.min(self.max_depth);
        self.boundaries
            .iter()
            .skip(1)
            .map(|&t| t - 1)
            .filter(|&d| d >= 1 && d <= limit)
            .collect()
    }

    /// Checks that every digit lies in its position's alphabet.
    pub fn validate_word(&self, w: &Word) -> Result<()> {
        self.check_range(w.depth())?;
        for (idx, &d) in w.digits().iter().enumerate() {
            let size = self.size_at(idx + 1)?;
            if d >= size {
                return Err(Error::InvalidDigit {
                    position: idx + 1,
                    digit: d,
                    size,
                });
            }
        }
        Ok(())
    }

    /// Log of the ultrametric distance between two words; `-inf` when they
    /// agree on their common length.
    pub fn distance(&self, w: &Word, v: &Word) -> Result<f64> {
        let k = common_prefix_len(w, v);
        if k == w.depth().min(v.depth()) {
            return Ok(f64::NEG_INFINITY);
        }
        self.log_diameter(k)
    }
}

fn generate(
    max_depth: usize,
    mut next: impl FnMut(u32, usize) -> Option<usize>,
) -> Result<Vec<usize>> {
    let mut out = vec![1usize];
    let mut k = 1u32;
    while *out.last().unwrap() <= max_depth {
        let prev = *out.last().unwrap();
        let t = next(k, prev).ok_or_else(|| {
            Error::Config(format!(
                "epoch boundary overflow before covering max_depth = {max_depth}"
            ))
        })?;
        out.push(t);
        k += 1;
    }
    Ok(out)
}

/// A finite word on the mixed alphabet. Validity against a schedule is
/// checked by [`EpochSchedule::validate_word`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(digits: Vec<u32>) -> Self {
        Self(digits)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u32> {
        self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w|_k`.
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn push(&mut self, digit: u32) {
        self.0.push(digit);
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&d| d < 10) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"0110"` (single decimal digits) or `"0.12.3"` (dot-separated).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse word {s:?}"));
        if s.contains('.') {
            s.split('.')
                .map(|p| p.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }
}

/// `ℓ(w ∧ v)`, the length of the longest common prefix.
pub fn common_prefix_len(w: &Word, v: &Word) -> usize {
    w.0.iter().zip(&v.0).take_while(|(a, b)| a == b).count()
}
