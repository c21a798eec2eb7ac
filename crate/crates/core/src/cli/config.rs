use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::IsometryCode;
use crate::symbolic_space::SchedulePreset;

/// A weight as written in the config: a decimal or `p/q` string, or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightValue {
    Number(f64),
    Text(String),
}

impl WeightValue {
    fn parse(&self, field: &str) -> Result<f64> {
        let text = match self {
            WeightValue::Number(x) => return Ok(*x),
            WeightValue::Text(t) => t.trim(),
        };
        let bad = || Error::Config(format!("{field}: cannot parse weight {text:?}"));
        match text.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().map_err(|_| bad())?;
                let q: f64 = q.trim().parse().map_err(|_| bad())?;
                Ok(p / q)
            }
            None => text.parse().map_err(|_| bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub a: Vec<WeightValue>,
    pub b: Vec<WeightValue>,
}

impl Weights {
    pub fn parse(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let side = |name: &str, ws: &[WeightValue]| {
            ws.iter()
                .enumerate()
                .map(|(i, w)| w.parse(&format!("weights.{name}[{i}]")))
                .collect::<Result<Vec<f64>>>()
        };
        Ok((side("a", &self.a)?, side("b", &self.b)?))
    }
}

/// An explicit list of values or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { from: f64, to: f64, count: usize },
}

impl Default for Grid {
    fn default() -> Self {
        Grid::List(Vec::new())
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { from, to, count } => match count {
                0 => Vec::new(),
                1 => vec![*from],
                n => (0..*n)
                    .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TauSection {
    #[serde(default)]
    pub q: Grid,
    #[serde(default)]
    pub depths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseSection {
    pub depth: usize,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// Defaults to 50 interior points of the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Grid>,
    /// Coarse histogram overlaid on the plot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse: Option<CoarseSection>,
}

fn default_qs() -> Vec<f64> {
    vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0]
}

fn default_oracle_depth() -> usize {
    12
}

fn default_identity_depth() -> usize {
    10
}

fn default_ratio_depths() -> Vec<usize> {
    vec![9, 12, 14]
}

fn default_doubling_samples() -> u64 {
    1000
}

fn default_doubling_depth() -> usize {
    400
}

fn default_isometry_depth() -> usize {
    16
}

fn default_mc_samples() -> u64 {
    500
}

fn default_mc_depth() -> usize {
    4095
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_qs")]
    pub q: Vec<f64>,
    /// Largest depth of the brute-force partition sums.
    #[serde(default = "default_oracle_depth")]
    pub oracle_depth: usize,
    /// Largest depth of the exhaustive tilted-mass identity check.
    #[serde(default = "default_identity_depth")]
    pub identity_depth: usize,
    #[serde(default = "default_ratio_depths")]
    pub ratio_depths: Vec<usize>,
    #[serde(default = "default_doubling_samples")]
    pub doubling_samples: u64,
    #[serde(default = "default_doubling_depth")]
    pub doubling_depth: usize,
    #[serde(default = "default_isometry_depth")]
    pub isometry_depth: usize,
    /// Defaults to the midpoint of the spectrum domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_alpha: Option<f64>,
    /// Zero skips the Monte-Carlo suite.
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(default = "default_mc_depth")]
    pub mc_depth: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        serde_json::from_str("{}").unwrap()
    }
}

/// Which measure draws the sampled points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SampleMeasure {
    #[default]
    Base,
    TiltedQ(f64),
    Alpha(f64),
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    #[serde(default)]
    pub measure: SampleMeasure,
    #[serde(default = "one")]
    pub count: u64,
    #[serde(default)]
    pub depths: Vec<usize>,
    /// Repeat these digits instead of sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ProjectSection {
    pub depth: usize,
    /// Query points; when empty every interval of the depth is listed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<f64>,
    /// Ball radius for point queries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Depth limit of ball decompositions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_depth: Option<usize>,
}

fn default_schedule() -> SchedulePreset {
    SchedulePreset::Squares
}

/// A complete run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional `[c1, c2]`, checked against the weight lengths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabets: Option<[u32; 2]>,
    pub weights: Weights,
    #[serde(default = "default_schedule")]
    pub schedule: SchedulePreset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default)]
    pub isometry: IsometryCode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub project: Option<ProjectSection>,
}

impl RunConfig {
    /// Parses a config; errors carry the line and column of the problem.
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Single-line JSON echo, embedded in every report.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
