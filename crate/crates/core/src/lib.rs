//! Multifractal formalism on mixed symbolic spaces.
//!
//! A word is built from two alphabets that alternate by epochs, carries a
//! Bernoulli-type product measure, and projects onto `[0, 1]` through a
//! mixed-radix expansion, optionally after an isometry of the symbolic space.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod measure;
pub mod numeric;
pub mod partition_spectrum;
pub mod projection;
pub mod symbolic_space;

pub use error::{Error, Result};
pub use measure::{tilt_alpha, tilt_q, AlphaTilt, DigitMeasure, ModelParams};
pub use projection::{BasicInterval, IsometryCode, NeighborSide};
pub use symbolic_space::{Alphabet, EpochSchedule, SchedulePreset, Word};
