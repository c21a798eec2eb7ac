use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A position or depth lies outside the represented schedule prefix.
    #[error("position {position} is outside the supported range 0..={max_depth}")]
    Range { position: usize, max_depth: usize },

    /// A digit is not a member of the alphabet at its position.
    #[error("digit {digit} at position {position} is not in an alphabet of size {size}")]
    InvalidDigit {
        position: usize,
        digit: u32,
        size: u32,
    },

    /// Input parameters violate a structural invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A value lies outside the open domain where an operation is defined.
    #[error("{what} = {value} is outside the open domain ({lo}, {hi})")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The weights of one alphabet are uniform, so the requested tilt does not exist.
    #[error("weights of alphabet {alphabet} are uniform; the only attainable exponent is {forced}, got {value}")]
    Degenerate {
        alphabet: &'static str,
        forced: f64,
        value: f64,
    },

    /// An exhaustive enumeration would exceed its budget.
    #[error("enumeration of {required} cylinders exceeds the budget of {budget}")]
    Resource { required: f64, budget: u64 },

    /// The isometry code cannot act on this symbolic space.
    #[error("unsupported isometry code: {0}")]
    UnsupportedCode(String),

    /// The requested neighbor of a boundary interval does not exist.
    #[error("interval has no {side} neighbor")]
    Boundary { side: &'static str },

    /// A float input cannot resolve the requested depth.
    #[error("depth {depth} needs {bits:.1} bits of resolution; float input supports at most 52")]
    Precision { depth: usize, bits: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
