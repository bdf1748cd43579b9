use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gcd undefined: both polynomials are zero")]
    GcdUndefined,

    #[error("not a bipermutive rule polynomial: {0}")]
    NotRulePolynomial(String),

    #[error("matrix size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("matrix size {0} outside supported range 1..={max}", max = crate::gf2::MAX_MATRIX_SIZE)]
    MatrixSize(usize),

    #[error("matrix not in GL: it is singular")]
    NotInvertible,

    #[error("order computation supports matrices up to {max}x{max}, got {0}", max = crate::gf2::MAX_ORDER_SIZE)]
    OrderTooLarge(usize),

    #[error("cannot parse polynomial {input:?}: {reason}")]
    ParsePoly { input: String, reason: String },

    #[error("diameter {0} outside supported range 2..={max}", max = crate::ca::MAX_DIAMETER)]
    InvalidDiameter(u32),

    #[error("rule code does not fit a truth table of diameter {0}")]
    CodeOutOfRange(u32),

    #[error("configuration length {0} outside supported range 1..=64")]
    InvalidLength(u32),

    #[error("neighborhood length {got} does not match rule diameter {expected}")]
    LengthMismatch { expected: u32, got: u32 },

    #[error("configuration shorter than diameter ({len} < {diameter})")]
    ConfigurationTooShort { len: u32, diameter: u32 },

    #[error("rule is not bipermutive")]
    NotBipermutive,

    #[error("rule is not linear and bipermutive")]
    NotLinearBipermutive,

    #[error("rule diameters differ: {0} vs {1}")]
    DiameterMismatch(u32, u32),

    #[error("square order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("square of order {0} too large to materialize")]
    SquareTooLarge(usize),

    #[error("state has {got} half-cells, system expects {expected}")]
    StateMismatch { expected: u32, got: u32 },

    #[error("phase space of 2^{0} states too large for an exhaustive sweep")]
    PhaseSpaceTooLarge(u32),

    #[error("not an OCA pair: the update map is not bijective")]
    NotOcaPair,

    #[error("diameter {diameter} out of range for {what}")]
    DiameterOutOfRange { what: &'static str, diameter: u32 },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("failed to start worker pool: {0}")]
    ThreadPool(String),
}
