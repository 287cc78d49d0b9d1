use crate::rootsys::{Family, GroupType};
use crate::verlinde::VerlindeResult;
use num_bigint::BigUint;

#[derive(thiserror::Error, Debug, Clone)]
pub enum Error {
    #[error("rank {rank} out of bounds for type {family}: rank must be at least {min}")]
    RankOutOfBounds { family: Family, rank: usize, min: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not a root of the root system")]
    NotARoot(String),

    #[error("operation requires type {expected}, got {got}")]
    FamilyMismatch { expected: &'static str, got: GroupType },

    #[error("center subgroup {spec} is not supported for {groups}")]
    UnsupportedCenter { spec: String, groups: String },

    #[error("level {level} is incompatible with center subgroup {spec}: the center action does not preserve the weights trivial on it")]
    IncompatibleLevel { spec: String, level: String },

    #[error("weight {0} gives a singular torus element (zero sine factor); it is not in the level set")]
    SingularWeight(String),

    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(u32),

    #[error("precision must be at least {min} bits, got {got}")]
    InvalidPrecision { min: usize, got: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("torus order constant is unknown for type {0}; use the unitarity oracle")]
    TorusOrderUnknown(Family),

    #[error("sum {nearest} + residual {residual:.3e} not within tolerance {tolerance:.3e} of an integer at {precision_bits} bits")]
    Integrality {
        nearest: BigUint,
        residual: f64,
        tolerance: f64,
        precision_bits: usize,
    },

    #[error("{} (level {}, genus {}) failed integrality certification: residual {:.3e} at {} bits", .0.group_label, .0.level, .0.genus, .0.residual, .0.precision_bits)]
    Uncertified(Box<VerlindeResult>),

    #[error("arbitrary precision arithmetic failed: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
