use thiserror::Error;

use crate::poly::Dim;

/// Which resource budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    SPairs,
    BasisSize,
    SearchSpace,
}

impl std::fmt::Display for Resource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resource::SPairs => write!(f, "S-pair budget"),
            Resource::BasisSize => write!(f, "basis size budget"),
            Resource::SearchSpace => write!(f, "search space budget"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("coefficient {literal} is not representable in {field}")]
    Unrepresentable { literal: String, field: String },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring contexts do not agree: {0}")]
    ContextMismatch(String),

    #[error("variable `{0}` occurs in both factors")]
    VariableCollision(String),

    #[error("no image given for variable `{0}`")]
    MissingImage(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{identity} fails at degree {degree:?}, entry ({row}, {col}): difference {difference}")]
    IdentityViolation {
        identity: String,
        degree: Option<i64>,
        row: usize,
        col: usize,
        difference: String,
    },

    #[error("morphism is not closed")]
    NotClosed,

    #[error("contraction identity dk + kd = id fails at degree {degree}")]
    ContractionInvalid { degree: i64 },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("module is not over the point with zero potential: {0}")]
    NotPointCase(String),

    #[error("resolution did not become 2-periodic within {0} steps")]
    PeriodicityNotReached(usize),

    #[error("resource cap reached: {0}")]
    ResourceCap(Resource),

    #[error("potential is not an isolated singularity (Milnor number {0})")]
    NonIsolated(Dim),

    #[error("characteristic {characteristic} too small for exponents up to {degree}")]
    CharacteristicTooSmall { characteristic: u32, degree: u32 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
