use alloc::string::String;

use crate::holonomy::LoopFamily;
use crate::model::Coord;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid control point: {0}")]
    InvalidPoint(String),

    #[error("level {level} out of range (0..{limit})")]
    LevelOutOfRange { level: usize, limit: usize },

    #[error("finite-difference step {step} leaves the chart along {coord}")]
    InvalidDiscretization { coord: Coord, step: f64 },

    #[error("loop is not closed (endpoint gap {gap:e})")]
    OpenLoop { gap: f64 },

    #[error("loop needs at least {min} points, got {found}")]
    TooFewPoints { min: usize, found: usize },

    #[error("loop leaves its tagged plane at point {index}")]
    PlaneViolation { index: usize },

    #[error("loops have different base points")]
    BasePointMismatch,

    #[error("loop plane does not match family {family}")]
    FamilyMismatch { family: LoopFamily },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("area {area} exceeds single-loop capacity {capacity} for {family}")]
    AreaOutOfRange { family: LoopFamily, area: f64, capacity: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid qubit index: {0}")]
    QubitIndex(String),
}
