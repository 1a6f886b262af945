//! Analysis of Boolean functions over biased, Shapley, and pull-back
//! distributions: Fourier spectra, coordinate influences, noise sensitivity,
//! minor maps and influence-preservation experiments, polynomial threshold
//! machinery, and a small PCSP layer (polymorphism checks, label cover,
//! minor conditions).
//!
//! Conventions used throughout:
//! * tuples in `{0,1}^n` are packed into integers, coordinate 1 at the
//!   least-significant bit;
//! * coordinates, minor-map targets, and labels are 1-based in all public
//!   interfaces;
//! * exhaustive operations are desk-scale: arity is capped at 24 and most
//!   operations document tighter limits.

pub mod boolfn;
pub mod dist;
pub mod exact;
pub mod fourier;
pub mod influence;
pub mod minors;
pub mod pcsp;
pub mod ptf;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("coordinate {coord} out of range for arity {arity}")]
    CoordOutOfRange { coord: usize, arity: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("function is not unate")]
    NotUnate,
    #[error("function is not increasing")]
    NotIncreasing,
    #[error("distribution is not symmetric")]
    NotSymmetric,
    #[error("dimension {0} is odd; pull-back families are defined on even dimensions only")]
    OddDimension(usize),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
