use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tensor space too large: m^n = {dim} exceeds {max}")]
    SpaceTooLarge { dim: usize, max: usize },

    #[error("u must have distinct diagonal elements (u_{a} = u_{b})")]
    NonDistinct { a: usize, b: usize },

    #[error("diagonal elements of u/kappa must be purely imaginary (entry {index} has real part {real:e})")]
    NotPurelyImaginary { index: usize, real: f64 },

    #[error("resonance in formal series at order {order}: block-diagonal equation is not solvable")]
    Resonance { order: usize },

    #[error("lambda_{a} - lambda_{b} vanishes outside a common block")]
    SingularLambda { a: usize, b: usize },

    #[error("evaluation point z = 0")]
    ZeroArgument,

    #[error("matching radius too small: {0}")]
    MatchRadiusTooSmall(String),

    #[error("integrator exceeded {max_steps} steps")]
    MaxStepsExceeded { max_steps: usize },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("path collision: min |z_i - z_j| = {distance:e} below guard {guard:e}")]
    PathCollision { distance: f64, guard: f64 },

    #[error("path passes through the pole at z = 0")]
    PathThroughPole,

    #[error("path segments are not continuous at segment {index}")]
    DiscontinuousPath { index: usize },

    #[error("anti-Stokes ray at arg {arg} lies within {guard} rad of a base ray")]
    AntiStokesOnRay { arg: f64, guard: f64 },

    #[error("Stokes data was not built from a dKZ_2 equation")]
    NotDkz2,

    #[error("braid word has {got} strands, representation has {expected}")]
    StrandMismatch { expected: usize, got: usize },

    #[error("relation needs at least {needed} strands, got {got}")]
    TooFewStrands { needed: usize, got: usize },

    #[error("grid point {index} is outside the chamber")]
    OutsideChamber { index: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl Error {
    /// True for failures of the numerical pipeline, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Resonance { .. }
                | Error::MatchRadiusTooSmall(_)
                | Error::MaxStepsExceeded { .. }
                | Error::StepUnderflow { .. }
                | Error::PathCollision { .. }
                | Error::Singular
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
