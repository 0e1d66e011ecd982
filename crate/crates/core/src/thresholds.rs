//! Pass/fail thresholds shared by the acceptance suite and the CLI.

/// Algebraic identities: Yang–Baxter, braid relations, Stokes structure, oracles.
pub const ALGEBRAIC: f64 = 1e-8;
/// Isomonodromy deviation and quantum-group comparison.
pub const ISOMONODROMY: f64 = 1e-6;
pub const QGROUP: f64 = 1e-6;
/// Holonomy factorization at the largest tested separation.
pub const HOLONOMY_FINAL: f64 = 1e-4;
/// A perturbed R must exceed this Yang–Baxter residual.
pub const NEGATIVE_CONTROL: f64 = 1e-4;
/// Exactly solvable cases.
pub const TRIVIAL: f64 = 1e-10;
/// Allowed deviation of the log-log slope from `-(N+1)`.
pub const SLOPE: f64 = 0.2;
