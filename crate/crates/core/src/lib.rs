//! Stokes matrices of the dynamical KZ equations, their Stokes multipliers,
//! and the braid representations they generate.

pub mod braid;
pub mod dkz;
pub mod error;
pub mod formal;
pub mod holonomy;
pub mod integrator;
pub mod json;
pub mod linalg;
pub mod path;
pub mod qgroup;
pub mod stokes;
pub mod tensor;
pub mod thresholds;

pub use error::{Error, Result};
pub use formal::{formal_series, project_centralizer, CoverPoint, FormalSolution, IrregularOde, OdeOrigin};
pub use tensor::{
    casimir_omega, diagonal_omega, elementary_matrix, embed_pair, embed_single, permutation_t, Complex, ComplexMatrix,
    FactorPair, TensorSpace,
};
pub use dkz::DkzParams;
pub use integrator::ToleranceSpec;
pub use path::{dkz_holonomy, transport, ComplexPath, ConfigPath, Segment};
pub use stokes::{anti_stokes_rays, canonical_solution, monodromy_around_zero, monodromy_consistency, stokes_matrices, stokes_multiplier, HalfPlane, SectorSpec, StokesData, StokesOptions, Which};
pub use braid::{braid_relation_residuals, build_representation, ybe_residual, BraidRepresentation, BraidWord};
pub use holonomy::{holonomy_factorization_test, isomonodromy_scan, Chamber};
pub use qgroup::{compare_stokes_to_qgroup, uq_sl2_r, GaugeMode, QParameter, Variant};
