//! Classification of bipartite quantum states in the nonlocality hierarchy:
//! separable ⊂ steerable ⊂ Bell-nonlocal boundaries for four state families,
//! Monte Carlo simulation of optimal local-hidden-state cheating strategies,
//! and covariance-matrix criteria for Gaussian states.
//!
//! The crate is organized as:
//!
//! - [`qmat`]: dense complex linear algebra (Hermitian eigensolver, Kronecker
//!   products, partial trace, Schur complements, PSD tests).
//! - [`states`]: Werner, isotropic, and "inept" two-qubit density matrices
//!   plus Bob's conditioned states after a projective measurement by Alice.
//! - [`boundaries`]: closed-form and root-found mixing-parameter thresholds
//!   `η_ent ≤ η_steer ≤ η_Bell` per family.
//! - [`lhs_sim`]: seeded, reproducible Monte Carlo of the steering game
//!   against optimal cheating strategies over Haar-random ensembles.
//! - [`gaussian`]: covariance-matrix validity, separability, steerability,
//!   conditioned states, ensemble construction, and the Reid EPR product.
//! - [`bell`]: the optimal-CHSH criterion for arbitrary two-qubit states,
//!   used as an oracle for the Bell thresholds.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads.

#![forbid(unsafe_code)]

pub mod bell;
pub mod boundaries;
pub mod gaussian;
pub mod lhs_sim;
mod numeric;
pub mod qmat;
pub mod states;

use thiserror::Error as ThisError;

/// Errors surfaced by any module in this crate.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("singular pivot: {0}")]
    SingularBlock(String),

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("unknown measurement outcome label {0}")]
    UnknownLabel(i64),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("operation requires a non-steerable covariance matrix, but this one is steerable")]
    RequiresNonSteerable,

    #[error("operation requires a steerable covariance matrix, but this one is not")]
    RequiresSteerable,

    #[error("root bracketing failed: {0}")]
    NoBracket(String),

    #[error("covariance matrix is not in two-mode standard form: {0}")]
    NotStandardForm(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use bell::{chsh_max, chsh_threshold_inept, chsh_threshold_inept_numeric, CorrelationMatrix};
pub use boundaries::{
    collins_i_d, gaussian_symmetric_boundaries, harmonic_number, inept_boundaries,
    isotropic_boundaries, werner_boundaries, BoundaryReport, Family, SteerKind,
};
pub use gaussian::{CovarianceMatrix, GaussianMeasurement, SteeringWitness};
pub use lhs_sim::{
    inept_cheat_simulation, isotropic_cheat_overlap, steering_verdict, werner_cheat_overlap,
    HaarSample, SimFamily, SimOutcome, Verdict,
};
pub use qmat::{
    kron, partial_trace_a, schur_complement, ComplexMatrix, HermitianMatrix, SchurBlock, C64,
};
pub use states::{
    conditioned_state, inept_state, isotropic_state, werner_state, BipartiteDensityMatrix,
    ConditionedState, ProjectiveMeasurement,
};
