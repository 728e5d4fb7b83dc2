//! Two-atom squeezed-reservoir engineering: effective cavity-QED parameters,
//! master-equation generators, time evolution, steady states and the
//! linear-entropy / free-concurrence measures used to chart two-qubit states.

// `!(x >= 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod generators;
pub mod linalg;
pub mod measures;
pub mod params;
pub mod tolerances;

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("detuning {0} must be nonzero")]
    ZeroDetuning(&'static str),
    #[error("effective reservoir is not damping: beta_r^2 = {beta_r_sq:e} <= beta_s^2 = {beta_s_sq:e}")]
    NotDamping { beta_r_sq: f64, beta_s_sq: f64 },
    #[error("resonance condition infeasible: Omega_t^2/(4 Delta_t) must equal {required_shift:e}, which has the wrong sign for Delta_t")]
    Infeasible { required_shift: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("Fock truncation too small: estimated photon number {estimate:.3} exceeds n_max/2 = {half:.1}")]
    TruncationTooSmall { estimate: f64, half: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("adaptive integrator could not meet tolerance at t = {t:e} (step {step:e})")]
    ToleranceNotMet { t: f64, step: f64 },
    #[error("no convergence: {detail}")]
    NoConvergence { detail: String },
}

impl Error {
    /// Numerical failures as opposed to bad user input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ToleranceNotMet { .. } | Error::NoConvergence { .. } | Error::Singular)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
