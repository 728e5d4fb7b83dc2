//! Numerical tolerances shared by every module.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max |A − A†| entry accepted by the Hermitian eigensolver.
    pub hermitian_input: f64,
    /// Negative eigenvalues down to −psd_clamp are treated as zero.
    pub psd_clamp: f64,
    /// Density-matrix Hermiticity and trace checks.
    pub state_hermitian: f64,
    pub state_trace: f64,
    /// Eigenvalues below −state_negativity fail validation; values in
    /// [−state_negativity, −psd_clamp) only warn.
    pub state_negativity: f64,
    /// Unitarity residual for protocol unitaries.
    pub unitary: f64,
    /// Singular values below kernel_rel·(largest) count as zero.
    pub kernel_rel: f64,
    /// Stationarity threshold ‖dρ/dt‖_max for numeric steady states.
    pub stationarity: f64,
    /// Relative tolerance of the adaptive integrator.
    pub rk_rel: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub rk_abs: f64,
    /// Negative square-root arguments in the concurrence spectrum clamp to
    /// zero above −concurrence_clamp.
    pub concurrence_clamp: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian_input: 1e-10,
    psd_clamp: 1e-9,
    state_hermitian: 1e-9,
    state_trace: 1e-9,
    state_negativity: 1e-8,
    unitary: 1e-9,
    kernel_rel: 1e-10,
    stationarity: 1e-12,
    rk_rel: 1e-9,
    rk_abs: 1e-12,
    concurrence_clamp: 1e-10,
};
