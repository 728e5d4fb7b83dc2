use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::evolve::{evolve_states, EvolveOptions, Method};
use super::DensityMatrix;
use crate::generators::GeneratorSpec;
use crate::linalg::{devectorize, expm, general_eigenvalues, null_space, reverse_two_qubit_basis, vectorize, ComplexMatrix};
use crate::params::ReservoirParams;
use crate::tolerances::TOL;
use crate::{Error, Result};

/// Steady state of the reduced model for an initial state with no |ψ⁻⟩
/// weight. The η term is ignored, which is exact for η = 0.
///
/// Built in the reversed order (|11⟩, |10⟩, |01⟩, |00⟩) where
/// L = 1 + 3N(1+N) − 3|M|², ρ₁₁ = [|M|²(1−2N) + N²(1+2N)]/[(1+2N)L],
/// ρ₂₂ = ρ₃₃ = ρ₂₃ = 1/6 − 1/(6L), ρ₁₄ = M/[(1+2N)L], ρ₄₄ from the trace.
pub fn steady_state_closed_form(r: &ReservoirParams) -> Result<DensityMatrix> {
    r.validate()?;
    let n = r.n;
    let m2 = r.m.norm_sqr();
    let l = 1.0 + 3.0 * n * (1.0 + n) - 3.0 * m2;
    let d = 1.0 + 2.0 * n;
    let p11 = (m2 * (1.0 - 2.0 * n) + n * n * d) / (d * l);
    let mid = 1.0 / 6.0 - 1.0 / (6.0 * l);
    let p14 = r.m / (d * l);
    let p44 = 1.0 - p11 - 2.0 * mid;
    let z = C64::new(0.0, 0.0);
    let re = |x: f64| C64::new(x, 0.0);
    let reversed = ComplexMatrix::from_rows(&[
        vec![re(p11), z, z, p14],
        vec![z, re(mid), re(mid), z],
        vec![z, re(mid), re(mid), z],
        vec![p14.conj(), z, z, re(p44)],
    ])?;
    DensityMatrix::two_qubit(reverse_two_qubit_basis(&reversed))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyOptions {
    /// Propagation cap in units of the slowest relaxation period.
    pub cap_periods: f64,
    /// Slowest relaxation rate, if known. Required above the dense-propagation size.
    pub slowest_rate: Option<f64>,
    /// Stop once max|𝓛ρ| ≤ stationarity·max|L|.
    pub stationarity: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self { cap_periods: 100.0, slowest_rate: None, stationarity: TOL.stationarity }
    }
}

/// Largest Hilbert-space dimension handled with dense superoperator algebra.
const DENSE_MAX_DIM: usize = 8;

/// Smallest nonzero relaxation rate min |Re λ| of the Liouvillian, or zero
/// when the spectrum is purely imaginary.
pub fn spectral_gap(g: &GeneratorSpec) -> Result<f64> {
    let eig = general_eigenvalues(&g.superoperator())?;
    let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = 1e-9 * scale;
    let gap = eig.iter().map(|z| z.re.abs()).filter(|&x| x > threshold).fold(f64::INFINITY, f64::min);
    Ok(if gap.is_finite() { gap } else { 0.0 })
}

fn hermitized(m: &ComplexMatrix) -> ComplexMatrix {
    let tr = m.trace();
    let m = m.scale(C64::new(1.0, 0.0) / tr);
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

/// Infinite-time limit of ρ0 under g.
///
/// A one-dimensional kernel fixes the answer regardless of ρ0. Otherwise
/// (for instance the decoupled |ψ⁻⟩ sector) the state is propagated over
/// doubling intervals until stationary, so conserved weights carry over.
pub fn steady_state_numeric(g: &GeneratorSpec, rho0: &DensityMatrix, opts: &SteadyOptions) -> Result<DensityMatrix> {
    g.validate()?;
    if rho0.space() != &g.space {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: rho0.space().dim() });
    }
    if !(opts.cap_periods > 0.0) || !(opts.stationarity > 0.0) {
        return Err(Error::InvalidParams("cap_periods and stationarity must be positive".into()));
    }
    let d = g.dim();
    let dense = d <= DENSE_MAX_DIM;
    let full = g.superoperator();
    let l_scale = full.max_abs();
    let l = dense.then_some(full);
    let threshold = opts.stationarity * l_scale;
    let stationary = |rho: &ComplexMatrix| g.apply(rho).max_abs() <= threshold;
    if l_scale == 0.0 || stationary(rho0.matrix()) {
        return Ok(rho0.clone());
    }

    if let Some(l) = &l {
        let kernel = null_space(l, TOL.kernel_rel)?;
        if kernel.len() == 1 {
            let rho = hermitized(&devectorize(&kernel[0], d)?);
            return DensityMatrix::new(g.space.clone(), rho);
        }
    }

    let rate = match opts.slowest_rate {
        Some(r) if r > 0.0 => r,
        Some(r) => return Err(Error::InvalidParams(format!("slowest rate must be positive, got {r}"))),
        None if dense => spectral_gap(g)?,
        None => return Err(Error::InvalidParams("a slowest rate is required for large generators".into())),
    };
    if rate == 0.0 {
        return Err(Error::NoConvergence { detail: "generator has no relaxing modes and the initial state is not stationary".into() });
    }
    let period = 1.0 / rate;
    let cap = opts.cap_periods * period;
    log::debug!("steady state by propagation: period {period:e}, cap {cap:e}");

    let mut t = 0.0;
    let mut step = period;
    let mut rho = rho0.matrix().clone();
    match &l {
        Some(l) => {
            let mut prop = expm(&l.scale_real(period));
            loop {
                rho = devectorize(&prop.matvec(&vectorize(&rho))?, d)?;
                t += step;
                if stationary(&rho) {
                    break;
                }
                if t >= cap {
                    return Err(no_convergence(g, &rho, t));
                }
                prop = prop.matmul(&prop)?;
                step *= 2.0;
            }
        }
        None => {
            let opts = EvolveOptions { method: Method::Adaptive, ..Default::default() };
            let mut state = rho0.clone();
            loop {
                state = evolve_states(&state, g, &[step], &opts)?.pop().expect("one sample");
                t += step;
                if stationary(state.matrix()) {
                    break;
                }
                if t >= cap {
                    return Err(no_convergence(g, state.matrix(), t));
                }
                step *= 2.0;
            }
            rho = state.into_matrix();
        }
    }
    DensityMatrix::new(g.space.clone(), hermitized(&rho))
}

fn no_convergence(g: &GeneratorSpec, rho: &ComplexMatrix, t: f64) -> Error {
    Error::NoConvergence { detail: format!("max|L(rho)| = {:e} after t = {t:e}", g.apply(rho).max_abs()) }
}
