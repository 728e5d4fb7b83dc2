//! Time evolution, steady states and multi-segment protocols.

mod evolve;
mod protocol;
mod state;
mod steady;

pub use evolve::{evolve, evolve_states, EvolveOptions, Method};
pub use protocol::{run_protocol, ProtocolSegment, SamplingPolicy, SegmentKind, Spacing};
pub use state::{check_unitary, local_unitary_u, pauli, rotated_initial_state, DensityMatrix};
pub use steady::{spectral_gap, steady_state_closed_form, steady_state_numeric, SteadyOptions};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::ComplexMatrix;
use crate::measures::{bell_fidelity, free_concurrence, linear_entropy, BellState};
use crate::Result;

/// One sample of a trajectory in the S_L–C_free plane.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryPoint {
    /// Time in the generator's own unit.
    pub t: f64,
    /// Dimensionless time (β²/κ)·t.
    pub tau: f64,
    pub s_l: f64,
    pub c_free: f64,
    pub f_phi_plus: f64,
    pub f_phi_minus: f64,
    pub f_psi_plus: f64,
    pub f_psi_minus: f64,
    /// Index of the protocol segment that produced the sample.
    pub segment: usize,
    #[serde(skip)]
    pub snapshot: Option<DensityMatrix>,
}

impl TrajectoryPoint {
    /// Measures of the atomic state (the cavity, if any, is traced out).
    pub fn from_state(t: f64, tau: f64, segment: usize, rho: &DensityMatrix, keep_snapshot: bool) -> Result<Self> {
        let atoms = rho.atoms()?;
        let f = |b| bell_fidelity(&atoms, b);
        Ok(Self {
            t,
            tau,
            s_l: linear_entropy(&atoms)?,
            c_free: free_concurrence(&atoms)?,
            f_phi_plus: f(BellState::PhiPlus)?,
            f_phi_minus: f(BellState::PhiMinus)?,
            f_psi_plus: f(BellState::PsiPlus)?,
            f_psi_minus: f(BellState::PsiMinus)?,
            segment,
            snapshot: keep_snapshot.then(|| rho.clone()),
        })
    }

    pub fn fidelity(&self, bell: BellState) -> f64 {
        match bell {
            BellState::PhiPlus => self.f_phi_plus,
            BellState::PhiMinus => self.f_phi_minus,
            BellState::PsiPlus => self.f_psi_plus,
            BellState::PsiMinus => self.f_psi_minus,
        }
    }
}

/// Choi matrix of a d-level channel given by its column-stacked
/// superoperator: C[(i·d + k), (j·d + l)] = ⟨k|E(|i⟩⟨j|)|l⟩.
pub fn choi_matrix(prop: &ComplexMatrix, d: usize) -> ComplexMatrix {
    assert_eq!(prop.rows(), d * d, "propagator must act on d x d matrices");
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            // vec(|i⟩⟨j|) has its one at column-stacked index j·d + i
            let col = j * d + i;
            for k in 0..d {
                for l in 0..d {
                    let v: C64 = prop[(l * d + k, col)];
                    out[(i * d + k, j * d + l)] = v;
                }
            }
        }
    }
    out
}
