use num_complex::Complex64 as C64;

use crate::generators::{annihilation, qubit_lowering};
use crate::linalg::{hermitian_eig, ComplexMatrix, HilbertSpace};
use crate::tolerances::TOL;
use crate::{Error, Result};

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// within the shared tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != space.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: matrix.rows() });
        }
        let herm = matrix.hermiticity_residual();
        if herm > TOL.state_hermitian {
            return Err(Error::InvalidState(format!("Hermiticity residual {herm:e}")));
        }
        let tr = matrix.trace();
        if (tr - 1.0).norm() > TOL.state_trace {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = *hermitian_eig(&matrix)?.values.last().expect("nonempty spectrum");
        if min < -TOL.state_negativity {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        if min < -TOL.psd_clamp {
            log::warn!("density matrix has slightly negative eigenvalue {min:e}");
        }
        Ok(Self { space, matrix })
    }

    pub fn two_qubit(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(HilbertSpace::two_qubits(), matrix)
    }

    pub fn pure(space: HilbertSpace, psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(space, ComplexMatrix::projector(&psi))
    }

    /// Computational basis state from a label such as "01".
    pub fn basis(label: &str) -> Result<Self> {
        let idx = match label.trim_start_matches('|').trim_end_matches('>').trim_end_matches('⟩') {
            "00" => 0,
            "01" => 1,
            "10" => 2,
            "11" => 3,
            other => return Err(Error::InvalidState(format!("unknown basis label {other:?}"))),
        };
        let mut psi = vec![C64::new(0.0, 0.0); 4];
        psi[idx] = C64::new(1.0, 0.0);
        Self::pure(HilbertSpace::two_qubits(), &psi)
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { space, matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// The two-atom state (cavity traced out when present).
    pub fn atoms(&self) -> Result<DensityMatrix> {
        if !self.space.has_cavity() {
            return Ok(self.clone());
        }
        Self::new(HilbertSpace::two_qubits(), self.space.trace_out_cavity(&self.matrix)?)
    }

    /// Two-atom state ⊗ cavity vacuum.
    pub fn with_cavity_vacuum(&self, n_max: usize) -> Result<DensityMatrix> {
        if self.space.has_cavity() {
            return Err(Error::InvalidState("state already includes the cavity".into()));
        }
        let mut vac = ComplexMatrix::zeros(n_max + 1, n_max + 1);
        vac[(0, 0)] = C64::new(1.0, 0.0);
        Self::new(HilbertSpace::qubits_with_cavity(n_max), self.matrix.kron(&vac))
    }

    /// ρ → UρU†.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        check_unitary(u)?;
        let u = if u.rows() == self.space.dim() {
            u.clone()
        } else if self.space.has_cavity() && u.rows() == 4 {
            u.kron(&ComplexMatrix::identity(self.space.dims()[2]))
        } else {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: u.rows() });
        };
        Self::new(self.space.clone(), &(&u * &self.matrix) * &u.adjoint())
    }

    /// Mean cavity photon number, zero without a cavity.
    pub fn photon_number(&self) -> f64 {
        if !self.space.has_cavity() {
            return 0.0;
        }
        let n_max = self.space.dims()[2] - 1;
        let a = self.space.embed(&annihilation(n_max), 2).expect("cavity subsystem");
        (&(&a.adjoint() * &a) * &self.matrix).trace().re
    }
}

pub fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch { expected: u.rows(), found: u.cols() });
    }
    let residual = (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.rows()));
    if residual > TOL.unitary {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Single-qubit Pauli operators assembled from σ⁻ = |0⟩⟨1|, σ⁺ = |1⟩⟨0|:
/// σ_x = σ⁺ + σ⁻, σ_y = −i(σ⁺ − σ⁻), σ_z = σ⁺σ⁻ − σ⁻σ⁺.
pub fn pauli() -> [ComplexMatrix; 3] {
    let lo = qubit_lowering();
    let hi = lo.adjoint();
    let x = &hi + &lo;
    let y = (&hi - &lo).scale(C64::new(0.0, -1.0));
    let z = &(&hi * &lo) - &(&lo * &hi);
    [x, y, z]
}

/// [cos(θ/2)𝟙 + i sin(θ/2)σ_y]^{⊗2}|00⟩ as a density matrix.
pub fn rotated_initial_state(theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParams(format!("rotation angle {theta} outside [0, π]")));
    }
    let [_, sy, _] = pauli();
    let single = &ComplexMatrix::identity(2).scale_real((theta / 2.0).cos()) + &sy.scale(C64::new(0.0, (theta / 2.0).sin()));
    let rot = single.kron(&single);
    let mut ket = vec![C64::new(0.0, 0.0); 4];
    ket[0] = C64::new(1.0, 0.0);
    DensityMatrix::pure(HilbertSpace::two_qubits(), &rot.matvec(&ket)?)
}

/// U = (1/2)(σ_x + σ_z) ⊗ (𝟙 − iσ_y).
pub fn local_unitary_u() -> ComplexMatrix {
    let [sx, sy, sz] = pauli();
    let first = (&sx + &sz).scale_real(0.5);
    let second = &ComplexMatrix::identity(2) - &sy.scale(C64::new(0.0, 1.0));
    first.kron(&second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{free_concurrence, linear_entropy};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn validation_rejects_bad_states() {
        let bad_trace = ComplexMatrix::real_diag(&[0.5, 0.2, 0.2, 0.2]);
        assert!(matches!(DensityMatrix::two_qubit(bad_trace), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::real_diag(&[1.1, -0.1, 0.0, 0.0]);
        assert!(matches!(DensityMatrix::two_qubit(negative), Err(Error::InvalidState(_))));
        let mut non_herm = ComplexMatrix::real_diag(&[0.5, 0.5, 0.0, 0.0]);
        non_herm[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::two_qubit(non_herm).is_err());
        assert!(DensityMatrix::basis("2").is_err());
    }

    #[test]
    fn rotation_endpoints() {
        let r0 = rotated_initial_state(0.0).unwrap();
        assert!(r0.matrix().max_abs_diff(DensityMatrix::basis("00").unwrap().matrix()) < 1e-15);
        let half = rotated_initial_state(PI / 2.0).unwrap();
        // each atom (|0> + |1>)/√2, so every entry is 1/4
        let quarter = ComplexMatrix::from_fn(4, 4, |_, _| C64::new(0.25, 0.0));
        assert!(half.matrix().max_abs_diff(&quarter) < 1e-15);
        assert!(rotated_initial_state(4.0).is_err());
    }

    #[test]
    fn rotated_states_are_pure_and_separable() {
        for k in 0..=8 {
            let rho = rotated_initial_state(PI * k as f64 / 8.0).unwrap();
            assert!(linear_entropy(&rho).unwrap().abs() < 1e-12);
            assert!(free_concurrence(&rho).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn u_is_unitary_with_fixed_first_column() {
        let u = local_unitary_u();
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
        // U|00> = (1/2)(−|00> + |01> + |10> − |11>)
        let col = u.column(0);
        let expected = [-0.5, 0.5, 0.5, -0.5];
        for (z, e) in col.iter().zip(expected) {
            assert!((z - C64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = pauli();
        let i = C64::new(0.0, 1.0);
        // σ_x σ_y = i σ_z
        assert!((&x * &y).max_abs_diff(&z.scale(i)) < 1e-15);
        // σ_y = −i(σ+ − σ−) maps |0> to −i|1>
        assert_eq!(y[(1, 0)], C64::new(0.0, -1.0));
    }

    #[test]
    fn cavity_vacuum_round_trip() {
        let rho = DensityMatrix::pure(
            HilbertSpace::two_qubits(),
            &[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        let ext = rho.with_cavity_vacuum(3).unwrap();
        assert_eq!(ext.space().dim(), 16);
        assert_eq!(ext.photon_number(), 0.0);
        assert!(ext.atoms().unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }
}
