//! Composite Hilbert-space bookkeeping.
//!
//! Subsystem 0 is atom 1, subsystem 1 is atom 2 and an optional subsystem 2
//! is the cavity Fock space truncated at `n_max` photons. Within each qubit
//! the ordering is (|0⟩, |1⟩) and the composite index is big-endian over the
//! dims list, so the two-qubit basis reads (|00⟩, |01⟩, |10⟩, |11⟩).

use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParams(format!("invalid subsystem dims {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn two_qubits() -> Self {
        Self { dims: vec![2, 2] }
    }

    pub fn qubits_with_cavity(n_max: usize) -> Self {
        Self { dims: vec![2, 2, n_max + 1] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn has_cavity(&self) -> bool {
        self.dims.len() == 3
    }

    /// Lifts a single-subsystem operator onto the full space.
    pub fn embed(&self, op: &ComplexMatrix, subsystem: usize) -> Result<ComplexMatrix> {
        let d = *self.dims.get(subsystem).ok_or(Error::DimensionMismatch {
            expected: self.dims.len(),
            found: subsystem,
        })?;
        if op.rows() != d || op.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.rows() });
        }
        let mut out = ComplexMatrix::identity(1);
        for (k, &dk) in self.dims.iter().enumerate() {
            let factor = if k == subsystem { op.clone() } else { ComplexMatrix::identity(dk) };
            out = out.kron(&factor);
        }
        Ok(out)
    }

    /// Traces out the cavity, leaving the two-atom state.
    pub fn trace_out_cavity(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !self.has_cavity() {
            return Ok(rho.clone());
        }
        let n = self.dims[2];
        if rho.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rho.rows() });
        }
        Ok(ComplexMatrix::from_fn(4, 4, |i, j| (0..n).map(|k| rho[(i * n + k, j * n + k)]).sum()))
    }
}

/// Permutation between the internal order (|00⟩,|01⟩,|10⟩,|11⟩) and the
/// reversed order (|11⟩,|10⟩,|01⟩,|00⟩); it is its own inverse.
pub const REVERSED_TWO_QUBIT_ORDER: [usize; 4] = [3, 2, 1, 0];

/// Converts a two-qubit matrix written in the reversed basis
/// (|11⟩,|10⟩,|01⟩,|00⟩) into the internal basis, and back.
pub fn reverse_two_qubit_basis(m: &ComplexMatrix) -> ComplexMatrix {
    m.permuted(&REVERSED_TWO_QUBIT_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn total_dimension_is_product() {
        assert_eq!(HilbertSpace::qubits_with_cavity(8).dim(), 36);
        assert_eq!(HilbertSpace::two_qubits().dim(), 4);
        assert!(HilbertSpace::new(vec![2, 0]).is_err());
    }

    #[test]
    fn reversal_maps_eleven_to_last() {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 3)] = C64::new(0.5, 0.1); // <11|..|00> in reversed basis
        let internal = reverse_two_qubit_basis(&m);
        assert_eq!(internal[(3, 0)], C64::new(0.5, 0.1));
        assert_eq!(reverse_two_qubit_basis(&internal), m);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let space = HilbertSpace::qubits_with_cavity(2);
        let atoms = ComplexMatrix::real_diag(&[0.1, 0.2, 0.3, 0.4]);
        let cav = ComplexMatrix::real_diag(&[0.5, 0.25, 0.25]);
        let reduced = space.trace_out_cavity(&atoms.kron(&cav)).unwrap();
        assert!(reduced.max_abs_diff(&atoms) < 1e-15);
    }
}
