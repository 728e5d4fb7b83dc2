//! Column-stacking vectorization: vec(ρ)[j·d + i] = ρ[i][j], under which
//! vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::{Error, Result};

pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    let (r, c) = (rho.rows(), rho.cols());
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn devectorize(v: &[C64], d: usize) -> Result<ComplexMatrix> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: v.len() });
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[j * d + i]))
}

/// Superoperator of ρ ↦ AρB.
pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(a)
}

/// Superoperator of ρ ↦ Aρ.
pub fn left(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(a.cols()).kron(a)
}

/// Superoperator of ρ ↦ ρB.
pub fn right(b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(&ComplexMatrix::identity(b.rows()))
}

/// Compressed-sparse-row matrix used for matrix-vector products with large
/// superoperators.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    /// Keeps entries with modulus above `drop_below`.
    pub fn from_dense(m: &ComplexMatrix, drop_below: f64) -> Self {
        assert!(m.is_square());
        let dim = m.rows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                if z.norm() > drop_below {
                    col_idx.push(j);
                    values.push(z);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { dim, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn mul_vec_into(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            *o = self.values[lo..hi].iter().zip(&self.col_idx[lo..hi]).map(|(v, &j)| v * x[j]).sum();
        }
    }
}
