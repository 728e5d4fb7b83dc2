//! Minimal dense complex linear algebra.

mod eig;
mod expm;
mod matrix;
mod space;
pub mod superop;

pub use eig::{general_eigenvalues, hermitian_eig, null_space, psd_sqrt, reassemble, singular_values, HermitianEigen};
pub use expm::expm;
pub use matrix::ComplexMatrix;
pub use space::{reverse_two_qubit_basis, HilbertSpace, REVERSED_TWO_QUBIT_ORDER};
pub use superop::{devectorize, vectorize, SparseMatrix};
