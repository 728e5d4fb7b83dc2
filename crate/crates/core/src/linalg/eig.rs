//! Eigenproblems: cyclic Jacobi for Hermitian matrices, plus general
//! spectra and singular values (nalgebra) for superoperator diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::tolerances::TOL;
use crate::{Error, Result};

/// Eigendecomposition A = V diag(values) V† with values sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 100;

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let residual = a.hermiticity_residual();
    if residual > TOL.hermitian_input {
        return Err(Error::NotHermitian { residual });
    }
    let n = a.rows();
    // symmetrize so the iteration sees an exactly Hermitian matrix
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(y, y)].re.total_cmp(&m[(x, x)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation zeroing m[p][q]: M ← J†MJ, V ← VJ with
/// J_pp = J_qq = c, J_pq = s·e^{iα}, J_qp = −s·e^{−iα}, α = arg m[p][q].
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let n = m.rows();
    let phase = apq / abs;
    let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * abs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let jpq = phase * s;
    let jqp = -phase.conj() * s;

    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * c + akq * jqp;
        m[(k, q)] = akp * jpq + akq * c;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = apk * c + aqk * jqp.conj();
        m[(q, k)] = apk * jpq.conj() + aqk * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

/// Hermitian square root of a positive-semidefinite matrix. Eigenvalues in
/// [−1e−9, 0) are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -TOL.psd_clamp {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let roots: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(reassemble(&eig.vectors, &roots))
}

/// V diag(values) V†.
pub fn reassemble(vectors: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = vectors.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..values.len()).map(|k| vectors[(i, k)] * values[k] * vectors[(j, k)].conj()).sum()
    })
}

fn to_nalgebra(a: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// All eigenvalues of a general square matrix (complex Schur form).
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let base = to_nalgebra(a);
    let n = base.nrows();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    // The QR sweep can stall on exactly-zero diagonals and clustered
    // spectra; a real shift and then a looser deflation test usually rescue it.
    for (shift, eps) in [(0.0, f64::EPSILON), (scale, f64::EPSILON), (scale, 1e-13), (0.5 * scale, 1e-12)] {
        let shifted = &base + nalgebra::DMatrix::<C64>::identity(n, n) * C64::new(shift, 0.0);
        if let Some(values) = nalgebra::Schur::try_new(shifted, eps, 10_000).and_then(|s| s.eigenvalues()) {
            return Ok(values.iter().map(|z| z - shift).collect());
        }
        log::debug!("Schur attempt with shift {shift:e}, eps {eps:e} failed");
    }
    Err(Error::NoConvergence { detail: "Schur iteration did not converge".into() })
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Orthonormal basis of the numerical null space, using singular values
/// below `rel_threshold`·(largest) as zero.
pub fn null_space(a: &ComplexMatrix, rel_threshold: f64) -> Result<Vec<Vec<C64>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let svd = nalgebra::SVD::try_new(to_nalgebra(a), false, true, f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence { detail: "SVD did not converge".into() })?;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let largest = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let n = a.cols();
    let mut basis = Vec::new();
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= rel_threshold * largest {
            basis.push((0..n).map(|j| v_t[(k, j)].conj()).collect());
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(seed: &[f64]) -> ComplexMatrix {
        let n = 4;
        let g = ComplexMatrix::from_fn(n, n, |i, j| C64::new(seed[(i * n + j) % seed.len()], seed[(j * n + i + 3) % seed.len()]));
        &g + &g.adjoint()
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let e = hermitian_eig(&ComplexMatrix::real_diag(&[1.0, 3.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&sx).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vectors.column(0);
        // (|0> + |1>)/√2 up to a global phase
        let overlap: C64 = v0.iter().map(|z| z.conj() * h).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        let v1 = e.vectors.column(1);
        let overlap: C64 = v1[0].conj() * h - v1[1].conj() * h;
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!(psd_sqrt(&i4).unwrap().max_abs_diff(&i4) < 1e-14);
        let d = psd_sqrt(&ComplexMatrix::real_diag(&[4.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::real_diag(&[2.0, 0.0, 0.0, 0.0])) < 1e-14);
        assert!(matches!(psd_sqrt(&ComplexMatrix::real_diag(&[1.0, -0.1])), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 1.0), C64::new(5.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(-2.0, 0.5)],
        ])
        .unwrap();
        let mut ev = general_eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert!((ev[0] - C64::new(-2.0, 0.5)).norm() < 1e-12);
        assert!((ev[1] - C64::new(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let ns = null_space(&a, 1e-10).unwrap();
        assert_eq!(ns.len(), 1);
        let r = a.matvec(&ns[0]).unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }

    proptest! {
        #[test]
        fn reconstruction_and_unitarity(seed in proptest::collection::vec(-2.0f64..2.0, 16..32)) {
            let a = random_hermitian(&seed);
            let e = hermitian_eig(&a).unwrap();
            let rec = reassemble(&e.vectors, &e.values);
            prop_assert!(rec.max_abs_diff(&a) <= 1e-9);
            let vv = &e.vectors.adjoint() * &e.vectors;
            prop_assert!(vv.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-9);
            let sum: f64 = e.values.iter().sum();
            prop_assert!((sum - a.trace().re).abs() <= 1e-9);
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn sqrt_squares_back(seed in proptest::collection::vec(-2.0f64..2.0, 16..32)) {
            let g = random_hermitian(&seed);
            let a = &g * &g.adjoint();
            let b = psd_sqrt(&a).unwrap();
            prop_assert!(b.hermiticity_residual() < 1e-10);
            prop_assert!((&b * &b).max_abs_diff(&a) <= 1e-8);
        }
    }
}
