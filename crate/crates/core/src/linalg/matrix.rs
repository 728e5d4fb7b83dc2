use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
        }
        Self::from_vec(n, m, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    /// Projector |ψ⟩⟨ψ|.
    pub fn projector(psi: &[C64]) -> Self {
        Self::outer(psi, psi)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |A − A†| entry.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// max |A − B| entry; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product A ⊗ B.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Commutator AB − BA.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Solves A X = B by LU decomposition with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() || self.rows != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: rhs.rows });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap_or(k);
            if a[(pivot, k)].norm() == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != k {
                for j in 0..n {
                    a.data.swap(k * n + j, pivot * n + j);
                }
                for j in 0..b.cols {
                    b.data.swap(k * b.cols + j, pivot * b.cols + j);
                }
            }
            let akk = a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / akk;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                a[(i, k)] = f;
                for j in (k + 1)..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
                for j in 0..b.cols {
                    let t = b[(k, j)];
                    b[(i, j)] -= f * t;
                }
            }
        }
        for j in 0..b.cols {
            for i in (0..n).rev() {
                let mut s = b[(i, j)];
                for k in (i + 1)..n {
                    s -= a[(i, k)] * b[(k, j)];
                }
                b[(i, j)] = s / a[(i, i)];
            }
        }
        Ok(b)
    }

    /// Expectation ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, psi: &[C64]) -> Result<C64> {
        let a_psi = self.matvec(psi)?;
        Ok(psi.iter().zip(&a_psi).map(|(p, q)| p.conj() * q).sum())
    }

    /// Same matrix with rows and columns reordered: out[i][j] = self[perm[i]][perm[j]].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Panicking product for operator algebra where shapes are known to agree.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in matrix product")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn kron_identities_give_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_lowering_on_first_atom() {
        // |10> has index 2 in (|00>,|01>,|10>,|11>)
        let op = sigma_minus().kron(&ComplexMatrix::identity(2));
        let mut ket = vec![c(0.0, 0.0); 4];
        ket[2] = c(1.0, 0.0);
        let out = op.matvec(&ket).unwrap();
        assert_eq!(out, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn kron_trace_factorizes() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.3, -1.2), c(2.0, 0.5)], vec![c(-0.7, 0.1), c(1.1, 0.9)]])
            .unwrap();
        let b = ComplexMatrix::from_rows(&[vec![c(-2.0, 0.4), c(0.2, 0.2)], vec![c(1.0, -3.0), c(0.5, -0.25)]])
            .unwrap();
        // direct multiplication: (0.3-1.2i + 1.1+0.9i)(-2+0.4i + 0.5-0.25i) = (1.4-0.3i)(-1.5+0.15i)
        let expected = c(1.4, -0.3) * c(-1.5, 0.15);
        assert!((a.kron(&b).trace() - expected).norm() < 1e-14);
    }

    #[test]
    fn double_adjoint_is_exact() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 * 0.37 - 1.0, j as f64 + 0.11));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 1e-3), c(2.0, 0.0), c(1.0, 1.0)],
            vec![c(3.0, -1.0), c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(-1.0, 2.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let x = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 - j as f64, 0.5 * j as f64));
        let b = &a * &x;
        assert!(a.solve(&b).unwrap().max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn singular_solve_errors() {
        let a = ComplexMatrix::zeros(2, 2);
        assert!(matches!(a.solve(&ComplexMatrix::identity(2)), Err(Error::Singular)));
    }

    #[test]
    fn mismatched_product_errors() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
    }
}
