//! Mixedness and entanglement measures for two-qubit states, the Werner,
//! MEMS and thermal reference curves of the S_L–C_free plane, and a seeded
//! Ginibre sampler.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dynamics::DensityMatrix;
use crate::linalg::{hermitian_eig, psd_sqrt, ComplexMatrix, HilbertSpace};
use crate::tolerances::TOL;
use crate::{Error, Result};

fn two_qubit_matrix(rho: &DensityMatrix) -> Result<&ComplexMatrix> {
    if rho.space().dim() != 4 {
        return Err(Error::InvalidState(format!("expected a two-qubit state, got dimension {}", rho.space().dim())));
    }
    Ok(rho.matrix())
}

/// σ_y ⊗ σ_y (real, and the same for either sign convention of σ_y).
fn spin_flip() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
    .expect("4x4")
}

/// λ₁ ≥ … ≥ λ₄, the square roots of the spectrum of √ρ ρ̃ √ρ.
///
/// With X = √ρ(σ_y⊗σ_y)√ρ*, XX† = √ρ ρ̃ √ρ, so the λ are the singular values
/// of X. They are read off as the positive half of the spectrum of the
/// Hermitian dilation [[0, X], [X†, 0]], which keeps small λ accurate to
/// roundoff instead of to its square root.
pub fn concurrence_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = two_qubit_matrix(rho)?;
    let root = psd_sqrt(m)?;
    let x = &(&root * &spin_flip()) * &root.conj();
    let x_dag = x.adjoint();
    let dilation = ComplexMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, false) => x[(i, j - 4)],
        (false, true) => x_dag[(i - 4, j)],
        _ => C64::new(0.0, 0.0),
    });
    let values = hermitian_eig(&dilation)?.values;
    let mut out = [0.0; 4];
    for (o, &v) in out.iter_mut().zip(&values) {
        if v < -TOL.concurrence_clamp {
            return Err(Error::InvalidState(format!("negative concurrence spectrum value {v:e}")));
        }
        *o = v.max(0.0);
    }
    Ok(out)
}

/// C_free = λ₁ − λ₂ − λ₃ − λ₄, without the max(0, ·) clamp of the concurrence.
pub fn free_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let l = concurrence_spectrum(rho)?;
    Ok(l[0] - l[1] - l[2] - l[3])
}

/// Standard concurrence max(0, C_free).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(free_concurrence(rho)?.max(0.0))
}

/// S_L = (4/3)[1 − Tr ρ²]; the 4/3 normalization is the two-qubit one.
pub fn linear_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(4.0 / 3.0 * (1.0 - purity(rho.matrix())))
}

/// Tr ρ² for Hermitian ρ.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    /// φ± = (|00⟩ ± |11⟩)/√2, ψ± = (|01⟩ ± |10⟩)/√2.
    pub fn ket(self) -> Vec<C64> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => vec![h, z, z, h],
            BellState::PhiMinus => vec![h, z, z, -h],
            BellState::PsiPlus => vec![z, h, h, z],
            BellState::PsiMinus => vec![z, h, -h, z],
        }
    }
}

/// ⟨ψ|ρ|ψ⟩ for a normalized target.
pub fn fidelity_with(rho: &DensityMatrix, target: &[C64]) -> Result<f64> {
    let norm: f64 = target.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("target state has norm² {norm}")));
    }
    Ok(rho.matrix().expectation(target)?.re)
}

pub fn bell_fidelity(rho: &DensityMatrix, bell: BellState) -> Result<f64> {
    fidelity_with(rho, &bell.ket())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Werner,
    Mems,
    Thermal,
}

impl CurveKind {
    pub fn label(self) -> &'static str {
        match self {
            CurveKind::Werner => "werner",
            CurveKind::Mems => "mems",
            CurveKind::Thermal => "thermal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Family parameter: ξ (Werner), C (MEMS) or ζ (thermal).
    pub param: f64,
    pub s_l: f64,
    pub c_free: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

fn unit_grid(samples: usize) -> Result<impl Iterator<Item = f64>> {
    if samples < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 curve samples, got {samples}")));
    }
    Ok((0..samples).map(move |k| k as f64 / (samples - 1) as f64))
}

fn trace_curve(kind: CurveKind, samples: usize, state: impl Fn(f64) -> Result<DensityMatrix>) -> Result<PlaneCurve> {
    let points = unit_grid(samples)?
        .map(|param| {
            let rho = state(param)?;
            Ok(CurvePoint { param, s_l: linear_entropy(&rho)?, c_free: free_concurrence(&rho)? })
        })
        .collect::<Result<_>>()?;
    Ok(PlaneCurve { kind, points })
}

/// ρ_W = ξ|φ⁺⟩⟨φ⁺| + (1 − ξ)𝟙/4.
pub fn werner_state(xi: f64) -> Result<DensityMatrix> {
    let bell = ComplexMatrix::projector(&BellState::PhiPlus.ket());
    let m = &bell.scale_real(xi) + &ComplexMatrix::identity(4).scale_real((1.0 - xi) / 4.0);
    DensityMatrix::two_qubit(m)
}

/// Munro et al. maximally entangled mixed state with concurrence C.
pub fn mems_state(c: f64) -> Result<DensityMatrix> {
    let g = if c >= 2.0 / 3.0 { c / 2.0 } else { 1.0 / 3.0 };
    let m = ComplexMatrix::from_real_rows(&[
        &[g, 0.0, 0.0, c / 2.0],
        &[0.0, 1.0 - 2.0 * g, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[c / 2.0, 0.0, 0.0, g],
    ])?;
    DensityMatrix::two_qubit(m)
}

/// ρ_th = [ζ|0⟩⟨0| + (1 − ζ)|1⟩⟨1|]^{⊗2}.
pub fn thermal_state(zeta: f64) -> Result<DensityMatrix> {
    let single = ComplexMatrix::real_diag(&[zeta, 1.0 - zeta]);
    DensityMatrix::two_qubit(single.kron(&single))
}

pub fn werner_curve(samples: usize) -> Result<PlaneCurve> {
    trace_curve(CurveKind::Werner, samples, werner_state)
}

pub fn mems_curve(samples: usize) -> Result<PlaneCurve> {
    trace_curve(CurveKind::Mems, samples, mems_state)
}

pub fn thermal_curve(samples: usize) -> Result<PlaneCurve> {
    trace_curve(CurveKind::Thermal, samples, thermal_state)
}

/// Concurrence of the MEMS family at a given linear entropy (zero beyond
/// S_L = 8/9, where every state is separable).
pub fn mems_concurrence_at(s_l: f64) -> f64 {
    let p = 1.0 - 0.75 * s_l;
    if p >= 5.0 / 9.0 {
        // C ≥ 2/3 branch: Tr ρ² = C² + (1 − C)²
        0.5 * (1.0 + (2.0 * p - 1.0).max(0.0).sqrt())
    } else if p > 1.0 / 3.0 {
        // C < 2/3 branch: Tr ρ² = 1/3 + C²/2
        (2.0 * (p - 1.0 / 3.0)).max(0.0).sqrt()
    } else {
        0.0
    }
}

/// Ginibre draw GG†/tr(GG†) with standard complex Gaussian entries.
pub fn random_density_matrix(dim: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_density_matrix_from(dim, &mut rng)
}

pub fn random_density_matrix_from<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParams(format!("random state dimension must be >= 2, got {dim}")));
    }
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let m = w.scale_real(1.0 / tr);
    // exact Hermitian symmetrization
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let space = if dim == 4 { HilbertSpace::two_qubits() } else { HilbertSpace::new(vec![dim])? };
    DensityMatrix::new(space, m)
}
