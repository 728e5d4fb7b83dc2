//! Liouvillian generators.
//!
//! Every channel uses the dissipator convention
//! D[A]ρ = 2AρA† − A†Aρ − ρA†A, so a channel `(rate, A)` moves population
//! at rate 2·rate. Cross terms c·(2AρB − BAρ − ρBA) carry the
//! phase-sensitive squeezed-reservoir correlations; they are not completely
//! positive on their own, only the total generator is.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linalg::{superop, ComplexMatrix, HilbertSpace, SparseMatrix};
use crate::params::{EffectiveParams, PhysicalParams, ReservoirParams};
use crate::tolerances::TOL;
use crate::{Error, Result};

/// Dissipation channel rate·D[jump].
#[derive(Clone, Debug)]
pub struct Channel {
    pub rate: f64,
    pub jump: ComplexMatrix,
}

/// Two-slot term coeff·(2·left·ρ·right − right·left·ρ − ρ·right·left).
#[derive(Clone, Debug)]
pub struct CrossTerm {
    pub coeff: C64,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

/// A Liouvillian: −i[H, ρ] + Σ channels + Σ cross terms.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub space: HilbertSpace,
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<Channel>,
    pub cross_terms: Vec<CrossTerm>,
}

/// D[A]ρ = 2AρA† − A†Aρ − ρA†A.
pub fn dissipator(a: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    two_slot(a, &a.adjoint(), rho)
}

/// 2AρB − BAρ − ρBA.
fn two_slot(a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let ba = b * a;
    let mut out = (&(a * rho) * b).scale_real(2.0);
    out = &out - &(&ba * rho);
    &out - &(rho * &ba)
}

fn two_slot_superop(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let ba = b * a;
    let mut out = superop::sandwich(a, b).scale_real(2.0);
    out = &out - &superop::left(&ba);
    &out - &superop::right(&ba)
}

impl GeneratorSpec {
    /// The generator that leaves every state unchanged ("all light off").
    pub fn zero(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self { space, hamiltonian: ComplexMatrix::zeros(d, d), channels: Vec::new(), cross_terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        let check = |m: &ComplexMatrix| {
            if m.rows() != d || m.cols() != d {
                Err(Error::DimensionMismatch { expected: d, found: m.rows() })
            } else {
                Ok(())
            }
        };
        check(&self.hamiltonian)?;
        let residual = self.hamiltonian.hermiticity_residual();
        if residual > TOL.hermitian_input {
            return Err(Error::NotHermitian { residual });
        }
        for ch in &self.channels {
            check(&ch.jump)?;
            if !(ch.rate >= 0.0) {
                return Err(Error::InvalidParams(format!("negative channel rate {}", ch.rate)));
            }
        }
        for ct in &self.cross_terms {
            check(&ct.left)?;
            check(&ct.right)?;
        }
        Ok(())
    }

    /// 𝓛(ρ) in matrix form.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).expect("dimension-checked").scale(C64::new(0.0, -1.0));
        for ch in self.channels.iter().filter(|c| c.rate != 0.0) {
            out += &dissipator(&ch.jump, rho).scale_real(ch.rate);
        }
        for ct in self.cross_terms.iter().filter(|c| c.coeff != C64::new(0.0, 0.0)) {
            out += &two_slot(&ct.left, &ct.right, rho).scale(ct.coeff);
        }
        out
    }

    /// d²×d² matrix with vec(𝓛ρ) = L·vec(ρ) under column stacking.
    pub fn superoperator(&self) -> ComplexMatrix {
        let h = &self.hamiltonian;
        let mut out = (&superop::left(h) - &superop::right(h)).scale(C64::new(0.0, -1.0));
        for ch in self.channels.iter().filter(|c| c.rate != 0.0) {
            out += &two_slot_superop(&ch.jump, &ch.jump.adjoint()).scale_real(ch.rate);
        }
        for ct in self.cross_terms.iter().filter(|c| c.coeff != C64::new(0.0, 0.0)) {
            out += &two_slot_superop(&ct.left, &ct.right).scale(ct.coeff);
        }
        out
    }

    pub fn sparse_superoperator(&self) -> SparseMatrix {
        let dense = self.superoperator();
        let scale = dense.max_abs();
        SparseMatrix::from_dense(&dense, 1e-300_f64.max(scale * 1e-18))
    }

    /// |tr 𝓛(ρ)|.
    pub fn trace_residual(&self, rho: &ComplexMatrix) -> f64 {
        self.apply(rho).trace().norm()
    }

    /// max |𝓛(ρ)† − 𝓛(ρ†)|.
    pub fn hermiticity_residual(&self, rho: &ComplexMatrix) -> f64 {
        self.apply(rho).adjoint().max_abs_diff(&self.apply(&rho.adjoint()))
    }
}

/// Single-atom and collective two-atom operators, σ⁻ = |0⟩⟨1|.
#[derive(Clone, Debug)]
pub struct CollectiveOps {
    pub sigma_minus: [ComplexMatrix; 2],
    pub sigma_plus: [ComplexMatrix; 2],
    /// S = (σ₁⁻ + σ₂⁻)/√2
    pub s: ComplexMatrix,
    /// P = σ₁⁻σ₁⁺ + σ₂⁻σ₂⁺
    pub p: ComplexMatrix,
}

pub fn qubit_lowering() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m
}

/// |k⟩⟨l| on one qubit.
pub fn qubit_op(k: usize, l: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(k, l)] = C64::new(1.0, 0.0);
    m
}

/// Cavity annihilation operator truncated at `n_max` photons.
pub fn annihilation(n_max: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

impl CollectiveOps {
    pub fn on(space: &HilbertSpace) -> Result<Self> {
        let lower = qubit_lowering();
        let raise = lower.adjoint();
        let sigma_minus = [space.embed(&lower, 0)?, space.embed(&lower, 1)?];
        let sigma_plus = [space.embed(&raise, 0)?, space.embed(&raise, 1)?];
        let s = (&sigma_minus[0] + &sigma_minus[1]).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        let p = &(&sigma_minus[0] * &sigma_plus[0]) + &(&sigma_minus[1] * &sigma_plus[1]);
        Ok(Self { sigma_minus, sigma_plus, s, p })
    }

    pub fn two_qubits() -> Self {
        Self::on(&HilbertSpace::two_qubits()).expect("two-qubit space is valid")
    }
}

/// Rates of the reduced two-atom master equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedRates {
    /// 2β²/κ; zero switches the amplitude coupling off.
    pub amplitude: f64,
    pub n: f64,
    pub m: C64,
    /// (η²/2κ)·n̄(n̄+1)
    pub phase_damping: f64,
}

impl From<&ReservoirParams> for ReducedRates {
    fn from(r: &ReservoirParams) -> Self {
        Self { amplitude: r.amplitude_rate(), n: r.n, m: r.m, phase_damping: r.phase_damping_rate() }
    }
}

impl ReducedRates {
    /// Pure phase damping at the given rate, amplitude coupling off.
    pub fn phase_damping_only(rate: f64) -> Self {
        Self { amplitude: 0.0, n: 0.0, m: C64::new(0.0, 0.0), phase_damping: rate }
    }
}

/// Squeezed-reservoir master equation for the two atoms:
/// A(N+1)D[S] + A·N·D[S†] − A·M·D'[S†] − A·M*·D'[S] + Γ_φ·D[P], A = 2β²/κ.
pub fn reduced_generator(r: &ReservoirParams) -> Result<GeneratorSpec> {
    r.validate()?;
    reduced_generator_from_rates(&ReducedRates::from(r))
}

pub fn reduced_generator_from_rates(rates: &ReducedRates) -> Result<GeneratorSpec> {
    if !(rates.amplitude >= 0.0) || !(rates.phase_damping >= 0.0) || !(rates.n >= 0.0) {
        return Err(Error::InvalidParams(format!("invalid reduced rates {rates:?}")));
    }
    if rates.m.norm_sqr() > rates.n * (rates.n + 1.0) * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::InvalidParams("|M|^2 exceeds N(N+1)".into()));
    }
    let ops = CollectiveOps::two_qubits();
    let s_dag = ops.s.adjoint();
    let a = rates.amplitude;
    let mut g = GeneratorSpec::zero(HilbertSpace::two_qubits());
    g.channels = vec![
        Channel { rate: a * (rates.n + 1.0), jump: ops.s.clone() },
        Channel { rate: a * rates.n, jump: s_dag.clone() },
        Channel { rate: rates.phase_damping, jump: ops.p.clone() },
    ];
    g.cross_terms = vec![
        CrossTerm { coeff: -a * rates.m, left: s_dag.clone(), right: s_dag },
        CrossTerm { coeff: -a * rates.m.conj(), left: ops.s.clone(), right: ops.s },
    ];
    Ok(g)
}

/// Which ground state each excited level scatters into, as fractions of its
/// total scattering rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branching {
    pub to_zero: f64,
    pub to_one: f64,
}

/// Effective spontaneous scattering through the virtually excited levels
/// r (entered from |1⟩), s and t (entered from |0⟩).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpontaneousSpec {
    /// Γ_j for j = r, s, t (population scattering rates).
    pub rates: [f64; 3],
    pub branching: [Branching; 3],
}

impl SpontaneousSpec {
    pub const DEFAULT_BRANCHING: [Branching; 3] = [
        Branching { to_zero: 0.5, to_one: 0.5 },
        Branching { to_zero: 0.5, to_one: 0.5 },
        Branching { to_zero: 1.0, to_one: 0.0 },
    ];

    /// Γ_j = γ_jΩ_j²/(2Δ_j²) with the default branching.
    pub fn from_physical(p: &PhysicalParams) -> Self {
        Self { rates: p.spontaneous_rates(), branching: Self::DEFAULT_BRANCHING }
    }

    pub fn validate(&self) -> Result<()> {
        for (rate, b) in self.rates.iter().zip(&self.branching) {
            let ok = *rate >= 0.0
                && (0.0..=1.0).contains(&b.to_zero)
                && (0.0..=1.0).contains(&b.to_one)
                && b.to_zero + b.to_one <= 1.0 + 1e-12;
            if !ok {
                return Err(Error::InvalidParams(format!("invalid spontaneous spec {self:?}")));
            }
        }
        Ok(())
    }

    /// Single-atom (rate, jump) pairs in the D[·] convention.
    fn single_atom_channels(&self) -> Vec<(f64, ComplexMatrix)> {
        // level r starts from |1>, levels s and t from |0>
        let start = [1, 0, 0];
        let mut out = Vec::new();
        for ((rate, b), from) in self.rates.iter().zip(&self.branching).zip(start) {
            for (frac, to) in [(b.to_zero, 0), (b.to_one, 1)] {
                if frac > 0.0 && *rate > 0.0 {
                    out.push((0.5 * rate * frac, qubit_op(to, from)));
                }
            }
        }
        out
    }
}

/// Default Fock truncation for the extended model.
pub const DEFAULT_N_MAX: usize = 8;

/// Two atoms ⊗ truncated cavity mode with the Raman couplings, Stark shifts,
/// thermal cavity damping and optional spontaneous scattering:
///
/// H = Σ_i [β_r(a†σ_i⁻ + aσ_i⁺) + β_s(e^{iφ}a†σ_i⁺ + e^{−iφ}aσ_i⁻)]
///     + Σ_i a†a(η_r|0_i⟩⟨0_i| + η_s|1_i⟩⟨1_i|),
/// cavity channels κ(1+n̄)D[a] + κn̄D[a†].
pub fn extended_generator(
    e: &EffectiveParams,
    kappa: f64,
    n_bar: f64,
    phi: f64,
    n_max: usize,
    spon: Option<&SpontaneousSpec>,
) -> Result<GeneratorSpec> {
    if n_max < 2 {
        return Err(Error::InvalidParams(format!("n_max must be >= 2, got {n_max}")));
    }
    if !(kappa > 0.0) || !(n_bar >= 0.0) {
        return Err(Error::InvalidParams(format!("need kappa > 0 and n_bar >= 0, got {kappa}, {n_bar}")));
    }
    let estimate = n_bar + 4.0 * (e.beta_r.abs() + e.beta_s.abs()).powi(2) / kappa.powi(2);
    let half = n_max as f64 / 2.0;
    if estimate > half {
        return Err(Error::TruncationTooSmall { estimate, half });
    }

    let space = HilbertSpace::qubits_with_cavity(n_max);
    let ops = CollectiveOps::on(&space)?;
    let a = space.embed(&annihilation(n_max), 2)?;
    let a_dag = a.adjoint();
    let number = &a_dag * &a;
    let phase = C64::from_polar(1.0, phi);

    let d = space.dim();
    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..2 {
        let (lo, hi) = (&ops.sigma_minus[i], &ops.sigma_plus[i]);
        h += &(&(&a_dag * lo) + &(&a * hi)).scale_real(e.beta_r);
        h += &(&(&a_dag * hi).scale(phase) + &(&a * lo).scale(phase.conj())).scale_real(e.beta_s);
        let stark = &space.embed(&qubit_op(0, 0), i)?.scale_real(e.eta_r) + &space.embed(&qubit_op(1, 1), i)?.scale_real(e.eta_s);
        h += &(&number * &stark);
    }

    let mut channels = vec![
        Channel { rate: kappa * (1.0 + n_bar), jump: a.clone() },
        Channel { rate: kappa * n_bar, jump: a_dag },
    ];
    if let Some(spec) = spon {
        spec.validate()?;
        for (rate, op) in spec.single_atom_channels() {
            for atom in 0..2 {
                channels.push(Channel { rate, jump: space.embed(&op, atom)? });
            }
        }
    }
    let g = GeneratorSpec { space, hamiltonian: h, channels, cross_terms: Vec::new() };
    g.validate()?;
    Ok(g)
}
