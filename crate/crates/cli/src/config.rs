//! JSON run configuration and its resolution into core parameter types.

use std::f64::consts::PI;
use std::path::Path;

use resq_core::dynamics::{local_unitary_u, rotated_initial_state, DensityMatrix, SamplingPolicy, Spacing};
use resq_core::generators::{extended_generator, reduced_generator, GeneratorSpec, SpontaneousSpec, DEFAULT_N_MAX};
use resq_core::linalg::{ComplexMatrix, HilbertSpace};
use resq_core::params::{
    effective_from_physical, mhz, reservoir_from_effective, solve_omega_t, EffectiveParams, PhysicalParams, ReservoirParams,
};
use resq_core::C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Frequencies are entered as ν in MHz and converted to ω = 2πν.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Units {
    #[serde(rename = "MHz")]
    Mhz,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalInput {
    pub g_r: f64,
    pub g_s: f64,
    pub omega_r: f64,
    pub omega_s: f64,
    /// Solved from the resonance condition when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_t: Option<f64>,
    pub delta_r: f64,
    pub delta_s: f64,
    pub delta_t: f64,
    pub kappa: f64,
    pub gamma_r: f64,
    pub gamma_s: f64,
    pub gamma_t: f64,
    #[serde(default)]
    pub n_bar: f64,
    /// Laser phase difference in radians.
    #[serde(default = "default_phi")]
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveInput {
    pub beta_r: f64,
    pub beta_s: f64,
    #[serde(default)]
    pub eta_r: f64,
    #[serde(default)]
    pub eta_s: f64,
    pub kappa: f64,
    #[serde(default)]
    pub n_bar: f64,
    #[serde(default = "default_phi")]
    pub phi: f64,
}

/// Dimensionless reservoir with β² = κ = 1, so time is τ directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirInput {
    pub n: f64,
    /// |M|²/[N(N+1)], 1 for ideal squeezing.
    #[serde(default = "one")]
    pub m_fraction: f64,
    #[serde(default = "default_phi")]
    pub phi: f64,
    /// η² in units of β².
    #[serde(default)]
    pub eta_sq: f64,
    #[serde(default)]
    pub n_bar: f64,
}

fn default_phi() -> f64 {
    PI
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    #[default]
    Reduced,
    Extended {
        #[serde(default = "default_n_max")]
        n_max: usize,
        #[serde(default)]
        spontaneous: bool,
    },
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialConfig {
    /// "00", "01", "10" or "11".
    Ket(String),
    /// Product rotation angle θ ∈ [0, π].
    Theta(f64),
    /// Row-major [re, im] pairs.
    Matrix(Vec<Vec<[f64; 2]>>),
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::Ket("00".into())
    }
}

impl InitialConfig {
    pub fn state(&self) -> Result<DensityMatrix, CliError> {
        Ok(match self {
            InitialConfig::Ket(label) => DensityMatrix::basis(label)?,
            InitialConfig::Theta(theta) => rotated_initial_state(*theta)?,
            InitialConfig::Matrix(rows) => {
                let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect()).collect();
                DensityMatrix::two_qubit(ComplexMatrix::from_rows(&rows)?)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentConfig {
    /// The configured reservoir drive.
    Evolve {
        duration_tau: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    /// All light off.
    Freeze {
        duration_tau: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    /// Amplitude coupling off, phase damping at (η²/2κ)n̄(n̄+1) with η² in units of β².
    PhaseDecay {
        duration_tau: f64,
        eta_sq: f64,
        n_bar: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    /// Instantaneous local unitary; only the named gate "U" is built in.
    Unitary {
        gate: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    SetState {
        state: InitialConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub count: usize,
    pub spacing: Spacing,
    pub first_tau: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        let p = SamplingPolicy::default();
        Self { count: p.count, spacing: p.spacing, first_tau: p.first_tau }
    }
}

impl SamplingConfig {
    pub fn policy(&self) -> SamplingPolicy {
        SamplingPolicy { count: self.count, spacing: self.spacing, first_tau: self.first_tau, ..Default::default() }
    }
}

/// Steady states over |M|² ∈ [0, N(N+1)] for each N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadySweep {
    pub n: Vec<f64>,
    pub m_points: usize,
    #[serde(default = "default_phi")]
    pub phi: f64,
}

/// Grid of (N, |M|² fraction, τ, θ) for the scan command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanGrid {
    pub n: Vec<f64>,
    pub m_fraction: Vec<f64>,
    pub tau: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(default = "default_phi")]
    pub phi: f64,
}

impl ScanGrid {
    pub fn size(&self) -> usize {
        [self.n.len(), self.m_fraction.len(), self.tau.len(), self.theta.len()].iter().fold(1usize, |a, &b| a.saturating_mul(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective: Option<EffectiveInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reservoir: Option<ReservoirInput>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub protocol: Vec<SegmentConfig>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadySweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanGrid>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", cfg.schema_version)));
        }
        let sources = [cfg.physical.is_some(), cfg.effective.is_some(), cfg.reservoir.is_some()].iter().filter(|&&b| b).count();
        if sources != 1 {
            return Err(CliError::Config("exactly one of physical, effective or reservoir must be given".into()));
        }
        Ok(cfg)
    }

    /// SHA-256 of the canonical (re-serialized) configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn resolve(&self) -> Result<System, CliError> {
        let model = self.model.clone();
        if let Some(p) = &self.physical {
            let (params, solved) = p.to_params()?;
            let effective = effective_from_physical(&params)?;
            let reservoir = reservoir_from_effective(&effective, params.n_bar, params.phi, params.kappa)?;
            let phi = params.phi;
            return Ok(System { reservoir, effective: Some(effective), physical: Some(params), omega_t_solved: solved, phi, model });
        }
        if let Some(e) = &self.effective {
            let effective =
                EffectiveParams { beta_r: mhz(e.beta_r), beta_s: mhz(e.beta_s), eta_r: mhz(e.eta_r), eta_s: mhz(e.eta_s) };
            let reservoir = reservoir_from_effective(&effective, e.n_bar, e.phi, mhz(e.kappa))?;
            return Ok(System { reservoir, effective: Some(effective), physical: None, omega_t_solved: None, phi: e.phi, model });
        }
        let r = self.reservoir.as_ref().expect("validated source");
        let reservoir = ReservoirParams::from_squeezing(r.n, r.m_fraction, r.phi)?.with_phase_damping(r.eta_sq, r.n_bar)?;
        Ok(System { reservoir, effective: None, physical: None, omega_t_solved: None, phi: r.phi, model })
    }
}

impl PhysicalInput {
    /// Converted parameters and, when Ω_t was absent, the solved value (rad/s).
    pub fn to_params(&self) -> Result<(PhysicalParams, Option<f64>), CliError> {
        let mut p = PhysicalParams {
            g_r: mhz(self.g_r),
            g_s: mhz(self.g_s),
            omega_r: mhz(self.omega_r),
            omega_s: mhz(self.omega_s),
            omega_t: mhz(self.omega_t.unwrap_or(0.0)),
            delta_r: mhz(self.delta_r),
            delta_s: mhz(self.delta_s),
            delta_t: mhz(self.delta_t),
            kappa: mhz(self.kappa),
            gamma_r: mhz(self.gamma_r),
            gamma_s: mhz(self.gamma_s),
            gamma_t: mhz(self.gamma_t),
            n_bar: self.n_bar,
            phi: self.phi,
        };
        p.validate()?;
        let solved = match self.omega_t {
            Some(_) => None,
            None => {
                let w = solve_omega_t(&p)?;
                p.omega_t = w;
                Some(w)
            }
        };
        Ok((p, solved))
    }
}

/// A configuration resolved to core types.
#[derive(Clone, Debug)]
pub struct System {
    pub reservoir: ReservoirParams,
    pub effective: Option<EffectiveParams>,
    pub physical: Option<PhysicalParams>,
    pub omega_t_solved: Option<f64>,
    pub phi: f64,
    pub model: ModelConfig,
}

impl System {
    /// τ per unit of generator time (β²/κ).
    pub fn tau_per_time(&self) -> f64 {
        self.reservoir.tau_from_time(1.0)
    }

    pub fn is_dimensionless(&self) -> bool {
        self.effective.is_none()
    }

    pub fn space(&self) -> HilbertSpace {
        match self.model {
            ModelConfig::Reduced => HilbertSpace::two_qubits(),
            ModelConfig::Extended { n_max, .. } => HilbertSpace::qubits_with_cavity(n_max),
        }
    }

    pub fn drive(&self) -> Result<GeneratorSpec, CliError> {
        match self.model {
            ModelConfig::Reduced => Ok(reduced_generator(&self.reservoir)?),
            ModelConfig::Extended { n_max, spontaneous } => {
                let e = self.effective.as_ref().ok_or_else(|| CliError::Config("the extended model needs physical or effective parameters".into()))?;
                let spon = match (spontaneous, &self.physical) {
                    (false, _) => None,
                    (true, Some(p)) => Some(SpontaneousSpec::from_physical(p)),
                    (true, None) => return Err(CliError::Config("spontaneous emission needs physical parameters".into())),
                };
                let r = &self.reservoir;
                Ok(extended_generator(e, r.kappa, r.n_bar, self.phi, n_max, spon.as_ref())?)
            }
        }
    }

    /// Phase damping alone at (η²/2κ)n̄(n̄+1), η² in units of β², on the model's space.
    pub fn phase_decay(&self, eta_sq: f64, n_bar: f64) -> Result<GeneratorSpec, CliError> {
        if !(eta_sq >= 0.0) || !(n_bar >= 0.0) {
            return Err(CliError::Config("phase_decay needs eta_sq >= 0 and n_bar >= 0".into()));
        }
        if self.model != ModelConfig::Reduced {
            return Err(CliError::Config("phase_decay segments are only available for the reduced model".into()));
        }
        let rate_tau = eta_sq / 2.0 * n_bar * (n_bar + 1.0);
        let rates = resq_core::generators::ReducedRates::phase_damping_only(rate_tau * self.tau_per_time());
        Ok(resq_core::generators::reduced_generator_from_rates(&rates)?)
    }

    pub fn initial_state(&self, initial: &InitialConfig) -> Result<DensityMatrix, CliError> {
        let rho = initial.state()?;
        Ok(match self.model {
            ModelConfig::Reduced => rho,
            ModelConfig::Extended { n_max, .. } => rho.with_cavity_vacuum(n_max)?,
        })
    }

    /// 20 periods of the slowest reservoir rate, in τ.
    pub fn settling_tau(&self) -> f64 {
        let r = &self.reservoir;
        20.0 / (4.0 * (2.0 * r.n - 2.0 * r.m.norm() + 1.0))
    }
}

pub fn named_unitary(gate: &str) -> Result<ComplexMatrix, CliError> {
    match gate {
        "U" => Ok(local_unitary_u()),
        "I" => Ok(ComplexMatrix::identity(4)),
        other => Err(CliError::Config(format!("unknown gate {other:?} (known: U, I)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 1.0}}"#;

    #[test]
    fn minimal_config_defaults() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.model, ModelConfig::Reduced);
        assert_eq!(cfg.initial, InitialConfig::Ket("00".into()));
        assert_eq!(cfg.sampling.count, 200);
        let sys = cfg.resolve().unwrap();
        assert!((sys.reservoir.m.norm_sqr() - 2.0).abs() < 1e-12);
        assert_eq!(sys.tau_per_time(), 1.0);
    }

    #[test]
    fn rejects_two_sources_and_bad_units() {
        let both = r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 1.0},
            "effective": {"beta_r": 1.0, "beta_s": 0.5, "kappa": 50.0}}"#;
        assert!(matches!(RunConfig::parse(both), Err(CliError::Config(_))));
        let units = r#"{"schema_version": 1, "units": "GHz", "reservoir": {"n": 1.0}}"#;
        assert!(RunConfig::parse(units).is_err());
        let version = r#"{"schema_version": 7, "units": "MHz", "reservoir": {"n": 1.0}}"#;
        assert!(RunConfig::parse(version).is_err());
        let unknown = r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 1.0, "m": 2}}"#;
        assert!(RunConfig::parse(unknown).is_err());
    }

    #[test]
    fn physical_resonance_is_solved_and_recorded() {
        let text = r#"{"schema_version": 1, "units": "MHz", "physical": {
            "g_r": 110, "g_s": 110, "omega_r": 120, "omega_s": 100,
            "delta_r": 8000, "delta_s": 8000, "delta_t": 8000,
            "kappa": 14.2, "gamma_r": 5.2, "gamma_s": 5.2, "gamma_t": 5.2}}"#;
        let sys = RunConfig::parse(text).unwrap().resolve().unwrap();
        let solved = sys.omega_t_solved.unwrap();
        assert!((solved / mhz(1.0) - 4400f64.sqrt()).abs() < 1e-9);
        assert!((sys.reservoir.n - 2.272_727_272_727).abs() < 1e-9);
    }

    #[test]
    fn hash_is_stable_under_formatting() {
        let spaced = r#"{ "schema_version" : 1 ,
            "units" : "MHz", "reservoir" : { "n" : 1.0 } }"#;
        assert_eq!(RunConfig::parse(MINIMAL).unwrap().hash(), RunConfig::parse(spaced).unwrap().hash());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"schema_version": 1, "units": "MHz", "reservoir": {"n": 3.1},
            "initial": {"theta": 1.5707963267948966},
            "protocol": [{"kind": "evolve", "duration_tau": 2.0},
                         {"kind": "unitary", "gate": "U"},
                         {"kind": "phase_decay", "duration_tau": 5.0, "eta_sq": 1.0, "n_bar": 1.0}]}"#;
        let cfg = RunConfig::parse(text).unwrap();
        let again = RunConfig::parse(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}
