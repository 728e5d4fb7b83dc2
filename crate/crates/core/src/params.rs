//! Cavity-QED inputs, the effective Raman model they induce, the
//! squeezed-reservoir coefficients (N, M) and validity-regime diagnostics.
//!
//! All frequencies are angular frequencies in rad/s; [`mhz`] converts a
//! quoted ν in MHz (ω = 2πν).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// ω = 2π·ν for ν given in MHz.
pub fn mhz(nu: f64) -> f64 {
    TAU * nu * 1e6
}

/// Raw cavity-QED parameters for a pair of identical atoms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub g_r: f64,
    pub g_s: f64,
    pub omega_r: f64,
    pub omega_s: f64,
    pub omega_t: f64,
    pub delta_r: f64,
    pub delta_s: f64,
    pub delta_t: f64,
    pub kappa: f64,
    pub gamma_r: f64,
    pub gamma_s: f64,
    pub gamma_t: f64,
    pub n_bar: f64,
    pub phi: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("g_r", self.g_r),
            ("g_s", self.g_s),
            ("omega_r", self.omega_r),
            ("omega_s", self.omega_s),
            ("omega_t", self.omega_t),
            ("gamma_r", self.gamma_r),
            ("gamma_s", self.gamma_s),
            ("gamma_t", self.gamma_t),
            ("n_bar", self.n_bar),
        ];
        for (name, v) in named {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParams(format!("kappa must be > 0, got {}", self.kappa)));
        }
        for (name, d) in [("delta_r", self.delta_r), ("delta_s", self.delta_s), ("delta_t", self.delta_t)] {
            if d == 0.0 {
                return Err(Error::ZeroDetuning(name));
            }
            if !d.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        if !self.phi.is_finite() {
            return Err(Error::InvalidParams("phi must be finite".into()));
        }
        Ok(())
    }

    /// Copy with Ω_t set by the resonance condition.
    pub fn with_resonant_omega_t(&self) -> Result<Self> {
        Ok(Self { omega_t: solve_omega_t(self)?, ..*self })
    }

    /// Left-hand side of the resonance condition; zero when satisfied.
    pub fn resonance_residual(&self) -> f64 {
        self.omega_s.powi(2) / (4.0 * self.delta_s) - self.omega_r.powi(2) / (4.0 * self.delta_r)
            + self.omega_t.powi(2) / (4.0 * self.delta_t)
            + self.g_r.powi(2) / self.delta_r * self.n_bar
            - self.g_s.powi(2) / self.delta_s * self.n_bar
    }

    /// Scattering rates γ_jΩ_j²/(2Δ_j²) for j = r, s, t.
    pub fn spontaneous_rates(&self) -> [f64; 3] {
        [
            self.gamma_r * self.omega_r.powi(2) / (2.0 * self.delta_r.powi(2)),
            self.gamma_s * self.omega_s.powi(2) / (2.0 * self.delta_s.powi(2)),
            self.gamma_t * self.omega_t.powi(2) / (2.0 * self.delta_t.powi(2)),
        ]
    }
}

/// Two identical atoms in a (g, κ, γ)/2π = (110, 14.2, 5.2) MHz cavity,
/// Ω_s/2π = 100 MHz, all detunings 8 GHz, n̄ = 0, φ = π. Ω_t is left at
/// zero; `with_resonant_omega_t` fills it in.
pub fn raman_setup(omega_r_mhz: f64) -> PhysicalParams {
    PhysicalParams {
        g_r: mhz(110.0),
        g_s: mhz(110.0),
        omega_r: mhz(omega_r_mhz),
        omega_s: mhz(100.0),
        omega_t: 0.0,
        delta_r: mhz(8000.0),
        delta_s: mhz(8000.0),
        delta_t: mhz(8000.0),
        kappa: mhz(14.2),
        gamma_r: mhz(5.2),
        gamma_s: mhz(5.2),
        gamma_t: mhz(5.2),
        n_bar: 0.0,
        phi: PI,
    }
}

/// Raman couplings β_j = g_jΩ_j/(2Δ_j) and Stark shifts per photon η_j = g_j²/Δ_j.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub beta_r: f64,
    pub beta_s: f64,
    pub eta_r: f64,
    pub eta_s: f64,
}

pub fn effective_from_physical(p: &PhysicalParams) -> Result<EffectiveParams> {
    if p.delta_r == 0.0 {
        return Err(Error::ZeroDetuning("delta_r"));
    }
    if p.delta_s == 0.0 {
        return Err(Error::ZeroDetuning("delta_s"));
    }
    Ok(EffectiveParams {
        beta_r: p.g_r * p.omega_r / (2.0 * p.delta_r),
        beta_s: p.g_s * p.omega_s / (2.0 * p.delta_s),
        eta_r: p.g_r.powi(2) / p.delta_r,
        eta_s: p.g_s.powi(2) / p.delta_s,
    })
}

/// Effective squeezed-reservoir description of the bad-cavity limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReservoirParams {
    /// β² = β_r² − β_s².
    pub beta_sq: f64,
    /// η² = (η_r − η_s)².
    pub eta_sq: f64,
    pub n: f64,
    pub m: C64,
    pub n_bar: f64,
    pub kappa: f64,
}

impl ReservoirParams {
    /// Dimensionless reservoir with β² = κ = 1, so the time unit is κ/β².
    /// `m_fraction` is |M|²/[N(N+1)]; M = −|M|e^{iφ}.
    pub fn from_squeezing(n: f64, m_fraction: f64, phi: f64) -> Result<Self> {
        if !(n >= 0.0) || !(0.0..=1.0).contains(&m_fraction) {
            return Err(Error::InvalidParams(format!("need N >= 0 and 0 <= |M|^2/N(N+1) <= 1, got {n}, {m_fraction}")));
        }
        let m_abs = (m_fraction * n * (n + 1.0)).sqrt();
        let r = Self { beta_sq: 1.0, eta_sq: 0.0, n, m: -C64::from_polar(m_abs, phi), n_bar: 0.0, kappa: 1.0 };
        r.validate()?;
        Ok(r)
    }

    /// Ideal squeezing |M|² = N(N+1).
    pub fn ideal(n: f64, phi: f64) -> Result<Self> {
        Self::from_squeezing(n, 1.0, phi)
    }

    pub fn with_phase_damping(self, eta_sq: f64, n_bar: f64) -> Result<Self> {
        let r = Self { eta_sq, n_bar, ..self };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_sq > 0.0) || !(self.kappa > 0.0) {
            return Err(Error::InvalidParams(format!(
                "need beta^2 > 0 and kappa > 0, got {} and {}",
                self.beta_sq, self.kappa
            )));
        }
        if !(self.eta_sq >= 0.0) || !(self.n_bar >= 0.0) || !(self.n >= 0.0) {
            return Err(Error::InvalidParams("eta^2, n_bar and N must be >= 0".into()));
        }
        let bound = self.n * (self.n + 1.0);
        if self.m.norm_sqr() > bound * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::InvalidParams(format!(
                "|M|^2 = {} exceeds N(N+1) = {bound}",
                self.m.norm_sqr()
            )));
        }
        Ok(())
    }

    /// Rate prefactor 2β²/κ of the amplitude terms.
    pub fn amplitude_rate(&self) -> f64 {
        2.0 * self.beta_sq / self.kappa
    }

    /// Prefactor (η²/2κ)·n̄(n̄+1) of the phase-damping term.
    pub fn phase_damping_rate(&self) -> f64 {
        self.eta_sq / (2.0 * self.kappa) * self.n_bar * (self.n_bar + 1.0)
    }

    /// (4β²/κ)(2N − 2|M| + 1).
    pub fn slowest_rate(&self) -> f64 {
        4.0 * self.beta_sq / self.kappa * (2.0 * self.n - 2.0 * self.m.norm() + 1.0)
    }

    /// Converts dimensionless τ = (β²/κ)t to t.
    pub fn time_from_tau(&self, tau: f64) -> f64 {
        tau * self.kappa / self.beta_sq
    }

    pub fn tau_from_time(&self, t: f64) -> f64 {
        t * self.beta_sq / self.kappa
    }
}

pub fn reservoir_from_effective(e: &EffectiveParams, n_bar: f64, phi: f64, kappa: f64) -> Result<ReservoirParams> {
    let (br2, bs2) = (e.beta_r.powi(2), e.beta_s.powi(2));
    if br2 <= bs2 {
        return Err(Error::NotDamping { beta_r_sq: br2, beta_s_sq: bs2 });
    }
    if !(n_bar >= 0.0) || !(kappa > 0.0) {
        return Err(Error::InvalidParams(format!("need n_bar >= 0 and kappa > 0, got {n_bar}, {kappa}")));
    }
    let beta_sq = br2 - bs2;
    let n = ((n_bar + 1.0) * bs2 + n_bar * br2) / beta_sq;
    let m = -C64::from_polar((2.0 * n_bar + 1.0) * e.beta_r * e.beta_s / beta_sq, phi);
    Ok(ReservoirParams { beta_sq, eta_sq: (e.eta_r - e.eta_s).powi(2), n, m, n_bar, kappa })
}

pub fn reservoir_from_physical(p: &PhysicalParams) -> Result<ReservoirParams> {
    p.validate()?;
    reservoir_from_effective(&effective_from_physical(p)?, p.n_bar, p.phi, p.kappa)
}

/// Ω_t ≥ 0 satisfying the resonance condition, ignoring `p.omega_t`.
pub fn solve_omega_t(p: &PhysicalParams) -> Result<f64> {
    if p.delta_t == 0.0 {
        return Err(Error::ZeroDetuning("delta_t"));
    }
    if p.delta_r == 0.0 || p.delta_s == 0.0 {
        return Err(Error::ZeroDetuning(if p.delta_r == 0.0 { "delta_r" } else { "delta_s" }));
    }
    let required_shift = p.omega_r.powi(2) / (4.0 * p.delta_r) - p.omega_s.powi(2) / (4.0 * p.delta_s)
        - p.g_r.powi(2) * p.n_bar / p.delta_r
        + p.g_s.powi(2) * p.n_bar / p.delta_s;
    let omega_t_sq = 4.0 * p.delta_t * required_shift;
    let scale = [p.omega_r, p.omega_s].iter().map(|x| x * x).fold(0.0, f64::max);
    if omega_t_sq < 0.0 {
        if omega_t_sq.abs() <= 1e-12 * scale {
            return Ok(0.0);
        }
        return Err(Error::Infeasible { required_shift });
    }
    Ok(omega_t_sq.sqrt())
}

/// Outcome of a ratio test: pass ≥ 10, warn ≥ 3, fail otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl Verdict {
    pub fn from_ratio(ratio: f64) -> Self {
        if ratio >= 10.0 {
            Verdict::Pass
        } else if ratio >= 3.0 {
            Verdict::Warn
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub name: String,
    pub ratio: f64,
    pub verdict: Verdict,
}

/// Default number of slowest-rate time constants in the preparation-time estimate.
pub const PREP_TIME_CONSTANTS: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub reservoir: ReservoirParams,
    /// (4β²/κ)(2N − 2|M| + 1), rad/s.
    pub slowest_rate: f64,
    pub phase_damping_rate: f64,
    /// γ_jΩ_j²/(2Δ_j²) for r, s, t.
    pub spon_rates: [f64; 3],
    /// 2g_r²/(γ_rκ)
    pub strong_coupling_lhs: f64,
    /// [1 − √(N/(N+1))]⁻²
    pub strong_coupling_rhs: f64,
    /// κ/|β_r|, κ/|β_s|, κ/|η_r|, κ/|η_s| (infinite when the coupling vanishes).
    pub bad_cavity_ratios: [f64; 4],
    /// |Δ_j|/max(Ω_j, g_j, κ, γ_j) for r, s, t.
    pub detuning_ratios: [f64; 3],
    pub prep_time_constant: f64,
    /// prep_time_constant / slowest_rate, seconds.
    pub prep_time_estimate: f64,
}

impl RegimeReport {
    pub fn margins(&self) -> Vec<Margin> {
        let mut out = vec![Margin {
            name: "strong_coupling".into(),
            ratio: self.strong_coupling_lhs / self.strong_coupling_rhs,
            verdict: Verdict::Pass,
        }];
        for (name, r) in ["kappa/beta_r", "kappa/beta_s", "kappa/eta_r", "kappa/eta_s"].iter().zip(self.bad_cavity_ratios) {
            out.push(Margin { name: format!("bad_cavity:{name}"), ratio: r, verdict: Verdict::Pass });
        }
        for (name, r) in ["delta_r", "delta_s", "delta_t"].iter().zip(self.detuning_ratios) {
            out.push(Margin { name: format!("detuning:{name}"), ratio: r, verdict: Verdict::Pass });
        }
        for m in &mut out {
            m.verdict = Verdict::from_ratio(m.ratio);
        }
        out
    }

    /// Worst verdict over all margins.
    pub fn verdict(&self) -> Verdict {
        self.margins().iter().map(|m| m.verdict).max().unwrap_or(Verdict::Pass)
    }
}

pub fn regime_report(p: &PhysicalParams) -> Result<RegimeReport> {
    regime_report_with(p, PREP_TIME_CONSTANTS)
}

pub fn regime_report_with(p: &PhysicalParams, prep_time_constant: f64) -> Result<RegimeReport> {
    let e = effective_from_physical(p)?;
    let r = reservoir_from_physical(p)?;
    let ratio = |num: f64, den: f64| if den == 0.0 { f64::INFINITY } else { num / den.abs() };
    let slowest_rate = r.slowest_rate();
    let detuning = |delta: f64, omega: f64, g: f64, gamma: f64| {
        ratio(delta.abs(), [omega, g, p.kappa, gamma].into_iter().fold(0.0, f64::max))
    };
    Ok(RegimeReport {
        reservoir: r,
        slowest_rate,
        phase_damping_rate: r.phase_damping_rate(),
        spon_rates: p.spontaneous_rates(),
        strong_coupling_lhs: 2.0 * p.g_r.powi(2) / (p.gamma_r * p.kappa),
        strong_coupling_rhs: (1.0 - (r.n / (r.n + 1.0)).sqrt()).powi(-2),
        bad_cavity_ratios: [ratio(p.kappa, e.beta_r), ratio(p.kappa, e.beta_s), ratio(p.kappa, e.eta_r), ratio(p.kappa, e.eta_s)],
        detuning_ratios: [
            detuning(p.delta_r, p.omega_r, p.g_r, p.gamma_r),
            detuning(p.delta_s, p.omega_s, p.g_s, p.gamma_s),
            detuning(p.delta_t, p.omega_t, 0.0, p.gamma_t),
        ],
        prep_time_constant,
        prep_time_estimate: prep_time_constant / slowest_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// The fig5 Raman setup: (g, κ, γ, Ω_s, Δ)/2π = (110, 14.2, 5.2, 100, 8000) MHz.
    #[test]
    fn raman_coupling_and_stark_shift() {
        let e = effective_from_physical(&raman_setup(120.0)).unwrap();
        assert!((e.beta_r / mhz(1.0) - 0.825).abs() < 1e-12);
        assert!((e.eta_r / mhz(1.0) - 1.5125).abs() < 1e-12);
        let zero = effective_from_physical(&PhysicalParams { omega_r: 0.0, ..raman_setup(120.0) }).unwrap();
        assert_eq!(zero.beta_r, 0.0);
        let bad = PhysicalParams { delta_r: 0.0, ..raman_setup(120.0) };
        assert!(matches!(effective_from_physical(&bad), Err(Error::ZeroDetuning("delta_r"))));
    }

    #[test]
    fn two_to_one_couplings() {
        let e = EffectiveParams { beta_r: 2.0, beta_s: 1.0, eta_r: 0.0, eta_s: 0.0 };
        let r = reservoir_from_effective(&e, 0.0, 0.3, 1.0).unwrap();
        assert!((r.n - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.m.norm() - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.m.norm_sqr() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_reservoir() {
        let e = EffectiveParams { beta_r: 1.0, beta_s: 0.0, eta_r: 0.0, eta_s: 0.0 };
        let r = reservoir_from_effective(&e, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(r.n, 0.0);
        assert_eq!(r.m.norm(), 0.0);
    }

    #[test]
    fn amplifying_reservoir_rejected() {
        let e = EffectiveParams { beta_r: 1.0, beta_s: 1.0, eta_r: 0.0, eta_s: 0.0 };
        assert!(matches!(reservoir_from_effective(&e, 0.0, 0.0, 1.0), Err(Error::NotDamping { .. })));
    }

    #[test]
    fn quoted_n_for_173() {
        let r = reservoir_from_physical(&raman_setup(173.0)).unwrap();
        let expected = 100f64.powi(2) / (173f64.powi(2) - 100f64.powi(2));
        assert!((r.n - expected).abs() < 1e-12);
        assert!((r.n - 0.50).abs() < 0.005);
    }

    #[test]
    fn omega_t_examples() {
        let p = raman_setup(120.0);
        let ot = solve_omega_t(&p).unwrap();
        assert!((ot / mhz(1.0) - 4400f64.sqrt()).abs() < 1e-9);
        assert!((ot / mhz(1.0) - 66.33).abs() < 0.005);
        // Ω_t² = Ω_r² − Ω_s² for equal detunings and couplings
        assert!((ot.powi(2) - (p.omega_r.powi(2) - p.omega_s.powi(2))).abs() / p.omega_r.powi(2) < 1e-12);

        let sym = PhysicalParams { omega_r: mhz(100.0), n_bar: 2.5, ..p };
        assert_eq!(solve_omega_t(&sym).unwrap(), 0.0);

        let flipped = PhysicalParams { omega_r: mhz(80.0), ..p };
        assert!(matches!(solve_omega_t(&flipped), Err(Error::Infeasible { required_shift }) if required_shift < 0.0));
        let fixed = PhysicalParams { delta_t: -p.delta_t, ..flipped };
        assert!(solve_omega_t(&fixed).is_ok());
    }

    #[test]
    fn strong_coupling_numbers() {
        // Ω_s² = (2/3)Ω_r² gives N = 2; Ω_r/Δ_r = 0.02
        let delta = mhz(8000.0);
        let omega_r = 0.02 * delta;
        let p = PhysicalParams {
            omega_r,
            omega_s: omega_r * (2.0f64 / 3.0).sqrt(),
            ..raman_setup(0.0)
        }
        .with_resonant_omega_t()
        .unwrap();
        let rep = regime_report(&p).unwrap();
        assert!((rep.reservoir.n - 2.0).abs() < 1e-12);
        assert!((rep.strong_coupling_lhs - 332.0).abs() / 332.0 < 0.03);
        assert!((rep.strong_coupling_rhs - 29.7).abs() / 29.7 < 0.01);
        let m = rep.margins();
        assert_eq!(m[0].verdict, Verdict::Pass);
        assert!((m[0].ratio - 11.0).abs() < 0.1);
        // three slowest-rate time constants: tens of microseconds, below 50 μs
        assert!(rep.prep_time_estimate > 1e-5 && rep.prep_time_estimate < 50e-6, "{}", rep.prep_time_estimate);
        assert_eq!(rep.phase_damping_rate, 0.0);
    }

    #[test]
    fn vacuum_rhs_is_one() {
        let p = PhysicalParams { omega_s: 0.0, ..raman_setup(120.0) };
        let rep = regime_report(&p).unwrap();
        assert_eq!(rep.strong_coupling_rhs, 1.0);
    }

    #[test]
    fn comparable_kappa_fails_bad_cavity() {
        let p = PhysicalParams { kappa: mhz(1.0), ..raman_setup(120.0) };
        let rep = regime_report(&p).unwrap();
        let m = rep.margins();
        let bc = m.iter().find(|m| m.name == "bad_cavity:kappa/beta_r").unwrap();
        assert_eq!(bc.verdict, Verdict::Fail);
        assert_eq!(rep.verdict(), Verdict::Fail);
    }

    #[test]
    fn invalid_physical_inputs() {
        assert!(PhysicalParams { kappa: 0.0, ..raman_setup(120.0) }.validate().is_err());
        assert!(PhysicalParams { n_bar: -1.0, ..raman_setup(120.0) }.validate().is_err());
        assert!(matches!(
            PhysicalParams { delta_t: 0.0, ..raman_setup(120.0) }.validate(),
            Err(Error::ZeroDetuning("delta_t"))
        ));
    }

    proptest! {
        #[test]
        fn ideal_squeezing_identity(br in 0.1f64..10.0, frac in 0.0f64..0.99, phi in -PI..PI) {
            let e = EffectiveParams { beta_r: br, beta_s: br * frac, eta_r: 0.0, eta_s: 0.0 };
            let r = reservoir_from_effective(&e, 0.0, phi, 1.0).unwrap();
            let gap = r.m.norm_sqr() - r.n * (r.n + 1.0);
            prop_assert!(gap.abs() <= 1e-12 * (1.0 + r.n * (r.n + 1.0)));
        }

        #[test]
        fn thermal_is_impure(br in 0.1f64..10.0, frac in 0.0f64..0.99, n_bar in 0.01f64..5.0) {
            let e = EffectiveParams { beta_r: br, beta_s: br * frac, eta_r: 0.0, eta_s: 0.0 };
            let r = reservoir_from_effective(&e, n_bar, 0.0, 1.0).unwrap();
            prop_assert!(r.m.norm_sqr() < r.n * (r.n + 1.0));
        }

        #[test]
        fn resonance_resubstitution(or in 1.0f64..500.0, os in 1.0f64..500.0, gr in 10.0f64..200.0,
                                     gs in 10.0f64..200.0, n_bar in 0.0f64..3.0, dr in 1000.0f64..9000.0) {
            let p = PhysicalParams {
                g_r: mhz(gr), g_s: mhz(gs), omega_r: mhz(or), omega_s: mhz(os), delta_r: mhz(dr), n_bar,
                ..raman_setup(120.0)
            };
            for delta_t in [p.delta_t, -p.delta_t] {
                let q = PhysicalParams { delta_t, ..p };
                if let Ok(solved) = q.with_resonant_omega_t() {
                    let scale = [q.omega_r.powi(2) / q.delta_r, q.omega_s.powi(2) / q.delta_s,
                                 q.g_r.powi(2) * n_bar / q.delta_r, q.g_s.powi(2) * n_bar / q.delta_s]
                        .iter().map(|x| x.abs()).fold(0.0, f64::max);
                    prop_assert!(solved.resonance_residual().abs() <= 1e-12 * scale);
                }
            }
        }

        #[test]
        fn slowest_rate_decreases_with_m(n in 0.01f64..10.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            let r_lo = ReservoirParams::from_squeezing(n, lo, 0.0).unwrap();
            let r_hi = ReservoirParams::from_squeezing(n, hi, 0.0).unwrap();
            prop_assert!(r_hi.slowest_rate() < r_lo.slowest_rate());
        }
    }
}
