use serde::{Deserialize, Serialize};

use super::evolve::{evolve_states, EvolveOptions};
use super::state::check_unitary;
use super::{DensityMatrix, TrajectoryPoint};
use crate::generators::GeneratorSpec;
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum SegmentKind {
    /// Evolve for `duration` (generator time units); `tau_per_time` = β²/κ
    /// converts to dimensionless time and sets where sampling starts.
    Evolve { generator: GeneratorSpec, duration: f64, tau_per_time: f64 },
    /// Instantaneous ρ → UρU†.
    Unitary(ComplexMatrix),
    /// Replace the state outright.
    SetState(DensityMatrix),
}

#[derive(Clone, Debug)]
pub struct ProtocolSegment {
    pub kind: SegmentKind,
    pub label: String,
}

impl ProtocolSegment {
    pub fn evolve(label: &str, generator: GeneratorSpec, duration: f64, tau_per_time: f64) -> Self {
        Self { kind: SegmentKind::Evolve { generator, duration, tau_per_time }, label: label.into() }
    }

    /// Evolution under the zero generator: every drive switched off.
    pub fn freeze(label: &str, space: crate::linalg::HilbertSpace, duration: f64) -> Self {
        Self::evolve(label, GeneratorSpec::zero(space), duration, 1.0)
    }

    pub fn unitary(label: &str, u: ComplexMatrix) -> Self {
        Self { kind: SegmentKind::Unitary(u), label: label.into() }
    }

    pub fn set_state(label: &str, rho: DensityMatrix) -> Self {
        Self { kind: SegmentKind::SetState(rho), label: label.into() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingPolicy {
    /// Samples per evolve segment.
    pub count: usize,
    pub spacing: Spacing,
    /// First log-spaced sample, in τ.
    pub first_tau: f64,
    pub keep_snapshots: bool,
    #[serde(skip)]
    pub evolve: EvolveOptions,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        Self { count: 200, spacing: Spacing::Log, first_tau: 1e-3, keep_snapshots: false, evolve: EvolveOptions::default() }
    }
}

impl SamplingPolicy {
    /// Sample times within a segment of the given duration, ending exactly at it.
    pub fn times(&self, duration: f64, tau_per_time: f64) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(Error::InvalidParams("sampling count must be >= 1".into()));
        }
        if !(duration >= 0.0) || !(tau_per_time > 0.0) {
            return Err(Error::InvalidParams(format!("need duration >= 0 and tau_per_time > 0, got {duration}, {tau_per_time}")));
        }
        if duration == 0.0 {
            return Ok(vec![0.0]);
        }
        let n = self.count;
        let start = self.first_tau / tau_per_time;
        let mut out: Vec<f64> = match self.spacing {
            Spacing::Log if start > 0.0 && start < duration && n > 1 => {
                let ratio = (duration / start).ln();
                (0..n).map(|k| start * (ratio * k as f64 / (n - 1) as f64).exp()).collect()
            }
            _ => (1..=n).map(|k| duration * k as f64 / n as f64).collect(),
        };
        *out.last_mut().expect("count >= 1") = duration;
        Ok(out)
    }
}

/// Runs the segments in order. The first segment must set the state. A
/// point is recorded after each set-state and unitary segment and at every
/// evolve sample; t and τ accumulate across segments.
pub fn run_protocol(segments: &[ProtocolSegment], policy: &SamplingPolicy) -> Result<Vec<TrajectoryPoint>> {
    let mut state: Option<DensityMatrix> = None;
    let (mut t0, mut tau0) = (0.0, 0.0);
    let mut points = Vec::new();
    for (idx, seg) in segments.iter().enumerate() {
        let record = |rho: &DensityMatrix, t: f64, tau: f64| TrajectoryPoint::from_state(t, tau, idx, rho, policy.keep_snapshots);
        match &seg.kind {
            SegmentKind::SetState(rho) => {
                if let Some(prev) = &state {
                    if prev.space() != rho.space() {
                        return Err(Error::DimensionMismatch { expected: prev.space().dim(), found: rho.space().dim() });
                    }
                }
                points.push(record(rho, t0, tau0)?);
                state = Some(rho.clone());
            }
            SegmentKind::Unitary(u) => {
                check_unitary(u)?;
                let rho = current(&state, &seg.label)?.transformed(u)?;
                points.push(record(&rho, t0, tau0)?);
                state = Some(rho);
            }
            SegmentKind::Evolve { generator, duration, tau_per_time } => {
                let rho0 = current(&state, &seg.label)?;
                let times = policy.times(*duration, *tau_per_time)?;
                let states = evolve_states(rho0, generator, &times, &policy.evolve)?;
                for (rho, &t) in states.iter().zip(&times) {
                    points.push(record(rho, t0 + t, tau0 + t * tau_per_time)?);
                }
                state = states.into_iter().last();
                t0 += duration;
                tau0 += duration * tau_per_time;
            }
        }
    }
    Ok(points)
}

fn current<'a>(state: &'a Option<DensityMatrix>, label: &str) -> Result<&'a DensityMatrix> {
    state.as_ref().ok_or_else(|| Error::InvalidState(format!("segment {label:?} runs before any state was set")))
}
