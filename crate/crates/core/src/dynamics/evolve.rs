use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, TrajectoryPoint};
use crate::generators::GeneratorSpec;
use crate::linalg::{devectorize, expm, vectorize, SparseMatrix};
use crate::tolerances::TOL;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exponential propagator for small spaces, adaptive otherwise.
    #[default]
    Auto,
    Exact,
    Adaptive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { method: Method::Auto, rtol: TOL.rk_rel, atol: TOL.rk_abs }
    }
}

/// Largest Hilbert-space dimension propagated by dense exponentials under `Method::Auto`.
const EXACT_MAX_DIM: usize = 8;

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::InvalidParams(format!("sample times must be finite, non-negative and nondecreasing (got {t})")));
        }
        prev = t;
    }
    Ok(())
}

/// States ρ(t_k) for each sample time, measured from ρ0 at t = 0.
pub fn evolve_states(rho0: &DensityMatrix, g: &GeneratorSpec, times: &[f64], opts: &EvolveOptions) -> Result<Vec<DensityMatrix>> {
    g.validate()?;
    if rho0.space() != &g.space {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: rho0.space().dim() });
    }
    check_times(times)?;
    let exact = match opts.method {
        Method::Exact => true,
        Method::Adaptive => false,
        Method::Auto => g.dim() <= EXACT_MAX_DIM,
    };
    let vecs = if exact { propagate_exact(rho0, g, times) } else { propagate_adaptive(rho0, g, times, opts)? };
    vecs.into_iter()
        .map(|v| DensityMatrix::new(g.space.clone(), devectorize(&v, g.dim())?))
        .collect()
}

/// Trajectory points (τ = t) for each sample time.
pub fn evolve(rho0: &DensityMatrix, g: &GeneratorSpec, times: &[f64], opts: &EvolveOptions) -> Result<Vec<TrajectoryPoint>> {
    evolve_states(rho0, g, times, opts)?
        .iter()
        .zip(times)
        .map(|(rho, &t)| TrajectoryPoint::from_state(t, t, 0, rho, false))
        .collect()
}

/// ρ(t_k) = exp(L·t_k)ρ0, each sample taken directly from ρ0 so errors do not accumulate.
fn propagate_exact(rho0: &DensityMatrix, g: &GeneratorSpec, times: &[f64]) -> Vec<Vec<C64>> {
    let l = g.superoperator();
    let v0 = vectorize(rho0.matrix());
    let mut cache: Option<(f64, Vec<C64>)> = None;
    times
        .iter()
        .map(|&t| {
            if let Some((tc, v)) = &cache {
                if *tc == t {
                    return v.clone();
                }
            }
            let v = expm(&l.scale_real(t)).matvec(&v0).expect("square propagator");
            cache = Some((t, v.clone()));
            v
        })
        .collect()
}

// Dormand–Prince 5(4) tableau.
const A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

struct Stepper<'a> {
    l: &'a SparseMatrix,
    k: [Vec<C64>; 7],
    stage: Vec<C64>,
    y5: Vec<C64>,
}

impl<'a> Stepper<'a> {
    fn new(l: &'a SparseMatrix) -> Self {
        let n = l.dim();
        Self { l, k: std::array::from_fn(|_| vec![C64::new(0.0, 0.0); n]), stage: vec![C64::new(0.0, 0.0); n], y5: vec![C64::new(0.0, 0.0); n] }
    }

    /// One trial step from y (with k[0] = L·y already set). Returns the
    /// scaled error norm; the candidate is left in `y5` and L·y5 in k[6].
    #[allow(clippy::needless_range_loop)]
    fn trial(&mut self, y: &[C64], h: f64, rtol: f64, atol: f64) -> f64 {
        for s in 1..7 {
            for (i, out) in self.stage.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &a) in A[s].iter().enumerate() {
                    if a != 0.0 {
                        acc += self.k[j][i] * a;
                    }
                }
                *out = y[i] + acc * h;
            }
            if s == 6 {
                self.y5.copy_from_slice(&self.stage);
            }
            self.l.mul_vec_into(&self.stage, &mut self.k[s]);
        }
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let mut e = C64::new(0.0, 0.0);
            for s in 0..7 {
                let b5 = if s < 6 { A[6][s] } else { 0.0 };
                e += self.k[s][i] * (b5 - B4[s]);
            }
            let scale = atol + rtol * y[i].norm().max(self.y5[i].norm());
            err = err.max((e * h).norm() / scale);
        }
        err
    }
}

fn propagate_adaptive(rho0: &DensityMatrix, g: &GeneratorSpec, times: &[f64], opts: &EvolveOptions) -> Result<Vec<Vec<C64>>> {
    if !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerances must be positive, got rtol {} atol {}", opts.rtol, opts.atol)));
    }
    let l = g.sparse_superoperator();
    let mut y = vectorize(rho0.matrix());
    let duration = times.last().copied().unwrap_or(0.0);
    let min_step = 1e-15 * duration;
    let mut stepper = Stepper::new(&l);
    l.mul_vec_into(&y, &mut stepper.k[0]);

    let y_norm = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let f_norm = stepper.k[0].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut h = if f_norm > 0.0 { 0.01 * y_norm / f_norm } else { duration.max(1.0) };
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            let err = stepper.trial(&y, step, opts.rtol, opts.atol);
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y.copy_from_slice(&stepper.y5);
                let (first, rest) = stepper.k.split_at_mut(6);
                first[0].copy_from_slice(&rest[0]);
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the unclipped step size when the last step was shortened to hit a sample
                h = if last { h.max(step * grow) } else { step * grow };
            } else {
                h = step * (0.9 * err.powf(-0.2)).max(0.1);
                if h < min_step {
                    return Err(Error::ToleranceNotMet { t, step: h });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
