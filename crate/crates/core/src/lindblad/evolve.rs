//! Fixed-step RK4 integration of the master equation
//!
//! d rho/dt = -(i/hbar)[H, rho] - (1/hbar){Gamma, rho} + (1/hbar) sum L rho L^dagger
//!
//! on the direction basis. H is diagonal on the elastic shell, so the
//! generator reduces to element-wise dephasing of coherences plus a
//! population gain on the diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::density::DensityMatrix;
use super::jumps::JumpOperatorSet;
use crate::constants::HBAR;
use crate::error::{Error, Result};

/// dt * max(2 gamma / hbar) must stay below this.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Columns above which the generator is applied in parallel.
const PARALLEL_DIM: usize = 64;

/// Master-equation generator: diagonal Hamiltonian plus jump operators.
#[derive(Debug, Clone)]
pub struct Generator {
    jumps: JumpOperatorSet,
    energies: Vec<f64>,
}

impl Generator {
    /// Uniform level `energy` (J) on every direction, e.g. the real optical
    /// potential plus the constant kinetic energy.
    pub fn new(jumps: JumpOperatorSet, energy: f64) -> Self {
        let energies = vec![energy; jumps.dim()];
        Generator { jumps, energies }
    }

    /// Arbitrary diagonal Hamiltonian, J.
    pub fn with_energies(jumps: JumpOperatorSet, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != jumps.dim() {
            return Err(Error::domain("Hamiltonian diagonal does not match the jump dimension"));
        }
        Ok(Generator { jumps, energies })
    }

    pub fn jumps(&self) -> &JumpOperatorSet {
        &self.jumps
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.jumps.dim()
    }

    /// Apply the generator to `rho`.
    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.dim();
        let gamma = self.jumps.gamma();
        let rates = self.jumps.rates();
        let diag: Vec<Complex64> = (0..n).map(|j| rho[(j, j)]).collect();
        let src = rho.as_slice();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        // column-major: column c holds rho[(r, c)] at c * n + r
        let column = |(c, col): (usize, &mut [Complex64])| {
            for (r, slot) in col.iter_mut().enumerate() {
                let value = src[c * n + r];
                let phase = Complex64::new(0.0, -(self.energies[r] - self.energies[c]) / HBAR);
                let damping = (gamma[r] + gamma[c]) / HBAR;
                *slot = phase * value - value * damping;
            }
            let gain: Complex64 = (0..n).map(|j| rates[c * n + j] * diag[j]).sum();
            col[c] += gain;
        };
        if n >= PARALLEL_DIM {
            out.as_mut_slice().par_chunks_mut(n).enumerate().for_each(column);
        } else {
            out.as_mut_slice().chunks_mut(n).enumerate().for_each(column);
        }
        out
    }

    /// max |-(i/hbar)[H, rho]| entry, zero for a uniform Hamiltonian.
    pub fn commutator_norm(&self, rho: &DMatrix<Complex64>) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for c in 0..n {
            for r in 0..n {
                let de = (self.energies[r] - self.energies[c]) / HBAR;
                worst = worst.max((rho[(r, c)] * de).norm());
            }
        }
        worst
    }
}

/// |Tr[(1/hbar) sum L rho L^dagger] - Tr[(1/hbar){Gamma, rho}]|, s^-1.
pub fn optical_theorem_residual(rho: &DensityMatrix, jumps: &JumpOperatorSet) -> f64 {
    let (gain, loss, _) = trace_balance(rho.matrix(), jumps);
    (gain - loss).norm()
}

/// Residual divided by the magnitude of the loss trace (0 when nothing scatters).
pub fn optical_theorem_relative(rho: &DensityMatrix, jumps: &JumpOperatorSet) -> f64 {
    let (gain, loss, scale) = trace_balance(rho.matrix(), jumps);
    if scale == 0.0 {
        0.0
    } else {
        (gain - loss).norm() / scale
    }
}

fn trace_balance(rho: &DMatrix<Complex64>, jumps: &JumpOperatorSet) -> (Complex64, Complex64, f64) {
    let n = jumps.dim();
    let mut gain = Complex64::new(0.0, 0.0);
    let mut loss = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for j in 0..n {
        let p = rho[(j, j)];
        for i in 0..n {
            // Tr |i><j| rho |j><i| hbar R_ij / hbar
            gain += jumps.rate(i, j) * p;
        }
        let out = 2.0 * jumps.gamma()[j] / HBAR;
        loss += out * p;
        scale += out * p.norm();
    }
    (gain, loss, scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDiagnostics {
    pub step: usize,
    /// s
    pub time: f64,
    pub trace: f64,
    /// Not computed when disabled in the options.
    pub min_eigenvalue: Option<f64>,
    pub hermiticity_residual: f64,
    /// Relative optical-theorem residual.
    pub optical_theorem_residual: f64,
    /// Largest commutator entry, s^-1.
    pub commutator_norm: f64,
}

/// Stored samples of an evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub diagnostics: Vec<StepDiagnostics>,
    /// Diagonal of rho at every stored sample.
    pub populations: Vec<Vec<f64>>,
    /// Full states, when requested.
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.time).collect()
    }

    pub fn len(&self) -> usize {
        self.diagnostics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn final_state(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// s
    pub dt: f64,
    pub steps: usize,
    /// Store every k-th step (step 0 is always stored).
    pub store_every: usize,
    pub keep_states: bool,
    pub min_eigenvalue: bool,
}

impl EvolveOptions {
    pub fn new(dt: f64, steps: usize) -> Self {
        EvolveOptions {
            dt,
            steps,
            store_every: 1,
            keep_states: true,
            min_eigenvalue: true,
        }
    }
}

/// Evolve with a uniform real potential `u_real` (J), storing every step.
pub fn evolve(
    rho0: &DensityMatrix,
    jumps: &JumpOperatorSet,
    u_real: f64,
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    let generator = Generator::new(jumps.clone(), u_real);
    evolve_with(rho0, &generator, &EvolveOptions::new(dt, steps))
}

/// Fixed-step RK4. The trace is never renormalised.
pub fn evolve_with(rho0: &DensityMatrix, generator: &Generator, opts: &EvolveOptions) -> Result<Trajectory> {
    if rho0.dim() != generator.dim() {
        return Err(Error::domain(format!(
            "state dimension {} does not match generator dimension {}",
            rho0.dim(),
            generator.dim()
        )));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(Error::domain(format!("time step must be positive, got {:e}", opts.dt)));
    }
    if opts.store_every == 0 {
        return Err(Error::domain("store_every must be at least 1"));
    }
    let product = opts.dt * generator.jumps().max_out_rate();
    if product >= STABILITY_LIMIT {
        return Err(Error::StepSize {
            product,
            limit: STABILITY_LIMIT,
        });
    }

    let mut traj = Trajectory {
        diagnostics: Vec::new(),
        populations: Vec::new(),
        states: Vec::new(),
    };
    let mut rho = rho0.matrix().clone();
    record(&mut traj, generator, &rho, 0, 0.0, opts);
    let half = Complex64::new(0.5 * opts.dt, 0.0);
    let full = Complex64::new(opts.dt, 0.0);
    let sixth = Complex64::new(opts.dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for step in 1..=opts.steps {
        let k1 = generator.apply(&rho);
        let k2 = generator.apply(&(&rho + &k1 * half));
        let k3 = generator.apply(&(&rho + &k2 * half));
        let k4 = generator.apply(&(&rho + &k3 * full));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;
        if rho.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Numeric(format!("non-finite density matrix at step {step}")));
        }
        if step % opts.store_every == 0 || step == opts.steps {
            record(&mut traj, generator, &rho, step, step as f64 * opts.dt, opts);
        }
    }
    Ok(traj)
}

fn record(
    traj: &mut Trajectory,
    generator: &Generator,
    rho: &DMatrix<Complex64>,
    step: usize,
    time: f64,
    opts: &EvolveOptions,
) {
    let state = DensityMatrix::from_evolved(rho.clone());
    traj.diagnostics.push(StepDiagnostics {
        step,
        time,
        trace: state.trace().re,
        min_eigenvalue: opts.min_eigenvalue.then(|| state.min_eigenvalue()),
        hermiticity_residual: state.hermiticity_residual(),
        optical_theorem_residual: optical_theorem_relative(&state, generator.jumps()),
        commutator_norm: generator.commutator_norm(rho),
    });
    traj.populations.push(state.populations());
    if opts.keep_states {
        traj.states.push(state);
    }
}

/// Exponential fit to the decay of one population.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalFit {
    /// s^-1
    pub rate: f64,
    pub r_squared: f64,
    pub points: usize,
    /// Set when the population is not monotone over the fit window.
    pub warning: Option<String>,
}

/// Least-squares rate of log rho_{j0 j0}(t) over its first decade of decay.
pub fn coherent_survival(traj: &Trajectory, j0: usize) -> Result<SurvivalFit> {
    let first = traj
        .populations
        .first()
        .ok_or_else(|| Error::domain("empty trajectory"))?;
    if j0 >= first.len() {
        return Err(Error::domain(format!("direction index {j0} out of range")));
    }
    let p0 = first[j0];
    if p0.is_nan() || p0 <= 0.0 {
        return Err(Error::domain("initial population of the tracked direction must be positive"));
    }
    let last_step = traj.diagnostics.last().map_or(0, |d| d.step);
    let last_pop = traj.populations.last().map_or(p0, |p| p[j0]);
    if last_step < 100 && last_pop > p0 * (-3.0f64).exp() {
        return Err(Error::domain(
            "trajectory must span >= 100 steps or three decay constants",
        ));
    }
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (d, pops) in traj.diagnostics.iter().zip(&traj.populations) {
        let p = pops[j0];
        if p < 0.1 * p0 || p <= 0.0 {
            break;
        }
        t.push(d.time);
        y.push(p.ln());
    }
    if t.len() < 3 {
        return Err(Error::domain(
            "fewer than three samples in the first decade of decay; store more often",
        ));
    }
    let count = t.len() as f64;
    let tm = t.iter().sum::<f64>() / count;
    let ym = y.iter().sum::<f64>() / count;
    let sxy: f64 = t.iter().zip(&y).map(|(a, b)| (a - tm) * (b - ym)).sum();
    let sxx: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * tm;
    let ss_tot: f64 = y.iter().map(|b| (b - ym) * (b - ym)).sum();
    let ss_res: f64 = t
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    let monotone = y.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let warning = (!monotone).then(|| {
        format!("population not monotone over the fit window (R^2 = {r_squared:.6})")
    });
    Ok(SurvivalFit {
        rate: -slope,
        r_squared,
        points: t.len(),
        warning,
    })
}
