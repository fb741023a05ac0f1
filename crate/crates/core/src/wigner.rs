//! One-dimensional Wigner transform of a momentum-basis density matrix,
//!
//! f_w(x, p) = \int dq/(2 pi hbar) e^{i x q / hbar} <p + q/2| rho |p - q/2>.
//!
//! On a uniform momentum grid p_j = p_min + j dq the pair (j, k) contributes
//! at p = (p_j + p_k)/2, so the output momentum axis has spacing dq/2 and
//! every anti-diagonal of rho lands on a grid row without interpolation.
//! Offsets along an anti-diagonal step by 2 dq, which makes the x-period of
//! the transform pi hbar / dq.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::lindblad::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && step > 0.0) || len == 0 {
            return Err(Error::Grid(format!(
                "uniform grid needs a finite start, positive step and at least one point (start {start:e}, step {step:e}, len {len})"
            )));
        }
        Ok(UniformGrid { start, step, len })
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    /// len * step
    pub fn span(&self) -> f64 {
        self.len as f64 * self.step
    }
}

/// Density matrix over p_j = p_min + j dq, with discrete probabilities on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState1D {
    state: DensityMatrix,
    p_min: f64,
    dq: f64,
}

impl MomentumState1D {
    pub fn new(state: DensityMatrix, p_min: f64, dq: f64) -> Result<Self> {
        if !(p_min.is_finite() && dq.is_finite() && dq > 0.0) {
            return Err(Error::Grid(format!("momentum grid needs dq > 0, got {dq:e}")));
        }
        Ok(MomentumState1D { state, p_min, dq })
    }

    /// Sample a momentum-space wavefunction psi(p) (kg m/s)^{-1/2} on the grid.
    pub fn from_wavefunction<F: Fn(f64) -> Complex64>(psi: F, p_min: f64, dq: f64, len: usize) -> Result<Self> {
        let amp: Vec<Complex64> = (0..len).map(|j| psi(p_min + j as f64 * dq)).collect();
        Self::new(DensityMatrix::from_state_vector(&amp)?, p_min, dq)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn momentum_grid(&self) -> UniformGrid {
        UniformGrid {
            start: self.p_min,
            step: self.dq,
            len: self.dim(),
        }
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    /// Largest x span free of aliasing, pi hbar / dq.
    pub fn max_x_span(&self) -> f64 {
        PI * HBAR / self.dq
    }
}

/// Samples of f_w on an x-by-p grid, stored row-major in x.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerField {
    pub x: UniformGrid,
    pub p: UniformGrid,
    values: Vec<f64>,
    /// Largest |Im f_w| discarded after summation.
    pub max_imag_residue: f64,
}

impl WignerField {
    /// f_w(x_i, p_j), (J s)^-1.
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p.len + ip]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// \int f_w dx at row `ip`.
    pub fn momentum_marginal(&self, ip: usize) -> f64 {
        (0..self.x.len).map(|ix| self.value(ix, ip)).sum::<f64>() * self.x.step
    }

    /// \int f_w dp at column `ix`.
    pub fn position_marginal(&self, ix: usize) -> f64 {
        (0..self.p.len).map(|ip| self.value(ix, ip)).sum::<f64>() * self.p.step
    }

    /// \int\int f_w dx dp
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.x.step * self.p.step
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Wigner transform of `rho` sampled at the positions of `x_grid`.
///
/// The x span must not exceed pi hbar / dq.
pub fn wigner_transform(rho: &MomentumState1D, x_grid: &UniformGrid) -> Result<WignerField> {
    let limit = rho.max_x_span();
    if x_grid.span() > limit * (1.0 + 1e-12) {
        return Err(Error::Grid(format!(
            "x span {:e} m exceeds the alias-free span pi hbar / dq = {limit:e} m",
            x_grid.span()
        )));
    }
    let n = rho.dim();
    let m = rho.state().matrix();
    let sym: DMatrix<Complex64> = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let rows = 2 * n - 1;
    let norm = 1.0 / (PI * HBAR);
    let per_x: Vec<(Vec<f64>, f64)> = (0..x_grid.len)
        .into_par_iter()
        .map(|ix| {
            let theta = x_grid.point(ix) * rho.dq / HBAR;
            // e^{i theta d} for d = j - k in [-(n-1), n-1]
            let phases: Vec<Complex64> = (0..rows)
                .map(|o| Complex64::from_polar(1.0, theta * (o as f64 - (n - 1) as f64)))
                .collect();
            let mut out = vec![0.0; rows];
            let mut residue: f64 = 0.0;
            for (s, slot) in out.iter_mut().enumerate() {
                let lo = s.saturating_sub(n - 1);
                let hi = s.min(n - 1);
                let mut acc = Complex64::new(0.0, 0.0);
                for j in lo..=hi {
                    let k = s - j;
                    acc += sym[(j, k)] * phases[j + n - 1 - k];
                }
                *slot = acc.re * norm;
                residue = residue.max(acc.im.abs() * norm);
            }
            (out, residue)
        })
        .collect();
    let mut values = Vec::with_capacity(x_grid.len * rows);
    let mut max_imag_residue: f64 = 0.0;
    for (row, residue) in per_x {
        values.extend(row);
        max_imag_residue = max_imag_residue.max(residue);
    }
    Ok(WignerField {
        x: *x_grid,
        p: UniformGrid {
            start: rho.p_min,
            step: 0.5 * rho.dq,
            len: rows,
        },
        values,
        max_imag_residue,
    })
}

/// x grid of `len` points centred on zero covering the full alias-free span.
pub fn centered_x_grid(rho: &MomentumState1D, len: usize) -> Result<UniformGrid> {
    let span = rho.max_x_span();
    let step = span / len as f64;
    UniformGrid::new(-0.5 * span, step, len)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DQ: f64 = 1e-27;

    #[test]
    fn momentum_eigenstate_is_uniform_in_x() {
        let state = DensityMatrix::pure_basis(9, 4).unwrap();
        let rho = MomentumState1D::new(state, -4.0 * DQ, DQ).unwrap();
        let grid = centered_x_grid(&rho, 32).unwrap();
        let w = wigner_transform(&rho, &grid).unwrap();
        assert_eq!(w.p.len, 17);
        let peak = 1.0 / (PI * HBAR);
        for ix in 0..grid.len {
            for ip in 0..w.p.len {
                let expect = if ip == 8 { peak } else { 0.0 };
                assert!((w.value(ix, ip) - expect).abs() <= 1e-12 * peak);
            }
        }
        // the row sits at p = 0
        assert!(w.p.point(8).abs() < 1e-40);
    }

    #[test]
    fn aliasing_guard() {
        let rho = MomentumState1D::new(DensityMatrix::pure_basis(4, 0).unwrap(), 0.0, DQ).unwrap();
        let too_wide = UniformGrid::new(0.0, rho.max_x_span() / 10.0, 11).unwrap();
        assert!(matches!(wigner_transform(&rho, &too_wide), Err(Error::Grid(_))));
        assert!(UniformGrid::new(0.0, 0.0, 3).is_err());
        assert!(MomentumState1D::new(DensityMatrix::pure_basis(2, 0).unwrap(), 0.0, -1.0).is_err());
    }

    #[test]
    fn superposition_fringe() {
        // (|p1> + |p2>)/sqrt 2: f_w at (p1 + p2)/2 is cos(x (p2 - p1)/hbar) / (pi hbar)
        let n = 12;
        let (j1, j2) = (2usize, 9usize);
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[j1] = Complex64::new(1.0, 0.0);
        psi[j2] = Complex64::new(1.0, 0.0);
        let rho = MomentumState1D::new(DensityMatrix::from_state_vector(&psi).unwrap(), 0.0, DQ).unwrap();
        let grid = centered_x_grid(&rho, 64).unwrap();
        let w = wigner_transform(&rho, &grid).unwrap();
        let dp = (j2 - j1) as f64 * DQ;
        let period = 2.0 * PI * HBAR / dp;
        let peak = 1.0 / (PI * HBAR);
        let row = j1 + j2;
        assert!((w.p.point(row) - 0.5 * (j1 + j2) as f64 * DQ).abs() < 1e-40);
        for ix in 0..grid.len {
            let x = grid.point(ix);
            let expect = peak * (2.0 * PI * x / period).cos();
            assert!((w.value(ix, row) - expect).abs() <= 1e-12 * peak);
            // shifting by one period reproduces the value
            let shifted = peak * (2.0 * PI * (x + period) / period).cos();
            assert!((shifted - expect).abs() <= 1e-9 * peak);
        }
        // diagonal rows carry the two populations
        assert!((w.momentum_marginal(2 * j1) * DQ - 0.5).abs() < 1e-12);
        assert!((w.momentum_marginal(2 * j2) * DQ - 0.5).abs() < 1e-12);
    }

    #[test]
    fn imaginary_residue_is_round_off() {
        let psi: Vec<Complex64> = (0..10)
            .map(|j| Complex64::from_polar(1.0 + 0.1 * j as f64, 0.7 * j as f64))
            .collect();
        let rho = MomentumState1D::new(DensityMatrix::from_state_vector(&psi).unwrap(), 0.0, DQ).unwrap();
        let w = wigner_transform(&rho, &centered_x_grid(&rho, 40).unwrap()).unwrap();
        assert!(w.max_imag_residue <= 1e-12 * w.max_abs());
    }
}
