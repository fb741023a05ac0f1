use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::DirectionGrid;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::params::{Beam, Medium};
use crate::structure::{s_static, StructureModel, Wavenumber};

/// Rate-weighted momentum-transfer jump operators L_ij = sqrt(hbar R_ij) |i><j|.
///
/// Rates are stored densely, `rates[i * n + j]` being the rate for j -> i.
/// The loss operator Gamma = (1/2) sum L^dagger L is diagonal with entries
/// gamma_j = (hbar / 2) sum_i R_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperatorSet {
    dim: usize,
    rates: Vec<f64>,
    gamma: Vec<f64>,
}

impl JumpOperatorSet {
    /// `rates[i * dim + j]` in s^-1, all non-negative.
    pub fn from_rates(dim: usize, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != dim * dim || dim == 0 {
            return Err(Error::domain(format!(
                "expected {dim} x {dim} rates, got {}",
                rates.len()
            )));
        }
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::domain(format!("jump rates must be finite and >= 0, got {r:e}")));
        }
        let gamma = (0..dim)
            .map(|j| 0.5 * HBAR * (0..dim).map(|i| rates[i * dim + j]).sum::<f64>())
            .collect();
        Ok(JumpOperatorSet { dim, rates, gamma })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::from_rates(dim, vec![0.0; dim * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rate for the transition j -> i, s^-1.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[i * self.dim + j]
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Diagonal of Gamma, J.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Total rate out of direction j, 2 gamma_j / hbar, s^-1.
    pub fn out_rate(&self, j: usize) -> f64 {
        2.0 * self.gamma[j] / HBAR
    }

    pub fn max_out_rate(&self) -> f64 {
        (0..self.dim).map(|j| self.out_rate(j)).fold(0.0, f64::max)
    }

    /// Amplitude sqrt(hbar R_ij) of the operator |i><j|.
    pub fn amplitude(&self, i: usize, j: usize) -> f64 {
        (HBAR * self.rate(i, j)).sqrt()
    }

    /// Dense matrix of L_ij.
    pub fn operator(&self, i: usize, j: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        m[(i, j)] = Complex64::new(self.amplitude(i, j), 0.0);
        m
    }

    /// (1/2) sum_ij L_ij^dagger L_ij assembled from the operators themselves.
    pub fn loss_operator(&self) -> DMatrix<Complex64> {
        let mut gamma = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut acc = 0.0;
            for i in 0..self.dim {
                let a = self.amplitude(i, j);
                acc += a * a;
            }
            gamma[(j, j)] = Complex64::new(0.5 * acc, 0.0);
        }
        gamma
    }
}

/// Jump operators for diffuse scattering between grid directions.
///
/// R_ij = n_o (p0/m) b^2 S_c(q_ij) w_i with q_ij = (p0/hbar) |n_i - n_j|.
/// Only the correlated part S_c enters; forward coherent scattering lives in
/// the optical potential.
pub fn build_jump_operators(
    grid: &DirectionGrid,
    medium: &Medium,
    beam: &Beam,
    model: &StructureModel,
) -> Result<JumpOperatorSet> {
    let n = grid.len();
    let b = medium.scattering_length();
    let scale = medium.number_density() * beam.speed() * b * b;
    let k = beam.wavenumber();
    let np = grid.n_polar();
    let na = grid.n_azimuth();
    let cos_polar = grid.cos_polar();
    // on a product grid |n_i - n_j| depends only on both rings and the azimuth offset
    let table: Vec<f64> = (0..np * np * na)
        .into_par_iter()
        .map(|key| {
            let (pi, rest) = (key / (np * na), key % (np * na));
            let (pj, dk) = (rest / na, rest % na);
            let (ci, cj) = (cos_polar[pi], cos_polar[pj]);
            let si = (1.0 - ci * ci).max(0.0).sqrt();
            let sj = (1.0 - cj * cj).max(0.0).sqrt();
            let dphi = 2.0 * std::f64::consts::PI * dk as f64 / na as f64;
            let cos_angle = (ci * cj + si * sj * dphi.cos()).clamp(-1.0, 1.0);
            let chord = (2.0 * (1.0 - cos_angle)).max(0.0).sqrt();
            s_static(model, Wavenumber::new(k * chord)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = grid.weights();
    let rates: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (pi, ai) = (i / na, i % na);
            let (pj, aj) = (j / na, j % na);
            let dk = (ai + na - aj) % na;
            scale * table[(pi * np + pj) * na + dk] * weights[i]
        })
        .collect();
    JumpOperatorSet::from_rates(n, rates)
}
