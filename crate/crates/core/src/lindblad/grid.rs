//! Quadrature grids of propagation directions on the elastic shell.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Directions n_i (unit vectors) with solid-angle weights w_i (sr).
///
/// Product grid: Gauss-Legendre in cos(theta), descending so that index 0 is
/// closest to the forward (+z) direction, times a uniform azimuth. Flat index
/// is `polar * n_azimuth + azimuth`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    directions: Vec<[f64; 3]>,
    weights: Vec<f64>,
    cos_polar: Vec<f64>,
    n_polar: usize,
    n_azimuth: usize,
    cos_min: f64,
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Full-sphere grid; weights sum to 4 pi.
pub fn build_direction_grid(n_polar: usize, n_azimuth: usize) -> Result<DirectionGrid> {
    DirectionGrid::capped(n_polar, n_azimuth, PI)
}

/// Grid on the cap theta <= `max_angle`; weights sum to 2 pi (1 - cos max_angle).
pub fn build_capped_direction_grid(
    n_polar: usize,
    n_azimuth: usize,
    max_angle: f64,
) -> Result<DirectionGrid> {
    DirectionGrid::capped(n_polar, n_azimuth, max_angle)
}

impl DirectionGrid {
    fn capped(n_polar: usize, n_azimuth: usize, max_angle: f64) -> Result<Self> {
        if n_polar < 2 || n_azimuth < 1 {
            return Err(Error::Grid(format!(
                "direction grid needs n_polar >= 2 and n_azimuth >= 1, got {n_polar} x {n_azimuth}"
            )));
        }
        if !(max_angle > 0.0 && max_angle <= PI) {
            return Err(Error::Grid(format!("cap angle must lie in (0, pi], got {max_angle}")));
        }
        let cos_min = if max_angle == PI { -1.0 } else { max_angle.cos() };
        let (x, w) = gauss_legendre(n_polar);
        let half = 0.5 * (1.0 - cos_min);
        let dphi = 2.0 * PI / n_azimuth as f64;
        let mut directions = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        let mut cos_polar = Vec::with_capacity(n_polar);
        // descending cos(theta): reverse the ascending nodes
        for (xi, wi) in x.iter().zip(&w).rev() {
            let c = cos_min + half * (xi + 1.0);
            let s = (1.0 - c * c).max(0.0).sqrt();
            cos_polar.push(c);
            for k in 0..n_azimuth {
                let phi = k as f64 * dphi;
                directions.push([s * phi.cos(), s * phi.sin(), c]);
                weights.push(wi * half * dphi);
            }
        }
        Ok(DirectionGrid {
            directions,
            weights,
            cos_polar,
            n_polar,
            n_azimuth,
            cos_min,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn directions(&self) -> &[[f64; 3]] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    /// cos(theta) of each polar ring, descending.
    pub fn cos_polar(&self) -> &[f64] {
        &self.cos_polar
    }

    /// Total solid angle covered, sr.
    pub fn solid_angle(&self) -> f64 {
        2.0 * PI * (1.0 - self.cos_min)
    }

    /// Index of the direction closest to the forward beam axis.
    pub fn forward_index(&self) -> usize {
        0
    }

    /// Weighted sum of `f` over the grid.
    pub fn integrate<F: Fn(&[f64; 3]) -> f64>(&self, f: F) -> f64 {
        self.directions
            .iter()
            .zip(&self.weights)
            .map(|(n, w)| w * f(n))
            .sum()
    }
}
