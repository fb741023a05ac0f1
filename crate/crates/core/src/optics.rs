//! Coherent propagation through a homogeneous medium: optical potential,
//! refractive index and interferometric phase shift.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::fermi_prefactor;
use crate::diffuse::solid_angle_integral;
use crate::error::{Error, Result};
use crate::params::{Beam, Medium};
use crate::structure::StructureModel;

/// Complex optical potential, J. The imaginary part is never positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalPotential {
    pub value: Complex64,
}

/// Phase shift chi = chi' + i chi'' accumulated across the sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseShift {
    /// rad
    pub chi_prime: f64,
    /// rad, >= 0
    pub chi_double_prime: f64,
}

impl PhaseShift {
    /// Transmitted amplitude factor exp(i chi).
    pub fn transmission(&self) -> Complex64 {
        Complex64::new(-self.chi_double_prime, self.chi_prime).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexForm {
    Exact,
    FirstOrder,
}

/// Real optical potential (2 pi hbar^2 / m) b n_o, J.
pub fn optical_potential(medium: &Medium) -> f64 {
    fermi_prefactor() * medium.scattering_length() * medium.number_density()
}

/// Refractive index from the real optical potential.
///
/// `Exact` is sqrt(1 - (2 pi hbar^2 / m E) b n_o) and fails below the critical
/// energy; `FirstOrder` is 1 - (lambda^2 / 2 pi) b n_o.
pub fn refractive_index_gs(medium: &Medium, beam: &Beam, form: IndexForm) -> Result<f64> {
    match form {
        IndexForm::Exact => {
            let strength = fermi_prefactor() / beam.energy()
                * medium.scattering_length()
                * medium.number_density();
            let radicand = 1.0 - strength;
            if radicand < 0.0 {
                return Err(Error::TotalReflection { radicand });
            }
            Ok(radicand.sqrt())
        }
        // f = -b: the same expression as the forward-amplitude form
        IndexForm::FirstOrder => Ok(refractive_index_lax(medium, beam, -medium.scattering_length())),
    }
}

/// Refractive index from the forward scattering amplitude `f0` (m):
/// 1 + (lambda^2 / 2 pi) n_o f0.
pub fn refractive_index_lax(medium: &Medium, beam: &Beam, f0: f64) -> f64 {
    refractive_index_lax_corrected(medium, beam, f0, 1.0)
}

/// As [`refractive_index_lax`] with the local-field factor `c` multiplying `f0`.
pub fn refractive_index_lax_corrected(medium: &Medium, beam: &Beam, f0: f64, c: f64) -> f64 {
    let lambda = beam.wavelength();
    1.0 + lambda * lambda / (2.0 * PI) * medium.number_density() * (c * f0)
}

/// chi' = -n_o b lambda D, chi'' = n_o sigma_t D / 2.
pub fn phase_shift(medium: &Medium, beam: &Beam, sigma_t: f64) -> Result<PhaseShift> {
    if !(sigma_t.is_finite() && sigma_t >= 0.0) {
        return Err(Error::domain(format!(
            "total cross section must be >= 0, got {sigma_t:e}"
        )));
    }
    let n = medium.number_density();
    let d = medium.thickness();
    Ok(PhaseShift {
        chi_prime: -n * medium.scattering_length() * beam.wavelength() * d,
        chi_double_prime: n * sigma_t * d / 2.0,
    })
}

/// Optical potential including the diffuse-scattering loss,
/// (2 pi hbar^2 / m) n_o [b - i (b^2 / 4 pi)(p0/hbar) \int d\Omega S_c(q)].
pub fn complex_optical_potential(
    medium: &Medium,
    beam: &Beam,
    model: &StructureModel,
) -> Result<OpticalPotential> {
    let b = medium.scattering_length();
    let scale = fermi_prefactor() * medium.number_density();
    if b == 0.0 {
        return Ok(OpticalPotential {
            value: Complex64::new(0.0, 0.0),
        });
    }
    let omega = solid_angle_integral(model, beam)?;
    let loss = b * b / (4.0 * PI) * beam.wavenumber() * omega;
    Ok(OpticalPotential {
        value: Complex64::new(optical_potential(medium), -scale * loss),
    })
}

/// 2 |Im U| / hbar, the loss rate implied by the imaginary potential, s^-1.
pub fn potential_loss_rate(potential: &OpticalPotential) -> f64 {
    2.0 * potential.value.im.abs() / crate::constants::HBAR
}

/// Critical energy below which the exact index is imaginary, J (None for b <= 0).
pub fn critical_energy(medium: &Medium) -> Option<f64> {
    let u = optical_potential(medium);
    (u > 0.0).then_some(u)
}
