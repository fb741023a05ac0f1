//! Interferometric observables: how diffuse neutrons re-entering an open-path
//! flux measurement bias the inferred fringe amplitude, and the inverse use
//! of the small-angle acceptance to estimate S_c(0).

use std::f64::consts::PI;

use serde::Serialize;

use crate::diffuse::{acceptance_leading_term, acceptance_quadrature, diffusion_cross_section};
use crate::error::{Error, Result};
use crate::optics::{phase_shift, PhaseShift};
use crate::params::{Beam, Medium};
use crate::structure::StructureModel;

/// First-order re-entry is trusted while A and n_o sigma_d D stay below this.
pub const FIRST_ORDER_LIMIT: f64 = 0.1;

/// Largest relative phi^4 correction tolerated by [`infer_s_zero`].
pub const SMALL_ANGLE_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityBudget {
    pub chi: PhaseShift,
    /// Diffuse probability inside the acceptance cone.
    pub a_phi: f64,
    /// Coherent plus accepted diffuse flux, first order in A.
    pub transmitted_flux_fraction: f64,
    /// exp(-2 chi'').
    pub coherent_flux_fraction: f64,
    /// Amplitude a purely optical treatment infers from the transmitted flux.
    pub uncorrected_fringe_amplitude: f64,
    /// Amplitude from the coherent flux alone, |exp(i chi)|.
    pub corrected_fringe_amplitude: f64,
    /// False once A or n_o sigma_d D exceeds [`FIRST_ORDER_LIMIT`].
    pub first_order_valid: bool,
}

/// Flux and fringe-amplitude budget for an acceptance half-angle `phi_acceptance`.
///
/// Attenuation is purely diffuse (sigma_t = sigma_d, no absorption).
pub fn visibility_budget(
    medium: &Medium,
    beam: &Beam,
    model: &StructureModel,
    phi_acceptance: f64,
) -> Result<VisibilityBudget> {
    let a_phi = acceptance_quadrature(medium, beam, model, phi_acceptance)?;
    let sigma_d = diffusion_cross_section(medium, beam, model)?;
    let chi = phase_shift(medium, beam, sigma_d)?;
    let coherent = (-2.0 * chi.chi_double_prime).exp();
    let transmitted = coherent + a_phi;
    let optical_depth = medium.number_density() * sigma_d * medium.thickness();
    Ok(VisibilityBudget {
        chi,
        a_phi,
        transmitted_flux_fraction: transmitted,
        coherent_flux_fraction: coherent,
        uncorrected_fringe_amplitude: transmitted.sqrt(),
        corrected_fringe_amplitude: coherent.sqrt(),
        first_order_valid: a_phi <= FIRST_ORDER_LIMIT && optical_depth <= FIRST_ORDER_LIMIT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SZeroEstimate {
    pub s_zero: f64,
    /// |phi^4 term / phi^2 term| evaluated at the estimate (infinite when it is 0).
    pub phi4_fraction: f64,
    pub leading_term_valid: bool,
}

/// Invert A(phi) ~ pi n_o b^2 D S_c(0) phi^2 for S_c(0).
///
/// Fails when phi^2 (k^2/20 + 1/12) >= 0.01 with k = a p0 / hbar, i.e. when
/// the phi^4 term can reach a percent of the leading term for S_c(0) of order one.
pub fn infer_s_zero(measured_a: f64, medium: &Medium, beam: &Beam, phi: f64) -> Result<SZeroEstimate> {
    if !(measured_a.is_finite() && measured_a >= 0.0) {
        return Err(Error::domain(format!("measured A must be >= 0, got {measured_a:e}")));
    }
    if !(phi > 0.0 && phi <= PI) {
        return Err(Error::domain(format!("phi must lie in (0, pi], got {phi}")));
    }
    if medium.scattering_length() == 0.0 {
        return Err(Error::domain("S_c(0) cannot be inferred for b = 0"));
    }
    let k = medium.hard_sphere_diameter() * beam.wavenumber();
    let bound = phi * phi * (k * k / 20.0 + 1.0 / 12.0);
    if bound >= SMALL_ANGLE_LIMIT {
        return Err(Error::SmallAngle(format!(
            "phi = {phi} too large: phi^2 (k^2/20 + 1/12) = {bound:.3e} >= {SMALL_ANGLE_LIMIT}"
        )));
    }
    let s_zero = measured_a / acceptance_leading_term(medium, 1.0, phi);
    let phi4_fraction = if s_zero > 0.0 {
        phi * phi * ((1.0 - s_zero) * k * k / 20.0 - s_zero / 12.0).abs() / s_zero
    } else {
        f64::INFINITY
    };
    Ok(SZeroEstimate {
        s_zero,
        phi4_fraction,
        leading_term_valid: phi4_fraction < SMALL_ANGLE_LIMIT,
    })
}
