//! Diffuse (incoherent) scattering in the static approximation: total
//! diffusion cross section, coherent-beam attenuation rate and the
//! angular acceptance integral A(phi).
//!
//! Elastic kinematics throughout: a neutron of momentum p0 deflected by a
//! polar angle theta transfers q(theta) = 2 (p0/hbar) sin(theta/2).

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Beam, Medium};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{one_minus_cos, sinc_minus_one};
use crate::structure::{s_static, StructureModel, Wavenumber};

/// Relative accuracy requested from every angular quadrature.
pub const ANGULAR_TOLERANCE: f64 = 1e-12;

/// Momentum transfer over hbar for elastic deflection by `theta`, m^-1.
pub fn momentum_transfer(beam: &Beam, theta: f64) -> f64 {
    2.0 * beam.wavenumber() * (0.5 * theta).sin()
}

fn check_angle(phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::domain(format!(
            "acceptance angle must lie in [0, pi], got {phi}"
        )));
    }
    Ok(())
}

/// \int_0^phi sin(theta) S_c(q(theta)) d theta.
fn angular_integral(model: &StructureModel, beam: &Beam, phi: f64) -> Result<f64> {
    // the quadrature takes an infallible integrand: park the first error and poison the sum
    let failure = RefCell::new(None);
    let integrand = |theta: f64| {
        let q = Wavenumber::new(momentum_transfer(beam, theta).abs());
        match q.and_then(|q| s_static(model, q)) {
            Ok(s) => theta.sin() * s,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = integrate(integrand, 0.0, phi, Tolerance::relative(ANGULAR_TOLERANCE));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(result?.value)
}

/// \int d\Omega S_c(q) over the full sphere, sr.
pub fn solid_angle_integral(model: &StructureModel, beam: &Beam) -> Result<f64> {
    Ok(2.0 * PI * angular_integral(model, beam, PI)?)
}

/// Total diffusion cross section per particle, sigma_d = b^2 \int d\Omega S_c(q), m^2.
pub fn diffusion_cross_section(medium: &Medium, beam: &Beam, model: &StructureModel) -> Result<f64> {
    let b = medium.scattering_length();
    Ok(b * b * solid_angle_integral(model, beam)?)
}

/// Rate at which the coherent beam loses neutrons to diffuse scattering,
/// n_o (p0/m) sigma_d, s^-1.
pub fn attenuation_rate(medium: &Medium, beam: &Beam, model: &StructureModel) -> Result<f64> {
    Ok(medium.number_density() * beam.speed() * diffusion_cross_section(medium, beam, model)?)
}

/// Closed-form A(phi) for the medium's dilute hard-sphere gas.
pub fn acceptance_closed_form(medium: &Medium, beam: &Beam, phi: f64) -> Result<f64> {
    check_angle(phi)?;
    let b = medium.scattering_length();
    let prefactor = 2.0 * PI * medium.number_density() * b * b * medium.thickness();
    let a = medium.hard_sphere_diameter();
    let open = one_minus_cos(phi);
    if a == 0.0 {
        return Ok(prefactor * open);
    }
    let k = a * beam.wavenumber();
    let depletion = medium.packing_fraction(); // 1 - S_c(0)
    let x = 2.0 * k * (0.5 * phi).sin(); // k sqrt(2 (1 - cos phi))
    Ok(prefactor * (open + 3.0 * depletion / (k * k) * sinc_minus_one(x)))
}

/// A(phi) = 2 pi n_o b^2 D \int_0^phi sin(theta) S_c(q(theta)) d theta by adaptive quadrature.
pub fn acceptance_quadrature(
    medium: &Medium,
    beam: &Beam,
    model: &StructureModel,
    phi: f64,
) -> Result<f64> {
    check_angle(phi)?;
    let b = medium.scattering_length();
    let prefactor = 2.0 * PI * medium.number_density() * b * b * medium.thickness();
    if prefactor == 0.0 || phi == 0.0 {
        return Ok(0.0);
    }
    Ok(prefactor * angular_integral(model, beam, phi)?)
}

/// Small-angle expansion of the hard-sphere A(phi) through phi^4.
///
/// The caller owns the validity range (phi << 1).
pub fn acceptance_small_angle(medium: &Medium, beam: &Beam, phi: f64) -> f64 {
    let b = medium.scattering_length();
    let depletion = medium.packing_fraction();
    let s0 = 1.0 - depletion;
    let k = medium.hard_sphere_diameter() * beam.wavenumber();
    let phi2 = phi * phi;
    PI * medium.number_density()
        * b
        * b
        * medium.thickness()
        * (phi2 * s0 + phi2 * phi2 * (depletion * k * k / 20.0 - s0 / 12.0))
}

/// Leading small-angle term pi n_o b^2 D S_c(0) phi^2, valid for any S_c.
pub fn acceptance_leading_term(medium: &Medium, s_zero: f64, phi: f64) -> f64 {
    let b = medium.scattering_length();
    PI * medium.number_density() * b * b * medium.thickness() * s_zero * phi * phi
}

/// Sampled A(phi).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptanceCurve {
    pub samples: Vec<(f64, f64)>,
    pub medium: Medium,
    pub beam: Beam,
    pub model: &'static str,
}

impl AcceptanceCurve {
    /// Evaluate A by quadrature at each angle; `phis` strictly increasing in [0, pi].
    pub fn compute(medium: &Medium, beam: &Beam, model: &StructureModel, phis: &[f64]) -> Result<Self> {
        if phis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("acceptance angles must be strictly increasing"));
        }
        let samples = phis
            .iter()
            .map(|&phi| Ok((phi, acceptance_quadrature(medium, beam, model, phi)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AcceptanceCurve {
            samples,
            medium: *medium,
            beam: *beam,
            model: model.kind(),
        })
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;

    fn gas(a: f64, eta: f64) -> (Medium, Beam) {
        let beam = Beam::from_wavelength(1.8e-10).unwrap();
        let n = if a > 0.0 { eta / (4.0 / 3.0 * PI * a.powi(3)) } else { 2.7e25 };
        (Medium::new(n, 6e-15, a, 1e-2).unwrap(), beam)
    }

    #[test]
    fn isotropic_cross_section_is_four_pi_b_squared() {
        let (m, beam) = gas(0.0, 0.0);
        let model = StructureModel::hard_sphere_for(&m);
        let sigma = diffusion_cross_section(&m, &beam, &model).unwrap();
        let expect = 4.0 * PI * 36e-30;
        assert!((sigma - expect).abs() <= 1e-13 * expect);
        let zero_b = m.with_scattering_length(0.0).unwrap();
        assert_eq!(diffusion_cross_section(&zero_b, &beam, &model).unwrap(), 0.0);
        assert_eq!(attenuation_rate(&zero_b, &beam, &model).unwrap(), 0.0);
    }

    #[test]
    fn full_acceptance_equals_cross_section() {
        // p0 a / hbar = 5 at packing 0.01
        let beam = Beam::from_wavelength(1.8e-10).unwrap();
        let a = 5.0 * HBAR / beam.momentum();
        let (m, _) = gas(a, 0.01);
        let model = StructureModel::hard_sphere_for(&m);
        let sigma = diffusion_cross_section(&m, &beam, &model).unwrap();
        let closed = acceptance_closed_form(&m, &beam, PI).unwrap();
        let target = m.number_density() * sigma * m.thickness();
        assert!((closed - target).abs() <= 1e-8 * target, "{closed} {target}");
    }

    #[test]
    fn closed_form_endpoints_and_domain() {
        let (m, beam) = gas(3e-10, 0.01);
        assert_eq!(acceptance_closed_form(&m, &beam, 0.0).unwrap(), 0.0);
        assert!(acceptance_closed_form(&m, &beam, -1e-9).is_err());
        assert!(acceptance_closed_form(&m, &beam, PI + 1e-9).is_err());
        assert!(acceptance_quadrature(&m, &beam, &StructureModel::hard_sphere_for(&m), 4.0).is_err());
    }

    #[test]
    fn constant_structure_is_linear() {
        let (m, beam) = gas(0.0, 0.0);
        let unit = StructureModel::hard_sphere_for(&m);
        let q_max = 2.0 * beam.wavenumber() * 1.01;
        let half = StructureModel::tabulated(vec![0.0, q_max], vec![0.5, 0.5]).unwrap();
        for phi in [1e-4, 0.3, 2.0, PI] {
            let one = acceptance_quadrature(&m, &beam, &unit, phi).unwrap();
            let analytic = 2.0 * PI * m.number_density() * 36e-30 * m.thickness() * 2.0 * (0.5 * phi).sin().powi(2);
            assert!((one - analytic).abs() <= 1e-12 * analytic);
            let h = acceptance_quadrature(&m, &beam, &half, phi).unwrap();
            assert!((h - 0.5 * one).abs() <= 1e-12 * one);
        }
    }

    #[test]
    fn small_angle_point_particles_is_cosine_series() {
        let (m, beam) = gas(0.0, 0.0);
        let phi: f64 = 0.01;
        let pre = PI * m.number_density() * 36e-30 * m.thickness();
        let expect = pre * (phi * phi - phi.powi(4) / 12.0);
        assert!((acceptance_small_angle(&m, &beam, phi) - expect).abs() <= 1e-14 * expect);
        assert_eq!(acceptance_small_angle(&m, &beam, 0.0), 0.0);
    }

    #[test]
    fn tabulated_out_of_range_propagates() {
        let (m, beam) = gas(0.0, 0.0);
        let short = StructureModel::tabulated(vec![0.0, 1e9], vec![1.0, 1.0]).unwrap();
        let err = acceptance_quadrature(&m, &beam, &short, 1.0).unwrap_err();
        assert!(matches!(err, Error::Extrapolation { .. }));
    }

    #[test]
    fn curve_is_monotone() {
        let (m, beam) = gas(3e-10, 0.05);
        let model = StructureModel::hard_sphere_for(&m);
        let phis: Vec<f64> = (0..=20).map(|i| PI * i as f64 / 20.0).collect();
        let curve = AcceptanceCurve::compute(&m, &beam, &model, &phis).unwrap();
        assert_eq!(curve.samples[0].1, 0.0);
        assert!(curve.is_non_decreasing());
        assert!(AcceptanceCurve::compute(&m, &beam, &model, &[0.2, 0.1]).is_err());
    }

    #[test]
    fn linear_in_b_squared_and_thickness() {
        let (m, beam) = gas(3e-10, 0.01);
        let model = StructureModel::hard_sphere_for(&m);
        let m2 = m.with_scattering_length(2.0 * m.scattering_length()).unwrap();
        let m3 = m.with_thickness(3.0 * m.thickness()).unwrap();
        let phi = 0.02;
        let base = [
            diffusion_cross_section(&m, &beam, &model).unwrap(),
            acceptance_closed_form(&m, &beam, phi).unwrap(),
            acceptance_quadrature(&m, &beam, &model, phi).unwrap(),
            acceptance_small_angle(&m, &beam, phi),
        ];
        let b2 = [
            diffusion_cross_section(&m2, &beam, &model).unwrap(),
            acceptance_closed_form(&m2, &beam, phi).unwrap(),
            acceptance_quadrature(&m2, &beam, &model, phi).unwrap(),
            acceptance_small_angle(&m2, &beam, phi),
        ];
        for (x, y) in base.iter().zip(&b2) {
            assert!((y - 4.0 * x).abs() <= 1e-13 * y);
        }
        for (x, y) in base[1..].iter().zip([
            acceptance_closed_form(&m3, &beam, phi).unwrap(),
            acceptance_quadrature(&m3, &beam, &model, phi).unwrap(),
            acceptance_small_angle(&m3, &beam, phi),
        ]) {
            assert!((y - 3.0 * x).abs() <= 1e-13 * y);
        }
    }
}
