//! Macrosystem and beam parameters.
//!
//! Everything is stored in SI units. Unit conversion from user-facing
//! quantities (angstrom, cm^-3) happens in [`crate::config`].

use serde::Serialize;

use crate::constants::{HBAR, NEUTRON_MASS, PLANCK};
use crate::error::{Error, Result};

/// A homogeneous medium of one kind of scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Medium {
    number_density: f64,
    scattering_length: f64,
    hard_sphere_diameter: f64,
    thickness: f64,
    temperature: Option<f64>,
}

impl Medium {
    /// `number_density` in m^-3, `scattering_length` (bound, real) in m,
    /// `hard_sphere_diameter` and `thickness` in m.
    pub fn new(
        number_density: f64,
        scattering_length: f64,
        hard_sphere_diameter: f64,
        thickness: f64,
    ) -> Result<Self> {
        let medium = Medium {
            number_density,
            scattering_length,
            hard_sphere_diameter,
            thickness,
            temperature: None,
        };
        medium.validate()?;
        Ok(medium)
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        self.temperature = Some(temperature);
        self.validate()?;
        Ok(self)
    }

    pub fn with_number_density(mut self, number_density: f64) -> Result<Self> {
        self.number_density = number_density;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scattering_length(mut self, scattering_length: f64) -> Result<Self> {
        self.scattering_length = scattering_length;
        self.validate()?;
        Ok(self)
    }

    pub fn with_hard_sphere_diameter(mut self, diameter: f64) -> Result<Self> {
        self.hard_sphere_diameter = diameter;
        self.validate()?;
        Ok(self)
    }

    pub fn with_thickness(mut self, thickness: f64) -> Result<Self> {
        self.thickness = thickness;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.number_density.is_finite() && self.number_density > 0.0) {
            return Err(Error::domain(format!(
                "number density must be positive, got {:e}",
                self.number_density
            )));
        }
        if !self.scattering_length.is_finite() {
            return Err(Error::domain("scattering length must be finite"));
        }
        if !(self.hard_sphere_diameter.is_finite() && self.hard_sphere_diameter >= 0.0) {
            return Err(Error::domain(format!(
                "hard-sphere diameter must be >= 0, got {:e}",
                self.hard_sphere_diameter
            )));
        }
        if !(self.thickness.is_finite() && self.thickness > 0.0) {
            return Err(Error::domain(format!(
                "thickness must be positive, got {:e}",
                self.thickness
            )));
        }
        if let Some(t) = self.temperature {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::domain(format!(
                    "temperature must be positive, got {t:e}"
                )));
            }
        }
        let eta = self.packing_fraction();
        if eta >= 1.0 {
            return Err(Error::domain(format!(
                "packing fraction (4/3) pi a^3 n_o = {eta} must be < 1 for the dilute hard-sphere gas"
            )));
        }
        Ok(())
    }

    /// m^-3
    pub fn number_density(&self) -> f64 {
        self.number_density
    }

    /// m
    pub fn scattering_length(&self) -> f64 {
        self.scattering_length
    }

    /// m
    pub fn hard_sphere_diameter(&self) -> f64 {
        self.hard_sphere_diameter
    }

    /// m
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// K, when given.
    pub fn temperature(&self) -> Option<f64> {
        self.temperature
    }

    /// Excluded-volume fraction (4/3) pi a^3 n_o.
    pub fn packing_fraction(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.hard_sphere_diameter.powi(3) * self.number_density
    }
}

/// A monochromatic incident neutron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beam {
    momentum: f64,
}

impl Beam {
    /// `momentum` in kg m/s.
    pub fn from_momentum(momentum: f64) -> Result<Self> {
        if !(momentum.is_finite() && momentum > 0.0) {
            return Err(Error::domain(format!(
                "beam momentum must be positive, got {momentum:e}"
            )));
        }
        Ok(Beam { momentum })
    }

    /// `wavelength` in m; p0 = 2 pi hbar / lambda.
    pub fn from_wavelength(wavelength: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::domain(format!(
                "wavelength must be positive, got {wavelength:e}"
            )));
        }
        Self::from_momentum(PLANCK / wavelength)
    }

    /// kg m/s
    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    /// m
    pub fn wavelength(&self) -> f64 {
        PLANCK / self.momentum
    }

    /// Kinetic energy p0^2 / 2m, J.
    pub fn energy(&self) -> f64 {
        self.momentum * self.momentum / (2.0 * NEUTRON_MASS)
    }

    /// p0 / hbar, m^-1.
    pub fn wavenumber(&self) -> f64 {
        self.momentum / HBAR
    }

    /// p0 / m, m/s.
    pub fn speed(&self) -> f64 {
        self.momentum / NEUTRON_MASS
    }
}

/// Shorthand for [`Beam::from_wavelength`].
pub fn beam_from_wavelength(wavelength: f64) -> Result<Beam> {
    Beam::from_wavelength(wavelength)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wavelength_sets_momentum_and_energy() {
        let lambda = 1.8e-10;
        let beam = beam_from_wavelength(lambda).unwrap();
        let p0 = 2.0 * std::f64::consts::PI * HBAR / lambda;
        assert_eq!(beam.momentum(), p0);
        // E = h^2 / (2 m lambda^2), evaluated independently
        let h = 6.626_070_15e-34;
        let e = h * h / (2.0 * NEUTRON_MASS * lambda * lambda);
        assert!((beam.energy() - e).abs() / e < 1e-8);
        // a 1.8 angstrom neutron is thermal: about 25 meV
        let mev = beam.energy() / 1.602_176_634e-22;
        assert!((mev - 25.25).abs() < 0.1, "{mev}");
    }

    #[test]
    fn non_positive_wavelength_rejected() {
        assert!(matches!(beam_from_wavelength(0.0), Err(Error::Domain(_))));
        assert!(matches!(beam_from_wavelength(-1e-10), Err(Error::Domain(_))));
        assert!(beam_from_wavelength(f64::NAN).is_err());
    }

    #[test]
    fn medium_rejects_dense_packing() {
        // (4/3) pi a^3 n = 1 exactly at this density
        let a = 3e-10;
        let n = 1.0 / (4.0 / 3.0 * std::f64::consts::PI * a * a * a);
        assert!(Medium::new(n * 1.01, 5e-15, a, 1e-2).is_err());
        assert!(Medium::new(n * 0.5, 5e-15, a, 1e-2).is_ok());
    }

    #[test]
    fn medium_rejects_bad_fields() {
        assert!(Medium::new(0.0, 5e-15, 0.0, 1e-2).is_err());
        assert!(Medium::new(1e25, 5e-15, -1e-10, 1e-2).is_err());
        assert!(Medium::new(1e25, 5e-15, 0.0, 0.0).is_err());
        let m = Medium::new(1e25, 5e-15, 0.0, 1e-2).unwrap();
        assert!(m.with_temperature(0.0).is_err());
        assert_eq!(m.with_temperature(300.0).unwrap().temperature(), Some(300.0));
    }

    proptest! {
        #[test]
        fn wavelength_round_trip(p0 in 1e-26f64..1e-22) {
            let lambda = PLANCK / p0;
            let beam = Beam::from_wavelength(lambda).unwrap();
            prop_assert!((beam.momentum() - p0).abs() / p0 <= 1e-15);
            prop_assert!((beam.wavelength() - lambda).abs() / lambda <= 1e-15);
            prop_assert!((beam.wavelength() * beam.momentum() / PLANCK - 1.0).abs() <= 1e-15);
        }
    }
}
