//! CODATA 2018 values in SI units.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Neutron mass, kg.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Planck constant, J s.
pub const PLANCK: f64 = 2.0 * std::f64::consts::PI * HBAR;

/// One angstrom in metres.
pub const ANGSTROM: f64 = 1e-10;

/// The constants bundled as a value, for callers that want to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub neutron_mass: f64,
    pub boltzmann: f64,
}

impl Constants {
    pub const CODATA_2018: Constants = Constants {
        hbar: HBAR,
        neutron_mass: NEUTRON_MASS,
        boltzmann: BOLTZMANN,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Fermi pseudopotential strength 2 pi hbar^2 / m, J m^3 per metre of scattering length.
pub fn fermi_prefactor() -> f64 {
    2.0 * std::f64::consts::PI * HBAR * HBAR / NEUTRON_MASS
}
