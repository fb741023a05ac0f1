//! Slow-neutron optics in a liquid medium.
//!
//! Coherent propagation is described by the Fermi pseudopotential, the
//! refractive index and the slab phase shift ([`optics`]). Incoherent
//! scattering enters through the static structure function ([`structure`]),
//! the diffusion cross section and the angular acceptance integral
//! ([`diffuse`]), and a master equation over a grid of scattering directions
//! ([`lindblad`]). [`wigner`] gives phase-space pictures of momentum states and
//! [`interferometry`] combines the pieces into fringe-visibility budgets.
//!
//! All quantities are SI unless a name says otherwise.
//!
//! ```
//! use noptica::constants::ANGSTROM;
//! use noptica::diffuse::{acceptance_closed_form, diffusion_cross_section};
//! use noptica::params::{Beam, Medium};
//! use noptica::structure::StructureModel;
//!
//! let medium = Medium::new(2.7e25, 6.0e-15, 3.0e-10, 1.0e-2).unwrap();
//! let beam = Beam::from_wavelength(1.8 * ANGSTROM).unwrap();
//! let sigma_d = diffusion_cross_section(&medium, &beam, &StructureModel::hard_sphere_for(&medium)).unwrap();
//! let full = acceptance_closed_form(&medium, &beam, std::f64::consts::PI).unwrap();
//! assert!((full - 2.7e25 * sigma_d * 1.0e-2).abs() < 1e-12 * full);
//! ```

pub mod cli;
pub mod config;
pub mod constants;
pub mod diffuse;
pub mod error;
pub mod interferometry;
pub mod interp;
pub mod lindblad;
pub mod optics;
pub mod params;
pub mod quadrature;
pub mod special;
pub mod structure;
pub mod wigner;

pub use error::{Error, Result};
