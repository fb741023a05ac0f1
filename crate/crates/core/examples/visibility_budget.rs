//! How much of an interferometer's fringe loss is diffuse scattering caught by the detector.

use noptica::constants::ANGSTROM;
use noptica::interferometry::visibility_budget;
use noptica::params::{Beam, Medium};
use noptica::structure::StructureModel;

fn main() -> noptica::Result<()> {
    let medium = Medium::new(2.7e27, 6.0e-15, 3.0e-10, 1.0e-2)?;
    let beam = Beam::from_wavelength(1.8 * ANGSTROM)?;
    let model = StructureModel::hard_sphere_for(&medium);

    println!("{:>10} {:>14} {:>14} {:>14} {:>14} {:>6}", "phi", "A(phi)", "transmitted", "coherent", "corrected V", "1st");
    for phi in [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, std::f64::consts::PI] {
        let b = visibility_budget(&medium, &beam, &model, phi)?;
        println!(
            "{phi:>10.1e} {:>14.6e} {:>14.10} {:>14.10} {:>14.10} {:>6}",
            b.a_phi, b.transmitted_flux_fraction, b.coherent_flux_fraction, b.corrected_fringe_amplitude,
            b.first_order_valid
        );
    }
    Ok(())
}
