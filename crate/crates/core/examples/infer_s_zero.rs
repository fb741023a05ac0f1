//! Recover the long-wavelength structure factor from a measured small-angle acceptance.

use noptica::constants::ANGSTROM;
use noptica::diffuse::acceptance_quadrature;
use noptica::interferometry::infer_s_zero;
use noptica::params::{Beam, Medium};
use noptica::structure::StructureModel;

fn main() -> noptica::Result<()> {
    let medium = Medium::new(2.7e27, 6.0e-15, 3.0e-10, 1.0e-2)?;
    let beam = Beam::from_wavelength(1.8 * ANGSTROM)?;
    let model = StructureModel::hard_sphere_for(&medium);
    let truth = model.s_zero()?;

    for phi in [1e-5, 1e-4, 1e-3] {
        // stand-in for a measurement
        let a = acceptance_quadrature(&medium, &beam, &model, phi)?;
        let est = infer_s_zero(a, &medium, &beam, phi)?;
        println!(
            "phi={phi:.0e}  S0={:.10}  truth={truth:.10}  rel err {:.2e}  phi^4 share {:.2e}",
            est.s_zero,
            (est.s_zero - truth).abs() / truth,
            est.phi4_fraction
        );
    }
    // a wide cone breaks the leading-order inversion
    match infer_s_zero(1e-3, &medium, &beam, 0.3) {
        Ok(e) => println!("unexpected {e:?}"),
        Err(e) => println!("phi=0.3 rejected: {e}"),
    }
    Ok(())
}
