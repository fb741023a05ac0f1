//! Diffuse flux accepted inside a cone of half-angle phi.

use std::f64::consts::PI;

use noptica::constants::ANGSTROM;
use noptica::diffuse::{
    acceptance_closed_form, acceptance_quadrature, acceptance_small_angle, diffusion_cross_section, AcceptanceCurve,
};
use noptica::params::{Beam, Medium};
use noptica::structure::StructureModel;

fn main() -> noptica::Result<()> {
    let medium = Medium::new(2.7e25, 6.0e-15, 3.0e-10, 1.0e-2)?;
    let beam = Beam::from_wavelength(1.8 * ANGSTROM)?;
    let model = StructureModel::hard_sphere_for(&medium);

    println!("{:>12} {:>24} {:>24} {:>24}", "phi", "closed", "quadrature", "small angle");
    for k in 0..=12 {
        let phi = 5e-6 * 10f64.powf(k as f64 * 0.5);
        let phi = phi.min(PI);
        println!(
            "{phi:>12.4e} {:>24.16e} {:>24.16e} {:>24.16e}",
            acceptance_closed_form(&medium, &beam, phi)?,
            acceptance_quadrature(&medium, &beam, &model, phi)?,
            acceptance_small_angle(&medium, &beam, phi)
        );
    }

    let full = acceptance_closed_form(&medium, &beam, PI)?;
    let sigma_d = diffusion_cross_section(&medium, &beam, &model)?;
    println!("A(pi) = {full:.16e}, n sigma_d D = {:.16e}", medium.number_density() * sigma_d * medium.thickness());

    let phis: Vec<f64> = (0..=40).map(|i| PI * i as f64 / 40.0).collect();
    let curve = AcceptanceCurve::compute(&medium, &beam, &model, &phis)?;
    println!("monotone in phi: {}", curve.is_non_decreasing());
    Ok(())
}
