//! Phase and attenuation of a beam crossing a slab, and the complex potential behind them.

use noptica::constants::ANGSTROM;
use noptica::diffuse::{attenuation_rate, diffusion_cross_section};
use noptica::optics::{complex_optical_potential, phase_shift, potential_loss_rate};
use noptica::params::{Beam, Medium};
use noptica::structure::StructureModel;

fn main() -> noptica::Result<()> {
    let medium = Medium::new(2.7e25, 6.0e-15, 3.0e-10, 1.0e-2)?;
    let beam = Beam::from_wavelength(1.8 * ANGSTROM)?;
    let model = StructureModel::hard_sphere_for(&medium);

    let sigma_d = diffusion_cross_section(&medium, &beam, &model)?;
    let chi = phase_shift(&medium, &beam, sigma_d)?;
    println!("sigma_d     = {:.10e} m^2", sigma_d);
    println!("chi'        = {:.10e} rad", chi.chi_prime);
    println!("chi''       = {:.10e}", chi.chi_double_prime);
    println!("transmission amplitude {}", chi.transmission());

    let u = complex_optical_potential(&medium, &beam, &model)?;
    println!("U           = {:.10e} {:+.10e} i J", u.value.re, u.value.im);
    // loss rate from Im U against the kinetic attenuation rate
    let from_potential = potential_loss_rate(&u);
    let kinetic = attenuation_rate(&medium, &beam, &model)?;
    println!("2|Im U|/hbar = {from_potential:.15e} 1/s");
    println!("n v sigma_d  = {kinetic:.15e} 1/s");
    println!("relative gap {:.2e}", (from_potential - kinetic).abs() / kinetic);
    Ok(())
}
