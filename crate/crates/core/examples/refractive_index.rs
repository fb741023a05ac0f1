//! Refractive index of a liquid for slow neutrons, exact and first order.

use noptica::optics::{critical_energy, optical_potential, refractive_index_gs, refractive_index_lax, IndexForm};
use noptica::params::{Beam, Medium};
use noptica::constants::ANGSTROM;

fn main() -> noptica::Result<()> {
    // liquid-like density, nuclear scattering length of a few fm
    let medium = Medium::new(2.7e28, 6.0e-15, 0.0, 1.0e-2)?;
    println!("U = {:.6e} J", optical_potential(&medium));
    if let Some(ec) = critical_energy(&medium) {
        println!("critical energy {:.6e} J", ec);
    }
    println!("{:>10} {:>24} {:>24} {:>12}", "lambda/A", "n exact", "n first order", "lax - exact");
    for lambda in [1.0, 1.8, 10.0, 100.0, 1000.0, 2000.0] {
        let beam = Beam::from_wavelength(lambda * ANGSTROM)?;
        let first = refractive_index_gs(&medium, &beam, IndexForm::FirstOrder)?;
        let lax = refractive_index_lax(&medium, &beam, -medium.scattering_length());
        assert_eq!(first, lax);
        match refractive_index_gs(&medium, &beam, IndexForm::Exact) {
            Ok(exact) => println!("{lambda:>10.1} {exact:>24.17} {first:>24.17} {:>12.3e}", lax - exact),
            Err(e) => println!("{lambda:>10.1} {:>24} {first:>24.17}   ({e})", "-"),
        }
    }
    Ok(())
}
