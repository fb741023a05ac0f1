//! Direction-space master equation: a beam prepared in the forward direction
//! leaks into the diffuse halo at the kinetic attenuation rate.

use noptica::constants::ANGSTROM;
use noptica::diffuse::attenuation_rate;
use noptica::lindblad::{
    build_direction_grid, build_jump_operators, coherent_survival, evolve_with, DensityMatrix, EvolveOptions,
    Generator,
};
use noptica::optics::optical_potential;
use noptica::params::{Beam, Medium};
use noptica::structure::StructureModel;

fn main() -> noptica::Result<()> {
    let medium = Medium::new(2.7e25, 6.0e-15, 0.0, 1.0e-2)?;
    let beam = Beam::from_wavelength(1.8 * ANGSTROM)?;
    let model = StructureModel::hard_sphere_for(&medium);

    let grid = build_direction_grid(64, 4)?;
    let jumps = build_jump_operators(&grid, &medium, &beam, &model)?;
    let gamma = attenuation_rate(&medium, &beam, &model)?;
    let j0 = grid.forward_index();
    println!("{} directions, out-rate {:.10e} 1/s, kinetic {:.10e} 1/s", grid.len(), jumps.out_rate(j0), gamma);

    let generator = Generator::new(jumps, beam.energy() + optical_potential(&medium));
    let opts = EvolveOptions::new(0.05 / gamma, 100);
    let traj = evolve_with(&DensityMatrix::pure_basis(grid.len(), j0)?, &generator, &opts)?;

    for (d, pops) in traj.diagnostics.iter().zip(&traj.populations).step_by(20) {
        println!(
            "t={:.4e}s  trace-1={:+.2e}  min eig={:+.2e}  rho00={:.12}",
            d.time,
            d.trace - 1.0,
            d.min_eigenvalue.unwrap_or(f64::NAN),
            pops[j0]
        );
    }
    let fit = coherent_survival(&traj, j0)?;
    println!("fitted decay {:.6e} 1/s (R^2 {:.8}), ratio to kinetic {:.5}", fit.rate, fit.r_squared, fit.rate / gamma);
    Ok(())
}
