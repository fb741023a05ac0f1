//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use noptica::constants::{ANGSTROM, HBAR};
use noptica::diffuse::{
    acceptance_closed_form, acceptance_quadrature, acceptance_small_angle, attenuation_rate, diffusion_cross_section,
};
use noptica::interferometry::infer_s_zero;
use noptica::lindblad::{
    build_direction_grid, build_jump_operators, coherent_survival, evolve_with, DensityMatrix, EvolveOptions,
    Generator, JumpOperatorSet, STABILITY_LIMIT,
};
use noptica::optics::{
    complex_optical_potential, potential_loss_rate, refractive_index_gs, refractive_index_lax, IndexForm,
};
use noptica::params::{Beam, Medium};
use noptica::structure::{s_static, StructureModel, Wavenumber};
use noptica::wigner::{centered_x_grid, wigner_transform, MomentumState1D};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn beam() -> Beam {
    Beam::from_wavelength(1.8 * ANGSTROM).unwrap()
}

/// Medium with a given packing fraction and a p0 / hbar.
fn medium_for(packing: f64, k: f64, beam: &Beam) -> Medium {
    let a = k / beam.wavenumber();
    let n = packing / (4.0 / 3.0 * PI * a.powi(3));
    Medium::new(n, 6.0e-15, a, 1.0e-2).unwrap()
}

fn c1_structure_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, n) in [(3e-10, 2.7e25), (3e-10, 2.7e27), (1e-10, 1e28), (5e-10, 1e27)] {
        let model = StructureModel::hard_sphere(a, n).map_err(|e| e.to_string())?;
        let s0 = s_static(&model, Wavenumber::ZERO).map_err(|e| e.to_string())?;
        worst = worst.max(rel(s0, 1.0 - 4.0 / 3.0 * PI * a.powi(3) * n));
    }
    check(worst <= 1e-12, format!("max rel err {worst:.2e} (tol 1e-12)"))
}

fn c2_pair_correlation_oracle() -> Outcome {
    let (a, n) = (3e-10, 2.7e27);
    let hs = StructureModel::hard_sphere(a, n).map_err(|e| e.to_string())?;
    let gr = StructureModel::hard_sphere_pair_correlation(a, n, 2.0 * a).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let qa = 50.0 * i as f64 / 199.0;
        let q = Wavenumber::new(qa / a).map_err(|e| e.to_string())?;
        let exact = s_static(&hs, q).map_err(|e| e.to_string())?;
        let numeric = s_static(&gr, q).map_err(|e| e.to_string())?;
        worst = worst.max(rel(numeric, exact));
    }
    check(worst <= 1e-6, format!("max rel err {worst:.2e} over 200 points (tol 1e-6)"))
}

fn c3_closed_vs_quadrature() -> Outcome {
    let beam = beam();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for packing in [1e-4, 1e-2] {
        for k in [0.1, 1.0, 10.0] {
            let medium = medium_for(packing, k, &beam);
            let model = StructureModel::hard_sphere_for(&medium);
            for i in 0..60 {
                let t = i as f64 / 59.0;
                let phi = if i == 59 { PI } else { (1e-6f64.ln() * (1.0 - t) + PI.ln() * t).exp() };
                let closed = acceptance_closed_form(&medium, &beam, phi).map_err(|e| e.to_string())?;
                let quad = acceptance_quadrature(&medium, &beam, &model, phi).map_err(|e| e.to_string())?;
                worst = worst.max(rel(closed, quad));
                count += 1;
            }
        }
    }
    check(worst <= 1e-8, format!("max rel err {worst:.2e} over {count} cases (tol 1e-8)"))
}

fn c4_full_acceptance() -> Outcome {
    let beam = beam();
    let mut worst: f64 = 0.0;
    for (packing, k) in [(1e-4, 0.1), (1e-2, 1.0), (0.3, 10.0), (0.05, 30.0)] {
        let medium = medium_for(packing, k, &beam);
        let model = StructureModel::hard_sphere_for(&medium);
        let sigma = diffusion_cross_section(&medium, &beam, &model).map_err(|e| e.to_string())?;
        let full = acceptance_closed_form(&medium, &beam, PI).map_err(|e| e.to_string())?;
        worst = worst.max(rel(full, medium.number_density() * sigma * medium.thickness()));
    }
    check(worst <= 1e-10, format!("max rel err {worst:.2e} (tol 1e-10)"))
}

fn c5_small_angle_order() -> Outcome {
    let beam = beam();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for k in [1.0, 10.0] {
        let medium = medium_for(0.01, k, &beam);
        let err = |phi: f64| -> Result<f64, String> {
            let exact = acceptance_closed_form(&medium, &beam, phi).map_err(|e| e.to_string())?;
            Ok((acceptance_small_angle(&medium, &beam, phi) - exact).abs())
        };
        let mut phi = 1e-1;
        while phi / 2.0 >= 1e-3 {
            let ratio = err(phi)? / err(phi / 2.0)?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            phi /= 2.0;
        }
    }
    check(
        lo >= 32.0 && hi <= 128.0,
        format!("error ratio per halving in [{lo:.2}, {hi:.2}] (required [32, 128])"),
    )
}

fn c6_order_of_magnitude() -> Outcome {
    let medium = Medium::new(2.7e25, 6e-15, 3e-10, 1e-2).map_err(|e| e.to_string())?;
    let a = acceptance_closed_form(&medium, &beam(), 5e-6).map_err(|e| e.to_string())?;
    check((1e-16..=1e-13).contains(&a), format!("A(5 urad) = {a:.3e} (window [1e-16, 1e-13])"))
}

fn c7_lax_equals_goldberger_seitz() -> Outcome {
    let mut taylor_worst: f64 = 0.0;
    for &b in &[6e-15, -3.7e-15, 1e-14] {
        for &lambda in &[0.5, 1.8, 10.0, 100.0, 500.0] {
            let medium = Medium::new(2.7e28, b, 0.0, 1e-2).map_err(|e| e.to_string())?;
            let beam = Beam::from_wavelength(lambda * ANGSTROM).map_err(|e| e.to_string())?;
            let first = refractive_index_gs(&medium, &beam, IndexForm::FirstOrder).map_err(|e| e.to_string())?;
            let lax = refractive_index_lax(&medium, &beam, -b);
            if first.to_bits() != lax.to_bits() {
                return Err(format!("b={b:e} lambda={lambda}: {first:e} vs {lax:e} not bitwise equal"));
            }
            // n = sqrt(1 - u), first order 1 - u/2
            let u = 2.0 * (1.0 - first);
            let exact = match refractive_index_gs(&medium, &beam, IndexForm::Exact) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let remainder = u * u / 8.0 * (1.0 - u.max(0.0)).powf(-1.5);
            let gap = first - exact;
            let slack = 4.0 * f64::EPSILON;
            if !(gap >= -slack && gap <= remainder + slack) {
                return Err(format!("b={b:e} lambda={lambda}: gap {gap:e} outside [0, {remainder:e}]"));
            }
            taylor_worst = taylor_worst.max(gap / (remainder + slack));
        }
    }
    check(true, format!("bitwise equal on 15 cases; max gap/remainder {taylor_worst:.3}"))
}

fn c8_optical_theorem_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let beam = Beam::from_wavelength(rng.gen_range(0.5..20.0) * ANGSTROM).unwrap();
        let a: f64 = rng.gen_range(0.0..6e-10);
        let packing = rng.gen_range(1e-5..0.45);
        let n = if a > 0.0 { packing / (4.0 / 3.0 * PI * a.powi(3)) } else { 1e27 };
        let medium = Medium::new(n, rng.gen_range(-1e-14..1e-14), a, 1e-2).unwrap();
        let model = StructureModel::hard_sphere_for(&medium);
        let u = complex_optical_potential(&medium, &beam, &model).map_err(|e| e.to_string())?;
        let kinetic = attenuation_rate(&medium, &beam, &model).map_err(|e| e.to_string())?;
        worst = worst.max(rel(potential_loss_rate(&u), kinetic));
    }
    check(worst <= 1e-12, format!("max rel err {worst:.2e} over 20 sets (tol 1e-12)"))
}

fn c9_conservation() -> Outcome {
    let medium = Medium::new(2.7e25, 6e-15, 3e-10, 1e-2).unwrap();
    let beam = beam();
    let model = StructureModel::hard_sphere_for(&medium);
    let grid = build_direction_grid(8, 4).map_err(|e| e.to_string())?;
    let jumps = build_jump_operators(&grid, &medium, &beam, &model).map_err(|e| e.to_string())?;
    let dt = 0.5 * STABILITY_LIMIT / jumps.max_out_rate();
    // coherent superposition of three directions
    let mut psi = vec![Complex64::new(0.0, 0.0); grid.len()];
    psi[0] = Complex64::new(0.6, 0.0);
    psi[5] = Complex64::new(0.0, 0.64);
    psi[17] = Complex64::new(-0.48, 0.0);
    let rho0 = DensityMatrix::from_state_vector(&psi).map_err(|e| e.to_string())?;
    let gen = Generator::new(jumps, beam.energy());
    let traj = evolve_with(&rho0, &gen, &EvolveOptions::new(dt, 1000)).map_err(|e| e.to_string())?;
    let (mut drift, mut herm, mut min_eig, mut ot) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for d in &traj.diagnostics {
        drift = drift.max((d.trace - 1.0).abs());
        herm = herm.max(d.hermiticity_residual);
        min_eig = min_eig.min(d.min_eigenvalue.unwrap_or(f64::NEG_INFINITY));
        ot = ot.max(d.optical_theorem_residual);
    }
    check(
        traj.diagnostics.len() == 1001 && drift <= 1e-9 && herm <= 1e-12 && min_eig >= -1e-9 && ot <= 1e-12,
        format!("1000 steps: trace drift {drift:.1e}, hermiticity {herm:.1e}, min eig {min_eig:.1e}, OT {ot:.1e}"),
    )
}

fn c10_coherent_attenuation() -> Outcome {
    let medium = Medium::new(2.7e25, 6e-15, 0.0, 1e-2).unwrap();
    let beam = beam();
    let model = StructureModel::hard_sphere_for(&medium);
    let grid = build_direction_grid(64, 4).map_err(|e| e.to_string())?;
    let jumps = build_jump_operators(&grid, &medium, &beam, &model).map_err(|e| e.to_string())?;
    let sigma = diffusion_cross_section(&medium, &beam, &model).map_err(|e| e.to_string())?;
    let target = medium.number_density() * beam.speed() * sigma;
    let j0 = grid.forward_index();
    let gen = Generator::new(jumps, beam.energy());
    let traj = evolve_with(
        &DensityMatrix::pure_basis(grid.len(), j0).map_err(|e| e.to_string())?,
        &gen,
        &EvolveOptions::new(0.05 / target, 100),
    )
    .map_err(|e| e.to_string())?;
    let fit = coherent_survival(&traj, j0).map_err(|e| e.to_string())?;
    let err = rel(fit.rate, target);
    check(err <= 0.05, format!("fitted {:.5e} 1/s vs n v sigma_d {target:.5e} 1/s, rel {err:.2e} (tol 5%)", fit.rate))
}

fn vectorized(jumps: &JumpOperatorSet, energies: &[f64]) -> DMatrix<Complex64> {
    let n = jumps.dim();
    let c = |v: f64| Complex64::new(v, 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let h = DMatrix::from_fn(n, n, |r, k| if r == k { c(energies[r] / HBAR) } else { c(0.0) });
    let mut gen = (id.kronecker(&h) - h.transpose().kronecker(&id)) * Complex64::new(0.0, -1.0);
    for i in 0..n {
        for j in 0..n {
            let l = jumps.operator(i, j);
            let ldl = l.adjoint() * &l;
            gen += l.conjugate().kronecker(&l) * c(1.0 / HBAR);
            gen -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * c(0.5 / HBAR);
        }
    }
    gen
}

fn c11_expm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let rates: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.1..3.0)).collect();
        let jumps = JumpOperatorSet::from_rates(n, rates).map_err(|e| e.to_string())?;
        let energies: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0) * HBAR).collect();
        let a = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = &a * a.adjoint();
        let rho0 = DensityMatrix::new(&m / m.trace()).map_err(|e| e.to_string())?;
        let gen = Generator::with_energies(jumps.clone(), energies.clone()).map_err(|e| e.to_string())?;
        let tau = 1.0 / jumps.max_out_rate();
        let steps = 1000;
        let mut opts = EvolveOptions::new(tau / steps as f64, steps);
        opts.keep_states = true;
        opts.store_every = 100;
        let traj = evolve_with(&rho0, &gen, &opts).map_err(|e| e.to_string())?;
        let l = vectorized(&jumps, &energies);
        let v0 = DMatrix::from_column_slice(n * n, 1, rho0.matrix().as_slice());
        for (d, state) in traj.diagnostics.iter().zip(&traj.states) {
            let exact = (&l * Complex64::new(d.time, 0.0)).exp() * &v0;
            for (x, y) in state.matrix().iter().zip(exact.iter()) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    check(worst <= 1e-8, format!("max |RK4 - expm| {worst:.2e} for N = 1..4 (tol 1e-8)"))
}

fn c12_wigner() -> Outcome {
    let sigma_p = 1.0e-27;
    let dq = sigma_p / 6.0;
    let psi = |p: f64| Complex64::new((-p * p / (4.0 * sigma_p * sigma_p)).exp(), 0.0);
    let rho = MomentumState1D::from_wavefunction(psi, -60.0 * dq, dq, 121).map_err(|e| e.to_string())?;
    let xs = centered_x_grid(&rho, 200).map_err(|e| e.to_string())?;
    let w = wigner_transform(&rho, &xs).map_err(|e| e.to_string())?;
    let normal = |v: f64, sd: f64| (-v * v / (2.0 * sd * sd)).exp() / ((2.0 * PI).sqrt() * sd);
    let sigma_x = HBAR / (2.0 * sigma_p);
    let mut marg: f64 = 0.0;
    for ip in (0..w.p.len).step_by(2) {
        marg = marg.max((w.momentum_marginal(ip) - normal(w.p.point(ip), sigma_p)).abs() / normal(0.0, sigma_p));
    }
    for ix in 0..xs.len {
        marg = marg.max((w.position_marginal(ix) - normal(xs.point(ix), sigma_x)).abs() / normal(0.0, sigma_x));
    }

    let eig = MomentumState1D::new(DensityMatrix::pure_basis(9, 3).map_err(|e| e.to_string())?, -4.0 * dq, dq)
        .map_err(|e| e.to_string())?;
    let xs = centered_x_grid(&eig, 64).map_err(|e| e.to_string())?;
    let we = wigner_transform(&eig, &xs).map_err(|e| e.to_string())?;
    let height = 1.0 / (PI * HBAR);
    let mut flat: f64 = 0.0;
    for ix in 0..xs.len {
        for ip in 0..we.p.len {
            let expect = if ip == 6 { height } else { 0.0 };
            flat = flat.max((we.value(ix, ip) - expect).abs() / height);
        }
    }
    check(
        marg <= 1e-8 && flat <= 1e-12,
        format!("Gaussian marginals {marg:.2e} (tol 1e-8); eigenstate x-variation {flat:.2e} (tol 1e-12)"),
    )
}

fn c13_s_zero_round_trip() -> Outcome {
    let beam = beam();
    let mut worst: f64 = 0.0;
    for (packing, k) in [(0.01, 1.0), (0.3, 10.5), (1e-4, 0.1)] {
        let medium = medium_for(packing, k, &beam);
        let truth = StructureModel::hard_sphere_for(&medium).s_zero().map_err(|e| e.to_string())?;
        let a = acceptance_closed_form(&medium, &beam, 1e-4).map_err(|e| e.to_string())?;
        let est = infer_s_zero(a, &medium, &beam, 1e-4).map_err(|e| e.to_string())?;
        worst = worst.max(rel(est.s_zero, truth));
    }
    check(worst <= 5e-3, format!("max rel err {worst:.2e} (tol 0.5%)"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("structure sum S(0)", c1_structure_sum),
        ("hard sphere vs g(r) quadrature", c2_pair_correlation_oracle),
        ("A(phi) closed form vs quadrature", c3_closed_vs_quadrature),
        ("full acceptance A(pi)", c4_full_acceptance),
        ("small-angle convergence order", c5_small_angle_order),
        ("A at 5 urad order of magnitude", c6_order_of_magnitude),
        ("Lax vs Goldberger-Seitz", c7_lax_equals_goldberger_seitz),
        ("optical-theorem bridge", c8_optical_theorem_bridge),
        ("master-equation conservation", c9_conservation),
        ("coherent-beam attenuation", c10_coherent_attenuation),
        ("generator vs matrix exponential", c11_expm_oracle),
        ("Wigner diagnostics", c12_wigner),
        ("S(0) round trip", c13_s_zero_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
