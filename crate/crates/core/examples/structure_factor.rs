//! The three structure models side by side: closed-form hard spheres,
//! a tabulated S(q) and a numerically transformed g(r).

use noptica::structure::{s_static, s_zero_sum_rule, StructureModel, Wavenumber};

fn main() -> noptica::Result<()> {
    let a = 3.0e-10;
    let n = 2.7e27;
    let hs = StructureModel::hard_sphere(a, n)?;
    let gr = StructureModel::hard_sphere_pair_correlation(a, n, 2.0 * a)?;
    let grid: Vec<f64> = (0..=5000).map(|i| i as f64 * 0.01 / a).collect();
    let table = StructureModel::tabulate_from(&hs, &grid)?;

    println!("packing fraction {:.4}", 4.0 / 3.0 * std::f64::consts::PI * a.powi(3) * n);
    println!("S(0) = {:.15}", hs.s_zero()?);
    println!("{:>8} {:>20} {:>20} {:>20}", "qa", "hard sphere", "tabulated", "g(r)");
    for qa in [0.0, 0.5, 1.0, 2.0, 4.4934, 7.0, 10.0, 25.0] {
        let q = Wavenumber::new(qa / a)?;
        println!(
            "{qa:>8.4} {:>20.15} {:>20.15} {:>20.15}",
            s_static(&hs, q)?,
            s_static(&table, q)?,
            s_static(&gr, q)?
        );
    }

    // compressibility route: an ideal gas has S(0) = 1
    let t = 300.0;
    let ideal = 1.0 / (n * noptica::constants::BOLTZMANN * t);
    println!("ideal-gas sum rule S(0) = {}", s_zero_sum_rule(n, t, ideal)?);

    match s_static(&table, Wavenumber::new(60.0 / a)?) {
        Ok(v) => println!("unexpected {v}"),
        Err(e) => println!("outside the table: {e}"),
    }
    Ok(())
}
