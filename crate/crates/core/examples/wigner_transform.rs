//! Phase-space picture of a Gaussian momentum wave packet.

use noptica::constants::HBAR;
use noptica::wigner::{centered_x_grid, wigner_transform, MomentumState1D};
use num_complex::Complex64;

fn main() -> noptica::Result<()> {
    let sigma_p = 1.0e-27;
    let x0 = 3.0e-7;
    let dq = sigma_p / 8.0;
    let len = 129;
    let p_min = -64.0 * dq;
    // displaced packet: the phase e^{-i p x0 / hbar} moves it to x0
    let psi = |p: f64| {
        let amp = (-p * p / (4.0 * sigma_p * sigma_p)).exp();
        Complex64::from_polar(amp, -p * x0 / HBAR)
    };
    let rho = MomentumState1D::from_wavefunction(psi, p_min, dq, len)?;
    let xs = centered_x_grid(&rho, 256)?;
    let w = wigner_transform(&rho, &xs)?;

    println!("alias-free x span {:.4e} m", rho.max_x_span());
    println!("total {:.15}", w.total());
    let (mut best, mut best_x) = (f64::MIN, 0.0);
    for ix in 0..xs.len {
        let m = w.position_marginal(ix);
        if m > best {
            best = m;
            best_x = xs.point(ix);
        }
    }
    println!("position marginal peaks at {:.4e} m (packet centre {:.4e} m)", best_x, x0);
    println!("max |f_w| {:.4e} (J s)^-1, bound 1/(pi hbar) = {:.4e}", w.max_abs(), 1.0 / (std::f64::consts::PI * HBAR));
    Ok(())
}
