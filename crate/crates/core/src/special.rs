//! Cancellation-free forms of the elementary functions used by the
//! hard-sphere model.

/// Below this argument the power series is used instead of the closed form.
pub const SERIES_SWITCH: f64 = 1.0;

/// `(sin x - x cos x) / x^3`, equal to 1/3 at x = 0.
pub fn sphere_form(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_SWITCH {
        // sum_{n>=1} (-1)^{n+1} 2n x^{2n-2} / (2n+1)!
        let x2 = x * x;
        let mut term: f64 = 1.0 / 3.0;
        let mut sum = term;
        let mut n = 1.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -x2 / (2.0 * n * (2.0 * n + 3.0));
            sum += term;
            n += 1.0;
        }
        sum
    } else {
        (x.sin() - x * x.cos()) / (x * x * x)
    }
}

/// `sin(x)/x - 1`, equal to 0 at x = 0.
pub fn sinc_minus_one(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_SWITCH {
        // sum_{n>=1} (-1)^n x^{2n} / (2n+1)!
        let x2 = x * x;
        let mut term = -x2 / 6.0;
        let mut sum = term;
        let mut n = 1.0;
        while term != 0.0 && term.abs() > 1e-18 * sum.abs() {
            term *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            sum += term;
            n += 1.0;
        }
        sum
    } else {
        x.sin() / x - 1.0
    }
}

/// `sin(x)/x`, equal to 1 at x = 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_SWITCH {
        1.0 + sinc_minus_one(x)
    } else {
        x.sin() / x
    }
}

/// `1 - cos(x)` without cancellation near zero.
pub fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}
