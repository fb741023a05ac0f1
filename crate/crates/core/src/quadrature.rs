//! Globally adaptive Gauss-Kronrod (7-15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Requested accuracy: the run stops once the error estimate is below
/// `max(abs, rel * |integral|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
    roundoff: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lower: f64, upper: f64) -> Segment {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * abs_sum;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error < roundoff {
        error = roundoff;
    }
    Segment {
        lower,
        upper,
        value,
        error,
        roundoff,
    }
}

/// Integrate `f` over `[lower, upper]`.
///
/// Fails with [`Error::Quadrature`] if the tolerance is not met within the
/// subdivision budget, and with [`Error::Numeric`] if `f` returns a non-finite value.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if lower == upper {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut segments = vec![kronrod15(&f, lower, upper)];
    let mut evaluations = 15;
    loop {
        let (value, error, roundoff) = segments
            .iter()
            .fold((0.0, 0.0, 0.0), |(v, e, r), s| (v + s.value, e + s.error, r + s.roundoff));
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite integrand on [{lower:e}, {upper:e}]"
            )));
        }
        // once every segment sits at its rounding floor, bisection cannot help
        if error <= tol.abs.max(tol.rel * value.abs()) || error <= 2.0 * roundoff {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lower + seg.upper);
        // interval can no longer be split in floating point
        if segments.len() >= MAX_INTERVALS || mid <= seg.lower.min(seg.upper) || mid >= seg.upper.max(seg.lower) {
            return Err(Error::Quadrature {
                lower,
                upper,
                error_estimate: error,
                evaluations,
            });
        }
        segments.push(kronrod15(&f, seg.lower, mid));
        segments.push(kronrod15(&f, mid, seg.upper));
        evaluations += 30;
    }
}
