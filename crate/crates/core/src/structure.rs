//! Static structure function S_c(q) of an isotropic medium.
//!
//! The wavenumber carried here is the momentum transfer divided by hbar,
//! in m^-1, and S_c is normalised per particle:
//!
//! S_c(q) = 1 + n_o \int d^3r e^{i q.r} [g(r) - 1]
//!        = 1 + 4 pi n_o \int_0^\infty r^2 [g(r) - 1] sin(qr)/(qr) dr.

use std::f64::consts::PI;
use std::path::Path;

use crate::constants::BOLTZMANN;
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::params::Medium;
use crate::quadrature::{integrate, Tolerance};
use crate::special::{sinc, sphere_form};

/// Momentum transfer over hbar, m^-1. Only |q| matters for isotropic media.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::domain(format!("wavenumber must be >= 0, got {q:e}")));
        }
        Ok(Wavenumber(q))
    }

    pub const ZERO: Wavenumber = Wavenumber(0.0);

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Dilute hard-sphere gas: g(r) = 0 inside the diameter, 1 outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardSphere {
    pub diameter: f64,
    pub number_density: f64,
}

/// Sampled radial pair correlation function, linear between samples and
/// equal to 1 beyond the last sample. A repeated radius encodes a jump.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelation {
    radii: Vec<f64>,
    values: Vec<f64>,
    number_density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StructureModel {
    HardSphere(HardSphere),
    Tabulated(MonotoneCubic),
    PairCorrelation(PairCorrelation),
}

/// g(r) of the dilute hard-sphere gas; g(a) is taken as 1.
pub fn pair_correlation_hard_sphere(r: f64, diameter: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!("radius must be >= 0, got {r:e}")));
    }
    Ok(if r < diameter { 0.0 } else { 1.0 })
}

impl StructureModel {
    pub fn hard_sphere(diameter: f64, number_density: f64) -> Result<Self> {
        if !(diameter.is_finite() && diameter >= 0.0) {
            return Err(Error::domain(format!(
                "hard-sphere diameter must be >= 0, got {diameter:e}"
            )));
        }
        if !(number_density.is_finite() && number_density > 0.0) {
            return Err(Error::domain("number density must be positive"));
        }
        if 4.0 / 3.0 * PI * diameter.powi(3) * number_density >= 1.0 {
            return Err(Error::domain("hard-sphere packing fraction must be < 1"));
        }
        Ok(StructureModel::HardSphere(HardSphere {
            diameter,
            number_density,
        }))
    }

    /// Hard-sphere model with the medium's diameter and density.
    pub fn hard_sphere_for(medium: &Medium) -> Self {
        StructureModel::HardSphere(HardSphere {
            diameter: medium.hard_sphere_diameter(),
            number_density: medium.number_density(),
        })
    }

    /// `q` strictly increasing (m^-1), `s` finite and non-negative.
    pub fn tabulated(q: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if q.first().is_some_and(|&q0| q0 < 0.0) {
            return Err(Error::domain("tabulated wavenumbers must be >= 0"));
        }
        if s.iter().any(|&v| v < 0.0) {
            return Err(Error::ModelValidity(
                "tabulated structure function has negative entries".into(),
            ));
        }
        Ok(StructureModel::Tabulated(MonotoneCubic::new(q, s)?))
    }

    /// `radii` non-decreasing (m), at most two samples per radius, `values` >= 0.
    pub fn pair_correlation(radii: Vec<f64>, values: Vec<f64>, number_density: f64) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::domain(
                "pair correlation needs at least two (r, g) samples of matching length",
            ));
        }
        if radii.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::domain("pair correlation samples must be finite"));
        }
        if radii[0] < 0.0 || values.iter().any(|&g| g < 0.0) {
            return Err(Error::domain("pair correlation needs r >= 0 and g >= 0"));
        }
        if radii.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("pair correlation radii must be non-decreasing"));
        }
        if radii.windows(3).any(|w| w[0] == w[2]) {
            return Err(Error::domain("at most two samples may share a radius"));
        }
        if !(number_density.is_finite() && number_density > 0.0) {
            return Err(Error::domain("number density must be positive"));
        }
        Ok(StructureModel::PairCorrelation(PairCorrelation {
            radii,
            values,
            number_density,
        }))
    }

    /// Sampled hard-sphere g(r) on [0, r_max] with the step at the diameter.
    pub fn hard_sphere_pair_correlation(diameter: f64, number_density: f64, r_max: f64) -> Result<Self> {
        if diameter == 0.0 {
            return Self::pair_correlation(vec![0.0, r_max], vec![1.0, 1.0], number_density);
        }
        Self::pair_correlation(
            vec![0.0, diameter, diameter, r_max.max(diameter)],
            vec![0.0, 0.0, 1.0, 1.0],
            number_density,
        )
    }

    /// Tabulate any model on the given wavenumbers.
    pub fn tabulate_from(model: &StructureModel, q: &[f64]) -> Result<Self> {
        let s = q
            .iter()
            .map(|&qi| s_static(model, Wavenumber::new(qi)?))
            .collect::<Result<Vec<_>>>()?;
        Self::tabulated(q.to_vec(), s)
    }

    /// Two-column CSV `(q_in_inverse_meters, S)` with one header line.
    pub fn read_tabulated_csv(path: impl AsRef<Path>) -> Result<Self> {
        let (q, s) = read_two_columns(path.as_ref())?;
        Self::tabulated(q, s)
    }

    /// Two-column CSV `(r_in_meters, g)` with one header line.
    pub fn read_pair_correlation_csv(path: impl AsRef<Path>, number_density: f64) -> Result<Self> {
        let (r, g) = read_two_columns(path.as_ref())?;
        Self::pair_correlation(r, g, number_density)
    }

    /// S_c(0).
    pub fn s_zero(&self) -> Result<f64> {
        s_static(self, Wavenumber::ZERO)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StructureModel::HardSphere(_) => "hard_sphere",
            StructureModel::Tabulated(_) => "tabulated",
            StructureModel::PairCorrelation(_) => "pair_correlation",
        }
    }
}

fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        if record.len() != 2 {
            return Err(parse_err(format!(
                "row {}: expected 2 columns, found {}",
                line + 2,
                record.len()
            )));
        }
        let field = |i: usize| {
            record[i]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("row {}: {e}", line + 2)))
        };
        xs.push(field(0)?);
        ys.push(field(1)?);
    }
    Ok((xs, ys))
}

/// Static structure function S_c(q) for `model`.
pub fn s_static(model: &StructureModel, q: Wavenumber) -> Result<f64> {
    let q = q.get();
    let s = match model {
        StructureModel::HardSphere(hs) => {
            let x = q * hs.diameter;
            1.0 - 4.0 * PI * hs.number_density * hs.diameter.powi(3) * sphere_form(x)
        }
        StructureModel::Tabulated(table) => table.eval(q).ok_or_else(|| {
            let (min, max) = table.domain();
            Error::Extrapolation { q, min, max }
        })?,
        StructureModel::PairCorrelation(pc) => 1.0 + 4.0 * PI * pc.number_density * pc.radial_integral(q)?,
    };
    if !s.is_finite() {
        return Err(Error::Numeric(format!("S_c({q:e}) is not finite")));
    }
    if s < 0.0 {
        return Err(Error::ModelValidity(format!(
            "{} model gives S_c({q:e}) = {s:e} < 0",
            model.kind()
        )));
    }
    Ok(s)
}

impl PairCorrelation {
    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.radii, &self.values)
    }

    /// \int_0^{r_max} r^2 [g(r) - 1] sinc(q r) dr over the sampled support.
    fn radial_integral(&self, q: f64) -> Result<f64> {
        let mut total = 0.0;
        let (r0, g0) = (self.radii[0], self.values[0]);
        if r0 > 0.0 && g0 != 1.0 {
            total += segment_integral(q, 0.0, r0, g0, g0)?;
        }
        for k in 0..self.radii.len() - 1 {
            let (ra, rb) = (self.radii[k], self.radii[k + 1]);
            let (ga, gb) = (self.values[k], self.values[k + 1]);
            if rb > ra && !(ga == 1.0 && gb == 1.0) {
                total += segment_integral(q, ra, rb, ga, gb)?;
            }
        }
        Ok(total)
    }
}

fn segment_integral(q: f64, ra: f64, rb: f64, ga: f64, gb: f64) -> Result<f64> {
    let slope = (gb - ga) / (rb - ra);
    let integrand = |r: f64| {
        let h = ga + slope * (r - ra) - 1.0;
        r * r * h * sinc(q * r)
    };
    // magnitude scale of the segment, for an absolute floor when it cancels
    let scale = (rb.powi(3) - ra.powi(3)) / 3.0 * (ga - 1.0).abs().max((gb - 1.0).abs());
    let tol = Tolerance {
        abs: 1e-15 * scale,
        rel: 1e-13,
    };
    Ok(integrate(integrand, ra, rb, tol)?.value)
}

/// Compressibility sum rule S_c(0) = n_o k_B T chi_T, the mean square
/// particle-number fluctuation per particle.
pub fn s_zero_sum_rule(number_density: f64, temperature: f64, compressibility: f64) -> Result<f64> {
    for (name, v) in [
        ("number density", number_density),
        ("temperature", temperature),
        ("isothermal compressibility", compressibility),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {v:e}")));
        }
    }
    Ok(number_density * BOLTZMANN * temperature * compressibility)
}
