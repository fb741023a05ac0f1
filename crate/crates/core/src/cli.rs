//! Command-line front end.
//!
//! Every subcommand reads a JSON [`RunConfig`], applies flag overrides,
//! writes its outputs plus `resolved_config.json` into the output directory
//! and returns a process exit code: 0 success, 1 usage, 2 configuration or
//! domain error, 3 numeric failure.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{Resolved, RunConfig};
use crate::diffuse::{
    acceptance_closed_form, acceptance_quadrature, acceptance_small_angle, attenuation_rate,
    diffusion_cross_section,
};
use crate::error::{Error, Result};
use crate::interferometry::{infer_s_zero, visibility_budget};
use crate::lindblad::{
    build_direction_grid, build_jump_operators, coherent_survival, evolve_with, snapshot, DensityMatrix,
    EvolveOptions, Generator,
};
use crate::optics::{complex_optical_potential, optical_potential, phase_shift, refractive_index_gs, IndexForm};
use crate::structure::{s_static, StructureModel, Wavenumber};
use crate::wigner::{centered_x_grid, wigner_transform, MomentumState1D};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "NOPTICA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "noptica", version, about = "Neutron optics with diffuse scattering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    wavelength_angstrom: Option<f64>,
    #[arg(long)]
    number_density_m3: Option<f64>,
    #[arg(long)]
    number_density_cm3: Option<f64>,
    #[arg(long)]
    scattering_length_m: Option<f64>,
    #[arg(long)]
    hard_sphere_diameter_m: Option<f64>,
    #[arg(long)]
    thickness_m: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Refractive indices, phase shift and optical potential
    Refract {
        #[command(flatten)]
        common: Common,
        /// Total cross section for chi'' in m^2 (default: sigma_d)
        #[arg(long)]
        sigma_t: Option<f64>,
    },
    /// Same record as `refract`
    Phase {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma_t: Option<f64>,
    },
    /// Static structure function on 0..q_max
    Sq {
        #[command(flatten)]
        common: Common,
        /// 1/m
        #[arg(long)]
        q_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Acceptance integral A(phi) three ways
    Diffuse {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0)]
        phi_min: f64,
        #[arg(long, default_value_t = PI)]
        phi_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Logarithmic spacing (needs phi_min > 0)
        #[arg(long)]
        log: bool,
    },
    /// Master-equation evolution on the direction grid
    Evolve {
        #[command(flatten)]
        common: Common,
        /// n_polar,n_azimuth
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        /// s
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        store_every: Option<usize>,
        #[arg(long)]
        j0: Option<usize>,
        /// Write a binary density-matrix snapshot at every stored step
        #[arg(long)]
        snapshots: bool,
    },
    /// Wigner transform of a snapshot taken as a 1-D momentum state
    Wigner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        snapshot: PathBuf,
        /// Momentum grid spacing, kg m/s
        #[arg(long)]
        dq: f64,
        /// First momentum, kg m/s (default centres the grid on zero)
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long, default_value_t = 64)]
        x_points: usize,
    },
    /// Flux and fringe-amplitude budget
    Visibility {
        #[command(flatten)]
        common: Common,
        /// Acceptance half-angle, rad
        #[arg(long)]
        phi: f64,
    },
    /// S_c(0) from a measured small-angle acceptance
    InferSzero {
        #[command(flatten)]
        common: Common,
        #[arg(long = "A")]
        measured_a: f64,
        #[arg(long)]
        phi: f64,
    },
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected n_polar,n_azimuth, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Run with the process arguments and standard streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Parse `argv` (including the program name) and execute, writing user-facing text to the given streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_CONFIG,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    // the pool runs on its own threads, so buffer the streams and copy them out afterwards
    let (result, out_buf, err_buf) = pool.install(|| {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let r = execute(cli.command, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_CONFIG
            }
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

struct Session {
    config: RunConfig,
    resolved: Resolved,
    out_dir: PathBuf,
}

impl Session {
    fn open(common: &Common) -> Result<Self> {
        let mut config = RunConfig::load(&common.config)?;
        let m = &mut config.medium;
        if let Some(v) = common.number_density_m3 {
            m.number_density_m3 = Some(v);
            m.number_density_cm3 = None;
        }
        if let Some(v) = common.number_density_cm3 {
            m.number_density_cm3 = Some(v);
            m.number_density_m3 = None;
        }
        if let Some(v) = common.scattering_length_m {
            m.scattering_length_m = v;
        }
        if let Some(v) = common.hard_sphere_diameter_m {
            m.hard_sphere_diameter_m = v;
        }
        if let Some(v) = common.thickness_m {
            m.thickness_m = v;
        }
        if let Some(v) = common.wavelength_angstrom {
            config.beam.wavelength_angstrom = Some(v);
            config.beam.wavelength_m = None;
            config.beam.momentum_kg_m_s = None;
        }
        if let Some(dir) = &common.out_dir {
            config.output.dir = dir.clone();
        }
        Session::from_config(config)
    }

    fn from_config(config: RunConfig) -> Result<Self> {
        let resolved = config.resolve()?;
        let out_dir = config.output.dir.clone();
        Ok(Session {
            config,
            resolved,
            out_dir,
        })
    }

    /// Create the output directory and echo the resolved configuration.
    fn prepare(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| Error::io(&self.out_dir, e))?;
        write_json(&self.out_dir.join("resolved_config.json"), &self.config)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// Floats as `{:.16e}`: 17 significant digits, NaN spelled out.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serialize with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Config(format!("serialising output: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?).map_err(|e| Error::io(path, e))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![hi];
    }
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Refract { common, sigma_t } => optics_record(&common, sigma_t, "refract.json", out),
        Command::Phase { common, sigma_t } => optics_record(&common, sigma_t, "phase.json", out),
        Command::Sq { common, q_max, points } => structure_table(&common, q_max, points),
        Command::Diffuse {
            common,
            phi_min,
            phi_max,
            points,
            log,
        } => diffuse_table(&common, phi_min, phi_max, points, log),
        Command::Evolve {
            common,
            grid,
            dt,
            steps,
            store_every,
            j0,
            snapshots,
        } => {
            let mut session = Session::open(&common)?;
            let integ = &mut session.config.integrator;
            if let Some((np, na)) = grid {
                session.config.grid.n_polar = np;
                session.config.grid.n_azimuth = na;
            }
            integ.dt_s = dt.or(integ.dt_s);
            integ.steps = steps.unwrap_or(integ.steps);
            integ.store_every = store_every.unwrap_or(integ.store_every);
            integ.j0 = j0.or(integ.j0);
            let session = Session::from_config(session.config)?;
            evolve_run(&session, snapshots, err)
        }
        Command::Wigner {
            common,
            snapshot,
            dq,
            p_min,
            x_points,
        } => wigner_table(&common, &snapshot, dq, p_min, x_points),
        Command::Visibility { common, phi } => {
            let s = Session::open(&common)?;
            let r = &s.resolved;
            let budget = visibility_budget(&r.medium, &r.beam, &r.model, phi)?;
            s.prepare()?;
            write_json(&s.path("visibility.json"), &budget)?;
            write!(out, "{}", to_json_string(&budget)?).map_err(|e| Error::io("<stdout>", e))
        }
        Command::InferSzero { common, measured_a, phi } => {
            let s = Session::open(&common)?;
            let est = infer_s_zero(measured_a, &s.resolved.medium, &s.resolved.beam, phi)?;
            let record = json!({
                "measured_A": measured_a,
                "phi_rad": phi,
                "s_zero": est.s_zero,
                "phi4_fraction": est.phi4_fraction,
                "leading_term_valid": est.leading_term_valid,
            });
            s.prepare()?;
            write_json(&s.path("infer_szero.json"), &record)?;
            write!(out, "{}", to_json_string(&record)?).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn optics_record(common: &Common, sigma_t: Option<f64>, file: &str, out: &mut dyn Write) -> Result<()> {
    let s = Session::open(common)?;
    let Resolved { medium, beam, model } = &s.resolved;
    let n_exact = match refractive_index_gs(medium, beam, IndexForm::Exact) {
        Ok(n) => Some(n),
        Err(Error::TotalReflection { .. }) => None,
        Err(e) => return Err(e),
    };
    let n_first_order = refractive_index_gs(medium, beam, IndexForm::FirstOrder)?;
    let sigma = match sigma_t {
        Some(v) => v,
        None => diffusion_cross_section(medium, beam, model)?,
    };
    let chi = phase_shift(medium, beam, sigma)?;
    let u = complex_optical_potential(medium, beam, model)?;
    debug_assert_eq!(u.value.re, optical_potential(medium));
    let record = json!({
        "n_exact": n_exact,
        "n_first_order": n_first_order,
        "chi_prime": chi.chi_prime,
        "chi_double_prime": chi.chi_double_prime,
        "U_re_J": u.value.re,
        "U_im_J": u.value.im,
    });
    s.prepare()?;
    write_json(&s.path(file), &record)?;
    write!(out, "{}", to_json_string(&record)?).map_err(|e| Error::io("<stdout>", e))
}

fn structure_table(common: &Common, q_max: f64, points: usize) -> Result<()> {
    let s = Session::open(common)?;
    if !(q_max.is_finite() && q_max > 0.0) || points < 2 {
        return Err(Error::Config("sq needs q_max > 0 and at least 2 points".into()));
    }
    let rows = linspace(0.0, q_max, points)
        .into_iter()
        .map(|q| Ok(vec![q, s_static(&s.resolved.model, Wavenumber::new(q)?)?]))
        .collect::<Result<Vec<_>>>()?;
    s.prepare()?;
    write_csv(&s.path("sq.csv"), &["q_inv_m", "S"], &rows)
}

fn diffuse_table(common: &Common, phi_min: f64, phi_max: f64, points: usize, log: bool) -> Result<()> {
    let s = Session::open(common)?;
    if points < 2 || phi_min.is_nan() || phi_max.is_nan() || phi_min >= phi_max {
        return Err(Error::Config("diffuse needs phi_min < phi_max and at least 2 points".into()));
    }
    let phis = if log {
        if phi_min <= 0.0 {
            return Err(Error::Config("logarithmic spacing needs phi_min > 0".into()));
        }
        let mut v: Vec<f64> = linspace(phi_min.ln(), phi_max.ln(), points)
            .into_iter()
            .map(f64::exp)
            .collect();
        v[0] = phi_min;
        v[points - 1] = phi_max;
        v
    } else {
        linspace(phi_min, phi_max, points)
    };
    let Resolved { medium, beam, model } = &s.resolved;
    let hard_sphere = matches!(model, StructureModel::HardSphere(_));
    let rows = phis
        .iter()
        .map(|&phi| {
            let closed = if hard_sphere {
                acceptance_closed_form(medium, beam, phi)?
            } else {
                f64::NAN
            };
            Ok(vec![
                phi,
                closed,
                acceptance_quadrature(medium, beam, model, phi)?,
                acceptance_small_angle(medium, beam, phi),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    s.prepare()?;
    write_csv(
        &s.path("diffuse.csv"),
        &["phi_rad", "A_closed", "A_quadrature", "A_small_angle"],
        &rows,
    )
}

fn evolve_run(s: &Session, snapshots: bool, err: &mut dyn Write) -> Result<()> {
    let Resolved { medium, beam, model } = &s.resolved;
    let grid_cfg = s.config.grid;
    let integ = s.config.integrator;
    let grid = build_direction_grid(grid_cfg.n_polar, grid_cfg.n_azimuth)?;
    let jumps = build_jump_operators(&grid, medium, beam, model)?;
    let max_rate = jumps.max_out_rate();
    let dt = match integ.dt_s {
        Some(dt) => dt,
        None if max_rate > 0.0 => 0.05 / max_rate,
        None => {
            return Err(Error::Config(
                "no scattering: give integrator dt_s or --dt explicitly".into(),
            ))
        }
    };
    let j0 = integ.j0.unwrap_or(grid.forward_index());
    let rho0 = DensityMatrix::pure_basis(grid.len(), j0)?;
    let generator = Generator::new(jumps, beam.energy() + optical_potential(medium));
    let opts = EvolveOptions {
        dt,
        steps: integ.steps,
        store_every: integ.store_every,
        keep_states: snapshots,
        min_eigenvalue: true,
    };
    let traj = evolve_with(&rho0, &generator, &opts)?;

    s.prepare()?;
    let rows: Vec<Vec<f64>> = traj
        .diagnostics
        .iter()
        .zip(&traj.populations)
        .map(|(d, pops)| {
            vec![
                d.time,
                d.trace,
                d.min_eigenvalue.unwrap_or(f64::NAN),
                pops[j0],
                d.optical_theorem_residual,
            ]
        })
        .collect();
    write_csv(
        &s.path("trajectory.csv"),
        &["t_s", "trace", "min_eig", "rho_j0j0", "ot_residual_rel"],
        &rows,
    )?;
    if snapshots {
        let dir = s.path("snapshots");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for (d, state) in traj.diagnostics.iter().zip(&traj.states) {
            let path = dir.join(format!("snapshot_{:06}.bin", d.step));
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            snapshot::write_snapshot(io::BufWriter::new(file), d.step as u64, state.matrix())
                .map_err(|e| Error::io(&path, e))?;
        }
    }
    let fit = match coherent_survival(&traj, j0) {
        Ok(fit) => {
            if let Some(w) = &fit.warning {
                let _ = writeln!(err, "warning: {w}");
            }
            Some(fit)
        }
        Err(e) => {
            let _ = writeln!(err, "warning: survival fit skipped: {e}");
            None
        }
    };
    let summary = json!({
        "directions": grid.len(),
        "j0": j0,
        "dt_s": dt,
        "steps": integ.steps,
        "out_rate_j0_per_s": generator.jumps().out_rate(j0),
        "attenuation_rate_per_s": attenuation_rate(medium, beam, model)?,
        "fitted_rate_per_s": fit.as_ref().map(|f| f.rate),
        "fit_r_squared": fit.as_ref().map(|f| f.r_squared),
        "max_trace_drift": traj.diagnostics.iter().map(|d| (d.trace - 1.0).abs()).fold(0.0, f64::max),
    });
    write_json(&s.path("survival.json"), &summary)
}

fn wigner_table(common: &Common, snapshot_path: &Path, dq: f64, p_min: Option<f64>, x_points: usize) -> Result<()> {
    let s = Session::open(common)?;
    if x_points == 0 {
        return Err(Error::Config("x_points must be positive".into()));
    }
    let file = fs::File::open(snapshot_path).map_err(|e| Error::io(snapshot_path, e))?;
    let (_, matrix) = snapshot::read_snapshot(io::BufReader::new(file)).map_err(|e| Error::Parse {
        path: snapshot_path.to_path_buf(),
        message: e.to_string(),
    })?;
    let trace = matrix.trace();
    if trace.re.is_nan() || trace.re <= 0.0 {
        return Err(Error::Config("snapshot has non-positive trace".into()));
    }
    // evolved snapshots carry trace drift; the transform is linear, so normalise first
    let state = DensityMatrix::new(matrix.map(|z| z / trace.re))?;
    let n = state.dim();
    let p_min = p_min.unwrap_or(-0.5 * (n as f64 - 1.0) * dq);
    let rho = MomentumState1D::new(state, p_min, dq)?;
    let xs = centered_x_grid(&rho, x_points)?;
    let w = wigner_transform(&rho, &xs)?;
    let mut rows = Vec::with_capacity(xs.len * w.p.len);
    for ix in 0..xs.len {
        for ip in 0..w.p.len {
            rows.push(vec![xs.point(ix), w.p.point(ip), w.value(ix, ip)]);
        }
    }
    s.prepare()?;
    write_csv(&s.path("wigner.csv"), &["x_m", "p_kg_m_s", "f_w_per_J_s"], &rows)
}
