//! Command-line front end: scenario demos, the solver, and the invariant suite.
//!
//! Data files stay in atomic units; electron-volt figures appear only in the
//! printed summaries.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::electron_wave::{density, field_intensity, total_energy_density, WaveState};
use crate::error::Error;
use crate::external_fields::{ab_superposition, absorb_photon, Envelope, PhotonPulse};
use crate::ga3::Multivector;
use crate::hydrogen::{decompose_density_field, QuantumNumbers};
use crate::ofdft::scf::field_table_csv;
use crate::ofdft::{scf_solve, Problem};
use crate::spin_dynamics::{induced_spin, integrate_modified_ll, larmor_frequency, FieldRamp, LlParams};
use crate::verify;

pub const HARTREE_EV: f64 = 27.2114;

#[derive(Debug, Parser)]
#[command(name = "ga-electron", version, about = "Extended-electron scenarios and the bivector-coupled density solver")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for CSV and JSON artifacts; created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for the randomized checks in `verify`.
    #[arg(long, global = true, default_value_t = 20240917)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density, field intensity and energy of a free electron wave over (z, t).
    #[command(allow_negative_numbers = true)]
    DemoFreeElectron {
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        /// Samples per wavelength along z.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Time slices over one period.
        #[arg(long, default_value_t = 8)]
        slices: usize,
    },
    /// Spin precession under a ramped field and the induced-spin response.
    #[command(allow_negative_numbers = true)]
    DemoSpin {
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Final field magnitude, along e1.
        #[arg(long, default_value_t = 1.0)]
        b0: f64,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long = "const-ll", default_value_t = 1.0)]
        const_ll: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 20.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1.0)]
        t_ramp: f64,
    },
    /// Interference intensity against the vector potential between two paths.
    #[command(allow_negative_numbers = true)]
    DemoAb {
        #[arg(long = "A-max", default_value_t = 2.0 * PI)]
        a_max: f64,
        #[arg(long = "path-length", default_value_t = 1.0)]
        path_length: f64,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Absorption of a ramped photon pulse by an electron at rest.
    #[command(allow_negative_numbers = true)]
    DemoPhoton {
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long, default_value_t = 0.05)]
        frequency: f64,
        #[arg(long, default_value_t = 2.0)]
        wavelength: f64,
        #[arg(long, default_value_t = 2.0)]
        peak: f64,
        #[arg(long, default_value_t = 50.0)]
        ramp_time: f64,
        #[arg(long, default_value_t = 0.3)]
        phase: f64,
        #[arg(long, default_value_t = 200.0)]
        duration: f64,
    },
    /// Radial profile and azimuthal density/field split of a hydrogen state.
    #[command(allow_negative_numbers = true)]
    DemoHydrogen {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        m: i32,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
    /// Self-consistent solve of a TOML problem file.
    SolveOfdft { input: PathBuf },
    /// Run the invariant suite and print a pass/fail table.
    Verify,
}

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input or unwritable output (exit 2).
    Input(Error),
    /// A check or a solve that did not meet its target (exit 1).
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    /// One-line JSON report for stderr.
    pub fn report(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            status: &'a str,
            kind: &'a str,
            exit_code: u8,
            message: String,
        }
        let (kind, message) = match self {
            CliError::Input(e) => ("input", e.to_string()),
            CliError::Check(m) => ("check", m.clone()),
        };
        serde_json::to_string(&Report { status: "error", kind, exit_code: self.exit_code(), message })
            .unwrap_or_else(|_| format!("{{\"status\":\"error\",\"kind\":\"{kind}\"}}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e)
    }
}

/// Artifacts written and the human summary of a successful run.
#[derive(Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

impl RunReport {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Input(Error::Io(format!("{}: {e}", path.display()))))?;
        self.files.push(path);
        Ok(())
    }
}

fn positive(name: &'static str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {x}") }.into())
    }
}

fn at_least_two(name: &'static str, n: usize) -> Result<(), CliError> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("needs at least 2 samples, got {n}") }.into())
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::Input(Error::Io(format!("{}: {e}", cfg.out.display()))))?;
    let dir = cfg.out.as_path();
    match &cfg.command {
        Command::DemoFreeElectron { rho0, v, samples, slices } => free_electron(dir, *rho0, *v, *samples, *slices),
        Command::DemoSpin { gamma, b0, rho0, const_ll, alpha, dt, t_end, t_ramp } => {
            spin(dir, LlParams { gamma: *gamma, const_ll: *const_ll, alpha: *alpha }, *b0, *rho0, *dt, *t_end, *t_ramp)
        }
        Command::DemoAb { a_max, path_length, rho0, v, samples } => ab(dir, *a_max, *path_length, *rho0, *v, *samples),
        Command::DemoPhoton { rho0, frequency, wavelength, peak, ramp_time, phase, duration } => {
            photon(dir, *rho0, *frequency, *wavelength, *peak, *ramp_time, *phase, *duration)
        }
        Command::DemoHydrogen { n, l, m, samples } => hydrogen(dir, *n, *l, *m, *samples),
        Command::SolveOfdft { input } => solve(dir, input),
        Command::Verify => verify_all(dir, cfg.seed),
    }
}

fn free_electron(dir: &Path, rho0: f64, v: f64, samples: usize, slices: usize) -> Result<RunReport, CliError> {
    at_least_two("samples", samples)?;
    let st = WaveState::new(rho0, v)?;
    if v == 0.0 {
        return Err(
            Error::InvalidParameter { name: "v", reason: "a wave at rest has no wavelength to sample".into() }.into()
        );
    }
    let (lambda, period) = (st.wavelength(), 1.0 / st.frequency());
    let mut csv = String::from("z,t,rho,S,E_tot\n");
    for j in 0..slices.max(1) {
        let t = period * j as f64 / slices.max(1) as f64;
        for i in 0..samples {
            let z = lambda * i as f64 / samples as f64;
            writeln!(
                csv,
                "{z:.10e},{t:.10e},{:.15e},{:.15e},{:.15e}",
                density(&st, z, t),
                field_intensity(&st, z, t),
                total_energy_density(&st, z, t)
            )
            .ok();
        }
    }
    let mut rep = RunReport::default();
    rep.write(dir, "free_electron.csv", &csv)?;
    let e = 0.5 * rho0 * v * v;
    rep.summary = format!(
        "lambda = {lambda:.6} a0, nu = {:.6}, omega = {:.6}, k = {:.6}\nE_tot density = {e:.6} Ha ({:.4} eV)\n",
        st.frequency(),
        st.angular_frequency(),
        st.wavenumber(),
        e * HARTREE_EV
    );
    Ok(rep)
}

fn spin(
    dir: &Path,
    params: LlParams,
    b0: f64,
    rho0: f64,
    dt: f64,
    t_end: f64,
    t_ramp: f64,
) -> Result<RunReport, CliError> {
    positive("dt", dt)?;
    positive("t_end", t_end)?;
    positive("rho0", rho0)?;
    let steps = (t_end / dt).ceil() as usize;
    let s0 = Multivector::vector(0.0, std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let v = Multivector::e3();
    let b_final = Multivector::e1() * b0;
    let ramp = FieldRamp::new(b_final, t_ramp)?;
    let tr = integrate_modified_ll(&s0, &v, &ramp, params, dt, steps)?;

    // Short ramps of a weak field: the change in S approaches the induced term.
    let weak = Multivector::e1() * (1e-3 * b0);
    let predicted = induced_spin(&s0, &v, &weak, params.const_ll)?;
    let mut table = String::from("t_ramp,dSx,dSy,dSz,induced_x,induced_y,induced_z,rel_error\n");
    for t_r in [1.0, 0.1, 0.01, 0.001] {
        let steps = 1000;
        let tr = integrate_modified_ll(&s0, &v, &FieldRamp::new(weak, t_r)?, params, t_r / steps as f64, steps)?;
        let d = tr.last() - s0;
        let rel = if predicted.norm() > 0.0 { (d - predicted).norm() / predicted.norm() } else { f64::NAN };
        // `+ 0.0` folds negative zeros so the table prints `0`.
        let (dv, pv) = (d.vector_part().map(|x| x + 0.0), predicted.vector_part().map(|x| x + 0.0));
        writeln!(
            table,
            "{t_r:.3e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{rel:.6e}",
            dv[0], dv[1], dv[2], pv[0], pv[1], pv[2]
        )
        .ok();
    }

    let mut rep = RunReport::default();
    rep.write(dir, "spin_trajectory.csv", &tr.to_csv())?;
    rep.write(dir, "spin_induced.csv", &table)?;
    let (w_up, w_down) = larmor_frequency(params.gamma, b0, rho0);
    let last = tr.last().vector_part();
    rep.summary = format!(
        "Larmor split omega_B = {w_up:.6} / {w_down:.6} a.u. ({:.4} / {:.4} eV)\nS(t_end) = ({:.6}, {:.6}, {:.6})\n",
        w_up * HARTREE_EV,
        w_down * HARTREE_EV,
        last[0],
        last[1],
        last[2]
    );
    Ok(rep)
}

fn ab(dir: &Path, a_max: f64, path_length: f64, rho0: f64, v: f64, samples: usize) -> Result<RunReport, CliError> {
    positive("A-max", a_max)?;
    positive("path-length", path_length)?;
    at_least_two("samples", samples)?;
    let st = WaveState::new(rho0, v)?;
    let z = path_length + 1.0;
    let mut rows = Vec::with_capacity(samples + 1);
    let mut csv = String::from("A,intensity\n");
    for k in 0..=samples {
        let a = a_max * k as f64 / samples as f64;
        let i = ab_superposition(&st, a, 0.0, path_length, z, 0.0)?.norm_sqr() / rho0;
        writeln!(csv, "{a:.10e},{i:.15e}").ok();
        rows.push((a, i));
    }
    let zeros: Vec<f64> = (1..samples)
        .filter(|&k| rows[k].1 < rows[k - 1].1 && rows[k].1 <= rows[k + 1].1 && rows[k].1 < 1e-3)
        .map(|k| rows[k].0)
        .collect();
    let mut rep = RunReport::default();
    rep.write(dir, "ab_scan.csv", &csv)?;
    let list: Vec<String> = zeros.iter().map(|a| format!("{a:.4}")).collect();
    rep.summary = format!("intensity zeros near A = [{}]\n", list.join(", "));
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn photon(
    dir: &Path,
    rho0: f64,
    frequency: f64,
    wavelength: f64,
    peak: f64,
    ramp_time: f64,
    phase: f64,
    duration: f64,
) -> Result<RunReport, CliError> {
    let pulse = PhotonPulse::new(Envelope::LinearRamp { peak, ramp_time }, wavelength, frequency, phase, duration)?;
    let abs = absorb_photon(&WaveState::at_rest(rho0)?, &pulse, 0.0)?;
    let mut rep = RunReport::default();
    rep.write(dir, "photon_absorption.csv", &abs.to_csv())?;
    let v = abs.final_state.speed();
    let e = 2.0 * PI * frequency;
    rep.summary = format!(
        "absorption complete at t = {:.6} (threshold reached at {:.6})\nfinal speed v = {v:.6}, photon energy {e:.6} Ha ({:.4} eV)\n",
        abs.t_final,
        abs.t_saturation,
        e * HARTREE_EV
    );
    Ok(rep)
}

fn hydrogen(dir: &Path, n: u32, l: u32, m: i32, samples: usize) -> Result<RunReport, CliError> {
    at_least_two("samples", samples)?;
    let qn = QuantumNumbers::new(n, l, m)?;
    let (theta, phi) = (PI / 3.0, PI / 5.0);
    let r_max = 6.0 * (n * n) as f64 + 10.0;
    let mut radial = String::from("r,theta,phi,rho_half,S_half\n");
    for k in 0..samples {
        let r = r_max * (k + 1) as f64 / samples as f64;
        let (a, b) = decompose_density_field(&qn, r, theta, phi);
        writeln!(radial, "{r:.10e},{theta:.10e},{phi:.10e},{a:.15e},{b:.15e}").ok();
    }
    let r0 = (n * n) as f64;
    let mut azimuth = String::from("r,theta,phi,rho_half,S_half\n");
    for k in 0..samples {
        let ph = 2.0 * PI * k as f64 / samples as f64;
        let (a, b) = decompose_density_field(&qn, r0, theta, ph);
        writeln!(azimuth, "{r0:.10e},{theta:.10e},{ph:.10e},{a:.15e},{b:.15e}").ok();
    }
    let mut rep = RunReport::default();
    rep.write(dir, "hydrogen_radial.csv", &radial)?;
    rep.write(dir, "hydrogen_decomposition.csv", &azimuth)?;
    let e = qn.energy();
    rep.summary = format!("E_{n} = {e:.6} Ha ({:.4} eV)\n", e * HARTREE_EV);
    Ok(rep)
}

fn solve(dir: &Path, input: &Path) -> Result<RunReport, CliError> {
    let problem = Problem::load(input).map_err(|e| match e {
        Error::Io(m) => Error::Io(format!("{}: {m}", input.display())),
        other => other,
    })?;
    let res = scf_solve(&problem.grid, &problem.v_ext, &problem.pi, problem.electrons, &problem.scf)?;
    let mut rep = RunReport::default();
    rep.write(dir, "scf_result.json", &res.to_json())?;
    rep.write(dir, "fields.csv", &field_table_csv(&problem.grid, &res.fields))?;
    let last = res.residual_history.last().copied().unwrap_or((f64::NAN, f64::NAN));
    rep.summary = format!(
        "mu = {:.10} Ha ({:.6} eV), converged = {}, iterations = {}, residual = ({:.2e}, {:.2e})\n",
        res.mu,
        res.mu * HARTREE_EV,
        res.converged,
        res.iterations,
        last.0,
        last.1
    );
    if !res.converged {
        return Err(CliError::Check(format!(
            "SCF stopped after {} iterations without meeting tol (results written to {})",
            res.iterations,
            dir.display()
        )));
    }
    Ok(rep)
}

fn verify_all(dir: &Path, seed: u64) -> Result<RunReport, CliError> {
    let results = verify::run_suite(seed)?;
    let table = verify::format_table(&results);
    let mut rep = RunReport::default();
    let json = serde_json::to_string_pretty(&results).map_err(|e| CliError::Input(Error::Io(e.to_string())))?;
    rep.write(dir, "verify.json", &json)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if !failed.is_empty() {
        print!("{table}");
        return Err(CliError::Check(format!("failed checks: {}", failed.join("; "))));
    }
    rep.summary = table;
    Ok(rep)
}
