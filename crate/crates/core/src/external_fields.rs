//! Electrostatic and vector potentials, the Aharonov–Bohm amplitude, Lorentz
//! acceleration and photon absorption at a fixed coordinate.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::electron_wave::{schrodinger_wavefunction, WaveState};
use crate::error::{Error, Result};
use crate::ga3::Multivector;

/// Scalar potential plus a vector potential that is constant on `[z0, z1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialEnvironment {
    phi: f64,
    a: Multivector,
    z0: f64,
    z1: f64,
}

impl PotentialEnvironment {
    pub fn new(phi: f64, a: Multivector, z0: f64, z1: f64) -> Result<Self> {
        if !a.is_grade(1) {
            return Err(Error::GradeMismatch { op: "vector potential", expected: 1 });
        }
        if !(z1 >= z0) {
            return Err(Error::InvalidParameter {
                name: "z1",
                reason: format!("region end {z1} lies before its start {z0}"),
            });
        }
        Ok(Self { phi, a, z0, z1 })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn vector_potential(&self) -> Multivector {
        self.a
    }

    pub fn region(&self) -> (f64, f64) {
        (self.z0, self.z1)
    }

    /// Aharonov–Bohm amplitude using the component of `A` along the direction of motion.
    pub fn ab_amplitude(&self, state: &WaveState, z: f64, t: f64) -> Result<Complex64> {
        let a_par = self.a.dot3(&state.direction());
        ab_superposition(state, a_par, self.z0, self.z1, z, t)
    }
}

/// `omega - phi`.
pub fn shifted_frequency(omega0: f64, phi: f64) -> f64 {
    omega0 - phi
}

/// Speed of an electron emitted by a photon of angular frequency `omega_ph`
/// against a work function `phi_m`.
pub fn emission_speed(omega_ph: f64, phi_m: f64) -> Result<f64> {
    let e = omega_ph - phi_m;
    if e < 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega_ph",
            reason: format!("photon frequency {omega_ph} is below the work function {phi_m}"),
        });
    }
    Ok((2.0 * e).sqrt())
}

/// Plane wave with the frequency lowered by `phi`; the wavelength is unchanged.
pub fn wavefunction_in_potential(state: &WaveState, phi: f64, z: f64, t: f64) -> Complex64 {
    let k = state.wavenumber();
    let omega = shifted_frequency(state.angular_frequency(), phi);
    Complex64::from_polar(state.rho0().sqrt(), k * z - omega * t)
}

/// Travelling components and their standing superposition in a box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSuperposition {
    pub plus: Complex64,
    pub minus: Complex64,
    /// `1/2 (plus + minus)` with the common carrier `exp(-i omega t)` removed.
    pub standing: Complex64,
}

/// Superposition of the two travellers with `k = 2 pi n / L`.
pub fn box_superposition(rho0: f64, length: f64, n: u32, z: f64, t: f64) -> Result<BoxSuperposition> {
    if n == 0 {
        return Err(Error::InvalidParameter { name: "n", reason: "mode index must be at least 1".into() });
    }
    if !(length > 0.0) {
        return Err(Error::InvalidParameter { name: "length", reason: format!("must be positive, got {length}") });
    }
    if !(0.0..=length).contains(&z) {
        return Err(Error::InvalidParameter { name: "z", reason: format!("{z} lies outside [0, {length}]") });
    }
    let k = 2.0 * PI * f64::from(n) / length;
    let omega = 0.5 * k * k;
    let amp = rho0.sqrt();
    let wt = (omega * t).rem_euclid(2.0 * PI);
    let plus = Complex64::from_polar(amp, k * z - wt);
    let minus = Complex64::from_polar(amp, -k * z - wt);
    let carrier = Complex64::from_polar(1.0, wt);
    let standing = (plus + minus) * carrier * 0.5;
    Ok(BoxSuperposition { plus, minus, standing })
}

/// `k0 - A` along the direction of motion.
pub fn shifted_wavevector(k0: f64, a_parallel: f64) -> f64 {
    k0 - a_parallel
}

/// Mean of the two paths that pick up phases `-/+ (z1 - z0) A` in the field region.
pub fn ab_superposition(state: &WaveState, a: f64, z0: f64, z1: f64, z: f64, t: f64) -> Result<Complex64> {
    if !(z1 >= z0) {
        return Err(Error::InvalidParameter {
            name: "z1",
            reason: format!("region end {z1} lies before its start {z0}"),
        });
    }
    if z < z1 {
        return Err(Error::InsideFieldRegion { z, z1 });
    }
    let free = schrodinger_wavefunction(state, z, t);
    let shift = (z1 - z0) * a;
    let first = free * Complex64::from_polar(1.0, -shift);
    let second = free * Complex64::from_polar(1.0, shift);
    Ok((first + second) * 0.5)
}

/// Uniform Cartesian sampling grid, `x = origin + i h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleGrid {
    pub dims: [usize; 3],
    pub spacing: f64,
    pub origin: [f64; 3],
}

impl SampleGrid {
    pub fn new(dims: [usize; 3], spacing: f64, origin: [f64; 3]) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if dims.iter().any(|&d| d < 3) {
            return Err(Error::InvalidGrid(format!("every axis needs at least 3 points, got {dims:?}")));
        }
        Ok(Self { dims, spacing, origin })
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let h = self.spacing;
        [self.origin[0] + i as f64 * h, self.origin[1] + j as f64 * h, self.origin[2] + k as f64 * h]
    }

    /// Evaluates `f` at every grid point in storage order.
    pub fn sample<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        let [nx, ny, nz] = self.dims;
        (0..nx * ny * nz)
            .into_par_iter()
            .map(|idx| {
                let k = idx % nz;
                let j = (idx / nz) % ny;
                let i = idx / (ny * nz);
                f(self.point(i, j, k))
            })
            .collect()
    }
}

/// Plane wave `sqrt(rho0) exp i((k0 - A).x - omega t)` with `omega = |k0|^2 / 2`.
pub fn shifted_plane_wave(rho0: f64, k0: [f64; 3], a: [f64; 3], x: [f64; 3], t: f64) -> Complex64 {
    let q = [k0[0] - a[0], k0[1] - a[1], k0[2] - a[2]];
    let omega = 0.5 * (k0[0] * k0[0] + k0[1] * k0[1] + k0[2] * k0[2]);
    let phase = q[0] * x[0] + q[1] * x[1] + q[2] * x[2] - omega * t;
    Complex64::from_polar(rho0.sqrt(), phase)
}

/// Eigenvalue of the Laplacian on [`shifted_plane_wave`], `-|k0 - A|^2`.
pub fn shifted_wave_laplacian_factor(k0: [f64; 3], a: [f64; 3]) -> f64 {
    -((k0[0] - a[0]).powi(2) + (k0[1] - a[1]).powi(2) + (k0[2] - a[2]).powi(2))
}

/// Max-norm residual of `i dpsi/dt = 1/2 (i grad - A)^2 psi + V psi` over
/// interior points, from three frames at `t - dt`, `t`, `t + dt`.
pub fn vector_schrodinger_residual(
    frames: [&[Complex64]; 3],
    grid: &SampleGrid,
    a: &Multivector,
    potential: f64,
    dt: f64,
) -> Result<f64> {
    if !a.is_grade(1) {
        return Err(Error::GradeMismatch { op: "vector_schrodinger_residual", expected: 1 });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
    }
    if grid.dims.iter().any(|&d| d < 3) {
        return Err(Error::InvalidGrid(format!("stencil needs 3 points per axis, got {:?}", grid.dims)));
    }
    for f in frames {
        if f.len() != grid.len() {
            return Err(Error::GridMismatch { expected: grid.len(), found: f.len() });
        }
    }
    let [prev, cur, next] = frames;
    let [nx, ny, nz] = grid.dims;
    let av = a.vector_part();
    let a2 = av[0] * av[0] + av[1] * av[1] + av[2] * av[2];
    let h = grid.spacing;
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;
    let i_unit = Complex64::i();

    let residual = (1..nx - 1)
        .into_par_iter()
        .map(|i| {
            let mut worst = 0.0f64;
            for j in 1..ny - 1 {
                for k in 1..nz - 1 {
                    let c = grid.index(i, j, k);
                    let p = cur[c];
                    let strides = [ny * nz, nz, 1];
                    let mut lap = Complex64::new(0.0, 0.0);
                    let mut a_grad = Complex64::new(0.0, 0.0);
                    for (ax, &s) in strides.iter().enumerate() {
                        let up = cur[c + s];
                        let down = cur[c - s];
                        lap += (up - 2.0 * p + down) * inv_h2;
                        a_grad += (up - down) * (inv_2h * av[ax]);
                    }
                    let h_psi = (-lap - 2.0 * i_unit * a_grad + a2 * p) * 0.5 + potential * p;
                    let dpsi_dt = (next[c] - prev[c]) / (2.0 * dt);
                    let r = (i_unit * dpsi_dt - h_psi).norm();
                    worst = worst.max(r);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    if !residual.is_finite() {
        return Err(Error::NonFinite("wave samples"));
    }
    Ok(residual)
}

/// `dv/dt = -grad(phi) / rho0`.
pub fn newton_acceleration(rho0: f64, grad_phi: &Multivector) -> Result<Multivector> {
    if !(rho0 > 0.0) {
        return Err(Error::InvalidParameter { name: "rho0", reason: format!("must be positive, got {rho0}") });
    }
    if !grad_phi.is_grade(1) {
        return Err(Error::GradeMismatch { op: "newton_acceleration", expected: 1 });
    }
    Ok(*grad_phi * (-1.0 / rho0))
}

/// Grade-1 part of `F (1 + v)` with `F = E + i B`, which equals `E + v x B`.
pub fn lorentz_acceleration(e: &Multivector, b: &Multivector, v: &Multivector) -> Result<Multivector> {
    for x in [e, b, v] {
        if !x.is_grade(1) {
            return Err(Error::GradeMismatch { op: "lorentz_acceleration", expected: 1 });
        }
    }
    let faraday = *e + Multivector::i() * *b;
    Ok((faraday * (Multivector::one() + *v)).grade(1))
}

/// Envelope `S0(t)` of the incident field energy density.
#[derive(Clone, Copy, Debug)]
pub enum Envelope {
    /// `peak * min(t / ramp_time, 1)`.
    LinearRamp { peak: f64, ramp_time: f64 },
    /// Arbitrary profile; must vanish at `t = 0`.
    Custom(fn(f64) -> f64),
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Envelope::LinearRamp { peak, ramp_time } => peak * (t / ramp_time).clamp(0.0, 1.0),
            Envelope::Custom(f) => f(t),
        }
    }
}

/// Incident field `S_em(t) = S0(t) sin^2(phase0 - 2 pi nu t)` at the electron.
#[derive(Clone, Copy, Debug)]
pub struct PhotonPulse {
    envelope: Envelope,
    wavelength: f64,
    frequency: f64,
    phase0: f64,
    duration: f64,
}

impl PhotonPulse {
    pub fn new(envelope: Envelope, wavelength: f64, frequency: f64, phase0: f64, duration: f64) -> Result<Self> {
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::InvalidParameter {
                name: "frequency",
                reason: format!("must be positive, got {frequency}"),
            });
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::InvalidParameter {
                name: "wavelength",
                reason: format!("must be positive, got {wavelength}"),
            });
        }
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::InvalidParameter {
                name: "duration",
                reason: format!("must be positive, got {duration}"),
            });
        }
        if let Envelope::LinearRamp { peak, ramp_time } = envelope {
            if !(ramp_time > 0.0) || !(peak >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "envelope",
                    reason: format!("linear ramp needs peak >= 0 and ramp_time > 0, got {peak}, {ramp_time}"),
                });
            }
        }
        let start = envelope.value(0.0);
        if start.abs() > 1e-15 {
            return Err(Error::InvalidParameter { name: "envelope", reason: format!("S0(0) = {start}, expected 0") });
        }
        Ok(Self { envelope, wavelength, frequency, phase0, duration })
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn phase0(&self) -> f64 {
        self.phase0
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    fn carrier(&self, t: f64) -> f64 {
        self.phase0 - 2.0 * PI * self.frequency * t
    }

    /// Field density at the electron with the envelope clamped at `rho0`.
    fn absorbed(&self, rho0: f64, t: f64) -> f64 {
        let s = self.carrier(t).sin();
        self.envelope.value(t).min(rho0) * s * s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsorptionSample {
    pub t: f64,
    pub rho_el: f64,
    pub s_el: f64,
}

#[derive(Clone, Debug)]
pub struct Absorption {
    pub final_state: WaveState,
    pub history: Vec<AbsorptionSample>,
    /// Time at which the envelope first reaches `rho0`.
    pub t_saturation: f64,
    pub t_final: f64,
    rho0: f64,
    pulse: PhotonPulse,
}

impl Absorption {
    /// Inertial density at `z0 + dz` when absorption completes, with `S0(z0 + dz) ~ S0(z0)`.
    pub fn density_near(&self, dz: f64) -> f64 {
        let p = &self.pulse;
        let arg = p.carrier(self.t_final) + 2.0 * PI * dz / p.wavelength;
        let s = arg.sin();
        self.rho0 - p.envelope.value(self.t_final).min(self.rho0) * s * s
    }

    /// `t,rho_el,S_el` table with a one-line header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho_el,S_el\n");
        for s in &self.history {
            out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", s.t, s.rho_el, s.s_el));
        }
        out
    }
}

fn first_saturation(pulse: &PhotonPulse, rho0: f64, dt: f64) -> Result<f64> {
    let steps = (pulse.duration / dt).ceil() as usize;
    let mut peak = 0.0f64;
    let mut prev_t = 0.0;
    for n in 0..=steps {
        let t = (n as f64 * dt).min(pulse.duration);
        let s = pulse.envelope.value(t);
        if !s.is_finite() {
            return Err(Error::NonFinite("photon envelope"));
        }
        if s >= rho0 {
            if n == 0 {
                return Ok(0.0);
            }
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if pulse.envelope.value(mid) >= rho0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                    break;
                }
            }
            return Ok(hi);
        }
        peak = peak.max(s);
        prev_t = t;
    }
    Err(Error::IncompleteAbsorption { peak, rho0 })
}

/// Absorbs a pulse into an electron at rest at `z0`.
///
/// The inertial density at `z0` follows `rho_el = rho0 - S_em(t)` until the
/// envelope has saturated and the carrier reaches a maximum; the electron then
/// moves with `v^2 / 2 = 2 pi nu`.
pub fn absorb_photon(state0: &WaveState, pulse: &PhotonPulse, _z0: f64) -> Result<Absorption> {
    if state0.speed() != 0.0 {
        return Err(Error::InvalidParameter {
            name: "state0",
            reason: format!("absorption starts from rest, got v = {}", state0.speed()),
        });
    }
    let rho0 = state0.rho0();
    let nu = pulse.frequency;
    let dt = 1.0 / nu / 1024.0;
    let t_sat = first_saturation(pulse, rho0, dt)?;

    // Smallest t >= t_sat with phase0 - 2 pi nu t = pi/2 (mod pi).
    let m = ((pulse.phase0 - FRAC_PI_2 - 2.0 * PI * nu * t_sat) / PI).floor();
    let t_final = ((pulse.phase0 - FRAC_PI_2 - m * PI) / (2.0 * PI * nu)).max(t_sat);

    let steps = (t_final / dt).ceil() as usize;
    let mut history = Vec::with_capacity(steps + 1);
    let mut rho_el = rho0;
    let mut s_el = 0.0;
    let mut t = 0.0;
    let mut s_em = pulse.absorbed(rho0, 0.0);
    rho_el -= s_em;
    s_el += s_em;
    history.push(AbsorptionSample { t, rho_el, s_el });
    for n in 1..=steps {
        let t_next = if n == steps { t_final } else { n as f64 * dt };
        let s_next = pulse.absorbed(rho0, t_next);
        let ds = s_next - s_em;
        rho_el -= ds;
        s_el += ds;
        t = t_next;
        s_em = s_next;
        history.push(AbsorptionSample { t, rho_el, s_el });
    }

    let v = (4.0 * PI * nu).sqrt();
    let final_state = state0.with_speed(v)?;
    Ok(Absorption { final_state, history, t_saturation: t_sat, t_final, rho0, pulse: *pulse })
}

/// Adds one more quantum `2 pi nu` to the electron's angular frequency.
pub fn absorb_subsequent(state: &WaveState, frequency: f64) -> Result<WaveState> {
    if !(frequency > 0.0) {
        return Err(Error::InvalidParameter {
            name: "frequency",
            reason: format!("must be positive, got {frequency}"),
        });
    }
    let omega = state.angular_frequency() + 2.0 * PI * frequency;
    state.with_speed((2.0 * omega).sqrt())
}
