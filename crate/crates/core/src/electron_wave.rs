//! Closed-form free-electron wave: oscillating density, internal field
//! energy, multivector and complex wavefunctions, energy and current.
//!
//! Atomic units throughout (hbar = m = e = 1). With `k = v` and
//! `omega = v^2/2`, the wavelength is `2 pi / v` and the frequency
//! `v^2 / (4 pi)`. Amplitudes `rho^(1/2)` and `S^(1/2)` are the signed
//! quantities `sqrt(rho0) cos(phase)` and `sqrt(S0) sin(phase)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ga3::Multivector;

/// Sign of the internal E x H flux relative to the direction of motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Helicity {
    #[default]
    Positive,
    Negative,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Positive => 1.0,
            Helicity::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Helicity {
        match self {
            Helicity::Positive => Helicity::Negative,
            Helicity::Negative => Helicity::Positive,
        }
    }
}

/// Parameters of a free electron wave travelling along `direction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveState {
    rho0: f64,
    v: f64,
    direction: Multivector,
    helicity: Helicity,
    tilt: f64,
}

impl WaveState {
    /// Wave along `e3` with positive helicity and a 45 degree field-plane tilt.
    pub fn new(rho0: f64, v: f64) -> Result<Self> {
        if !(rho0 > 0.0) || !rho0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rho0",
                reason: format!("must be positive and finite, got {rho0}"),
            });
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter {
                name: "v",
                reason: format!("must be non-negative and finite, got {v}"),
            });
        }
        Ok(Self { rho0, v, direction: Multivector::e3(), helicity: Helicity::Positive, tilt: PI / 4.0 })
    }

    pub fn at_rest(rho0: f64) -> Result<Self> {
        Self::new(rho0, 0.0)
    }

    pub fn with_direction(mut self, direction: Multivector) -> Result<Self> {
        direction.require_unit_vector("direction")?;
        self.direction = direction;
        Ok(self)
    }

    pub fn with_helicity(mut self, helicity: Helicity) -> Self {
        self.helicity = helicity;
        self
    }

    pub fn with_tilt(mut self, tilt: f64) -> Self {
        self.tilt = tilt;
        self
    }

    /// Same electron at a different speed.
    pub fn with_speed(&self, v: f64) -> Result<Self> {
        let mut next = Self::new(self.rho0, v)?;
        next.direction = self.direction;
        next.helicity = self.helicity;
        next.tilt = self.tilt;
        Ok(next)
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn speed(&self) -> f64 {
        self.v
    }

    pub fn direction(&self) -> Multivector {
        self.direction
    }

    pub fn helicity(&self) -> Helicity {
        self.helicity
    }

    pub fn tilt(&self) -> f64 {
        self.tilt
    }

    /// de Broglie wavelength `2 pi / v`; infinite at rest.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.v
    }

    /// `v^2 / (4 pi)`.
    pub fn frequency(&self) -> f64 {
        self.v * self.v / (4.0 * PI)
    }

    pub fn angular_frequency(&self) -> f64 {
        0.5 * self.v * self.v
    }

    pub fn wavenumber(&self) -> f64 {
        self.v
    }

    /// Field amplitude `S0`: equal to `rho0` for a moving electron, zero at rest.
    pub fn s0(&self) -> f64 {
        if self.v == 0.0 {
            0.0
        } else {
            self.rho0
        }
    }

    /// `2 pi z / lambda - 2 pi nu t`.
    pub fn phase(&self, z: f64, t: f64) -> f64 {
        self.wavenumber() * z - self.angular_frequency() * t
    }

    /// Unit bivector of the field plane, `i * direction`.
    pub fn field_plane(&self) -> Multivector {
        self.direction.dual()
    }

    pub fn rho_half(&self, z: f64, t: f64) -> f64 {
        self.rho0.sqrt() * self.phase(z, t).cos()
    }

    pub fn s_half(&self, z: f64, t: f64) -> f64 {
        self.s0().sqrt() * self.phase(z, t).sin()
    }
}

/// Internal field amplitudes, with the product constraint `E0 H0 = S0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldAmplitudes {
    pub e0: f64,
    pub h0: f64,
    pub phase: f64,
}

impl FieldAmplitudes {
    /// Even split `E0 = H0 = sqrt(S0)` with the pi/2 phase lag.
    pub fn from_state(state: &WaveState) -> Self {
        let a = state.s0().sqrt();
        Self { e0: a, h0: a, phase: PI / 2.0 }
    }

    pub fn product(&self) -> f64 {
        self.e0 * self.h0
    }

    /// Electric field, along `e1`.
    pub fn electric(&self, state: &WaveState, z: f64, t: f64) -> Multivector {
        Multivector::e1() * (self.e0 * (state.phase(z, t) + self.phase).cos())
    }

    /// Magnetic field, along `e2`.
    pub fn magnetic(&self, state: &WaveState, z: f64, t: f64) -> Multivector {
        Multivector::e2() * (self.h0 * (state.phase(z, t) + self.phase).cos())
    }
}

/// `rho0 cos^2(phase)`.
pub fn density(state: &WaveState, z: f64, t: f64) -> f64 {
    let c = state.phase(z, t).cos();
    state.rho0 * c * c
}

/// `S0 sin^2(phase)`.
pub fn field_intensity(state: &WaveState, z: f64, t: f64) -> f64 {
    let s = state.phase(z, t).sin();
    state.s0() * s * s
}

/// `psi = rho^(1/2) + h S^(1/2) (i d)`, a scalar plus a bivector in the field plane.
pub fn wavefunction(state: &WaveState, z: f64, t: f64) -> Multivector {
    let plane = state.field_plane();
    Multivector::scalar(state.rho_half(z, t)) + plane * (state.helicity.sign() * state.s_half(z, t))
}

/// `sqrt(rho0) exp(i phase)`.
pub fn schrodinger_wavefunction(state: &WaveState, z: f64, t: f64) -> Complex64 {
    Complex64::from_polar(state.rho0.sqrt(), state.phase(z, t))
}

/// `1/2 rho(z,t) v^2`.
pub fn kinetic_energy_density(state: &WaveState, z: f64, t: f64) -> f64 {
    0.5 * density(state, z, t) * state.v * state.v
}

/// Field energy `1/2 rho0 v^2 sin^2(phase)`.
pub fn field_energy_density(state: &WaveState, z: f64, t: f64) -> f64 {
    let s = state.phase(z, t).sin();
    0.5 * state.rho0 * state.v * state.v * s * s
}

/// Kinetic plus field energy density; equals `1/2 rho0 v^2` everywhere.
pub fn total_energy_density(state: &WaveState, z: f64, t: f64) -> f64 {
    kinetic_energy_density(state, z, t) + field_energy_density(state, z, t)
}

/// `J = rho^(1/2) grad S^(1/2) - S^(1/2) grad rho^(1/2)` along the direction of motion.
pub fn current_density(state: &WaveState, z: f64, t: f64) -> Multivector {
    let k = state.wavenumber();
    let phase = state.phase(z, t);
    let amp = state.rho0.sqrt();
    let (s, c) = phase.sin_cos();
    let rho_half = amp * c;
    let s_half = amp * s;
    let d_rho_half = -amp * k * s;
    let d_s_half = amp * k * c;
    state.direction * (rho_half * d_s_half - s_half * d_rho_half)
}

/// `d omega / d k` by a central difference over neighbouring states.
pub fn group_velocity(state: &WaveState) -> Result<f64> {
    let k = state.wavenumber();
    let dk = 1e-4 * k.max(1.0);
    let plus = state.with_speed((k + dk).abs())?;
    let minus = state.with_speed((k - dk).abs())?;
    Ok((plus.angular_frequency() - minus.angular_frequency()) / (2.0 * dk))
}

/// Wigner–Seitz radius `(3 / (4 pi rho))^(1/3)`.
pub fn wigner_seitz_radius(rho: f64) -> f64 {
    (3.0 / (4.0 * PI * rho)).cbrt()
}

fn require_positive_rs(rs: f64) -> Result<()> {
    if !(rs > 0.0) || !rs.is_finite() {
        return Err(Error::InvalidParameter {
            name: "rs",
            reason: format!("Wigner-Seitz radius must be positive, got {rs}"),
        });
    }
    Ok(())
}

/// Self-repulsion of a uniform sphere of one electron, `3 / (5 rs)`.
pub fn hartree_potential(rs: f64) -> Result<f64> {
    require_positive_rs(rs)?;
    Ok(3.0 / (5.0 * rs))
}

/// Cohesive potential `-3 / (5 rs)`, cancelling the self-repulsion.
pub fn cohesive_potential(rs: f64) -> Result<f64> {
    require_positive_rs(rs)?;
    Ok(-3.0 / (5.0 * rs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(v: f64) -> WaveState {
        WaveState::new(1.0, v).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(WaveState::new(0.0, 1.0).is_err());
        assert!(WaveState::new(1.0, -0.1).is_err());
        assert!(WaveState::new(1.0, f64::NAN).is_err());
        assert!(state(1.0).with_direction(Multivector::e1() * 2.0).is_err());
    }

    #[test]
    fn density_examples() {
        let s = state(1.3);
        assert_eq!(density(&s, 0.0, 0.0), 1.0);
        // phase pi/2 at z = pi/(2k)
        let z = PI / 2.0 / s.wavenumber();
        assert!(density(&s, z, 0.0) < 1e-30);
        assert!((field_intensity(&s, z, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(field_intensity(&s, 0.0, 0.0), 0.0);
        let rest = WaveState::at_rest(2.5).unwrap();
        assert_eq!(density(&rest, 3.0, 7.0), 2.5);
        assert_eq!(rest.s0(), 0.0);
    }

    #[test]
    fn half_angle_form_agrees() {
        let s = WaveState::new(0.7, 1.9).unwrap();
        for &(z, t) in &[(0.3, 0.1), (-2.0, 4.0), (11.0, -3.5)] {
            let alt = 0.5 * s.rho0() * (1.0 + (2.0 * s.phase(z, t)).cos());
            assert!((density(&s, z, t) - alt).abs() < 1e-14);
        }
    }

    #[test]
    fn wavefunction_examples() {
        let s = state(0.8);
        let psi = wavefunction(&s, 0.4, 1.1);
        let n = psi.reverse() * psi;
        assert!(n.max_abs_diff(&Multivector::scalar(1.0)) < 1e-15);
        assert_eq!(wavefunction(&state(0.0), 1.0, 1.0), Multivector::scalar(1.0));
        let flipped = wavefunction(&s.with_helicity(Helicity::Negative), 0.4, 1.1);
        assert_eq!(flipped, psi.reverse());
    }

    #[test]
    fn schrodinger_at_origin() {
        let s = WaveState::new(4.0, 1.0).unwrap();
        let psi = schrodinger_wavefunction(&s, 0.0, 0.0);
        assert_eq!(psi, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn energy_examples() {
        assert_eq!(total_energy_density(&state(0.0), 1.0, 1.0), 0.0);
        let s = state(2.0);
        assert!((total_energy_density(&s, 0.37, 0.11) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn current_examples() {
        let s = WaveState::new(2.0, 0.6).unwrap();
        let j = current_density(&s, 1.7, -0.4);
        assert!(j.max_abs_diff(&(Multivector::e3() * 1.2)) < 1e-15);
        assert_eq!(current_density(&state(0.0), 0.3, 0.2), Multivector::ZERO);
    }

    #[test]
    fn group_velocity_examples() {
        assert!((group_velocity(&state(1.0)).unwrap() - 1.0).abs() < 1e-8);
        assert!((group_velocity(&state(0.5)).unwrap() - 0.5).abs() < 0.5e-8);
        assert!(group_velocity(&state(0.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn potentials() {
        assert!((hartree_potential(2.0).unwrap() - 0.3).abs() < 1e-15);
        assert!((hartree_potential(1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!((hartree_potential(0.6).unwrap() - 1.0).abs() < 1e-15);
        assert!((cohesive_potential(2.0).unwrap() + 0.3).abs() < 1e-15);
        assert!(hartree_potential(0.0).is_err());
        assert!(cohesive_potential(-1.0).is_err());
    }

    #[test]
    fn planck_de_broglie_product() {
        let s = state(1.7);
        assert!((s.wavelength() * s.frequency() - s.speed() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn field_amplitude_product_is_s0() {
        let s = WaveState::new(3.0, 1.0).unwrap();
        let f = FieldAmplitudes::from_state(&s);
        assert!((f.product() - 3.0).abs() < 1e-15);
        assert_eq!(f.phase, PI / 2.0);
    }
}
