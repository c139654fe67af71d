//! Spin as a sandwich product, time-averaged spin and moment, the Zeeman-like
//! frequency split, one-sided wavefunction rotation, and a modified
//! Landau–Lifshitz flow for the field vector.

use std::f64::consts::SQRT_2;

use crate::electron_wave::{wavefunction, WaveState};
use crate::error::{Error, Result};
use crate::ga3::{Multivector, Rotor};

/// One of the two spin outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinSign {
    Up,
    Down,
}

impl SpinSign {
    pub fn sign(self) -> f64 {
        match self {
            SpinSign::Up => 1.0,
            SpinSign::Down => -1.0,
        }
    }

    pub fn flipped(self) -> SpinSign {
        match self {
            SpinSign::Up => SpinSign::Down,
            SpinSign::Down => SpinSign::Up,
        }
    }
}

/// `1/2 psi axis psi~` for a unit grade-1 axis.
pub fn spin_sandwich(psi: &Multivector, axis: &Multivector) -> Result<Multivector> {
    axis.require_unit_vector("spin axis")?;
    Ok(*psi * *axis * psi.reverse() * 0.5)
}

/// Free-electron spin `s0 = h * 1/2 psi e3 psi~`, signed by helicity.
pub fn helicity_spin(state: &WaveState, z: f64, t: f64) -> Multivector {
    let psi = wavefunction(state, z, t);
    // e3 is a unit vector, the sandwich cannot fail.
    let s = psi * Multivector::e3() * psi.reverse() * 0.5;
    s * state.helicity().sign()
}

/// Constant part direction `cos(tilt) e3 + sin(tilt) e2`.
fn tilt_axis(tilt: f64) -> Multivector {
    let (s, c) = tilt.sin_cos();
    Multivector::vector(0.0, s, c)
}

/// Spin of an electron whose field plane is tilted against the velocity:
/// `1/2 rho0 [ +-(cos a e3 + sin a e2) +- sin a sin(2 phase) e1 ]`.
pub fn tilted_spin(state: &WaveState, sign: SpinSign, z: f64, t: f64) -> Multivector {
    let tilt = state.tilt();
    let oscillation = (2.0 * state.phase(z, t)).sin();
    let e1_part = Multivector::e1() * (tilt.sin() * oscillation);
    (tilt_axis(tilt) + e1_part) * (0.5 * state.rho0() * sign.sign())
}

/// Period average of [`tilted_spin`]; the oscillating term integrates to zero.
pub fn average_spin(state: &WaveState, sign: SpinSign) -> Multivector {
    tilt_axis(state.tilt()) * (0.5 * state.rho0() * sign.sign())
}

/// `mu = gamma <s>`.
pub fn magnetic_moment(gamma: f64, avg_spin: &Multivector) -> Multivector {
    *avg_spin * gamma
}

/// `phi_B = -mu . B`.
pub fn zeeman_potential(mu: &Multivector, b: &Multivector) -> Result<f64> {
    Ok(-mu.inner(b)?.scalar_part())
}

/// The two frequency shifts `+- gamma B0 rho0 / (2 sqrt 2)`, returned as `(up, down)`.
pub fn larmor_frequency(gamma: f64, b0: f64, rho0: f64) -> (f64, f64) {
    let w = gamma * b0 * rho0 / (2.0 * SQRT_2);
    (w, -w)
}

/// One-sided rotation `psi' = R psi`.
pub fn rotate_wavefunction(rotor: &Rotor, psi: &Multivector) -> Multivector {
    rotor.apply_left(psi)
}

/// `const * S x (v x B)`, perpendicular to `S`.
pub fn induced_spin(s: &Multivector, v: &Multivector, b: &Multivector, const_ll: f64) -> Result<Multivector> {
    let vb = v.cross(b)?;
    Ok(s.cross(&vb)? * const_ll)
}

/// Time-dependent external magnetic field.
pub trait FieldProfile {
    fn field(&self, t: f64) -> Multivector;
    fn rate(&self, t: f64) -> Multivector;
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantField(pub Multivector);

impl FieldProfile for ConstantField {
    fn field(&self, _t: f64) -> Multivector {
        self.0
    }

    fn rate(&self, _t: f64) -> Multivector {
        Multivector::ZERO
    }
}

/// Linear switch-on `B(t) = B_final min(t / ramp_time, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct FieldRamp {
    target: Multivector,
    ramp_time: f64,
}

impl FieldRamp {
    pub fn new(target: Multivector, ramp_time: f64) -> Result<Self> {
        if !(ramp_time > 0.0) || !ramp_time.is_finite() {
            return Err(Error::InvalidParameter {
                name: "ramp_time",
                reason: format!("must be positive, got {ramp_time}"),
            });
        }
        if !target.is_grade(1) {
            return Err(Error::GradeMismatch { op: "field ramp", expected: 1 });
        }
        Ok(Self { target, ramp_time })
    }

    pub fn ramp_time(&self) -> f64 {
        self.ramp_time
    }
}

impl FieldProfile for FieldRamp {
    fn field(&self, t: f64) -> Multivector {
        self.target * (t / self.ramp_time).clamp(0.0, 1.0)
    }

    fn rate(&self, t: f64) -> Multivector {
        if (0.0..self.ramp_time).contains(&t) {
            self.target / self.ramp_time
        } else {
            Multivector::ZERO
        }
    }
}

/// Coupling constants of the modified Landau–Lifshitz flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LlParams {
    pub gamma: f64,
    pub const_ll: f64,
    pub alpha: f64,
}

impl Default for LlParams {
    fn default() -> Self {
        Self { gamma: 1.0, const_ll: 1.0, alpha: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinTrajectory {
    pub times: Vec<f64>,
    pub spins: Vec<Multivector>,
    pub params: LlParams,
}

impl SpinTrajectory {
    pub fn last(&self) -> Multivector {
        *self.spins.last().expect("trajectory holds the initial state")
    }

    /// `t,Sx,Sy,Sz` table with a one-line header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,Sx,Sy,Sz\n");
        for (t, s) in self.times.iter().zip(&self.spins) {
            let [x, y, z] = s.vector_part();
            out.push_str(&format!("{t:.12e},{x:.12e},{y:.12e},{z:.12e}\n"));
        }
        out
    }
}

fn ll_rhs(
    s: &Multivector,
    v: &Multivector,
    field: &dyn FieldProfile,
    params: &LlParams,
    t: f64,
) -> Result<Multivector> {
    let b = field.field(t);
    let db = field.rate(t);
    if !b.is_finite() || !db.is_finite() {
        return Err(Error::NonFinite("magnetic field"));
    }
    let precession = s.cross(&b)? * (-params.gamma / (1.0 + params.alpha * params.alpha));
    let induced = s.cross(&v.cross(&db)?)? * params.const_ll;
    Ok(precession + induced)
}

/// Fixed-step RK4 for `dS/dt = -gamma/(1+alpha^2) S x B + const S x (v x dB/dt)`.
pub fn integrate_modified_ll(
    s0: &Multivector,
    v: &Multivector,
    field: &dyn FieldProfile,
    params: LlParams,
    dt: f64,
    steps: usize,
) -> Result<SpinTrajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
    }
    if !s0.is_grade(1) || !v.is_grade(1) {
        return Err(Error::GradeMismatch { op: "integrate_modified_ll", expected: 1 });
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut spins = Vec::with_capacity(steps + 1);
    let mut s = *s0;
    times.push(0.0);
    spins.push(s);
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = ll_rhs(&s, v, field, &params, t)?;
        let k2 = ll_rhs(&(s + k1 * (0.5 * dt)), v, field, &params, t + 0.5 * dt)?;
        let k3 = ll_rhs(&(s + k2 * (0.5 * dt)), v, field, &params, t + 0.5 * dt)?;
        let k4 = ll_rhs(&(s + k3 * dt), v, field, &params, t + dt)?;
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if !s.is_finite() {
            return Err(Error::NonFinite("spin trajectory"));
        }
        times.push((n + 1) as f64 * dt);
        spins.push(s);
    }
    Ok(SpinTrajectory { times, spins, params })
}

/// Period `1/nu` of the electron wave, used to express ramp times.
pub fn wave_period(state: &WaveState) -> f64 {
    1.0 / state.frequency()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electron_wave::Helicity;

    #[test]
    fn sandwich_along_e3_is_constant() {
        let st = WaveState::new(1.5, 0.9).unwrap();
        for &(z, t) in &[(0.0, 0.0), (0.7, 0.2), (-3.0, 5.0)] {
            let s = spin_sandwich(&wavefunction(&st, z, t), &Multivector::e3()).unwrap();
            assert!(s.max_abs_diff(&(Multivector::e3() * 0.75)) < 1e-15);
        }
    }

    #[test]
    fn sandwich_of_scalar_psi() {
        let psi = Multivector::scalar(2.0f64.sqrt());
        let axis = Multivector::vector(0.6, 0.0, 0.8);
        let s = spin_sandwich(&psi, &axis).unwrap();
        assert!(s.max_abs_diff(&axis) < 1e-15);
        assert!(spin_sandwich(&psi, &(axis * 2.0)).is_err());
    }

    #[test]
    fn helicity_spin_signs() {
        let st = WaveState::new(1.0, 1.0).unwrap();
        let up = helicity_spin(&st, 0.3, 0.1);
        let down = helicity_spin(&st.with_helicity(Helicity::Negative), 0.3, 0.1);
        assert!(up.max_abs_diff(&(Multivector::e3() * 0.5)) < 1e-15);
        assert!(down.max_abs_diff(&(Multivector::e3() * -0.5)) < 1e-15);
    }

    #[test]
    fn tilted_spin_at_zero_oscillation() {
        let st = WaveState::new(1.0, 1.0).unwrap();
        let s = tilted_spin(&st, SpinSign::Up, 0.0, 0.0);
        let expected = (Multivector::e3() + Multivector::e2()) * (0.5 / SQRT_2);
        assert!(s.max_abs_diff(&expected) < 1e-15);
        let d = tilted_spin(&st, SpinSign::Down, 0.0, 0.0);
        assert!((s + d).max_abs() < 1e-15);
    }

    #[test]
    fn moment_and_zeeman() {
        let avg = average_spin(&WaveState::new(1.0, 1.0).unwrap(), SpinSign::Up);
        assert_eq!(magnetic_moment(1.0, &avg), avg);
        assert_eq!(magnetic_moment(0.0, &avg), Multivector::ZERO);
        let mu = magnetic_moment(2.0, &avg);
        assert!(mu.max_abs_diff(&((Multivector::e3() + Multivector::e2()) / SQRT_2)) < 1e-15);
        assert_eq!(zeeman_potential(&Multivector::e1(), &Multivector::e2()).unwrap(), 0.0);
        assert_eq!(zeeman_potential(&Multivector::e1(), &(Multivector::e1() * -3.0)).unwrap(), 3.0);
    }

    #[test]
    fn larmor_pair() {
        let (u, d) = larmor_frequency(1.0, 1.0, 1.0);
        assert!((u - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert_eq!(d, -u);
        let (u0, _) = larmor_frequency(1.0, 0.0, 1.0);
        assert_eq!(u0, 0.0);
        let (u2, _) = larmor_frequency(1.0, 1.0, 2.0);
        assert!((u2 - 2.0 * u).abs() < 1e-15);
    }

    #[test]
    fn induced_spin_examples() {
        let s = induced_spin(&Multivector::e3(), &Multivector::e3(), &Multivector::e1(), 1.0).unwrap();
        assert!(s.max_abs_diff(&-Multivector::e1()) < 1e-15);
        let z = induced_spin(&Multivector::e1(), &Multivector::e3(), &(Multivector::e3() * 2.0), 1.0).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let f = induced_spin(&-Multivector::e3(), &Multivector::e3(), &Multivector::e1(), 1.0).unwrap();
        assert!((f + s).max_abs() < 1e-15);
    }

    #[test]
    fn ramp_profile() {
        let r = FieldRamp::new(Multivector::e1() * 2.0, 0.5).unwrap();
        assert_eq!(r.field(0.25), Multivector::e1());
        assert_eq!(r.field(3.0), Multivector::e1() * 2.0);
        assert_eq!(r.rate(0.1), Multivector::e1() * 4.0);
        assert_eq!(r.rate(0.6), Multivector::ZERO);
        assert!(FieldRamp::new(Multivector::e1(), 0.0).is_err());
    }

    #[test]
    fn integrator_rejects_bad_input() {
        let f = ConstantField(Multivector::e3());
        let p = LlParams::default();
        assert!(integrate_modified_ll(&Multivector::e1(), &Multivector::e3(), &f, p, 0.0, 10).is_err());
        let bad = ConstantField(Multivector::vector(f64::NAN, 0.0, 0.0));
        assert_eq!(
            integrate_modified_ll(&Multivector::e1(), &Multivector::e3(), &bad, p, 0.1, 10),
            Err(Error::NonFinite("magnetic field"))
        );
    }

    #[test]
    fn csv_has_header_and_rows() {
        let f = ConstantField(Multivector::e3());
        let tr =
            integrate_modified_ll(&Multivector::e1(), &Multivector::e3(), &f, LlParams::default(), 0.1, 3).unwrap();
        let csv = tr.to_csv();
        assert!(csv.starts_with("t,Sx,Sy,Sz\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
