use std::f64::consts::{FRAC_PI_2, PI};

use ga_electron::electron_wave::WaveState;
use ga_electron::external_fields::{
    ab_superposition, absorb_photon, absorb_subsequent, box_superposition, emission_speed, lorentz_acceleration,
    newton_acceleration, shifted_frequency, shifted_plane_wave, shifted_wave_laplacian_factor,
    vector_schrodinger_residual, Envelope, PhotonPulse, PotentialEnvironment, SampleGrid,
};
use ga_electron::Multivector;
use num_complex::Complex64;
use proptest::prelude::*;

fn ramp_pulse(peak: f64) -> PhotonPulse {
    PhotonPulse::new(Envelope::LinearRamp { peak, ramp_time: 40.0 }, 3.0, 0.04, 0.0, 300.0).unwrap()
}

#[test]
fn photoelectric_speed() {
    assert!((emission_speed(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
    assert!(emission_speed(0.2, 0.5).is_err());
}

#[test]
fn weak_pulse_reports_incomplete_absorption() {
    let st = WaveState::at_rest(1.0).unwrap();
    assert!(absorb_photon(&st, &ramp_pulse(0.5), 0.0).is_err());
    let moving = WaveState::new(1.0, 0.5).unwrap();
    assert!(absorb_photon(&moving, &ramp_pulse(2.0), 0.0).is_err());
}

#[test]
fn absorption_bookkeeping_and_final_speed() {
    let st = WaveState::at_rest(1.0).unwrap();
    let abs = absorb_photon(&st, &ramp_pulse(2.0), 0.0).unwrap();
    for s in &abs.history {
        assert!((s.rho_el + s.s_el - 1.0).abs() < 1e-12);
    }
    assert!((abs.final_state.speed() - (4.0 * PI * 0.04f64).sqrt()).abs() < 1e-14);
    assert!(abs.to_csv().starts_with("t,rho_el,S_el\n"));
    // A second photon adds 2 pi nu to omega = v^2 / 2.
    let next = absorb_subsequent(&abs.final_state, 0.04).unwrap();
    let omega = 0.5 * next.speed().powi(2);
    assert!((omega - 2.0 * 2.0 * PI * 0.04).abs() < 1e-13);
}

#[test]
fn custom_envelope_is_used() {
    fn step(t: f64) -> f64 {
        if t < 10.0 {
            0.0
        } else {
            5.0
        }
    }
    let pulse = PhotonPulse::new(Envelope::Custom(step), 2.0, 0.05, 0.0, 100.0).unwrap();
    let abs = absorb_photon(&WaveState::at_rest(1.0).unwrap(), &pulse, 0.0).unwrap();
    assert!(abs.t_saturation >= 10.0 && abs.t_saturation < 10.0 + 1.0 / 0.05 / 1024.0 + 1e-12);
}

#[test]
fn ab_intensity_vanishes_at_half_pi() {
    let st = WaveState::new(1.0, 1.0).unwrap();
    for a in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        assert!(ab_superposition(&st, a, 0.0, 1.0, 3.0, 0.0).unwrap().norm_sqr() < 1e-12);
    }
    assert!(ab_superposition(&st, 1.0, 0.0, 1.0, 0.5, 0.0).is_err());
    let env = PotentialEnvironment::new(0.0, Multivector::e3() * FRAC_PI_2, 0.0, 1.0).unwrap();
    assert!(env.ab_amplitude(&st, 2.0, 0.0).unwrap().norm_sqr() < 1e-12);
}

#[test]
fn vector_residual_converges_at_second_order() {
    let k0 = [0.5, 0.9, -0.3];
    let a = [-0.2, 0.1, 0.4];
    let am = Multivector::from_vector(a);
    let res = |h: f64| {
        let g = SampleGrid::new([7, 7, 7], h, [0.1, 0.2, 0.3]).unwrap();
        let f: Vec<Vec<Complex64>> =
            [-h, 0.0, h].iter().map(|dt| g.sample(|x| shifted_plane_wave(1.0, k0, a, x, 1.0 + dt))).collect();
        vector_schrodinger_residual([&f[0], &f[1], &f[2]], &g, &am, 0.0, h).unwrap()
    };
    let (r1, r2, r3) = (res(0.08), res(0.04), res(0.02));
    assert!((r1 / r2).log2() >= 1.9 && (r2 / r3).log2() >= 1.9, "{r1} {r2} {r3}");
    let q = [k0[0] - a[0], k0[1] - a[1], k0[2] - a[2]];
    assert!((shifted_wave_laplacian_factor(k0, a) + q.iter().map(|x| x * x).sum::<f64>()).abs() < 1e-15);
}

#[test]
fn forces() {
    let acc = newton_acceleration(2.0, &Multivector::vector(0.0, 0.0, 1.0)).unwrap();
    assert!(acc.is_grade(1));
    // Electric field only, particle at rest: acceleration along E.
    let e = Multivector::vector(0.3, -0.2, 0.1);
    let f = lorentz_acceleration(&e, &Multivector::ZERO, &Multivector::ZERO).unwrap();
    assert!(f.max_abs_diff(&e) < 1e-15);
    // v x B term: v = e1, B = e3 gives e1 x e3 = -e2.
    let f = lorentz_acceleration(&Multivector::ZERO, &Multivector::e3(), &Multivector::e1()).unwrap();
    assert!(f.max_abs_diff(&(Multivector::e2() * -1.0)) < 1e-15);
}

proptest! {
    #[test]
    fn ab_modulation_is_cos_squared(a in -6.0..6.0f64, dz in 0.1..3.0f64, z in 0.0..5.0f64, t in 0.0..5.0f64, v in 0.1..2.0f64) {
        let st = WaveState::new(1.7, v).unwrap();
        let i = ab_superposition(&st, a, 0.0, dz, dz + z, t).unwrap().norm_sqr() / 1.7;
        prop_assert!((i - (dz * a).cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn box_standing_wave_is_real(n in 1u32..6, z in 0.0..1.0f64, t in 0.0..10.0f64) {
        let b = box_superposition(1.0, 1.0, n, z, t).unwrap();
        prop_assert!(b.standing.im.abs() < 1e-14);
    }

    #[test]
    fn frequency_shifts_compose(omega in -5.0..5.0f64, p1 in -3.0..3.0f64, p2 in -3.0..3.0f64) {
        let two_step = shifted_frequency(shifted_frequency(omega, p1), p2);
        prop_assert!((two_step - shifted_frequency(omega, p1 + p2)).abs() < 1e-14);
    }
}
