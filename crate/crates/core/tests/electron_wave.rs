use std::f64::consts::PI;

use ga_electron::electron_wave::{
    cohesive_potential, current_density, density, field_intensity, group_velocity, hartree_potential,
    schrodinger_wavefunction, total_energy_density, wavefunction, wigner_seitz_radius, FieldAmplitudes, WaveState,
};
use ga_electron::Multivector;
use proptest::prelude::*;

#[test]
fn wave_parameters_follow_from_speed() {
    let st = WaveState::new(1.0, 2.0).unwrap();
    assert!((st.wavenumber() - 2.0).abs() < 1e-15);
    assert!((st.angular_frequency() - 2.0).abs() < 1e-15);
    assert!((st.wavelength() - PI).abs() < 1e-15);
    assert!((st.frequency() - 1.0 / PI).abs() < 1e-15);
    assert!((group_velocity(&st).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn electron_at_rest_carries_no_field() {
    let st = WaveState::at_rest(1.3).unwrap();
    assert_eq!(st.s0(), 0.0);
    assert_eq!(field_intensity(&st, 0.4, 2.0), 0.0);
    let slow = WaveState::new(1.0, 1e-8).unwrap();
    assert!((density(&slow, 0.0, 0.0) - 1.0).abs() < 1e-12);
}

#[test]
fn cohesive_and_hartree_at_rs_two() {
    assert!((cohesive_potential(2.0).unwrap() + 0.3).abs() < 1e-15);
    assert!((hartree_potential(2.0).unwrap() - 0.3).abs() < 1e-15);
    let rs = wigner_seitz_radius(3.0 / (4.0 * PI * 8.0));
    assert!((rs - 2.0).abs() < 1e-12);
    assert!(cohesive_potential(0.0).is_err());
}

#[test]
fn field_amplitudes_multiply_to_s0() {
    let st = WaveState::new(1.0, 1.5).unwrap();
    let f = FieldAmplitudes::from_state(&st);
    assert!((f.product() - st.s0()).abs() < 1e-15);
}

#[test]
fn invalid_states_are_rejected() {
    assert!(WaveState::new(-1.0, 1.0).is_err());
    assert!(WaveState::new(1.0, f64::NAN).is_err());
}

proptest! {
    #[test]
    fn density_and_field_share_rho0(rho0 in 0.01..5.0f64, v in 0.0..3.0f64, z in -20.0..20.0f64, t in 0.0..20.0f64) {
        let st = WaveState::new(rho0, v).unwrap();
        prop_assert!((density(&st, z, t) + field_intensity(&st, z, t) - rho0).abs() < 1e-12);
        let psi = wavefunction(&st, z, t);
        prop_assert!((psi.reverse() * psi).max_abs_diff(&Multivector::scalar(rho0)) < 1e-12);
        prop_assert!((psi * psi.reverse()).max_abs_diff(&Multivector::scalar(rho0)) < 1e-12);
    }

    #[test]
    fn energy_density_is_uniform(v in 0.0..3.0f64, samples in prop::collection::vec((-10.0..10.0f64, 0.0..10.0f64), 2..50)) {
        let st = WaveState::new(1.0, v).unwrap();
        let e: Vec<f64> = samples.iter().map(|&(z, t)| total_energy_density(&st, z, t)).collect();
        let spread = e.iter().cloned().fold(f64::MIN, f64::max) - e.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert!(spread < 1e-12);
        prop_assert!((e[0] - 0.5 * v * v).abs() < 1e-12);
    }

    #[test]
    fn continuity_holds_literally(v in 0.1..3.0f64, z in -5.0..5.0f64, t in 0.0..5.0f64) {
        let st = WaveState::new(1.0, v).unwrap();
        // |psi_S|^2 is constant, so d rho / dt = 0; J is uniform, so div J = 0.
        let h = 1e-3;
        let rho = |t: f64| schrodinger_wavefunction(&st, z, t).norm_sqr();
        prop_assert!(((rho(t + h) - rho(t - h)) / (2.0 * h)).abs() < 1e-10);
        let j = |z: f64| current_density(&st, z, t).vector_part()[2];
        prop_assert!(((j(z + h) - j(z - h)) / (2.0 * h)).abs() < 1e-10);
        prop_assert!((j(z) - v).abs() < 1e-14);
    }

    #[test]
    fn de_broglie_planck_identity(v in 0.01..5.0f64) {
        let st = WaveState::new(1.0, v).unwrap();
        prop_assert!((st.wavelength() * st.frequency() - v / 2.0).abs() < 1e-14 * v.max(1.0));
    }

    #[test]
    fn tilt_does_not_touch_density(tilt in 0.0..PI, z in -5.0..5.0f64) {
        let a = WaveState::new(1.0, 1.2).unwrap();
        let b = a.with_tilt(tilt);
        prop_assert_eq!(density(&a, z, 0.3), density(&b, z, 0.3));
        prop_assert_eq!(total_energy_density(&a, z, 0.3), total_energy_density(&b, z, 0.3));
    }
}
