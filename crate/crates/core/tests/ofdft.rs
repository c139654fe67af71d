use std::f64::consts::PI;

use ga_electron::ofdft::coupled::{apply_coupled_operator, residual_norms};
use ga_electron::ofdft::{
    coupled_residual, kinetic_functionals, lps_solve, manufacture_potentials, scf_solve, Grid, GridField, Interaction,
    PotentialSet, ProblemFile, ScfConfig,
};
use proptest::prelude::*;

fn no_interaction() -> ScfConfig {
    ScfConfig { interaction: Interaction::None, ..ScfConfig::default() }
}

#[test]
fn box_ground_state_rises_toward_limit() {
    let exact = PI * PI / 2.0;
    let mut last = f64::NEG_INFINITY;
    for n in [63usize, 127, 255, 511] {
        let g = Grid::dirichlet_box(&[n], &[1.0]).unwrap();
        let zero = vec![0.0; n];
        let mu = lps_solve(&g, &zero, &zero, 1.0).unwrap().mu;
        // Discrete symbol of the three-point stencil for the lowest sine mode.
        let h = 1.0 / (n as f64 + 1.0);
        let discrete = (1.0 - (PI * h).cos()) / (h * h);
        assert!((mu - discrete).abs() < 1e-8 * discrete, "n = {n}: {mu} vs {discrete}");
        assert!(mu > last && mu < exact);
        last = mu;
    }
}

#[test]
fn zero_bivector_scf_matches_lps() {
    let n = 96;
    let g = Grid::dirichlet_box(&[n], &[4.0]).unwrap();
    let v_ext: Vec<f64> = (0..n).map(|i| 0.5 * (g.coords(i)[0] - 2.0).powi(2)).collect();
    let res = scf_solve(&g, &v_ext, &vec![[0.0; 3]; n], 0.5, &ScfConfig::default()).unwrap();
    assert!(res.converged, "{:?}", res.residual_history.last());
    let lps = lps_solve(&g, &v_ext, &res.v_eff0, 0.5).unwrap();
    assert!((res.mu - lps.mu).abs() < 1e-8);
    let drho = res.fields.rho_half.iter().zip(&lps.rho_half).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(drho < 1e-6);
    assert!(res.fields.s_half.iter().all(|s| *s == 0.0));
    assert!(res.normalization_drift.iter().all(|d| *d < 1e-10));
    assert!(res.residual_history.len() == res.iterations);
}

#[test]
fn bivector_coupling_reports_no_convergence() {
    let g = Grid::periodic_box(&[8, 8, 8], &[2.0 * PI; 3]).unwrap();
    let cfg = ScfConfig { max_iter: 15, ..no_interaction() };
    let res = scf_solve(&g, &vec![0.0; g.len()], &vec![[0.0, 0.0, 0.05]; g.len()], 1.0, &cfg).unwrap();
    assert!(!res.converged);
    assert_eq!(res.iterations, 15);
    assert!(res.normalization_drift.iter().all(|d| *d < 1e-10));
}

#[test]
fn one_bivector_step_matches_closed_form() {
    // Uniform density, Pi = eps e3: one shifted solve of [[a, -eps], [eps, a]]
    // followed by mixing and renormalization.
    let g = Grid::periodic_box(&[8, 8, 8], &[2.0; 3]).unwrap();
    let eps = 0.2;
    let cfg = ScfConfig { max_iter: 2, mixing: 0.4, ..no_interaction() };
    let res = scf_solve(&g, &vec![0.0; g.len()], &vec![[0.0, 0.0, eps]; g.len()], 3.0, &cfg).unwrap();
    let (a, beta) = (cfg.shift_margin, cfg.mixing);
    let q = (a * a + eps * eps).sqrt();
    let m = [(1.0 - beta) + beta * a / q, -beta * eps / q];
    let mn = (m[0] * m[0] + m[1] * m[1]).sqrt();
    let c0 = (3.0 / 8.0f64).sqrt();
    for (r, l) in res.fields.rho_half.iter().zip(res.fields.lambda()) {
        assert!((r - c0 * m[0] / mn).abs() < 1e-9);
        assert!((l[2] - c0 * m[1] / mn).abs() < 1e-9);
        assert!(l[0].abs() < 1e-12 && l[1].abs() < 1e-12);
    }
}

#[test]
fn perpendicular_bivector_leaves_scalar_row() {
    let g = Grid::periodic_box(&[8], &[1.0]).unwrap();
    let fields = GridField::from_lambda(vec![0.7; 8], &[[0.3, 0.0, 0.0]; 8]);
    let mut out = vec![0.0; 32];
    apply_coupled_operator(&g, &[0.0; 8], &[[0.0, 0.4, 0.0]; 8], &fields.pack(), &mut out);
    for i in 0..8 {
        assert_eq!(out[4 * i], 0.0);
    }
}

#[test]
fn manufactured_fields_have_zero_residual() {
    let g = Grid::periodic_box(&[10, 10, 10], &[2.0 * PI; 3]).unwrap();
    let rho_half: Vec<f64> = (0..g.len()).map(|i| 1.0 + 0.2 * g.coords(i)[2].cos()).collect();
    let lambda: Vec<[f64; 3]> = (0..g.len())
        .map(|i| {
            let x = g.coords(i);
            [0.1 * x[0].sin(), 0.05, 0.2 * (x[1] + x[2]).cos()]
        })
        .collect();
    let fields = GridField::from_lambda(rho_half, &lambda);
    let pots = manufacture_potentials(&fields, &g, 0.7).unwrap();
    let (s, v) = coupled_residual(&fields, &pots, &g).unwrap();
    let (rs, rv) = residual_norms(&s, &v);
    assert!(rs.max(rv) < 1e-10);
}

#[test]
fn problem_file_round_trip() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/box.toml")).unwrap();
    let problem = ProblemFile::from_toml_str(&text).unwrap().build().unwrap();
    assert_eq!(problem.grid.len(), 512);
    assert_eq!(problem.scf.interaction, Interaction::None);
    assert!(ProblemFile::from_toml_str("electrons = 1.0\n[grid]\ndims = [4]\nbogus = 1\n").is_err());
}

#[test]
fn thomas_fermi_and_weizsaecker_on_uniform_density() {
    let g = Grid::periodic_box(&[8, 8, 8], &[2.0; 3]).unwrap();
    let (tf, tw) = kinetic_functionals(&vec![0.5; g.len()], &g).unwrap();
    let c_tf = 0.3 * (3.0 * PI * PI).powf(2.0 / 3.0);
    assert!((tf - c_tf * 0.5f64.powf(5.0 / 3.0) * 8.0).abs() < 1e-12);
    assert!(tw.abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constant_shift_moves_only_mu(c in -3.0..3.0f64) {
        let n = 64;
        let g = Grid::dirichlet_box(&[n], &[2.0]).unwrap();
        let v: Vec<f64> = (0..n).map(|i| (3.0 * g.coords(i)[0]).sin()).collect();
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let pi = vec![[0.0; 3]; n];
        let a = scf_solve(&g, &v, &pi, 1.0, &no_interaction()).unwrap();
        let b = scf_solve(&g, &shifted, &pi, 1.0, &no_interaction()).unwrap();
        prop_assert!(a.converged && b.converged);
        prop_assert!((b.mu - a.mu - c).abs() < 1e-10);
        let d = a.fields.rho_half.iter().zip(&b.fields.rho_half).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(d < 1e-10, "{}", d);
    }

    #[test]
    fn residual_is_linear_in_fields(s in 0.1..4.0f64, seed in 0u32..1000) {
        let g = Grid::periodic_box(&[8, 8], &[1.0, 1.0]).unwrap();
        let phase = f64::from(seed) * 0.01;
        let rho_half: Vec<f64> = (0..g.len()).map(|i| 1.0 + 0.3 * (2.0 * PI * g.coords(i)[0] + phase).sin()).collect();
        let lambda: Vec<[f64; 3]> = (0..g.len()).map(|i| [0.1, -0.2 * g.coords(i)[1], 0.05]).collect();
        let fields = GridField::from_lambda(rho_half, &lambda);
        let pots = PotentialSet::new(
            (0..g.len()).map(|i| g.coords(i)[0]).collect(),
            vec![0.1; g.len()],
            vec![[0.2, 0.0, -0.1]; g.len()],
            0.3,
        ).unwrap();
        let (s1, v1) = coupled_residual(&fields, &pots, &g).unwrap();
        let (s2, v2) = coupled_residual(&fields.scaled(s), &pots, &g).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            prop_assert!((s * a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
        for (a, b) in v1.iter().flatten().zip(v2.iter().flatten()) {
            prop_assert!((s * a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }
}
