use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use ga_electron_ffi::*;

const BOX: &str = "electrons = 1.0\n[grid]\ndims = [128]\nlength = [1.0]\nboundary = \"dirichlet\"\n\
                   [scf]\ninteraction = \"none\"\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(gae_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn pauli_products() {
    let e1 = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let e2 = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let mut out = [0.0; 8];
    assert_eq!(unsafe { gae_mv_product(e1.as_ptr(), e2.as_ptr(), out.as_mut_ptr()) }, GaeStatus::Ok);
    assert_eq!(out, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    assert_eq!(unsafe { gae_mv_reverse(out.as_ptr(), out.as_mut_ptr()) }, GaeStatus::Ok);
    assert_eq!(out[4], -1.0);
}

#[test]
fn quarter_turn_in_e12() {
    let plane = [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let e1 = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let (mut r, mut v) = ([0.0; 8], [0.0; 8]);
    unsafe {
        assert_eq!(gae_rotor_exp(plane.as_ptr(), std::f64::consts::FRAC_PI_2, r.as_mut_ptr()), GaeStatus::Ok);
        assert_eq!(gae_rotate_vector(r.as_ptr(), e1.as_ptr(), v.as_mut_ptr()), GaeStatus::Ok);
    }
    assert!((v[2].abs() - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15);
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut out = [0.0; 8];
    let a = [1.0; 8];
    unsafe {
        assert_eq!(gae_mv_grade(a.as_ptr(), 4, out.as_mut_ptr()), GaeStatus::GradeMismatch);
        assert!(last_error().contains('4'));
        assert_eq!(gae_mv_product(ptr::null(), a.as_ptr(), out.as_mut_ptr()), GaeStatus::NullPointer);
        let twice = [0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0];
        assert_eq!(gae_rotor_exp(twice.as_ptr(), 1.0, out.as_mut_ptr()), GaeStatus::InvalidArgument);
        let mut p = ptr::null_mut();
        let bad = CString::new("electrons = 1.0\n").unwrap();
        assert_eq!(gae_problem_from_toml(bad.as_ptr(), &mut p), GaeStatus::ProblemFile);
        assert!(p.is_null());
        let missing = CString::new("/definitely/not/here.toml").unwrap();
        assert_eq!(gae_problem_load(missing.as_ptr(), &mut p), GaeStatus::Io);
        assert_eq!(gae_result_len(ptr::null()), 0);
        assert!(gae_result_mu(ptr::null()).is_nan());
    }
}

#[test]
fn solve_box_through_handles() {
    let text = CString::new(BOX).unwrap();
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(gae_problem_from_toml(text.as_ptr(), &mut p), GaeStatus::Ok);
        assert_eq!(gae_problem_len(p), 128);
        let mut r = ptr::null_mut();
        assert_eq!(gae_problem_solve(p, &mut r), GaeStatus::Ok);
        gae_problem_free(p);

        assert!(gae_result_converged(r));
        assert!(gae_result_iterations(r) >= 1);
        let h = 1.0 / 129.0;
        let discrete = (1.0 - (std::f64::consts::PI * h).cos()) / (h * h);
        assert!((gae_result_mu(r) - discrete).abs() < 1e-7);

        let n = gae_result_len(r);
        let (mut rho, mut s, mut e) = (vec![0.0; n], vec![0.0; n], vec![0.0; 3 * n]);
        assert_eq!(
            gae_result_copy_fields(r, rho.as_mut_ptr(), s.as_mut_ptr(), e.as_mut_ptr(), n - 1),
            GaeStatus::BufferTooSmall
        );
        assert_eq!(gae_result_copy_fields(r, rho.as_mut_ptr(), s.as_mut_ptr(), e.as_mut_ptr(), n), GaeStatus::Ok);
        let norm: f64 = rho.iter().map(|x| x * x * h).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(rho.iter().all(|x| *x > 0.0) && s.iter().all(|x| *x == 0.0));

        let json = gae_result_to_json(r);
        assert!(!json.is_null());
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"converged\": true"));
        gae_string_free(json);
        gae_result_free(r);
    }
}

#[test]
fn load_from_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("box.toml");
    std::fs::write(&path, BOX).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(gae_problem_load(c.as_ptr(), &mut p), GaeStatus::Ok);
        assert_eq!(gae_problem_len(p), 128);
        gae_problem_free(p);
    }
}

#[test]
fn header_declares_api_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ga_electron.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["gae_mv_product", "gae_problem_solve", "gae_result_copy_fields", "GAE_STATUS_NOT_CONVERGED"] {
        assert!(text.contains(name), "{name} missing");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ return gae_last_error() != 0; }}\n"))
        .unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).output() {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
}
