//! Hydrogen eigenfunctions, their density/field split, the spin multivector
//! solutions, and the two-centre H2 ground state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ga3::Multivector;
use crate::numeric::{gauss_legendre, pairwise_sum};
use crate::spin_dynamics::SpinSign;

pub const MAX_N: u32 = 10;

const FRAME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
    spin: Option<SpinSign>,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        let valid = (1..=MAX_N).contains(&n) && l < n && m.unsigned_abs() <= l;
        if !valid {
            return Err(Error::InvalidQuantumNumbers { n, l, m });
        }
        Ok(Self { n, l, m, spin: None })
    }

    pub fn with_spin(mut self, spin: SpinSign) -> Self {
        self.spin = Some(spin);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn spin(&self) -> Option<SpinSign> {
        self.spin
    }

    /// `-1 / (2 n^2)`.
    pub fn energy(&self) -> f64 {
        -0.5 / f64::from(self.n * self.n)
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Generalized Laguerre polynomial `L_k^alpha(x)` by upward recurrence.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function `P_l^m(x)`, `m >= 0`, with the Condon–Shortley phase.
pub fn associated_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -(2.0 * f64::from(k) - 1.0) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2.0 * f64::from(m) + 1.0) * pmm;
    for ll in m + 2..=l {
        let llf = f64::from(ll);
        let mf = f64::from(m);
        let next = ((2.0 * llf - 1.0) * x * pm1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pm1;
        pm1 = next;
    }
    pm1
}

/// Normalized radial function `R_nl(r)`.
pub fn radial_function(n: u32, l: u32, r: f64) -> f64 {
    let nf = f64::from(n);
    let rho = 2.0 * r / nf;
    let norm = ((2.0 / nf).powi(3) * factorial(n - l - 1) / (2.0 * nf * factorial(n + l))).sqrt();
    norm * (-r / nf).exp() * rho.powi(l as i32) * laguerre(n - l - 1, f64::from(2 * l + 1), rho)
}

/// `U_nlm(r, theta)` such that `psi_nlm = U_nlm exp(i m phi)`.
pub fn u_nlm(qn: &QuantumNumbers, r: f64, theta: f64) -> f64 {
    radial_function(qn.n, qn.l, r) * angular(qn, theta)
}

/// Normalized `psi_nlm(r, theta, phi)`.
pub fn hydrogen_wavefunction(qn: &QuantumNumbers, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter { name: "r", reason: format!("must be non-negative, got {r}") });
    }
    Ok(Complex64::from_polar(1.0, f64::from(qn.m) * phi) * u_nlm(qn, r, theta))
}

/// Spherical coordinates `(r, theta, phi)` of a Cartesian point.
pub fn to_spherical(p: [f64; 3]) -> (f64, f64, f64) {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let theta = if r == 0.0 { 0.0 } else { (p[2] / r).clamp(-1.0, 1.0).acos() };
    (r, theta, p[1].atan2(p[0]))
}

/// `psi_nlm` at a Cartesian point.
pub fn hydrogen_wavefunction_cartesian(qn: &QuantumNumbers, p: [f64; 3]) -> Complex64 {
    let (r, theta, phi) = to_spherical(p);
    Complex64::from_polar(1.0, f64::from(qn.m) * phi) * u_nlm(qn, r, theta)
}

/// `(rho^(1/2), S^(1/2)) = (U cos m phi, U sin m phi)`.
pub fn decompose_density_field(qn: &QuantumNumbers, r: f64, theta: f64, phi: f64) -> (f64, f64) {
    let u = u_nlm(qn, r, theta);
    let (s, c) = (f64::from(qn.m) * phi).sin_cos();
    (u * c, u * s)
}

/// Local orthonormal frame `(e_r, e_theta, e_phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalFrame {
    pub e_r: Multivector,
    pub e_theta: Multivector,
    pub e_phi: Multivector,
}

pub fn spherical_frame(r: f64, theta: f64, phi: f64) -> Result<SphericalFrame> {
    let (st, ct) = theta.sin_cos();
    if !(r > FRAME_TOL) || st.abs() < FRAME_TOL {
        return Err(Error::FrameSingularity { r, theta });
    }
    let (sp, cp) = phi.sin_cos();
    Ok(SphericalFrame {
        e_r: Multivector::vector(st * cp, st * sp, ct),
        e_theta: Multivector::vector(ct * cp, ct * sp, -st),
        e_phi: Multivector::vector(-sp, cp, 0.0),
    })
}

/// `(U / sqrt 2) { cos m phi + i [ (e_phi -/+ e_theta) sin m phi -/+ e_r cos m phi ] }`
/// in a given frame.
pub fn spin_multivector_in_frame(u: f64, m: i32, phi: f64, sign: SpinSign, frame: &SphericalFrame) -> Multivector {
    let (s, c) = (f64::from(m) * phi).sin_cos();
    let sg = sign.sign();
    let vec = (frame.e_phi - frame.e_theta * sg) * s - frame.e_r * (sg * c);
    (Multivector::scalar(c) + Multivector::i() * vec) * (u / std::f64::consts::SQRT_2)
}

/// Spin-augmented hydrogen solution as a multivector.
pub fn spin_multivector_solution(qn: &QuantumNumbers, r: f64, theta: f64, phi: f64) -> Result<Multivector> {
    let sign =
        qn.spin.ok_or(Error::InvalidParameter { name: "spin", reason: "quantum numbers carry no spin sign".into() })?;
    let frame = spherical_frame(r, theta, phi)?;
    Ok(spin_multivector_in_frame(u_nlm(qn, r, theta), qn.m, phi, sign, &frame))
}

/// Overlap `<a|b>` by product quadrature: panelled Gauss–Legendre in `r`,
/// Gauss–Legendre in `cos theta`, and a uniform rule in `phi`.
pub fn overlap(a: &QuantumNumbers, b: &QuantumNumbers) -> Complex64 {
    let r_max = 12.0 * f64::from(a.n.max(b.n)).powi(2) + 40.0;
    let panels = 40;
    let (rx, rw) = gauss_legendre(24);
    let (cx, cw) = gauss_legendre(32);
    let nphi = 32;
    let dphi = 2.0 * PI / nphi as f64;

    let mut radial = Vec::with_capacity(panels * rx.len());
    let width = r_max / panels as f64;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (x, w) in rx.iter().zip(&rw) {
            let r = mid + 0.5 * width * x;
            radial.push(0.5 * width * w * r * r * radial_function(a.n, a.l, r) * radial_function(b.n, b.l, r));
        }
    }
    let radial = pairwise_sum(&radial);

    let mut re = Vec::new();
    let mut im = Vec::new();
    for (x, w) in cx.iter().zip(&cw) {
        let theta = x.acos();
        let ya = angular(a, theta);
        let yb = angular(b, theta);
        for k in 0..nphi {
            let phi = k as f64 * dphi;
            let z = Complex64::from_polar(w * dphi * ya * yb, f64::from(b.m - a.m) * phi);
            re.push(z.re);
            im.push(z.im);
        }
    }
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * radial
}

/// Real theta factor of the spherical harmonic; `m < 0` picks up `(-1)^m`.
fn angular(qn: &QuantumNumbers, theta: f64) -> f64 {
    let am = qn.m.unsigned_abs();
    let l = qn.l;
    let sign = if qn.m < 0 && am % 2 == 1 { -1.0 } else { 1.0 };
    sign * ((2.0 * f64::from(l) + 1.0) / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt()
        * associated_legendre(l, am, theta.cos())
}

/// `|(H - E) psi|` at a Cartesian point with a 7-point Laplacian of spacing `h`.
pub fn fd_energy_residual(qn: &QuantumNumbers, p: [f64; 3], h: f64) -> f64 {
    let f = |q: [f64; 3]| hydrogen_wavefunction_cartesian(qn, q);
    let centre = f(p);
    let mut lap = centre * -6.0;
    for ax in 0..3 {
        let mut up = p;
        let mut down = p;
        up[ax] += h;
        down[ax] -= h;
        lap += f(up) + f(down);
    }
    lap /= h * h;
    let (r, _, _) = to_spherical(p);
    let h_psi = lap * -0.5 - centre / r;
    (h_psi - centre * qn.energy()).norm()
}

/// Ground-state orbital `exp(-r) / sqrt(pi)`.
pub fn psi_100(r: f64) -> f64 {
    (-r).exp() / PI.sqrt()
}

/// Nuclear positions of a two-centre molecule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoCenterGeometry {
    r1: Multivector,
    r2: Multivector,
}

impl TwoCenterGeometry {
    pub fn new(r1: Multivector, r2: Multivector) -> Result<Self> {
        if !r1.is_grade(1) || !r2.is_grade(1) {
            return Err(Error::GradeMismatch { op: "two-centre geometry", expected: 1 });
        }
        if (r1 - r2).norm() == 0.0 {
            return Err(Error::InvalidParameter { name: "r2", reason: "nuclei coincide".into() });
        }
        Ok(Self { r1, r2 })
    }

    /// Nuclei at `-/+ d/2 e3`.
    pub fn along_e3(d: f64) -> Result<Self> {
        Self::new(Multivector::e3() * (-0.5 * d), Multivector::e3() * (0.5 * d))
    }

    pub fn swapped(&self) -> Self {
        Self { r1: self.r2, r2: self.r1 }
    }

    pub fn r1(&self) -> Multivector {
        self.r1
    }

    pub fn r2(&self) -> Multivector {
        self.r2
    }
}

/// `psi_100(r - R1) psi_100(r - R2)`.
pub fn h2_ground_density_sqrt(geom: &TwoCenterGeometry, r: &Multivector) -> f64 {
    psi_100((*r - geom.r1).norm()) * psi_100((*r - geom.r2).norm())
}

fn radial_unit(r: &Multivector, centre: &Multivector) -> Result<Multivector> {
    let d = *r - *centre;
    let n = d.norm();
    if n < FRAME_TOL {
        return Err(Error::InvalidParameter { name: "r", reason: "point coincides with a nucleus".into() });
    }
    Ok(d / n)
}

/// `(1 + i e1)(1 - i e2) - (1 - i e1)(1 + i e2)` for two unit vectors.
pub fn h2_spin_bracket(e_r1: &Multivector, e_r2: &Multivector) -> Multivector {
    let one = Multivector::one();
    let i = Multivector::i();
    (one + i * *e_r1) * (one - i * *e_r2) - (one - i * *e_r1) * (one + i * *e_r2)
}

/// `1/2 psi_100 psi_100` times the spin bracket built from the two radial unit vectors.
pub fn h2_spin_wavefunction(geom: &TwoCenterGeometry, r: &Multivector) -> Result<Multivector> {
    let e1 = radial_unit(r, &geom.r1)?;
    let e2 = radial_unit(r, &geom.r2)?;
    Ok(h2_spin_bracket(&e1, &e2) * (0.5 * h2_ground_density_sqrt(geom, r)))
}

/// Position plus spin coordinate of one electron.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Electron {
    pub position: [f64; 3],
    pub spin: SpinSign,
}

/// Spatial orbital times a spin function `delta(sigma, spin)`.
pub fn spin_orbital<F>(spatial: F, spin: SpinSign) -> impl Fn(&Electron) -> f64
where
    F: Fn([f64; 3]) -> f64,
{
    move |x| if x.spin == spin { spatial(x.position) } else { 0.0 }
}

/// `orb1(x1) orb2(x2) - orb1(x2) orb2(x1)`.
pub fn slater_determinant_2<F, G>(orb1: F, orb2: G, x1: &Electron, x2: &Electron) -> f64
where
    F: Fn(&Electron) -> f64,
    G: Fn(&Electron) -> f64,
{
    orb1(x1) * orb2(x2) - orb1(x2) * orb2(x1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_quantum_numbers() {
        assert!(QuantumNumbers::new(0, 0, 0).is_err());
        assert!(QuantumNumbers::new(2, 2, 0).is_err());
        assert!(QuantumNumbers::new(2, 1, 2).is_err());
        assert!(QuantumNumbers::new(11, 0, 0).is_err());
        assert!(QuantumNumbers::new(3, 2, -2).is_ok());
    }

    #[test]
    fn ground_state_closed_form() {
        let qn = QuantumNumbers::new(1, 0, 0).unwrap();
        for &r in &[0.0, 0.5, 2.0] {
            let psi = hydrogen_wavefunction(&qn, r, 0.3, 1.0).unwrap();
            assert!((psi.re - psi_100(r)).abs() < 1e-15);
            assert_eq!(psi.im, 0.0);
        }
    }

    #[test]
    fn two_p_has_angular_node() {
        let qn = QuantumNumbers::new(2, 1, 0).unwrap();
        assert!(u_nlm(&qn, 1.3, PI / 2.0).abs() < 1e-16);
        assert!(u_nlm(&qn, 1.3, 0.4) > 0.0);
    }

    #[test]
    fn legendre_values() {
        assert!((associated_legendre(1, 1, 0.5) + (0.75f64).sqrt()).abs() < 1e-15);
        assert!((associated_legendre(2, 0, 0.5) - (-0.125)).abs() < 1e-15);
        assert!((associated_legendre(2, 2, 0.5) - 3.0 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.0, 2.0), 1.0);
        assert!((laguerre(1, 3.0, 2.0) - 2.0).abs() < 1e-15);
        // L_2^1(x) = (x^2 - 6x + 6) / 2
        assert!((laguerre(2, 1.0, 1.5) - (2.25 - 9.0 + 6.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn decomposition_examples() {
        let s0 = QuantumNumbers::new(2, 1, 0).unwrap();
        assert_eq!(decompose_density_field(&s0, 1.0, 0.4, 0.9).1, 0.0);
        let p1 = QuantumNumbers::new(2, 1, 1).unwrap();
        let (rh, sh) = decompose_density_field(&p1, 1.0, 0.4, PI / 2.0);
        assert!(rh.abs() < 1e-16);
        assert!((sh - u_nlm(&p1, 1.0, 0.4)).abs() < 1e-16);
    }

    #[test]
    fn frame_singularities() {
        assert!(matches!(spherical_frame(0.0, 1.0, 0.0), Err(Error::FrameSingularity { .. })));
        assert!(matches!(spherical_frame(1.0, 0.0, 0.0), Err(Error::FrameSingularity { .. })));
        assert!(matches!(spherical_frame(1.0, PI, 0.0), Err(Error::FrameSingularity { .. })));
    }

    #[test]
    fn frame_is_right_handed() {
        let f = spherical_frame(1.0, 0.7, 2.1).unwrap();
        let wedge = f.e_theta.wedge(&f.e_phi);
        assert!(wedge.max_abs_diff(&(Multivector::i() * f.e_r)) < 1e-15);
    }

    #[test]
    fn spin_solution_m0() {
        let qn = QuantumNumbers::new(2, 0, 0).unwrap().with_spin(SpinSign::Up);
        let (r, th, ph) = (1.2, 0.8, 0.3);
        let psi = spin_multivector_solution(&qn, r, th, ph).unwrap();
        let f = spherical_frame(r, th, ph).unwrap();
        let u = u_nlm(&qn, r, th);
        let expected = (Multivector::one() - Multivector::i() * f.e_r) * (u / std::f64::consts::SQRT_2);
        assert!(psi.max_abs_diff(&expected) < 1e-15);
        assert!(spin_multivector_solution(&QuantumNumbers::new(1, 0, 0).unwrap(), r, th, ph).is_err());
    }

    #[test]
    fn h2_midpoint() {
        let g = TwoCenterGeometry::along_e3(1.4).unwrap();
        let v = h2_ground_density_sqrt(&g, &Multivector::ZERO);
        assert!((v - psi_100(0.7).powi(2)).abs() < 1e-16);
        assert!(h2_spin_wavefunction(&g, &g.r1()).is_err());
        assert!(TwoCenterGeometry::new(Multivector::e1(), Multivector::e1()).is_err());
    }

    #[test]
    fn slater_vanishes_for_equal_coordinates() {
        let a = spin_orbital(|p: [f64; 3]| (-p[0].abs()).exp(), SpinSign::Up);
        let b = spin_orbital(|p: [f64; 3]| p[0] * (-p[0].abs()).exp(), SpinSign::Up);
        let x = Electron { position: [0.3, 0.0, 0.0], spin: SpinSign::Up };
        assert_eq!(slater_determinant_2(&a, &b, &x, &x), 0.0);
    }
}
