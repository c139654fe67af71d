//! Dense arithmetic in the geometric algebra of Euclidean 3-space, Cl(3,0).
//!
//! A [`Multivector`] stores eight coefficients against the fixed blade basis
//!
//! ```text
//! index:  0   1   2   3   4     5     6     7
//! blade:  1   e1  e2  e3  e1e2  e2e3  e3e1  e1e2e3
//! ```
//!
//! The frame is right handed, so `e1e2 = i e3`, `e2e3 = i e1` and
//! `e3e1 = i e2` with the pseudoscalar `i = e1e2e3`.
//!
//! Rotation orientation: [`Rotor::exp`] with plane `e1e2` and a positive
//! angle turns `e1` toward `e2`. Every spin-precession sign in the crate
//! follows from this convention.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Absolute tolerance for "unit" checks on planes, axes and rotors.
pub const UNIT_TOL: f64 = 1e-10;

pub const SCALAR: usize = 0;
pub const E1: usize = 1;
pub const E2: usize = 2;
pub const E3: usize = 3;
pub const E12: usize = 4;
pub const E23: usize = 5;
pub const E31: usize = 6;
pub const E123: usize = 7;

/// Grade of each storage slot.
const GRADE_OF: [u8; 8] = [0, 1, 1, 1, 2, 2, 2, 3];

// Storage slot -> (bitmask of canonical blade, sign of stored blade relative
// to the canonical ascending-index blade). e3e1 = -e1e3.
const SLOT_MASK: [(u8, f64); 8] =
    [(0b000, 1.0), (0b001, 1.0), (0b010, 1.0), (0b100, 1.0), (0b011, 1.0), (0b110, 1.0), (0b101, -1.0), (0b111, 1.0)];

const fn slot_of_mask(mask: u8) -> usize {
    match mask {
        0b000 => 0,
        0b001 => 1,
        0b010 => 2,
        0b100 => 3,
        0b011 => 4,
        0b110 => 5,
        0b101 => 6,
        _ => 7,
    }
}

const fn reorder_sign(a: u8, b: u8) -> f64 {
    // Number of transpositions needed to merge blade a with blade b.
    let mut swaps = 0u32;
    let mut bit = 0;
    while bit < 3 {
        if b & (1 << bit) != 0 {
            let higher = a >> (bit + 1);
            swaps += higher.count_ones();
        }
        bit += 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

const fn build_table() -> [[(usize, f64); 8]; 8] {
    let mut table = [[(0usize, 0.0f64); 8]; 8];
    let mut i = 0;
    while i < 8 {
        let mut j = 0;
        while j < 8 {
            let (ma, sa) = SLOT_MASK[i];
            let (mb, sb) = SLOT_MASK[j];
            let mask = ma ^ mb;
            let slot = slot_of_mask(mask);
            let sign = sa * sb * reorder_sign(ma, mb) * SLOT_MASK[slot].1;
            table[i][j] = (slot, sign);
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT[i][j] = (k, s)` means `blade_i * blade_j = s * blade_k`.
const PRODUCT: [[(usize, f64); 8]; 8] = build_table();

/// Element of Cl(3,0).
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    c: [f64; 8],
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["1", "e1", "e2", "e3", "e12", "e23", "e31", "e123"];
        let mut first = true;
        write!(f, "Multivector(")?;
        for (name, value) in NAMES.iter().zip(self.c.iter()) {
            if *value != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{value}*{name}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { c: [0.0; 8] };

    pub const fn from_coeffs(c: [f64; 8]) -> Self {
        Self { c }
    }

    pub const fn coeffs(&self) -> [f64; 8] {
        self.c
    }

    pub fn coeff(&self, slot: usize) -> f64 {
        self.c[slot]
    }

    pub const fn scalar(s: f64) -> Self {
        let mut c = [0.0; 8];
        c[SCALAR] = s;
        Self { c }
    }

    pub const fn vector(x: f64, y: f64, z: f64) -> Self {
        Self { c: [0.0, x, y, z, 0.0, 0.0, 0.0, 0.0] }
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        Self::vector(v[0], v[1], v[2])
    }

    /// Bivector with coefficients on `e1e2`, `e2e3`, `e3e1`.
    pub const fn bivector(b12: f64, b23: f64, b31: f64) -> Self {
        Self { c: [0.0, 0.0, 0.0, 0.0, b12, b23, b31, 0.0] }
    }

    pub const fn pseudoscalar(p: f64) -> Self {
        let mut c = [0.0; 8];
        c[E123] = p;
        Self { c }
    }

    pub const fn one() -> Self {
        Self::scalar(1.0)
    }

    pub const fn e1() -> Self {
        Self::vector(1.0, 0.0, 0.0)
    }

    pub const fn e2() -> Self {
        Self::vector(0.0, 1.0, 0.0)
    }

    pub const fn e3() -> Self {
        Self::vector(0.0, 0.0, 1.0)
    }

    pub const fn e12() -> Self {
        Self::bivector(1.0, 0.0, 0.0)
    }

    pub const fn e23() -> Self {
        Self::bivector(0.0, 1.0, 0.0)
    }

    pub const fn e31() -> Self {
        Self::bivector(0.0, 0.0, 1.0)
    }

    /// The unit pseudoscalar `i = e1e2e3`.
    pub const fn i() -> Self {
        Self::pseudoscalar(1.0)
    }

    /// Basis vector `e_k` for `k` in 1..=3.
    pub fn basis_vector(k: usize) -> Self {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Self { c }
    }

    pub fn scalar_part(&self) -> f64 {
        self.c[SCALAR]
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.c[E123]
    }

    /// Grade-1 coefficients as a plain triple.
    pub fn vector_part(&self) -> [f64; 3] {
        [self.c[E1], self.c[E2], self.c[E3]]
    }

    /// Bivector coefficients in the order `e1e2`, `e2e3`, `e3e1`.
    pub fn bivector_part(&self) -> [f64; 3] {
        [self.c[E12], self.c[E23], self.c[E31]]
    }

    /// Geometric (Clifford) product.
    pub fn geometric_product(&self, rhs: &Multivector) -> Multivector {
        let mut out = [0.0; 8];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (k, s) = PRODUCT[i][j];
                out[k] += s * a * b;
            }
        }
        Multivector { c: out }
    }

    /// Antisymmetric part `(ab - ba)/2`.
    pub fn wedge(&self, rhs: &Multivector) -> Multivector {
        (self.geometric_product(rhs) - rhs.geometric_product(self)) * 0.5
    }

    /// Symmetric part `(ab + ba)/2` of two vectors, returned as a scalar multivector.
    pub fn inner(&self, rhs: &Multivector) -> Result<Multivector> {
        if !self.is_grade(1) || !rhs.is_grade(1) {
            return Err(Error::GradeMismatch { op: "inner", expected: 1 });
        }
        let sym = (self.geometric_product(rhs) + rhs.geometric_product(self)) * 0.5;
        Ok(sym.grade(0))
    }

    /// Reversion: bivector and pseudoscalar parts change sign.
    pub fn reverse(&self) -> Multivector {
        let mut c = self.c;
        for (slot, v) in c.iter_mut().enumerate() {
            if GRADE_OF[slot] >= 2 {
                *v = -*v;
            }
        }
        Multivector { c }
    }

    /// Grade-k projection with a validated index.
    pub fn grade_project(&self, k: u8) -> Result<Multivector> {
        if k > 3 {
            return Err(Error::InvalidGrade(k));
        }
        Ok(self.grade(k))
    }

    /// Grade-k projection; indices above 3 yield zero.
    pub fn grade(&self, k: u8) -> Multivector {
        let mut c = [0.0; 8];
        for slot in 0..8 {
            if GRADE_OF[slot] == k {
                c[slot] = self.c[slot];
            }
        }
        Multivector { c }
    }

    /// True when every coefficient outside grade `k` is exactly zero.
    pub fn is_grade(&self, k: u8) -> bool {
        (0..8).all(|slot| GRADE_OF[slot] == k || self.c[slot] == 0.0)
    }

    pub fn is_even(&self) -> bool {
        (0..8).all(|slot| GRADE_OF[slot].is_multiple_of(2) || self.c[slot] == 0.0)
    }

    /// Sum of squared coefficients, `<a a~>_0`.
    pub fn norm_squared(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Dual `i * a`.
    pub fn dual(&self) -> Multivector {
        Multivector::i().geometric_product(self)
    }

    /// Classical cross product of the grade-1 parts, via `a x b = -i (a ^ b)`.
    pub fn cross(&self, rhs: &Multivector) -> Result<Multivector> {
        if !self.is_grade(1) || !rhs.is_grade(1) {
            return Err(Error::GradeMismatch { op: "cross", expected: 1 });
        }
        Ok((-Multivector::i().geometric_product(&self.wedge(rhs))).grade(1))
    }

    /// Euclidean dot product of grade-1 parts (no grade check).
    pub fn dot3(&self, rhs: &Multivector) -> f64 {
        self.c[E1] * rhs.c[E1] + self.c[E2] * rhs.c[E2] + self.c[E3] * rhs.c[E3]
    }

    pub fn require_unit_vector(&self, what: &'static str) -> Result<()> {
        if !self.is_grade(1) {
            return Err(Error::GradeMismatch { op: what, expected: 1 });
        }
        let norm = self.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitVector { what, norm });
        }
        Ok(())
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
        Multivector { c }
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        *self = *self + rhs;
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
        Multivector { c }
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        *self = *self - rhs;
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric_product(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= rhs);
        Multivector { c }
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Div<f64> for Multivector {
    type Output = Multivector;
    fn div(self, rhs: f64) -> Multivector {
        self * (1.0 / rhs)
    }
}

/// Even, unit-norm multivector acting on vectors by `R v R~`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotor(Multivector);

impl Rotor {
    pub const IDENTITY: Rotor = Rotor(Multivector::one());

    /// `exp(-plane * theta / 2) = cos(theta/2) - plane sin(theta/2)` for a unit bivector plane.
    pub fn exp(plane: &Multivector, theta: f64) -> Result<Rotor> {
        if !plane.is_grade(2) {
            return Err(Error::GradeMismatch { op: "rotor_exp", expected: 2 });
        }
        let square = plane.geometric_product(plane);
        let deviation = (square + Multivector::one()).max_abs();
        if deviation > UNIT_TOL {
            return Err(Error::NonUnitPlane { deviation });
        }
        let (s, c) = (0.5 * theta).sin_cos();
        Ok(Rotor(Multivector::scalar(c) - *plane * s))
    }

    /// Wraps an even multivector after checking `R R~ = 1`.
    pub fn from_multivector(m: Multivector) -> Result<Rotor> {
        if !m.is_even() {
            return Err(Error::GradeMismatch { op: "rotor", expected: 2 });
        }
        let deviation = (m * m.reverse() - Multivector::one()).max_abs();
        if deviation > UNIT_TOL {
            return Err(Error::InvalidParameter {
                name: "rotor",
                reason: format!("R R~ deviates from 1 by {deviation:e}"),
            });
        }
        Ok(Rotor(m))
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn reverse(&self) -> Rotor {
        Rotor(self.0.reverse())
    }

    /// Rotation applied after `self`, i.e. `other * self`.
    pub fn then(&self, other: &Rotor) -> Rotor {
        Rotor(other.0 * self.0)
    }

    /// Largest coefficient deviation of `R R~` from scalar 1.
    pub fn unit_deviation(&self) -> f64 {
        (self.0 * self.0.reverse() - Multivector::one()).max_abs()
    }

    /// Two-sided rotation `R v R~` of a grade-1 element.
    pub fn rotate_vector(&self, v: &Multivector) -> Result<Multivector> {
        if !v.is_grade(1) {
            return Err(Error::GradeMismatch { op: "rotate_vector", expected: 1 });
        }
        Ok((self.0 * *v * self.0.reverse()).grade(1))
    }

    /// One-sided action `R psi`.
    pub fn apply_left(&self, psi: &Multivector) -> Multivector {
        self.0 * *psi
    }
}
