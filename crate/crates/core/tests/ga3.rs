use std::f64::consts::PI;

use ga_electron::{Multivector, Rotor};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn multivector() -> impl Strategy<Value = Multivector> {
    prop::array::uniform8(coeff()).prop_map(Multivector::from_coeffs)
}

fn vector() -> impl Strategy<Value = Multivector> {
    prop::array::uniform3(coeff()).prop_map(Multivector::from_vector)
}

fn unit_plane() -> impl Strategy<Value = Multivector> {
    prop::array::uniform3(coeff())
        .prop_filter("non-degenerate plane", |b| b.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|b| {
            let m = Multivector::bivector(b[0], b[1], b[2]);
            m / m.norm()
        })
}

#[test]
fn pauli_table_is_exact() {
    let e = [Multivector::e1(), Multivector::e2(), Multivector::e3()];
    let i = Multivector::i();
    // e_i e_j = delta_ij + i eps_ijk e_k, spelled out by hand.
    let expected = [
        [Multivector::one(), i * e[2], -(i * e[1])],
        [-(i * e[2]), Multivector::one(), i * e[0]],
        [i * e[1], -(i * e[0]), Multivector::one()],
    ];
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(e[a] * e[b], expected[a][b], "e{} e{}", a + 1, b + 1);
        }
    }
    assert_eq!(i * e[2], Multivector::e12());
    assert_eq!(i * e[0], Multivector::e23());
    assert_eq!(i * e[1], Multivector::e31());
    assert_eq!(i * i, Multivector::scalar(-1.0));
}

#[test]
fn rotor_turns_e1_toward_e2() {
    let r = Rotor::exp(&Multivector::e12(), PI / 2.0).unwrap();
    let v = r.rotate_vector(&Multivector::e1()).unwrap();
    assert!(v.max_abs_diff(&Multivector::e2()) < 1e-15);
}

#[test]
fn non_unit_plane_is_rejected() {
    assert!(Rotor::exp(&(Multivector::e12() * 2.0), 1.0).is_err());
    assert!(Rotor::exp(&Multivector::e1(), 1.0).is_err());
}

proptest! {
    #[test]
    fn product_is_associative(a in multivector(), b in multivector(), c in multivector()) {
        prop_assert!(((a * b) * c).max_abs_diff(&(a * (b * c))) < 1e-12);
    }

    #[test]
    fn reverse_is_anti_automorphism(a in multivector(), b in multivector()) {
        prop_assert!((a * b).reverse().max_abs_diff(&(b.reverse() * a.reverse())) < 1e-12);
    }

    #[test]
    fn pseudoscalar_is_central(a in multivector()) {
        let i = Multivector::i();
        prop_assert!((i * a).max_abs_diff(&(a * i)) < 1e-15);
    }

    #[test]
    fn wedge_is_dual_of_cross(a in prop::array::uniform3(coeff()), b in prop::array::uniform3(coeff())) {
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let (va, vb) = (Multivector::from_vector(a), Multivector::from_vector(b));
        let dual = Multivector::i() * Multivector::from_vector(cross);
        prop_assert!(va.wedge(&vb).max_abs_diff(&dual) < 1e-14);
        prop_assert!(va.cross(&vb).unwrap().max_abs_diff(&Multivector::from_vector(cross)) < 1e-14);
    }

    #[test]
    fn composed_rotors_stay_unit(
        planes in prop::collection::vec(unit_plane(), 1..100),
        angles in prop::collection::vec(-10.0..10.0f64, 100),
    ) {
        let mut r = Rotor::exp(&Multivector::e12(), 0.0).unwrap();
        for (p, t) in planes.iter().zip(&angles) {
            r = r.then(&Rotor::exp(p, *t).unwrap());
        }
        let m = *r.as_multivector();
        prop_assert!((m * m.reverse()).max_abs_diff(&Multivector::one()) < 1e-12);
    }

    #[test]
    fn rotation_preserves_length(p in unit_plane(), t in -10.0..10.0f64, v in vector()) {
        let w = Rotor::exp(&p, t).unwrap().rotate_vector(&v).unwrap();
        prop_assert!((w.norm() - v.norm()).abs() < 1e-12);
        prop_assert!(w.is_grade(1));
    }
}
