//! Lorentz form, causal types, the four-fold wedge and Möbius transforms.

use desitter::lorentz::{
    gram_schmidt_lorentz, orthogonal_complement, orthonormal_basis, random_lorentz_transform,
    CausalType, LorentzTransform, MAX_RANDOM_BOOST,
};
use desitter::{causal_type, inner, wedge4, LorentzVector};
use nalgebra::Matrix5;
use proptest::prelude::*;

fn vec5() -> impl Strategy<Value = LorentzVector> {
    prop::array::uniform5(-10.0..10.0f64).prop_map(LorentzVector)
}

fn det(rows: [&LorentzVector; 5]) -> f64 {
    Matrix5::from_fn(|i, j| rows[i].0[j]).determinant()
}

fn scale(vs: &[&LorentzVector]) -> f64 {
    vs.iter().map(|v| v.norm_inf()).fold(1.0, f64::max)
}

#[test]
fn form_on_basis() {
    for i in 0..5 {
        for j in 0..5 {
            let expected = match (i == j, i) {
                (false, _) => 0.0,
                (true, 4) => -1.0,
                (true, _) => 1.0,
            };
            assert_eq!(
                inner(&LorentzVector::basis(i), &LorentzVector::basis(j)),
                expected
            );
        }
    }
}

#[test]
fn wedge_of_spatial_basis() {
    let e = LorentzVector::basis;
    let w = wedge4(&e(0), &e(1), &e(2), &e(3));
    assert_eq!(w, -e(4));
    assert_eq!(wedge4(&e(1), &e(0), &e(2), &e(3)), e(4));
}

#[test]
fn causal_examples() {
    let v = |a: [f64; 5]| LorentzVector(a);
    assert_eq!(
        causal_type(&v([1.0, 0.0, 0.0, 0.0, 0.0]), 1e-12),
        CausalType::Spacelike
    );
    assert_eq!(
        causal_type(&v([0.0, 0.0, 0.0, 0.0, 1.0]), 1e-12),
        CausalType::Timelike
    );
    assert_eq!(
        causal_type(&v([0.0, 0.0, 0.0, 1.0, 1.0]), 1e-12),
        CausalType::Lightlike
    );
    assert_eq!(causal_type(&v([0.0; 5]), 1e-12), CausalType::Zero);
}

#[test]
fn complement_of_null_plane() {
    let e = LorentzVector::basis;
    let c = orthogonal_complement(&[e(3) + e(4), e(0)]).unwrap();
    assert_eq!(c.len(), 3);
    for w in &c {
        assert!(inner(w, &(e(3) + e(4))).abs() < 1e-14);
        assert!(inner(w, &e(0)).abs() < 1e-14);
    }
}

#[test]
fn basis_of_mixed_span_has_one_negative() {
    let e = LorentzVector::basis;
    let b = orthonormal_basis(&[e(0) + e(4) * 2.0, e(1), e(3) + e(4)]).unwrap();
    assert_eq!((b.positive_count(), b.negative_count()), (2, 1));
    for (i, u) in b.vectors.iter().enumerate() {
        for (j, w) in b.vectors.iter().enumerate() {
            let expected = if i == j { b.signs[i] } else { 0.0 };
            assert!((inner(u, w) - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn non_isometry_rejected() {
    assert!(LorentzTransform::new(Matrix5::identity() * 2.0).is_err());
}

#[test]
fn random_transforms_are_proper_and_orthochronous() {
    for seed in 0..50 {
        let m = random_lorentz_transform(seed);
        assert!(m.form_residual() < 1e-10);
        assert!(m.matrix().determinant() > 0.0);
        let t = m.boost_cosh();
        assert!((1.0..=MAX_RANDOM_BOOST).contains(&t), "{t}");
        let id = m.compose(&m.inverse());
        assert!((id.matrix() - Matrix5::identity()).amax() < 1e-10);
    }
}

proptest! {
    #[test]
    fn form_is_symmetric_and_bilinear(x in vec5(), y in vec5(), z in vec5(), a in -3.0..3.0f64) {
        let s = scale(&[&x, &y, &z]);
        prop_assert!((inner(&x, &y) - inner(&y, &x)).abs() <= 1e-12 * s * s);
        let lhs = inner(&(x * a + y), &z);
        let rhs = a * inner(&x, &z) + inner(&y, &z);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * s * s);
    }

    #[test]
    fn wedge_matches_determinant(a in vec5(), b in vec5(), c in vec5(), d in vec5(), w in vec5()) {
        let nu = wedge4(&a, &b, &c, &d);
        let s = scale(&[&a, &b, &c, &d, &w]).powi(5);
        prop_assert!((inner(&nu, &w) - det([&a, &b, &c, &d, &w])).abs() <= 1e-10 * s);
        for v in [&a, &b, &c, &d] {
            prop_assert!(inner(&nu, v).abs() <= 1e-10 * s);
        }
        prop_assert_eq!(wedge4(&b, &a, &c, &d), -nu);
    }

    #[test]
    fn transforms_preserve_form_and_wedge(seed in 0u64..10_000, x in vec5(), y in vec5(), z in vec5(), w in vec5()) {
        let m = random_lorentz_transform(seed);
        let amp = MAX_RANDOM_BOOST * MAX_RANDOM_BOOST * 4.0;
        let s = scale(&[&x, &y, &z, &w]);
        prop_assert!((inner(&m.apply(&x), &m.apply(&y)) - inner(&x, &y)).abs() <= 1e-10 * amp * s * s);
        let lhs = wedge4(&m.apply(&x), &m.apply(&y), &m.apply(&z), &m.apply(&w));
        let rhs = m.apply(&wedge4(&x, &y, &z, &w));
        prop_assert!((lhs - rhs).norm_inf() <= 1e-9 * amp.powi(3) * s.powi(4));
    }

    #[test]
    fn causal_type_is_invariant(seed in 0u64..10_000, x in vec5()) {
        let q = x.quad();
        prop_assume!(q.abs() > 1e-3 * x.norm_inf().powi(2));
        let m = random_lorentz_transform(seed);
        prop_assert_eq!(causal_type(&m.apply(&x), 1e-8), causal_type(&x, 1e-8));
    }

    #[test]
    fn gram_schmidt_orthonormalizes(a in vec5(), b in vec5(), c in vec5()) {
        if let Ok(basis) = gram_schmidt_lorentz(&[a, b, c]) {
            for (i, u) in basis.vectors.iter().enumerate() {
                for (j, v) in basis.vectors.iter().enumerate() {
                    let expected = if i == j { basis.signs[i] } else { 0.0 };
                    prop_assert!((inner(u, v) - expected).abs() < 1e-6);
                }
            }
        }
    }
}
