//! Sphere model: centre/radius data, stereographic projection, euclidean
//! spheres, angles and circles.

use std::f64::consts::PI;

use desitter::lorentz::random_lorentz_transform;
use desitter::spheremodel::*;
use desitter::{inner, LorentzVector};
use proptest::prelude::*;

fn point3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-5.0..5.0f64)
}

fn sphere() -> impl Strategy<Value = EuclideanSphere> {
    (point3(), 0.2..4.0f64, any::<bool>()).prop_map(|(c, r, inward)| {
        let o = if inward {
            Orientation::Inward
        } else {
            Orientation::Outward
        };
        EuclideanSphere::new(c, r, o).unwrap()
    })
}

fn unit4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero", |m| m.iter().map(|v| v * v).sum::<f64>() > 1e-2)
        .prop_map(|m| {
            let n = m.iter().map(|v| v * v).sum::<f64>().sqrt();
            m.map(|v| v / n)
        })
}

#[test]
fn great_sphere_and_small_spheres() {
    let s = sphere_from_center_radius(&CenterRadius {
        m: [0.0, 0.0, 0.0, 1.0],
        r: PI / 2.0,
    })
    .unwrap();
    assert!((s.vector() - LorentzVector::basis(3)).norm_inf() < 1e-15);
    let s = sphere_from_center_radius(&CenterRadius {
        m: [1.0, 0.0, 0.0, 0.0],
        r: PI / 3.0,
    })
    .unwrap();
    let expected = LorentzVector::new(2.0 / 3f64.sqrt(), 0.0, 0.0, 0.0, 1.0 / 3f64.sqrt());
    assert!((s.vector() - expected).norm_inf() < 1e-15);
    assert!(sphere_from_center_radius(&CenterRadius {
        m: [1.0, 0.0, 0.0, 0.0],
        r: 0.0
    })
    .is_err());
}

#[test]
fn orthogonal_and_tangent_pairs() {
    let e = LorentzVector::basis;
    let a = SpherePoint::new(e(0)).unwrap();
    let b = SpherePoint::new(e(1)).unwrap();
    assert_eq!(
        angle_between(&a, &b),
        SphereAngle::Intersecting { angle: PI / 2.0 }
    );
    let c = SpherePoint::new(e(0) * 2f64.sqrt() + e(4)).unwrap();
    match angle_between(&a, &c) {
        SphereAngle::Disjoint { abs_inner } => assert!((abs_inner - 2f64.sqrt()).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

#[test]
fn plane_through_pole_has_no_euclidean_form() {
    let s = SpherePoint::new(LorentzVector::basis(0)).unwrap();
    assert!(matches!(
        euclidean_from_sphere(&s),
        Err(desitter::GeomError::PlaneSphere)
    ));
}

#[test]
fn circle_points_lie_on_both_spheres() {
    let e = LorentzVector::basis;
    let a = SpherePoint::new(e(2)).unwrap();
    let b = SpherePoint::normalize(e(0) + e(4) * 0.5).unwrap();
    let circle = CircleRep::new(a, b).unwrap();
    for p in circle_points(&circle, 12).unwrap() {
        let g = p.gamma();
        assert!(g.quad().abs() < 1e-13);
        assert!(inner(&g, &a.vector()).abs() < 1e-13);
        assert!(inner(&g, &b.vector()).abs() < 1e-13);
    }
    assert!(CircleRep::new(a, a).is_err());
}

#[test]
fn concentric_spheres_are_nested() {
    let sp = |r: f64| {
        sphere_from_euclidean(&EuclideanSphere::new([0.0; 3], r, Orientation::Inward).unwrap())
    };
    assert!(matches!(
        angle_between(&sp(1.0), &sp(2.0)),
        SphereAngle::Disjoint { .. }
    ));
}

proptest! {
    #[test]
    fn centre_radius_round_trip(m in unit4(), r in 0.01..(PI - 0.01)) {
        let s = sphere_from_center_radius(&CenterRadius { m, r }).unwrap();
        prop_assert!((s.vector().quad() - 1.0).abs() < 1e-9);
        let back = center_radius_from_sphere(&s);
        prop_assert!((back.r - r).abs() < 1e-10);
        for i in 0..4 {
            prop_assert!((back.m[i] - m[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn euclidean_round_trip(s in sphere()) {
        let sigma = sphere_from_euclidean(&s);
        prop_assert!((sigma.vector().quad() - 1.0).abs() < 1e-9);
        let back = euclidean_from_sphere(&sigma).unwrap();
        prop_assert!((back.radius - s.radius).abs() < 1e-10 * s.radius.max(1.0));
        prop_assert_eq!(back.orientation, s.orientation);
        for i in 0..3 {
            prop_assert!((back.center[i] - s.center[i]).abs() < 1e-10 * (1.0 + s.center[i].abs()));
        }
    }

    #[test]
    fn form_with_lift_is_scaled_power(s in sphere(), x in point3()) {
        // <σ, (2x, |x|²−1, |x|²+1)> = ±(ρ² − |x−c|²)/ρ
        let lhs = inner(&sphere_from_euclidean(&s).vector(), &null_lift(&x));
        let rhs = s.orientation.sign() * s.power(&x) / s.radius;
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn angle_matches_dihedral(a in sphere(), b in sphere()) {
        if let Some(dihedral) = a.intersection_angle(&b) {
            match angle_between(&sphere_from_euclidean(&a), &sphere_from_euclidean(&b)) {
                SphereAngle::Intersecting { angle } => prop_assert!((angle.cos() - dihedral.cos()).abs() < 1e-8),
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }

    #[test]
    fn stereographic_round_trip(x in point3()) {
        let p = inverse_stereographic(&x);
        let r4 = p.r4();
        prop_assert!((r4.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
        let y = stereographic_to_r3(&p).point().unwrap();
        for i in 0..3 {
            prop_assert!((y[i] - x[i]).abs() < 1e-12 * (1.0 + x[i].abs()));
        }
        let z = project_null(&(null_lift(&x) * 3.5)).point().unwrap();
        for i in 0..3 {
            prop_assert!((z[i] - x[i]).abs() < 1e-12 * (1.0 + x[i].abs()));
        }
    }

    #[test]
    fn mobius_maps_preserve_angles(seed in 0u64..5000, a in sphere(), b in sphere()) {
        let m = random_lorentz_transform(seed);
        let (sa, sb) = (sphere_from_euclidean(&a), sphere_from_euclidean(&b));
        let ma = SpherePoint::normalize(m.apply(&sa.vector())).unwrap();
        let mb = SpherePoint::normalize(m.apply(&sb.vector())).unwrap();
        let c0 = inner(&sa.vector(), &sb.vector());
        let c1 = inner(&ma.vector(), &mb.vector());
        prop_assert!((c0 - c1).abs() < 1e-8 * (1.0 + c0.abs()));
    }

    #[test]
    fn mobius_maps_points_on_spheres_to_points_on_images(seed in 0u64..5000, s in sphere(), u in prop::array::uniform2(0.0..1.0f64)) {
        let (th, ph) = (PI * u[0], 2.0 * PI * u[1]);
        let x: [f64; 3] = std::array::from_fn(|i| {
            s.center[i] + s.radius * [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()][i]
        });
        let m = random_lorentz_transform(seed);
        let image = SpherePoint::normalize(m.apply(&sphere_from_euclidean(&s).vector())).unwrap();
        let g = m.apply(&null_lift(&x));
        prop_assert!(inner(&image.vector(), &g).abs() < 1e-9 * g.norm_inf());
        if let (Ok(e), Some(y)) = (euclidean_from_sphere(&image), project_null(&g).point()) {
            let d = ((0..3).map(|i| (y[i] - e.center[i]).powi(2)).sum::<f64>()).sqrt();
            prop_assume!(e.radius < 1e4 && y.iter().all(|v| v.abs() < 1e4));
            prop_assert!((d - e.radius).abs() < 1e-6 * (1.0 + e.radius));
        }
    }
}
