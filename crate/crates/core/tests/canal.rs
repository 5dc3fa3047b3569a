//! Closed paths in de Sitter space: classification, length, involutes and
//! envelope meshes.

use std::f64::consts::{FRAC_PI_2, TAU};

use desitter::canal::*;
use desitter::curves::PeriodicCurve;
use desitter::lorentz::random_lorentz_transform;
use desitter::{CausalType, GeomError, LorentzTransform, LorentzVector};
use proptest::prelude::*;

fn e(i: usize) -> LorentzVector {
    LorentzVector::basis(i)
}

struct Moved<P> {
    path: P,
    m: LorentzTransform,
}

impl<P: LorentzPath> LorentzPath for Moved<P> {
    fn period(&self) -> f64 {
        self.path.period()
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        self.path.jet(t).map(|v| self.m.apply(&v))
    }
}

fn drill() -> MinimalDrill {
    let lambda = PeriodicCurve::from_fn(64, TAU, |s| vec![2.0 + s.sin()]).unwrap();
    minimal_drill(lambda, e(3) + e(4), e(0), e(1)).unwrap()
}

#[test]
fn timelike_cyclide_circle_is_regular_with_closed_form_length() {
    for a in [0.1, 1.0, 3.0] {
        let path = CanalPath::from_path(dupin_cyclide_canal(e(4) * a, [e(0), e(1)]).unwrap(), 256)
            .unwrap();
        let c = classify(&path, 1e-10);
        assert_eq!(c.verdict, Verdict::Regular);
        let q = -a * a / (1.0 + a * a);
        assert!((c.min_kg_quad - q).abs() < 1e-12 && (c.max_kg_quad - q).abs() < 1e-12);
        let len = path.length().unwrap();
        assert!((len - TAU * (1.0 + a * a).sqrt()).abs() < 1e-10);
        assert_eq!(verify_2pi_bound(&path, 1e-9).verdict, BoundVerdict::Pass);
    }
}

#[test]
fn spacelike_cyclide_circle_is_singular_and_short() {
    let b = 0.6;
    let path =
        CanalPath::from_path(dupin_cyclide_canal(e(2) * b, [e(0), e(1)]).unwrap(), 256).unwrap();
    let c = classify(&path, 1e-10);
    assert_eq!(c.verdict, Verdict::Singular);
    assert!((c.min_kg_quad - b * b / (1.0 - b * b)).abs() < 1e-12);
    let r = verify_2pi_bound(&path, 1e-9);
    assert_eq!(r.verdict, BoundVerdict::NotApplicable);
    assert!((r.length.unwrap() - TAU * (1.0 - b * b).sqrt()).abs() < 1e-10);
}

#[test]
fn pencil_geodesic_has_length_two_pi_and_constant_involute() {
    let path = CanalPath::from_path(pencil_geodesic(e(0), e(1)).unwrap(), 128).unwrap();
    assert_eq!(classify(&path, 1e-10).verdict, Verdict::Geodesic);
    assert!((path.length().unwrap() - TAU).abs() < 1e-12);
    let phi = involute(&path, 0.7).unwrap();
    let p0 = phi.eval(0.0).unwrap();
    for j in 0..20 {
        let s = j as f64 * 0.31;
        assert!((phi.eval(s).unwrap() - p0).norm_inf() < 1e-12);
        assert!(phi.derivative(s).unwrap().norm_inf() < 1e-12);
    }
}

#[test]
fn drill_curvature_matches_closed_form() {
    let d = drill();
    let path = CanalPath::from_path(d.clone(), 256).unwrap();
    assert_eq!(classify(&path, 1e-10).verdict, Verdict::Drill);
    for j in 0..50 {
        let s = j as f64 * TAU / 50.0 + 0.01;
        let kg = path.kg_at_param(s).unwrap();
        assert!((kg - d.expected_kg(s)).norm_inf() < 1e-12);
        assert!((kg - (e(3) + e(4)) * 2.0).norm_inf() < 1e-12);
    }
    let r = verify_2pi_bound(&path, 1e-9);
    assert!(r.equality_family_detected);
    assert!(r.margin.unwrap().abs() < 1e-10);
}

#[test]
fn drill_involute_at_quarter_turn() {
    let path = CanalPath::from_path(drill(), 256).unwrap();
    let phi = involute(&path, 0.0).unwrap();
    let d = phi.derivative(FRAC_PI_2).unwrap();
    let expected = LorentzVector::new(0.0, 0.0, 0.0, -2.0, -2.0);
    assert!((d - expected).norm_inf() < 1e-10, "{d:?}");
}

#[test]
fn involute_derivative_matches_finite_differences() {
    let paths = [
        CanalPath::from_path(drill(), 256).unwrap(),
        CanalPath::from_path(
            dupin_cyclide_canal(e(4) + e(2) * 0.5, [e(0), e(1)]).unwrap(),
            256,
        )
        .unwrap(),
        CanalPath::from_path(random_path(7, RandomFamily::PerturbedCyclide), 256).unwrap(),
    ];
    for path in &paths {
        for offset in [0.0, 1.3] {
            let phi = involute(path, offset).unwrap();
            let len = phi.domain_length();
            for j in 1..12 {
                let s = len * j as f64 / 12.0;
                let exact = phi.derivative(s).unwrap();
                let fd = phi.derivative_fd(s, 1e-3).unwrap();
                assert!(
                    (exact - fd).norm_inf() < 1e-7 * (1.0 + exact.norm_inf()),
                    "{s}"
                );
            }
        }
    }
}

#[test]
fn almost_regular_involutes_are_never_spacelike() {
    let mut checked = 0;
    for seed in 0..40 {
        let path =
            CanalPath::from_path(random_path(seed, RandomFamily::PerturbedCyclide), 256).unwrap();
        if !classify(&path, 1e-10).verdict.is_almost_regular() {
            continue;
        }
        checked += 1;
        for offset in [0.0, 2.0, 4.0] {
            let prof = involute(&path, offset)
                .unwrap()
                .causal_profile(64, 1e-10)
                .unwrap();
            assert!(
                prof.iter().all(|c| *c != CausalType::Spacelike),
                "seed {seed}"
            );
        }
    }
    assert!(checked > 20);
}

#[test]
fn invalid_constructions_rejected() {
    assert!(pencil_geodesic(e(0), e(0)).is_err());
    assert!(pencil_geodesic(e(0), e(4)).is_err());
    assert!(matches!(
        dupin_cyclide_canal(e(2) * 1.5, [e(0), e(1)]),
        Err(GeomError::EmptyIntersection(_))
    ));
    assert!(matches!(
        dupin_cyclide_canal(e(2) * 0.5, [e(0), e(4)]),
        Err(GeomError::NotSpacelike { .. })
    ));
    let negative = PeriodicCurve::from_fn(16, TAU, |s| vec![s.sin()]).unwrap();
    assert!(minimal_drill(negative, e(3) + e(4), e(0), e(1)).is_err());
    let lambda = PeriodicCurve::from_fn(16, TAU, |_| vec![1.0]).unwrap();
    assert!(minimal_drill(lambda, e(3), e(0), e(1)).is_err());
    let off_sphere = PeriodicCurve::from_fn(16, TAU, |t| {
        vec![2.0 * t.cos(), 2.0 * t.sin(), 0.0, 0.0, 0.0]
    })
    .unwrap();
    assert!(matches!(
        CanalPath::from_curve(off_sphere),
        Err(GeomError::NotOnDeSitter(_))
    ));
}

#[test]
fn timelike_tangent_is_not_a_canal() {
    // σ = cosh f e₀ + sinh f e₄ with f = sin(t)/2
    struct Boost;
    impl LorentzPath for Boost {
        fn period(&self) -> f64 {
            TAU
        }
        fn jet(&self, t: f64) -> [LorentzVector; 3] {
            let (f, df, ddf) = (0.5 * t.sin(), 0.5 * t.cos(), -0.5 * t.sin());
            let a = e(0) * f.cosh() + e(4) * f.sinh();
            let b = e(0) * f.sinh() + e(4) * f.cosh();
            [a, b * df, b * ddf + a * (df * df)]
        }
    }
    let path = CanalPath::from_path(Boost, 64).unwrap();
    assert!(!path.is_spacelike());
    assert_eq!(classify(&path, 1e-10).verdict, Verdict::NotCanal);
    assert!(matches!(
        path.length(),
        Err(GeomError::NonSpacelikeTangent { .. })
    ));
}

#[test]
fn cyclide_envelope_is_a_closed_torus() {
    let path = CanalPath::from_path(dupin_cyclide_canal(e(4), [e(0), e(1)]).unwrap(), 128).unwrap();
    let r = envelope_mesh(&path, 48, 32).unwrap();
    assert!(!r.degenerate && !r.closure_flip);
    assert_eq!(r.culled_vertices, 0);
    assert!(r.mesh.is_closed() && r.mesh.indices_valid());
    assert_eq!(r.mesh.euler_characteristic(), 0);
    let obj = r.mesh.to_obj();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 48 * 32);
    assert_eq!(
        obj.lines().filter(|l| l.starts_with("f ")).count(),
        2 * 48 * 32
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn almost_regular_random_paths_respect_the_bound(seed in 0u64..1_000_000) {
        let path = CanalPath::from_path(random_path(seed, RandomFamily::PerturbedCyclide), 256).unwrap();
        let r = verify_2pi_bound(&path, 1e-6);
        if r.classification.is_almost_regular() {
            prop_assert_eq!(r.verdict, BoundVerdict::Pass);
            prop_assert!(r.length.unwrap() >= TAU - 1e-6);
        }
    }

    #[test]
    fn length_and_verdict_are_lorentz_invariant(seed in 0u64..10_000, a in 0.2..2.0f64) {
        let base = dupin_cyclide_canal(e(4) * a, [e(0), e(1)]).unwrap();
        let moved = Moved { path: base, m: random_lorentz_transform(seed) };
        let path = CanalPath::from_path(moved, 256).unwrap();
        prop_assert_eq!(classify(&path, 1e-9).verdict, Verdict::Regular);
        let len = path.length().unwrap();
        prop_assert!((len - TAU * (1.0 + a * a).sqrt()).abs() < 1e-8 * len);
        let kg = path.kg_at_param(0.3).unwrap();
        prop_assert!((kg.quad() + a * a / (1.0 + a * a)).abs() < 1e-8 * kg.norm_inf().powi(2).max(1.0));
    }

    #[test]
    fn drill_length_is_two_pi_for_any_positive_profile(c in prop::array::uniform3(-0.3..0.3f64)) {
        let lambda = PeriodicCurve::from_fn(64, TAU, |s| vec![1.0 + c[0] * s.cos() + c[1] * (2.0 * s).sin() + c[2] * (3.0 * s).cos()]).unwrap();
        let d = minimal_drill(lambda, e(3) - e(4), e(0), e(2)).unwrap();
        let path = CanalPath::from_path(d, 128).unwrap();
        prop_assert!((path.length().unwrap() - TAU).abs() < 1e-10);
    }
}
