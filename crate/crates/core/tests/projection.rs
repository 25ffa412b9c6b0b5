mod common;

use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;
use rlink::projection::{analyze_projection, phase_normalize, random_center, DoublePointKind, GenericProjection};
use rlink::{Config, Error};

use common::{random_link, rng, trefoil, twisted_cubic};

fn sine(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> f64 {
    let c = Vector3::new(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
    let n = |v: &Vector3<Complex64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    n(&c) / (n(a) * n(b))
}

fn space_sine(a: &Vector4<Complex64>, b: &Vector4<Complex64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            acc += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    let n = |v: &Vector4<Complex64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    acc.sqrt() / (n(a) * n(b))
}

/// Both branches of every double point land on the reported image, and the
/// kind matches the reality of the parameters.
fn check_points(proj: &GenericProjection) {
    for p in &proj.double_points {
        let (a, b) = (&proj.components[p.components.0], &proj.components[p.components.1]);
        let (s, t) = p.solver_params;
        assert!(sine(&a.plane_at(s), &p.image) < 1e-6, "{p:?}");
        assert!(sine(&b.plane_at(t), &p.image) < 1e-6, "{p:?}");
        // distinct points of space
        assert!(space_sine(&a.space.eval_complex(s), &b.space.eval_complex(t)) > 1e-6, "{p:?}");
        let real = |z: Complex64| z.im.abs() < 1e-7 * (1.0 + z.norm());
        let (_, leftover) = phase_normalize(&p.image);
        match p.kind {
            DoublePointKind::Crossing => assert!(real(p.params.0) && real(p.params.1)),
            DoublePointKind::Solitary => {
                assert!(!real(p.params.0) && (p.params.0 - p.params.1.conj()).norm() < 1e-6 * (1.0 + p.params.0.norm()));
                assert!(leftover < 1e-7);
            }
            DoublePointKind::ImaginaryPair => assert!(leftover > 1e-7, "{p:?}"),
        }
    }
}

#[test]
fn twisted_cubic_has_one_real_double_point() {
    let config = Config::default();
    let mut r = rng(11);
    for _ in 0..20 {
        let proj = random_center(&mut r, &twisted_cubic(), &config).unwrap();
        let c = proj.census();
        assert_eq!(c.total(), 1);
        assert_eq!(c.imaginary_pairs, 0);
        check_points(&proj);
    }
}

#[test]
fn center_on_the_curve_is_refused() {
    let on_curve = Vector4::new(1.0, 1.0, 1.0, 1.0);
    let r = analyze_projection(&twisted_cubic(), &on_curve, &Config::default());
    assert!(matches!(r, Err(Error::NonGenericCenter(_))), "{r:?}");
}

#[test]
fn trefoil_double_points_are_consistent() {
    let config = Config::default();
    let mut r = rng(12);
    for _ in 0..10 {
        let proj = random_center(&mut r, &trefoil(), &config).unwrap();
        assert_eq!(proj.census().total(), 6);
        check_points(&proj);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn double_point_count_matches_degree(seed in any::<u64>(), d in 3usize..8) {
        let link = random_link(&mut rng(seed), &[d]);
        let proj = random_center(&mut rng(seed ^ 1), &link, &Config::with_seed(seed)).unwrap();
        prop_assert_eq!(proj.census().total(), (d - 1) * (d - 2) / 2);
        check_points(&proj);
    }

    #[test]
    fn two_components_meet_degree_product_times(seed in any::<u64>(), d in 2usize..5, e in 1usize..4) {
        let link = random_link(&mut rng(seed), &[d, e]);
        let proj = random_center(&mut rng(seed ^ 2), &link, &Config::with_seed(seed)).unwrap();
        prop_assert_eq!(proj.cross_census(0, 1).total(), d * e);
        check_points(&proj);
    }
}
