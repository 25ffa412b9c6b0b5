mod common;

use nalgebra::{Matrix4, Vector4};
use rlink::curve::{mirror, transform, ProjectiveTransform};
use rlink::harness::{
    fifth_move_probe, fourth_move_probe, interpolate, jump_scan, transformed_center, verify_center_independence,
    verify_transform_equivariance, EventKind, ScanOptions,
};
use rlink::writhe::self_linking;
use rlink::Config;

use common::{conic, random_link, rng, trefoil, twisted_cubic};

#[test]
fn conic_is_zero_from_every_center() {
    let report = verify_center_independence(&conic(), 20, 5, &Config::default()).unwrap();
    assert!(report.all_equal());
    assert_eq!(report.value(), Some(0));
    assert_eq!(report.trials.len(), 20);
}

#[test]
fn identity_transform_changes_nothing() {
    let link = trefoil();
    let id = ProjectiveTransform::new(Matrix4::identity()).unwrap();
    assert_eq!(transform(&link, &id), link);
    let c = Vector4::new(0.3, -0.7, 0.2, 0.6);
    assert_eq!(transformed_center(&id, &c), c);
    let config = Config::default();
    assert_eq!(self_linking(&transform(&link, &id), &c, &config).unwrap().total, self_linking(&link, &c, &config).unwrap().total);
}

#[test]
fn equivariance_holds_for_a_random_link() {
    let link = random_link(&mut rng(31), &[4, 2]);
    let report = verify_transform_equivariance(&link, 10, 31, &Config::default()).unwrap();
    assert_eq!(report.failures(), 0, "{report:?}");
    assert!(report.cases.iter().any(|c| c.det_sign < 0) && report.cases.iter().any(|c| c.det_sign > 0));
}

#[test]
fn scan_from_a_link_to_itself_is_flat() {
    let link = twisted_cubic();
    let report = jump_scan(&link, &link, &ScanOptions { steps: 20, ..ScanOptions::default() }, 4, &Config::default()).unwrap();
    assert!(report.events.is_empty());
    assert!(report.unresolved.is_empty());
    assert!(report.samples.iter().all(|s| s.1 == Some(1)));
    assert!(report.telescopes());
}

#[test]
fn path_endpoints_are_the_given_links() {
    let (a, b) = (trefoil(), mirror(&trefoil()));
    let detour = vec![twisted_cubic().components()[0].clone()];
    assert_eq!(interpolate(&a, &b, &detour, 0.7, 0.0), a);
    assert_eq!(interpolate(&a, &b, &detour, 0.7, 1.0), b);
}

#[test]
fn scan_to_the_mirror_telescopes() {
    let (a, b) = (trefoil(), mirror(&trefoil()));
    let options = ScanOptions { steps: 40, ..ScanOptions::default() };
    let report = jump_scan(&a, &b, &options, 12, &Config::default()).unwrap();
    let start = report.start().unwrap();
    assert_eq!(report.end(), Some(-start));
    assert!(report.telescopes(), "{report:?}");
    for e in &report.events {
        assert!(e.is_simple());
        assert_ne!(e.kind, EventKind::Unconfirmed);
        assert_eq!(e.after - e.before, e.delta);
    }
}

#[test]
fn same_seed_same_scan() {
    let (a, b) = (twisted_cubic(), mirror(&twisted_cubic()));
    let options = ScanOptions { steps: 16, ..ScanOptions::default() };
    let config = Config::default();
    let x = serde_json::to_string(&jump_scan(&a, &b, &options, 3, &config).unwrap()).unwrap();
    let y = serde_json::to_string(&jump_scan(&a, &b, &options, 3, &config).unwrap()).unwrap();
    assert_eq!(x, y);
}

#[test]
fn meeting_solitary_points_cancel() {
    let report = fourth_move_probe(0.05, &Config::default()).unwrap();
    assert_eq!(report.solitary_lost(), 2, "{report:?}");
    assert!(report.writhes_opposite(), "{report:?}");
    assert_eq!(report.value_before, report.value_after);
}

#[test]
fn strand_past_a_solitary_point_changes_nothing() {
    let report = fifth_move_probe(0.1, &Config::default()).unwrap();
    assert!(report.solitary_unchanged(), "{report:?}");
    assert_eq!(report.value_before, report.value_after);
}

#[test]
fn same_seed_same_trials() {
    let config = Config::default();
    let x = verify_center_independence(&trefoil(), 8, 77, &config).unwrap();
    let y = verify_center_independence(&trefoil(), 8, 77, &config).unwrap();
    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
}
