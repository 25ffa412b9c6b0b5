//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use nalgebra::Vector4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlink::curve::{mirror, stereographic_from_sphere, SphereCurve};
use rlink::harness::{
    jump_scan, move1_family, move1_family_test, verify_center_independence, verify_choice_independence,
    verify_transform_equivariance, EventKind, ScanOptions,
};
use rlink::poly::RealPolynomial;
use rlink::projection::{random_center, DoublePointKind};
use rlink::writhe::{self_linking, self_linking_random};
use rlink::{Config, Error};

use common::{dense_crossing_oracle, random_link, rng, spherical_quartic, trefoil, twisted_cubic};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn center_independence() -> Check {
    let start = Instant::now();
    let report = verify_center_independence(&twisted_cubic(), 50, 1, &Config::default()).map_err(err)?;
    let elapsed = start.elapsed();
    let value = report.value().unwrap_or(0);
    let crossing = report.trials.iter().filter(|t| t.census.crossings == 1).count();
    let solitary = report.trials.iter().filter(|t| t.census.solitary == 1).count();
    ensure(report.all_equal(), format!("trial {:?} disagrees", report.first_disagreement))?;
    ensure(value.abs() == 1, format!("value {value}"))?;
    ensure(crossing > 0 && solitary > 0, format!("regimes: {crossing} crossing, {solitary} solitary"))?;
    ensure(elapsed.as_secs_f64() < 10.0, format!("took {elapsed:?}"))?;
    Ok(format!("twisted cubic, 50 centers, value {value}; {crossing} crossing and {solitary} solitary centers; {elapsed:.2?}"))
}

fn count_identity() -> Check {
    let mut r = rng(2);
    let config = Config::default();
    let shapes: Vec<Vec<usize>> = (0..16).map(|i| vec![3 + i % 4]).chain([vec![3, 3], vec![3, 4], vec![4, 5], vec![3, 6]]).collect();
    let mut projections = 0;
    for degrees in &shapes {
        let link = random_link(&mut r, degrees);
        let mut centers = ChaCha8Rng::seed_from_u64(projections as u64);
        for _ in 0..5 {
            let proj = random_center(&mut centers, &link, &config).map_err(err)?;
            for (i, &d) in degrees.iter().enumerate() {
                let n = proj.self_census(i).total();
                ensure(n == (d - 1) * (d - 2) / 2, format!("degree {d}: {n} self double points"))?;
                for (j, &e) in degrees.iter().enumerate().skip(i + 1) {
                    let m = proj.cross_census(i, j).total();
                    ensure(m == d * e, format!("degrees {d}, {e}: {m} common points"))?;
                }
            }
            projections += 1;
        }
    }
    Ok(format!("{} curves (4 with two components), {projections} projections", shapes.len()))
}

fn random_curves() -> Vec<rlink::curve::RationalLink> {
    let mut r = rng(3);
    (0..10).map(|i| random_link(&mut r, &[3 + i % 4])).collect()
}

fn mirror_antisymmetry() -> Check {
    let mut values = Vec::new();
    for (i, link) in random_curves().iter().enumerate() {
        let a = self_linking_random(link, &Config::with_seed(i as u64)).map_err(err)?.total;
        let b = self_linking_random(&mirror(link), &Config::with_seed(100 + i as u64)).map_err(err)?.total;
        ensure(b == -a, format!("curve {i}: {a} vs mirror {b}"))?;
        values.push(a);
    }
    Ok(format!("10 curves, values {values:?}"))
}

fn projective_equivariance() -> Check {
    let mut cases = 0;
    for (i, link) in random_curves().iter().chain([&trefoil()]).enumerate() {
        let report = verify_transform_equivariance(link, 20, 40 + i as u64, &Config::default()).map_err(err)?;
        ensure(report.failures() == 0, format!("curve {i}: {} failures", report.failures()))?;
        cases += report.cases.len();
    }
    Ok(format!("11 curves, {cases} transforms of both determinant signs, 0 failures"))
}

fn move1() -> Check {
    let config = Config::default();
    let report = move1_family_test(0.1, -1.0, 1.0, &config).map_err(err)?;
    ensure(report.equal(), format!("sl {} vs {}", report.value_minus, report.value_plus))?;
    ensure(report.regimes_match(), format!("census {:?} / {:?}", report.census_minus, report.census_plus))?;
    let axis = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let oracle = dense_crossing_oracle(&move1_family(0.1, 1.0).components()[0], &axis, 4000, 5);
    ensure(oracle.crossings == 1, format!("oracle found {} crossings", oracle.crossings))?;
    ensure(report.crossing_writhe == Some(oracle.writhe), format!("crossing {:?} vs oracle {}", report.crossing_writhe, oracle.writhe))?;
    ensure(report.solitary_writhe == Some(report.value_minus), "solitary writhe is not the value")?;
    let near = move1_family_test(0.1, -5e-5, 5e-5, &config);
    ensure(matches!(near, Err(Error::NonGenericCenter(_))), format!("wall not refused: {near:?}"))?;
    Ok(format!(
        "sl(F-1) = sl(F+1) = {}; crossing {:?} (oracle {}), solitary {:?}; |t| = 5e-5 refused",
        report.value_plus, report.crossing_writhe, oracle.writhe, report.solitary_writhe
    ))
}

fn choice_independence() -> Check {
    let config = Config::default();
    let mut r = rng(6);
    let mut total = rlink::harness::ChoiceReport::default();
    let mut links = vec![trefoil(), twisted_cubic()];
    let mut seed = 60;
    while total.crossings < 100 || total.solitary < 50 {
        if links.is_empty() {
            if seed > 100 {
                break;
            }
            links.push(random_link(&mut r, &[5 + seed as usize % 2]));
        }
        let link = links.remove(0);
        let rep = verify_choice_independence(&link, 20, seed, &config).map_err(err)?;
        seed += 1;
        total.crossings += rep.crossings;
        total.solitary += rep.solitary;
        total.recomputations += rep.recomputations;
        total.skipped += rep.skipped;
        total.disagreements += rep.disagreements;
    }
    ensure(total.crossings >= 100 && total.solitary >= 50, format!("only {} crossings, {} solitary", total.crossings, total.solitary))?;
    ensure(total.disagreements == 0, format!("{} disagreements", total.disagreements))?;
    Ok(format!(
        "{} crossings, {} solitary points, {} recomputations, 0 disagreements",
        total.crossings, total.solitary, total.recomputations
    ))
}

fn trefoil_invariant() -> Check {
    let config = Config::default();
    let link = trefoil();
    let report = verify_center_independence(&link, 50, 7, &config).map_err(err)?;
    let value = report.value().unwrap_or(0);
    ensure(report.all_equal(), format!("trial {:?} disagrees", report.first_disagreement))?;
    ensure(value != 0, "value is zero")?;
    for (i, trial) in report.trials.iter().take(10).enumerate() {
        let center = Vector4::from(trial.center);
        let r = self_linking(&link, &center, &config).map_err(err)?;
        let crossing_sum: i32 = r.points.iter().filter(|p| p.point.kind == DoublePointKind::Crossing).filter_map(|p| p.writhe).sum();
        let oracle = dense_crossing_oracle(&link.components()[0], &center, 6000, i as u64);
        ensure(
            oracle.crossings == r.census.crossings && oracle.writhe == crossing_sum,
            format!("center {i}: engine {} crossings summing to {crossing_sum}, oracle {oracle:?}", r.census.crossings),
        )?;
    }
    Ok(format!("value {value} from 50 centers; crossing sums match the sampling oracle at 10 centers"))
}

fn jumps_to_mirror() -> Check {
    let config = Config::default();
    let start = trefoil();
    let end = mirror(&start);
    let report = jump_scan(&start, &end, &ScanOptions::default(), 8, &config).map_err(err)?;
    let sl = report.start().ok_or("start value missing")?;
    ensure(report.end() == Some(-sl), format!("end value {:?}", report.end()))?;
    ensure(report.unresolved.is_empty(), format!("{} unresolved intervals", report.unresolved.len()))?;
    ensure(!report.events.is_empty(), "no events")?;
    for e in &report.events {
        ensure(e.is_simple(), format!("event at {:?} has delta {}", e.interval, e.delta))?;
        ensure(e.interval.1 - e.interval.0 <= 1e-6, format!("event at {:?} is not localized", e.interval))?;
        ensure(e.kind != EventKind::Unconfirmed, format!("no space double point at {:?}", e.interval))?;
    }
    ensure(report.telescopes() && report.total_jump() == -2 * sl, format!("total jump {}", report.total_jump()))?;
    let conj = report.events.iter().filter(|e| e.kind == EventKind::ConjugateBranchPass).count();
    Ok(format!(
        "{} simple events ({} real crossing switches, {conj} conjugate passes), total jump {} = -2 * {sl}",
        report.events.len(),
        report.events.len() - conj,
        report.total_jump()
    ))
}

fn sphere_transfer() -> Check {
    let e = Vector4::new(0.5, 0.5, -0.5, 0.5);
    let f = Vector4::new(0.6, -0.6, 0.0, -0.0).normalize();
    let f = (f - e * e.dot(&f)).normalize();
    let coords = std::array::from_fn(|i| RealPolynomial::new(vec![e[i], 2.0 * f[i], -e[i]]));
    let circle = SphereCurve::new(RealPolynomial::new(vec![1.0, 0.0, 1.0]), coords);
    let poles = [Vector4::new(0.1, 0.2, 0.3, 0.9).normalize(), Vector4::new(-0.7, 0.1, 0.6, -0.2).normalize()];
    let mut values = Vec::new();
    for (i, pole) in poles.iter().enumerate() {
        let link = stereographic_from_sphere(&[circle.clone()], pole, 1e-9).map_err(err)?;
        ensure(link.degrees() == vec![2], format!("pole {i}: degrees {:?}", link.degrees()))?;
        let report = verify_center_independence(&link, 5, 90 + i as u64, &Config::default()).map_err(err)?;
        ensure(report.all_equal(), format!("pole {i}: values differ"))?;
        values.push(report.value().unwrap_or(i32::MIN));
    }
    ensure(values.iter().all(|&v| v == 0), format!("values {values:?}"))?;
    let quartic = spherical_quartic();
    let p = Vector4::new(0.3, -0.2, 0.5, 0.78).normalize();
    let mut quartic_values = Vec::new();
    for (i, pole) in [p, -p, Vector4::new(-0.9, 0.1, 0.1, 0.2).normalize()].iter().enumerate() {
        let link = stereographic_from_sphere(&[quartic.clone()], pole, 1e-9).map_err(err)?;
        ensure(link.degrees() == vec![4], format!("quartic pole {i}: degrees {:?}", link.degrees()))?;
        let report = verify_center_independence(&link, 5, 95 + i as u64, &Config::default()).map_err(err)?;
        ensure(report.all_equal(), format!("quartic pole {i}: values differ"))?;
        quartic_values.push(report.value().unwrap_or(i32::MIN));
    }
    ensure(quartic_values.iter().all(|&v| v == quartic_values[0]), format!("quartic values {quartic_values:?}"))?;
    Ok(format!(
        "great circle gives sl 0 from 2 poles; spherical quartic gives sl {} from 3 poles (one antipodal pair)",
        quartic_values[0]
    ))
}

fn main() {
    let checks: [(&str, fn() -> Check); 9] = [
        ("center independence", center_independence),
        ("count identity", count_identity),
        ("mirror antisymmetry", mirror_antisymmetry),
        ("projective equivariance", projective_equivariance),
        ("first move family", move1),
        ("internal-choice independence", choice_independence),
        ("nontrivial trefoil value", trefoil_invariant),
        ("jumps along a path to the mirror", jumps_to_mirror),
        ("sphere transfer", sphere_transfer),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
