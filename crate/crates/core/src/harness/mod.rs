//! Numerical checks of the invariance properties of the self-linking number.

mod moves;
mod scan;

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::curve::{transform, ProjectiveTransform, RationalLink};
use crate::error::Result;
use crate::projection::{random_center, random_unit_vector, Census, DoublePointKind};
use crate::writhe::{
    crossing_writhe_with, local_writhe, self_linking_with_rng, solitary_writhe_with, ChartChoice, CrossingChoices,
    SolitaryChoices,
};

pub use moves::{
    fifth_move_link, fifth_move_probe, fourth_move_link, fourth_move_probe, move1_family, move1_family_test, FifthMoveReport,
    FourthMoveReport, Move1Report,
};
pub use scan::{interpolate, jump_scan, EventKind, JumpEvent, ScanOptions, ScanReport, UnresolvedInterval};

#[derive(Debug, Clone, Serialize)]
pub struct Trial {
    pub center: [f64; 4],
    pub value: i32,
    pub census: Census,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialReport {
    pub trials: Vec<Trial>,
    /// Index of the first trial whose value differs from trial 0.
    pub first_disagreement: Option<usize>,
}

impl TrialReport {
    pub fn all_equal(&self) -> bool {
        self.first_disagreement.is_none()
    }

    pub fn value(&self) -> Option<i32> {
        self.trials.first().map(|t| t.value)
    }
}

/// Self-linking number from `n_trials` centers drawn from one seeded stream.
pub fn verify_center_independence(link: &RationalLink, n_trials: usize, seed: u64, config: &Config) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(n_trials);
    for _ in 0..n_trials {
        let r = self_linking_with_rng(link, &mut rng, config)?;
        trials.push(Trial { center: r.center.into(), value: r.total, census: r.census });
    }
    let first_disagreement = trials.iter().position(|t| t.value != trials[0].value);
    Ok(TrialReport { trials, first_disagreement })
}

/// Random invertible matrix, reasonably conditioned, with the requested determinant sign.
pub fn random_transform<R: Rng + ?Sized>(rng: &mut R, det_sign: i32) -> ProjectiveTransform {
    loop {
        let mut m: Matrix4<f64> = Matrix4::from_fn(|_, _| rng.gen_range(-1.0..1.0)) + Matrix4::identity() * 0.5;
        if m.determinant().signum() as i32 != det_sign {
            m.row_mut(0).neg_mut();
        }
        let sv = m.singular_values();
        if sv.min() > 0.1 * sv.max() {
            if let Ok(t) = ProjectiveTransform::new(m) {
                return t;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransformCase {
    pub det_sign: i32,
    pub value: i32,
    pub expected: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivarianceReport {
    pub base: i32,
    pub cases: Vec<TransformCase>,
}

impl EquivarianceReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| c.value != c.expected).count()
    }
}

/// Applies random transforms of alternating determinant sign; the value must
/// be unchanged for positive and negated for negative determinants.
pub fn verify_transform_equivariance(link: &RationalLink, n: usize, seed: u64, config: &Config) -> Result<EquivarianceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = self_linking_with_rng(link, &mut rng, config)?.total;
    let mut cases = Vec::with_capacity(n);
    for i in 0..n {
        let det_sign = if i % 2 == 0 { 1 } else { -1 };
        let t = random_transform(&mut rng, det_sign);
        let value = self_linking_with_rng(&transform(link, &t), &mut rng, config)?.total;
        cases.push(TransformCase { det_sign, value, expected: det_sign * base });
    }
    Ok(EquivarianceReport { base, cases })
}

/// The center seen by a transformed link: `T c` for a center `c` of the original.
pub fn transformed_center(t: &ProjectiveTransform, c: &Vector4<f64>) -> Vector4<f64> {
    t.apply_point(c)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ChoiceReport {
    pub crossings: usize,
    pub solitary: usize,
    /// Recomputations that produced a sign.
    pub recomputations: usize,
    /// Recomputations refused because the choice does not apply (chart misses the point).
    pub skipped: usize,
    pub disagreements: usize,
}

fn chart_choices<R: Rng + ?Sized>(rng: &mut R) -> Vec<ChartChoice> {
    let mut charts = vec![ChartChoice::Auto];
    charts.extend((0..4).map(ChartChoice::Standard));
    charts.push(ChartChoice::Functional(random_unit_vector(rng)));
    charts
}

/// Recomputes every crossing and solitary writhe under all combinations of
/// the free choices, over projections from `n_centers` seeded centers.
pub fn verify_choice_independence(link: &RationalLink, n_centers: usize, seed: u64, config: &Config) -> Result<ChoiceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ChoiceReport::default();
    let frame_tol = config.tolerances.frame;
    for _ in 0..n_centers {
        let proj = random_center(&mut rng, link, config)?;
        for p in &proj.double_points {
            let Some(reference) = local_writhe(&proj, p, &config.tolerances)? else { continue };
            let comp = &proj.components[p.components.0].space;
            let (s, t) = p.solver_params;
            let mut outcomes = Vec::new();
            match p.kind {
                DoublePointKind::Crossing => {
                    report.crossings += 1;
                    for chart in chart_choices(&mut rng) {
                        for bits in 0..8 {
                            let choices = CrossingChoices {
                                swap: bits & 1 != 0,
                                reverse: bits & 2 != 0,
                                through_center: bits & 4 != 0,
                                chart: chart.clone(),
                            };
                            outcomes.push(crossing_writhe_with(comp, s.re, comp, t.re, &proj.projection, &choices, frame_tol));
                        }
                    }
                }
                DoublePointKind::Solitary => {
                    report.solitary += 1;
                    for chart in chart_choices(&mut rng) {
                        for conjugate in [false, true] {
                            for plane_chart in [None, Some(0), Some(1), Some(2)] {
                                let choices = SolitaryChoices { conjugate, plane_chart, chart: chart.clone() };
                                outcomes.push(solitary_writhe_with(
                                    comp,
                                    &proj.projection,
                                    s,
                                    &choices,
                                    config.tolerances.phase,
                                    frame_tol,
                                ));
                            }
                        }
                    }
                }
                DoublePointKind::ImaginaryPair => continue,
            }
            for o in outcomes {
                match o {
                    Ok(w) => {
                        report.recomputations += 1;
                        if w != reference {
                            report.disagreements += 1;
                        }
                    }
                    Err(_) => report.skipped += 1,
                }
            }
        }
    }
    Ok(report)
}
