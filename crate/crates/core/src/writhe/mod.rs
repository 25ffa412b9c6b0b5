//! Local writhes at real crossings and solitary double points, and their sum.

mod chart;
mod crossing;
mod solitary;

use nalgebra::Vector4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Tolerances};
use crate::curve::RationalLink;
use crate::error::{Error, Result};
use crate::projection::{analyze_projection, random_unit_vector, Census, DoublePoint, DoublePointKind, GenericProjection};

pub use chart::AffineChart;
pub use crossing::{crossing_frame, crossing_writhe, crossing_writhe_with, CrossingChoices, CrossingFrame};
pub use solitary::{solitary_frame, solitary_writhe, solitary_writhe_with, SolitaryChoices, SolitaryFrame};

/// Which affine chart of projective space evaluates an orientation.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum ChartChoice {
    #[default]
    Auto,
    Standard(usize),
    Functional(Vector4<f64>),
}

#[derive(Debug, Clone)]
pub struct PointWrithe {
    pub point: DoublePoint,
    /// `None` for points that do not enter the sum.
    pub writhe: Option<i32>,
}

#[derive(Debug, Clone)]
pub struct SelfLinkingReport {
    pub total: i32,
    pub points: Vec<PointWrithe>,
    pub center: Vector4<f64>,
    pub census: Census,
    pub max_residual: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl SelfLinkingReport {
    pub fn included(&self) -> impl Iterator<Item = &PointWrithe> {
        self.points.iter().filter(|p| p.writhe.is_some())
    }
}

/// Local writhe of one double point of a generic projection, `None` for
/// imaginary pairs and crossings of different components.
pub fn local_writhe(proj: &GenericProjection, point: &DoublePoint, tol: &Tolerances) -> Result<Option<i32>> {
    let comp = &proj.components[point.components.0];
    let (s, t) = point.solver_params;
    match point.kind {
        DoublePointKind::Crossing if point.is_self() => crossing_writhe_with(
            &comp.space,
            s.re,
            &comp.space,
            t.re,
            &proj.projection,
            &CrossingChoices::default(),
            tol.frame,
        )
        .map(Some),
        DoublePointKind::Solitary => {
            solitary_writhe_with(&comp.space, &proj.projection, s, &SolitaryChoices::default(), tol.phase, tol.frame)
                .map(Some)
        }
        _ => Ok(None),
    }
}

/// Sums the local writhes of an analyzed projection.
pub fn writhe_sum(proj: &GenericProjection, config: &Config) -> Result<SelfLinkingReport> {
    let mut points = Vec::with_capacity(proj.double_points.len());
    let mut total = 0;
    for p in &proj.double_points {
        let writhe = local_writhe(proj, p, &config.tolerances)
            .map_err(|e| Error::NonGenericCenter(format!("writhe frame: {e}")))?;
        total += writhe.unwrap_or(0);
        points.push(PointWrithe { point: p.clone(), writhe });
    }
    Ok(SelfLinkingReport {
        total,
        center: *proj.projection.center(),
        census: proj.census(),
        max_residual: proj.double_points.iter().fold(0.0, |m, p| m.max(p.residual)),
        points,
        seed: config.seed,
        tolerances: config.tolerances,
    })
}

/// Self-linking number from a given center.
pub fn self_linking(link: &RationalLink, center: &Vector4<f64>, config: &Config) -> Result<SelfLinkingReport> {
    let proj = analyze_projection(link, center, config)?;
    writhe_sum(&proj, config)
}

/// Self-linking number from the first generic center drawn from `rng`.
pub fn self_linking_with_rng(link: &RationalLink, rng: &mut ChaCha8Rng, config: &Config) -> Result<SelfLinkingReport> {
    for _ in 0..config.max_center_attempts {
        let c = random_unit_vector(rng);
        match self_linking(link, &c, config) {
            Err(Error::NonGenericCenter(_)) => continue,
            other => return other,
        }
    }
    Err(Error::ExhaustedRetries { attempts: config.max_center_attempts })
}

/// Self-linking number from a center drawn with `config.seed`.
pub fn self_linking_random(link: &RationalLink, config: &Config) -> Result<SelfLinkingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    self_linking_with_rng(link, &mut rng, config)
}
