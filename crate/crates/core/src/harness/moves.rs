use nalgebra::Vector4;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::Config;
use crate::curve::{RationalComponent, RationalLink};
use crate::error::Result;
use crate::projection::{Census, DoublePointKind};
use crate::writhe::{self_linking, SelfLinkingReport};

/// `u -> (1 : t - u^2 : u (t - u^2) : epsilon u)`. Seen from `(0:0:0:1)` the
/// nodal cubic `y^2 = x^2 (t - x)` appears; its node is a crossing for
/// `t > 0` and a solitary point for `t < 0`.
pub fn move1_family(epsilon: f64, t: f64) -> RationalLink {
    RationalLink::knot(RationalComponent::from_coeffs(&[1.0], &[t, 0.0, -1.0], &[0.0, t, 0.0, -1.0], &[0.0, epsilon]))
}

fn axis_center() -> Vector4<f64> {
    Vector4::new(0.0, 0.0, 0.0, 1.0)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Move1Report {
    pub value_minus: i32,
    pub value_plus: i32,
    pub census_minus: Census,
    pub census_plus: Census,
    /// Writhe of the single crossing for `t > 0`.
    pub crossing_writhe: Option<i32>,
    /// Writhe of the single solitary point for `t < 0`.
    pub solitary_writhe: Option<i32>,
}

impl Move1Report {
    pub fn equal(&self) -> bool {
        self.value_minus == self.value_plus
    }

    /// One crossing on the positive side and one solitary point on the negative side.
    pub fn regimes_match(&self) -> bool {
        self.census_plus == Census { crossings: 1, solitary: 0, imaginary_pairs: 0 }
            && self.census_minus == Census { crossings: 0, solitary: 1, imaginary_pairs: 0 }
    }
}

fn only_writhe(r: &SelfLinkingReport, kind: DoublePointKind) -> Option<i32> {
    let mut it = r.points.iter().filter(|p| p.point.kind == kind);
    match (it.next(), it.next()) {
        (Some(p), None) => p.writhe,
        _ => None,
    }
}

pub fn move1_family_test(epsilon: f64, t_minus: f64, t_plus: f64, config: &Config) -> Result<Move1Report> {
    let minus = self_linking(&move1_family(epsilon, t_minus), &axis_center(), config)?;
    let plus = self_linking(&move1_family(epsilon, t_plus), &axis_center(), config)?;
    Ok(Move1Report {
        value_minus: minus.total,
        value_plus: plus.total,
        census_minus: minus.census,
        census_plus: plus.census,
        crossing_writhe: only_writhe(&plus, DoublePointKind::Crossing),
        solitary_writhe: only_writhe(&minus, DoublePointKind::Solitary),
    })
}

/// `u -> (1 + kappa u^4 : u^2 : u (u^4 + 2 u^2 + b) : epsilon u)`. From
/// `(0:0:0:1)` the parameters `u, -u` with `u^4 + 2u^2 + b = 0` give two
/// solitary points for `0 < b < 1`, which meet at `b = 1` and turn into a
/// pair of imaginary double points; the space curve stays nonsingular.
pub fn fourth_move_link(b: f64) -> RationalLink {
    let (kappa, epsilon) = (0.05, 0.1);
    RationalLink::knot(RationalComponent::from_coeffs(
        &[1.0, 0.0, 0.0, 0.0, kappa],
        &[0.0, 0.0, 1.0],
        &[0.0, b, 0.0, 2.0, 0.0, 1.0],
        &[0.0, epsilon],
    ))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FourthMoveReport {
    pub value_before: i32,
    pub value_after: i32,
    pub census_before: Census,
    pub census_after: Census,
    /// Writhes of the two solitary points that meet.
    pub meeting_writhes: Vec<i32>,
}

impl FourthMoveReport {
    pub fn writhes_opposite(&self) -> bool {
        self.meeting_writhes.len() == 2 && self.meeting_writhes[0] == -self.meeting_writhes[1]
    }

    pub fn solitary_lost(&self) -> usize {
        self.census_before.solitary.saturating_sub(self.census_after.solitary)
    }
}

/// Crosses `b = 1` in [`fourth_move_link`] and reports the writhes of the
/// solitary points near `u = +-i` just before they disappear.
pub fn fourth_move_probe(delta: f64, config: &Config) -> Result<FourthMoveReport> {
    let before = self_linking(&fourth_move_link(1.0 - delta), &axis_center(), config)?;
    let after = self_linking(&fourth_move_link(1.0 + delta), &axis_center(), config)?;
    let i = Complex64::new(0.0, 1.0);
    let reach = 2.0 * delta.sqrt();
    let meeting_writhes = before
        .points
        .iter()
        .filter(|p| {
            p.point.kind == DoublePointKind::Solitary
                && ((p.point.params.0 - i).norm() < reach || (p.point.params.0 + i).norm() < reach)
        })
        .filter_map(|p| p.writhe)
        .collect();
    Ok(FourthMoveReport {
        value_before: before.total,
        value_after: after.total,
        census_before: before.census,
        census_after: after.census,
        meeting_writhes,
    })
}

/// The first-move curve with `t = -1` together with the line
/// `u -> (1 : alpha : u : beta + gamma u)`. From `(0:0:0:1)` the line's image
/// `x = alpha` sweeps across the solitary point at `alpha = 0` while the two
/// components stay disjoint in space.
pub fn fifth_move_link(alpha: f64) -> RationalLink {
    let (epsilon, beta, gamma) = (0.1, 0.5, 0.3);
    let knot = move1_family(epsilon, -1.0).components()[0].clone();
    let line = RationalComponent::from_coeffs(&[1.0], &[alpha], &[0.0, 1.0], &[beta, gamma]);
    RationalLink::new(vec![knot, line]).expect("two components")
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FifthMoveReport {
    pub value_before: i32,
    pub value_after: i32,
    pub solitary_before: Option<i32>,
    pub solitary_after: Option<i32>,
}

impl FifthMoveReport {
    pub fn solitary_unchanged(&self) -> bool {
        self.solitary_before.is_some() && self.solitary_before == self.solitary_after
    }
}

pub fn fifth_move_probe(delta: f64, config: &Config) -> Result<FifthMoveReport> {
    let before = self_linking(&fifth_move_link(-delta), &axis_center(), config)?;
    let after = self_linking(&fifth_move_link(delta), &axis_center(), config)?;
    Ok(FifthMoveReport {
        value_before: before.total,
        value_after: after.total,
        solitary_before: only_writhe(&before, DoublePointKind::Solitary),
        solitary_after: only_writhe(&after, DoublePointKind::Solitary),
    })
}
