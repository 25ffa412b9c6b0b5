use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;

use super::{AffineChart, ChartChoice};
use crate::curve::RationalComponent;
use crate::error::{Error, Result};
use crate::projection::{phase_normalize, PlaneProjection};

/// Free choices in the solitary construction; the sign must not depend on them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolitaryChoices {
    /// Work with the conjugate parameter.
    pub conjugate: bool,
    /// Chart `z_k != 0` of the projection plane used for the branch derivative.
    pub plane_chart: Option<usize>,
    /// `Auto` evaluates the orientation on lifts; a chart evaluates it there.
    pub chart: ChartChoice,
}

/// Data of the solitary construction at one of the two conjugate parameters.
#[derive(Debug, Clone)]
pub struct SolitaryFrame {
    pub tau: Complex64,
    /// Coordinate of `f(tau)` on the fiber `lambda -> q + lambda c`.
    pub line_coordinate: Complex64,
    /// Lift of the real point of the fiber in the plane of projection.
    pub q: Vector4<f64>,
    /// Oriented tangent of the real fiber: the boundary orientation of the
    /// half of the complex fiber that contains `f(tau)`.
    pub line_tangent: Vector4<f64>,
    /// Derivative of the projected branch in the plane chart.
    pub branch: (Complex64, Complex64),
    /// Real plane basis making the intersection with the branch positive, lifted into space.
    pub plane_orientation: (Vector4<f64>, Vector4<f64>),
}

impl SolitaryFrame {
    pub fn sign(&self, chart: &ChartChoice, frame_tol: f64) -> Result<i32> {
        let (o1, o2) = &self.plane_orientation;
        let t = &self.line_tangent;
        let (det, scale, chart_sign) = match chart {
            ChartChoice::Auto => {
                let m = Matrix4::from_columns(&[self.q, *o1, *o2, *t]);
                (m.determinant(), self.q.norm() * o1.norm() * o2.norm() * t.norm(), 1)
            }
            other => {
                let chart = match other {
                    ChartChoice::Standard(k) => AffineChart::standard(*k),
                    ChartChoice::Functional(phi) => AffineChart::from_functional(phi),
                    ChartChoice::Auto => unreachable!(),
                };
                if !chart.contains(&self.q, 1e-6) {
                    return Err(Error::DegenerateFrame("chart does not contain the solitary point".into()));
                }
                let cols = [o1, o2, t].map(|u| chart.tangent(&self.q, u));
                let m = Matrix3::from_columns(&cols);
                (m.determinant(), cols.iter().map(|c| c.norm()).product(), chart.sign())
            }
        };
        if !(det.abs() > frame_tol * scale) {
            return Err(Error::DegenerateFrame(format!("solitary determinant {det:.3e} at scale {scale:.3e}")));
        }
        Ok(if det > 0.0 { chart_sign } else { -chart_sign })
    }
}

pub fn solitary_frame(
    f: &RationalComponent,
    projection: &PlaneProjection,
    tau: Complex64,
    choices: &SolitaryChoices,
    phase_tol: f64,
    frame_tol: f64,
) -> Result<SolitaryFrame> {
    let tau = if choices.conjugate { tau.conj() } else { tau };
    let (x, dx) = f.eval_with_derivative(tau);
    let g = projection.project_complex(&x);
    let dg = projection.project_complex(&dx);
    let gnorm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let (s, leftover) = phase_normalize(&g);
    if !(leftover <= phase_tol * gnorm) {
        return Err(Error::DegenerateFrame(format!("image is not real (imaginary part {:.1e})", leftover / gnorm)));
    }
    let k = match choices.plane_chart {
        Some(k) => {
            if !(s[k].abs() > 0.1 * s.amax()) {
                return Err(Error::DegenerateFrame(format!("plane chart {k} is too close to its line at infinity")));
            }
            k
        }
        None => s.iamax(),
    };
    let s = s / s[k];
    let q = projection.embed(&s);
    let c = projection.center();

    let sc = s.map(|v| Complex64::new(v, 0.0));
    let mu = sc.dot(&g) / s.norm_squared();
    let qc = q.map(|v| Complex64::new(v, 0.0));
    let rel = x / mu - qc;
    let lambda: Complex64 = c.iter().zip(rel.iter()).map(|(ci, ri)| ri * *ci).sum::<Complex64>() / c.norm_squared();
    if !(lambda.im.abs() > 1e-9 * (1.0 + lambda.norm())) {
        return Err(Error::DegenerateFrame("the branch point lies on the real fiber".into()));
    }
    let line_tangent = c * lambda.im.signum();

    let idx: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let du = |j: usize| (dg[j] * g[k] - g[j] * dg[k]) / (g[k] * g[k]);
    let (u1, u2) = (du(idx[0]), du(idx[1]));
    // det[o1, o2, U1, U2] for the standard basis equals Im(conj(u1) u2)
    let orientation = (u1.conj() * u2).im;
    if !(orientation.abs() > frame_tol * u1.norm() * u2.norm()) {
        return Err(Error::DegenerateFrame("branch tangent is real".into()));
    }
    let mut o = [Vector3::zeros(), Vector3::zeros()];
    o[0][idx[0]] = 1.0;
    o[1][idx[1]] = 1.0;
    if orientation < 0.0 {
        o.swap(0, 1);
    }
    Ok(SolitaryFrame {
        tau,
        line_coordinate: lambda,
        q,
        line_tangent,
        branch: (u1, u2),
        plane_orientation: (projection.embed(&o[0]), projection.embed(&o[1])),
    })
}

/// Local writhe of the solitary double point with parameters `tau`, `conj(tau)`.
pub fn solitary_writhe(f: &RationalComponent, projection: &PlaneProjection, tau: Complex64) -> Result<i32> {
    let tol = crate::config::Tolerances::default();
    solitary_writhe_with(f, projection, tau, &SolitaryChoices::default(), tol.phase, tol.frame)
}

pub fn solitary_writhe_with(
    f: &RationalComponent,
    projection: &PlaneProjection,
    tau: Complex64,
    choices: &SolitaryChoices,
    phase_tol: f64,
    frame_tol: f64,
) -> Result<i32> {
    solitary_frame(f, projection, tau, choices, phase_tol, frame_tol)?.sign(&choices.chart, frame_tol)
}
