use nalgebra::{Matrix3, Vector3, Vector4};

use super::{AffineChart, ChartChoice};
use crate::curve::RationalComponent;
use crate::error::{Error, Result};
use crate::projection::PlaneProjection;

/// Free choices in the crossing construction; the sign must not depend on them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrossingChoices {
    /// Start from the second branch instead of the first.
    pub swap: bool,
    /// Orient the component by decreasing parameter.
    pub reverse: bool,
    /// Use the segment between the two points that contains the center.
    pub through_center: bool,
    pub chart: ChartChoice,
}

/// The frame at a crossing expressed in one affine chart.
#[derive(Debug, Clone)]
pub struct CrossingFrame {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub v: Vector3<f64>,
    pub w: Vector3<f64>,
    pub l: Vector3<f64>,
    pub w_perp: Vector3<f64>,
    pub chart: AffineChart,
}

impl CrossingFrame {
    pub fn sign(&self, frame_tol: f64) -> Result<i32> {
        let det = Matrix3::from_columns(&[self.v, self.l, self.w_perp]).determinant();
        let scale = self.v.norm() * self.l.norm() * self.w_perp.norm();
        if !(det.abs() > frame_tol * scale) {
            return Err(Error::DegenerateFrame(format!("crossing determinant {det:.3e} at scale {scale:.3e}")));
        }
        Ok(if det > 0.0 { self.chart.sign() } else { -self.chart.sign() })
    }
}

/// Standard chart best containing the segment `[a, sigma b]`, if any does comfortably.
fn auto_chart(a: &Vector4<f64>, b: &Vector4<f64>) -> AffineChart {
    let (an, bn) = (a / a.norm(), b / b.norm());
    let best = (0..4)
        .filter(|&k| an[k] * bn[k] > 0.0)
        .max_by(|&i, &j| an[i].abs().min(bn[i].abs()).total_cmp(&an[j].abs().min(bn[j].abs())));
    match best {
        Some(k) if an[k].abs().min(bn[k].abs()) > 0.1 => AffineChart::standard(k),
        _ => AffineChart::from_functional(&(an + bn)),
    }
}

/// Frame of the crossing between `fa(s)` and `fb(t)`, which project to the same point.
pub fn crossing_frame(
    fa: &RationalComponent,
    s: f64,
    fb: &RationalComponent,
    t: f64,
    projection: &PlaneProjection,
    choices: &CrossingChoices,
    frame_tol: f64,
) -> Result<CrossingFrame> {
    let (mut pa, mut pb) = ((fa, s), (fb, t));
    if choices.swap {
        std::mem::swap(&mut pa, &mut pb);
    }
    let a = pa.0.eval(pa.1);
    let b = pb.0.eval(pb.1);
    let orient = if choices.reverse { -1.0 } else { 1.0 };
    let va = pa.0.derivative().eval(pa.1) * orient;
    let vb = pb.0.derivative().eval(pb.1) * orient;

    // c = alpha a + beta b; the segment {a + lambda sigma b} contains c iff alpha beta sigma > 0
    let c = projection.center();
    let basis = nalgebra::Matrix4x2::from_columns(&[a, b]);
    let coef = basis
        .svd(true, true)
        .solve(c, 1e-14)
        .map_err(|e| Error::DegenerateFrame(format!("center not on the fiber: {e}")))?;
    if (basis * coef - c).norm() > 1e-6 {
        return Err(Error::DegenerateFrame("the two points do not lie on one fiber".into()));
    }
    let mut sigma = if coef[0] * coef[1] > 0.0 { -1.0 } else { 1.0 };
    if choices.through_center {
        sigma = -sigma;
    }
    let bs = b * sigma;
    let chart = match &choices.chart {
        ChartChoice::Auto => auto_chart(&a, &bs),
        ChartChoice::Standard(k) => AffineChart::standard(*k),
        ChartChoice::Functional(phi) => AffineChart::from_functional(phi),
    };
    let (ha, hb) = (chart.value(&a), chart.value(&bs));
    if !(ha * hb > 0.0) || !chart.contains(&a, 1e-9) || !chart.contains(&bs, 1e-9) {
        return Err(Error::DegenerateFrame("chart does not contain the segment".into()));
    }
    let pa3 = chart.point(&a);
    let pb3 = chart.point(&bs);
    let v = chart.tangent(&a, &va);
    let w = chart.tangent(&bs, &(vb * sigma));
    let l = pb3 - pa3;
    if !(l.norm() > 1e-12 * (1.0 + pa3.norm())) {
        return Err(Error::DegenerateFrame("the two preimages coincide".into()));
    }
    let lh = l / l.norm();
    let w_perp = w - lh * w.dot(&lh);
    let frame = CrossingFrame { a: pa3, b: pb3, v, w, l, w_perp, chart };
    if !(frame.w_perp.norm() > frame_tol * frame.w.norm()) {
        return Err(Error::DegenerateFrame("second tangent is parallel to the fiber".into()));
    }
    Ok(frame)
}

/// Local writhe of a crossing `f(s)`, `f(t)` of one component.
pub fn crossing_writhe(f: &RationalComponent, projection: &PlaneProjection, s: f64, t: f64) -> Result<i32> {
    crossing_writhe_with(f, s, f, t, projection, &CrossingChoices::default(), crate::config::Tolerances::default().frame)
}

/// Local writhe with explicit choices; the two points may lie on different components.
pub fn crossing_writhe_with(
    fa: &RationalComponent,
    s: f64,
    fb: &RationalComponent,
    t: f64,
    projection: &PlaneProjection,
    choices: &CrossingChoices,
    frame_tol: f64,
) -> Result<i32> {
    crossing_frame(fa, s, fb, t, projection, choices, frame_tol)?.sign(frame_tol)
}
