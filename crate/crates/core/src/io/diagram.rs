use std::f64::consts::PI;
use std::fmt::Write;

use nalgebra::{Vector3, Vector4};
use serde::Serialize;

use crate::config::Config;
use crate::curve::{RationalComponent, RationalLink};
use crate::error::Result;
use crate::projection::{Census, DoublePointKind, GenericProjection, PlaneProjection};
use crate::writhe::{crossing_writhe_with, writhe_sum, CrossingChoices};

const SAMPLES: usize = 2000;
const GAP: f64 = 0.035;
const JUMP: f64 = 0.25;
const SIZE: f64 = 640.0;
const RADIUS: f64 = 280.0;

#[derive(Debug, Clone, Serialize)]
pub struct CrossingMark {
    pub at: [f64; 2],
    pub components: [usize; 2],
    /// Which of the two branches is drawn on top (0 or 1).
    pub over: usize,
    /// Local writhe; `None` only if the crossing frame is degenerate.
    pub sign: Option<i32>,
    /// Self-crossings enter the sum, crossings of two components do not.
    pub counted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolitaryMark {
    pub at: [f64; 2],
    pub component: usize,
    pub sign: i32,
}

/// The real part of a projected link drawn in the disk model of the
/// projective plane, where antipodal boundary points are identified.
#[derive(Debug, Clone, Serialize)]
pub struct DiagramDocument {
    /// Polylines in the unit disk, tagged with their component.
    pub polylines: Vec<(usize, Vec<[f64; 2]>)>,
    pub crossings: Vec<CrossingMark>,
    pub solitary: Vec<SolitaryMark>,
    pub total: i32,
    pub census: Census,
    pub center: [f64; 4],
}

/// `f` at the projective parameter `(cos phi : sin phi)`.
fn eval_angle(f: &RationalComponent, phi: f64) -> Vector4<f64> {
    let (s, c) = phi.sin_cos();
    let d = f.degree();
    Vector4::from_fn(|i, _| {
        f.coord(i).coeffs().iter().enumerate().map(|(k, a)| a * s.powi(k as i32) * c.powi((d - k) as i32)).sum()
    })
}

fn angle(u: f64) -> f64 {
    u.atan().rem_euclid(PI)
}

fn upper(y: Vector3<f64>) -> Vector3<f64> {
    let n = y.normalize();
    if n[2] < 0.0 {
        -n
    } else {
        n
    }
}

fn to_disk(n: &Vector3<f64>) -> [f64; 2] {
    [n[0], n[1]]
}

/// Disk position and tangent of the branch through `phi`.
fn branch(f: &RationalComponent, projection: &PlaneProjection, phi: f64) -> ([f64; 2], [f64; 2]) {
    let h = 1e-6;
    let y = projection.project(&eval_angle(f, phi)).normalize();
    let flip = if y[2] < 0.0 { -1.0 } else { 1.0 };
    let at = |p: f64| {
        let v = projection.project(&eval_angle(f, p)).normalize();
        let v = if v.dot(&y) < 0.0 { -v } else { v };
        v * flip
    };
    let (a, b) = (at(phi - h), at(phi + h));
    let t = (b - a) / (2.0 * h);
    (to_disk(&(y * flip)), [t[0], t[1]])
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Builds the diagram of a generic projection.
pub fn diagram(link: &RationalLink, proj: &GenericProjection, config: &Config) -> Result<DiagramDocument> {
    let report = writhe_sum(proj, config)?;
    let projection = &proj.projection;
    let mut crossings = Vec::new();
    let mut solitary = Vec::new();
    // (component, angle, half-width) of each gap in an under-strand
    let mut gaps: Vec<(usize, f64, f64)> = Vec::new();
    for pw in &report.points {
        let p = &pw.point;
        match p.kind {
            DoublePointKind::Crossing => {
                let (ca, cb) = p.components;
                let (fa, fb) = (&link.components()[ca], &link.components()[cb]);
                let (pa, pb) = (angle(p.params.0.re), angle(p.params.1.re));
                let sign = match pw.writhe {
                    Some(w) => Some(w),
                    None => {
                        let (sa, sb) = p.solver_params;
                        crossing_writhe_with(
                            &proj.components[ca].space,
                            sa.re,
                            &proj.components[cb].space,
                            sb.re,
                            projection,
                            &CrossingChoices::default(),
                            config.tolerances.frame,
                        )
                        .ok()
                    }
                };
                let (at, ta) = branch(fa, projection, pa);
                let (_, tb) = branch(fb, projection, pb);
                // right-hand rule: the over-strand turns counterclockwise onto the under-strand for +1
                let turn = ta[0] * tb[1] - ta[1] * tb[0];
                let over = if turn * sign.unwrap_or(1) as f64 >= 0.0 { 0 } else { 1 };
                let (uc, uphi, ut) = if over == 0 { (cb, pb, tb) } else { (ca, pa, ta) };
                let speed = ut[0].hypot(ut[1]).max(1e-9);
                gaps.push((uc, uphi, GAP / speed));
                crossings.push(CrossingMark { at, components: [ca, cb], over, sign, counted: pw.writhe.is_some() });
            }
            DoublePointKind::Solitary => {
                let n = upper(p.real_image().expect("solitary points are real"));
                solitary.push(SolitaryMark { at: to_disk(&n), component: p.components.0, sign: pw.writhe.unwrap_or(0) });
            }
            DoublePointKind::ImaginaryPair => {}
        }
    }

    let mut polylines = Vec::new();
    for (ci, f) in link.components().iter().enumerate() {
        let mut current: Vec<[f64; 2]> = Vec::new();
        for i in 0..=SAMPLES {
            let phi = PI * i as f64 / SAMPLES as f64;
            let hidden = gaps.iter().any(|&(c, g, w)| c == ci && circular_distance(phi, g) < w);
            let y = projection.project(&eval_angle(f, phi));
            if hidden || !(y.norm() > 0.0) {
                if current.len() > 1 {
                    polylines.push((ci, std::mem::take(&mut current)));
                }
                current.clear();
                continue;
            }
            let q = to_disk(&upper(y));
            if let Some(last) = current.last() {
                if (q[0] - last[0]).hypot(q[1] - last[1]) > JUMP {
                    if current.len() > 1 {
                        polylines.push((ci, std::mem::take(&mut current)));
                    }
                    current.clear();
                }
            }
            current.push(q);
        }
        if current.len() > 1 {
            polylines.push((ci, current));
        }
    }

    Ok(DiagramDocument {
        polylines,
        crossings,
        solitary,
        total: report.total,
        census: report.census,
        center: report.center.into(),
    })
}

const PALETTE: [&str; 6] = ["#1f4e9c", "#b5452b", "#2e7d32", "#7b3fa0", "#b8860b", "#00838f"];

fn screen(p: [f64; 2]) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * p[0], SIZE / 2.0 - RADIUS * p[1])
}

fn sign_label(s: Option<i32>) -> &'static str {
    match s {
        Some(s) if s > 0 => "+1",
        Some(_) => "-1",
        None => "?",
    }
}

impl DiagramDocument {
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let h = SIZE + 110.0;
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{h}" viewBox="0 0 {SIZE} {h}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let c = SIZE / 2.0;
        let _ = writeln!(out, r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#999" stroke-dasharray="4 4"/>"##);
        for (ci, line) in &self.polylines {
            let pts: Vec<String> = line
                .iter()
                .map(|&p| {
                    let (x, y) = screen(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="2" stroke-linejoin="round" points="{}"/>"#,
                PALETTE[ci % PALETTE.len()],
                pts.join(" ")
            );
        }
        for m in &self.crossings {
            let (x, y) = screen(m.at);
            let color = if m.counted { "#000" } else { "#888" };
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
                x + 7.0,
                y - 7.0,
                sign_label(m.sign)
            );
        }
        for m in &self.solitary {
            let (x, y) = screen(m.at);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4.5" fill="{}"/>"#, PALETTE[m.component % PALETTE.len()]);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
                x + 7.0,
                y - 7.0,
                sign_label(Some(m.sign))
            );
        }
        let base = SIZE + 10.0;
        let mut lines = vec![
            format!("self-linking number: {}", self.total),
            format!(
                "crossings: {}   solitary points: {}   imaginary pairs: {}",
                self.census.crossings, self.census.solitary, self.census.imaginary_pairs
            ),
            format!(
                "center: ({:.4}, {:.4}, {:.4}, {:.4})",
                self.center[0], self.center[1], self.center[2], self.center[3]
            ),
        ];
        if self.crossings.iter().any(|m| !m.counted) {
            lines.push("grey signs: crossings of different components, not counted".into());
        }
        for (i, l) in lines.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="16" y="{:.0}" font-family="sans-serif" font-size="{}">{l}</text>"#,
                base + 22.0 * i as f64,
                if i == 0 { 16 } else { 12 }
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
