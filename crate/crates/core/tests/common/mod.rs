#![allow(dead_code)]

use nalgebra::{Matrix4, Vector2, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlink::curve::{validate, RationalComponent, RationalLink, SphereCurve, DEFAULT_VALIDATION_TOL};
use rlink::poly::RealPolynomial;

pub fn twisted_cubic() -> RationalLink {
    RationalLink::knot(RationalComponent::from_coeffs(&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 1.0]))
}

pub fn conic() -> RationalLink {
    RationalLink::knot(RationalComponent::from_coeffs(&[1.0, 0.0, 1.0], &[1.0, 0.0, -1.0], &[0.0, 2.0], &[0.0]))
}

/// `(1 : t^3 - 3t : t^4 - 4t^2 : t^5 - 10t)`
pub fn trefoil() -> RationalLink {
    RationalLink::knot(RationalComponent::from_coeffs(
        &[1.0],
        &[0.0, -3.0, 0.0, 1.0],
        &[0.0, 0.0, -4.0, 0.0, 1.0],
        &[0.0, -10.0, 0.0, 0.0, 0.0, 1.0],
    ))
}

pub fn random_component<R: Rng>(rng: &mut R, d: usize) -> RationalComponent {
    RationalComponent::new(std::array::from_fn(|_| RealPolynomial::new((0..=d).map(|_| rng.gen_range(-1.0..1.0)).collect())))
}

/// Random link with the given component degrees that passes validation.
pub fn random_link<R: Rng>(rng: &mut R, degrees: &[usize]) -> RationalLink {
    loop {
        let link = RationalLink::new(degrees.iter().map(|&d| random_component(rng, d)).collect()).unwrap();
        if validate(&link, DEFAULT_VALIDATION_TOL).is_valid() {
            return link;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `f` at the homogeneous parameter `(cos theta : sin theta)`.
pub fn eval_angle(f: &RationalComponent, theta: f64) -> Vector4<f64> {
    let (s, c) = theta.sin_cos();
    let d = f.degree() as i32;
    Vector4::from_fn(|i, _| f.coord(i).coeffs().iter().enumerate().map(|(k, a)| a * s.powi(k as i32) * c.powi(d - k as i32)).sum())
}

const MAX_SEGMENT: f64 = 0.05;
const MAX_SAGITTA: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleDiagram {
    pub crossings: usize,
    pub writhe: i32,
}

/// Crossings of one component seen from `center`, found by intersecting a
/// dense polyline. Works in an affine chart whose plane at infinity contains
/// the center, where the projection is parallel along the center direction and
/// the usual sign `sign det[t_a, t_b, p_a - p_b]` applies; the result is
/// multiplied by the orientation sign of the chart.
pub fn dense_crossing_oracle(f: &RationalComponent, center: &Vector4<f64>, samples: usize, seed: u64) -> OracleDiagram {
    let mut rng = rng(seed ^ 0x0bad_c0de);
    let c = center.normalize();
    // among random charts, keep the one whose plane at infinity stays farthest
    // from the curve so that crossings land at moderate chart coordinates
    let probes: Vec<Vector4<f64>> = (0..256).map(|k| eval_angle(f, k as f64 * std::f64::consts::PI / 256.0).normalize()).collect();
    let phi = (0..32)
        .filter_map(|_| {
            let mut phi = Vector4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            phi -= c * c.dot(&phi);
            (phi.norm() > 0.1).then(|| phi.normalize())
        })
        .max_by(|a, b| {
            let clearance = |p: &Vector4<f64>| probes.iter().map(|x| p.dot(x).abs()).fold(f64::INFINITY, f64::min);
            clearance(a).total_cmp(&clearance(b))
        })
        .unwrap();
    // orthonormal basis of ker phi, starting with c
    let mut basis = vec![c];
    let mut candidates: Vec<Vector4<f64>> = (0..4).map(|i| Vector4::ith(i, 1.0) - phi * phi[i]).collect();
    while basis.len() < 3 {
        for v in candidates.iter_mut() {
            let b = basis.last().unwrap();
            *v -= b * b.dot(v);
        }
        let best = candidates.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        basis.push(best.normalize());
    }
    let chart_sign = Matrix4::from_columns(&[phi, basis[0], basis[1], basis[2]]).determinant().signum() as i32;
    // chart coordinates: (depth along c, plane u, plane v)
    let chart = |x: &Vector4<f64>| -> Option<Vector3<f64>> {
        let h = phi.dot(x);
        let p = Vector3::new(basis[0].dot(x), basis[1].dot(x), basis[2].dot(x)) / h;
        (h.abs() > 1e-12 * x.norm() && p.norm() < 1e4).then_some(p)
    };
    // sample adaptively in the angle until consecutive chart points are close;
    // intervals that never get short pass through the plane at infinity
    let at = |theta: f64| chart(&eval_angle(f, theta));
    let step = std::f64::consts::PI / samples as f64;
    let mut pts: Vec<Option<Vector3<f64>>> = vec![at(0.0)];
    for i in 0..samples {
        let mut stack = vec![(i as f64 * step, (i + 1) as f64 * step, 0)];
        while let Some((a, b, depth)) = stack.pop() {
            let (pa, pb) = (at(a), at(b));
            let m = 0.5 * (a + b);
            let split = match (pa, pb) {
                (Some(x), Some(y)) => {
                    let scale = 1.0 + x.norm();
                    // long chords, and chords that cut across a tight turn
                    let sagitta = at(m).map_or(f64::INFINITY, |z| (z - 0.5 * (x + y)).norm());
                    ((y - x).norm() > MAX_SEGMENT * scale || sagitta > MAX_SAGITTA * scale) && depth < 40
                }
                (None, None) => false,
                _ => depth < 12,
            };
            if split {
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            } else {
                pts.push(pb);
            }
        }
    }
    let n = pts.len() - 1;
    let mut segs: Vec<(usize, Vector3<f64>, Vector3<f64>)> = (0..n)
        .filter_map(|i| match (pts[i], pts[i + 1]) {
            (Some(a), Some(b)) if (b - a).norm() <= MAX_SEGMENT * (1.0 + a.norm()) => Some((i, a, b)),
            _ => None,
        })
        .collect();
    segs.sort_by(|a, b| a.1[1].min(a.2[1]).total_cmp(&b.1[1].min(b.2[1])));
    let plane = |p: &Vector3<f64>| Vector2::new(p[1], p[2]);
    let mut crossings = 0;
    let mut writhe = 0;
    for (i, &(ia, a0, a1)) in segs.iter().enumerate() {
        let (p, r) = (plane(&a0), plane(&a1) - plane(&a0));
        let axmax = a0[1].max(a1[1]);
        for &(ib, b0, b1) in &segs[i + 1..] {
            if b0[1].min(b1[1]) > axmax {
                break;
            }
            let gap = ia.abs_diff(ib);
            if gap <= 1 || gap >= n - 1 {
                continue;
            }
            let (q, s) = (plane(&b0), plane(&b1) - plane(&b0));
            let den = r[0] * s[1] - r[1] * s[0];
            if den == 0.0 {
                continue;
            }
            let qp = q - p;
            let u = (qp[0] * s[1] - qp[1] * s[0]) / den;
            let v = (qp[0] * r[1] - qp[1] * r[0]) / den;
            if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
                continue;
            }
            let pa = a0 + (a1 - a0) * u;
            let pb = b0 + (b1 - b0) * v;
            let det = nalgebra::Matrix3::from_columns(&[a1 - a0, b1 - b0, pa - pb]).determinant();
            crossings += 1;
            writhe += if det > 0.0 { chart_sign } else { -chart_sign };
        }
    }
    OracleDiagram { crossings, writhe }
}

/// Inverse stereographic image of `p(t) / w(t)` with `w = (1 + t^2)(4 + t^2)`
/// and `p` the real cubic taking the isotropic values `(1, i, 0)` at `i` and
/// `(0.6, 0.8, i)` at `2i`. The four zeros of `w` are then common zeros of all
/// five sphere coordinates, so after dividing them out the curve has degree 4
/// and no singular point at the pole.
pub fn spherical_quartic() -> SphereCurve {
    let p = [
        RealPolynomial::new(vec![17.0 / 15.0, 0.0, 2.0 / 15.0]),
        RealPolynomial::new(vec![-4.0 / 15.0, 20.0 / 15.0, -4.0 / 15.0, 5.0 / 15.0]),
        RealPolynomial::new(vec![0.0, -1.0 / 6.0, 0.0, -1.0 / 6.0]),
    ];
    let w = RealPolynomial::new(vec![4.0, 0.0, 5.0, 0.0, 1.0]);
    let norm2 = p.iter().fold(RealPolynomial::zero(), |acc, x| &acc + &(x * x));
    let w2 = &w * &w;
    let [x, y, z] = [&p[0] * &w, &p[1] * &w, &p[2] * &w].map(|c| c.scale(2.0));
    SphereCurve::new(&norm2 + &w2, [x, y, z, &norm2 - &w2])
}
