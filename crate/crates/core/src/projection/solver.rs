//! Parameter pairs `(s, t)` with `g(s)` and `g(t)` proportional.
//!
//! For a single component the three cross-product coordinates
//! `g_j(s) g_k(t) - g_k(s) g_j(t)` vanish on the diagonal, which is divided out
//! to give symmetric `H_0, H_1, H_2`. The resultant of `H_0` and `H_1` in `t`
//! carries the spurious factor `g_2(s)^(d-1)` (at a root of `g_2` both share all
//! roots of `g_2(t)`); dividing it out leaves a polynomial `D` of degree
//! `(d-1)(d-2)` whose roots are exactly the parameters of double points.
//! `D` is sampled on a circle and interpolated, its roots are matched into
//! pairs using `H_2` as a filter, and each pair is refined by Gauss-Newton on
//! all three equations.

use nalgebra::{Matrix2, Rotation3, Vector2};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::poly::{
    complex_roots, divide_out_diagonal, interpolate_on_circle, roots, sylvester_determinant, BivariatePolynomial,
    RealPolynomial,
};

#[derive(Debug, Clone, PartialEq)]
pub enum SolverFailure {
    NonGeneric(String),
    /// The equations share a whole curve of solutions.
    Coincident,
}

type Solved<T> = std::result::Result<T, SolverFailure>;

fn fail<T>(msg: impl Into<String>) -> Solved<T> {
    Err(SolverFailure::NonGeneric(msg.into()))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RawPair {
    pub s: Complex64,
    pub t: Complex64,
    pub residual: f64,
}

/// Extra interpolation nodes beyond the degree, used to confirm it.
const EXTRA_NODES: usize = 6;
/// Relative size of interpolated coefficients above the expected degree that is tolerated.
const TAIL_TOL: f64 = 1e-6;
/// Matching residual accepted before refinement.
const MATCH_TOL: f64 = 1e-3;
const GN_ITER: usize = 40;

struct System<'a> {
    eqs: [&'a BivariatePolynomial; 3],
}

impl System<'_> {
    fn residual(&self, s: Complex64, t: Complex64) -> f64 {
        let (num, den) = self.eqs.iter().fold((0.0f64, 0.0f64), |(n, d), h| {
            (n.max(h.eval(s, t).norm()), d.max(h.eval_scale(s, t)))
        });
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Gauss-Newton on the overdetermined system, keeping only improving steps.
    fn refine(&self, s: Complex64, t: Complex64) -> (Complex64, Complex64, f64) {
        let (mut s, mut t) = (s, t);
        let mut best = self.residual(s, t);
        for _ in 0..GN_ITER {
            let mut jtj = Matrix2::<Complex64>::zeros();
            let mut jtf = Vector2::<Complex64>::zeros();
            for h in &self.eqs {
                let (v, vs, vt) = h.eval_with_gradient(s, t);
                let row = [vs, vt];
                for a in 0..2 {
                    jtf[a] += row[a].conj() * v;
                    for b in 0..2 {
                        jtj[(a, b)] += row[a].conj() * row[b];
                    }
                }
            }
            let Some(step) = jtj.lu().solve(&jtf) else { break };
            let (ns, nt) = (s - step[0], t - step[1]);
            let r = self.residual(ns, nt);
            if !(r < best) && r > 0.0 {
                break;
            }
            let size = step.norm();
            s = ns;
            t = nt;
            best = r;
            if size <= 1e-15 * (1.0 + s.norm() + t.norm()) || r == 0.0 {
                break;
            }
        }
        (s, t, best)
    }
}

/// Radius for the interpolation circle keeping away from the roots of `avoid`.
fn choose_radius(avoid: &RealPolynomial) -> f64 {
    let coeffs: Vec<Complex64> = avoid.normalized().coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let rs: Vec<f64> = if coeffs.len() > 1 {
        complex_roots(&coeffs).iter().map(|r| r.norm()).collect()
    } else {
        Vec::new()
    };
    let mut best = (f64::NEG_INFINITY, 1.0);
    for k in 0..=12 {
        let rho = 0.5 * 1.125f64.powi(k);
        let gap = rs.iter().fold(f64::INFINITY, |m, r| m.min((r / rho).ln().abs()));
        // prefer radii near 1 when the gap is comfortable
        let score = gap.min(0.25) - 0.01 * rho.ln().abs();
        if score > best.0 {
            best = (score, rho);
        }
    }
    best.1
}

/// `Res_t(h1, h2) / filter^power` as a polynomial of degree `degree`, by
/// sampling on a circle away from the roots of `filter` and interpolating.
fn eliminate(
    h1: &BivariatePolynomial,
    h2: &BivariatePolynomial,
    filter: &RealPolynomial,
    power: usize,
    degree: usize,
) -> Solved<RealPolynomial> {
    if filter.is_zero() {
        return fail("projected curve is contained in a coordinate line");
    }
    let rho = choose_radius(filter);
    let n = degree + 1 + EXTRA_NODES;
    let mut coincident = true;
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let z = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let p = h1.t_coefficients_at(z);
        let q = h2.t_coefficients_at(z);
        let r = sylvester_determinant(&p, &q);
        let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let bound = norm(&p).powi(q.len() as i32 - 1) * norm(&q).powi(p.len() as i32 - 1);
        if r.norm() > 1e-11 * bound {
            coincident = false;
        }
        values.push(r / filter.eval_complex(z).powi(power as i32));
    }
    if coincident {
        return Err(SolverFailure::Coincident);
    }
    let coeffs = interpolate_on_circle(&values, rho);
    let weighted: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c.norm() * rho.powi(k as i32)).collect();
    let big = weighted.iter().fold(0.0f64, |m, &v| m.max(v));
    let tail = weighted[degree + 1..].iter().fold(0.0f64, |m, &v| m.max(v));
    if tail > TAIL_TOL * big {
        return fail(format!("elimination polynomial exceeds its degree (tail {:.1e})", tail / big));
    }
    if weighted[degree] <= 1e-10 * big {
        return fail("double point at parameter infinity");
    }
    Ok(RealPolynomial::new(coeffs[..=degree].iter().map(|c| c.re).collect()))
}

/// The equations only depend on the plane curve up to a linear change of
/// coordinates; mixing them keeps the filter coordinate away from special
/// positions such as a coordinate line containing a planar component.
fn mix(g: &[RealPolynomial; 3]) -> [RealPolynomial; 3] {
    let q = Rotation3::from_euler_angles(0.7, -1.1, 0.4);
    std::array::from_fn(|i| {
        (0..3).fold(RealPolynomial::zero(), |acc, j| &acc + &g[j].scale(q[(i, j)]))
    })
}

fn root_list(p: &RealPolynomial) -> Solved<Vec<Complex64>> {
    roots(p, 1e-8).map(|set| set.roots).or_else(|e| fail(format!("parameter polynomial: {e}")))
}

fn check_collisions(params: &[Complex64], tol: f64) -> Solved<()> {
    for (i, a) in params.iter().enumerate() {
        for b in &params[i + 1..] {
            if (a - b).norm() <= tol * (1.0 + a.norm()) {
                return fail(format!("parameters collide near {a:.6}"));
            }
        }
    }
    Ok(())
}

/// Greedy matching of candidates by ascending residual.
fn greedy_match(n_left: usize, n_right: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for a in 0..n_left {
        for b in 0..n_right {
            edges.push((cost(a, b), a, b));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut left = vec![false; n_left];
    let mut right = vec![false; n_right];
    let mut out = Vec::new();
    for (c, a, b) in edges {
        if !left[a] && !right[b] {
            left[a] = true;
            right[b] = true;
            out.push((a, b, c));
        }
    }
    out
}

fn finish(system: &System<'_>, matched: Vec<(Complex64, Complex64, f64)>, tol: &Tolerances) -> Solved<Vec<RawPair>> {
    let mut out = Vec::with_capacity(matched.len());
    for (s, t, c) in matched {
        if !(c <= MATCH_TOL) {
            return fail(format!("unmatched double point candidate (residual {c:.1e})"));
        }
        let (s, t, residual) = system.refine(s, t);
        if !(residual <= tol.pair_residual) {
            return fail(format!("double point residual {residual:.1e} above threshold"));
        }
        out.push(RawPair { s, t, residual });
    }
    Ok(out)
}

pub(crate) fn self_pairs(g: &[RealPolynomial; 3], d: usize, tol: &Tolerances) -> Solved<Vec<RawPair>> {
    if d < 3 {
        return Ok(Vec::new());
    }
    let g = &mix(g);
    let b = [
        BivariatePolynomial::wedge(&g[1], &g[2], d),
        BivariatePolynomial::wedge(&g[2], &g[0], d),
        BivariatePolynomial::wedge(&g[0], &g[1], d),
    ];
    let mut h = Vec::with_capacity(3);
    for bi in &b {
        h.push(divide_out_diagonal(bi, 1e-12).map_err(|e| SolverFailure::NonGeneric(e.to_string()))?);
    }
    let delta = (d - 1) * (d - 2) / 2;
    let dpoly = eliminate(&h[0], &h[1], &g[2], d - 1, 2 * delta)?;
    let params = root_list(&dpoly)?;
    check_collisions(&params, tol.collision)?;
    let system = System { eqs: [&h[0], &h[1], &h[2]] };
    let n = params.len();
    // every root of D belongs to exactly one pair
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b, system.residual(params[a], params[b])));
        }
    }
    edges.sort_by(|x, y| x.2.total_cmp(&y.2));
    for (a, b, c) in edges {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            pairs.push((params[a], params[b], c));
        }
    }
    if pairs.len() != delta {
        return fail(format!("found {} double points, expected {delta}", pairs.len()));
    }
    finish(&system, pairs, tol)
}

pub(crate) fn cross_pairs(
    ga: &[RealPolynomial; 3],
    da: usize,
    gb: &[RealPolynomial; 3],
    db: usize,
    tol: &Tolerances,
) -> Solved<Vec<RawPair>> {
    let (ga, gb) = (&mix(ga), &mix(gb));
    let b = [
        BivariatePolynomial::cross_term(&ga[1], &gb[2], &ga[2], &gb[1], da, db),
        BivariatePolynomial::cross_term(&ga[2], &gb[0], &ga[0], &gb[2], da, db),
        BivariatePolynomial::cross_term(&ga[0], &gb[1], &ga[1], &gb[0], da, db),
    ];
    let n = da * db;
    if n == 0 {
        return Ok(Vec::new());
    }
    let bt = [b[0].transpose(), b[1].transpose()];
    let left = root_list(&eliminate(&b[0], &b[1], &ga[2], db, n)?)?;
    let right = root_list(&eliminate(&bt[0], &bt[1], &gb[2], da, n)?)?;
    check_collisions(&left, tol.collision)?;
    check_collisions(&right, tol.collision)?;
    let system = System { eqs: [&b[0], &b[1], &b[2]] };
    let matched = greedy_match(n, n, |a, c| system.residual(left[a], right[c]));
    let pairs: Vec<_> = matched.into_iter().map(|(a, c, r)| (left[a], right[c], r)).collect();
    finish(&system, pairs, tol)
}
