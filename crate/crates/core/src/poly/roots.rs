use num_complex::Complex64;

use super::{eval_complex_coeffs, RealPolynomial};
use crate::error::{Error, Result};

/// Residual bound accepted by [`roots`] unless the caller asks otherwise.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Two roots are treated as a conjugate pair when `|r1 - conj(r2)| <= PAIR_TOL (1 + |r1|)`.
pub const PAIR_TOL: f64 = 1e-7;

const MAX_ITER: usize = 2000;

/// Roots closer than this (relative) are treated as one multiple root when
/// conjugate pairing fails.
const CLUSTER_TOL: f64 = 1e-3;

/// All complex roots of a polynomial, with multiplicity.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(r)| / sum |c_i| |r|^i` for each root.
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &r| m.max(r))
    }

    pub fn real_roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().filter(|r| r.im == 0.0).map(|r| r.re)
    }
}

/// Roots of a real polynomial.
///
/// The polynomial is scaled to unit max-abs coefficient, solved by
/// Aberth–Ehrlich iteration and polished by Newton steps. Real-axis roots are
/// snapped to the axis and the remaining ones are matched into exact
/// conjugate pairs; an unmatched imaginary root or a residual above `tol`
/// is reported as [`Error::IllConditioned`].
pub fn roots(p: &RealPolynomial, tol: f64) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::Invalid("roots of the zero polynomial".into()));
    }
    let p = p.normalized();
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let raw = complex_roots(&coeffs);
    let paired = match pair_conjugates(&raw, PAIR_TOL) {
        Ok(p) => p,
        Err(_) => pair_conjugates(&merge_clusters(&coeffs, &raw, CLUSTER_TOL), PAIR_TOL)?,
    };
    let residuals: Vec<f64> = paired.iter().map(|&r| relative_residual(&coeffs, r)).collect();
    let set = RootSet { roots: paired, residuals };
    if set.max_residual() > tol {
        return Err(Error::IllConditioned(format!(
            "max residual {:.3e} exceeds {:.1e}",
            set.max_residual(),
            tol
        )));
    }
    Ok(set)
}

/// `|p(z)| / sum |c_i| |z|^i`, the backward error of `z` as a root.
pub(crate) fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    if scale == 0.0 {
        return 0.0;
    }
    eval_complex_coeffs(coeffs, z).norm() / scale
}

/// Replaces each cluster of `m` nearby roots by `m` copies of one point: the
/// cluster centroid refined as a simple root of the `(m-1)`-th derivative.
fn merge_clusters(coeffs: &[Complex64], roots: &[Complex64], tol: f64) -> Vec<Complex64> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol * (1.0 + roots[i].norm()) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut out = roots.to_vec();
    for i in 0..n {
        let root = find(&mut label, i);
        let members: Vec<usize> = (0..n).filter(|&j| find(&mut label, j) == root).collect();
        let mut centroid = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
        if members.len() > 1 {
            let mut d = coeffs.to_vec();
            for _ in 1..members.len() {
                d = d.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect();
            }
            let dd: Vec<Complex64> = d.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect();
            newton_polish(&d, &dd, &mut centroid);
        }
        out[i] = centroid;
    }
    out
}

/// Snaps near-real roots onto the real axis and symmetrizes conjugate pairs.
pub fn pair_conjugates(roots: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(roots.len());
    let mut pending = Vec::new();
    for &r in roots {
        if r.im.abs() <= 0.5 * tol * (1.0 + r.norm()) {
            out.push(Complex64::new(r.re, 0.0));
        } else {
            pending.push(r);
        }
    }
    let mut used = vec![false; pending.len()];
    for i in 0..pending.len() {
        if used[i] || pending[i].im < 0.0 {
            continue;
        }
        let a = pending[i];
        let best = (0..pending.len())
            .filter(|&j| !used[j] && j != i && pending[j].im < 0.0)
            .map(|j| (j, (a - pending[j].conj()).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, dist)) if dist <= tol * (1.0 + a.norm()) => {
                used[i] = true;
                used[j] = true;
                let m = (a + pending[j].conj()) * 0.5;
                out.push(m);
                out.push(m.conj());
            }
            _ => {
                return Err(Error::IllConditioned(format!("root {a} has no conjugate partner")));
            }
        }
    }
    if let Some(j) = used.iter().position(|u| !u) {
        return Err(Error::IllConditioned(format!(
            "root {} has no conjugate partner",
            pending[j]
        )));
    }
    Ok(out)
}

/// All roots of a polynomial with complex coefficients (ascending powers).
///
/// Exact zero roots are deflated first; the rest come from Aberth–Ehrlich
/// iteration started on circles read off the Newton polygon, followed by a
/// Newton polish that is only kept when it lowers the residual.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let mut out = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    out.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(lead_zeros));
    let c = &c[lead_zeros..];
    let n = c.len().saturating_sub(1);
    match n {
        0 => return out,
        1 => {
            out.push(-c[0] / c[1]);
            return out;
        }
        _ => {}
    }
    let deriv: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect();
    let mut z = initial_guesses(c);
    let mut done = vec![false; n];
    let abs_c: Vec<f64> = c.iter().map(|x| x.norm()).collect();
    for _ in 0..MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let pz = eval_complex_coeffs(c, z[k]);
            let r = z[k].norm();
            let bound = abs_c.iter().rev().fold(0.0, |acc, a| acc * r + a);
            if pz.norm() <= 4.0 * f64::EPSILON * bound {
                done[k] = true;
                continue;
            }
            all = false;
            let dz = eval_complex_coeffs(&deriv, z[k]);
            let ratio = pz / dz;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[k] -= step;
                if step.norm() <= f64::EPSILON * z[k].norm() {
                    done[k] = true;
                }
            } else {
                done[k] = true;
            }
        }
        if all {
            break;
        }
    }
    for zk in z.iter_mut() {
        newton_polish(c, &deriv, zk);
    }
    out.extend(z);
    out
}

fn newton_polish(c: &[Complex64], deriv: &[Complex64], z: &mut Complex64) {
    let mut best = relative_residual(c, *z);
    for _ in 0..6 {
        let dz = eval_complex_coeffs(deriv, *z);
        if dz.norm() == 0.0 {
            return;
        }
        let cand = *z - eval_complex_coeffs(c, *z) / dz;
        let res = relative_residual(c, cand);
        if !(res < best) {
            return;
        }
        best = res;
        *z = cand;
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log|c_i|)`; each hull edge contributes as many points as its width.
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let logs: Vec<f64> = c
        .iter()
        .map(|x| if x.norm() > 0.0 { x.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b as f64 - a as f64) * (logs[i] - logs[a]) - (i as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut z = Vec::with_capacity(n);
    let offset = 0.4;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let radius = ((logs[i] - logs[j]) / m as f64).exp();
        for k in 0..m {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + offset + z.len() as f64 * 0.7;
            z.push(Complex64::from_polar(radius, theta));
        }
    }
    z
}
