use num_complex::Complex64;

use super::{complex_roots, RealPolynomial};

// Fixed weights for the random linear combination; any values off a
// measure-zero set work, fixing them keeps results reproducible.
const WEIGHTS: [f64; 8] = [0.8147, -0.9058, 0.1270, 0.9134, -0.6324, 0.0975, -0.2785, 0.5469];

/// A common complex root with its relative residual.
#[derive(Debug, Clone, Copy)]
pub struct CommonRoot {
    pub root: Complex64,
    pub residual: f64,
}

/// `max_i |p_i(z)| / max_i sum_k |c_ik| max(1,|z|)^k`.
pub fn joint_residual(polys: &[RealPolynomial], z: Complex64) -> f64 {
    let (num, den) = polys.iter().fold((0.0f64, 0.0f64), |(n, d), p| {
        (n.max(p.eval_complex(z).norm()), d.max(p.eval_scale(z)))
    });
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Finite common roots of a family of polynomials, found among the roots of a
/// fixed generic combination and kept when the joint residual is below `tol`.
///
/// Returns `None` when every polynomial vanishes identically.
pub fn common_roots(polys: &[RealPolynomial], tol: f64) -> Option<Vec<CommonRoot>> {
    let scale = polys.iter().fold(0.0f64, |m, p| m.max(p.max_abs_coeff()));
    if scale == 0.0 {
        return None;
    }
    let combo = polys.iter().enumerate().fold(RealPolynomial::zero(), |acc, (i, p)| {
        let w = WEIGHTS[i % WEIGHTS.len()] + 0.01 * (i / WEIGHTS.len()) as f64;
        &acc + &p.scale(w / scale)
    });
    let combo = combo.trimmed(1e-14);
    if combo.degree().unwrap_or(0) == 0 {
        return Some(Vec::new());
    }
    let coeffs: Vec<Complex64> = combo.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut found: Vec<CommonRoot> = Vec::new();
    for z in complex_roots(&coeffs) {
        let residual = joint_residual(polys, z);
        if residual > tol {
            continue;
        }
        if found.iter().any(|c| (c.root - z).norm() <= 1e-6 * (1.0 + z.norm())) {
            continue;
        }
        found.push(CommonRoot { root: z, residual });
    }
    Some(found)
}

/// Quotient and remainder of polynomial long division.
pub fn div_rem(num: &RealPolynomial, den: &RealPolynomial) -> (RealPolynomial, RealPolynomial) {
    let dd = den.degree().expect("division by the zero polynomial");
    let lead = den.coeff(dd);
    let mut rem: Vec<f64> = num.coeffs().to_vec();
    let nd = match num.degree() {
        Some(n) if n >= dd => n,
        _ => return (RealPolynomial::zero(), num.clone()),
    };
    let mut quot = vec![0.0; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let q = rem[k + dd] / lead;
        quot[k] = q;
        for j in 0..=dd {
            rem[k + j] -= q * den.coeff(j);
        }
    }
    rem.truncate(dd);
    (RealPolynomial::new(quot), RealPolynomial::new(rem))
}
