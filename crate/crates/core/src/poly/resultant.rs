use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{BivariatePolynomial, RealPolynomial};
use crate::error::{Error, Result};

/// Determinant of the Sylvester matrix of two polynomials given by their
/// formal coefficient vectors (ascending powers, formal degree = `len - 1`).
///
/// Rows of `p` come first, so `Res(p, q) = (-1)^{mn} Res(q, p)`.
pub fn sylvester_determinant(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut a = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for (k, &c) in p.iter().rev().enumerate() {
            a[(row, row + k)] = c;
        }
    }
    for row in 0..m {
        for (k, &c) in q.iter().rev().enumerate() {
            a[(n + row, row + k)] = c;
        }
    }
    a.determinant()
}

/// `Res_t(h1, h2)` evaluated at a single value of `s`, using the formal
/// `t`-degrees of both polynomials.
pub fn resultant_at(h1: &BivariatePolynomial, h2: &BivariatePolynomial, s: Complex64) -> Complex64 {
    sylvester_determinant(&h1.t_coefficients_at(s), &h2.t_coefficients_at(s))
}

/// Recovers the coefficients of a polynomial of degree `< values.len()` from
/// its values at `radius * exp(2 pi i k / n)`, `k = 0..n`.
pub fn interpolate_on_circle(values: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mut scale = 1.0 / n as f64;
    buf.iter_mut()
        .map(|c| {
            let out = *c * scale;
            scale /= radius;
            out
        })
        .collect()
}

/// `Res_t(h1, h2)` as a polynomial in `s`.
///
/// Both polynomials are sampled at `N = ds1 dt2 + ds2 dt1 + 1` nodes on the
/// unit circle, the scalar Sylvester determinants are taken there, and the
/// coefficients come back from the inverse discrete Fourier transform.
pub fn resultant_eliminate(h1: &BivariatePolynomial, h2: &BivariatePolynomial) -> Result<RealPolynomial> {
    let (ds1, dt1) = h1.degrees();
    let (ds2, dt2) = h2.degrees();
    if h1.is_zero() || h2.is_zero() {
        return Err(Error::Invalid("resultant of a zero polynomial".into()));
    }
    if dt1 == 0 || dt2 == 0 {
        return Err(Error::Invalid("eliminated variable must appear in both polynomials".into()));
    }
    for (h, dt) in [(h1, dt1), (h2, dt2)] {
        if h.t_column(dt).max_abs_coeff() <= 1e-14 * h.max_abs() {
            return Err(Error::DegenerateLeadingCoefficient);
        }
    }
    let n = ds1 * dt2 + ds2 * dt1 + 1;
    let values: Vec<Complex64> = (0..n)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            resultant_at(h1, h2, z)
        })
        .collect();
    let coeffs = interpolate_on_circle(&values, 1.0);
    let big = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let cut = 64.0 * f64::EPSILON * big;
    Ok(RealPolynomial::new(
        coeffs.iter().map(|c| if c.re.abs() <= cut { 0.0 } else { c.re }).collect(),
    ))
}
