use num_complex::Complex64;

use super::RealPolynomial;
use crate::error::{Error, Result};

/// Real polynomial in `(s, t)` with a dense `(ds+1) x (dt+1)` coefficient grid.
///
/// The grid dimensions are formal degrees: they are kept even when the
/// outermost rows or columns happen to be zero, so that Sylvester matrices
/// built from the polynomial have a predictable size.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePolynomial {
    ds: usize,
    dt: usize,
    c: Vec<f64>,
}

impl BivariatePolynomial {
    pub fn zero(ds: usize, dt: usize) -> Self {
        Self { ds, dt, c: vec![0.0; (ds + 1) * (dt + 1)] }
    }

    pub fn from_fn(ds: usize, dt: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zero(ds, dt);
        for i in 0..=ds {
            for j in 0..=dt {
                out.c[i * (dt + 1) + j] = f(i, j);
            }
        }
        out
    }

    /// `p(s) q(t)`.
    pub fn outer(p: &RealPolynomial, q: &RealPolynomial) -> Self {
        let ds = p.degree().unwrap_or(0);
        let dt = q.degree().unwrap_or(0);
        Self::from_fn(ds, dt, |i, j| p.coeff(i) * q.coeff(j))
    }

    /// `p(s) q(t) - q(s) p(t)` padded to bidegree `(d, d)`.
    pub fn wedge(p: &RealPolynomial, q: &RealPolynomial, d: usize) -> Self {
        Self::from_fn(d, d, |i, j| p.coeff(i) * q.coeff(j) - q.coeff(i) * p.coeff(j))
    }

    /// `p(s) q(t) - r(s) u(t)` padded to bidegree `(ds, dt)`.
    pub fn cross_term(p: &RealPolynomial, q: &RealPolynomial, r: &RealPolynomial, u: &RealPolynomial, ds: usize, dt: usize) -> Self {
        Self::from_fn(ds, dt, |i, j| p.coeff(i) * q.coeff(j) - r.coeff(i) * u.coeff(j))
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.ds, self.dt)
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i > self.ds || j > self.dt {
            return 0.0;
        }
        self.c[i * (self.dt + 1) + j]
    }

    fn coeff_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.c[i * (self.dt + 1) + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0.0)
    }

    /// Swaps the roles of `s` and `t`.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dt, self.ds, |i, j| self.coeff(j, i))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { ds: self.ds, dt: self.dt, c: self.c.iter().map(|v| v * k).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let ds = self.ds.max(other.ds);
        let dt = self.dt.max(other.dt);
        Self::from_fn(ds, dt, |i, j| self.coeff(i, j) - other.coeff(i, j))
    }

    pub fn add(&self, other: &Self) -> Self {
        let ds = self.ds.max(other.ds);
        let dt = self.dt.max(other.dt);
        Self::from_fn(ds, dt, |i, j| self.coeff(i, j) + other.coeff(i, j))
    }

    /// Largest coefficient of `B(s,t) - sign * B(t,s)`.
    fn symmetry_defect(&self, sign: f64) -> f64 {
        let d = self.ds.max(self.dt);
        let mut worst: f64 = 0.0;
        for i in 0..=d {
            for j in 0..=d {
                worst = worst.max((self.coeff(i, j) - sign * self.coeff(j, i)).abs());
            }
        }
        worst
    }

    /// `B(t,s) = B(s,t)` within `tol` relative to the largest coefficient.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_defect(1.0) <= tol * self.max_abs()
    }

    /// `B(t,s) = -B(s,t)` within `tol` relative to the largest coefficient.
    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.symmetry_defect(-1.0) <= tol * self.max_abs()
    }

    /// `(s - t) B(s, t)`.
    pub fn times_diagonal(&self) -> Self {
        let mut out = Self::zero(self.ds + 1, self.dt + 1);
        for i in 0..=self.ds {
            for j in 0..=self.dt {
                let v = self.coeff(i, j);
                *out.coeff_mut(i + 1, j) += v;
                *out.coeff_mut(i, j + 1) -= v;
            }
        }
        out
    }

    pub fn eval(&self, s: Complex64, t: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        (0..=self.ds).rev().fold(zero, |acc, i| {
            let row = (0..=self.dt).rev().fold(zero, |r, j| r * t + self.coeff(i, j));
            acc * s + row
        })
    }

    /// Value and the partial derivatives in `s` and `t`.
    pub fn eval_with_gradient(&self, s: Complex64, t: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut v, mut vs, mut vt) = (zero, zero, zero);
        for i in (0..=self.ds).rev() {
            let (mut row, mut drow) = (zero, zero);
            for j in (0..=self.dt).rev() {
                drow = drow * t + row;
                row = row * t + self.coeff(i, j);
            }
            vs = vs * s + v;
            v = v * s + row;
            vt = vt * s + drow;
        }
        (v, vs, vt)
    }

    /// `sum |c_ij| max(1,|s|)^i max(1,|t|)^j`.
    pub fn eval_scale(&self, s: Complex64, t: Complex64) -> f64 {
        let (rs, rt) = (s.norm().max(1.0), t.norm().max(1.0));
        (0..=self.ds).rev().fold(0.0, |acc, i| {
            let row = (0..=self.dt).rev().fold(0.0, |r, j| r * rt + self.coeff(i, j).abs());
            acc * rs + row
        })
    }

    /// Coefficients of the polynomial in `t` obtained by fixing `s`, padded to `dt + 1`.
    pub fn t_coefficients_at(&self, s: Complex64) -> Vec<Complex64> {
        (0..=self.dt)
            .map(|j| {
                (0..=self.ds)
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, i| acc * s + self.coeff(i, j))
            })
            .collect()
    }

    /// The coefficient of `t^j` as a polynomial in `s`.
    pub fn t_column(&self, j: usize) -> RealPolynomial {
        RealPolynomial::new((0..=self.ds).map(|i| self.coeff(i, j)).collect())
    }
}

/// Exact synthetic division of an antisymmetric `B(s,t)` by `(s - t)`.
///
/// Viewing `B` as a polynomial in `s` with coefficients in `R[t]`, the
/// quotient rows follow `h_{i-1} = b_i + t h_i`. The result is symmetric.
pub fn divide_out_diagonal(b: &BivariatePolynomial, tol: f64) -> Result<BivariatePolynomial> {
    if !b.is_antisymmetric(tol) {
        return Err(Error::NotAntisymmetric { deviation: b.symmetry_defect(-1.0) / b.max_abs().max(f64::MIN_POSITIVE) });
    }
    let d = b.ds.max(b.dt);
    if d == 0 || b.is_zero() {
        return Ok(BivariatePolynomial::zero(0, 0));
    }
    // rows[i] is the coefficient of s^i as a polynomial in t (length d + 2)
    let mut h = BivariatePolynomial::zero(d - 1, d);
    let mut carry = vec![0.0; d + 2];
    for i in (1..=d).rev() {
        // h_{i-1}(t) = b_i(t) + t * h_i(t)
        let mut next = vec![0.0; d + 2];
        for j in 0..=d {
            next[j] += b.coeff(i, j);
        }
        for j in 0..=d {
            next[j + 1] += carry[j];
        }
        for j in 0..=d {
            *h.coeff_mut(i - 1, j) = next[j];
        }
        carry = next;
    }
    // The quotient has degree d - 1 in t as well; the last column is the
    // (vanishing) overflow of the recursion.
    Ok(BivariatePolynomial::from_fn(d - 1, d - 1, |i, j| h.coeff(i, j)))
}
