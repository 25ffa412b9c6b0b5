//! Dense real polynomials, bivariate polynomials and the numerical
//! elimination primitives used to solve for double points.

mod bivariate;
mod common;
mod resultant;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bivariate::{divide_out_diagonal, BivariatePolynomial};
pub use common::{common_roots, div_rem, joint_residual, CommonRoot};
pub use resultant::{interpolate_on_circle, resultant_at, resultant_eliminate, sylvester_determinant};
pub use roots::{complex_roots, pair_conjugates, roots, RootSet, DEFAULT_ROOT_TOL};

/// Dense univariate polynomial with real coefficients in ascending powers.
///
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case no coefficients are stored.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for RealPolynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<RealPolynomial> for Vec<f64> {
    fn from(p: RealPolynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealPolynomial{:?}", self.coeffs)
    }
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Self::constant(1.0), |acc, &r| &acc * &Self::new(vec![-r, 1.0]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Scaled so that the largest coefficient has absolute value 1.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs_coeff();
        if m == 0.0 {
            return self.clone();
        }
        self.scale(1.0 / m)
    }

    /// Drops leading coefficients below `rel_tol` times the largest one.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at a complex argument.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    /// `sum |c_i| max(1,|z|)^i`: the magnitude against which residuals at `z` are measured.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm().max(1.0);
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// `t^d p(1/t)`; requires `d >= degree`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut c = vec![0.0; d + 1];
        for (i, &v) in self.coeffs.iter().enumerate() {
            c[d - i] = v;
        }
        Self::new(c)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1.0), |acc, _| &acc * self)
    }
}

impl Add for &RealPolynomial {
    type Output = RealPolynomial;
    fn add(self, rhs: Self) -> RealPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RealPolynomial {
    type Output = RealPolynomial;
    fn sub(self, rhs: Self) -> RealPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RealPolynomial {
    type Output = RealPolynomial;
    fn mul(self, rhs: Self) -> RealPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RealPolynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RealPolynomial::new(c)
    }
}

impl Neg for &RealPolynomial {
    type Output = RealPolynomial;
    fn neg(self) -> RealPolynomial {
        self.scale(-1.0)
    }
}

/// Horner evaluation of a polynomial with complex coefficients.
pub fn eval_complex_coeffs(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}
