//! Rational links in real projective 3-space and the operations that act on them.

mod sphere;
mod validate;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::RealPolynomial;

pub use sphere::{stereographic_from_sphere, SphereCurve};
pub use validate::{validate, ValidationIssue, ValidationReport, DEFAULT_VALIDATION_TOL};

/// Index of the coordinate negated by [`mirror`].
pub const MIRROR_COORDINATE: usize = 3;

/// A component `[f0(t) : f1(t) : f2(t) : f3(t)]` parametrized by the projective line.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalComponent {
    coords: [RealPolynomial; 4],
}

impl RationalComponent {
    pub fn new(coords: [RealPolynomial; 4]) -> Self {
        Self { coords }
    }

    pub fn from_coeffs(w: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Self {
        Self::new([w, x, y, z].map(|c| RealPolynomial::new(c.to_vec())))
    }

    pub fn coords(&self) -> &[RealPolynomial; 4] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RealPolynomial {
        &self.coords[i]
    }

    /// Common degree of the homogeneous parametrization.
    pub fn degree(&self) -> usize {
        self.coords.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    /// Coefficients of `t^k` across the four coordinates.
    pub fn coeff_vector(&self, k: usize) -> Vector4<f64> {
        Vector4::from_fn(|i, _| self.coords[i].coeff(k))
    }

    pub fn eval(&self, t: f64) -> Vector4<f64> {
        Vector4::from_fn(|i, _| self.coords[i].eval(t))
    }

    pub fn eval_complex(&self, t: Complex64) -> Vector4<Complex64> {
        Vector4::from_fn(|i, _| self.coords[i].eval_complex(t))
    }

    /// Point and velocity lifts at a complex parameter.
    pub fn eval_with_derivative(&self, t: Complex64) -> (Vector4<Complex64>, Vector4<Complex64>) {
        let pairs = self.coords.clone().map(|p| p.eval_with_derivative(t));
        (Vector4::from_fn(|i, _| pairs[i].0), Vector4::from_fn(|i, _| pairs[i].1))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coords.clone().map(|p| p.derivative()))
    }

    /// Applies a linear map to every coefficient vector.
    pub fn map_linear(&self, m: &Matrix4<f64>) -> Self {
        let d = self.degree();
        let cols: Vec<Vector4<f64>> = (0..=d).map(|k| m * self.coeff_vector(k)).collect();
        Self::new(std::array::from_fn(|i| RealPolynomial::new(cols.iter().map(|v| v[i]).collect())))
    }

    /// `t^d f(1/t)` with `d` the common degree; the parameter at infinity moves to zero.
    pub fn reversed(&self) -> Self {
        let d = self.degree();
        Self::new(self.coords.clone().map(|p| p.reversed(d)))
    }

    /// Largest coefficient over all four coordinates.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, p| m.max(p.max_abs_coeff()))
    }
}

/// A nonempty list of components.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLink {
    components: Vec<RationalComponent>,
}

impl RationalLink {
    pub fn new(components: Vec<RationalComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("a link needs at least one component".into()));
        }
        Ok(Self { components })
    }

    pub fn knot(component: RationalComponent) -> Self {
        Self { components: vec![component] }
    }

    pub fn components(&self) -> &[RationalComponent] {
        &self.components
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree()).collect()
    }

    fn map_components(&self, f: impl Fn(&RationalComponent) -> RationalComponent) -> Self {
        Self { components: self.components.iter().map(f).collect() }
    }
}

/// An invertible real 4x4 matrix acting on homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveTransform {
    m: Matrix4<f64>,
}

impl ProjectiveTransform {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let det = m.determinant();
        let scale = m.abs().max().powi(4);
        if !(det.abs() > 1e-12 * scale) {
            return Err(Error::SingularTransform { det });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    /// The orientation-reversing involution negating one coordinate.
    pub fn reflection(coordinate: usize) -> Self {
        let mut m = Matrix4::identity();
        m[(coordinate, coordinate)] = -1.0;
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn det_sign(&self) -> i32 {
        if self.m.determinant() > 0.0 {
            1
        } else {
            -1
        }
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        Self { m: self.m * first.m }
    }

    pub fn apply_point(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.m * x
    }
}

/// Real fractional-linear change of parameter `t <- (a t + b) / (c t + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    m: Matrix2<f64>,
}

impl Mobius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Matrix2::new(a, b, c, d);
        let det = m.determinant();
        if !(det.abs() > 1e-12 * m.abs().max().powi(2)) {
            return Err(Error::SingularMobius);
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix2::identity() }
    }

    /// Rotation of the parameter circle by `theta`; well conditioned for any angle.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { m: Matrix2::new(c, s, -s, c) }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    /// Image of a parameter; `None` at the pole.
    pub fn apply(&self, u: Complex64) -> Option<Complex64> {
        let den = u * self.m[(1, 0)] + self.m[(1, 1)];
        if den.norm() == 0.0 {
            return None;
        }
        Some((u * self.m[(0, 0)] + self.m[(0, 1)]) / den)
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self { m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) }
    }

    /// `t <- sigma t`.
    pub fn scaling(sigma: f64) -> Self {
        Self { m: Matrix2::new(sigma, 0.0, 0.0, 1.0) }
    }

    /// The map `u -> self(first(u))`.
    pub fn compose(&self, first: &Mobius) -> Self {
        Self { m: self.m * first.m }
    }

    /// Scaling `t <- sigma t` that levels the coefficient vectors of `comp`:
    /// `sigma` undoes the least-squares slope of `log |c_k|` against `k`.
    pub fn leveling(comp: &RationalComponent) -> Self {
        let pts: Vec<(f64, f64)> = (0..=comp.degree())
            .filter_map(|k| {
                let n = comp.coeff_vector(k).norm();
                (n > 0.0).then(|| (k as f64, n.ln()))
            })
            .collect();
        if pts.len() < 2 {
            return Self::identity();
        }
        let m = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        Self::scaling((-sxy / sxx).exp())
    }

    /// Affine change of parameter that moves the conformal barycenter of the
    /// zeros of `|f(t)|^2` in the upper half plane to `i`, after [`Self::leveling`].
    /// The zeros move with the parameter, so the result does not depend on how
    /// `comp` was parametrized beyond a rotation about `i`.
    pub fn balancing(comp: &RationalComponent) -> Self {
        let level = Self::leveling(comp);
        let f = reparametrize(comp, &level);
        let norm2 = f.coords().iter().fold(RealPolynomial::zero(), |acc, p| &acc + &(p * p));
        let coeffs: Vec<Complex64> = norm2.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let i = Complex64::new(0.0, 1.0);
        // Cayley images in the unit disk; real zeros cannot occur for a valid curve
        let disk: Vec<Complex64> = crate::poly::complex_roots(&coeffs)
            .into_iter()
            .filter(|z| z.is_finite())
            .map(|z| if z.im < 0.0 { z.conj() } else { z })
            .map(|z| (z - i) / (z + i))
            .filter(|p| p.norm() < 1.0)
            .collect();
        let Some(b) = conformal_barycenter(&disk) else { return level };
        let z = i * (Complex64::new(1.0, 0.0) + b) / (Complex64::new(1.0, 0.0) - b);
        if !(z.im > 0.0) || !z.is_finite() {
            return level;
        }
        level.compose(&Self { m: Matrix2::new(z.im, z.re, 0.0, 1.0) })
    }
}

/// Point `a` of the disk with `sum (p - a) / (1 - conj(a) p) = 0`, by damped
/// fixed-point steps.
fn conformal_barycenter(points: &[Complex64]) -> Option<Complex64> {
    if points.is_empty() {
        return None;
    }
    let one = Complex64::new(1.0, 0.0);
    let mut a = Complex64::new(0.0, 0.0);
    for _ in 0..200 {
        let mean = points.iter().map(|&p| (p - a) / (one - a.conj() * p)).sum::<Complex64>() / points.len() as f64;
        if mean.norm() < 1e-10 {
            break;
        }
        let step = mean * 0.5;
        a = (step + a) / (one + a.conj() * step);
        if !(a.norm() < 1.0) {
            return None;
        }
    }
    Some(a)
}

/// Negates the last homogeneous coordinate of every component.
pub fn mirror(link: &RationalLink) -> RationalLink {
    let r = ProjectiveTransform::reflection(MIRROR_COORDINATE);
    link.map_components(|c| c.map_linear(r.matrix()))
}

/// The mirror image of a point under [`mirror`].
pub fn mirror_point(x: &Vector4<f64>) -> Vector4<f64> {
    ProjectiveTransform::reflection(MIRROR_COORDINATE).apply_point(x)
}

pub fn transform(link: &RationalLink, t: &ProjectiveTransform) -> RationalLink {
    link.map_components(|c| c.map_linear(t.matrix()))
}

/// Substitutes `t <- (a t + b)/(c t + d)` and clears the denominator at the
/// component's degree: `sum_k f_k (a t + b)^k (c t + d)^(deg - k)`.
pub fn reparametrize(comp: &RationalComponent, mobius: &Mobius) -> RationalComponent {
    let d = comp.degree();
    let m = mobius.matrix();
    let num = RealPolynomial::new(vec![m[(0, 1)], m[(0, 0)]]);
    let den = RealPolynomial::new(vec![m[(1, 1)], m[(1, 0)]]);
    let num_pows: Vec<RealPolynomial> = (0..=d as u32).map(|k| num.pow(k)).collect();
    let den_pows: Vec<RealPolynomial> = (0..=d as u32).map(|k| den.pow(k)).collect();
    let coords = comp.coords().clone().map(|p| {
        let mut acc = RealPolynomial::zero();
        for (k, &c) in p.coeffs().iter().enumerate() {
            if c != 0.0 {
                acc = &acc + &(&num_pows[k] * &den_pows[d - k]).scale(c);
            }
        }
        acc
    });
    RationalComponent::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twisted_cubic() -> RationalComponent {
        RationalComponent::from_coeffs(&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 1.0])
    }

    #[test]
    fn mirror_is_an_involution() {
        let link = RationalLink::knot(twisted_cubic());
        let m = mirror(&link);
        assert_eq!(m.components()[0].coord(3).coeffs(), &[0.0, 0.0, 0.0, -1.0]);
        assert_eq!(mirror(&m), link);
    }

    #[test]
    fn shift_reparametrization() {
        let shifted = reparametrize(&twisted_cubic(), &Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap());
        assert_eq!(shifted.coord(0).coeffs(), &[1.0]);
        assert_eq!(shifted.coord(1).coeffs(), &[1.0, 1.0]);
        assert_eq!(shifted.coord(2).coeffs(), &[1.0, 2.0, 1.0]);
        assert_eq!(shifted.coord(3).coeffs(), &[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(reparametrize(&twisted_cubic(), &Mobius::identity()), twisted_cubic());
    }

    #[test]
    fn reparametrization_keeps_the_image() {
        let m = Mobius::new(2.0, -1.0, 0.5, 3.0).unwrap();
        let f = twisted_cubic();
        let g = reparametrize(&f, &m);
        for u in [-2.0, -0.3, 0.7, 4.0] {
            let t = m.apply(Complex64::new(u, 0.0)).unwrap().re;
            let a = f.eval(t);
            let b = g.eval(u);
            let cross = a * b[0] - b * a[0];
            assert!(cross.norm() < 1e-10 * b.norm());
        }
        let back = m.inverse().apply(m.apply(Complex64::new(0.3, 0.2)).unwrap()).unwrap();
        assert!((back - Complex64::new(0.3, 0.2)).norm() < 1e-14);
    }

    #[test]
    fn singular_maps_are_rejected() {
        assert!(matches!(Mobius::new(1.0, 2.0, 2.0, 4.0), Err(Error::SingularMobius)));
        let mut m = Matrix4::identity();
        m[(3, 3)] = 0.0;
        assert!(matches!(ProjectiveTransform::new(m), Err(Error::SingularTransform { .. })));
        assert!(RationalLink::new(vec![]).is_err());
    }

    #[test]
    fn transforms_compose_as_a_group_action() {
        let a = ProjectiveTransform::new(Matrix4::new(
            1.0, 2.0, 0.0, 0.5, 0.0, 1.0, -1.0, 0.0, 0.3, 0.0, 1.0, 0.0, 0.0, 0.0, 0.2, 1.0,
        ))
        .unwrap();
        let b = ProjectiveTransform::reflection(1);
        let link = RationalLink::knot(twisted_cubic());
        let lhs = transform(&transform(&link, &a), &b);
        let rhs = transform(&link, &b.compose(&a));
        for (p, q) in lhs.components()[0].coords().iter().zip(rhs.components()[0].coords()) {
            for k in 0..4 {
                assert!((p.coeff(k) - q.coeff(k)).abs() < 1e-14);
            }
        }
        assert_eq!(b.compose(&a).det_sign(), -a.det_sign());
    }
}
