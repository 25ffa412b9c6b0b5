use nalgebra::{Matrix4, Vector4};

use super::{validate, RationalComponent, RationalLink, DEFAULT_VALIDATION_TOL};
use crate::error::{Error, Result};
use crate::poly::{common_roots, div_rem, RealPolynomial};

/// A rational curve `t -> X(t) / W(t)` in R^4 meant to lie on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCurve {
    pub denominator: RealPolynomial,
    pub coords: [RealPolynomial; 4],
}

impl SphereCurve {
    pub fn new(denominator: RealPolynomial, coords: [RealPolynomial; 4]) -> Self {
        Self { denominator, coords }
    }

    /// Largest coefficient of `sum X_i^2 - W^2`, relative to the largest coefficient of `W^2`.
    pub fn quadric_deviation(&self) -> f64 {
        let w2 = &self.denominator * &self.denominator;
        let sum = self.coords.iter().fold(RealPolynomial::zero(), |acc, x| &acc + &(x * x));
        let scale = w2.max_abs_coeff().max(sum.max_abs_coeff());
        if scale == 0.0 {
            return f64::INFINITY;
        }
        (&sum - &w2).max_abs_coeff() / scale
    }
}

/// Orthonormal basis `b1, b2, b3` of the complement of a unit vector with
/// `det[b1, b2, b3, p] > 0`.
fn complement_basis(p: &Vector4<f64>) -> [Vector4<f64>; 3] {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs()));
    let mut basis: Vec<Vector4<f64>> = vec![*p];
    for &i in &order {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 0.3 && basis.len() < 4 {
            basis.push(v.normalize());
        }
    }
    let mut out = [basis[1], basis[2], basis[3]];
    if Matrix4::from_columns(&[out[0], out[1], out[2], *p]).determinant() < 0.0 {
        out[2] = -out[2];
    }
    out
}

/// Image of a spherical link under stereographic projection from `pole`.
///
/// A point `x` of the sphere goes to `[1 - p.x : b1.x : b2.x : b3.x]` where
/// `b1, b2, b3` is a positively oriented orthonormal frame of the tangent
/// space at the pole. Complex parameters landing on the pole would be base
/// points of the image and are divided out; real ones are an error.
pub fn stereographic_from_sphere(curves: &[SphereCurve], pole: &Vector4<f64>, tol: f64) -> Result<RationalLink> {
    if (pole.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("pole has norm {}, expected a point of the unit sphere", pole.norm())));
    }
    let b = complement_basis(pole);
    let mut components = Vec::with_capacity(curves.len());
    for curve in curves {
        let deviation = curve.quadric_deviation();
        if !(deviation <= tol) {
            return Err(Error::NotOnQuadric { deviation });
        }
        let dot = |v: &Vector4<f64>| {
            curve.coords.iter().enumerate().fold(RealPolynomial::zero(), |acc, (i, x)| &acc + &x.scale(v[i]))
        };
        let mut image = [&curve.denominator - &dot(pole), dot(&b[0]), dot(&b[1]), dot(&b[2])];
        let top = image.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let sphere_degree = curve
            .coords
            .iter()
            .chain(std::iter::once(&curve.denominator))
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0);
        if top < sphere_degree {
            return Err(Error::PoleOnCurve { param: f64::INFINITY });
        }
        let common = common_roots(&image, 1e-8).ok_or(Error::PoleOnCurve { param: f64::NAN })?;
        for root in common {
            let z = root.root;
            let factor = if z.im.abs() <= 1e-8 * (1.0 + z.norm()) {
                return Err(Error::PoleOnCurve { param: z.re });
            } else if z.im > 0.0 {
                RealPolynomial::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0])
            } else {
                continue;
            };
            image = image.map(|p| div_rem(&p, &factor).0);
        }
        components.push(RationalComponent::new(image));
    }
    let link = RationalLink::new(components)?;
    let report = validate(&link, DEFAULT_VALIDATION_TOL);
    if !report.is_valid() {
        return Err(Error::InvalidLink(Box::new(report)));
    }
    Ok(link)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> RealPolynomial {
        RealPolynomial::new(c.to_vec())
    }

    pub(crate) fn great_circle() -> SphereCurve {
        SphereCurve::new(
            poly(&[1.0, 0.0, 1.0]),
            [poly(&[1.0, 0.0, -1.0]), poly(&[0.0, 2.0]), RealPolynomial::zero(), RealPolynomial::zero()],
        )
    }

    #[test]
    fn complement_basis_is_oriented() {
        for p in [Vector4::new(0.0, 0.0, 0.0, 1.0), Vector4::new(0.5, -0.5, 0.5, 0.5), Vector4::new(-1.0, 0.0, 0.0, 0.0)] {
            let b = complement_basis(&p);
            let m = Matrix4::from_columns(&[b[0], b[1], b[2], p]);
            assert!((m.transpose() * m - Matrix4::identity()).norm() < 1e-12);
            assert!(m.determinant() > 0.0);
        }
    }

    #[test]
    fn great_circle_becomes_a_conic() {
        let link = stereographic_from_sphere(&[great_circle()], &Vector4::new(0.0, 0.0, 0.0, 1.0), 1e-9).unwrap();
        assert_eq!(link.degrees(), vec![2]);
    }

    #[test]
    fn off_quadric_input_is_rejected() {
        let mut c = great_circle();
        c.denominator = poly(&[1.0, 0.0, 2.0]);
        let err = stereographic_from_sphere(&[c], &Vector4::new(0.0, 0.0, 0.0, 1.0), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotOnQuadric { .. }));
    }

    #[test]
    fn pole_on_the_curve_is_rejected() {
        let err = stereographic_from_sphere(&[great_circle()], &Vector4::new(1.0, 0.0, 0.0, 0.0), 1e-9).unwrap_err();
        assert!(matches!(err, Error::PoleOnCurve { param } if param.abs() < 1e-8));
        let err = stereographic_from_sphere(&[great_circle()], &Vector4::new(-1.0, 0.0, 0.0, 0.0), 1e-9).unwrap_err();
        assert!(matches!(err, Error::PoleOnCurve { param } if param.is_infinite()));
    }
}
