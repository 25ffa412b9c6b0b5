use nalgebra::{Matrix4, Matrix4x3, Vector3, Vector4};

/// The affine chart `{phi != 0}` of real projective 3-space with coordinates
/// `B^T x / phi(x)`, `B` an orthonormal basis of `ker phi`.
///
/// Projective space is oriented so that a frame `u1, u2, u3` at `[a]` is
/// positive when `det[a, u1, u2, u3] > 0`; on the chart `x0 != 0` with
/// coordinates `x1/x0, x2/x0, x3/x0` this is the standard orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChart {
    functional: Vector4<f64>,
    basis: Matrix4x3<f64>,
    sign: i32,
}

impl AffineChart {
    /// The chart `x_k != 0` with the remaining coordinates in increasing order.
    pub fn standard(k: usize) -> Self {
        let mut functional = Vector4::zeros();
        functional[k] = 1.0;
        let mut basis = Matrix4x3::zeros();
        for (col, j) in (0..4).filter(|&j| j != k).enumerate() {
            basis[(j, col)] = 1.0;
        }
        Self { functional, basis, sign: if k % 2 == 0 { 1 } else { -1 } }
    }

    pub fn from_functional(phi: &Vector4<f64>) -> Self {
        let phi = phi.normalize();
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &j| phi[i].abs().total_cmp(&phi[j].abs()));
        let mut cols: Vec<Vector4<f64>> = Vec::with_capacity(3);
        for &i in &order {
            let mut v = Vector4::zeros();
            v[i] = 1.0;
            v -= phi * phi.dot(&v);
            for b in &cols {
                v -= b * b.dot(&v);
            }
            if v.norm() > 0.3 && cols.len() < 3 {
                cols.push(v.normalize());
            }
        }
        let basis = Matrix4x3::from_columns(&cols);
        let det = Matrix4::from_columns(&[phi, cols[0], cols[1], cols[2]]).determinant();
        Self { functional: phi, basis, sign: if det > 0.0 { 1 } else { -1 } }
    }

    pub fn functional(&self) -> &Vector4<f64> {
        &self.functional
    }

    /// Orientation of the coordinate frame relative to projective space.
    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn value(&self, x: &Vector4<f64>) -> f64 {
        self.functional.dot(x)
    }

    pub fn contains(&self, x: &Vector4<f64>, tol: f64) -> bool {
        self.value(x).abs() > tol * x.norm()
    }

    pub fn point(&self, x: &Vector4<f64>) -> Vector3<f64> {
        self.basis.transpose() * x / self.value(x)
    }

    /// Chart image of the tangent vector represented by `u` at `[x]`.
    pub fn tangent(&self, x: &Vector4<f64>, u: &Vector4<f64>) -> Vector3<f64> {
        let px = self.value(x);
        self.basis.transpose() * (u * px - x * self.value(u)) / (px * px)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orientation of a chart frame computed through lifts.
    fn lifted_sign(chart: &AffineChart, x: &Vector4<f64>, us: [Vector4<f64>; 3]) -> f64 {
        let chart_det = Matrix3::from_columns(&us.map(|u| chart.tangent(x, &u))).determinant();
        chart_det * chart.sign() as f64
    }

    use nalgebra::Matrix3;

    #[test]
    fn standard_charts_agree_with_the_lift_orientation() {
        let x = Vector4::new(0.7, -0.4, 1.1, 0.9);
        let us = [Vector4::new(0.1, 1.0, 0.2, -0.3), Vector4::new(0.0, 0.3, 1.0, 0.5), Vector4::new(-0.2, 0.1, 0.4, 1.0)];
        let lift = Matrix4::from_columns(&[x, us[0], us[1], us[2]]).determinant();
        for k in 0..4 {
            let s = lifted_sign(&AffineChart::standard(k), &x, us);
            assert_eq!(s > 0.0, lift > 0.0, "chart {k}");
        }
        let f = AffineChart::from_functional(&Vector4::new(0.3, 0.2, -0.5, 0.8));
        assert_eq!(lifted_sign(&f, &x, us) > 0.0, lift > 0.0);
        assert_eq!(lifted_sign(&f, &(-x), us.map(|u| -u)) > 0.0, lift > 0.0);
    }

    #[test]
    fn chart_points_are_scale_invariant() {
        let c = AffineChart::from_functional(&Vector4::new(1.0, 1.0, 0.0, -1.0));
        let x = Vector4::new(0.2, 0.9, 0.4, -0.6);
        assert!((c.point(&x) - c.point(&(x * -3.0))).norm() < 1e-14);
        assert_eq!(AffineChart::standard(0).point(&Vector4::new(2.0, 2.0, 4.0, 6.0)), Vector3::new(1.0, 2.0, 3.0));
    }
}
