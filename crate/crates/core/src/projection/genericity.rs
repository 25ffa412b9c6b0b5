use std::fmt;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{DoublePointKind, GenericProjection, ProjectedComponent};
use crate::poly::{common_roots, joint_residual, RealPolynomial};

#[derive(Debug, Clone, PartialEq)]
pub enum GenericityFailure {
    /// The projected branch is singular at this (original) parameter.
    Cusp { component: usize, param: Complex64 },
    /// Two double points share their image.
    TriplePoint { first: usize, second: usize },
    /// The branches through a double point have the same tangent line.
    TangentCoincidence { point: usize },
    CountMismatch { components: (usize, usize), found: usize, expected: usize },
    /// An imaginary double point whose conjugate is not in the list.
    MissingConjugate { point: usize },
}

impl fmt::Display for GenericityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cusp { component, param } => write!(f, "cusp of component {component} at t = {param:.6}"),
            Self::TriplePoint { first, second } => write!(f, "double points {first} and {second} share an image"),
            Self::TangentCoincidence { point } => write!(f, "tangent branches at double point {point}"),
            Self::CountMismatch { components, found, expected } => {
                write!(f, "components {:?}: {found} double points, expected {expected}", components)
            }
            Self::MissingConjugate { point } => write!(f, "double point {point} has no conjugate partner"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenericityVerdict {
    pub failures: Vec<GenericityFailure>,
}

impl GenericityVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            return "generic".into();
        }
        self.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
    }
}

fn cross_with_derivative(g: &[RealPolynomial; 3]) -> [RealPolynomial; 3] {
    let dg = g.clone().map(|p| p.derivative());
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &(&g[j] * &dg[k]) - &(&g[k] * &dg[j])
    })
}

/// Joint residual small enough to need no geometric confirmation.
const CERTAIN: f64 = 1e-12;

/// Sine of the angle between `g(z)` and `g'(z)`; zero at a singular point of the image.
fn tangent_sine(g: &[RealPolynomial; 3], z: Complex64) -> f64 {
    let v = Vector3::from_fn(|i, _| g[i].eval_complex(z));
    let dv = Vector3::from_fn(|i, _| g[i].derivative().eval_complex(z));
    let (nv, ndv) = (cnorm(&v), cnorm(&dv));
    if !(nv > 0.0) || !(ndv > 0.0) {
        return 0.0;
    }
    let cross = Vector3::new(v[1] * dv[2] - v[2] * dv[1], v[2] * dv[0] - v[0] * dv[2], v[0] * dv[1] - v[1] * dv[0]);
    cnorm(&cross) / (nv * ndv)
}

fn cusps(c: &ProjectedComponent, tol: f64) -> Vec<GenericityFailure> {
    let w = cross_with_derivative(&c.plane);
    let mut out = Vec::new();
    // candidates come from the residual test and are confirmed geometrically,
    // which does not depend on how the parameter is scaled
    match common_roots(&w, tol) {
        None => out.push(GenericityFailure::Cusp { component: c.index, param: Complex64::new(f64::NAN, f64::NAN) }),
        Some(found) => {
            for r in found.into_iter().filter(|r| r.residual <= CERTAIN || tangent_sine(&c.plane, r.root) <= tol) {
                out.push(GenericityFailure::Cusp { component: c.index, param: c.original_param(r.root) });
            }
        }
    }
    // the parameter at infinity, through the reversed parametrization
    let rev: [RealPolynomial; 3] = c.plane.clone().map(|p| p.reversed(c.degree));
    let wr = cross_with_derivative(&rev);
    let zero = Complex64::new(0.0, 0.0);
    let at_infinity = joint_residual(&wr, zero);
    if c.degree > 0 && at_infinity <= tol && (at_infinity <= CERTAIN || tangent_sine(&rev, zero) <= tol) {
        out.push(GenericityFailure::Cusp { component: c.index, param: c.original_param_at_infinity() });
    }
    out
}

/// `sqrt(1 - |<a, b>|^2)` for unit vectors: the sine of the angle between the lines.
fn line_distance(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> f64 {
    let inner: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    (1.0 - inner.norm_sqr()).max(0.0).sqrt()
}

fn det3(a: &Vector3<Complex64>, b: &Vector3<Complex64>, c: &Vector3<Complex64>) -> Complex64 {
    Matrix3::from_columns(&[*a, *b, *c]).determinant()
}

fn cnorm(v: &Vector3<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Checks that the projection is an immersion of the complex curve with
/// only ordinary double points and that the double-point list is complete.
pub fn genericity_check(proj: &GenericProjection, tol: f64) -> GenericityVerdict {
    let mut failures = Vec::new();
    for c in &proj.components {
        failures.extend(cusps(c, tol));
    }
    let points = &proj.double_points;
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if line_distance(&p.image, &q.image) <= tol {
                failures.push(GenericityFailure::TriplePoint { first: i, second: j });
            }
        }
        let a = &proj.components[p.components.0];
        let b = &proj.components[p.components.1];
        let (gs, dgs) = a.plane_with_derivative(p.solver_params.0);
        let (_, dgt) = b.plane_with_derivative(p.solver_params.1);
        let scale = cnorm(&gs) * cnorm(&dgs) * cnorm(&dgt);
        if !(det3(&gs, &dgs, &dgt).norm() > tol * scale) {
            failures.push(GenericityFailure::TangentCoincidence { point: i });
        }
        if p.kind == DoublePointKind::ImaginaryPair {
            let (s, t) = p.solver_params;
            let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-6 * (1.0 + x.norm());
            let partner = points.iter().any(|q| {
                q.components == p.components
                    && ((close(q.solver_params.0, s.conj()) && close(q.solver_params.1, t.conj()))
                        || (p.is_self() && close(q.solver_params.0, t.conj()) && close(q.solver_params.1, s.conj())))
            });
            if !partner {
                failures.push(GenericityFailure::MissingConjugate { point: i });
            }
        }
    }
    let n = proj.components.len();
    for a in 0..n {
        for b in a..n {
            let (da, db) = (proj.components[a].degree, proj.components[b].degree);
            let expected = if a == b { (da.max(1) - 1) * (da.max(2) - 2) / 2 } else { da * db };
            let found = points.iter().filter(|p| p.components == (a, b)).count();
            if found != expected {
                failures.push(GenericityFailure::CountMismatch { components: (a, b), found, expected });
            }
        }
    }
    GenericityVerdict { failures }
}
