//! Projection of a link from a real center to the plane, double points of the
//! projected complex curve and the genericity checks that make them usable.

mod center;
mod genericity;
pub(crate) mod solver;

use nalgebra::{Matrix3x4, Matrix4x3, Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Tolerances};
use crate::curve::{reparametrize, Mobius, RationalComponent, RationalLink};
use crate::error::{Error, Result};
use crate::poly::RealPolynomial;

pub use center::{random_center, random_unit_vector};
pub use genericity::{genericity_check, GenericityFailure, GenericityVerdict};
pub use solver::SolverFailure;

/// Projection from `c` onto the plane `x_p = 0`, `p` the largest entry of `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneProjection {
    center: Vector4<f64>,
    pivot: usize,
    m: Matrix3x4<f64>,
    e: Matrix4x3<f64>,
}

/// Builds `M` with `M c = 0` and its right inverse `E` with `M E = I`.
///
/// The rows of `M` are `e_j - (c_j / c_p) e_p` for `j != p` and the columns of
/// `E` are the unit vectors `e_j`, `j != p`, so the identity holds exactly.
pub fn projection_matrix(c: &Vector4<f64>) -> Result<PlaneProjection> {
    let norm = c.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Invalid("projection center must be a nonzero finite vector".into()));
    }
    let center = c / norm;
    let pivot = (0..4).max_by(|&i, &j| center[i].abs().total_cmp(&center[j].abs())).unwrap();
    let mut m = Matrix3x4::zeros();
    let mut e = Matrix4x3::zeros();
    for (row, j) in (0..4).filter(|&j| j != pivot).enumerate() {
        m[(row, j)] = 1.0;
        m[(row, pivot)] = -center[j] / center[pivot];
        e[(j, row)] = 1.0;
    }
    Ok(PlaneProjection { center, pivot, m, e })
}

impl PlaneProjection {
    pub fn center(&self) -> &Vector4<f64> {
        &self.center
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn m(&self) -> &Matrix3x4<f64> {
        &self.m
    }

    pub fn e(&self) -> &Matrix4x3<f64> {
        &self.e
    }

    pub fn project(&self, x: &Vector4<f64>) -> Vector3<f64> {
        self.m * x
    }

    pub fn project_complex(&self, x: &Vector4<Complex64>) -> Vector3<Complex64> {
        self.m.map(|v| Complex64::new(v, 0.0)) * x
    }

    pub fn embed(&self, y: &Vector3<f64>) -> Vector4<f64> {
        self.e * y
    }

    /// `g = M f` as three polynomials.
    pub fn project_component(&self, f: &RationalComponent) -> [RealPolynomial; 3] {
        std::array::from_fn(|row| {
            (0..4).fold(RealPolynomial::zero(), |acc, j| {
                let w = self.m[(row, j)];
                if w == 0.0 {
                    acc
                } else {
                    &acc + &f.coord(j).scale(w)
                }
            })
        })
    }
}

/// A component prepared for the solver: reparametrized by `mobius` and projected.
#[derive(Debug, Clone)]
pub struct ProjectedComponent {
    pub index: usize,
    pub degree: usize,
    /// Solver parameter `u` corresponds to the original parameter `mobius(u)`.
    pub mobius: Mobius,
    pub space: RationalComponent,
    pub plane: [RealPolynomial; 3],
}

impl ProjectedComponent {
    pub fn new(index: usize, f: &RationalComponent, mobius: Mobius, projection: &PlaneProjection) -> Self {
        let space = reparametrize(f, &mobius);
        let plane = projection.project_component(&space);
        Self { index, degree: f.degree(), mobius, space, plane }
    }

    pub fn plane_at(&self, u: Complex64) -> Vector3<Complex64> {
        Vector3::from_fn(|i, _| self.plane[i].eval_complex(u))
    }

    pub fn plane_with_derivative(&self, u: Complex64) -> (Vector3<Complex64>, Vector3<Complex64>) {
        let pairs: [(Complex64, Complex64); 3] = std::array::from_fn(|i| self.plane[i].eval_with_derivative(u));
        (Vector3::from_fn(|i, _| pairs[i].0), Vector3::from_fn(|i, _| pairs[i].1))
    }

    /// Original parameter of a solver parameter; infinite at the pole of the Möbius map.
    pub fn original_param(&self, u: Complex64) -> Complex64 {
        self.mobius.apply(u).unwrap_or(Complex64::new(f64::INFINITY, 0.0))
    }

    pub fn original_param_at_infinity(&self) -> Complex64 {
        let m = self.mobius.matrix();
        if m[(1, 0)] == 0.0 {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            Complex64::new(m[(0, 0)] / m[(1, 0)], 0.0)
        }
    }
}

/// Deterministic per-component parameter rotation derived from `seed`.
pub fn solver_mobius(seed: u64, component: usize) -> Mobius {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(component as u64 + 1));
    Mobius::rotation(rng.gen_range(0.0..std::f64::consts::PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum DoublePointKind {
    Crossing,
    Solitary,
    ImaginaryPair,
}

/// A double point of the projected complex curve.
#[derive(Debug, Clone)]
pub struct DoublePoint {
    pub components: (usize, usize),
    /// Parameters in the original parametrization of each component.
    pub params: (Complex64, Complex64),
    /// Parameters of the reparametrized components the solver worked with.
    pub solver_params: (Complex64, Complex64),
    pub kind: DoublePointKind,
    /// Unit image in the projection plane; real up to rounding unless the kind is `ImaginaryPair`.
    pub image: Vector3<Complex64>,
    pub residual: f64,
}

impl DoublePoint {
    pub fn is_self(&self) -> bool {
        self.components.0 == self.components.1
    }

    pub fn real_image(&self) -> Option<Vector3<f64>> {
        match self.kind {
            DoublePointKind::ImaginaryPair => None,
            _ => Some(self.image.map(|z| z.re)),
        }
    }
}

/// Rotates a complex vector by the unit scalar that makes it as real as
/// possible; returns the real part and the norm of the leftover imaginary part.
pub fn phase_normalize(v: &Vector3<Complex64>) -> (Vector3<f64>, f64) {
    let x = v.map(|z| z.re);
    let y = v.map(|z| z.im);
    // Im(e^{i phi} v) = sin(phi) x + cos(phi) y; minimize over (sin, cos).
    let g = nalgebra::Matrix2::new(x.dot(&x), x.dot(&y), x.dot(&y), y.dot(&y));
    let eig = g.symmetric_eigen();
    let k = if eig.eigenvalues[0] <= eig.eigenvalues[1] { 0 } else { 1 };
    let dir = eig.eigenvectors.column(k);
    let (sin, cos) = (dir[0], dir[1]);
    let real = x * cos - y * sin;
    (real, (x * sin + y * cos).norm())
}

/// Scales a vector to unit norm with its largest entry real and positive.
fn canonical_image(v: &Vector3<Complex64>) -> Vector3<Complex64> {
    let k = (0..3).max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm())).unwrap();
    let phase = v[k].conj() / v[k].norm();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z * phase / norm)
}

fn is_real(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= 0.5 * tol * (1.0 + z.norm())
}

fn classify(a: &ProjectedComponent, b: &ProjectedComponent, s: Complex64, t: Complex64, residual: f64, tol: &Tolerances) -> DoublePoint {
    let same = a.index == b.index;
    let (mut s, mut t) = (s, t);
    let kind = if is_real(s, tol.real_axis) && is_real(t, tol.real_axis) {
        s = Complex64::new(s.re, 0.0);
        t = Complex64::new(t.re, 0.0);
        if same && t.re < s.re {
            std::mem::swap(&mut s, &mut t);
        }
        DoublePointKind::Crossing
    } else if same && (s - t.conj()).norm() <= tol.real_axis * (1.0 + s.norm()) {
        if s.im < 0.0 {
            s = s.conj();
        }
        t = s.conj();
        DoublePointKind::Solitary
    } else {
        if same && (t.re, t.im) < (s.re, s.im) {
            std::mem::swap(&mut s, &mut t);
        }
        DoublePointKind::ImaginaryPair
    };
    let raw = a.plane_at(s);
    let image = match kind {
        DoublePointKind::ImaginaryPair => canonical_image(&raw),
        _ => {
            let (re, _) = phase_normalize(&raw);
            canonical_image(&re.map(|x| Complex64::new(x, 0.0)))
        }
    };
    DoublePoint {
        components: (a.index, b.index),
        params: (a.original_param(s), b.original_param(t)),
        solver_params: (s, t),
        kind,
        image,
        residual,
    }
}

fn map_failure(f: SolverFailure, what: &str) -> Error {
    match f {
        SolverFailure::NonGeneric(msg) => Error::NonGenericCenter(format!("{what}: {msg}")),
        SolverFailure::Coincident => Error::NonGenericCenter(format!("{what}: double points fill a curve")),
    }
}

/// Double points of one projected component; `(d-1)(d-2)/2` of them when the
/// projection is generic.
pub fn double_points_self(g: &ProjectedComponent, tol: &Tolerances) -> Result<Vec<DoublePoint>> {
    let pairs = solver::self_pairs(&g.plane, g.degree, tol).map_err(|f| map_failure(f, &format!("component {}", g.index)))?;
    Ok(pairs.into_iter().map(|p| classify(g, g, p.s, p.t, p.residual, tol)).collect())
}

/// Intersections of the projections of two distinct components; `d_A d_B` of them.
pub fn double_points_cross(ga: &ProjectedComponent, gb: &ProjectedComponent, tol: &Tolerances) -> Result<Vec<DoublePoint>> {
    let pairs = solver::cross_pairs(&ga.plane, ga.degree, &gb.plane, gb.degree, tol)
        .map_err(|f| map_failure(f, &format!("components {} and {}", ga.index, gb.index)))?;
    Ok(pairs.into_iter().map(|p| classify(ga, gb, p.s, p.t, p.residual, tol)).collect())
}

/// Counts of double points by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Census {
    pub crossings: usize,
    pub solitary: usize,
    pub imaginary_pairs: usize,
}

impl Census {
    pub fn of<'a>(points: impl IntoIterator<Item = &'a DoublePoint>) -> Self {
        let mut c = Census::default();
        for p in points {
            match p.kind {
                DoublePointKind::Crossing => c.crossings += 1,
                DoublePointKind::Solitary => c.solitary += 1,
                DoublePointKind::ImaginaryPair => c.imaginary_pairs += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.crossings + self.solitary + self.imaginary_pairs
    }
}

/// A projection whose double points have been found and checked.
#[derive(Debug, Clone)]
pub struct GenericProjection {
    pub projection: PlaneProjection,
    pub components: Vec<ProjectedComponent>,
    pub double_points: Vec<DoublePoint>,
}

impl GenericProjection {
    pub fn census(&self) -> Census {
        Census::of(&self.double_points)
    }

    /// Census restricted to double points of one component with itself.
    pub fn self_census(&self, component: usize) -> Census {
        Census::of(self.double_points.iter().filter(|p| p.components == (component, component)))
    }

    pub fn cross_census(&self, a: usize, b: usize) -> Census {
        Census::of(self.double_points.iter().filter(|p| p.components == (a, b)))
    }
}

/// Projects `link` from `center`, finds all double points and runs the
/// genericity check; any failure is reported as [`Error::NonGenericCenter`].
pub fn analyze_projection(link: &RationalLink, center: &Vector4<f64>, config: &Config) -> Result<GenericProjection> {
    let projection = projection_matrix(center)?;
    let tol = &config.tolerances;
    let components: Vec<ProjectedComponent> = link
        .components()
        .iter()
        .enumerate()
        .map(|(i, f)| ProjectedComponent::new(i, f, Mobius::balancing(f).compose(&solver_mobius(config.seed, i)), &projection))
        .collect();
    let mut points = Vec::new();
    for (i, a) in components.iter().enumerate() {
        points.extend(double_points_self(a, tol)?);
        for b in &components[i + 1..] {
            points.extend(double_points_cross(a, b, tol)?);
        }
    }
    points.sort_by(|p, q| {
        (p.components, p.kind)
            .cmp(&(q.components, q.kind))
            .then(p.solver_params.0.re.total_cmp(&q.solver_params.0.re))
            .then(p.solver_params.0.im.total_cmp(&q.solver_params.0.im))
            .then(p.solver_params.1.re.total_cmp(&q.solver_params.1.re))
    });
    let result = GenericProjection { projection, components, double_points: points };
    let verdict = genericity_check(&result, tol.genericity);
    if !verdict.passed() {
        return Err(Error::NonGenericCenter(verdict.summary()));
    }
    Ok(result)
}
