use std::fmt;

use nalgebra::Vector4;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{reparametrize, Mobius, RationalComponent, RationalLink};
use crate::config::Tolerances;
use crate::poly::{common_roots, joint_residual, RealPolynomial};
use crate::projection::solver::{cross_pairs, self_pairs, SolverFailure};
use crate::projection::{projection_matrix, random_unit_vector, solver_mobius, ProjectedComponent};

pub const DEFAULT_VALIDATION_TOL: f64 = 1e-7;

const SEARCH_SEED: u64 = 0x5eed_0f_c0ffee;
const SEARCH_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    ZeroComponent { component: usize },
    /// All four coordinates are constant: the component is a point.
    ConstantComponent { component: usize },
    BasePoint { component: usize, param: Complex64 },
    NotImmersed { component: usize, param: Complex64 },
    /// Two parameters of one component map to the same point of complex projective space.
    SelfIntersection { component: usize, params: (Complex64, Complex64) },
    CrossIntersection { components: (usize, usize), params: (Complex64, Complex64) },
    /// The two components share a whole curve (or one component is multiply covered).
    Coincident { components: (usize, usize) },
    /// No projection was clean enough to decide embeddedness.
    Inconclusive { components: (usize, usize), reason: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroComponent { component } => write!(f, "component {component} is identically zero"),
            Self::ConstantComponent { component } => write!(f, "component {component} is constant"),
            Self::BasePoint { component, param } => write!(f, "base point of component {component} at t = {}", fmt_param(*param)),
            Self::NotImmersed { component, param } => {
                write!(f, "component {component} is not immersed at t = {}", fmt_param(*param))
            }
            Self::SelfIntersection { component, params } => write!(
                f,
                "component {component} meets itself at t = {} and t = {}",
                fmt_param(params.0),
                fmt_param(params.1)
            ),
            Self::CrossIntersection { components, params } => write!(
                f,
                "components {} and {} meet at t = {} and t = {}",
                components.0,
                components.1,
                fmt_param(params.0),
                fmt_param(params.1)
            ),
            Self::Coincident { components } => {
                if components.0 == components.1 {
                    write!(f, "component {} is not birationally parametrized", components.0)
                } else {
                    write!(f, "components {} and {} coincide", components.0, components.1)
                }
            }
            Self::Inconclusive { components, reason } => {
                write!(f, "could not certify components {:?}: {reason}", components)
            }
        }
    }
}

fn fmt_param(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.9}", z.re)
    } else {
        format!("{:.9}{:+.9}i", z.re, z.im)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            return "valid".into();
        }
        self.issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
    }
}

fn minors(f: &RationalComponent) -> Vec<RealPolynomial> {
    let df = f.derivative();
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(&(f.coord(i) * df.coord(j)) - &(f.coord(j) * df.coord(i)));
        }
    }
    out
}

fn local_issues(index: usize, f: &RationalComponent, tol: f64) -> Vec<ValidationIssue> {
    if f.is_zero() {
        return vec![ValidationIssue::ZeroComponent { component: index }];
    }
    if f.degree() == 0 {
        return vec![ValidationIssue::ConstantComponent { component: index }];
    }
    // work in a parameter with level coefficients and report original parameters
    let balance = Mobius::balancing(f);
    let original = |z: Complex64| balance.apply(z).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
    let f = &reparametrize(f, &balance);
    let mut out = Vec::new();
    for r in common_roots(f.coords(), tol).unwrap_or_default() {
        out.push(ValidationIssue::BasePoint { component: index, param: original(r.root) });
    }
    match common_roots(&minors(f), tol) {
        None => out.push(ValidationIssue::NotImmersed { component: index, param: Complex64::new(f64::NAN, 0.0) }),
        Some(found) => {
            // a loose residual only nominates a parameter; it must also be
            // singular geometrically or algebraically beyond doubt
            for r in found.into_iter().filter(|r| r.residual <= CERTAIN || tangent_sine(f, r.root) <= tol) {
                out.push(ValidationIssue::NotImmersed { component: index, param: original(r.root) });
            }
        }
    }
    if joint_residual(&minors(&f.reversed()), Complex64::new(0.0, 0.0)) <= tol {
        out.push(ValidationIssue::NotImmersed { component: index, param: Complex64::new(f64::INFINITY, 0.0) });
    }
    out
}

/// Joint residual small enough to need no geometric confirmation.
const CERTAIN: f64 = 1e-12;

/// Sine of the angle between `f(z)` and `f'(z)`.
fn tangent_sine(f: &RationalComponent, z: Complex64) -> f64 {
    let (x, dx) = f.eval_with_derivative(z);
    wedge_ratio(&x, &dx)
}

/// `|x ^ y| / (|x| |y|)` for complex 4-vectors.
fn wedge_ratio(x: &Vector4<Complex64>, y: &Vector4<Complex64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            acc += (x[i] * y[j] - x[j] * y[i]).norm_sqr();
        }
    }
    let n = |v: &Vector4<Complex64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    acc.sqrt() / (n(x) * n(y))
}

/// Searches for pairs of distinct parameters with the same image in complex
/// projective space: double points of a generic plane projection are found
/// and each is tested for an actual coincidence in space.
fn intersections(link: &RationalLink, a: usize, b: usize, tol: f64) -> Vec<ValidationIssue> {
    let solver_tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED ^ ((a as u64) << 32) ^ b as u64);
    let mut last = String::new();
    let mut coincident = 0;
    for attempt in 0..SEARCH_ATTEMPTS {
        let c = random_unit_vector(&mut rng);
        let Ok(projection) = projection_matrix(&c) else { continue };
        let seed = SEARCH_SEED.wrapping_add(attempt as u64);
        let prepared = |i: usize| {
            let f = &link.components()[i];
            ProjectedComponent::new(i, f, Mobius::balancing(f).compose(&solver_mobius(seed, i)), &projection)
        };
        let (pa, pb) = (prepared(a), prepared(b));
        let solved = if a == b {
            self_pairs(&pa.plane, pa.degree, &solver_tol)
        } else {
            cross_pairs(&pa.plane, pa.degree, &pb.plane, pb.degree, &solver_tol)
        };
        match solved {
            Ok(pairs) => {
                let mut out = Vec::new();
                for p in pairs {
                    let x = pa.space.eval_complex(p.s);
                    let y = pb.space.eval_complex(p.t);
                    if wedge_ratio(&x, &y) <= tol {
                        let params = (pa.original_param(p.s), pb.original_param(p.t));
                        out.push(if a == b {
                            ValidationIssue::SelfIntersection { component: a, params }
                        } else {
                            ValidationIssue::CrossIntersection { components: (a, b), params }
                        });
                    }
                }
                return out;
            }
            Err(SolverFailure::Coincident) => coincident += 1,
            Err(SolverFailure::NonGeneric(msg)) => last = msg,
        }
        // coincidence from two independent centers is not an accident of the projection
        if coincident >= 2 {
            return vec![ValidationIssue::Coincident { components: (a, b) }];
        }
    }
    vec![ValidationIssue::Inconclusive { components: (a, b), reason: last }]
}

/// Checks that every component is a base-point-free immersion and that the
/// complexified link has no double points.
pub fn validate(link: &RationalLink, tol: f64) -> ValidationReport {
    let mut issues = Vec::new();
    let mut clean = Vec::new();
    for (i, f) in link.components().iter().enumerate() {
        let local = local_issues(i, f, tol);
        if local.is_empty() {
            clean.push(i);
        }
        issues.extend(local);
    }
    for (k, &a) in clean.iter().enumerate() {
        if link.components()[a].degree() >= 3 {
            issues.extend(intersections(link, a, a, tol));
        }
        for &b in &clean[k + 1..] {
            issues.extend(intersections(link, a, b, tol));
        }
    }
    ValidationReport { issues }
}
