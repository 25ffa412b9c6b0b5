use thiserror::Error;

use crate::curve::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("root finding is ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("leading coefficient in the eliminated variable vanishes identically")]
    DegenerateLeadingCoefficient,

    #[error("bivariate polynomial is not antisymmetric (deviation {deviation:.3e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("projective transform is singular (|det| = {det:.3e})")]
    SingularTransform { det: f64 },

    #[error("Möbius reparametrization is singular")]
    SingularMobius,

    #[error("stereographic pole lies on the curve at t = {param}")]
    PoleOnCurve { param: f64 },

    #[error("curve is not on the unit sphere (deviation {deviation:.3e})")]
    NotOnQuadric { deviation: f64 },

    #[error("projection center is not generic: {0}")]
    NonGenericCenter(String),

    #[error("no generic projection center found after {attempts} attempts")]
    ExhaustedRetries { attempts: usize },

    #[error("degenerate writhe frame: {0}")]
    DegenerateFrame(String),

    #[error("invalid link: {}", .0.summary())]
    InvalidLink(Box<ValidationReport>),

    #[error("{0}")]
    Invalid(String),
}
