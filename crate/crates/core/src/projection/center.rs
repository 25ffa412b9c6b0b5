use nalgebra::Vector4;
use rand::Rng;

use super::{analyze_projection, GenericProjection};
use crate::config::Config;
use crate::curve::RationalLink;
use crate::error::{Error, Result};

/// Uniformly distributed unit vector in R^4.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector4<f64> {
    loop {
        let v = Vector4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.05 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Samples centers until one gives a generic projection.
///
/// Fails with [`Error::ExhaustedRetries`] after `config.max_center_attempts`
/// rejected samples.
pub fn random_center<R: Rng + ?Sized>(rng: &mut R, link: &RationalLink, config: &Config) -> Result<GenericProjection> {
    for _ in 0..config.max_center_attempts {
        let c = random_unit_vector(rng);
        match analyze_projection(link, &c, config) {
            Ok(p) => return Ok(p),
            Err(Error::NonGenericCenter(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ExhaustedRetries { attempts: config.max_center_attempts })
}
