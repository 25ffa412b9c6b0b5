//! Self-linking numbers of real rational algebraic links in projective 3-space.

pub mod config;
pub mod curve;
pub mod error;
pub mod harness;
pub mod io;
pub mod poly;
pub mod projection;
pub mod writhe;

pub use config::{Config, Tolerances};
pub use error::{Error, Result};
