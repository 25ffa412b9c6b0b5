//! Curve files, JSON reports and SVG diagrams.

mod curve_file;
mod diagram;
mod report;

pub use curve_file::{emit_curve_file, parse_curve_file, read_curve_file, Coefficient, ComponentRecord, CurveFile, CurveFileError};
pub use diagram::{diagram, CrossingMark, DiagramDocument, SolitaryMark};
pub use report::{self_linking_json, PointRecord, ReportJson};
