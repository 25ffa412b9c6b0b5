use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{validate, RationalComponent, RationalLink, ValidationReport, DEFAULT_VALIDATION_TOL};
use crate::poly::RealPolynomial;

/// A coefficient written either as a JSON number or as a decimal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub w: Vec<Coefficient>,
    pub x: Vec<Coefficient>,
    pub y: Vec<Coefficient>,
    pub z: Vec<Coefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Value a regression run should reproduce.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_self_linking: Option<i32>,
    pub components: Vec<ComponentRecord>,
}

#[derive(Debug, Error)]
pub enum CurveFileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("parse error: {0}")]
    Schema(String),
    #[error("invalid curve: {}", .0.summary())]
    Invalid(Box<ValidationReport>),
}

impl CurveFileError {
    pub fn is_parse_error(&self) -> bool {
        !matches!(self, Self::Invalid(_))
    }
}

const COORDS: [&str; 4] = ["w", "x", "y", "z"];

fn coefficient(c: &Coefficient, at: impl Fn() -> String) -> Result<f64, CurveFileError> {
    let v = match c {
        Coefficient::Number(v) => *v,
        Coefficient::Text(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| CurveFileError::Schema(format!("{}: {s:?} is not a decimal number", at())))?,
    };
    if !v.is_finite() {
        return Err(CurveFileError::Schema(format!("{}: coefficient is not finite", at())));
    }
    Ok(v)
}

impl CurveFile {
    pub fn from_link(link: &RationalLink, name: Option<String>) -> Self {
        let components = link
            .components()
            .iter()
            .map(|c| {
                let arr = |i: usize| {
                    let coeffs = c.coord(i).coeffs();
                    if coeffs.is_empty() {
                        vec![Coefficient::Number(0.0)]
                    } else {
                        coeffs.iter().map(|&v| Coefficient::Number(v)).collect()
                    }
                };
                ComponentRecord { w: arr(0), x: arr(1), y: arr(2), z: arr(3) }
            })
            .collect();
        Self { name, expected_self_linking: None, components }
    }

    /// Converts the records to a link without validating it.
    pub fn to_link(&self) -> Result<RationalLink, CurveFileError> {
        if self.components.is_empty() {
            return Err(CurveFileError::Schema("the components list is empty".into()));
        }
        let mut comps = Vec::with_capacity(self.components.len());
        for (ci, rec) in self.components.iter().enumerate() {
            let arrays = [&rec.w, &rec.x, &rec.y, &rec.z];
            let mut polys: [RealPolynomial; 4] = Default::default();
            for (k, arr) in arrays.iter().enumerate() {
                if arr.is_empty() {
                    return Err(CurveFileError::Schema(format!("components[{ci}].{}: empty coefficient array", COORDS[k])));
                }
                let coeffs = arr
                    .iter()
                    .enumerate()
                    .map(|(j, c)| coefficient(c, || format!("components[{ci}].{}[{j}]", COORDS[k])))
                    .collect::<Result<Vec<_>, _>>()?;
                polys[k] = RealPolynomial::new(coeffs);
            }
            comps.push(RationalComponent::new(polys));
        }
        RationalLink::new(comps).map_err(|e| CurveFileError::Schema(e.to_string()))
    }
}

/// Parses a curve file without validating the curve.
pub fn read_curve_file(bytes: &[u8]) -> Result<CurveFile, CurveFileError> {
    serde_json::from_slice(bytes).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => CurveFileError::Schema(e.to_string()),
        _ => CurveFileError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
    })
}

/// Parses and validates a curve file.
pub fn parse_curve_file(bytes: &[u8]) -> Result<RationalLink, CurveFileError> {
    let link = read_curve_file(bytes)?.to_link()?;
    let report = validate(&link, DEFAULT_VALIDATION_TOL);
    if !report.is_valid() {
        return Err(CurveFileError::Invalid(Box::new(report)));
    }
    Ok(link)
}

pub fn emit_curve_file(link: &RationalLink, name: Option<&str>) -> String {
    let file = CurveFile::from_link(link, name.map(str::to_owned));
    serde_json::to_string_pretty(&file).expect("curve files serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = r#"{"components":[{"w":[1],"x":[0,1],"y":[0,0,1],"z":[0,0,0,1]}]}"#;

    #[test]
    fn twisted_cubic_parses() {
        let link = parse_curve_file(CUBIC.as_bytes()).unwrap();
        assert_eq!(link.degrees(), vec![3]);
    }

    #[test]
    fn decimal_strings() {
        let text = r#"{"name":"c","components":[{"w":["1.0"],"x":[0,"1"],"y":[0,0,"1e0"],"z":[0,0,0,1]}]}"#;
        let a = parse_curve_file(text.as_bytes()).unwrap();
        let b = parse_curve_file(CUBIC.as_bytes()).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            read_curve_file(br#"{"components":[{"w":["one"],"x":[1],"y":[1],"z":[1]}]}"#).unwrap().to_link(),
            Err(CurveFileError::Schema(m)) if m.contains("components[0].w[0]")
        ));
    }

    #[test]
    fn empty_components_is_a_parse_error() {
        let e = parse_curve_file(br#"{"components":[]}"#).unwrap_err();
        assert!(e.is_parse_error());
        let e = parse_curve_file(b"{\"components\": [\n  {\"w\": [1,}\n]}").unwrap_err();
        assert!(matches!(e, CurveFileError::Syntax { line: 2, .. }), "{e}");
    }

    #[test]
    fn base_point_is_a_validation_error() {
        let text = r#"{"components":[{"w":[0,1],"x":[0,0,1],"y":[0,0,0,1],"z":[0,0,0,0,1]}]}"#;
        match parse_curve_file(text.as_bytes()) {
            Err(CurveFileError::Invalid(r)) => assert!(r.summary().contains("base point"), "{}", r.summary()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let link = parse_curve_file(CUBIC.as_bytes()).unwrap();
        let text = emit_curve_file(&link, Some("cubic"));
        assert_eq!(parse_curve_file(text.as_bytes()).unwrap(), link);
    }
}
