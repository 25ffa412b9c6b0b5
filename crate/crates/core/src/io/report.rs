use serde::Serialize;

use crate::config::Tolerances;
use crate::projection::{Census, DoublePointKind};
use crate::writhe::SelfLinkingReport;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointRecord {
    pub kind: DoublePointKind,
    pub components: [usize; 2],
    /// Parameters as `[re, im]`.
    pub params: [[f64; 2]; 2],
    /// Real image in the projection plane; absent for imaginary pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<[f64; 3]>,
    pub writhe: Option<i32>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub value: i32,
    pub census: Census,
    pub per_point: Vec<PointRecord>,
    pub center: [f64; 4],
    pub max_residual: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl From<&SelfLinkingReport> for ReportJson {
    fn from(r: &SelfLinkingReport) -> Self {
        let per_point = r
            .points
            .iter()
            .map(|p| {
                let d = &p.point;
                PointRecord {
                    kind: d.kind,
                    components: [d.components.0, d.components.1],
                    params: [[d.params.0.re, d.params.0.im], [d.params.1.re, d.params.1.im]],
                    image: d.real_image().map(Into::into),
                    writhe: p.writhe,
                    residual: d.residual,
                }
            })
            .collect();
        Self {
            value: r.total,
            census: r.census,
            per_point,
            center: r.center.into(),
            max_residual: r.max_residual,
            seed: r.seed,
            tolerances: r.tolerances,
        }
    }
}

pub fn self_linking_json(r: &SelfLinkingReport) -> String {
    serde_json::to_string_pretty(&ReportJson::from(r)).expect("reports serialize")
}
