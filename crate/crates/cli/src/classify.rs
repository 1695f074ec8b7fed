use std::ops::RangeInclusive;

use gradecs_core::grading::{enumerate_stable_gradings, GradingDescriptor};
use gradecs_core::reflgroup::GroupType;
use gradecs_core::rootdata::TypeLabel;
use serde::Serialize;

use crate::SCHEMA_VERSION;

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRow {
    pub case: String,
    pub family: String,
    pub n: usize,
    pub m: u32,
    pub r: usize,
    pub twist: u32,
    pub little_weyl: String,
    pub little_weyl_order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyDoc {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(rename = "type")]
    pub type_label: String,
    pub rows: Vec<ClassifyRow>,
}

pub fn row(d: &GradingDescriptor) -> ClassifyRow {
    let (m, p, r) = d.weyl_params();
    let g = GroupType { m, p, r };
    ClassifyRow {
        case: d.key().to_string(),
        family: d.family.tag().to_string(),
        n: d.n,
        m: d.m,
        r: d.r,
        twist: d.twist,
        little_weyl: g.canonical().to_string(),
        little_weyl_order: g.order(),
    }
}

/// Rows sorted by (rank, m), then r and twist.
pub fn classify(t: TypeLabel, ranks: RangeInclusive<usize>) -> ClassifyDoc {
    let mut descs: Vec<GradingDescriptor> = ranks.flat_map(|n| enumerate_stable_gradings(t, n)).collect();
    descs.sort_by_key(|d| (d.n, d.m, d.r, d.twist));
    ClassifyDoc {
        schema: SCHEMA_VERSION,
        command: "classify",
        type_label: t.to_string(),
        rows: descs.iter().map(row).collect(),
    }
}
