use std::collections::BTreeSet;

use gradecs_core::endoscopy::Expectation;
use gradecs_core::grading::{enumerate_stable_gradings, CasePattern, GradingDescriptor};
use gradecs_core::rootdata::TypeLabel;
use gradecs_core::verify::{verify_case, VerificationRecord, VerifyOptions, CLAIMS};
use rayon::prelude::*;
use serde::Serialize;

use crate::{CliError, SCHEMA_VERSION};

pub const ALL_TYPES: [TypeLabel; 9] = [
    TypeLabel::A,
    TypeLabel::B,
    TypeLabel::C,
    TypeLabel::D,
    TypeLabel::E6,
    TypeLabel::E7,
    TypeLabel::E8,
    TypeLabel::F4,
    TypeLabel::G2,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    All,
    Case,
    Claim,
}

#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub scope: Scope,
    pub case: Option<String>,
    pub claim: Option<String>,
    pub type_label: Option<TypeLabel>,
    pub rank_bound: usize,
    pub oracle_bound: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub records: usize,
    pub pass: usize,
    pub fail: usize,
    pub unchecked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub scope: Scope,
    pub rank_bound: usize,
    pub oracle_bound: u64,
    pub summary: Summary,
    pub records: Vec<VerificationRecord>,
}

impl VerifyDoc {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }
}

/// Cases in a fixed order: type, rank, m, r, twist.
pub fn cases(types: &[TypeLabel], rank_bound: usize) -> Vec<GradingDescriptor> {
    let mut out = Vec::new();
    for &t in types {
        let mut v: Vec<GradingDescriptor> = (t.min_rank()..=rank_bound)
            .filter(|&n| t.valid_rank(n))
            .flat_map(|n| enumerate_stable_gradings(t, n))
            .collect();
        v.sort_by_key(|d| (d.n, d.m, d.r, d.twist));
        out.extend(v);
    }
    out
}

pub fn verify(req: &VerifyRequest) -> Result<VerifyDoc, CliError> {
    let pattern = match (req.scope, &req.case) {
        (Scope::Case, None) => return Err(CliError::Usage("--scope case needs --case".into())),
        (_, Some(c)) => Some(c.parse::<CasePattern>().map_err(|e| CliError::Usage(e.to_string()))?),
        (_, None) => None,
    };
    let claims = match (req.scope, &req.claim) {
        (Scope::Claim, None) => return Err(CliError::Usage("--scope claim needs --claim".into())),
        (_, Some(c)) => {
            if !CLAIMS.contains(&c.as_str()) {
                return Err(CliError::Usage(format!("unknown claim {:?}; known: {}", c, CLAIMS.join(", "))));
            }
            Some(BTreeSet::from([c.clone()]))
        }
        (_, None) => None,
    };
    let types: Vec<TypeLabel> = match (req.type_label, pattern.as_ref().and_then(|p| p.type_label)) {
        (Some(a), Some(b)) if a != b => return Err(CliError::Usage("--type disagrees with --case".into())),
        (Some(t), _) | (None, Some(t)) => vec![t],
        (None, None) => ALL_TYPES.to_vec(),
    };
    let bound = match pattern.as_ref().and_then(|p| p.n) {
        Some(n) => n.max(req.rank_bound),
        None => req.rank_bound,
    };
    let selected: Vec<GradingDescriptor> =
        cases(&types, bound).into_iter().filter(|d| pattern.as_ref().is_none_or(|p| p.matches(&d.key()))).collect();
    if selected.is_empty() && pattern.is_some() {
        return Err(CliError::Usage(format!("no stable grading matches {}", req.case.as_deref().unwrap_or(""))));
    }
    let opts = VerifyOptions { oracle_bound: req.oracle_bound, claims };
    let records: Vec<VerificationRecord> =
        selected.par_iter().map(|d| verify_case(d, &opts)).collect::<Vec<_>>().into_iter().flatten().collect();
    let mut summary = Summary { cases: selected.len(), records: records.len(), ..Summary::default() };
    for r in &records {
        match r.status {
            Expectation::Pass => summary.pass += 1,
            Expectation::Fail => summary.fail += 1,
            Expectation::Unchecked => summary.unchecked += 1,
        }
    }
    Ok(VerifyDoc {
        schema: SCHEMA_VERSION,
        command: "verify",
        scope: req.scope,
        rank_bound: bound,
        oracle_bound: req.oracle_bound,
        summary,
        records,
    })
}
