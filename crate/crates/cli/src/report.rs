use std::collections::BTreeSet;

use gradecs_core::charmono::{build_mchi, stabilizer_data, CaseAnalysis};
use gradecs_core::endoscopy::{char_to_dual_torus, endoscopy_group, verify_expectations, Expectation};
use gradecs_core::grading::{grade_lie_algebra, CasePattern, Grading, GradingReport};
use serde::Serialize;

use crate::{CliError, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Section {
    Grading,
    Chars,
    Monodromy,
    Hecke,
    Endoscopy,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyRow {
    pub hyperplane: String,
    pub rank_one: String,
    pub order: u32,
    pub poly: String,
    pub e_s: u32,
    pub reduced: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoscopyRow {
    pub dual_element: String,
    pub subsystem: String,
    pub component_group_order: u64,
    pub w_en: String,
    pub w0_over_en: String,
    pub stabilizer_over_en: String,
    pub d_s: Vec<String>,
    pub mono_2: Expectation,
    pub min_mono: Expectation,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharRow {
    pub representative: String,
    pub orbit_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer_over_w0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hecke: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub induction_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endoscopy: Option<EndoscopyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<Vec<MonodromyRow>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub case: String,
    pub family: String,
    pub theta: String,
    pub little_weyl: String,
    pub fixed_points: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<CharRow>>,
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn report(pattern: &str, sections: &[Section]) -> Result<ReportDoc, CliError> {
    let pat: CasePattern =
        pattern.parse().map_err(|e: gradecs_core::grading::GradingError| CliError::Usage(e.to_string()))?;
    let desc = pat.resolve().map_err(|e| CliError::Usage(e.to_string()))?;
    let want: BTreeSet<Section> = if sections.is_empty() {
        [Section::Grading, Section::Chars, Section::Monodromy, Section::Hecke, Section::Endoscopy].into()
    } else {
        sections.iter().copied().collect()
    };
    let gr = Grading::new(&desc).map_err(internal)?;
    let grading = want.contains(&Section::Grading).then(|| grade_lie_algebra(&gr));
    let (mm, p, r) = desc.weyl_params();
    let mut doc = ReportDoc {
        schema: SCHEMA_VERSION,
        command: "report",
        case: desc.key().to_string(),
        family: desc.family.tag().to_string(),
        theta: gr.aut.word.clone(),
        little_weyl: gradecs_core::reflgroup::GroupType { m: mm, p, r }.canonical().to_string(),
        fixed_points: gr.fixed.invariant_factors().to_vec(),
        grading,
        characters: None,
    };
    let per_char = [Section::Chars, Section::Monodromy, Section::Hecke, Section::Endoscopy];
    if !per_char.iter().any(|s| want.contains(s)) {
        return Ok(doc);
    }
    let a = CaseAnalysis::new(gr).map_err(internal)?;
    let dual = if want.contains(&Section::Endoscopy) { Some(char_to_dual_torus(&a).map_err(internal)?) } else { None };
    let wa = a.grading.weyl.order();
    let mut rows = Vec::new();
    for c in a.representatives() {
        let st = stabilizer_data(&a, c).map_err(internal)?;
        let mchi = build_mchi(&a, &st);
        let chars = want.contains(&Section::Chars);
        let hecke = want.contains(&Section::Hecke);
        let endoscopy = match &dual {
            Some(d) => {
                let e = endoscopy_group(&a, d, &st).map_err(internal)?;
                let (m2, mm) = verify_expectations(&e);
                Some(EndoscopyRow {
                    dual_element: e.dual_element.to_string(),
                    subsystem: e.subsystem_type.clone(),
                    component_group_order: e.component_group_order,
                    w_en: e.w_en.type_label(),
                    w0_over_en: e.w0_quotient.to_string(),
                    stabilizer_over_en: e.stab_quotient.to_string(),
                    d_s: e.reflections.iter().map(|x| format!("{}:{}", x.hyperplane, x.d_s)).collect(),
                    mono_2: m2,
                    min_mono: mm,
                })
            }
            None => None,
        };
        let monodromy = want.contains(&Section::Monodromy).then(|| {
            st.monodromy
                .iter()
                .map(|x| MonodromyRow {
                    hyperplane: x.hyperplane.to_string(),
                    rank_one: x.tag.clone(),
                    order: x.order,
                    poly: x.poly.to_string(),
                    e_s: x.e_s,
                    reduced: x.reduced.to_string(),
                })
                .collect()
        });
        rows.push(CharRow {
            representative: mchi.representative.clone(),
            orbit_size: st.orbit_size,
            stabilizer_order: chars.then(|| st.stabilizer_order(wa)),
            w0: (chars || hecke).then(|| mchi.w0_type.clone()),
            stabilizer_over_w0: chars.then(|| st.quotient.to_string()),
            hecke: hecke.then(|| mchi.hecke.clone()),
            induction_index: hecke.then_some(mchi.induction_index),
            total_rank: hecke.then_some(mchi.total_rank),
            endoscopy,
            monodromy,
        });
    }
    doc.characters = Some(rows);
    Ok(doc)
}
