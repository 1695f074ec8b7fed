//! Characters of I as elements of the dual torus, the endoscopic root
//! subsystem Φ̌_χ, the groups W^en and the d_s, and the two monodromy
//! expectations.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::charmono::{CaseAnalysis, ReflectionData, StabilizerData, TorusCharacter, QUOTIENT_LIMIT};
use crate::cyclotomic::{BinomialProduct, Q};
use crate::linalg::{frac, IMat};
use crate::reflgroup::{quotient, MonomialElement, QuotientInfo, ReflGroupError, ReflectionSubgroup};
use crate::rootdata::{weyl_orbit_size, weyl_order, FiniteAbelianGroup, RootDataError, TorusElt};
use crate::rootsys::{components, rank_one_shape, root_perm, weyl_contains, Component, RootSysError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndoscopyError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    ReflGroup(#[from] ReflGroupError),
    #[error("dual fixed points do not match the characters of I ({dual} vs {chars})")]
    DualMismatch { dual: u64, chars: u64 },
}

/// Î ≅ (T̂)^θ̌: a θ̌-fixed dual torus element for every character.
pub struct DualDatum {
    pub fixed: FiniteAbelianGroup,
    /// dual element for each character index
    pub of_char: Vec<TorusElt>,
}

fn pairing_character(i: &FiniteAbelianGroup, theta: &IMat, x: &TorusElt) -> Option<TorusCharacter> {
    let k = theta.rows();
    // y = (θᵀ - 1) x̃ is integral; χ_x(t) = y · t̃
    let a = theta.transpose().sub(&IMat::identity(k));
    let y = a.apply_q(&x.0);
    if y.iter().any(|q| !q.is_integer()) {
        return None;
    }
    let y: Vec<i64> = y.iter().map(|q| q.to_integer()).collect();
    let coords = i
        .smith_generators()
        .iter()
        .zip(i.invariant_factors())
        .map(|(g, d)| {
            let v = frac(g.eval(&y)) * Q::from(*d);
            v.is_integer().then(|| v.to_integer())
        })
        .collect::<Option<Vec<i64>>>()?;
    Some(TorusCharacter { coords })
}

pub fn char_to_dual_torus(a: &CaseAnalysis) -> Result<DualDatum, EndoscopyError> {
    let theta = a.grading.theta();
    let k = theta.rows();
    let fixed = FiniteAbelianGroup::torsion_kernel(&theta.transpose().sub(&IMat::identity(k)))?;
    let mismatch = || EndoscopyError::DualMismatch { dual: fixed.order(), chars: a.chars.len() as u64 };
    if fixed.order() != a.chars.len() as u64 {
        return Err(mismatch());
    }
    let mut of_char: Vec<Option<TorusElt>> = vec![None; a.chars.len()];
    for x in fixed.elements() {
        let chi = pairing_character(a.fixed(), theta, &x).ok_or_else(mismatch)?;
        let c = a.index_of(&chi);
        if of_char[c].is_some() {
            return Err(mismatch());
        }
        of_char[c] = Some(x);
    }
    let of_char = of_char.into_iter().collect::<Option<Vec<_>>>().ok_or_else(mismatch)?;
    Ok(DualDatum { fixed, of_char })
}

/// Outcome of an expectation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Pass,
    Fail,
    Unchecked,
}

impl std::fmt::Display for Expectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Expectation::Pass => "pass",
            Expectation::Fail => "fail",
            Expectation::Unchecked => "unchecked",
        })
    }
}

/// Per-reflection endoscopic data.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionEndoscopy {
    pub hyperplane: String,
    pub order: u32,
    pub e_s: u32,
    pub d_s: u32,
    pub max_power: u32,
    /// R̄̄ with R(x) = R̄̄(x^{d_s})
    pub reduced: Option<BinomialProduct>,
    /// trivial-character polynomial of the dual rank-one reduction
    pub dual_poly: Option<BinomialProduct>,
    pub dual_tag: String,
    pub mono_2: Expectation,
    pub min_mono: Expectation,
}

#[derive(Clone, Debug)]
pub struct EndoscopyReport {
    pub chi: usize,
    pub dual_element: TorusElt,
    /// coroot indices of Φ̌_χ
    pub subsystem: Vec<usize>,
    pub subsystem_type: String,
    pub component_group_order: u64,
    pub reflections: Vec<ReflectionEndoscopy>,
    pub w_en: ReflectionSubgroup,
    /// W⁰/W^en
    pub w0_quotient: QuotientInfo,
    /// W_{a,χ}/W^en
    pub stab_quotient: QuotientInfo,
    pub en_in_w0: bool,
    pub e_divides_d: bool,
}

fn type_string(comps: &[Component]) -> String {
    if comps.is_empty() {
        return "1".into();
    }
    let mut v: Vec<String> = comps.iter().map(|c| c.name()).collect();
    v.sort();
    v.join(" x ")
}

/// Smallest divisor k of the order of s with s^k in W(Φ̌_χ).
fn d_s(a: &CaseAnalysis, comps: &[Component], data: &ReflectionData) -> u32 {
    let n = data.refl.order;
    (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .find(|&k| {
            let w = a.grading.lattice_image(&data.refl.element.pow(k as u64));
            weyl_contains(&a.dual_rs, comps, &root_perm(&a.grading.aut.datum, &w))
        })
        .unwrap_or(n)
}

/// Rank-one reduction of (Ǧ(χ)⁰_s, θ̌) with the trivial character.
fn dual_rank_one(
    a: &CaseAnalysis,
    subsystem: &[usize],
    data: &ReflectionData,
    allow_exceptional: bool,
) -> Result<(BinomialProduct, String), Option<String>> {
    let in_sub: std::collections::HashSet<usize> = subsystem.iter().copied().collect();
    let roots: Vec<usize> = data.roots.iter().copied().filter(|r| in_sub.contains(r)).collect();
    if roots.is_empty() {
        return Ok((BinomialProduct::from_factors([(1, Q::zero())]), "torus".into()));
    }
    let comps = components(&a.dual_rs, &roots).map_err(|e| Some(e.to_string()))?;
    if !allow_exceptional && comps.iter().any(|c| !c.label.is_classical()) {
        return Err(None);
    }
    let perm = &a.grading.root_perm;
    let which = |r: usize| comps.iter().position(|c| c.roots.contains(&r));
    let mut cycle = 1;
    let mut cur = which(perm[comps[0].simple[0]]).ok_or_else(|| Some("θ̌ does not preserve Φ̌_χ,s".to_string()))?;
    while cur != 0 {
        cur = which(perm[comps[cur].simple[0]]).ok_or_else(|| Some("θ̌ does not preserve Φ̌_χ,s".to_string()))?;
        cycle += 1;
        if cycle > comps.len() {
            return Err(Some("θ̌-cycle does not close".into()));
        }
    }
    if cycle != comps.len() {
        return Err(Some(format!("{} components in {} θ̌-cycles", comps.len(), comps.len() / cycle)));
    }
    let mut perm_c: Vec<usize> = (0..a.dual_rs.len()).collect();
    for _ in 0..cycle {
        perm_c = perm_c.iter().map(|&x| perm[x]).collect();
    }
    let shape = rank_one_shape(&a.dual_rs, &comps[0], &perm_c).map_err(|e| Some(e.to_string()))?;
    let zeros = vec![Q::zero(); shape.exponents.len()];
    let tag = if cycle == 1 { shape.tag() } else { format!("{}^{} cycled, {}", shape.component, cycle, shape.tag()) };
    Ok((shape.polynomial(&zeros), tag))
}

pub fn endoscopy_group(
    a: &CaseAnalysis,
    dual: &DualDatum,
    st: &StabilizerData,
) -> Result<EndoscopyReport, EndoscopyError> {
    let chi = st.chi;
    let x = &dual.of_char[chi];
    let datum = &a.grading.aut.datum;
    let subsystem: Vec<usize> = (0..datum.coroots.len()).filter(|&b| x.eval(&datum.coroots[b]).is_zero()).collect();
    let comps = components(&a.dual_rs, &subsystem)?;
    let sub_order: u64 = comps.iter().map(|c| weyl_order(c.label, c.rank)).product();
    let orbit = weyl_orbit_size(datum, x, true) as u64;
    let component_group_order = datum.weyl_order() / orbit / sub_order;

    let mut reflections = Vec::new();
    let mut gens_en: Vec<MonomialElement> = Vec::new();
    for (data, mono) in a.reflections.iter().zip(&st.monodromy) {
        let d = d_s(a, &comps, data);
        gens_en.push(data.refl.element.pow(d as u64));
        let max_power = mono.poly.max_power();
        let reduced = mono.poly.substitute_power(d);
        let mono_2 = if max_power == d { Expectation::Pass } else { Expectation::Fail };
        let (dual_poly, dual_tag, min_mono) = match dual_rank_one(a, &subsystem, data, a.chars[chi].is_trivial()) {
            Ok((p, tag)) => {
                let ok = reduced.as_ref() == Some(&p);
                (Some(p), tag, if ok { Expectation::Pass } else { Expectation::Fail })
            }
            Err(None) => (None, "exceptional".into(), Expectation::Unchecked),
            Err(Some(e)) => (None, e, Expectation::Fail),
        };
        reflections.push(ReflectionEndoscopy {
            hyperplane: data.hyperplane().to_string(),
            order: data.refl.order,
            e_s: mono.e_s,
            d_s: d,
            max_power,
            reduced,
            dual_poly,
            dual_tag,
            mono_2,
            min_mono,
        });
    }
    let w = &a.grading.weyl;
    let w_en = ReflectionSubgroup::generated(w.m, w.r, &gens_en)?;
    let id = w.identity();
    let w0_quotient = quotient(&st.w0.generators, &|g| w_en.contains(g), &id, QUOTIENT_LIMIT)?;
    let stab_quotient = quotient(&st.stabilizer_gens, &|g| w_en.contains(g), &id, QUOTIENT_LIMIT)?;
    let en_in_w0 = st.w0.contains_subgroup(&w_en);
    let e_divides_d = reflections.iter().all(|r| r.d_s % r.e_s == 0);
    Ok(EndoscopyReport {
        chi,
        dual_element: x.clone(),
        subsystem,
        subsystem_type: type_string(&comps),
        component_group_order,
        reflections,
        w_en,
        w0_quotient,
        stab_quotient,
        en_in_w0,
        e_divides_d,
    })
}

/// Aggregate expectation status over the reflections of one character.
pub fn verify_expectations(report: &EndoscopyReport) -> (Expectation, Expectation) {
    let worst = |a: Expectation, b: Expectation| match (a, b) {
        (Expectation::Fail, _) | (_, Expectation::Fail) => Expectation::Fail,
        (Expectation::Unchecked, _) | (_, Expectation::Unchecked) => Expectation::Unchecked,
        _ => Expectation::Pass,
    };
    let mono_2 = report.reflections.iter().fold(Expectation::Pass, |acc, r| worst(acc, r.mono_2));
    let min_mono = report.reflections.iter().fold(Expectation::Pass, |acc, r| worst(acc, r.min_mono));
    (mono_2, min_mono)
}
