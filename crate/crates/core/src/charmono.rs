//! Characters of I, their W_a-orbits and stabilizers, rank-one reduction at
//! each distinguished reflection, monodromy polynomials and the Hecke
//! presentation carried by W⁰_{a,χ}.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{cyclotomic_polynomial, BinomialProduct, Q};
use crate::grading::Grading;
use crate::linalg::{intersect_kernels, IMat, QMat};
use crate::reflgroup::{
    assemble_hecke, quotient, DistinguishedReflection, HeckePresentation, Hyperplane, MonomialElement, QuotientInfo,
    ReflGroupError, ReflectionSubgroup,
};
use crate::rootdata::{mixed_radix, FiniteAbelianGroup, TorusElt};
use crate::rootsys::{components, pushforward, rank_one_shape, RankOneShape, RootSysError, RootSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharMonoError {
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    ReflGroup(#[from] ReflGroupError),
    #[error("rank-one reduction at {0} is not a single cycle of components")]
    UnclassifiedRankOne(String),
    #[error("monodromy polynomial {poly} is not a polynomial in x^{e}")]
    PowerExtractionFailed { poly: String, e: u32 },
    #[error("center element {0} of a rank-one reduction is not in I")]
    CenterOutsideI(String),
}

/// χ ∈ Î by exponents on the Smith generators: χ(g_j) = e^{2πi c_j / d_j}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusCharacter {
    pub coords: Vec<i64>,
}

impl TorusCharacter {
    pub fn trivial(i: &FiniteAbelianGroup) -> Self {
        TorusCharacter { coords: vec![0; i.invariant_factors().len()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    /// χ(t) in Q/Z; None when t ∉ I.
    pub fn eval(&self, i: &FiniteAbelianGroup, t: &TorusElt) -> Option<Q> {
        let x = i.coords(t)?;
        let s = self
            .coords
            .iter()
            .zip(&x)
            .zip(i.invariant_factors())
            .fold(Q::zero(), |acc, ((c, x), d)| acc + Q::new(c * x, *d));
        Some(crate::linalg::frac(s))
    }

    /// Values on the named generators.
    pub fn named_values(&self, i: &FiniteAbelianGroup) -> Vec<Q> {
        i.named_generators().iter().map(|(_, g)| self.eval(i, g).unwrap_or_else(Q::zero)).collect()
    }

    pub fn describe(&self, i: &FiniteAbelianGroup) -> String {
        let parts: Vec<String> = i
            .named_generators()
            .iter()
            .map(|(n, g)| {
                let v = self.eval(i, g).unwrap_or_else(Q::zero);
                format!("{}->{}", n, root_of_unity(v))
            })
            .collect();
        parts.join(",")
    }
}

/// e^{2πi q} in short form.
pub fn root_of_unity(q: Q) -> String {
    if q.is_zero() {
        "1".into()
    } else if q == Q::new(1, 2) {
        "-1".into()
    } else if q == Q::new(1, 4) {
        "i".into()
    } else if q == Q::new(3, 4) {
        "-i".into()
    } else {
        format!("E({})^{}", q.denom(), q.numer())
    }
}

pub fn enumerate_characters(i: &FiniteAbelianGroup) -> Vec<TorusCharacter> {
    mixed_radix(i.invariant_factors()).into_iter().map(|coords| TorusCharacter { coords }).collect()
}

/// How a lattice automorphism w acts on Î: (wχ)(t) = χ(w⁻¹ t).
#[derive(Clone, Debug)]
pub struct CharAction {
    /// Smith coordinates of w⁻¹ g_j
    images: Vec<Vec<i64>>,
}

impl CharAction {
    pub fn new(i: &FiniteAbelianGroup, w: &IMat) -> Self {
        let winv = w.inverse_unimodular().expect("lattice automorphism");
        let images = i.smith_generators().iter().map(|g| i.coords(&g.act(&winv)).expect("w preserves I")).collect();
        CharAction { images }
    }

    pub fn apply(&self, i: &FiniteAbelianGroup, chi: &TorusCharacter) -> TorusCharacter {
        let d = i.invariant_factors();
        let e = i.exponent();
        let coords = self
            .images
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let v: i64 = chi.coords.iter().zip(x).zip(d).map(|((c, x), di)| c * x * (e / di)).sum();
                let v = v.rem_euclid(e);
                v / (e / d[j])
            })
            .collect();
        TorusCharacter { coords }
    }
}

/// Rank-one reduction attached to a distinguished reflection.
#[derive(Clone, Debug)]
pub struct ReflectionData {
    pub refl: DistinguishedReflection,
    pub lattice: IMat,
    /// Φ_s: roots vanishing on a_s
    pub roots: Vec<usize>,
    /// number of simple components cycled by θ
    pub cycle: usize,
    pub shape: RankOneShape,
    /// generators Γ_i of I_s, aligned with shape.exponents
    pub gammas: Vec<TorusElt>,
}

impl ReflectionData {
    pub fn tag(&self) -> String {
        if self.cycle == 1 {
            self.shape.tag()
        } else {
            format!("{}^{} cycled, {}", self.shape.component, self.cycle, self.shape.tag())
        }
    }

    pub fn hyperplane(&self) -> Hyperplane {
        self.refl.hyperplane()
    }
}

/// One W_a-orbit on Î.
#[derive(Clone, Debug)]
pub struct CharOrbit {
    pub representative: usize,
    pub members: Vec<usize>,
}

/// Everything about a grading that does not depend on χ.
pub struct CaseAnalysis {
    pub grading: Grading,
    pub rs: RootSystem,
    pub dual_rs: RootSystem,
    pub chars: Vec<TorusCharacter>,
    pub char_index: HashMap<TorusCharacter, usize>,
    /// W_a generators with their permutations of `chars`
    pub generators: Vec<(MonomialElement, Vec<usize>)>,
    pub reflections: Vec<ReflectionData>,
    pub orbits: Vec<CharOrbit>,
    pub orbit_of: Vec<usize>,
}

impl CaseAnalysis {
    pub fn new(grading: Grading) -> Result<Self, CharMonoError> {
        let rs = RootSystem::of(&grading.aut.datum);
        let dual_rs = RootSystem::dual_of(&grading.aut.datum);
        let i = &grading.fixed;
        let chars = enumerate_characters(i);
        let char_index: HashMap<TorusCharacter, usize> =
            chars.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        let generators = grading
            .weyl
            .generator_elements()
            .into_iter()
            .map(|g| {
                let act = CharAction::new(i, &grading.lattice_image(&g));
                let perm = chars.iter().map(|c| char_index[&act.apply(i, c)]).collect();
                (g, perm)
            })
            .collect::<Vec<_>>();
        let reflections = grading
            .weyl
            .reflections
            .iter()
            .map(|s| rank_one_restriction(&grading, &rs, s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut a = CaseAnalysis {
            grading,
            rs,
            dual_rs,
            chars,
            char_index,
            generators,
            reflections,
            orbits: vec![],
            orbit_of: vec![],
        };
        a.compute_orbits();
        Ok(a)
    }

    pub fn fixed(&self) -> &FiniteAbelianGroup {
        &self.grading.fixed
    }

    fn compute_orbits(&mut self) {
        let n = self.chars.len();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits = Vec::new();
        for s in 0..n {
            if orbit_of[s] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[s] = id;
            let mut members = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for (_, p) in &self.generators {
                    let y = p[x];
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            let representative = *members.iter().min_by_key(|&&c| (self.sort_key(c), c)).expect("orbit is nonempty");
            orbits.push(CharOrbit { representative, members });
        }
        self.orbits = orbits;
        self.orbit_of = orbit_of;
    }

    /// Lexicographic key: values on the named generators, then Smith coordinates.
    fn sort_key(&self, c: usize) -> (Vec<Q>, Vec<i64>) {
        (self.chars[c].named_values(self.fixed()), self.chars[c].coords.clone())
    }

    pub fn index_of(&self, chi: &TorusCharacter) -> usize {
        self.char_index[chi]
    }

    /// Representatives in canonical order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = self.orbits.iter().map(|o| o.representative).collect();
        reps.sort_by_key(|&c| (self.sort_key(c), c));
        reps
    }

    /// The character with the given values on the named generators, if well defined.
    pub fn character_from_named(&self, values: &[Q]) -> Option<usize> {
        let i = self.fixed();
        (0..self.chars.len()).find(|&c| self.chars[c].named_values(i) == values)
    }

    /// Generators of W_{a,χ} (Schreier generators) and the orbit size.
    pub fn stabilizer_generators(&self, chi: usize) -> (Vec<MonomialElement>, usize) {
        let id = self.grading.weyl.identity();
        let mut transversal: HashMap<usize, MonomialElement> = HashMap::from([(chi, id)]);
        let mut order = vec![chi];
        let mut queue = VecDeque::from([chi]);
        while let Some(x) = queue.pop_front() {
            for (g, p) in &self.generators {
                let y = p[x];
                if !transversal.contains_key(&y) {
                    let u = g.mul(&transversal[&x]);
                    transversal.insert(y, u);
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut gens = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for x in &order {
            for (g, p) in &self.generators {
                let y = p[*x];
                let s = transversal[&y].inv().mul(g).mul(&transversal[x]);
                if !s.is_identity() && seen.insert(s.clone()) {
                    gens.push(s);
                }
            }
        }
        (gens, order.len())
    }

    /// Action of an element of W_a on a character index.
    pub fn act(&self, g: &MonomialElement, chi: usize) -> usize {
        let i = self.fixed();
        let act = CharAction::new(i, &self.grading.lattice_image(g));
        self.char_index[&act.apply(i, &self.chars[chi])]
    }
}

/// Roots of G_s = Z_G(a_s), the cycle of simple factors and the rank-one shape.
pub fn rank_one_restriction(
    gr: &Grading,
    rs: &RootSystem,
    s: &DistinguishedReflection,
) -> Result<ReflectionData, CharMonoError> {
    let theta = gr.theta();
    let m = gr.desc().m;
    let w = gr.lattice_image(&s.element);
    let k = theta.rows();
    let phi = QMat::from_imat(&theta.poly_eval(&cyclotomic_polynomial(m)));
    let fix = QMat::from_imat(&w.sub(&IMat::identity(k)));
    let u = intersect_kernels(&[&phi, &fix]);
    let roots: Vec<usize> = (0..rs.len())
        .filter(|&a| {
            u.iter().all(|v| rs.roots[a].iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + y * Q::from(*x)).is_zero())
        })
        .collect();
    let name = s.hyperplane().to_string();
    let comps = components(rs, &roots)?;
    if comps.is_empty() {
        return Err(CharMonoError::UnclassifiedRankOne(name));
    }
    // the θ-cycle through the first component
    let perm = &gr.root_perm;
    let which = |r: usize| comps.iter().position(|c| c.roots.contains(&r)).expect("θ preserves Φ_s");
    let mut cycle = 1;
    let mut cur = which(perm[comps[0].simple[0]]);
    while cur != 0 {
        cur = which(perm[comps[cur].simple[0]]);
        cycle += 1;
        if cycle > comps.len() {
            return Err(CharMonoError::UnclassifiedRankOne(name));
        }
    }
    if cycle != comps.len() {
        return Err(CharMonoError::UnclassifiedRankOne(name));
    }
    let mut perm_c: Vec<usize> = (0..rs.len()).collect();
    for _ in 0..cycle {
        perm_c = perm_c.iter().map(|&x| perm[x]).collect();
    }
    let shape = rank_one_shape(rs, &comps[0], &perm_c)?;
    let gammas: Vec<TorusElt> = shape.centers.iter().map(|v| pushforward(theta, v, cycle)).collect();
    for g in &gammas {
        if !gr.fixed.contains(g) {
            return Err(CharMonoError::CenterOutsideI(g.to_string()));
        }
    }
    Ok(ReflectionData { refl: s.clone(), lattice: w, roots, cycle, shape, gammas })
}

/// R_{χ,s} from the rank-one data.
pub fn monodromy_polynomial(a: &CaseAnalysis, data: &ReflectionData, chi: usize) -> BinomialProduct {
    let i = a.fixed();
    let vals: Vec<Q> = data.gammas.iter().map(|g| a.chars[chi].eval(i, g).expect("Γ_i ∈ I")).collect();
    data.shape.polynomial(&vals)
}

/// Per-reflection monodromy record.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionMonodromy {
    pub hyperplane: Hyperplane,
    pub orbit: usize,
    pub order: u32,
    pub tag: String,
    pub poly: BinomialProduct,
    pub e_s: u32,
    /// R̄ with R(x) = R̄(x^{e_s})
    pub reduced: BinomialProduct,
}

/// e_s: smallest e with s^e fixing χ.
pub fn e_s(a: &CaseAnalysis, data: &ReflectionData, chi: usize) -> u32 {
    let n = data.refl.order;
    (1..=n).filter(|e| n.is_multiple_of(*e)).find(|&e| a.act(&data.refl.element.pow(e as u64), chi) == chi).unwrap_or(n)
}

pub fn reflection_monodromy(
    a: &CaseAnalysis,
    data: &ReflectionData,
    chi: usize,
) -> Result<ReflectionMonodromy, CharMonoError> {
    let poly = monodromy_polynomial(a, data, chi);
    let e = e_s(a, data, chi);
    let reduced =
        poly.substitute_power(e).ok_or_else(|| CharMonoError::PowerExtractionFailed { poly: poly.to_string(), e })?;
    Ok(ReflectionMonodromy {
        hyperplane: data.hyperplane(),
        orbit: data.refl.hyperplane_orbit,
        order: data.refl.order,
        tag: data.tag(),
        poly,
        e_s: e,
        reduced,
    })
}

/// W_{a,χ}, W⁰ and the Hecke presentation of W⁰.
#[derive(Clone, Debug)]
pub struct StabilizerData {
    pub chi: usize,
    pub orbit_size: usize,
    pub stabilizer_gens: Vec<MonomialElement>,
    pub monodromy: Vec<ReflectionMonodromy>,
    pub w0: ReflectionSubgroup,
    pub quotient: QuotientInfo,
    pub hecke: HeckePresentation,
}

impl StabilizerData {
    pub fn stabilizer_order(&self, wa_order: u64) -> u64 {
        wa_order / self.orbit_size as u64
    }
}

pub const QUOTIENT_LIMIT: usize = 4096;

pub fn stabilizer_data(a: &CaseAnalysis, chi: usize) -> Result<StabilizerData, CharMonoError> {
    let w = &a.grading.weyl;
    let (stabilizer_gens, orbit_size) = a.stabilizer_generators(chi);
    let monodromy = a.reflections.iter().map(|d| reflection_monodromy(a, d, chi)).collect::<Result<Vec<_>, _>>()?;
    let gens0: Vec<MonomialElement> =
        a.reflections.iter().zip(&monodromy).map(|(d, r)| d.refl.element.pow(r.e_s as u64)).collect();
    let w0 = ReflectionSubgroup::generated(w.m, w.r, &gens0)?;
    let quotient = quotient(&stabilizer_gens, &|x| w0.contains(x), &w.identity(), QUOTIENT_LIMIT)?;
    let relations: HashMap<Hyperplane, (u32, BinomialProduct)> = monodromy
        .iter()
        .filter(|r| r.e_s < r.order)
        .map(|r| (r.hyperplane, (r.order / r.e_s, r.reduced.clone())))
        .collect();
    let hecke = assemble_hecke(&w0, &relations)?;
    Ok(StabilizerData { chi, orbit_size, stabilizer_gens, monodromy, w0, quotient, hecke })
}

/// Induction data of the module M_χ.
#[derive(Clone, Debug, Serialize)]
pub struct MchiDescriptor {
    pub representative: String,
    pub orbit_size: usize,
    pub induction_index: u64,
    pub w0_order: u64,
    pub w0_type: String,
    pub hecke: String,
    pub total_rank: u64,
    /// τ is trivial for connected K
    pub tau_trivial: bool,
}

pub fn build_mchi(a: &CaseAnalysis, st: &StabilizerData) -> MchiDescriptor {
    let w0_order = st.w0.order();
    let induction_index = st.orbit_size as u64 * st.quotient.order;
    MchiDescriptor {
        representative: a.chars[st.chi].describe(a.fixed()),
        orbit_size: st.orbit_size,
        induction_index,
        w0_order,
        w0_type: st.w0.type_label(),
        hecke: st.hecke.label.clone(),
        total_rank: induction_index * w0_order,
        tau_trivial: true,
    }
}

/// R_χ for a rank-one grading (W_a cyclic, one reflection).
pub fn rank_one_monodromy(a: &CaseAnalysis, chi: usize) -> Option<BinomialProduct> {
    match a.reflections.as_slice() {
        [d] if a.grading.desc().r == 1 => Some(monodromy_polynomial(a, d, chi)),
        _ => None,
    }
}

impl fmt::Display for ReflectionMonodromy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] R={} e={} Rbar={}", self.hyperplane, self.tag, self.poly, self.e_s, self.reduced)
    }
}

/// deg R = order(s).
pub fn degree_matches(r: &ReflectionMonodromy) -> bool {
    r.poly.degree() == r.order
}
