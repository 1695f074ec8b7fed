//! Stable gradings: the parameter table, explicit realizations of θ on X_*,
//! eigenspace dimensions, I = T^θ with named generators, and the little Weyl
//! group as an embedded G(m,p,r).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{cyclotomic_polynomial, euler_phi, Q};
use crate::linalg::{IMat, QMat};
use crate::reflgroup::{build_reflection_group, Embedding, ReflGroupError, ReflectionGroup};
use crate::rootdata::{
    build_root_datum, generated_subgroup, smith_fixed_points, weyl_centralizer_oracle, Ambient, FiniteAbelianGroup,
    LatticeAut, RootDataError, RootDatum, SignedPerm, TorusElt, TypeLabel,
};
use crate::rootsys::root_perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    ReflGroup(#[from] ReflGroupError),
    #[error("realization disagrees with descriptor {0}: {1}")]
    RealizationMismatch(String, String),
    #[error("little Weyl group of {0} disagrees with the brute-force centralizer")]
    OracleDisagreement(String),
    #[error("invalid case key: {0}")]
    InvalidCase(String),
}

/// Row of the classification table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// SL(N), Coxeter, m = N
    AInner,
    /// outer SL(N), N = rd, m = 2d
    AOuterBlocks,
    /// outer SL(N), N = rd + 1, m = 2d
    AOuterBlocksPlusOne,
    B,
    C,
    /// Spin(2n), n = rl, m = 2l
    DBlocks,
    /// Spin(2n), n = rl + 1, m = 2l
    DBlocksPlusOne,
    D4Triality,
    E6Outer,
    /// exceptional Coxeter grading
    Coxeter,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::AInner => "A-inner",
            Family::AOuterBlocks => "A2-rd",
            Family::AOuterBlocksPlusOne => "A2-rd+1",
            Family::B => "B",
            Family::C => "C",
            Family::DBlocks => "D-rl",
            Family::DBlocksPlusOne => "D-rl+1",
            Family::D4Triality => "D4-3",
            Family::E6Outer => "E6-2",
            Family::Coxeter => "coxeter",
        }
    }

    /// Families with explicit generator lists and orbit tables.
    pub fn has_lemma(self) -> bool {
        matches!(
            self,
            Family::AOuterBlocks
                | Family::AOuterBlocksPlusOne
                | Family::B
                | Family::C
                | Family::DBlocks
                | Family::DBlocksPlusOne
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingDescriptor {
    pub type_label: TypeLabel,
    pub n: usize,
    pub m: u32,
    pub twist: u32,
    pub r: usize,
    pub family: Family,
    /// d for the outer type A rows, l for B/C/D
    pub block: usize,
}

impl GradingDescriptor {
    pub fn key(&self) -> CaseKey {
        CaseKey { type_label: self.type_label, n: self.n, m: self.m, r: self.r, twist: self.twist }
    }

    /// dim a; for θ = -1 on SL(N) the group G(1,1,N) acts on a space of dimension N - 1.
    pub fn cartan_rank(&self) -> usize {
        if self.family == Family::AOuterBlocks && self.block == 1 {
            self.r - 1
        } else {
            self.r
        }
    }

    /// Parameters (M, p, r) of the little Weyl group.
    pub fn weyl_params(&self) -> (u32, u32, usize) {
        match self.family {
            Family::AOuterBlocks | Family::AOuterBlocksPlusOne => (self.block as u32, 1, self.r),
            Family::DBlocks => (self.m, 2, self.r),
            Family::E6Outer => (self.m / 2, 1, 1),
            Family::D4Triality => (self.m / 3, 1, 1),
            _ => (self.m, 1, self.r),
        }
    }
}

/// "D:n=9:m=8:r=2:twist=2"
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseKey {
    pub type_label: TypeLabel,
    pub n: usize,
    pub m: u32,
    pub r: usize,
    pub twist: u32,
}

impl fmt::Display for CaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={}:m={}:r={}:twist={}", self.type_label, self.n, self.m, self.r, self.twist)
    }
}

/// A possibly partial key; unspecified fields match anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CasePattern {
    pub type_label: Option<TypeLabel>,
    pub n: Option<usize>,
    pub m: Option<u32>,
    pub r: Option<usize>,
    pub twist: Option<u32>,
}

impl CasePattern {
    pub fn matches(&self, k: &CaseKey) -> bool {
        self.type_label.is_none_or(|t| t == k.type_label)
            && self.n.is_none_or(|x| x == k.n)
            && self.m.is_none_or(|x| x == k.m)
            && self.r.is_none_or(|x| x == k.r)
            && self.twist.is_none_or(|x| x == k.twist)
    }

    /// The unique descriptor matching the pattern.
    pub fn resolve(&self) -> Result<GradingDescriptor, GradingError> {
        let (t, n) = match (self.type_label, self.n) {
            (Some(t), Some(n)) => (t, n),
            (Some(t), None) if t.fixed_rank().is_some() => (t, t.fixed_rank().unwrap_or(0)),
            _ => return Err(GradingError::InvalidCase("type and rank are required".into())),
        };
        let found: Vec<GradingDescriptor> =
            enumerate_stable_gradings(t, n).into_iter().filter(|d| self.matches(&d.key())).collect();
        match found.len() {
            1 => Ok(found.into_iter().next().expect("one match")),
            0 => Err(GradingError::InvalidCase(format!("no stable grading matches {:?}", self))),
            _ => Err(GradingError::InvalidCase(format!("{} gradings match; add m, r or twist", found.len()))),
        }
    }
}

impl FromStr for CasePattern {
    type Err = GradingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GradingError::InvalidCase(s.to_string());
        let mut parts = s.split(':');
        let t: TypeLabel = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let mut p = CasePattern { type_label: Some(t), ..Default::default() };
        for part in parts {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.parse().map_err(|_| bad())?;
            match k {
                "n" => p.n = Some(v as usize),
                "m" => p.m = Some(v as u32),
                "r" => p.r = Some(v as usize),
                "twist" => p.twist = Some(v as u32),
                _ => return Err(bad()),
            }
        }
        Ok(p)
    }
}

impl FromStr for CaseKey {
    type Err = GradingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p: CasePattern = s.parse()?;
        match p {
            CasePattern { type_label: Some(type_label), n: Some(n), m: Some(m), r: Some(r), twist: Some(twist) } => {
                Ok(CaseKey { type_label, n, m, r, twist })
            }
            _ => Err(GradingError::InvalidCase(s.to_string())),
        }
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Stable gradings of the given simple type, sorted by (m, r).
pub fn enumerate_stable_gradings(t: TypeLabel, n: usize) -> Vec<GradingDescriptor> {
    let mut out = Vec::new();
    if !t.valid_rank(n) {
        return out;
    }
    let mk = |m: usize, twist: u32, r: usize, family: Family, block: usize| GradingDescriptor {
        type_label: t,
        n,
        m: m as u32,
        twist,
        r,
        family,
        block,
    };
    match t {
        TypeLabel::A => {
            let big_n = n + 1;
            out.push(mk(big_n, 1, 1, Family::AInner, big_n));
            if n >= 2 {
                for r in divisors(big_n) {
                    let d = big_n / r;
                    if d % 2 == 1 {
                        out.push(mk(2 * d, 2, r, Family::AOuterBlocks, d));
                    }
                }
                for r in divisors(n) {
                    let d = n / r;
                    if d % 2 == 1 && d > 1 {
                        out.push(mk(2 * d, 2, r, Family::AOuterBlocksPlusOne, d));
                    }
                }
            }
        }
        TypeLabel::B | TypeLabel::C => {
            for l in divisors(n) {
                out.push(mk(2 * l, 1, n / l, if t == TypeLabel::B { Family::B } else { Family::C }, l));
            }
        }
        TypeLabel::D => {
            for l in divisors(n) {
                let r = n / l;
                out.push(mk(2 * l, if r % 2 == 1 { 2 } else { 1 }, r, Family::DBlocks, l));
            }
            for l in divisors(n - 1) {
                if l > 1 {
                    let r = (n - 1) / l;
                    out.push(mk(2 * l, if r.is_multiple_of(2) { 2 } else { 1 }, r, Family::DBlocksPlusOne, l));
                }
            }
            if n == 4 {
                out.push(mk(12, 3, 1, Family::D4Triality, 0));
            }
        }
        TypeLabel::E6 => {
            out.push(mk(12, 1, 1, Family::Coxeter, 0));
            out.push(mk(18, 2, 1, Family::E6Outer, 0));
        }
        TypeLabel::E7 => out.push(mk(18, 1, 1, Family::Coxeter, 0)),
        TypeLabel::E8 => out.push(mk(30, 1, 1, Family::Coxeter, 0)),
        TypeLabel::F4 => out.push(mk(12, 1, 1, Family::Coxeter, 0)),
        TypeLabel::G2 => out.push(mk(6, 1, 1, Family::Coxeter, 0)),
    }
    out.sort_by_key(|d| (d.m, d.r, d.twist));
    out
}

/// θ on X_* together with the embedding of its little Weyl group.
#[derive(Clone, Debug)]
pub struct GradedAutomorphism {
    pub desc: GradingDescriptor,
    pub datum: RootDatum,
    pub theta: LatticeAut,
    /// description of θ as a Weyl element times a diagram automorphism
    pub word: String,
    /// diagram automorphism on simple roots (0-based), identity when inner
    pub diagram: Vec<usize>,
    /// θ(X_α) = e^{2πi c_α} X_{θα}, exponents c_α; all zero here
    pub root_scalars: Vec<Q>,
    pub embedding: Embedding,
}

fn sp_product(n: usize, f: &[SignedPerm]) -> SignedPerm {
    SignedPerm::product(n, f)
}

/// t_{s+1,s+2} ⋯ t_{s+d-1,s+d}
fn cycle(n: usize, start: usize, d: usize) -> SignedPerm {
    let f: Vec<SignedPerm> = (1..d).map(|a| SignedPerm::transposition(n, start + a, start + a + 1)).collect();
    sp_product(n, &f)
}

/// t_{s+1,s+2} ⋯ t_{s+l-1,s+l} t_{s+l}
fn signed_cycle(n: usize, start: usize, l: usize) -> SignedPerm {
    cycle(n, start, l).compose(&SignedPerm::sign(n, start + l))
}

/// Π_a t_{(k-1)L+a, kL+a}, k 1-based
fn block_swap(n: usize, k: usize, size: usize) -> SignedPerm {
    let f: Vec<SignedPerm> =
        (1..=size).map(|a| SignedPerm::transposition(n, (k - 1) * size + a, k * size + a)).collect();
    sp_product(n, &f)
}

fn mismatch(d: &GradingDescriptor, msg: impl Into<String>) -> GradingError {
    GradingError::RealizationMismatch(d.key().to_string(), msg.into())
}

pub fn realize_theta(desc: &GradingDescriptor) -> Result<GradedAutomorphism, GradingError> {
    let datum = build_root_datum(desc.type_label, desc.n)?;
    let k = desc.n;
    let ident: Vec<usize> = (0..k).collect();
    let (theta, word, diagram, embedding) = match desc.family {
        Family::Coxeter | Family::AInner => {
            let c = datum.coxeter_element();
            let word = (1..=k).map(|i| format!("s{}", i)).collect::<Vec<_>>().join(" ");
            (c.clone(), word, ident, Embedding { diagonal: vec![c], swaps: vec![] })
        }
        Family::E6Outer | Family::D4Triality => {
            let (sigma, reps, e): (Vec<usize>, Vec<usize>, u64) = if desc.family == Family::E6Outer {
                (vec![5, 1, 4, 3, 2, 0], vec![1, 2, 3, 4], 2)
            } else {
                (vec![2, 1, 3, 0], vec![1, 2], 3)
            };
            let w = reps.iter().fold(IMat::identity(k), |acc, &i| acc.mul(&datum.simple_reflection(i)));
            let theta = w.mul(&datum.diagram_matrix(&sigma));
            let word = format!(
                "{} . diagram{:?}",
                reps.iter().map(|i| format!("s{}", i)).collect::<Vec<_>>().join(" "),
                sigma.iter().map(|x| x + 1).collect::<Vec<_>>()
            );
            let gen = theta.pow(e);
            (theta, word, sigma, Embedding { diagonal: vec![gen], swaps: vec![] })
        }
        _ => {
            let amb = Ambient::new(desc.type_label, desc.n).ok_or_else(|| mismatch(desc, "no ambient model"))?;
            let dim = amb.dim;
            let (r, b) = (desc.r, desc.block);
            let (theta_sp, diag, swaps, word) = match desc.family {
                Family::AOuterBlocks | Family::AOuterBlocksPlusOne => {
                    let taus: Vec<SignedPerm> = (0..r).map(|i| cycle(dim, i * b, b)).collect();
                    let th = SignedPerm::minus_one(dim).compose(&sp_product(dim, &taus));
                    (th, taus, (1..r).map(|s| block_swap(dim, s, b)).collect::<Vec<_>>(), "-(tau_1 ... tau_r)")
                }
                Family::B | Family::C | Family::DBlocks => {
                    let taus: Vec<SignedPerm> = (0..r).map(|i| signed_cycle(dim, i * b, b)).collect();
                    let th = sp_product(dim, &taus);
                    (th, taus, (1..r).map(|s| block_swap(dim, s, b)).collect(), "tau_1 ... tau_r")
                }
                Family::DBlocksPlusOne => {
                    let last = SignedPerm::sign(dim, dim);
                    let blocks: Vec<SignedPerm> = (0..r).map(|i| signed_cycle(dim, i * b, b)).collect();
                    let taus: Vec<SignedPerm> = blocks.iter().map(|c| c.compose(&last)).collect();
                    let th = sp_product(dim, &blocks).compose(&last);
                    (th, taus, (1..r).map(|s| block_swap(dim, s, b)).collect(), "tau_1 ... tau_r t_n^{r+1}")
                }
                _ => unreachable!("classical families handled above"),
            };
            let inner = amb.in_weyl_group(&theta_sp);
            if inner != (desc.twist == 1) {
                return Err(mismatch(desc, "inner/outer class disagrees with the twist"));
            }
            let theta = amb.lattice_matrix(&theta_sp);
            let emb = Embedding {
                diagonal: diag.iter().map(|s| amb.lattice_matrix(s)).collect(),
                swaps: swaps.iter().map(|s| amb.lattice_matrix(s)).collect(),
            };
            let diagram = if inner { ident } else { outer_diagram(desc.type_label, k) };
            (theta, word.to_string(), diagram, emb)
        }
    };
    let theta = LatticeAut::new(theta).ok_or_else(|| mismatch(desc, "θ has no finite order"))?;
    if theta.order != desc.m as u64 {
        return Err(mismatch(desc, format!("θ has order {}", theta.order)));
    }
    let a = eigen_multiplicity(&theta.matrix, desc.m);
    if a != desc.cartan_rank() {
        return Err(mismatch(desc, format!("ζ_m-eigenspace has dimension {}", a)));
    }
    let root_scalars = vec![Q::zero(); datum.roots.len()];
    Ok(GradedAutomorphism { desc: desc.clone(), datum, theta, word, diagram, root_scalars, embedding })
}

fn outer_diagram(t: TypeLabel, k: usize) -> Vec<usize> {
    match t {
        TypeLabel::A => (0..k).rev().collect(),
        TypeLabel::D => {
            let mut v: Vec<usize> = (0..k).collect();
            v.swap(k - 2, k - 1);
            v
        }
        _ => (0..k).collect(),
    }
}

/// Multiplicity of each primitive e-th root of unity as an eigenvalue of θ.
pub fn eigen_multiplicity(theta: &IMat, e: u32) -> usize {
    let p = theta.poly_eval(&cyclotomic_polynomial(e));
    let nullity = p.cols() - QMat::from_imat(&p).rank();
    nullity / euler_phi(e) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingReport {
    pub key: CaseKey,
    /// dim g_i, i ∈ Z/m
    pub eigenspace_dims: Vec<usize>,
    pub dim_t0: usize,
    pub fixed_root_lines: usize,
    pub root_orbit_sizes: Vec<usize>,
    pub invariant_factors: Vec<i64>,
    pub named_generators: Vec<(String, String)>,
    pub named_generate_i: bool,
}

/// θ with I and the little Weyl group attached.
#[derive(Clone, Debug)]
pub struct Grading {
    pub aut: GradedAutomorphism,
    pub fixed: FiniteAbelianGroup,
    /// generators as stated in the closed forms, before any check
    pub named: Vec<(String, TorusElt)>,
    pub weyl: ReflectionGroup,
    pub root_perm: Vec<usize>,
}

impl Grading {
    pub fn new(desc: &GradingDescriptor) -> Result<Self, GradingError> {
        let aut = realize_theta(desc)?;
        let mut fixed = smith_fixed_points(&aut.theta.matrix)?;
        let named = named_generators(&aut);
        if !named.is_empty() {
            fixed.set_named_generators(named.clone());
        }
        let (mm, p, r) = desc.weyl_params();
        let weyl = build_reflection_group(mm, p, r)?;
        let root_perm = root_perm(&aut.datum, &aut.theta.matrix);
        Ok(Grading { aut, fixed, named, weyl, root_perm })
    }

    pub fn key(&self) -> CaseKey {
        self.aut.desc.key()
    }

    pub fn desc(&self) -> &GradingDescriptor {
        &self.aut.desc
    }

    pub fn theta(&self) -> &IMat {
        &self.aut.theta.matrix
    }

    pub fn lattice_image(&self, g: &crate::reflgroup::MonomialElement) -> IMat {
        self.aut.embedding.lattice_image(g)
    }

    /// Orbits of θ on root indices.
    pub fn root_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.root_perm.len()];
        let mut out = Vec::new();
        for s in 0..self.root_perm.len() {
            if seen[s] {
                continue;
            }
            let mut o = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                o.push(x);
                x = self.root_perm[x];
            }
            out.push(o);
        }
        out
    }

    /// Whether the named generators generate exactly T^θ.
    pub fn named_generate_fixed_points(&self) -> bool {
        if self.named.is_empty() {
            return true;
        }
        let k = self.aut.datum.rank;
        let gens: Vec<TorusElt> = self.named.iter().map(|g| g.1.clone()).collect();
        let sub = generated_subgroup(&gens, k);
        let all: HashSet<TorusElt> = self.fixed.elements().into_iter().collect();
        sub == all
    }

    /// Invariant factors of the subgroup generated by the named generators.
    pub fn named_invariant_factors(&self) -> Vec<i64> {
        let k = self.aut.datum.rank;
        let gens: Vec<TorusElt> = self.named.iter().map(|g| g.1.clone()).collect();
        let sub = generated_subgroup(&gens, k);
        abelian_invariants(&sub)
    }
}

/// Elementary divisors of a finite abelian subgroup of T given as a set.
pub fn abelian_invariants(set: &HashSet<TorusElt>) -> Vec<i64> {
    let n = set.len() as i64;
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        if rest % p != 0 {
            p += 1;
            continue;
        }
        let mut pk = 1;
        while rest % p == 0 {
            rest /= p;
            pk *= p;
        }
        let mut logs = vec![0u32];
        let mut q = 1;
        while q < pk {
            q *= p;
            let c = set.iter().filter(|t| q % t.order() == 0).count() as i64;
            let mut l = 0;
            let mut c2 = c;
            while c2 > 1 {
                c2 /= p;
                l += 1;
            }
            logs.push(l);
        }
        let ge: Vec<u32> = (1..logs.len()).map(|i| logs[i] - logs[i - 1]).collect();
        for i in 0..ge.len() {
            for _ in 0..ge[i] - ge.get(i + 1).copied().unwrap_or(0) {
                out.push(p.pow(i as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Product of α̌_j(e^{2πi q}) with 1-based j.
fn cv(k: usize, vals: &[(usize, Q)]) -> TorusElt {
    TorusElt::from_coroot_values(k, vals)
}

fn half() -> Q {
    Q::new(1, 2)
}

/// Π_{j=1}^{count} α̌_{start+2j-1}(-1)
fn alternating(start: usize, count: usize) -> Vec<(usize, Q)> {
    (1..=count).map(|j| (start + 2 * j - 1, half())).collect()
}

/// The closed-form generators of I attached to a classical family, or the
/// standard center generator for the exceptional Coxeter cases that have one.
pub fn named_generators(aut: &GradedAutomorphism) -> Vec<(String, TorusElt)> {
    let d = &aut.desc;
    let k = aut.datum.rank;
    let (r, b) = (d.r, d.block);
    let g = |i: usize| format!("gamma{}", i);
    match d.family {
        Family::AInner => {
            let nn = (k + 1) as i64;
            vec![("z".into(), cv(k, &(1..=k).map(|j| (j, Q::new(nn - j as i64, nn))).collect::<Vec<_>>()))]
        }
        Family::AOuterBlocks => (1..r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b)))).collect(),
        Family::AOuterBlocksPlusOne => {
            let l = (b - 1) / 2;
            (1..=r)
                .map(|i| {
                    let mut v = alternating((i - 1) * b, l);
                    v.extend((i * b..=r * b).map(|j| (j, half())));
                    (g(i), cv(k, &v))
                })
                .collect()
        }
        Family::B => {
            let mut v: Vec<(String, TorusElt)> =
                (1..r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b)))).collect();
            v.push((g(r), cv(k, &[(r * b, half())])));
            v
        }
        Family::C => {
            if b % 2 == 0 {
                (1..=r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b / 2)))).collect()
            } else {
                let mut v: Vec<(String, TorusElt)> =
                    (1..r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b)))).collect();
                v.push((g(r), cv(k, &alternating((r - 1) * b, b.div_ceil(2)))));
                v
            }
        }
        Family::DBlocks => {
            let mut v: Vec<(String, TorusElt)> =
                (1..r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b)))).collect();
            v.push((g(r), cv(k, &[(r * b - 1, half()), (r * b, half())])));
            v
        }
        Family::DBlocksPlusOne => {
            let mut v: Vec<(String, TorusElt)> =
                (1..r).map(|kk| (g(kk), cv(k, &alternating((kk - 1) * b, b)))).collect();
            if b % 2 == 0 {
                let mut w = vec![(r * b, Q::new(1, 4)), (r * b + 1, Q::new(3, 4))];
                w.extend(alternating((r - 1) * b, b / 2));
                v.push((g(r), cv(k, &w)));
            } else {
                v.push((g(r), cv(k, &alternating((r - 1) * b, b.div_ceil(2)))));
                v.push((g(r + 1), cv(k, &[(r * b, half()), (r * b + 1, half())])));
            }
            v
        }
        Family::Coxeter => match d.type_label {
            TypeLabel::E6 => {
                vec![("z".into(), cv(k, &[(1, Q::new(1, 3)), (3, Q::new(2, 3)), (5, Q::new(1, 3)), (6, Q::new(2, 3))]))]
            }
            TypeLabel::E7 => vec![("z".into(), cv(k, &[(2, half()), (5, half()), (7, half())]))],
            _ => vec![],
        },
        Family::D4Triality | Family::E6Outer => vec![],
    }
}

/// Images of the fundamental coweights (orbit sums under a diagram
/// automorphism) in Z(G).
pub fn center_image_generators(datum: &RootDatum, diagram: &[usize]) -> Vec<(Vec<usize>, TorusElt)> {
    let k = datum.rank;
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = i;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = diagram[x];
        }
        orbit.sort_unstable();
        let mut v = vec![Q::zero(); k];
        for &j in &orbit {
            for (a, c) in v.iter_mut().zip(&datum.coweights[j]) {
                *a += c;
            }
        }
        out.push((orbit.iter().map(|j| j + 1).collect(), TorusElt::new(v)));
    }
    out
}

/// Eigenspace dimensions of θ on g, with c_α = 1 on every root.
pub fn grade_lie_algebra(gr: &Grading) -> GradingReport {
    let m = gr.desc().m as usize;
    let theta = gr.theta();
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for e in divisors(m) {
        mult.insert(e, eigen_multiplicity(theta, e as u32));
    }
    let orbits = gr.root_orbits();
    let mut dims = vec![0usize; m];
    for (i, dim) in dims.iter_mut().enumerate() {
        *dim = mult[&(m / i.gcd(&m))];
        for o in &orbits {
            // an orbit of length L spans the eigenvalues ζ with ζ^L = 1
            if i % (m / o.len()) == 0 {
                *dim += 1;
            }
        }
    }
    let fixed_root_lines = orbits.iter().filter(|o| o.len() == 1).count();
    let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    GradingReport {
        key: gr.key(),
        eigenspace_dims: dims,
        dim_t0: mult[&1],
        fixed_root_lines,
        root_orbit_sizes: sizes,
        invariant_factors: gr.fixed.invariant_factors().to_vec(),
        named_generators: gr.named.iter().map(|(n, t)| (n.clone(), t.to_string())).collect(),
        named_generate_i: gr.named_generate_fixed_points(),
    }
}

/// det(t | g_1) = Π_{α ∈ Φ/θ} α(t) as an element of Q/Z.
pub fn tau_det(gr: &Grading, t: &TorusElt) -> Q {
    let reps = gr.root_orbits();
    let s = reps.iter().fold(Q::zero(), |acc, o| acc + t.eval(&gr.aut.datum.roots[o[0]]));
    crate::linalg::frac(s)
}

/// Lattice images of every element of W_a, sorted.
pub fn little_weyl_images(gr: &Grading, bound: u64) -> Result<Vec<IMat>, GradingError> {
    let els = gr.weyl.elements(bound)?;
    let mut out: Vec<IMat> = els.iter().map(|g| gr.lattice_image(g)).collect();
    out.sort();
    Ok(out)
}

/// Compare the embedded little Weyl group with the brute-force centralizer.
pub fn check_little_weyl_group(gr: &Grading, bound: u64) -> Result<bool, GradingError> {
    let oracle = weyl_centralizer_oracle(&gr.aut.datum, gr.theta(), bound)?;
    let mine = little_weyl_images(gr, bound.max(gr.weyl.order()))?;
    Ok(oracle == mine)
}

/// Generator images commute with θ and the cyclic part has the right order.
pub fn check_embedding_generators(gr: &Grading) -> bool {
    let th = gr.theta();
    gr.weyl.generator_elements().iter().all(|g| {
        let w = gr.lattice_image(g);
        w.mul(th) == th.mul(&w) && w.order(10_000) == Some(g.order())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn realizations_exist() {
        for (t, n) in [
            (TypeLabel::A, 5),
            (TypeLabel::A, 6),
            (TypeLabel::B, 4),
            (TypeLabel::C, 6),
            (TypeLabel::D, 4),
            (TypeLabel::D, 7),
            (TypeLabel::E6, 6),
            (TypeLabel::G2, 2),
        ] {
            for d in enumerate_stable_gradings(t, n) {
                let g = Grading::new(&d).unwrap_or_else(|e| panic!("{}: {}", d.key(), e));
                assert!(check_embedding_generators(&g), "{}", d.key());
            }
        }
    }

    #[test]
    fn case_key_roundtrip() {
        let k: CaseKey = "D:n=9:m=8:r=2:twist=2".parse().unwrap();
        assert_eq!(k.to_string(), "D:n=9:m=8:r=2:twist=2");
    }
}
