//! The imprimitive reflection groups G(m,p,r) for p ∈ {1,2} as monomial
//! data, their distinguished reflections, reflection subgroups, quotients
//! by normal reflection subgroups and cyclotomic Hecke presentations.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{BinomialProduct, Q};
use crate::linalg::IMat;
use crate::rootdata::TorusElt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflGroupError {
    #[error("G(m,p,r) is only implemented for p in {{1,2}}, got p={0}")]
    UnsupportedP(u32),
    #[error("p={p} does not divide m={m}")]
    BadParameters { m: u32, p: u32 },
    #[error("group of order {order} exceeds enumeration bound {bound}")]
    SizeBoundExceeded { order: u64, bound: u64 },
    #[error("relation for hyperplane orbit {orbit} has degree {got}, expected {expected}")]
    DegreeMismatch { orbit: usize, expected: u32, got: u32 },
    #[error("reflections in one hyperplane orbit carry different relations: {0} vs {1}")]
    OrbitInconsistency(String, String),
    #[error("no relation supplied for hyperplane {0}")]
    MissingRelation(String),
    #[error("element is not a reflection: {0}")]
    NotAReflection(String),
    #[error("no embedding attached to the reflection group")]
    NoEmbeddingAttached,
    #[error("quotient exceeds {0} cosets")]
    QuotientTooLarge(usize),
}

/// g = D_c ∘ P_σ with P_σ e_i = e_{σ(i)} and D_c e_j = ζ_m^{c_j} e_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialElement {
    pub m: u32,
    /// 0-based images
    pub perm: Vec<usize>,
    pub phases: Vec<u32>,
}

impl MonomialElement {
    pub fn identity(m: u32, r: usize) -> Self {
        MonomialElement { m, perm: (0..r).collect(), phases: vec![0; r] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// diag(1,…,ζ^a at i,…,1), i 0-based
    pub fn diagonal(m: u32, r: usize, i: usize, a: i64) -> Self {
        let mut g = Self::identity(m, r);
        g.phases[i] = a.rem_euclid(m as i64) as u32;
        g
    }

    /// s_ij^{(k)}: e_i ↦ ζ^k e_j, e_j ↦ ζ^{-k} e_i (0-based i ≠ j)
    pub fn transposition(m: u32, r: usize, i: usize, j: usize, k: i64) -> Self {
        let mut g = Self::identity(m, r);
        g.perm.swap(i, j);
        g.phases[j] = k.rem_euclid(m as i64) as u32;
        g.phases[i] = (-k).rem_euclid(m as i64) as u32;
        g
    }

    /// (σ,c)(τ,d) = (στ, c + σ·d)
    pub fn mul(&self, other: &Self) -> Self {
        let r = self.rank();
        let perm: Vec<usize> = (0..r).map(|i| self.perm[other.perm[i]]).collect();
        let mut phases = self.phases.clone();
        for i in 0..r {
            let j = self.perm[i];
            phases[j] = (phases[j] + other.phases[i]) % self.m;
        }
        MonomialElement { m: self.m, perm, phases }
    }

    pub fn inv(&self) -> Self {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut phases = vec![0; r];
        for i in 0..r {
            perm[self.perm[i]] = i;
        }
        // g e_i = ζ^{c_{σi}} e_{σi}, so g^{-1} e_{σi} = ζ^{-c_{σi}} e_i
        for (i, p) in phases.iter_mut().enumerate() {
            *p = (self.m - self.phases[self.perm[i]] % self.m) % self.m;
        }
        MonomialElement { m: self.m, perm, phases }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.m, self.rank());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(|c| *c == 0) && self.perm.iter().enumerate().all(|(i, j)| i == *j)
    }

    pub fn order(&self) -> u64 {
        let mut k = 1u64;
        let mut g = self.clone();
        while !g.is_identity() {
            g = g.mul(self);
            k += 1;
        }
        k
    }

    pub fn conj(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inv())
    }

    pub fn phase_sum(&self) -> u32 {
        self.phases.iter().sum::<u32>() % self.m
    }

    /// det as an element of Q/Z
    pub fn det(&self) -> Q {
        let mut seen = vec![false; self.rank()];
        let mut sign = 0i64;
        for i in 0..self.rank() {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut x = i;
            while !seen[x] {
                seen[x] = true;
                x = self.perm[x];
                len += 1;
            }
            sign += len - 1;
        }
        let q = Q::new(sign, 2) + Q::new(self.phase_sum() as i64, self.m as i64);
        q - Q::from(q.floor().to_integer())
    }

    /// Shape as a reflection, if it is one.
    pub fn reflection_kind(&self) -> Option<ReflKind> {
        let moved: Vec<usize> = (0..self.rank()).filter(|&i| self.perm[i] != i).collect();
        match moved.len() {
            0 => {
                let nz: Vec<usize> = (0..self.rank()).filter(|&i| self.phases[i] != 0).collect();
                if nz.len() == 1 {
                    Some(ReflKind::Diagonal { i: nz[0], power: self.phases[nz[0]] })
                } else {
                    None
                }
            }
            2 => {
                let (i, j) = (moved[0], moved[1]);
                let others_zero = (0..self.rank()).all(|a| a == i || a == j || self.phases[a] == 0);
                if others_zero && (self.phases[i] + self.phases[j]).is_multiple_of(self.m) {
                    Some(ReflKind::Transposition { i, j, k: self.phases[j] })
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for MonomialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.perm.iter().map(|x| (x + 1).to_string()).collect();
        let c: Vec<String> = self.phases.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}|{}]", p.join(" "), c.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReflKind {
    /// s_ij^{(k)}, i < j, 0-based
    Transposition { i: usize, j: usize, k: u32 },
    /// diag(…, ζ^power at i, …)
    Diagonal { i: usize, power: u32 },
}

/// A reflecting hyperplane, independent of which generator of its cyclic group is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hyperplane {
    /// fixed by s_ij^{(k)}: x_j = ζ^k x_i
    Mirror {
        i: usize,
        j: usize,
        k: u32,
    },
    Coordinate(usize),
}

impl Hyperplane {
    pub fn of(g: &MonomialElement) -> Option<Self> {
        match g.reflection_kind()? {
            ReflKind::Transposition { i, j, k } => Some(Hyperplane::Mirror { i, j, k }),
            ReflKind::Diagonal { i, .. } => Some(Hyperplane::Coordinate(i)),
        }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperplane::Mirror { i, j, k } => write!(f, "s_{},{}^({})", i + 1, j + 1, k),
            Hyperplane::Coordinate(i) => write!(f, "tau_{}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedReflection {
    pub kind: ReflKind,
    pub element: MonomialElement,
    pub order: u32,
    pub hyperplane_orbit: usize,
}

impl DistinguishedReflection {
    pub fn hyperplane(&self) -> Hyperplane {
        Hyperplane::of(&self.element).expect("reflection")
    }
}

/// G(m,p,r) with its standard generators and distinguished reflections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReflectionGroup {
    pub m: u32,
    pub p: u32,
    pub r: usize,
    pub generators: Vec<(String, MonomialElement)>,
    pub reflections: Vec<DistinguishedReflection>,
    pub num_orbits: usize,
}

pub fn group_order(m: u32, p: u32, r: usize) -> u64 {
    let fact: u64 = (1..=r as u64).product();
    (m as u64).pow(r as u32) * fact / p as u64
}

pub fn build_reflection_group(m: u32, p: u32, r: usize) -> Result<ReflectionGroup, ReflGroupError> {
    if p != 1 && p != 2 {
        return Err(ReflGroupError::UnsupportedP(p));
    }
    if m == 0 || r == 0 || !m.is_multiple_of(p) {
        return Err(ReflGroupError::BadParameters { m, p });
    }
    let mut generators = Vec::new();
    for i in 0..r.saturating_sub(1) {
        generators.push((format!("s{}", i + 1), MonomialElement::transposition(m, r, i, i + 1, 0)));
    }
    if p == 1 {
        if m > 1 {
            generators.push((format!("tt{}", r), MonomialElement::diagonal(m, r, r - 1, 1)));
        }
    } else {
        if r >= 2 {
            generators.push((format!("s'{}", r - 1), MonomialElement::transposition(m, r, r - 2, r - 1, 1)));
        }
        if m > 2 {
            generators.push((format!("t{}", r), MonomialElement::diagonal(m, r, r - 1, 2)));
        }
    }
    let mut reflections = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in 0..m {
                let g = MonomialElement::transposition(m, r, i, j, k as i64);
                reflections.push(DistinguishedReflection {
                    kind: ReflKind::Transposition { i, j, k },
                    element: g,
                    order: 2,
                    hyperplane_orbit: 0,
                });
            }
        }
    }
    if m / p > 1 {
        for i in 0..r {
            let g = MonomialElement::diagonal(m, r, i, p as i64);
            reflections.push(DistinguishedReflection {
                kind: ReflKind::Diagonal { i, power: p },
                element: g,
                order: m / p,
                hyperplane_orbit: 0,
            });
        }
    }
    let gens: Vec<MonomialElement> = generators.iter().map(|g| g.1.clone()).collect();
    let hyps: Vec<Hyperplane> = reflections.iter().map(|s| s.hyperplane()).collect();
    let orbit = hyperplane_orbits(&hyps, &gens);
    for (s, o) in reflections.iter_mut().zip(&orbit) {
        s.hyperplane_orbit = *o;
    }
    let num_orbits = orbit.iter().copied().max().map_or(0, |x| x + 1);
    Ok(ReflectionGroup { m, p, r, generators, reflections, num_orbits })
}

/// Orbit ids (in order of first appearance) of hyperplanes under conjugation by `gens`.
pub fn hyperplane_orbits(hyps: &[Hyperplane], gens: &[MonomialElement]) -> Vec<usize> {
    let index: HashMap<Hyperplane, usize> = hyps.iter().enumerate().map(|(i, h)| (*h, i)).collect();
    let mut id = vec![usize::MAX; hyps.len()];
    let mut next = 0;
    for start in 0..hyps.len() {
        if id[start] != usize::MAX {
            continue;
        }
        id[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = hyperplane_image(&hyps[x], g);
                if let Some(&yi) = index.get(&y) {
                    if id[yi] == usize::MAX {
                        id[yi] = next;
                        queue.push_back(yi);
                    }
                }
            }
        }
        next += 1;
    }
    id
}

fn hyperplane_image(h: &Hyperplane, g: &MonomialElement) -> Hyperplane {
    let r = g.rank();
    let rep = match *h {
        Hyperplane::Mirror { i, j, k } => MonomialElement::transposition(g.m, r, i, j, k as i64),
        Hyperplane::Coordinate(i) => MonomialElement::diagonal(g.m, r, i, 1),
    };
    Hyperplane::of(&rep.conj(g)).expect("conjugate of a reflection")
}

/// Closed-form number of hyperplane orbits of G(m,p,r).
pub fn closed_form_orbit_count(m: u32, p: u32, r: usize) -> usize {
    let trans = match (p, r) {
        (_, 1) => 0,
        (2, 2) => 2,
        _ => 1,
    };
    trans + usize::from(m / p > 1)
}

impl ReflectionGroup {
    pub fn order(&self) -> u64 {
        group_order(self.m, self.p, self.r)
    }

    pub fn contains(&self, g: &MonomialElement) -> bool {
        g.m == self.m && g.rank() == self.r && g.phase_sum().is_multiple_of(self.p)
    }

    pub fn identity(&self) -> MonomialElement {
        MonomialElement::identity(self.m, self.r)
    }

    pub fn generator_elements(&self) -> Vec<MonomialElement> {
        self.generators.iter().map(|g| g.1.clone()).collect()
    }

    /// Every element, in a fixed order.
    pub fn elements(&self, bound: u64) -> Result<Vec<MonomialElement>, ReflGroupError> {
        let order = self.order();
        if order > bound {
            return Err(ReflGroupError::SizeBoundExceeded { order, bound });
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut perm: Vec<usize> = (0..self.r).collect();
        let phases = crate::rootdata::mixed_radix(&vec![self.m as i64; self.r]);
        loop {
            for c in &phases {
                let g =
                    MonomialElement { m: self.m, perm: perm.clone(), phases: c.iter().map(|x| *x as u32).collect() };
                if self.contains(&g) {
                    out.push(g);
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(out)
    }

    /// Distinguished reflections found by scanning all elements.
    pub fn reflections_by_enumeration(&self, bound: u64) -> Result<Vec<MonomialElement>, ReflGroupError> {
        let all = self.elements(bound)?;
        let mut by_hyp: BTreeMap<Hyperplane, Vec<MonomialElement>> = BTreeMap::new();
        for g in all {
            if let Some(h) = Hyperplane::of(&g) {
                by_hyp.entry(h).or_default().push(g);
            }
        }
        let mut out = Vec::new();
        for (_, gs) in by_hyp {
            let n = gs.len() as i64 + 1;
            let target = Q::new(1, n);
            let s = gs.into_iter().find(|g| g.det() == target).expect("hyperplane group is cyclic");
            out.push(s);
        }
        out.sort();
        Ok(out)
    }

    /// Conjugacy classes of hyperplanes by brute force over the whole group.
    pub fn orbits_by_enumeration(&self, bound: u64) -> Result<usize, ReflGroupError> {
        let all = self.elements(bound)?;
        let hyps: Vec<Hyperplane> = self.reflections.iter().map(|s| s.hyperplane()).collect();
        let ids = hyperplane_orbits(&hyps, &all);
        Ok(ids.into_iter().collect::<HashSet<_>>().len())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A homomorphism G(m,1,r) ⊇ G(m,p,r) → GL(X_*): images of the diagonal
/// generators diag(…ζ at j…) and of the adjacent swaps s_k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Embedding {
    pub diagonal: Vec<IMat>,
    pub swaps: Vec<IMat>,
}

impl Embedding {
    pub fn lattice_image(&self, g: &MonomialElement) -> IMat {
        let k = self.diagonal[0].rows();
        let mut out = IMat::identity(k);
        for (j, c) in g.phases.iter().enumerate() {
            if *c != 0 {
                out = out.mul(&self.diagonal[j].pow(*c as u64));
            }
        }
        // P_σ as a word in adjacent swaps
        let mut sigma = g.perm.clone();
        loop {
            let mut inv = vec![0; sigma.len()];
            for (i, &x) in sigma.iter().enumerate() {
                inv[x] = i;
            }
            let Some(k0) = (0..sigma.len().saturating_sub(1)).find(|&k0| inv[k0] > inv[k0 + 1]) else {
                break;
            };
            out = out.mul(&self.swaps[k0]);
            for x in sigma.iter_mut() {
                if *x == k0 {
                    *x = k0 + 1;
                } else if *x == k0 + 1 {
                    *x = k0;
                }
            }
        }
        out
    }
}

/// Action of g on a torus element through an embedding.
pub fn reflection_action_on_group(
    emb: Option<&Embedding>,
    g: &MonomialElement,
    x: &TorusElt,
) -> Result<TorusElt, ReflGroupError> {
    let emb = emb.ok_or(ReflGroupError::NoEmbeddingAttached)?;
    Ok(x.act(&emb.lattice_image(g)))
}

/// (M, P, t) parameters of an irreducible imprimitive factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    pub m: u32,
    pub p: u32,
    pub r: usize,
}

impl GroupType {
    pub fn order(&self) -> u64 {
        group_order(self.m, self.p, self.r)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// G(q,2,1) is cyclic of order q/2.
    pub fn canonical(self) -> Self {
        if self.r == 1 && self.p == 2 {
            GroupType { m: self.m / 2, p: 1, r: 1 }
        } else {
            self
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.m, self.p, self.r)
    }
}

/// Product type with trivial factors dropped, as a sorted string.
pub fn product_type_label(types: &[GroupType]) -> String {
    let mut v: Vec<String> =
        types.iter().map(|t| t.canonical()).filter(|t| !t.is_trivial()).map(|t| t.to_string()).collect();
    v.sort();
    if v.is_empty() {
        "1".into()
    } else {
        v.join(" x ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub indices: Vec<usize>,
    /// basis rescaling f_i = ζ^{o_i} e_i making spanning-tree mirrors phase 0
    offsets: Vec<u32>,
    /// generator of the subgroup of Z/m spanned by normalized mirror phases
    mirror_gen: u32,
    /// generator of the subgroup of Z/m spanned by diagonal reflection powers
    diag_gen: u32,
}

/// The subgroup of G(m,1,r) generated by a set of reflections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionSubgroup {
    pub m: u32,
    pub r: usize,
    pub blocks: Vec<Block>,
    pub generators: Vec<MonomialElement>,
    block_of: Vec<usize>,
}

impl ReflectionSubgroup {
    pub fn generated(m: u32, r: usize, gens: &[MonomialElement]) -> Result<Self, ReflGroupError> {
        let gens: Vec<MonomialElement> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let kinds: Vec<ReflKind> = gens
            .iter()
            .map(|g| g.reflection_kind().ok_or_else(|| ReflGroupError::NotAReflection(g.to_string())))
            .collect::<Result<_, _>>()?;
        let mut adj: Vec<Vec<(usize, u32)>> = vec![vec![]; r];
        for k in &kinds {
            if let ReflKind::Transposition { i, j, k } = *k {
                adj[i].push((j, k));
                adj[j].push((i, (m - k) % m));
            }
        }
        let mut block_of = vec![usize::MAX; r];
        let mut offsets = vec![0u32; r];
        let mut blocks = Vec::new();
        for s in 0..r {
            if block_of[s] != usize::MAX {
                continue;
            }
            let b = blocks.len();
            block_of[s] = b;
            let mut idx = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, k) in &adj[x] {
                    if block_of[y] == usize::MAX {
                        block_of[y] = b;
                        // s_xy^{(k)} has phase k + o_x - o_y in the new basis
                        offsets[y] = (offsets[x] + k) % m;
                        idx.push(y);
                        queue.push_back(y);
                    }
                }
            }
            idx.sort_unstable();
            blocks.push(Block { indices: idx, offsets: vec![], mirror_gen: m, diag_gen: m });
        }
        for k in &kinds {
            match *k {
                ReflKind::Transposition { i, j, k } => {
                    let b = &mut blocks[block_of[i]];
                    let ph = (k + offsets[i] + m - offsets[j]) % m;
                    b.mirror_gen = b.mirror_gen.gcd(&ph);
                }
                ReflKind::Diagonal { i, power } => {
                    let b = &mut blocks[block_of[i]];
                    b.diag_gen = b.diag_gen.gcd(&power);
                }
            }
        }
        for b in blocks.iter_mut() {
            b.offsets = b.indices.iter().map(|&i| offsets[i]).collect();
        }
        Ok(ReflectionSubgroup { m, r, blocks, generators: gens, block_of })
    }

    fn offset(&self, i: usize) -> u32 {
        let b = &self.blocks[self.block_of[i]];
        b.offsets[b.indices.iter().position(|x| *x == i).expect("index in its block")]
    }

    pub fn block_type(&self, b: &Block) -> GroupType {
        let g = b.mirror_gen.gcd(&b.diag_gen).gcd(&self.m);
        let big = self.m / g;
        let diag = self.m / b.diag_gen.gcd(&self.m);
        GroupType { m: big, p: big / diag, r: b.indices.len() }
    }

    /// Irreducible factors, trivial ones included, in block order.
    pub fn types(&self) -> Vec<GroupType> {
        self.blocks.iter().map(|b| self.block_type(b)).collect()
    }

    pub fn type_label(&self) -> String {
        product_type_label(&self.types())
    }

    pub fn order(&self) -> u64 {
        self.types().iter().map(|t| t.order()).product()
    }

    pub fn contains(&self, g: &MonomialElement) -> bool {
        if g.m != self.m || g.rank() != self.r {
            return false;
        }
        if (0..self.r).any(|i| self.block_of[g.perm[i]] != self.block_of[i]) {
            return false;
        }
        let mut sums = vec![0u32; self.blocks.len()];
        for i in 0..self.r {
            let j = g.perm[i];
            let c = (g.phases[j] + self.offset(i) + self.m - self.offset(j)) % self.m;
            let b = &self.blocks[self.block_of[j]];
            let lattice = b.mirror_gen.gcd(&b.diag_gen).gcd(&self.m);
            if !c.is_multiple_of(lattice) {
                return false;
            }
            sums[self.block_of[j]] = (sums[self.block_of[j]] + g.phases[j]) % self.m;
        }
        self.blocks.iter().zip(&sums).all(|(b, s)| s % b.diag_gen.gcd(&self.m) == 0)
    }

    /// Whether every generator of `other` lies in this subgroup.
    pub fn contains_subgroup(&self, other: &ReflectionSubgroup) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }
}

/// Isomorphism type of a finite quotient, as computed by coset enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientInfo {
    pub order: u64,
    pub abelian: bool,
    /// elementary divisors when abelian
    pub elementary: Vec<u64>,
}

impl QuotientInfo {
    pub fn trivial() -> Self {
        QuotientInfo { order: 1, abelian: true, elementary: vec![] }
    }

    pub fn from_elementary(mut e: Vec<u64>) -> Self {
        e.retain(|x| *x > 1);
        e.sort_unstable();
        QuotientInfo { order: e.iter().product(), abelian: true, elementary: e }
    }
}

impl fmt::Display for QuotientInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.abelian {
            return write!(f, "nonabelian of order {}", self.order);
        }
        if self.elementary.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.elementary.iter().map(|d| format!("Z/{}", d)).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// ⟨gens⟩N / N for a subgroup N normalized by the generators.
pub fn quotient(
    gens: &[MonomialElement],
    normal: &dyn Fn(&MonomialElement) -> bool,
    id: &MonomialElement,
    limit: usize,
) -> Result<QuotientInfo, ReflGroupError> {
    let gens: Vec<&MonomialElement> = gens.iter().filter(|g| !normal(g)).collect();
    let mut reps = vec![id.clone()];
    let find = |reps: &[MonomialElement], x: &MonomialElement| -> Option<usize> {
        let xi = x.inv();
        reps.iter().position(|r| normal(&xi.mul(r)))
    };
    let mut i = 0;
    while i < reps.len() {
        for g in &gens {
            let x = reps[i].mul(g);
            if find(&reps, &x).is_none() {
                if reps.len() >= limit {
                    return Err(ReflGroupError::QuotientTooLarge(limit));
                }
                reps.push(x);
            }
        }
        i += 1;
    }
    let n = reps.len();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| find(&reps, &a.mul(b)).expect("closed under products")).collect())
        .collect();
    let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
    let power = |a: usize, k: u64| (0..k).fold(0usize, |acc, _| table[acc][a]);
    let mut elementary = Vec::new();
    if abelian {
        let mut rest = n as u64;
        let mut pr = 2u64;
        while rest > 1 {
            if !rest.is_multiple_of(pr) {
                pr += 1;
                continue;
            }
            let mut pk = 1u64;
            while rest.is_multiple_of(pr) {
                rest /= pr;
                pk *= pr;
            }
            // counts #{x : x^{p^k} = 1} determine the p-part
            let mut logs = vec![0u32];
            let mut q = 1u64;
            while q < pk {
                q *= pr;
                let c = (0..n).filter(|&a| power(a, q) == 0).count() as u64;
                let mut l = 0;
                let mut c2 = c;
                while c2 > 1 {
                    c2 /= pr;
                    l += 1;
                }
                logs.push(l);
            }
            // number of cyclic factors of order ≥ p^k is logs[k] - logs[k-1]
            let ge: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
            for k in 0..ge.len() {
                let exact = ge[k] - ge.get(k + 1).copied().unwrap_or(0);
                for _ in 0..exact {
                    elementary.push(pr.pow(k as u32 + 1));
                }
            }
        }
        elementary.sort_unstable();
    }
    Ok(QuotientInfo { order: n as u64, abelian, elementary })
}

/// One relation per hyperplane orbit of a reflection subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeFactor {
    pub group: GroupType,
    pub relations: Vec<(Hyperplane, u32, BinomialProduct)>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckePresentation {
    pub factors: Vec<HeckeFactor>,
    pub label: String,
    pub trivial_parameters: bool,
}

fn is_power_of(b: &BinomialProduct, q: Q, n: u32) -> bool {
    *b == BinomialProduct::from_factors(std::iter::repeat_n((1u32, q), n as usize))
}

/// (y-1)^a (y+1)^b, if the relation has that shape.
fn signed_exponents(b: &BinomialProduct) -> Option<(u32, u32)> {
    let (mut a, mut c) = (0, 0);
    for (k, q, n) in b.factors() {
        match (k, q) {
            (1, q) if q.is_zero() => a += n,
            (1, q) if q == Q::new(1, 2) => c += n,
            (2, q) if q.is_zero() => {
                a += n;
                c += n;
            }
            _ => return None,
        }
    }
    Some((a, c))
}

/// Canonical label of H^{a,b}(G(M,1,t)) or H^{M/2}(G(M,2,t)); None when the factor is dropped.
pub fn hecke_label(group: GroupType, params: HeckeParams) -> Option<String> {
    let g = group.canonical();
    if g.is_trivial() {
        return None;
    }
    let params = if group.p == 2 && group.r == 1 {
        match params {
            HeckeParams::Half => HeckeParams::Split(group.m / 2, 0),
            p => p,
        }
    } else {
        params
    };
    Some(match (g.p, params) {
        (_, _) if g.m == 1 => format!("H^{{1,0}}({})", g),
        (1, HeckeParams::Split(a, b)) => format!("H^{{{},{}}}({})", a, b, g),
        (2, HeckeParams::Half) => format!("H^{{{}}}({})", g.m / 2, g),
        (_, HeckeParams::Other(s)) => format!("H({}; {})", g, s),
        (_, p) => format!("H({}; {:?})", g, p),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeckeParams {
    /// diagonal relation (σ-1)^a (σ+1)^b
    Split(u32, u32),
    /// diagonal relation (σ-1)^{m/2}
    Half,
    Other(String),
}

/// Multiset label of a tensor product of factor labels.
pub fn tensor_label(parts: impl IntoIterator<Item = Option<String>>) -> String {
    let mut v: Vec<String> = parts.into_iter().flatten().collect();
    v.sort();
    if v.is_empty() {
        "H(1)".into()
    } else {
        v.join(" (x) ")
    }
}

/// Assemble the presentation of a reflection subgroup from relation
/// polynomials keyed by hyperplane; every hyperplane of the subgroup must be present.
pub fn assemble_hecke(
    sub: &ReflectionSubgroup,
    relations: &HashMap<Hyperplane, (u32, BinomialProduct)>,
) -> Result<HeckePresentation, ReflGroupError> {
    let gens = &sub.generators;
    let mut hyps: Vec<Hyperplane> = relations.keys().copied().collect();
    hyps.sort();
    let ids = hyperplane_orbits(&hyps, gens);
    let mut per_orbit: BTreeMap<usize, (Hyperplane, u32, BinomialProduct)> = BTreeMap::new();
    for (h, id) in hyps.iter().zip(&ids) {
        let (order, rel) = &relations[h];
        if rel.degree() != *order {
            return Err(ReflGroupError::DegreeMismatch { orbit: *id, expected: *order, got: rel.degree() });
        }
        if let Some((h0, _, r0)) = per_orbit.get(id) {
            if r0 != rel {
                return Err(ReflGroupError::OrbitInconsistency(format!("{}: {}", h0, r0), format!("{}: {}", h, rel)));
            }
        } else {
            per_orbit.insert(*id, (*h, *order, rel.clone()));
        }
    }
    let mut factors = Vec::new();
    let mut trivial = true;
    for b in &sub.blocks {
        let group = sub.block_type(b);
        if group.is_trivial() {
            continue;
        }
        let rels: Vec<(Hyperplane, u32, BinomialProduct)> = per_orbit
            .values()
            .filter(|(h, _, _)| match h {
                Hyperplane::Mirror { i, .. } | Hyperplane::Coordinate(i) => b.indices.contains(i),
            })
            .cloned()
            .collect();
        trivial &= rels.iter().all(|(_, n, r)| is_power_of(r, Q::zero(), *n));
        let mirrors_ok = rels
            .iter()
            .filter(|(h, _, _)| matches!(h, Hyperplane::Mirror { .. }))
            .all(|(_, _, r)| is_power_of(r, Q::zero(), 2));
        let diag: Vec<&BinomialProduct> =
            rels.iter().filter(|(h, _, _)| matches!(h, Hyperplane::Coordinate(_))).map(|(_, _, r)| r).collect();
        let params = if !mirrors_ok || diag.len() > 1 {
            HeckeParams::Other(rels.iter().map(|(h, _, r)| format!("{}:{}", h, r)).collect::<Vec<_>>().join(","))
        } else if group.p == 1 {
            match diag.first() {
                None => HeckeParams::Split(1, 0),
                Some(r) => match signed_exponents(r) {
                    Some((a, c)) => HeckeParams::Split(a, c),
                    None => HeckeParams::Other(r.to_string()),
                },
            }
        } else if group.p == 2 {
            match diag.first() {
                None => HeckeParams::Half,
                Some(r) if is_power_of(r, Q::zero(), group.m / 2) => HeckeParams::Half,
                Some(r) => HeckeParams::Other(r.to_string()),
            }
        } else {
            HeckeParams::Other(rels.iter().map(|(h, _, r)| format!("{}:{}", h, r)).collect::<Vec<_>>().join(","))
        };
        let label = hecke_label(group, params).unwrap_or_default();
        factors.push(HeckeFactor { group, relations: rels, label });
    }
    let label = tensor_label(factors.iter().map(|f| Some(f.label.clone())));
    Ok(HeckePresentation { factors, label, trivial_parameters: trivial })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_reflections() {
        for (m, p, r) in [(2, 1, 3), (3, 1, 2), (4, 2, 2), (4, 2, 3), (6, 2, 2), (5, 1, 1), (1, 1, 4), (2, 2, 3)] {
            let g = build_reflection_group(m, p, r).unwrap();
            assert_eq!(g.elements(1_000_000).unwrap().len() as u64, g.order());
            let mut closed: Vec<MonomialElement> = g.reflections.iter().map(|s| s.element.clone()).collect();
            closed.sort();
            assert_eq!(closed, g.reflections_by_enumeration(1_000_000).unwrap(), "G({},{},{})", m, p, r);
            assert_eq!(g.num_orbits, g.orbits_by_enumeration(1_000_000).unwrap());
            assert_eq!(g.num_orbits, closed_form_orbit_count(m, p, r));
        }
    }

    #[test]
    fn g422() {
        let g = build_reflection_group(4, 2, 2).unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.num_orbits, 3);
    }

    #[test]
    fn rewriting_identities() {
        let (m, r) = (5, 4);
        let s = |i: usize| MonomialElement::transposition(m, r, i, i + 1, 0);
        let tt = |i: usize| MonomialElement::diagonal(m, r, i, 1);
        for k in 0..r {
            let mut w = tt(r - 1);
            for a in (k..r - 1).rev() {
                w = s(a).mul(&w).mul(&s(a));
            }
            assert_eq!(w, tt(k));
        }
        for i in 0..r {
            for j in i + 1..r {
                let mut w = s(j - 1);
                for a in (i..j - 1).rev() {
                    w = s(a).mul(&w).mul(&s(a));
                }
                assert_eq!(w, MonomialElement::transposition(m, r, i, j, 0));
                for k in 0..m as u64 {
                    let sk = MonomialElement::transposition(m, r, i, j, k as i64);
                    assert_eq!(tt(i).pow(k).inv().mul(&w).mul(&tt(i).pow(k)), sk);
                    assert_eq!(tt(j).pow(k).mul(&w).mul(&tt(j).pow(k).inv()), sk);
                }
            }
        }
    }

    #[test]
    fn subgroup_identification() {
        let (m, r) = (4, 3);
        let gens = [
            MonomialElement::transposition(m, r, 0, 1, 1),
            MonomialElement::transposition(m, r, 0, 1, 3),
            MonomialElement::diagonal(m, r, 2, 2),
        ];
        let h = ReflectionSubgroup::generated(m, r, &gens).unwrap();
        assert_eq!(h.type_label(), "G(2,1,1) x G(2,2,2)");
        let g = build_reflection_group(m, 1, r).unwrap();
        let all = g.elements(1_000_000).unwrap();
        // closure by brute force
        let mut seen: HashSet<MonomialElement> = HashSet::from([g.identity()]);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = x.mul(s);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        assert_eq!(seen.len() as u64, h.order());
        for x in &all {
            assert_eq!(h.contains(x), seen.contains(x), "{}", x);
        }
    }

    #[test]
    fn quotient_structures() {
        let g = build_reflection_group(4, 1, 2).unwrap();
        let n = ReflectionSubgroup::generated(
            4,
            2,
            &[MonomialElement::diagonal(4, 2, 0, 2), MonomialElement::diagonal(4, 2, 1, 2)],
        )
        .unwrap();
        let q = quotient(&g.generator_elements(), &|x| n.contains(x), &g.identity(), 64).unwrap();
        assert_eq!(q.order, 8);
        assert!(!q.abelian);
        let c = build_reflection_group(4, 1, 1).unwrap();
        let triv = ReflectionSubgroup::generated(4, 1, &[]).unwrap();
        let q = quotient(&c.generator_elements(), &|x| triv.contains(x), &c.identity(), 64).unwrap();
        assert_eq!(q.to_string(), "Z/4");
    }
}
