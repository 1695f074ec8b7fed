//! Root subsystems: irreducible components, Bourbaki-ordered simple systems,
//! induced diagram automorphisms, Weyl subgroup membership and the rank-one
//! data (marks or twisted marks, center elements) of a component.

use std::collections::{HashMap, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::cyclotomic::{BinomialProduct, Q};
use crate::linalg::{IMat, QMat};
use crate::rootdata::{cartan_matrix, RootDatum, TorusElt, TypeLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("root subsystem of rank {0} matches no Dynkin type")]
    UnknownType(usize),
    #[error("rank-one reduction of type {0} is not implemented")]
    UnclassifiedRankOne(String),
}

/// A root system with its coroots; indices are shared with the datum.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    fn build(roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>) -> Self {
        let root_index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        RootSystem { roots, coroots, root_index }
    }

    pub fn of(datum: &RootDatum) -> Self {
        Self::build(datum.roots.clone(), datum.coroots.clone())
    }

    /// The coroot system, with roots and coroots exchanged.
    pub fn dual_of(datum: &RootDatum) -> Self {
        Self::build(datum.coroots.clone(), datum.roots.clone())
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// ⟨root a, coroot b⟩
    pub fn pair(&self, a: usize, b: usize) -> i64 {
        self.roots[a].iter().zip(&self.coroots[b]).map(|(x, y)| x * y).sum()
    }

    pub fn index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    /// s_b(root a)
    pub fn reflect(&self, a: usize, b: usize) -> usize {
        let p = self.pair(a, b);
        let v: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x - p * y).collect();
        self.index(&v).expect("reflection preserves roots")
    }

    pub fn reflection_perm(&self, b: usize) -> Vec<usize> {
        (0..self.len()).map(|a| self.reflect(a, b)).collect()
    }

    pub fn negate(&self, a: usize) -> usize {
        let v: Vec<i64> = self.roots[a].iter().map(|x| -x).collect();
        self.index(&v).expect("roots closed under negation")
    }
}

/// Permutation of root indices induced by a lattice automorphism of X_*.
pub fn root_perm(datum: &RootDatum, w: &IMat) -> Vec<usize> {
    (0..datum.roots.len()).map(|i| datum.act_on_coroot(w, i)).collect()
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// An irreducible component of a subsystem.
#[derive(Clone, Debug)]
pub struct Component {
    pub roots: Vec<usize>,
    pub positive: HashSet<usize>,
    /// simple roots in Bourbaki order
    pub simple: Vec<usize>,
    pub label: TypeLabel,
    pub rank: usize,
    pub marks: Vec<i64>,
    /// simple-root coordinates of every root of the component
    pub coeffs: HashMap<usize, Vec<i64>>,
    by_coeffs: HashMap<Vec<i64>, usize>,
}

impl Component {
    pub fn name(&self) -> String {
        format!("{}{}", self.label, if self.label.is_classical() { self.rank.to_string() } else { String::new() })
    }

    pub fn height(&self, r: usize) -> i64 {
        self.coeffs[&r].iter().sum()
    }

    pub fn coxeter_number(&self) -> i64 {
        1 + self.marks.iter().sum::<i64>()
    }

    /// Fundamental coweights of the component, in the span of its coroots.
    pub fn coweights(&self, rs: &RootSystem) -> Vec<Vec<Q>> {
        let c = cartan_matrix(self.label, self.rank).expect("identified type");
        let cinv = QMat::from_imat(&c).inverse().expect("Cartan invertible");
        let k = rs.coroots[0].len();
        (0..self.rank)
            .map(|i| {
                let mut v = vec![Q::zero(); k];
                for (j, &s) in self.simple.iter().enumerate() {
                    let y = cinv.get(i, j);
                    for (a, x) in v.iter_mut().zip(&rs.coroots[s]) {
                        *a += y * Q::from(*x);
                    }
                }
                v
            })
            .collect()
    }

    pub fn root_with_coeffs(&self, c: &[i64]) -> Option<usize> {
        self.by_coeffs.get(c).copied()
    }
}

fn match_bourbaki(rs: &RootSystem, simple: &[usize], t: TypeLabel) -> Option<Vec<usize>> {
    let n = simple.len();
    let c = cartan_matrix(t, n).ok()?;
    let mut assign: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(rs: &RootSystem, simple: &[usize], c: &IMat, assign: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let p = assign.len();
        if p == simple.len() {
            return true;
        }
        for cand in 0..simple.len() {
            if used[cand] {
                continue;
            }
            let ok = (0..p).all(|q| {
                let (a, b) = (simple[assign[q]], simple[cand]);
                // a_ij = ⟨α̌_i, α_j⟩ = pair(j, i)
                c[(q, p)] == rs.pair(b, a) && c[(p, q)] == rs.pair(a, b)
            });
            if !ok {
                continue;
            }
            used[cand] = true;
            assign.push(cand);
            if go(rs, simple, c, assign, used) {
                return true;
            }
            assign.pop();
            used[cand] = false;
        }
        false
    }
    if go(rs, simple, &c, &mut assign, &mut used) {
        Some(assign.into_iter().map(|i| simple[i]).collect())
    } else {
        None
    }
}

fn identify(rs: &RootSystem, simple: &[usize]) -> Result<(TypeLabel, Vec<usize>), RootSysError> {
    let n = simple.len();
    let candidates = [
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
    for t in candidates {
        if !t.valid_rank(n) {
            continue;
        }
        if let Some(order) = match_bourbaki(rs, simple, t) {
            return Ok((t, order));
        }
    }
    Err(RootSysError::UnknownType(n))
}

/// Splits a subsystem (closed under negation) into irreducible components.
pub fn components(rs: &RootSystem, subset: &[usize]) -> Result<Vec<Component>, RootSysError> {
    let set: HashSet<usize> = subset.iter().copied().collect();
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &start in &sorted {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for &b in &sorted {
                if !seen.contains(&b) && rs.pair(a, b) != 0 {
                    seen.insert(b);
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(build_component(rs, &set, comp)?);
    }
    Ok(out)
}

fn build_component(rs: &RootSystem, _all: &HashSet<usize>, roots: Vec<usize>) -> Result<Component, RootSysError> {
    let set: HashSet<usize> = roots.iter().copied().collect();
    let positive: HashSet<usize> = roots.iter().copied().filter(|&r| lex_positive(&rs.roots[r])).collect();
    let mut simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&a| {
            !positive.iter().any(|&b| {
                if a == b {
                    return false;
                }
                let v: Vec<i64> = rs.roots[a].iter().zip(&rs.roots[b]).map(|(x, y)| x - y).collect();
                rs.index(&v).is_some_and(|c| positive.contains(&c))
            })
        })
        .collect();
    simple.sort_unstable();
    let (label, simple) = identify(rs, &simple)?;
    let rank = simple.len();
    let k = rs.roots[0].len();
    let basis =
        QMat::from_rows(&(0..k).map(|i| simple.iter().map(|&s| Q::from(rs.roots[s][i])).collect()).collect::<Vec<_>>());
    let mut coeffs = HashMap::new();
    let mut by_coeffs = HashMap::new();
    for &r in &roots {
        let b: Vec<Q> = rs.roots[r].iter().map(|x| Q::from(*x)).collect();
        let sol = basis.solve(&b).expect("root lies in the span of the simple roots");
        let c: Vec<i64> = sol.iter().map(|q| q.to_integer()).collect();
        by_coeffs.insert(c.clone(), r);
        coeffs.insert(r, c);
    }
    let highest =
        positive.iter().copied().max_by_key(|r| (coeffs[r].iter().sum::<i64>(), *r)).expect("nonempty component");
    let marks = coeffs[&highest].clone();
    debug_assert!(set.len() == roots.len());
    Ok(Component { roots, positive, simple, label, rank, marks, coeffs, by_coeffs })
}

/// Permutation σ of Bourbaki positions with w·φ(α_i) = α_{σ(i)} for a correcting w ∈ W(Ψ).
pub fn induced_diagram(rs: &RootSystem, comp: &Component, perm: &[usize]) -> Vec<usize> {
    let mut d: Vec<usize> = comp.simple.iter().map(|&s| perm[s]).collect();
    while let Some(&g) = d.iter().find(|r| !comp.positive.contains(r)) {
        d = d.iter().map(|&b| rs.reflect(b, g)).collect();
    }
    d.iter().map(|r| comp.simple.iter().position(|s| s == r).expect("simple system is preserved")).collect()
}

/// Whether the root permutation of w lies in the Weyl group of the subsystem.
pub fn weyl_contains(rs: &RootSystem, comps: &[Component], w: &[usize]) -> bool {
    let subset: HashSet<usize> = comps.iter().flat_map(|c| c.roots.iter().copied()).collect();
    if subset.iter().any(|r| !subset.contains(&w[*r])) {
        return false;
    }
    let positive: HashSet<usize> = comps.iter().flat_map(|c| c.positive.iter().copied()).collect();
    let simple: Vec<usize> = comps.iter().flat_map(|c| c.simple.iter().copied()).collect();
    let mut u = w.to_vec();
    while let Some(&b) = simple.iter().find(|&&b| !positive.contains(&u[b])) {
        let s = rs.reflection_perm(b);
        u = s.iter().map(|&i| u[i]).collect();
    }
    u.iter().enumerate().all(|(i, &j)| i == j)
}

/// Rank-one data of a component under an automorphism of it.
#[derive(Clone, Debug)]
pub struct RankOneShape {
    pub component: String,
    pub twist: u32,
    /// order of the automorphism on the component
    pub order: u64,
    /// marks n_i (inner) or twisted marks m_i
    pub exponents: Vec<i64>,
    /// γ̄_i as rational lattice vectors (before any pushforward)
    pub centers: Vec<Vec<Q>>,
}

impl RankOneShape {
    pub fn tag(&self) -> String {
        if self.twist == 1 {
            format!("{} Coxeter", self.component)
        } else {
            format!("{}^{} twisted Coxeter", self.component, self.twist)
        }
    }

    /// Monic (x-1) Π (χ(γ̄_i) x^{e_i} - 1) given the values χ(γ̄_i) in Q/Z.
    pub fn polynomial(&self, values: &[Q]) -> BinomialProduct {
        let mut f = vec![(1u32, Q::zero())];
        for (e, v) in self.exponents.iter().zip(values) {
            f.push((*e as u32, -*v));
        }
        BinomialProduct::from_factors(f)
    }

    pub fn degree(&self) -> i64 {
        1 + self.exponents.iter().sum::<i64>()
    }
}

fn perm_order(p: &[usize], support: &[usize]) -> u64 {
    let mut order = 1u64;
    let mut seen = HashSet::new();
    for &s in support {
        if seen.contains(&s) {
            continue;
        }
        let mut len = 0u64;
        let mut x = s;
        loop {
            seen.insert(x);
            x = p[x];
            len += 1;
            if x == s {
                break;
            }
        }
        order = num_integer::lcm(order, len);
    }
    order
}

pub fn rank_one_shape(rs: &RootSystem, comp: &Component, perm: &[usize]) -> Result<RankOneShape, RootSysError> {
    let order = perm_order(perm, &comp.roots);
    let sigma = induced_diagram(rs, comp, perm);
    let omega = comp.coweights(rs);
    let e = perm_order(&sigma, &(0..comp.rank).collect::<Vec<_>>()) as u32;
    if e == 1 {
        if order as i64 != comp.coxeter_number() {
            return Err(RootSysError::UnclassifiedRankOne(format!("{} of order {}", comp.name(), order)));
        }
        return Ok(RankOneShape {
            component: comp.name(),
            twist: 1,
            order,
            exponents: comp.marks.clone(),
            centers: omega,
        });
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; comp.rank];
    for i in 0..comp.rank {
        if seen[i] {
            continue;
        }
        let mut orb = vec![];
        let mut x = i;
        while !seen[x] {
            seen[x] = true;
            orb.push(x);
            x = sigma[x];
        }
        orb.sort_unstable();
        orbits.push(orb);
    }
    if !order.is_multiple_of(e as u64) {
        return Err(RootSysError::UnclassifiedRankOne(format!("{}^{} of order {}", comp.name(), e, order)));
    }
    let target = (order / e as u64) as i64 - 1;
    let sigma_root = |r: usize| {
        let c = &comp.coeffs[&r];
        let mut d = vec![0i64; c.len()];
        for (j, x) in c.iter().enumerate() {
            d[sigma[j]] = *x;
        }
        comp.root_with_coeffs(&d).expect("diagram automorphism preserves roots")
    };
    let mut sigma0: Vec<usize> = comp.positive.iter().copied().filter(|&r| comp.height(r) == target).collect();
    sigma0.sort_unstable();
    let beta0 = sigma0
        .iter()
        .copied()
        .find(|&r| sigma_root(r) != r)
        .or_else(|| sigma0.first().copied())
        .ok_or_else(|| RootSysError::UnclassifiedRankOne(format!("{}^{} of order {}", comp.name(), e, order)))?;
    let c = &comp.coeffs[&beta0];
    let exponents: Vec<i64> = orbits.iter().map(|o| o.iter().map(|&j| c[j]).sum()).collect();
    if 1 + exponents.iter().sum::<i64>() != target + 1 {
        return Err(RootSysError::UnclassifiedRankOne(format!("{}^{} of order {}", comp.name(), e, order)));
    }
    let k = rs.coroots[0].len();
    let centers = orbits
        .iter()
        .map(|o| {
            let mut v = vec![Q::zero(); k];
            for &j in o {
                for (a, x) in v.iter_mut().zip(&omega[j]) {
                    *a += x;
                }
            }
            v
        })
        .collect();
    Ok(RankOneShape { component: comp.name(), twist: e, order, exponents, centers })
}

/// Σ_{a<c} θ^a(v) as a torus element.
pub fn pushforward(theta: &IMat, v: &[Q], c: usize) -> TorusElt {
    let mut acc = vec![Q::zero(); v.len()];
    let mut cur = v.to_vec();
    for _ in 0..c {
        for (a, x) in acc.iter_mut().zip(&cur) {
            *a += x;
        }
        cur = theta.apply_q(&cur);
    }
    TorusElt::new(acc)
}
