//! Root data of simply connected groups, torus elements and finite subgroups of the torus.
//!
//! The cocharacter lattice X_* is the coroot lattice with basis the simple
//! coroots, so `α̌_j(e^{2πi q})` is the torus element `q·e_j`. Roots are stored
//! as functionals on X_* (their pairings with the simple coroots), coroots as
//! lattice vectors.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::Q;
use crate::linalg::{frac, smith_normal_form, IMat, QMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid root system {0}{1}")]
    InvalidType(String, usize),
    #[error("fixed-point group is infinite")]
    InfiniteFixedGroup,
    #[error("Weyl group of order {order} exceeds the oracle bound {bound}")]
    OracleBoundExceeded { order: u64, bound: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl TypeLabel {
    pub fn is_classical(self) -> bool {
        matches!(self, TypeLabel::A | TypeLabel::B | TypeLabel::C | TypeLabel::D)
    }

    /// Rank fixed by the label, for exceptional types.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            TypeLabel::E6 => Some(6),
            TypeLabel::E7 => Some(7),
            TypeLabel::E8 => Some(8),
            TypeLabel::F4 => Some(4),
            TypeLabel::G2 => Some(2),
            _ => None,
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            TypeLabel::A => 1,
            TypeLabel::B | TypeLabel::C => 2,
            TypeLabel::D => 4,
            t => t.fixed_rank().unwrap_or(1),
        }
    }

    pub fn valid_rank(self, n: usize) -> bool {
        match self.fixed_rank() {
            Some(r) => r == n,
            None => n >= self.min_rank(),
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E6 => "E6",
            TypeLabel::E7 => "E7",
            TypeLabel::E8 => "E8",
            TypeLabel::F4 => "F4",
            TypeLabel::G2 => "G2",
        };
        write!(f, "{}", s)
    }
}

impl FromStr for TypeLabel {
    type Err = RootDataError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" => TypeLabel::A,
            "B" => TypeLabel::B,
            "C" => TypeLabel::C,
            "D" => TypeLabel::D,
            "E6" => TypeLabel::E6,
            "E7" => TypeLabel::E7,
            "E8" => TypeLabel::E8,
            "F4" => TypeLabel::F4,
            "G2" => TypeLabel::G2,
            _ => return Err(RootDataError::InvalidType(s.to_string(), 0)),
        })
    }
}

/// a_ij = ⟨α̌_i, α_j⟩ with Bourbaki numbering.
pub fn cartan_matrix(t: TypeLabel, n: usize) -> Result<IMat, RootDataError> {
    if !t.valid_rank(n) {
        return Err(RootDataError::InvalidType(t.to_string(), n));
    }
    let mut c = IMat::identity(n);
    for i in 0..n {
        c[(i, i)] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        c[(i - 1, j - 1)] = aij;
        c[(j - 1, i - 1)] = aji;
    };
    match t {
        TypeLabel::A => {
            for i in 1..n {
                link(i, i + 1, -1, -1);
            }
        }
        TypeLabel::B => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -1, -2);
        }
        TypeLabel::C => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -2, -1);
        }
        TypeLabel::D => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n, -1, -1);
        }
        TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8 => {
            link(1, 3, -1, -1);
            link(2, 4, -1, -1);
            for i in 3..n {
                link(i, i + 1, -1, -1);
            }
        }
        TypeLabel::F4 => {
            link(1, 2, -1, -1);
            link(2, 3, -1, -2);
            link(3, 4, -1, -1);
        }
        TypeLabel::G2 => {
            link(1, 2, -3, -1);
        }
    }
    Ok(c)
}

pub fn weyl_order(t: TypeLabel, n: usize) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    match t {
        TypeLabel::A => fact(n + 1),
        TypeLabel::B | TypeLabel::C => (1u64 << n) * fact(n),
        TypeLabel::D => (1u64 << (n - 1)) * fact(n),
        TypeLabel::E6 => 51_840,
        TypeLabel::E7 => 2_903_040,
        TypeLabel::E8 => 696_729_600,
        TypeLabel::F4 => 1_152,
        TypeLabel::G2 => 12,
    }
}

/// An element of T = X_* ⊗ Q/Z, coordinates reduced to [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElt(pub Vec<Q>);

impl TorusElt {
    pub fn new(v: Vec<Q>) -> Self {
        TorusElt(v.into_iter().map(frac).collect())
    }

    pub fn identity(k: usize) -> Self {
        TorusElt(vec![Q::zero(); k])
    }

    /// α̌_j(e^{2πi q}) as a torus element of rank k (j is 1-based).
    pub fn coroot_value(k: usize, j: usize, q: Q) -> Self {
        let mut v = vec![Q::zero(); k];
        v[j - 1] = q;
        Self::new(v)
    }

    /// Product of α̌_j(e^{2πi q}) factors.
    pub fn from_coroot_values(k: usize, vals: &[(usize, Q)]) -> Self {
        let mut v = vec![Q::zero(); k];
        for (j, q) in vals {
            v[j - 1] += q;
        }
        Self::new(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Self {
        Self::new(self.0.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new(self.0.iter().map(|a| a * Q::from(e)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn act(&self, w: &IMat) -> Self {
        Self::new(w.apply_q(&self.0))
    }

    /// α(t) as an element of Q/Z, for a root given as a functional.
    pub fn eval(&self, functional: &[i64]) -> Q {
        frac(self.0.iter().zip(functional).fold(Q::zero(), |acc, (a, b)| acc + a * Q::from(*b)))
    }

    pub fn order(&self) -> i64 {
        self.0.iter().fold(1i64, |l, a| l.lcm(a.denom()))
    }
}

impl fmt::Display for TorusElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|q| if q.is_zero() { "0".into() } else { format!("{}/{}", q.numer(), q.denom()) })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite subgroup of a torus (or of its dual), in Smith coordinates.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    rank: usize,
    invariant_factors: Vec<i64>,
    generators: Vec<TorusElt>,
    /// rows used to read off coordinates: x_i = d_i * (row_i · t) mod d_i
    coord_rows: Vec<Vec<i64>>,
    named: Vec<(String, TorusElt)>,
}

impl FiniteAbelianGroup {
    /// {t : A t ∈ X_*} for a square integer matrix A.
    pub fn torsion_kernel(a: &IMat) -> Result<Self, RootDataError> {
        let s = smith_normal_form(a);
        if s.d.len() < a.cols() || s.d.contains(&0) {
            return Err(RootDataError::InfiniteFixedGroup);
        }
        let mut inv = Vec::new();
        let mut gens = Vec::new();
        let mut rows = Vec::new();
        for (i, d) in s.d.iter().enumerate() {
            if *d == 1 {
                continue;
            }
            inv.push(*d);
            let col = s.v.col(i);
            gens.push(TorusElt::new(col.iter().map(|x| Q::new(*x, *d)).collect()));
            rows.push(s.v_inv.row(i).to_vec());
        }
        let named = gens.iter().enumerate().map(|(i, g)| (format!("g{}", i + 1), g.clone())).collect();
        Ok(FiniteAbelianGroup { rank: a.cols(), invariant_factors: inv, generators: gens, coord_rows: rows, named })
    }

    /// Rank of the ambient torus.
    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().map(|d| *d as u64).product()
    }

    pub fn exponent(&self) -> i64 {
        self.invariant_factors.iter().fold(1, |l, d| l.lcm(d))
    }

    pub fn smith_generators(&self) -> &[TorusElt] {
        &self.generators
    }

    pub fn named_generators(&self) -> &[(String, TorusElt)] {
        &self.named
    }

    pub fn set_named_generators(&mut self, named: Vec<(String, TorusElt)>) {
        self.named = named;
    }

    /// Smith coordinates; None if t is not in the group.
    pub fn coords(&self, t: &TorusElt) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.invariant_factors.len());
        for (row, d) in self.coord_rows.iter().zip(&self.invariant_factors) {
            let y = row.iter().zip(&t.0).fold(Q::zero(), |acc, (a, b)| acc + b * Q::from(*a));
            let x = y * Q::from(*d);
            if !x.is_integer() {
                return None;
            }
            out.push(x.to_integer().rem_euclid(*d));
        }
        // coordinates in the trivial factors must vanish
        if self.element(&out) != *t {
            return None;
        }
        Some(out)
    }

    pub fn contains(&self, t: &TorusElt) -> bool {
        self.coords(t).is_some()
    }

    pub fn element(&self, coords: &[i64]) -> TorusElt {
        let mut acc = vec![Q::zero(); self.rank];
        for (g, c) in self.generators.iter().zip(coords) {
            for (a, x) in acc.iter_mut().zip(&g.0) {
                *a += x * Q::from(*c);
            }
        }
        TorusElt::new(acc)
    }

    /// Elements in mixed-radix order of Smith coordinates.
    pub fn elements(&self) -> Vec<TorusElt> {
        mixed_radix(&self.invariant_factors).iter().map(|c| self.element(c)).collect()
    }

    /// Index of an element in `elements()` order.
    pub fn index_of(&self, t: &TorusElt) -> Option<usize> {
        let c = self.coords(t)?;
        Some(radix_index(&self.invariant_factors, &c))
    }
}

/// All vectors 0 ≤ c_i < d_i, first coordinate slowest.
pub fn mixed_radix(d: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for di in d {
        let mut next = Vec::with_capacity(out.len() * *di as usize);
        for v in &out {
            for x in 0..*di {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

pub fn radix_index(d: &[i64], c: &[i64]) -> usize {
    c.iter().zip(d).fold(0usize, |acc, (x, di)| acc * *di as usize + x.rem_euclid(*di) as usize)
}

/// Subgroup of T generated by the given elements, as a set.
pub fn generated_subgroup(gens: &[TorusElt], k: usize) -> HashSet<TorusElt> {
    let mut seen = HashSet::new();
    let id = TorusElt::identity(k);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(t) = queue.pop_front() {
        for g in gens {
            let u = t.mul(g);
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Fixed points of θ on T.
pub fn smith_fixed_points(theta: &IMat) -> Result<FiniteAbelianGroup, RootDataError> {
    FiniteAbelianGroup::torsion_kernel(&theta.sub(&IMat::identity(theta.rows())))
}

/// A lattice automorphism with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAut {
    pub matrix: IMat,
    pub order: u64,
}

impl LatticeAut {
    pub fn new(matrix: IMat) -> Option<Self> {
        let order = matrix.order(10_000)?;
        Some(LatticeAut { matrix, order })
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub type_label: TypeLabel,
    pub rank: usize,
    pub cartan: IMat,
    /// roots in simple-root coordinates; positives first, by height
    pub roots_simple: Vec<Vec<i64>>,
    /// roots as functionals on X_*
    pub roots: Vec<Vec<i64>>,
    /// coroots in lattice coordinates, aligned with `roots`
    pub coroots: Vec<Vec<i64>>,
    pub highest_root: usize,
    pub marks: Vec<i64>,
    /// ω̌_i in lattice coordinates
    pub coweights: Vec<Vec<Q>>,
    pub center: FiniteAbelianGroup,
    root_index: HashMap<Vec<i64>, usize>,
    coroot_index: HashMap<Vec<i64>, usize>,
}

impl RootDatum {
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root_index(&self, functional: &[i64]) -> Option<usize> {
        self.root_index.get(functional).copied()
    }

    pub fn coroot_index(&self, v: &[i64]) -> Option<usize> {
        self.coroot_index.get(v).copied()
    }

    pub fn simple_root(&self, i: usize) -> usize {
        self.root_index(&self.cartan.col(i - 1)).expect("simple root present")
    }

    /// Lattice matrix of the reflection in root `idx`.
    pub fn reflection(&self, idx: usize) -> IMat {
        let k = self.rank;
        let f = &self.roots[idx];
        let c = &self.coroots[idx];
        let mut m = IMat::identity(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] -= c[i] * f[j];
            }
        }
        m
    }

    pub fn simple_reflection(&self, i: usize) -> IMat {
        self.reflection(self.simple_root(i))
    }

    /// Image of a root under a lattice automorphism w: the functional f ∘ w^{-1}.
    pub fn act_on_root(&self, w_inv: &IMat, idx: usize) -> usize {
        let f = w_inv.transpose().apply(&self.roots[idx]);
        self.root_index(&f).expect("lattice automorphism preserves roots")
    }

    pub fn act_on_coroot(&self, w: &IMat, idx: usize) -> usize {
        let v = w.apply(&self.coroots[idx]);
        self.coroot_index(&v).expect("lattice automorphism preserves coroots")
    }

    pub fn weyl_order(&self) -> u64 {
        weyl_order(self.type_label, self.rank)
    }

    /// dim g
    pub fn dimension(&self) -> usize {
        self.rank + self.roots.len()
    }

    pub fn coxeter_number(&self) -> i64 {
        1 + self.marks.iter().sum::<i64>()
    }

    /// Coxeter element s_1 s_2 ⋯ s_n.
    pub fn coxeter_element(&self) -> IMat {
        (1..=self.rank).fold(IMat::identity(self.rank), |acc, i| acc.mul(&self.simple_reflection(i)))
    }

    /// Lattice matrix permuting simple coroots, e_i ↦ e_{σ(i)}.
    pub fn diagram_matrix(&self, sigma: &[usize]) -> IMat {
        let k = self.rank;
        let mut m = IMat::zeros(k, k);
        for i in 0..k {
            m[(sigma[i], i)] = 1;
        }
        m
    }
}

pub fn build_root_datum(t: TypeLabel, n: usize) -> Result<RootDatum, RootDataError> {
    let c = cartan_matrix(t, n)?;
    let k = n;
    // BFS over (root, coroot) pairs in simple coordinates
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..k {
        let mut e = vec![0i64; k];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back((e.clone(), e));
    }
    while let Some((b, g)) = queue.pop_front() {
        pairs.push((b.clone(), g.clone()));
        for i in 0..k {
            let pb: i64 = (0..k).map(|j| b[j] * c[(i, j)]).sum();
            let pg: i64 = (0..k).map(|j| g[j] * c[(j, i)]).sum();
            let mut b2 = b.clone();
            b2[i] -= pb;
            let mut g2 = g.clone();
            g2[i] -= pg;
            if seen.insert(b2.clone()) {
                queue.push_back((b2, g2));
            }
        }
    }
    let height = |v: &Vec<i64>| v.iter().sum::<i64>();
    pairs.sort_by(|a, b| {
        let (ha, hb) = (height(&a.0), height(&b.0));
        let pa = ha > 0;
        let pb = hb > 0;
        pb.cmp(&pa).then_with(|| if pa { ha.cmp(&hb) } else { hb.cmp(&ha) }).then_with(|| b.0.cmp(&a.0))
    });
    let roots_simple: Vec<Vec<i64>> = pairs.iter().map(|p| p.0.clone()).collect();
    let coroots: Vec<Vec<i64>> = pairs.iter().map(|p| p.1.clone()).collect();
    let roots: Vec<Vec<i64>> =
        roots_simple.iter().map(|b| (0..k).map(|j| (0..k).map(|i| b[i] * c[(j, i)]).sum()).collect()).collect();
    let npos = roots.len() / 2;
    let highest_root = (0..npos).max_by_key(|&i| height(&roots_simple[i])).expect("nonempty");
    let marks = roots_simple[highest_root].clone();
    let cinv = QMat::from_imat(&c).inverse().expect("Cartan matrix invertible");
    let coweights = (0..k).map(|i| (0..k).map(|j| cinv.get(i, j)).collect()).collect();
    let center = FiniteAbelianGroup::torsion_kernel(&c.transpose())?;
    let root_index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let coroot_index = coroots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    Ok(RootDatum {
        type_label: t,
        rank: n,
        cartan: c,
        roots_simple,
        roots,
        coroots,
        highest_root,
        marks,
        coweights,
        center,
        root_index,
        coroot_index,
    })
}

/// e_i ↦ ±e_j encoded as `img[i] = ±(j+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(pub Vec<i32>);

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// t_{ij}, 1-based
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i - 1, j - 1);
        p
    }

    /// t_i: e_i ↦ -e_i
    pub fn sign(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0[i - 1] = -p.0[i - 1];
        p
    }

    pub fn minus_one(n: usize) -> Self {
        SignedPerm((1..=n as i32).map(|x| -x).collect())
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        SignedPerm(
            other
                .0
                .iter()
                .map(|&x| {
                    let y = self.0[(x.unsigned_abs() - 1) as usize];
                    if x < 0 {
                        -y
                    } else {
                        y
                    }
                })
                .collect(),
        )
    }

    pub fn product(n: usize, factors: &[SignedPerm]) -> Self {
        factors.iter().fold(Self::identity(n), |acc, f| acc.compose(f))
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0i32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            let j = (x.unsigned_abs() - 1) as usize;
            out[j] = if x < 0 { -(i as i32 + 1) } else { i as i32 + 1 };
        }
        SignedPerm(out)
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::identity(self.len()), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; v.len()];
        for (i, &x) in self.0.iter().enumerate() {
            let j = (x.unsigned_abs() - 1) as usize;
            out[j] = if x < 0 { -v[i] } else { v[i] };
        }
        out
    }

    pub fn negations(&self) -> usize {
        self.0.iter().filter(|x| **x < 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, x)| *x == i as i32 + 1)
    }
}

/// Classical groups in ε-coordinates: SL(N), Spin(2n+1), Sp(2n), Spin(2n).
#[derive(Clone, Debug)]
pub struct Ambient {
    pub type_label: TypeLabel,
    pub rank: usize,
    pub dim: usize,
}

impl Ambient {
    pub fn new(t: TypeLabel, rank: usize) -> Option<Self> {
        let dim = match t {
            TypeLabel::A => rank + 1,
            TypeLabel::B | TypeLabel::C | TypeLabel::D => rank,
            _ => return None,
        };
        Some(Ambient { type_label: t, rank, dim })
    }

    /// Simple coroot j (1-based) in ε-coordinates.
    pub fn coroot(&self, j: usize) -> Vec<i64> {
        let n = self.dim;
        let mut v = vec![0i64; n];
        let last = j == self.rank;
        match self.type_label {
            TypeLabel::B if last => v[n - 1] = 2,
            TypeLabel::C if last => v[n - 1] = 1,
            TypeLabel::D if last => {
                v[n - 2] = 1;
                v[n - 1] = 1;
            }
            _ => {
                v[j - 1] = 1;
                v[j] = -1;
            }
        }
        v
    }

    /// Lattice coordinates of an ε-vector in X_*.
    pub fn to_lattice(&self, x: &[i64]) -> Option<Vec<i64>> {
        let n = self.dim;
        let mut partial = Vec::with_capacity(n);
        let mut s = 0i64;
        for v in x {
            s += v;
            partial.push(s);
        }
        match self.type_label {
            TypeLabel::A => {
                if partial[n - 1] != 0 {
                    return None;
                }
                Some(partial[..n - 1].to_vec())
            }
            TypeLabel::C => Some(partial),
            TypeLabel::B => {
                if partial[n - 1] % 2 != 0 {
                    return None;
                }
                let mut out = partial[..n - 1].to_vec();
                out.push(partial[n - 1] / 2);
                Some(out)
            }
            TypeLabel::D => {
                let s = partial[n - 2];
                let xn = x[n - 1];
                if (s + xn) % 2 != 0 {
                    return None;
                }
                let mut out = partial[..n - 2].to_vec();
                out.push((s - xn) / 2);
                out.push((s + xn) / 2);
                Some(out)
            }
            _ => None,
        }
    }

    pub fn lattice_matrix(&self, w: &SignedPerm) -> IMat {
        let cols: Vec<Vec<i64>> = (1..=self.rank)
            .map(|j| self.to_lattice(&w.apply(&self.coroot(j))).expect("signed permutation preserves X_*"))
            .collect();
        IMat::from_cols(&cols)
    }

    pub fn in_weyl_group(&self, w: &SignedPerm) -> bool {
        match self.type_label {
            TypeLabel::A => w.negations() == 0,
            TypeLabel::D => w.negations().is_multiple_of(2),
            _ => true,
        }
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

/// Brute-force centralizer of θ in W, as sorted lattice matrices.
pub fn weyl_centralizer_oracle(datum: &RootDatum, theta: &IMat, bound: u64) -> Result<Vec<IMat>, RootDataError> {
    let order = datum.weyl_order();
    if order > bound {
        return Err(RootDataError::OracleBoundExceeded { order, bound });
    }
    let mut out = Vec::new();
    if let Some(amb) = Ambient::new(datum.type_label, datum.rank) {
        let n = amb.dim;
        let signs: Vec<u32> = match datum.type_label {
            TypeLabel::A => vec![0],
            TypeLabel::D => (0..1u32 << n).filter(|s| s.count_ones() % 2 == 0).collect(),
            _ => (0..1u32 << n).collect(),
        };
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            for &mask in &signs {
                let w = SignedPerm(
                    perm.iter()
                        .enumerate()
                        .map(|(i, &j)| if mask >> i & 1 == 1 { -(j as i32 + 1) } else { j as i32 + 1 })
                        .collect(),
                );
                let m = amb.lattice_matrix(&w);
                if m.mul(theta) == theta.mul(&m) {
                    out.push(m);
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    } else {
        let gens: Vec<IMat> = (1..=datum.rank).map(|i| datum.simple_reflection(i)).collect();
        let mut seen = HashSet::new();
        let id = IMat::identity(datum.rank);
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            if w.mul(theta) == theta.mul(&w) {
                out.push(w.clone());
            }
            for g in &gens {
                let u = w.mul(g);
                if seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// W-orbit size of a torus element (BFS with simple reflections).
pub fn weyl_orbit_size(datum: &RootDatum, t: &TorusElt, dual: bool) -> usize {
    let gens: Vec<IMat> = (1..=datum.rank)
        .map(|i| {
            let s = datum.simple_reflection(i);
            if dual {
                s.transpose()
            } else {
                s
            }
        })
        .collect();
    let mut seen = HashSet::new();
    seen.insert(t.clone());
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.act(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (t, n, count) in [
            (TypeLabel::A, 3, 12),
            (TypeLabel::B, 3, 18),
            (TypeLabel::C, 4, 32),
            (TypeLabel::D, 5, 40),
            (TypeLabel::G2, 2, 12),
            (TypeLabel::F4, 4, 48),
            (TypeLabel::E6, 6, 72),
            (TypeLabel::E7, 7, 126),
            (TypeLabel::E8, 8, 240),
        ] {
            let d = build_root_datum(t, n).unwrap();
            assert_eq!(d.roots.len(), count, "{}{}", t, n);
        }
    }

    #[test]
    fn ambient_coroots_roundtrip() {
        for (t, n) in [(TypeLabel::A, 4), (TypeLabel::B, 4), (TypeLabel::C, 3), (TypeLabel::D, 5)] {
            let a = Ambient::new(t, n).unwrap();
            for j in 1..=n {
                let mut e = vec![0; n];
                e[j - 1] = 1;
                assert_eq!(a.to_lattice(&a.coroot(j)).unwrap(), e);
            }
        }
    }

    #[test]
    fn simple_reflection_matches_signed_perm() {
        let d = build_root_datum(TypeLabel::B, 3).unwrap();
        let a = Ambient::new(TypeLabel::B, 3).unwrap();
        assert_eq!(a.lattice_matrix(&SignedPerm::transposition(3, 1, 2)), d.simple_reflection(1));
        assert_eq!(a.lattice_matrix(&SignedPerm::sign(3, 3)), d.simple_reflection(3));
        let d = build_root_datum(TypeLabel::C, 3).unwrap();
        let a = Ambient::new(TypeLabel::C, 3).unwrap();
        assert_eq!(a.lattice_matrix(&SignedPerm::sign(3, 3)), d.simple_reflection(3));
        let d = build_root_datum(TypeLabel::D, 4).unwrap();
        let a = Ambient::new(TypeLabel::D, 4).unwrap();
        let t = SignedPerm::sign(4, 3).compose(&SignedPerm::sign(4, 4)).compose(&SignedPerm::transposition(4, 3, 4));
        assert_eq!(a.lattice_matrix(&t), d.simple_reflection(4));
    }
}
