//! Exact arithmetic in cyclotomic fields Q(ζ_M) and polynomials over them.
//!
//! `ζ_M` is always `e^{2πi/M}`. Elements are stored in the power basis
//! `1, ζ, …, ζ^{φ(M)-1}` after reduction by the M-th cyclotomic polynomial,
//! so structural equality is field equality once moduli agree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Q = Rational64;

/// Largest modulus we are willing to work in.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} exceeds the bound {MAX_MODULUS}")]
    ModulusOverflow(u64),
    #[error("polynomial is not a polynomial in x^{0}")]
    NotAPowerPoly(u32),
}

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn poly_mul_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// exact division by a monic integer polynomial
fn poly_div_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db];
        q[i] = c;
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= c * y;
        }
    }
    debug_assert!(rem.iter().all(|x| *x == 0));
    q
}

fn compute_cyclotomic(m: u32) -> Vec<i64> {
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        match mobius(m / d) {
            1 => num = poly_mul_int(&num, &f),
            -1 => den = poly_mul_int(&den, &f),
            _ => {}
        }
    }
    poly_div_int(&num, &den)
}

/// Coefficients of Φ_M, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache poisoned").get(&m) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(m));
    cache.lock().expect("cache poisoned").insert(m, p.clone());
    p
}

fn lcm_checked(a: u32, b: u32) -> Result<u32, CycloError> {
    let l = (a as u64).lcm(&(b as u64));
    if l > MAX_MODULUS {
        return Err(CycloError::ModulusOverflow(l));
    }
    Ok(l as u32)
}

/// An element of Q(ζ_M).
#[derive(Clone, Debug)]
pub struct CycloNum {
    modulus: u32,
    coeffs: Vec<Q>,
}

impl CycloNum {
    /// Builds Σ c_e ζ_M^e from arbitrary integer exponents.
    pub fn from_terms(modulus: u32, terms: impl IntoIterator<Item = (i64, Q)>) -> Self {
        assert!(modulus >= 1 && (modulus as u64) <= MAX_MODULUS);
        let mut dense = vec![Q::zero(); modulus as usize];
        for (e, c) in terms {
            let e = e.rem_euclid(modulus as i64) as usize;
            dense[e] += c;
        }
        Self::reduce(modulus, dense)
    }

    fn reduce(modulus: u32, mut dense: Vec<Q>) -> Self {
        let phi = cyclotomic_polynomial(modulus);
        let deg = phi.len() - 1;
        for i in (deg..dense.len()).rev() {
            let c = dense[i];
            if c.is_zero() {
                continue;
            }
            for (j, p) in phi.iter().enumerate() {
                dense[i - deg + j] -= c * Q::from(*p);
            }
        }
        dense.truncate(deg);
        dense.resize(deg, Q::zero());
        CycloNum { modulus, coeffs: dense }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::from_terms(modulus, [])
    }

    pub fn one(modulus: u32) -> Self {
        Self::rational(modulus, Q::one())
    }

    pub fn rational(modulus: u32, q: Q) -> Self {
        Self::from_terms(modulus, [(0, q)])
    }

    /// ζ_M^k
    pub fn zeta(modulus: u32, k: i64) -> Self {
        Self::from_terms(modulus, [(k, Q::one())])
    }

    /// e^{2πi q} for a rational q.
    pub fn root_of_unity(q: Q) -> Self {
        let m = *q.denom() as u32;
        Self::zeta(m, *q.numer())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().copied().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    /// Re-expresses the element in Q(ζ_L) for a multiple L of the modulus.
    pub fn coerce(&self, target: u32) -> Self {
        assert!(target.is_multiple_of(self.modulus), "modulus {} does not divide {}", self.modulus, target);
        if target == self.modulus {
            return self.clone();
        }
        let step = (target / self.modulus) as i64;
        Self::from_terms(target, self.coeffs.iter().enumerate().map(|(e, c)| (e as i64 * step, *c)))
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), CycloError> {
        let l = lcm_checked(self.modulus, other.modulus)?;
        Ok((self.coerce(l), other.coerce(l)))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        let (a, b) = self.common(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(CycloNum { modulus: a.modulus, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        let (a, b) = self.common(other)?;
        let mut dense = vec![Q::zero(); 2 * a.coeffs.len().max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                dense[i + j] += x * y;
            }
        }
        Ok(Self::reduce(a.modulus, dense))
    }

    fn galois(&self, k: i64) -> Self {
        Self::from_terms(self.modulus, self.coeffs.iter().enumerate().map(|(e, c)| (e as i64 * k, *c)))
    }

    /// Inverse via the norm: a^{-1} = Π_{σ≠1} σ(a) / N(a).
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let m = self.modulus as i64;
        let mut prod = Self::one(self.modulus);
        for k in 2..m.max(2) {
            if k.gcd(&m) == 1 {
                prod = &prod * &self.galois(k);
            }
        }
        let norm = (self * &prod).as_rational().expect("norm of a cyclotomic number is rational");
        Ok(prod.scale(Q::one() / norm))
    }

    pub fn scale(&self, q: Q) -> Self {
        CycloNum { modulus: self.modulus, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Smallest modulus in which the element lives.
    pub fn minimal(&self) -> Self {
        let m = self.modulus;
        for d in 1..=m {
            if !m.is_multiple_of(d) {
                continue;
            }
            let step = (m / d) as usize;
            // an element of Q(ζ_d) has support on multiples of m/d after coercion
            let cand = Self::from_terms(
                d,
                self.coeffs.iter().enumerate().filter(|(e, _)| e % step == 0).map(|(e, c)| ((e / step) as i64, *c)),
            );
            if cand.coerce(m).coeffs == self.coeffs {
                return cand;
            }
        }
        self.clone()
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycloNum {}

impl std::ops::Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.checked_add(rhs).expect("cyclotomic modulus overflow")
    }
}

impl std::ops::Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.checked_add(&-rhs).expect("cyclotomic modulus overflow")
    }
}

impl std::ops::Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.checked_mul(rhs).expect("cyclotomic modulus overflow")
    }
}

impl std::ops::Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        self.scale(-Q::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycloOp {
    Add,
    Mul,
    Inv,
}

/// `inv` ignores `b`.
pub fn cyclo_arith(a: &CycloNum, b: &CycloNum, op: CycloOp) -> Result<CycloNum, CycloError> {
    match op {
        CycloOp::Add => a.checked_add(b),
        CycloOp::Mul => a.checked_mul(b),
        CycloOp::Inv => a.inv(),
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let me = self.minimal();
        if let Some(q) = me.as_rational() {
            return write!(f, "{}", fmt_q(&q));
        }
        let mut first = true;
        for (e, c) in me.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = match e {
                0 => String::new(),
                1 => format!("E({})", me.modulus),
                _ => format!("E({})^{}", me.modulus, e),
            };
            if unit.is_empty() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{}", unit)?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), unit)?;
            }
        }
        Ok(())
    }
}

/// A polynomial in one variable over a cyclotomic field, lowest degree first.
#[derive(Clone, Debug)]
pub struct CycloPoly {
    coeffs: Vec<CycloNum>,
}

impl CycloPoly {
    pub fn new(coeffs: Vec<CycloNum>) -> Self {
        let m = coeffs.iter().fold(1u32, |acc, c| lcm_checked(acc, c.modulus()).expect("cyclotomic modulus overflow"));
        let mut coeffs: Vec<CycloNum> = coeffs.into_iter().map(|c| c.coerce(m)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycloPoly { coeffs }
    }

    pub fn zero() -> Self {
        CycloPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        CycloPoly { coeffs: vec![CycloNum::one(1)] }
    }

    /// x^k - c
    pub fn binomial(k: usize, c: &CycloNum) -> Self {
        let mut v = vec![CycloNum::zero(c.modulus()); k + 1];
        v[0] = -c;
        v[k] = CycloNum::one(c.modulus());
        if k == 0 {
            v = vec![&CycloNum::one(c.modulus()) - c];
        }
        Self::new(v)
    }

    /// Polynomial with rational integer coefficients.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|x| CycloNum::rational(1, Q::from(*x))).collect())
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn modulus(&self) -> u32 {
        self.coeffs.first().map_or(1, |c| c.modulus())
    }

    pub fn leading(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let m = lcm_checked(self.modulus(), other.modulus()).expect("cyclotomic modulus overflow");
        let mut out = vec![CycloNum::zero(m); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = CycloNum::zero(1);
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&z);
                    let b = other.coeffs.get(i).unwrap_or(&z);
                    a + b
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// x ↦ x^d
    pub fn expand_power(&self, d: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let m = self.modulus();
        let mut v = vec![CycloNum::zero(m); (self.coeffs.len() - 1) * d as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * d as usize] = c.clone();
        }
        Self::new(v)
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }
}

impl PartialEq for CycloPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl Eq for CycloPoly {}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{}", e),
            };
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{}", mono)
            } else if c.as_rational().is_some() {
                format!("{}{}", cs, mono)
            } else {
                format!("({}){}", cs, mono)
            };
            terms.push(term);
        }
        let mut s = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                s.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{}", s)
    }
}

/// g with g(x^d) = R(x).
pub fn poly_substitute_power(r: &CycloPoly, d: u32) -> Result<CycloPoly, CycloError> {
    assert!(d >= 1);
    for (e, c) in r.coeffs().iter().enumerate() {
        if !c.is_zero() && e % d as usize != 0 {
            return Err(CycloError::NotAPowerPoly(d));
        }
    }
    Ok(CycloPoly::new(r.coeffs().iter().step_by(d as usize).cloned().collect()))
}

/// Largest d with R(x) = g(x^d); 1 for constants.
pub fn max_extractable_power(r: &CycloPoly) -> u32 {
    let support: Vec<usize> = r.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, _)| e).collect();
    let Some(&e0) = support.first() else { return 1 };
    let g = support.iter().fold(0usize, |g, e| g.gcd(&(e - e0)));
    if g == 0 {
        // a monomial
        (e0 as u32).max(1)
    } else {
        g as u32
    }
}

/// A monic polynomial whose roots are roots of unity, stored as its root
/// multiset and displayed as a product Π (x^k - e^{2πi q})^mult.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinomialProduct {
    /// (angle in [0, 1), multiplicity), sorted by angle
    roots: Vec<((i64, i64), u32)>,
}

fn frac(q: Q) -> Q {
    q - Q::from(q.floor().to_integer())
}

impl BinomialProduct {
    pub fn one() -> Self {
        BinomialProduct { roots: vec![] }
    }

    /// Monic product from (k, q) pairs meaning x^k - e^{2πi q}.
    pub fn from_factors(factors: impl IntoIterator<Item = (u32, Q)>) -> Self {
        let mut acc: BTreeMap<Q, u32> = BTreeMap::new();
        for (k, q) in factors {
            for j in 0..k {
                *acc.entry(frac((q + Q::from(j as i64)) / Q::from(k as i64))).or_insert(0) += 1;
            }
        }
        Self::from_roots(acc)
    }

    fn from_roots(acc: BTreeMap<Q, u32>) -> Self {
        BinomialProduct {
            roots: acc.into_iter().filter(|(_, n)| *n > 0).map(|(q, n)| ((*q.numer(), *q.denom()), n)).collect(),
        }
    }

    fn root_map(&self) -> BTreeMap<Q, u32> {
        self.roots.iter().map(|((a, b), n)| (Q::new(*a, *b), *n)).collect()
    }

    /// Roots e^{2πi q} with multiplicities.
    pub fn roots(&self) -> impl Iterator<Item = (Q, u32)> + '_ {
        self.roots.iter().map(|((a, b), n)| (Q::new(*a, *b), *n))
    }

    /// Factored form: greedily split off the largest x^k - c whose roots remain.
    pub fn factors(&self) -> Vec<(u32, Q, u32)> {
        let mut left = self.root_map();
        let mut out: Vec<(u32, Q, u32)> = Vec::new();
        let mut k = self.degree();
        while k >= 1 {
            let start = left
                .keys()
                .copied()
                .find(|a| (0..k).all(|j| left.get(&frac(*a + Q::new(j as i64, k as i64))).is_some_and(|n| *n > 0)));
            match start {
                Some(a) => {
                    for j in 0..k {
                        let r = frac(a + Q::new(j as i64, k as i64));
                        let n = left.get_mut(&r).expect("present");
                        *n -= 1;
                        if *n == 0 {
                            left.remove(&r);
                        }
                    }
                    let q = frac(a * Q::from(k as i64));
                    match out.iter_mut().find(|f| f.0 == k && f.1 == q) {
                        Some(f) => f.2 += 1,
                        None => out.push((k, q, 1)),
                    }
                }
                None => k -= 1,
            }
        }
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|(_, n)| n).sum()
    }

    pub fn expand(&self) -> CycloPoly {
        let mut p = CycloPoly::one();
        for (q, n) in self.roots() {
            p = p.mul(&CycloPoly::binomial(1, &CycloNum::root_of_unity(q)).pow(n));
        }
        p
    }

    /// R̄ with R(x) = R̄(x^d), when R is a polynomial in x^d.
    pub fn substitute_power(&self, d: u32) -> Option<Self> {
        let roots = self.root_map();
        let step = Q::new(1, d as i64);
        if roots.iter().any(|(q, n)| roots.get(&frac(*q + step)) != Some(n)) {
            return None;
        }
        let mut acc: BTreeMap<Q, u32> = BTreeMap::new();
        for (q, n) in &roots {
            *acc.entry(frac(*q * Q::from(d as i64))).or_insert(0) += n;
        }
        for n in acc.values_mut() {
            *n /= d;
        }
        Some(Self::from_roots(acc))
    }

    /// R(x^d).
    pub fn expand_power(&self, d: u32) -> Self {
        Self::from_factors(self.roots().flat_map(|(q, n)| std::iter::repeat_n((d, q), n as usize)))
    }

    /// Largest d with R(x) = R̄(x^d).
    pub fn max_power(&self) -> u32 {
        let deg = self.degree().max(1);
        (1..=deg).rev().find(|d| deg.is_multiple_of(*d) && self.substitute_power(*d).is_some()).unwrap_or(1)
    }
}

impl fmt::Display for BinomialProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return write!(f, "1");
        }
        for (k, q, n) in self.factors() {
            let xk = if k == 1 { "x".to_string() } else { format!("x^{}", k) };
            let body = if q.is_zero() {
                format!("({}-1)", xk)
            } else if q == Q::new(1, 2) {
                format!("({}+1)", xk)
            } else {
                format!("({}-E({})^{})", xk, q.denom(), q.numer())
            };
            if n == 1 {
                write!(f, "{}", body)?;
            } else {
                write!(f, "{}^{}", body, n)?;
            }
        }
        Ok(())
    }
}
