//! Closed-form expectations for the classical families and the rank-one
//! monodromy formulas, used by the verification harness.

use num_traits::Zero;

use crate::cyclotomic::{BinomialProduct, Q};
use crate::grading::{Family, GradingDescriptor};
use crate::reflgroup::{GroupType, HeckeParams};
use crate::rootdata::TypeLabel;

/// One expected orbit representative with its stabilizer data.
#[derive(Clone, Debug)]
pub struct ExpectedRep {
    pub label: String,
    /// values on the named generators, as exponents in Q/Z
    pub values: Vec<Q>,
    pub w0: Vec<GroupType>,
    pub hecke: Vec<(GroupType, HeckeParams)>,
    /// W_{a,χ}/W⁰ as elementary divisors
    pub stab_over_w0: Vec<u64>,
    /// W⁰/W^en
    pub w0_over_en: Option<Vec<u64>>,
    /// W_{a,χ}/W^en
    pub stab_over_en: Option<Vec<u64>>,
    pub en: Option<Vec<GroupType>>,
}

#[derive(Clone, Debug)]
pub struct LemmaTable {
    pub family: &'static str,
    /// invariant factors of the group generated by the named generators
    pub invariant_factors: Vec<i64>,
    pub reps: Vec<ExpectedRep>,
}

fn g(m: usize, p: u32, r: usize) -> GroupType {
    GroupType { m: m as u32, p, r }
}

fn split(t: GroupType, a: usize, b: usize) -> (GroupType, HeckeParams) {
    (t, HeckeParams::Split(a as u32, b as u32))
}

fn minus() -> Q {
    Q::new(1, 2)
}

/// χ sending the listed (1-based) generators to the given values, the rest to 1.
fn values(count: usize, set: &[(usize, Q)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); count];
    for &(i, q) in set {
        v[i - 1] = q;
    }
    v
}

fn chi(k: usize) -> String {
    format!("chi{}", k)
}

fn rep(label: String, values: Vec<Q>, w0: Vec<GroupType>, hecke: Vec<(GroupType, HeckeParams)>) -> ExpectedRep {
    // G(M,p,0) is the trivial group
    let w0: Vec<GroupType> = w0.into_iter().filter(|t| t.r > 0).collect();
    let hecke: Vec<(GroupType, HeckeParams)> = hecke.into_iter().filter(|(t, _)| t.r > 0).collect();
    ExpectedRep { label, values, w0, hecke, stab_over_w0: vec![], w0_over_en: None, stab_over_en: None, en: None }
}

/// The table for a classical family, or None outside the families covered.
pub fn lemma_table(d: &GradingDescriptor) -> Option<LemmaTable> {
    let (r, b, m) = (d.r, d.block, d.m as usize);
    match d.family {
        Family::AOuterBlocks => {
            let l = (b - 1) / 2;
            let n = r - 1;
            let reps = (0..=r / 2)
                .map(|k| {
                    let vals = if k == 0 { values(n, &[]) } else { values(n, &[(k, minus())]) };
                    let mut e = rep(
                        chi(k),
                        vals,
                        vec![g(b, 1, k), g(b, 1, r - k)],
                        vec![split(g(b, 1, k), l + 1, l), split(g(b, 1, r - k), l + 1, l)],
                    );
                    e.w0_over_en = Some(vec![]);
                    e.stab_over_w0 = if 2 * k == r { vec![2] } else { vec![] };
                    e
                })
                .collect();
            Some(LemmaTable { family: "A-outer-rd", invariant_factors: vec![2; n], reps })
        }
        Family::AOuterBlocksPlusOne => {
            let l = (b - 1) / 2;
            let reps = (0..=r)
                .map(|k| {
                    let set: Vec<(usize, Q)> = (1..=k).map(|i| (i, minus())).collect();
                    let mut e = rep(
                        chi(k),
                        values(r, &set),
                        vec![g(b, 1, k), g(b, 1, r - k)],
                        vec![split(g(b, 1, r - k), l + 2, l - 1), split(g(b, 1, k), l + 1, l)],
                    );
                    e.w0_over_en = Some(vec![]);
                    e.stab_over_en = Some(vec![]);
                    e
                })
                .collect();
            Some(LemmaTable { family: "A-outer-rd+1", invariant_factors: vec![2; r], reps })
        }
        Family::B => {
            let l = b;
            let mut reps: Vec<ExpectedRep> = (0..=r / 2)
                .filter(|&k| k < r)
                .map(|k| {
                    let vals = if k == 0 { values(r, &[]) } else { values(r, &[(k, minus())]) };
                    let w0 = vec![g(m, 1, k), g(m, 1, r - k)];
                    let mut e = rep(
                        chi(k),
                        vals,
                        w0.clone(),
                        vec![split(g(m, 1, k), l + 1, l - 1), split(g(m, 1, r - k), l + 1, l - 1)],
                    );
                    e.en = Some(w0.into_iter().filter(|t| t.r > 0).collect());
                    e.w0_over_en = Some(vec![]);
                    e.stab_over_w0 = if 2 * k == r { vec![2] } else { vec![] };
                    e
                })
                .collect();
            let mut e = rep(
                chi(r),
                values(r, &[(r, minus())]),
                vec![g(l, 1, r)],
                vec![split(g(l, 1, r), l / 2 + 1, (l - 1) / 2)],
            );
            e.en = Some(vec![g(l, 1, r)]);
            e.w0_over_en = Some(vec![]);
            e.stab_over_w0 = vec![2];
            reps.push(e);
            Some(LemmaTable { family: "B", invariant_factors: vec![2; r], reps })
        }
        Family::C => {
            let l = b;
            let reps = (0..=r)
                .map(|k| {
                    let set: Vec<(usize, Q)> = if l % 2 == 0 {
                        (1..=k).map(|i| (i, minus())).collect()
                    } else if k == 0 {
                        vec![]
                    } else {
                        vec![(k, minus())]
                    };
                    let mut e = rep(
                        chi(k),
                        values(r, &set),
                        vec![g(m, 1, k), g(m, 1, r - k)],
                        vec![split(g(m, 1, k), l, l), split(g(m, 1, r - k), l + 1, l - 1)],
                    );
                    if k >= 1 {
                        e.en = Some([g(m, 2, k), g(m, 1, r - k)].into_iter().filter(|t| t.r > 0).collect());
                        e.stab_over_en = Some(vec![2]);
                        e.w0_over_en = Some(vec![2]);
                    } else {
                        e.en = Some(vec![g(m, 1, r)]);
                        e.stab_over_en = Some(vec![]);
                        e.w0_over_en = Some(vec![]);
                    }
                    e
                })
                .collect();
            Some(LemmaTable { family: "C", invariant_factors: vec![2; r], reps })
        }
        Family::DBlocks => {
            let l = b;
            let kmax = if r % 2 == 1 { (r - 1) / 2 } else { r / 2 };
            let mut reps: Vec<ExpectedRep> = (0..=kmax)
                .filter(|&k| k < r)
                .map(|k| {
                    let vals = if k == 0 { values(r, &[]) } else { values(r, &[(k, minus())]) };
                    let w0 = vec![g(m, 2, k), g(m, 2, r - k)];
                    let mut e = rep(
                        chi(k),
                        vals,
                        w0.clone(),
                        vec![(g(m, 2, k), HeckeParams::Half), (g(m, 2, r - k), HeckeParams::Half)],
                    );
                    e.en = Some(w0.into_iter().filter(|t| t.r > 0).collect());
                    e.w0_over_en = Some(vec![]);
                    e.stab_over_w0 = if k == 0 {
                        vec![]
                    } else if 2 * k == r {
                        vec![2, 2]
                    } else {
                        vec![2]
                    };
                    e
                })
                .collect();
            let mut tail = vec![(r, values(r, &[(r, minus())]))];
            if r % 2 == 0 {
                tail.push((r + 1, values(r, &[(r - 1, minus()), (r, minus())])));
            }
            for (k, vals) in tail {
                let mut e = rep(chi(k), vals, vec![g(l, 1, r)], vec![split(g(l, 1, r), l.div_ceil(2), l / 2)]);
                if l % 2 == 1 {
                    e.en = Some(vec![g(l, 1, r)]);
                    e.w0_over_en = Some(vec![]);
                } else {
                    e.w0_over_en = Some(vec![2]);
                }
                e.stab_over_w0 = if r % 2 == 0 { vec![2] } else { vec![] };
                reps.push(e);
            }
            Some(LemmaTable { family: "D-rl", invariant_factors: vec![2; r], reps })
        }
        Family::DBlocksPlusOne => {
            let l = b;
            let count = if l % 2 == 0 { r } else { r + 1 };
            let mut reps: Vec<ExpectedRep> = (0..=r)
                .map(|k| {
                    let vals = if k == 0 { values(count, &[]) } else { values(count, &[(k, minus())]) };
                    let mut e = rep(
                        chi(k),
                        vals,
                        vec![g(m, 1, k), g(m, 1, r - k)],
                        vec![split(g(m, 1, k), l, l), split(g(m, 1, r - k), l + 2, l - 2)],
                    );
                    e.w0_over_en = Some(if k == 0 { vec![] } else { vec![2] });
                    if k == 0 {
                        e.en = Some(vec![g(m, 1, r)]);
                    }
                    e
                })
                .collect();
            let tail: Vec<(usize, Vec<Q>)> = if l % 2 == 0 {
                vec![(r + 1, values(count, &[(r, Q::new(1, 4))])), (r + 2, values(count, &[(r, Q::new(3, 4))]))]
            } else {
                vec![
                    (r + 1, values(count, &[(r + 1, minus())])),
                    (r + 2, values(count, &[(r, minus()), (r + 1, minus())])),
                ]
            };
            let hecke =
                if l % 2 == 0 { split(g(l, 1, r), l / 2, l / 2) } else { split(g(l, 1, r), (l + 3) / 2, (l - 3) / 2) };
            for (k, vals) in tail.into_iter().take(if r % 2 == 0 { 1 } else { 2 }) {
                let mut e = rep(chi(k), vals, vec![g(l, 1, r)], vec![hecke.clone()]);
                if l % 2 == 1 {
                    e.en = Some(vec![g(l, 1, r)]);
                    e.w0_over_en = Some(vec![]);
                } else {
                    e.w0_over_en = Some(vec![2]);
                }
                e.stab_over_w0 = if r % 2 == 1 { vec![2] } else { vec![] };
                reps.push(e);
            }
            let invariant_factors = if l % 2 == 0 {
                let mut v = vec![2; r - 1];
                v.push(4);
                v
            } else {
                vec![2; r + 1]
            };
            Some(LemmaTable { family: "D-rl+1", invariant_factors, reps })
        }
        _ => None,
    }
}

fn bp(factors: &[(u32, Q, usize)]) -> BinomialProduct {
    BinomialProduct::from_factors(factors.iter().flat_map(|&(k, q, n)| std::iter::repeat_n((k, q), n)))
}

/// x^k - 1 and x^k + 1
fn xm(k: u32, n: usize) -> (u32, Q, usize) {
    (k, Q::zero(), n)
}

fn xp(k: u32, n: usize) -> (u32, Q, usize) {
    (k, Q::new(1, 2), n)
}

/// Monic rank-one monodromy polynomial of a grading with r = 1, from the
/// explicit per-type formulas; `vals` are the character values on the named
/// generators. None when the grading has no rank-one formula.
pub fn rank_one_formula(d: &GradingDescriptor, vals: &[Q]) -> Option<BinomialProduct> {
    if d.r != 1 {
        return None;
    }
    let n = d.n;
    let triv = vals.iter().all(|q| q.is_zero());
    let out = match (d.type_label, d.family) {
        (TypeLabel::A, Family::AInner) => {
            let nn = n + 1;
            let q = vals[0];
            // (x - 1) Π_{k=1}^{N-1} (χ(z)^k x - 1), made monic
            let f: Vec<(u32, Q)> = (0..nn as i64).map(|k| (1, crate::linalg::frac(-q * Q::from(k)))).collect();
            BinomialProduct::from_factors(f)
        }
        (TypeLabel::A, Family::AOuterBlocks) => {
            // A_{2k}, twisted
            let k = n / 2;
            bp(&[xm(1, k + 1), xp(1, k)])
        }
        (TypeLabel::A, Family::AOuterBlocksPlusOne) => {
            // A_{2k-1}, twisted
            let k = n.div_ceil(2);
            if triv {
                bp(&[xm(1, k + 1), xp(1, k - 2)])
            } else {
                bp(&[xm(1, k), xp(1, k - 1)])
            }
        }
        (TypeLabel::B, Family::B) => {
            if triv {
                bp(&[xm(1, n + 1), xp(1, n - 1)])
            } else {
                bp(&[xm(2, n / 2 + 1), xp(2, (n - 1) / 2)])
            }
        }
        (TypeLabel::C, Family::C) => {
            if triv {
                bp(&[xm(1, n + 1), xp(1, n - 1)])
            } else {
                bp(&[xm(2, n)])
            }
        }
        (TypeLabel::D, Family::DBlocksPlusOne) => {
            let z1 = vals[0];
            if n % 2 == 1 {
                if z1.is_zero() {
                    bp(&[xm(1, n + 1), xp(1, n - 3)])
                } else if z1 == minus() {
                    bp(&[xm(2, n - 1)])
                } else {
                    bp(&[xm(4, (n - 1) / 2)])
                }
            } else {
                let z2 = vals[1];
                if triv {
                    bp(&[xm(1, n + 1), xp(1, n - 3)])
                } else if z1 == minus() && z2.is_zero() {
                    bp(&[xm(2, n - 1)])
                } else {
                    bp(&[xm(2, n / 2 + 1), xp(2, n / 2 - 2)])
                }
            }
        }
        (TypeLabel::D, Family::DBlocks) => {
            if triv {
                bp(&[xm(1, n)])
            } else {
                bp(&[xm(1, n.div_ceil(2)), xp(1, n / 2)])
            }
        }
        (TypeLabel::D, Family::D4Triality) => bp(&[xm(1, 2), xm(2, 1)]),
        (TypeLabel::E6, Family::Coxeter) => {
            if triv {
                bp(&[xm(1, 3), xm(2, 3), xm(3, 1)])
            } else {
                bp(&[xm(3, 2), xm(6, 1)])
            }
        }
        (TypeLabel::E6, Family::E6Outer) => bp(&[xm(1, 2), xm(2, 2), xm(3, 1)]),
        (TypeLabel::E7, _) => {
            if triv {
                bp(&[xm(1, 2), xm(2, 3), xm(3, 2), xm(4, 1)])
            } else {
                bp(&[xm(2, 2), xm(4, 2), xm(6, 1)])
            }
        }
        (TypeLabel::E8, _) => bp(&[xm(1, 1), xm(2, 2), xm(3, 2), xm(4, 2), xm(5, 1), xm(6, 1)]),
        (TypeLabel::F4, _) => bp(&[xm(1, 1), xm(2, 2), xm(3, 1), xm(4, 1)]),
        (TypeLabel::G2, _) => bp(&[xm(1, 1), xm(2, 1), xm(3, 1)]),
        _ => return None,
    };
    Some(out)
}
