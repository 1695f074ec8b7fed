use std::collections::{BTreeMap, BTreeSet, HashMap};

use gradecs_core::cyclotomic::BinomialProduct;
use gradecs_core::grading::{CasePattern, Grading};
use gradecs_core::reflgroup::*;
use gradecs_core::rootdata::TorusElt;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;

mod common;

fn perms(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(r - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, r - 1);
            out.push(q);
        }
    }
    out
}

/// Every element of G(m,p,r) as (σ, c).
fn elements(m: u32, p: u32, r: usize) -> Vec<(Vec<usize>, Vec<u32>)> {
    let mut out = Vec::new();
    for s in perms(r) {
        for code in 0..(m as usize).pow(r as u32) {
            let c: Vec<u32> = (0..r).map(|i| (code / (m as usize).pow(i as u32) % m as usize) as u32).collect();
            if c.iter().sum::<u32>() % p == 0 {
                out.push((s.clone(), c));
            }
        }
    }
    out
}

/// Hyperplane normals: (i, j, k) for e_j - ζ^k e_i with i < j, or (i, i, 0) for e_i.
type Normal = (usize, usize, u32);

fn act((s, c): &(Vec<usize>, Vec<u32>), n: Normal, m: u32) -> Normal {
    // g e_i = ζ^{c_{σ(i)}} e_{σ(i)}
    let (i, j, k) = n;
    if i == j {
        return (s[i], s[i], 0);
    }
    let (a, b) = (s[i], s[j]);
    // e_b ζ^{c_b} - ζ^{k + c_a} e_a  ∝  e_b - ζ^{k + c_a - c_b} e_a
    let t = (k + c[a] + m - c[b]) % m;
    if a < b {
        (a, b, t)
    } else {
        (b, a, (m - t) % m)
    }
}

fn orbit_count_by_scan(m: u32, p: u32, r: usize) -> usize {
    let els = elements(m, p, r);
    // reflections: σ = id with one nonzero phase, or a transposition with c_i + c_j = 0
    let mut hyps: BTreeSet<Normal> = BTreeSet::new();
    for (s, c) in &els {
        let moved: Vec<usize> = (0..r).filter(|&i| s[i] != i).collect();
        let nz: Vec<usize> = (0..r).filter(|&i| c[i] != 0).collect();
        if moved.is_empty() && nz.len() == 1 {
            hyps.insert((nz[0], nz[0], 0));
        } else if moved.len() == 2 && nz.iter().all(|x| moved.contains(x)) {
            let (i, j) = (moved[0], moved[1]);
            if (c[i] + c[j]) % m == 0 {
                // fixes x_j = ζ^{c_j} x_i; normal e_j - ζ^{c_j} e_i
                hyps.insert((i, j, c[j]));
            }
        }
    }
    let mut seen: BTreeSet<Normal> = BTreeSet::new();
    let mut count = 0;
    for &h in &hyps {
        if seen.insert(h) {
            count += 1;
            for g in &els {
                let img = act(g, h, m);
                assert!(hyps.contains(&img));
                seen.insert(img);
            }
        }
    }
    count
}

#[test]
fn hyperoctahedral_orders() {
    for n in 1..=5 {
        let g = build_reflection_group(2, 1, n).unwrap();
        let fact: u64 = (1..=n as u64).product();
        assert_eq!(g.order(), 2u64.pow(n as u32) * fact);
        assert_eq!(g.elements(10_000).unwrap().len() as u64, g.order());
    }
}

#[test]
fn g422_orbits() {
    let g = build_reflection_group(4, 2, 2).unwrap();
    assert_eq!(g.order(), 16);
    assert_eq!(elements(4, 2, 2).len(), 16);
    // mirrors x_2 = ±x_1, mirrors x_2 = ±i x_1, and the coordinate lines
    assert_eq!(orbit_count_by_scan(4, 2, 2), 3);
    assert_eq!(g.num_orbits, 3);
}

#[test]
fn cyclic_rank_one() {
    for m in 2..9 {
        let g = build_reflection_group(m, 1, 1).unwrap();
        assert_eq!(g.order(), m as u64);
        assert_eq!(g.reflections.len(), 1);
        assert_eq!(g.reflections[0].hyperplane(), Hyperplane::Coordinate(0));
        assert_eq!(g.reflections[0].order, m);
    }
}

fn grading(case: &str) -> Grading {
    Grading::new(&case.parse::<CasePattern>().unwrap().resolve().unwrap()).unwrap()
}

fn gamma(g: &Grading, k: usize) -> TorusElt {
    g.named[k].1.clone()
}

#[test]
fn action_on_fixed_points() {
    let g = grading("B:n=8:m=4:r=4");
    let emb = &g.aut.embedding;
    let (m, r) = (4, 4);
    let x = gamma(&g, 1);
    assert_eq!(reflection_action_on_group(Some(emb), &MonomialElement::identity(m, r), &x).unwrap(), x);
    for i in 0..r {
        for k in i + 1..r {
            let s = MonomialElement::transposition(m, r, i, k, 0);
            let got = reflection_action_on_group(Some(emb), &s, &gamma(&g, k)).unwrap();
            if k + 1 < r {
                let want = (i..=k).map(|a| gamma(&g, a)).fold(TorusElt::identity(8), |acc, y| acc.mul(&y));
                assert_eq!(got, want, "s_{}{}", i, k);
            } else {
                assert_eq!(got, gamma(&g, k));
            }
        }
    }
    let g = grading("A:n=8:m=6:r=3");
    let emb = &g.aut.embedding;
    for i in 0..3 {
        for k in 0..g.named.len() {
            let t = MonomialElement::diagonal(6, 3, i, 1);
            assert_eq!(reflection_action_on_group(Some(emb), &t, &gamma(&g, k)).unwrap(), gamma(&g, k));
        }
    }
    assert!(reflection_action_on_group(None, &MonomialElement::identity(2, 1), &TorusElt::identity(1)).is_err());
}

#[test]
fn hecke_labels() {
    for (m, r) in [(4, 3), (6, 2), (8, 1)] {
        let l = m / 2;
        assert_eq!(
            hecke_label(GroupType { m, p: 1, r }, HeckeParams::Split(l + 1, l - 1)).unwrap(),
            format!("H^{{{},{}}}(G({},1,{}))", l + 1, l - 1, m, r)
        );
    }
    assert_eq!(hecke_label(GroupType { m: 4, p: 2, r: 3 }, HeckeParams::Half).unwrap(), "H^{2}(G(4,2,3))");
    assert_eq!(hecke_label(GroupType { m: 1, p: 1, r: 1 }, HeckeParams::Half), None);
}

#[test]
fn trivial_parameters() {
    for (m, p, r) in [(4, 1, 2), (6, 2, 3), (3, 1, 1), (2, 2, 4)] {
        let g = build_reflection_group(m, p, r).unwrap();
        let sub = ReflectionSubgroup::generated(m, r, &g.generator_elements()).unwrap();
        let rel: HashMap<Hyperplane, (u32, BinomialProduct)> = g
            .reflections
            .iter()
            .map(|s| {
                let triv = BinomialProduct::from_factors(std::iter::repeat_n((1, Ratio::zero()), s.order as usize));
                (s.hyperplane(), (s.order, triv))
            })
            .collect();
        let h = assemble_hecke(&sub, &rel).unwrap();
        assert!(h.trivial_parameters, "G({},{},{})", m, p, r);
    }
}

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn orbit_counts(m in 1u32..7, r in 1usize..4, p in 1u32..3) {
        prop_assume!(m % p == 0);
        let g = build_reflection_group(m, p, r).unwrap();
        prop_assert_eq!(g.order() as usize, elements(m, p, r).len());
        prop_assert_eq!(g.num_orbits, orbit_count_by_scan(m, p, r));
        let by_orbit: BTreeMap<usize, usize> = g.reflections.iter().fold(BTreeMap::new(), |mut acc, s| {
            *acc.entry(s.hyperplane_orbit).or_default() += 1;
            acc
        });
        prop_assert_eq!(by_orbit.len(), g.num_orbits);
    }
}
