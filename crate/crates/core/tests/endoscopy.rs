use std::collections::BTreeSet;

use gradecs_core::charmono::{stabilizer_data, CaseAnalysis, TorusCharacter};
use gradecs_core::endoscopy::*;
use gradecs_core::grading::{enumerate_stable_gradings, CasePattern, Grading};
use gradecs_core::rootdata::TypeLabel;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;

mod common;

type Q = Ratio<i64>;

fn analysis(case: &str) -> CaseAnalysis {
    let d = case.parse::<CasePattern>().unwrap().resolve().unwrap();
    CaseAnalysis::new(Grading::new(&d).unwrap()).unwrap()
}

fn report(a: &CaseAnalysis, chi: usize) -> EndoscopyReport {
    let dual = char_to_dual_torus(a).unwrap();
    endoscopy_group(a, &dual, &stabilizer_data(a, chi).unwrap()).unwrap()
}

/// SO(2k) as a Dynkin label, or None for a torus.
fn so_even(k: usize) -> Vec<String> {
    match k {
        0 | 1 => vec![],
        2 => vec!["A1".into(), "A1".into()],
        3 => vec!["A3".into()],
        k => vec![format!("D{}", k)],
    }
}

fn so_odd(k: usize) -> Vec<String> {
    match k {
        0 => vec![],
        1 => vec!["A1".into()],
        k => vec![format!("B{}", k)],
    }
}

fn label(mut parts: Vec<String>) -> String {
    parts.sort();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" x ")
    }
}

#[test]
fn trivial_character() {
    for case in ["C:n=4:m=4", "D:n=5:m=8", "B:n=6:m=4", "E6:n=6:m=12", "A:n=5:m=6:r=1:twist=1"] {
        let a = analysis(case);
        let triv = a.index_of(&TorusCharacter::trivial(a.fixed()));
        let e = report(&a, triv);
        assert!(e.dual_element.is_identity());
        assert_eq!(e.subsystem.len(), a.dual_rs.len());
        assert_eq!(e.component_group_order, 1);
        assert_eq!(e.w_en.order(), a.grading.weyl.order());
        assert!(e.reflections.iter().all(|r| r.d_s == 1));
    }
}

#[test]
fn symplectic_coxeter() {
    for n in 2..=7 {
        let a = analysis(&format!("C:n={}:m={}", n, 2 * n));
        let c = a.character_from_named(&[Q::new(1, 2)]).unwrap();
        let e = report(&a, c);
        assert_eq!(e.subsystem_type, label(so_even(n)), "C{}", n);
        assert_eq!(e.component_group_order, 2);
    }
}

#[test]
fn symplectic_blocks() {
    for (n, r) in [(6usize, 3usize), (6, 2), (8, 4), (8, 2)] {
        let l = n / r;
        let a = analysis(&format!("C:n={}:m={}:r={}", n, 2 * l, r));
        for k in 1..=r {
            let vals: Vec<Q> = if l % 2 == 0 {
                (0..r).map(|i| if i < k { Q::new(1, 2) } else { Q::zero() }).collect()
            } else {
                (0..r).map(|i| if i + 1 == k { Q::new(1, 2) } else { Q::zero() }).collect()
            };
            let e = report(&a, a.character_from_named(&vals).unwrap());
            let mut want = so_even(k * l);
            want.extend(so_odd((r - k) * l));
            assert_eq!(e.subsystem_type, label(want), "C{} r={} k={}", n, r, k);
            assert_eq!(e.component_group_order, 2);
        }
    }
}

#[test]
fn spin_odd_quarter_characters() {
    for n in [5usize, 7] {
        let a = analysis(&format!("D:n={}:m={}", n, 2 * (n - 1)));
        for v in [Q::new(1, 4), Q::new(3, 4)] {
            let e = report(&a, a.character_from_named(&[v]).unwrap());
            assert_eq!(e.reflections.len(), 1);
            assert_eq!(e.reflections[0].d_s, 4);
            assert_eq!(e.w_en.order() as usize, (2 * (n - 1)) / 4);
            assert_eq!(e.reflections[0].mono_2, Expectation::Pass);
        }
    }
}

fn classical_cases(max: usize) -> Vec<String> {
    let mut v = Vec::new();
    for t in [TypeLabel::A, TypeLabel::B, TypeLabel::C, TypeLabel::D] {
        for n in t.min_rank()..=max {
            v.extend(enumerate_stable_gradings(t, n).into_iter().map(|d| d.key().to_string()));
        }
    }
    v
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn endoscopic_invariants(i in 0usize..10_000, j in 0usize..64) {
        let cases = classical_cases(6);
        let a = analysis(&cases[i % cases.len()]);
        let c = a.representatives()[j % a.representatives().len()];
        let e = report(&a, c);
        prop_assert!(e.en_in_w0);
        prop_assert!(e.e_divides_d);
        let sub: BTreeSet<usize> = e.subsystem.iter().copied().collect();
        let rs = &a.dual_rs;
        let th = a.grading.theta();
        for &x in &sub {
            prop_assert!(sub.contains(&rs.negate(x)));
            prop_assert!(sub.contains(&rs.index(&th.apply(&rs.roots[x])).unwrap()));
            for &y in &sub {
                let s: Vec<i64> = rs.roots[x].iter().zip(&rs.roots[y]).map(|(p, q)| p + q).collect();
                if let Some(z) = rs.index(&s) {
                    prop_assert!(sub.contains(&z));
                }
            }
        }
        // Φ̌_χ is cut out by the dual element
        let cut: BTreeSet<usize> = (0..rs.len()).filter(|&x| e.dual_element.eval(&rs.roots[x]).is_zero()).collect();
        prop_assert_eq!(cut, sub);
        for r in &e.reflections {
            prop_assert!(r.mono_2 != Expectation::Fail);
            prop_assert!(r.min_mono != Expectation::Fail);
        }
    }
}
