use std::collections::BTreeSet;

use gradecs_core::grading::{enumerate_stable_gradings, CasePattern, Grading};
use gradecs_core::linalg::IMat;
use gradecs_core::rootdata::*;

fn datum(t: &str, n: usize) -> RootDatum {
    build_root_datum(t.parse().unwrap(), n).unwrap()
}

fn grading(case: &str) -> Grading {
    let d = case.parse::<CasePattern>().unwrap().resolve().unwrap();
    Grading::new(&d).unwrap()
}

fn signed_perms(n: usize) -> Vec<SignedPerm> {
    fn go(prefix: &mut Vec<i32>, left: &mut Vec<i32>, out: &mut Vec<SignedPerm>) {
        if left.is_empty() {
            out.push(SignedPerm(prefix.clone()));
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            for s in [x, -x] {
                prefix.push(s);
                go(prefix, left, out);
                prefix.pop();
            }
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=n as i32).collect(), &mut out);
    out
}

/// Centralizer of θ in W(B/C/D) by scanning every signed permutation.
fn centralizer_by_scan(t: TypeLabel, n: usize, theta: &IMat) -> BTreeSet<Vec<Vec<i64>>> {
    let amb = Ambient::new(t, n).unwrap();
    signed_perms(n)
        .into_iter()
        .filter(|w| amb.in_weyl_group(w))
        .map(|w| amb.lattice_matrix(&w))
        .filter(|w| w.mul(theta) == theta.mul(w))
        .map(|w| (0..w.rows()).map(|i| w.row(i).to_vec()).collect())
        .collect()
}

#[test]
fn centers_and_marks() {
    let a3 = datum("A", 3);
    assert_eq!(a3.center.invariant_factors(), &[4]);
    assert_eq!(a3.marks, vec![1, 1, 1]);
    assert_eq!(datum("D", 5).center.invariant_factors(), &[4]);
    assert_eq!(datum("D", 6).center.invariant_factors(), &[2, 2]);
    let e6 = datum("E6", 6);
    assert_eq!(e6.marks, vec![1, 2, 2, 3, 2, 1]);
    assert_eq!(e6.center.invariant_factors(), &[3]);
    assert_eq!(datum("E8", 8).center.order(), 1);
}

#[test]
fn identity_has_infinite_fixed_points() {
    assert!(matches!(smith_fixed_points(&IMat::identity(3)), Err(RootDataError::InfiniteFixedGroup)));
}

#[test]
fn fixed_point_groups() {
    for n in 2..=8usize {
        for d in enumerate_stable_gradings(TypeLabel::B, n) {
            let g = Grading::new(&d).unwrap();
            assert_eq!(g.fixed.invariant_factors(), vec![2; d.r].as_slice(), "{}", d.key());
        }
    }
    // D with n = rl + 1, l even
    for (n, r) in [(5, 2), (7, 3), (7, 1), (9, 2), (9, 4)] {
        let l = (n - 1) / r;
        let g = grading(&format!("D:n={}:m={}:r={}", n, 2 * l, r));
        let mut expect = vec![2; r - 1];
        expect.push(4);
        assert_eq!(g.fixed.invariant_factors(), expect.as_slice(), "n={} r={}", n, r);
    }
}

#[test]
fn fixed_point_order_is_det() {
    for t in [TypeLabel::A, TypeLabel::B, TypeLabel::C, TypeLabel::D, TypeLabel::G2, TypeLabel::F4, TypeLabel::E6] {
        for n in t.min_rank()..=6 {
            if !t.valid_rank(n) {
                continue;
            }
            for d in enumerate_stable_gradings(t, n) {
                let g = Grading::new(&d).unwrap();
                let det = g.theta().sub(&IMat::identity(n)).det().unsigned_abs();
                assert_eq!(g.fixed.order(), det, "{}", d.key());
            }
        }
    }
}

#[test]
fn centralizer_oracle_matches_scan() {
    for (case, order) in [("C:n=2:m=4", 4), ("B:n=4:m=4", 32), ("D:n=4:m=4", 16), ("D:n=5:m=8", 8), ("B:n=3:m=2", 48)] {
        let g = grading(case);
        let k = g.key();
        let dat = build_root_datum(k.type_label, k.n).unwrap();
        let oracle: BTreeSet<Vec<Vec<i64>>> = weyl_centralizer_oracle(&dat, g.theta(), 1_000_000)
            .unwrap()
            .into_iter()
            .map(|w| (0..w.rows()).map(|i| w.row(i).to_vec()).collect())
            .collect();
        let scan = centralizer_by_scan(k.type_label, k.n, g.theta());
        assert_eq!(oracle.len(), order, "{}", case);
        assert_eq!(oracle, scan, "{}", case);
    }
}

#[test]
fn oracle_respects_bound() {
    let g = grading("E8:n=8:m=30");
    let dat = build_root_datum(TypeLabel::E8, 8).unwrap();
    assert!(matches!(
        weyl_centralizer_oracle(&dat, g.theta(), 500_000),
        Err(RootDataError::OracleBoundExceeded { .. })
    ));
}
