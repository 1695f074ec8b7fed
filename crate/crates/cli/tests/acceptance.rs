//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
//! on any failure outside the pinned known-failure list.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use gradecs::classify::classify;
use gradecs_core::charmono::{rank_one_monodromy, CaseAnalysis};
use gradecs_core::cyclotomic::{BinomialProduct, Q};
use gradecs_core::grading::{enumerate_stable_gradings, Family, Grading, GradingDescriptor};
use gradecs_core::rootdata::TypeLabel;
use serde_json::Value;

const TABLE_LIMIT: Duration = Duration::from_secs(1);
const RANK_ONE_LIMIT: Duration = Duration::from_secs(5);
const LEMMA_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_LIMIT: Duration = Duration::from_secs(120);
const EXPECTATION_LIMIT: Duration = Duration::from_secs(120);
const ALL_TYPES: [TypeLabel; 9] = [
    TypeLabel::A,
    TypeLabel::B,
    TypeLabel::C,
    TypeLabel::D,
    TypeLabel::G2,
    TypeLabel::F4,
    TypeLabel::E6,
    TypeLabel::E7,
    TypeLabel::E8,
];
const ORACLE_BOUND: u64 = 500_000;
const MAX_RANK: usize = 8;

/// Lemma records that disagree with the stated closed forms, by case. Each
/// case fails the same number of records in every lemma claim below.
const KNOWN_LEMMA_FAILURES: &[(&str, usize)] = &[
    ("A:n=5:m=6:r=2:twist=2", 1),
    ("B:n=2:m=2:r=2:twist=1", 2),
    ("B:n=2:m=4:r=1:twist=1", 1),
    ("B:n=3:m=6:r=1:twist=1", 1),
    ("B:n=4:m=4:r=2:twist=1", 2),
    ("B:n=4:m=8:r=1:twist=1", 1),
    ("B:n=5:m=10:r=1:twist=1", 1),
    ("B:n=6:m=6:r=2:twist=1", 2),
    ("B:n=6:m=12:r=1:twist=1", 1),
    ("B:n=7:m=14:r=1:twist=1", 1),
    ("B:n=8:m=8:r=2:twist=1", 2),
    ("B:n=8:m=16:r=1:twist=1", 1),
    ("D:n=4:m=4:r=2:twist=1", 3),
    ("D:n=4:m=6:r=1:twist=1", 2),
    ("D:n=5:m=8:r=1:twist=1", 2),
    ("D:n=6:m=6:r=2:twist=1", 3),
    ("D:n=6:m=10:r=1:twist=1", 2),
    ("D:n=7:m=12:r=1:twist=1", 2),
    ("D:n=8:m=8:r=2:twist=1", 3),
    ("D:n=8:m=14:r=1:twist=1", 2),
];
const KNOWN_FAILING_CLAIMS: &[&str] = &["lemma-endoscopy", "lemma-hecke", "lemma-quotients", "lemma-w0"];

const LEMMA_CLAIMS: &[&str] =
    &["lemma-fixed-points", "lemma-orbits", "lemma-w0", "lemma-hecke", "lemma-quotients", "lemma-endoscopy"];
const INVARIANT_CLAIMS: &[&str] =
    &["mono-degree", "mono-extraction", "total-rank", "tau-det", "subgroup-chain", "e-divides-d"];

struct Outcome {
    pass: bool,
    known: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Outcome { pass, known: false, detail }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fact(n: u64) -> u64 {
    (1..=n).product()
}

// ---------------------------------------------------------------- stable gradings

type Row = (usize, u32, usize, u32, String, u64);

fn group(m: u32, p: u32, r: usize) -> (String, u64) {
    let (m, p) = if r == 1 { (m / p, 1) } else { (m, p) };
    (format!("G({},{},{})", m, p, r), (m as u64).pow(r as u32) * fact(r as u64) / p as u64)
}

fn row(n: usize, m: u32, r: usize, twist: u32, g: (String, u64)) -> Row {
    (n, m, r, twist, g.0, g.1)
}

fn table_one(t: TypeLabel, n: usize) -> Vec<Row> {
    let mut out = Vec::new();
    let divisors = |x: usize| (1..=x).filter(move |d| x.is_multiple_of(*d));
    match t {
        TypeLabel::A => {
            let nn = n as u32 + 1;
            out.push(row(n, nn, 1, 1, group(nn, 1, 1)));
            // A1 has no outer automorphism
            if n == 1 {
                return out;
            }
            for r in divisors(n + 1) {
                let d = (n + 1) / r;
                if d % 2 == 1 {
                    out.push(row(n, 2 * d as u32, r, 2, group(d as u32, 1, r)));
                }
            }
            for r in divisors(n) {
                let d = n / r;
                if d > 1 && d % 2 == 1 {
                    out.push(row(n, 2 * d as u32, r, 2, group(d as u32, 1, r)));
                }
            }
        }
        TypeLabel::B | TypeLabel::C => {
            for r in divisors(n) {
                let m = 2 * (n / r) as u32;
                out.push(row(n, m, r, 1, group(m, 1, r)));
            }
        }
        TypeLabel::D => {
            for r in divisors(n) {
                let m = 2 * (n / r) as u32;
                out.push(row(n, m, r, if r % 2 == 1 { 2 } else { 1 }, group(m, 2, r)));
            }
            for r in divisors(n - 1) {
                let l = (n - 1) / r;
                if l > 1 {
                    let m = 2 * l as u32;
                    out.push(row(n, m, r, if r % 2 == 0 { 2 } else { 1 }, group(m, 1, r)));
                }
            }
            if n == 4 {
                out.push(row(4, 12, 1, 3, group(4, 1, 1)));
            }
        }
        _ => unreachable!(),
    }
    out
}

fn criterion_table() -> Outcome {
    let (mismatches, dt) = timed(|| {
        let mut bad = Vec::new();
        for t in [TypeLabel::A, TypeLabel::B, TypeLabel::C, TypeLabel::D] {
            let doc = classify(t, t.min_rank()..=MAX_RANK);
            let mut got: Vec<Row> =
                doc.rows.iter().map(|r| (r.n, r.m, r.r, r.twist, r.little_weyl.clone(), r.little_weyl_order)).collect();
            let mut want: Vec<Row> = (t.min_rank()..=MAX_RANK).flat_map(|n| table_one(t, n)).collect();
            got.sort();
            want.sort();
            if got != want {
                bad.push(format!("{}: got {:?} want {:?}", t, got, want));
            }
        }
        bad
    });
    Outcome::check(
        mismatches.is_empty() && dt < TABLE_LIMIT,
        format!(
            "{} type mismatches, {:.3} s (limit {:?}) {}",
            mismatches.len(),
            dt.as_secs_f64(),
            TABLE_LIMIT,
            mismatches.join("; ")
        ),
    )
}

// ---------------------------------------------------------------- rank one

/// Integer coefficients of Π (x^k ∓ 1)^e, low degree first.
fn expand(parts: &[(usize, i64, u32)]) -> Vec<i64> {
    let mut p = vec![1i64];
    for &(k, c, e) in parts {
        for _ in 0..e {
            let mut q = vec![0i64; p.len() + k];
            for (i, &a) in p.iter().enumerate() {
                q[i] += a * c;
                q[i + k] += a;
            }
            p = q;
        }
    }
    p
}

fn xm(k: usize, e: usize) -> (usize, i64, u32) {
    (k, -1, e as u32)
}

fn xp(k: usize, e: usize) -> (usize, i64, u32) {
    (k, 1, e as u32)
}

/// Named character values as multiples of 1/den.
fn numerator(q: &Q, den: i64) -> i64 {
    (q * den).to_integer().rem_euclid(den)
}

fn closed_form(d: &GradingDescriptor, vals: &[Q]) -> Vec<(usize, i64, u32)> {
    let n = d.n;
    let triv = vals.iter().all(|q| *q.numer() == 0);
    match (d.type_label, d.family) {
        (TypeLabel::A, Family::AInner) => {
            let nn = n as u64 + 1;
            let j = numerator(&vals[0], nn as i64) as u64;
            let g = gcd(j, nn) as usize;
            vec![xm(nn as usize / g, g)]
        }
        (TypeLabel::A, Family::AOuterBlocks) => vec![xm(1, n / 2 + 1), xp(1, n / 2)],
        (TypeLabel::A, _) => {
            let k = n.div_ceil(2);
            if triv {
                vec![xm(1, k + 1), xp(1, k - 2)]
            } else {
                vec![xm(1, k), xp(1, k - 1)]
            }
        }
        (TypeLabel::B, _) if triv => vec![xm(1, n + 1), xp(1, n - 1)],
        (TypeLabel::B, _) => vec![xm(2, n / 2 + 1), xp(2, (n - 1) / 2)],
        (TypeLabel::C, _) if triv => vec![xm(1, n + 1), xp(1, n - 1)],
        (TypeLabel::C, _) => vec![xm(2, n)],
        (TypeLabel::D, Family::D4Triality) => vec![xm(1, 2), xm(2, 1)],
        (TypeLabel::D, Family::DBlocks) if triv => vec![xm(1, n)],
        (TypeLabel::D, Family::DBlocks) => vec![xm(1, n.div_ceil(2)), xp(1, n / 2)],
        (TypeLabel::D, _) if n % 2 == 1 => match numerator(&vals[0], 4) {
            0 => vec![xm(1, n + 1), xp(1, n - 3)],
            2 => vec![xm(2, n - 1)],
            _ => vec![xm(4, (n - 1) / 2)],
        },
        (TypeLabel::D, _) => {
            let (z1, z2) = (numerator(&vals[0], 2), numerator(&vals[1], 2));
            match (z1, z2) {
                (0, 0) => vec![xm(1, n + 1), xp(1, n - 3)],
                (1, 0) => vec![xm(2, n - 1)],
                _ => vec![xm(2, n / 2 + 1), xp(2, n / 2 - 2)],
            }
        }
        (TypeLabel::E6, Family::E6Outer) => vec![xm(1, 2), xm(2, 2), xm(3, 1)],
        (TypeLabel::E6, _) if triv => vec![xm(1, 3), xm(2, 3), xm(3, 1)],
        (TypeLabel::E6, _) => vec![xm(3, 2), xm(6, 1)],
        (TypeLabel::E7, _) if triv => vec![xm(1, 2), xm(2, 3), xm(3, 2), xm(4, 1)],
        (TypeLabel::E7, _) => vec![xm(2, 2), xm(4, 2), xm(6, 1)],
        (TypeLabel::E8, _) => vec![xm(1, 1), xm(2, 2), xm(3, 2), xm(4, 2), xm(5, 1), xm(6, 1)],
        (TypeLabel::F4, _) => vec![xm(1, 1), xm(2, 2), xm(3, 1), xm(4, 1)],
        (TypeLabel::G2, _) => vec![xm(1, 1), xm(2, 1), xm(3, 1)],
    }
}

fn integer_coeffs(p: &BinomialProduct) -> Option<Vec<i64>> {
    p.expand().coeffs().iter().map(|c| c.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())).collect()
}

fn criterion_rank_one() -> Outcome {
    let ((checked, bad), dt) = timed(|| {
        let mut checked = 0;
        let mut bad = Vec::new();
        for t in ALL_TYPES {
            for n in t.min_rank()..=MAX_RANK {
                if !t.valid_rank(n) {
                    continue;
                }
                for d in enumerate_stable_gradings(t, n).into_iter().filter(|d| d.r == 1) {
                    let a = CaseAnalysis::new(Grading::new(&d).unwrap()).unwrap();
                    for (c, chi) in a.chars.iter().enumerate() {
                        let vals = chi.named_values(a.fixed());
                        let got = rank_one_monodromy(&a, c).and_then(|p| integer_coeffs(&p));
                        let want = expand(&closed_form(&d, &vals));
                        checked += 1;
                        if got.as_ref() != Some(&want) {
                            bad.push(format!("{} {}", d.key(), chi.describe(a.fixed())));
                        }
                    }
                }
            }
        }
        (checked, bad)
    });
    Outcome::check(
        bad.is_empty() && checked > 0 && dt < RANK_ONE_LIMIT,
        format!(
            "{} characters, {} mismatches, {:.2} s (limit {:?}) {}",
            checked,
            bad.len(),
            dt.as_secs_f64(),
            RANK_ONE_LIMIT,
            bad.join("; ")
        ),
    )
}

// ---------------------------------------------------------------- verify runs

fn verify_run() -> (Vec<u8>, Duration) {
    timed(|| {
        let out = Command::new(env!("CARGO_BIN_EXE_gradecs"))
            .args(["verify", "--scope", "all", "--rank-bound", &MAX_RANK.to_string(), "--json"])
            .env("GRADECS_MAX_WEYL_ORACLE", ORACLE_BOUND.to_string())
            .output()
            .expect("run gradecs");
        assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    })
}

struct Rec<'a> {
    case: &'a str,
    claim: &'a str,
    status: &'a str,
}

fn records(doc: &Value) -> Vec<Rec<'_>> {
    doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| Rec {
            case: r["case"].as_str().unwrap(),
            claim: r["claim"].as_str().unwrap(),
            status: r["status"].as_str().unwrap(),
        })
        .collect()
}

fn count<'a>(recs: &[Rec<'a>], claims: &[&str], status: &str) -> usize {
    recs.iter().filter(|r| claims.contains(&r.claim) && r.status == status).count()
}

fn criterion_lemmas(recs: &[Rec], dt: Duration) -> Outcome {
    let mut fails: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for r in recs.iter().filter(|r| LEMMA_CLAIMS.contains(&r.claim) && r.status == "fail") {
        *fails.entry((r.case, r.claim)).or_default() += 1;
    }
    let pinned: BTreeMap<(&str, &str), usize> = KNOWN_LEMMA_FAILURES
        .iter()
        .flat_map(|&(case, k)| KNOWN_FAILING_CLAIMS.iter().map(move |&claim| ((case, claim), k)))
        .collect();
    let pass = count(recs, LEMMA_CLAIMS, "pass");
    let unchecked = count(recs, LEMMA_CLAIMS, "unchecked");
    let nfail: usize = fails.values().sum();
    let as_pinned = fails == pinned;
    assert!(as_pinned, "lemma failures drifted from the pinned list: {:?}", fails);
    assert_eq!(unchecked, 0);
    assert!(dt < LEMMA_LIMIT, "verify run took {:?}", dt);
    let known = nfail > 0;
    let cases: BTreeSet<&str> = fails.keys().map(|k| k.0).collect();
    Outcome {
        pass: !known,
        known,
        detail: format!(
            "{} pass, {} fail in {} cases (all pinned), full run {:.1} s (limit {:?})",
            pass,
            nfail,
            cases.len(),
            dt.as_secs_f64(),
            LEMMA_LIMIT
        ),
    }
}

fn weyl_order(t: TypeLabel, n: usize) -> u64 {
    let n64 = n as u64;
    match t {
        TypeLabel::A => fact(n64 + 1),
        TypeLabel::B | TypeLabel::C => (1u64 << n) * fact(n64),
        TypeLabel::D => (1u64 << (n - 1)) * fact(n64),
        TypeLabel::G2 => 12,
        TypeLabel::F4 => 1152,
        TypeLabel::E6 => 51_840,
        TypeLabel::E7 => 2_903_040,
        TypeLabel::E8 => 696_729_600,
    }
}

fn criterion_oracle(recs: &[Rec], dt: Duration) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let mut cases: BTreeSet<&str> = BTreeSet::new();
    for r in recs.iter().filter(|r| r.claim == "weyl-oracle") {
        cases.insert(r.case);
        let key: gradecs_core::grading::CaseKey = r.case.parse().unwrap();
        let small = weyl_order(key.type_label, key.n) <= ORACLE_BOUND;
        match (small, r.status) {
            (true, "pass") => checked += 1,
            (false, "unchecked") => skipped += 1,
            _ => bad.push(format!("{} {}", r.case, r.status)),
        }
    }
    let all: usize = recs.iter().map(|r| r.case).collect::<BTreeSet<_>>().len();
    Outcome::check(
        bad.is_empty() && cases.len() == all && dt < ORACLE_LIMIT,
        format!(
            "{} cases equal, {} above |W| bound, {} wrong, full run {:.1} s (limit {:?}) {}",
            checked,
            skipped,
            bad.len(),
            dt.as_secs_f64(),
            ORACLE_LIMIT,
            bad.join("; ")
        ),
    )
}

fn criterion_invariants(recs: &[Rec]) -> Outcome {
    let mut per: Vec<String> = Vec::new();
    let mut ok = true;
    for &c in INVARIANT_CLAIMS {
        let pass = count(recs, &[c], "pass");
        let other = recs.iter().filter(|r| r.claim == c && r.status != "pass").count();
        ok &= pass > 0 && other == 0;
        per.push(format!("{} {}/{}", c, pass, pass + other));
    }
    Outcome::check(ok, per.join(", "))
}

fn classical(case: &str) -> bool {
    matches!(case.split(':').next(), Some("A" | "B" | "C" | "D"))
}

fn criterion_expectations(recs: &[Rec], dt: Duration) -> Outcome {
    let claims = ["mono-2", "min-mono"];
    let mut bad = Vec::new();
    let (mut pass, mut unchecked) = (0, 0);
    for r in recs.iter().filter(|r| claims.contains(&r.claim)) {
        match (classical(r.case), r.status) {
            (_, "pass") => pass += 1,
            (false, "unchecked") => unchecked += 1,
            _ => bad.push(format!("{} {} {}", r.case, r.claim, r.status)),
        }
    }
    Outcome::check(
        bad.is_empty() && pass > 0 && dt < EXPECTATION_LIMIT,
        format!(
            "{} pass, {} exceptional unchecked, {} wrong, full run {:.1} s (limit {:?}) {}",
            pass,
            unchecked,
            bad.len(),
            dt.as_secs_f64(),
            EXPECTATION_LIMIT,
            bad.join("; ")
        ),
    )
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("table of stable gradings", criterion_table()));
    results.push(("rank-one polynomials", criterion_rank_one()));

    let (first, dt) = verify_run();
    let doc: Value = serde_json::from_slice(&first).expect("verify json");
    let recs = records(&doc);
    results.push(("lemma tables", criterion_lemmas(&recs, dt)));
    results.push(("weyl centralizer oracle", criterion_oracle(&recs, dt)));
    results.push(("structural invariants", criterion_invariants(&recs)));
    results.push(("monodromy expectations", criterion_expectations(&recs, dt)));

    let (second, _) = verify_run();
    results.push((
        "deterministic verify output",
        Outcome::check(first == second, format!("{} bytes, identical: {}", first.len(), first == second)),
    ));

    let mut unexpected = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.known { " [known]" } else { "" };
        println!("criterion {} {}: {}{} ({})", i + 1, name, tag, note, o.detail.trim_end());
        if !o.pass && !o.known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{} criteria failed", unexpected);
        std::process::exit(1);
    }
}
