use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradecs")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&stdout(&a)).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/v1.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft202012).compile(&s).unwrap()
}

fn assert_valid(doc: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("schema violations: {:#?}", msgs);
}

fn case_column(doc: &Value) -> Vec<String> {
    doc["rows"].as_array().unwrap().iter().map(|r| r["case"].as_str().unwrap().to_string()).collect()
}

#[test]
fn classify_examples() {
    let c = json(&["classify", "--type", "C", "--rank", "4..6"]);
    let got: Vec<(u64, u64)> =
        c["rows"].as_array().unwrap().iter().map(|r| (r["n"].as_u64().unwrap(), r["m"].as_u64().unwrap())).collect();
    let mut want = Vec::new();
    for n in 4..=6u64 {
        for l in (1..=n).filter(|l| n % l == 0) {
            want.push((n, 2 * l));
        }
    }
    assert_eq!(got, want);

    let a = json(&["classify", "--type", "A", "--rank", "1"]);
    assert_eq!(case_column(&a), vec!["A:n=1:m=2:r=1:twist=1"]);
    assert_eq!(a["rows"][0]["family"], "A-inner");

    let d = json(&["classify", "--type", "D", "--rank", "4"]);
    assert!(case_column(&d).contains(&"D:n=4:m=12:r=1:twist=3".to_string()));
    for doc in [&c, &a, &d] {
        assert_valid(doc);
    }
}

#[test]
fn report_examples() {
    let b = json(&["report", "B:n=4:m=4", "hecke"]);
    assert_valid(&b);
    let rows = b["characters"].as_array().unwrap();
    assert_eq!(rows[0]["hecke"], "H^{3,1}(G(4,1,2))");
    assert!(rows.iter().all(|r| r["total_rank"] == 32));

    let a = json(&["report", "A:n=4:m=5", "monodromy"]);
    assert_valid(&a);
    let polys: Vec<&str> =
        a["characters"].as_array().unwrap().iter().map(|r| r["monodromy"][0]["poly"].as_str().unwrap()).collect();
    assert_eq!(polys, vec!["(x-1)^5", "(x^5-1)", "(x^5-1)", "(x^5-1)", "(x^5-1)"]);

    let c = json(&["report", "C:n=4:m=4", "chars"]);
    assert_valid(&c);
    assert_eq!(c["characters"].as_array().unwrap().len(), 3);

    for case in ["D:n=6:m=12:r=1:twist=2", "E6:n=6:m=12:r=1:twist=1", "C:n=6:m=4:r=3", "A:n=5:m=6:r=2", "A:n=6:m=6:r=2"]
    {
        assert_valid(&json(&["report", case]));
    }
}

#[test]
fn verify_examples() {
    let t = json(&["verify", "--claim", "tau-det", "--rank-bound", "6"]);
    assert_valid(&t);
    assert_eq!(t["summary"]["fail"], 0);
    assert!(t["records"].as_array().unwrap().iter().all(|r| r["claim"] == "tau-det" && r["status"] == "pass"));

    let d = json(&["verify", "--scope", "case", "--case", "D:n=5:m=8", "--claim", "mono-2"]);
    assert_valid(&d);
    let recs = d["records"].as_array().unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["classify", "--type", "C", "--rank", "4"]), 0);
    assert_eq!(code(&["classify", "--type", "Z", "--rank", "4"]), 2);
    assert_eq!(code(&["classify", "--type", "C", "--rank", "6..4"]), 2);
    assert_eq!(code(&["classify", "--type", "C"]), 2);
    assert_eq!(code(&["report", "Q:n=1"]), 2);
    assert_eq!(code(&["report", "C:n=4:m=5"]), 2);
    assert_eq!(code(&["verify", "--scope", "case"]), 2);
    assert_eq!(code(&["verify", "--claim", "no-such-claim"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    // a case with a pinned lemma disagreement
    let o = run(&["verify", "--scope", "case", "--case", "B:n=4:m=4", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid(&doc);
    for r in doc["records"].as_array().unwrap().iter().filter(|r| r["status"] == "fail") {
        assert!(r.get("expected").is_some() && r.get("actual").is_some());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("gradecs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("c.json");
    let o = run(&["classify", "--type", "G2", "--json", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(case_column(&doc), vec!["G2:n=2:m=6:r=1:twist=1"]);
    std::fs::remove_dir_all(dir).unwrap();
}

fn md_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(md_cell).collect::<Vec<_>>().join(", "),
        Value::Null => String::new(),
        x => x.to_string(),
    };
    s.replace('|', "\\|")
}

/// Tables in document order, each as header plus body rows.
fn md_tables(md: &str) -> Vec<(Vec<String>, Vec<Vec<String>>)> {
    let split = |l: &str| -> Vec<String> {
        let inner = l.trim().strip_prefix("| ").unwrap().strip_suffix(" |").unwrap();
        let mut cells = Vec::new();
        let mut cur = String::new();
        let mut chars = inner.chars().peekable();
        while let Some(c) = chars.next() {
            if c == '\\' && chars.peek() == Some(&'|') {
                cur.push_str("\\|");
                chars.next();
            } else if c == '|' {
                cells.push(cur.trim().to_string());
                cur.clear();
            } else {
                cur.push(c);
            }
        }
        cells.push(cur.trim().to_string());
        cells
    };
    let lines: Vec<&str> = md.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].starts_with("| ") && lines.get(i + 1).is_some_and(|l| l.starts_with("|---")) {
            let head = split(lines[i]);
            let mut body = Vec::new();
            i += 2;
            while i < lines.len() && lines[i].starts_with("| ") {
                body.push(split(lines[i]));
                i += 1;
            }
            out.push((head, body));
        } else {
            i += 1;
        }
    }
    out
}

fn assert_table_matches(table: &(Vec<String>, Vec<Vec<String>>), rows: &[Value]) {
    let (head, body) = table;
    assert_eq!(body.len(), rows.len());
    for (cells, row) in body.iter().zip(rows) {
        let obj = row.as_object().unwrap();
        for (k, cell) in head.iter().zip(cells) {
            assert_eq!(cell, &obj.get(k).map(md_cell).unwrap_or_default(), "column {}", k);
        }
        for (k, v) in obj {
            let nested = v.as_array().is_some_and(|a| !a.is_empty() && a.iter().all(Value::is_object));
            assert!(nested || v.is_object() || head.contains(k), "column {} missing", k);
        }
    }
}

#[test]
fn markdown_tables_round_trip() {
    let args = ["classify", "--type", "D", "--rank", "4..6"];
    let md = stdout(&args);
    let doc = json(&args);
    let tables = md_tables(&md);
    assert_eq!(tables.len(), 1);
    assert_table_matches(&tables[0], doc["rows"].as_array().unwrap());

    let args = ["report", "B:n=4:m=4:r=2", "chars", "hecke", "monodromy"];
    let md = stdout(&args);
    let doc = json(&args);
    let chars = doc["characters"].as_array().unwrap();
    let tables = md_tables(&md);
    assert_eq!(tables.len(), 1 + chars.len());
    assert_table_matches(&tables[0], chars);
    for (t, c) in tables[1..].iter().zip(chars) {
        assert_table_matches(t, c["monodromy"].as_array().unwrap());
    }

    let args = ["verify", "--scope", "case", "--case", "C:n=4:m=4"];
    let md = stdout(&args);
    let doc = json(&args);
    let tables = md_tables(&md);
    assert_eq!(tables.len(), 1);
    assert_table_matches(&tables[0], doc["records"].as_array().unwrap());
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["classify", "--type", "A", "--rank", "1..8", "--json"],
        vec!["report", "D:n=6:m=4:r=3"],
        vec!["report", "E7:n=7:m=18", "--json"],
        vec!["verify", "--type", "C", "--rank-bound", "6", "--json"],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{:?}", args);
    }
}
