//! Markdown rendering of JSON documents: scalars become a key list, arrays of
//! objects become tables, nested objects become subsections.

use serde_json::Value;

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(cell).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    };
    s.replace('|', "\\|").replace('\n', " ")
}

fn is_table(v: &Value) -> bool {
    matches!(v, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object))
}

fn table(rows: &[Value], out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(o) = r {
            for (k, v) in o {
                if !cols.contains(k) && !is_table(v) {
                    cols.push(k.clone());
                }
            }
        }
    }
    out.push_str(&format!("| {} |\n", cols.join(" | ")));
    out.push_str(&format!("|{}\n", cols.iter().map(|_| "---|").collect::<String>()));
    for r in rows {
        let cells: Vec<String> = cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out.push('\n');
}

fn section(title: &str, v: &Value, depth: usize, out: &mut String) {
    out.push_str(&format!("{} {}\n\n", "#".repeat(depth.min(6)), title));
    match v {
        Value::Object(o) => {
            let mut any = false;
            for (k, x) in o {
                if !x.is_object() && !is_table(x) {
                    out.push_str(&format!("- {}: {}\n", k, cell(x)));
                    any = true;
                }
            }
            if any {
                out.push('\n');
            }
            for (k, x) in o {
                if x.is_object() || is_table(x) {
                    section(k, x, depth + 1, out);
                }
            }
        }
        Value::Array(a) if is_table(v) => {
            table(a, out);
            // nested tables inside rows get their own subsections
            for (i, r) in a.iter().enumerate() {
                if let Value::Object(o) = r {
                    for (k, x) in o {
                        if is_table(x) {
                            let label = o.values().next().map(cell).unwrap_or_else(|| i.to_string());
                            section(&format!("{} ({})", k, label), x, depth + 1, out);
                        }
                    }
                }
            }
        }
        other => out.push_str(&format!("{}\n\n", cell(other))),
    }
}

pub fn markdown(title: &str, doc: &Value) -> String {
    let mut out = String::new();
    section(title, doc, 1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_and_escaping() {
        let v = serde_json::json!({"a": 1, "rows": [{"x": "p|q", "y": [1, 2]}]});
        let md = markdown("doc", &v);
        assert!(md.contains("- a: 1"));
        assert!(md.contains("| x | y |"));
        assert!(md.contains("| p\\|q | 1, 2 |"));
    }
}
