use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn flat_row(v: &Value) -> Option<Vec<String>> {
    match v {
        Value::Array(a) => a
            .iter()
            .map(|x| match x {
                Value::Array(_) | Value::Object(_) => None,
                _ => scalar(x),
            })
            .collect(),
        _ => None,
    }
}

fn matrix(v: &Value) -> Option<Vec<Vec<String>>> {
    match v {
        Value::Array(rows) if !rows.is_empty() => {
            let rows: Option<Vec<Vec<String>>> = rows.iter().map(flat_row).collect();
            rows.filter(|r| r.iter().all(|x| x.len() == r[0].len() && !x.is_empty()))
        }
        _ => None,
    }
}

fn write_matrix(out: &mut String, rows: &[Vec<String>], pad: &str) {
    let width = rows.iter().flatten().map(|x| x.chars().count()).max().unwrap_or(0);
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>width$}")).collect();
        out.push_str(&format!("{pad}[ {} ]\n", cells.join("  ")));
    }
}

fn write(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                if let Some(s) = scalar(x) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                } else if let Some(r) = flat_row(x) {
                    out.push_str(&format!("{pad}{k}: [{}]\n", r.join(", ")));
                } else if let Some(m) = matrix(x) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write_matrix(out, &m, &"  ".repeat(indent + 1));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write(out, x, indent + 1);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if let Some(s) = scalar(x) {
                    out.push_str(&format!("{pad}- {s}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write(out, x, indent + 1);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}

/// Indented plain-text rendering of a JSON value; matrices are printed as
/// aligned rows.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write(&mut out, v, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_matrices_and_lists() {
        let v = json!({"m": [["0", "1"], ["-1/16", "0"]], "labels": ["a", "b"], "n": 2});
        assert_eq!(
            render(&v),
            "labels: [a, b]\nm:\n  [     0      1 ]\n  [ -1/16      0 ]\nn: 2\n"
        );
    }
}
