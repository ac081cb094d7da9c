//! Canonical JSON: sorted object keys and every float written with 17
//! significant digits, so identical inputs give byte-identical output.

use std::fmt::Write;

use serde_json::Value;

fn write_float(out: &mut String, x: f64) {
    if !x.is_finite() {
        out.push_str("null");
    } else if x == 0.0 {
        out.push_str("0.0000000000000000e0");
    } else {
        write!(out, "{x:.16e}").expect("writing to a String");
    }
}

fn write_value(out: &mut String, v: &Value, indent: Option<usize>, depth: usize) {
    let newline = |out: &mut String, depth: usize| {
        if let Some(w) = indent {
            out.push('\n');
            out.extend(std::iter::repeat_n(' ', w * depth));
        }
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                write_float(out, n.as_f64().expect("f64 number"));
            } else {
                write!(out, "{n}").expect("writing to a String");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Short arrays of scalars stay on one line.
            let flat = indent.is_none() || items.iter().all(|x| !x.is_array() && !x.is_object()) && items.len() <= 4;
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                    if flat && indent.is_some() {
                        out.push(' ');
                    }
                }
                if !flat {
                    newline(out, depth + 1);
                }
                write_value(out, x, indent, depth + 1);
            }
            if !flat {
                newline(out, depth);
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push(':');
                if indent.is_some() {
                    out.push(' ');
                }
                write_value(out, &map[*k], indent, depth + 1);
            }
            newline(out, depth);
            out.push('}');
        }
    }
}

/// Compact canonical form, one line.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, None, 0);
    out
}

/// Indented canonical form.
pub fn to_canonical_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, Some(2), 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_and_fixed_precision() {
        let v = json!({"b": 0.1, "a": [1, 2.5], "c": {"z": null, "y": "s"}});
        assert_eq!(
            to_canonical_string(&v),
            r#"{"a":[1,2.5000000000000000e0],"b":1.0000000000000001e-1,"c":{"y":"s","z":null}}"#
        );
        let back: Value = serde_json::from_str(&to_canonical_string(&v)).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }
}
