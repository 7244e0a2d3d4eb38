use serde_json::Value;

use bhf::json::Document;

/// Human-readable form of a document, given its JSON encoding.
pub fn document(doc: &Document, json: &Value) -> Option<String> {
    match doc {
        Document::Pmc(z) => Some(z.to_string()),
        Document::Homology(h) => Some(h.to_string()),
        Document::TypeD(_) | Document::TypeDD(_) | Document::UTypeD(_) => Some(module(json, "delta")),
        Document::Cfk(_) => Some(module(json, "differential")),
        _ => None,
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(compact).collect::<Vec<_>>().join(", ")),
        _ => v.to_string(),
    }
}

/// Generators with their data, then one `src -> coeff dst` line per arrow.
fn module(json: &Value, arrows: &str) -> String {
    let mut out = Vec::new();
    let empty = Vec::new();
    let list = |key: &str| json.get(key).and_then(Value::as_array).unwrap_or(&empty);
    for g in list("generators") {
        let Some(fields) = g.as_object() else { continue };
        let rest: Vec<String> =
            fields.iter().filter(|(k, _)| *k != "name").map(|(k, v)| format!("{k}={}", compact(v))).collect();
        out.push(format!("{} {}", compact(&g["name"]), rest.join(" ")).trim_end().to_string());
    }
    for a in list(arrows) {
        let mut coeff = Vec::new();
        match a.get("upower").and_then(Value::as_u64) {
            Some(0) | None => {}
            Some(1) => coeff.push("U".to_string()),
            Some(k) => coeff.push(format!("U^{k}")),
        }
        if let Some(c) = a.get("coeff") {
            coeff.push(compact(c));
        }
        coeff.push(compact(&a["dst"]));
        out.push(format!("{} -> {}", compact(&a["src"]), coeff.join(" ")));
    }
    out.join("\n")
}

/// Indented `key: value` listing of a JSON value.
pub fn value(v: &Value) -> String {
    let mut out = Vec::new();
    write(v, 0, &mut out);
    out.join("\n")
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.is_empty() => Some("none".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object()) => {
            Some(a.iter().map(|x| if x.is_array() { compact(x) } else { scalar(x).unwrap_or_default() }).collect::<Vec<_>>().join(", "))
        }
        _ => None,
    }
}

/// `k=v k=v` for an object whose fields are all scalars.
fn flat(v: &Value) -> Option<String> {
    let fields = v.as_object()?;
    let parts: Option<Vec<String>> =
        fields.iter().map(|(k, x)| scalar(x).filter(|_| !x.is_array()).map(|s| format!("{k}={s}"))).collect();
    parts.map(|p| p.join(" "))
}

fn write(v: &Value, depth: usize, out: &mut Vec<String>) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push(format!("{pad}{k}: {s}")),
                    None => {
                        out.push(format!("{pad}{k}:"));
                        write(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x).or_else(|| flat(x)) {
                    Some(s) => out.push(format!("{pad}- {s}")),
                    None => {
                        out.push(format!("{pad}-"));
                        write(x, depth + 1, out);
                    }
                }
            }
        }
        _ => out.push(format!("{pad}{}", scalar(v).unwrap_or_default())),
    }
}
