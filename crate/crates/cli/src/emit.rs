//! Self-contained declarations for computed structures.
//!
//! Every emitted declaration inlines what it depends on, so a single entry can
//! be written to a file and loaded back on its own.

use gamma_core::filtration::Filtration;
use gamma_core::grading::GradedGammaRing;
use gamma_core::module::{GammaModule, GradedGammaModule, ModuleSide};
use gamma_core::{FiniteAbelianGroup, FiniteSemigroup, GammaRing, Subgroup};
use serde_json::{json, Map, Value};

pub fn group(g: &FiniteAbelianGroup) -> Value {
    match g.moduli() {
        Some(moduli) => json!({ "moduli": moduli }),
        None => {
            let labels: Vec<_> = g.elements().map(|a| g.label(a)).collect();
            let add: Vec<Vec<usize>> = g.elements().map(|a| g.elements().map(|b| g.add(a, b)).collect()).collect();
            json!({ "elements": labels, "add": add })
        }
    }
}

pub fn semigroup(s: &FiniteSemigroup) -> Value {
    let table: Vec<Vec<&str>> = s.elements().map(|a| s.elements().map(|b| s.label(s.mul(a, b))).collect()).collect();
    json!({ "labels": s.labels(), "table": table })
}

fn members(s: &Subgroup) -> Value {
    json!(s.labels())
}

/// A product table listing the nonzero products in index order.
pub fn ring(r: &GammaRing) -> Value {
    let (carrier, gamma) = (r.carrier(), r.gamma());
    let products: Vec<Value> = r
        .triples()
        .filter_map(|(x, a, y)| {
            let v = r.product(x, a, y);
            (v != 0).then(|| json!([carrier.label(x), gamma.label(a), carrier.label(y), carrier.label(v)]))
        })
        .collect();
    json!({ "kind": "table", "carrier": group(carrier), "gamma": group(gamma), "products": products })
}

fn assignment(s: &FiniteSemigroup, parts: &[Subgroup]) -> Value {
    let mut map = Map::new();
    for (g, part) in parts.iter().enumerate().filter(|(_, p)| !p.is_trivial()) {
        map.insert(s.label(g).to_string(), members(part));
    }
    Value::Object(map)
}

pub fn graded(g: &GradedGammaRing) -> Value {
    json!({
        "kind": "internal_grading",
        "ring": ring(g.ring()),
        "G": semigroup(g.semigroup()),
        "assignment": assignment(g.semigroup(), g.components()),
    })
}

pub fn filtration(f: &Filtration) -> Value {
    let chain: Vec<Value> = f.chain().iter().map(members).collect();
    json!({ "kind": "filtration", "ring": ring(f.ring()), "chain": chain })
}

pub fn module(m: &GammaModule) -> Value {
    let (r, carrier) = (m.ring(), m.carrier());
    let mut action = Vec::new();
    for x in r.carrier().elements() {
        for a in r.gamma().elements() {
            for v in carrier.elements() {
                let w = m.act(x, a, v);
                if w != 0 {
                    action.push(json!([r.carrier().label(x), r.gamma().label(a), carrier.label(v), carrier.label(w)]));
                }
            }
        }
    }
    let side = match m.side() {
        ModuleSide::Left => "left",
        ModuleSide::Right => "right",
    };
    json!({ "kind": "module", "ring": ring(r), "carrier": group(carrier), "side": side, "action": action })
}

pub fn graded_module(m: &GradedGammaModule) -> Value {
    json!({
        "kind": "graded_module",
        "ring": graded(m.ring()),
        "module": module(m.module()),
        "components": assignment(m.ring().semigroup(), m.components()),
    })
}

/// A one-entry structure file, pretty-printed with a trailing newline.
pub fn document(name: &str, decl: Value) -> String {
    let mut map = Map::new();
    map.insert(name.to_string(), decl);
    pretty(&Value::Object(map))
}

/// Pretty JSON in which arrays of scalars stay on one line.
pub fn pretty(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_flat(value: &Value) -> bool {
    match value {
        Value::Array(items) => items.iter().all(|v| !v.is_object() && (!v.is_array() || is_flat_tuple(v))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn is_flat_tuple(value: &Value) -> bool {
    matches!(value, Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()))
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match value {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if is_flat(value) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, v, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, v, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
