//! Result documents: schema-versioned JSON with exact rationals as
//! canonical `p/q` strings, plus the re-verification used by the
//! `verify` command.

use serde_json::{json, Map, Value};
use sumflow_core::flow::{vertex_values, FarkasCertificate, FlowAssignment, IntervalSpec, LabelSet};
use sumflow_core::graph::Graph;
use sumflow_core::lp;
use sumflow_core::rational::{format_rat, parse_rat, rat, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Merge the command echo with the result fields, stamp the schema
/// version, and print the document.
pub fn emit(base: Value, extra: Value) {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!("1"));
    for part in [base, extra] {
        if let Value::Object(fields) = part {
            doc.extend(fields);
        }
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).unwrap());
}

pub fn emit_error(message: &str) {
    emit(
        json!({"decision": "error"}),
        json!({"error": message}),
    );
}

pub fn flow_json(g: &Graph, w: &FlowAssignment) -> Vec<Value> {
    g.edges()
        .iter()
        .zip(w)
        .map(|(&(u, v), value)| json!({"u": u, "v": v, "value": format_rat(value)}))
        .collect()
}

pub fn certificate_json(cert: &FarkasCertificate) -> Value {
    json!({
        "z": cert.z.iter().map(format_rat).collect::<Vec<_>>(),
        "w": cert.w.iter().map(format_rat).collect::<Vec<_>>(),
    })
}

pub fn set_to_json(set: &LabelSet) -> Value {
    let bound = |b: &Option<Rat>| b.as_ref().map(format_rat);
    match set {
        LabelSet::Interval(s) => json!({
            "kind": "interval",
            "lo": bound(&s.lo), "hi": bound(&s.hi),
            "open_low": s.open_low, "open_high": s.open_high,
        }),
        LabelSet::PuncturedInterval(s) => json!({
            "kind": "punctured-interval",
            "lo": bound(&s.lo), "hi": bound(&s.hi),
            "open_low": s.open_low, "open_high": s.open_high,
        }),
        LabelSet::Finite(values) => json!({
            "kind": "list",
            "values": values.iter().map(format_rat).collect::<Vec<_>>(),
        }),
        LabelSet::NonzeroReals => json!({"kind": "nonzero-reals"}),
        LabelSet::NonzeroIntegers => json!({"kind": "nonzero-ints"}),
    }
}

fn set_from_json(v: &Value) -> Result<LabelSet, String> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or("set without kind")?;
    let bound = |name: &str| -> Result<Option<Rat>, String> {
        match v.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => {
                parse_rat(s).map(Some).ok_or(format!("bad rational in set.{name}"))
            }
            _ => Err(format!("bad set.{name}")),
        }
    };
    let interval = |v: &Value| -> Result<IntervalSpec, String> {
        Ok(IntervalSpec {
            lo: bound("lo")?,
            hi: bound("hi")?,
            open_low: v.get("open_low").and_then(Value::as_bool).unwrap_or(false),
            open_high: v.get("open_high").and_then(Value::as_bool).unwrap_or(false),
        })
    };
    match kind {
        "interval" => Ok(LabelSet::Interval(interval(v)?)),
        "punctured-interval" => Ok(LabelSet::PuncturedInterval(interval(v)?)),
        "list" => {
            let values = v
                .get("values")
                .and_then(Value::as_array)
                .ok_or("list set without values")?;
            let parsed: Option<Vec<Rat>> = values
                .iter()
                .map(|x| x.as_str().and_then(parse_rat))
                .collect();
            Ok(LabelSet::finite(parsed.ok_or("bad rational in set.values")?))
        }
        "nonzero-reals" => Ok(LabelSet::NonzeroReals),
        "nonzero-ints" => Ok(LabelSet::NonzeroIntegers),
        other => Err(format!("unknown set kind '{other}'")),
    }
}

/// Exact re-check of an emitted document: flow edges must match the
/// graph, vertex sums must reproduce gamma, values must lie in the
/// echoed set, and any certificate must pass the Farkas inequality.
/// Returns the first violated constraint.
pub fn verify(g: &Graph, doc: &Value) -> Result<(), String> {
    if doc.get("schema_version").and_then(Value::as_str) != Some("1") {
        return Err("unsupported or missing schema_version".into());
    }
    let gamma: Vec<Rat> = match doc.get("gamma").and_then(Value::as_array) {
        Some(values) => {
            let parsed: Option<Vec<Rat>> = values
                .iter()
                .map(|x| x.as_str().and_then(parse_rat))
                .collect();
            parsed.ok_or("bad rational in gamma")?
        }
        None => vec![rat(1); g.vertex_count()],
    };
    if gamma.len() != g.vertex_count() {
        return Err("gamma length does not match the graph".into());
    }
    let set = doc.get("set").map(set_from_json).transpose()?;
    if let Some(entries) = doc.get("flow").and_then(Value::as_array) {
        if entries.len() != g.edge_count() {
            return Err("flow entry count does not match the edge count".into());
        }
        let mut w = vec![rat(0); g.edge_count()];
        let mut seen = vec![false; g.edge_count()];
        for entry in entries {
            let u = entry.get("u").and_then(Value::as_u64).ok_or("flow entry without u")?;
            let v = entry.get("v").and_then(Value::as_u64).ok_or("flow entry without v")?;
            let value = entry
                .get("value")
                .and_then(Value::as_str)
                .and_then(parse_rat)
                .ok_or("flow entry without an exact value")?;
            let e = g
                .edge_index(u as usize, v as usize)
                .ok_or(format!("edge {u}-{v} is not in the graph"))?;
            if seen[e] {
                return Err(format!("edge {u}-{v} listed twice"));
            }
            seen[e] = true;
            w[e] = value;
        }
        let sums = vertex_values(g, &w).map_err(|e| e.to_string())?;
        if let Some(bad) = (0..g.vertex_count()).find(|&x| sums[x] != gamma[x]) {
            return Err(format!(
                "vertex {bad} sums to {}, expected {}",
                format_rat(&sums[bad]),
                format_rat(&gamma[bad])
            ));
        }
        if let Some(set) = &set {
            if let Some(bad) = (0..g.edge_count()).find(|&e| !set.contains(&w[e])) {
                let (u, v) = g.edge(bad);
                return Err(format!(
                    "edge {u}-{v} value {} is outside the declared set",
                    format_rat(&w[bad])
                ));
            }
        }
    } else if doc.get("decision").and_then(Value::as_str) == Some("feasible") {
        return Err("feasible document without a flow".into());
    }
    if let Some(cert) = doc.get("certificate") {
        let Some(LabelSet::Interval(spec)) = &set else {
            return Err("certificate without an interval set".into());
        };
        let parse_list = |name: &str| -> Result<Vec<Rat>, String> {
            let values = cert
                .get(name)
                .and_then(Value::as_array)
                .ok_or(format!("certificate without {name}"))?;
            let parsed: Option<Vec<Rat>> = values
                .iter()
                .map(|x| x.as_str().and_then(parse_rat))
                .collect();
            parsed.ok_or(format!("bad rational in certificate.{name}"))
        };
        let cert = FarkasCertificate {
            z: parse_list("z")?,
            w: parse_list("w")?,
        };
        match lp::verify_farkas(g, &gamma, spec, &cert) {
            Ok(true) => {}
            Ok(false) => return Err("certificate fails the Farkas inequality".into()),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(())
}
