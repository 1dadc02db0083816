//! Text and JSON renderings of library objects.

use std::fmt::Write as _;

use lcsm_core::popularity::{LabeledDecomposition, Side, Structure, Vertex, Violation};
use lcsm_core::{Instance, Matching};
use serde_json::{json, Value};

pub fn pairs_json(inst: &Instance, m: &Matching) -> Value {
    m.pairs().map(|(r, h)| json!([inst.resident_name(r), inst.hospital_name(h)])).collect()
}

pub fn partner(inst: &Instance, h: Option<usize>) -> &str {
    h.map_or("-", |h| inst.hospital_name(h))
}

pub fn signed(v: i64) -> String {
    if v > 0 {
        format!("+{v}")
    } else {
        v.to_string()
    }
}

/// `r4 ==(+1,+1)== h1 -- r3 ...`: rival edges carry their label, current
/// edges are plain. Cycles repeat their first vertex at the end.
pub fn structure_line(inst: &Instance, s: &Structure) -> String {
    let walk = s.walk();
    let mut out = String::from(if s.is_cycle() { "cycle " } else { "path  " });
    out.push_str(walk[0].name(inst));
    for (e, v) in s.edges.iter().zip(&walk[1..]) {
        match (e.side, e.label) {
            (Side::Rival, Some(l)) => {
                write!(out, " ==({},{})== ", signed(l.resident as i64), signed(l.hospital as i64)).unwrap()
            }
            _ => out.push_str(" -- "),
        }
        out.push_str(v.name(inst));
    }
    out
}

pub fn structure_json(inst: &Instance, s: &Structure) -> Value {
    let edges: Vec<Value> = s
        .edges
        .iter()
        .map(|e| {
            json!({
                "resident": inst.resident_name(e.resident),
                "hospital": inst.hospital_name(e.hospital),
                "side": match e.side { Side::Current => "current", Side::Rival => "rival" },
                "label": e.label.map(|l| json!([l.resident, l.hospital])),
            })
        })
        .collect();
    json!({
        "kind": if s.is_cycle() { "cycle" } else { "path" },
        "walk": s.walk().iter().map(|v| v.name(inst)).collect::<Vec<_>>(),
        "edges": edges,
    })
}

fn vertex_names(inst: &Instance, vs: &[Vertex]) -> Vec<String> {
    vs.iter().map(|v| v.name(inst).to_string()).collect()
}

pub fn decomposition_text(inst: &Instance, title: &str, dec: &LabeledDecomposition, out: &mut String) {
    let u = vertex_names(inst, &dec.endpoints);
    writeln!(out, "{title}: {} structure(s), U = {{{}}}", dec.structures.len(), u.join(", ")).unwrap();
    for s in &dec.structures {
        writeln!(out, "  {}", structure_line(inst, s)).unwrap();
    }
}

pub fn decomposition_json(inst: &Instance, dec: &LabeledDecomposition) -> Value {
    json!({
        "endpoints": vertex_names(inst, &dec.endpoints),
        "structures": dec.structures.iter().map(|s| structure_json(inst, s)).collect::<Vec<_>>(),
    })
}

pub fn violations_text(inst: &Instance, found: &[Violation], out: &mut String) {
    if found.is_empty() {
        out.push_str("certificates: none\n");
    }
    for v in found {
        writeln!(out, "certificate {}: {}", v.kind.as_str(), structure_line(inst, &v.structure)).unwrap();
    }
}

pub fn violations_json(inst: &Instance, found: &[Violation]) -> Value {
    found.iter().map(|v| json!({ "kind": v.kind.as_str(), "structure": structure_json(inst, &v.structure) })).collect()
}
