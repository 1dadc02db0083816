//! Line-oriented text formats for instances and matchings.
//!
//! ```text
//! residents: r1 r2 r3 r4
//! hospitals: h1:2 h2:1 h3:1          # id:capacity
//! pref r2: h2 h1 h3
//! hpref h1: r2 r3 r4 r1
//! class h1.c1 quota 1: r1 r2         # nesting inferred by containment
//! ```
//!
//! A `#` that begins a token starts a comment running to the end of the
//! line. A `#` inside a token is part of the identifier, which is how level
//! copies such as `r1#0` are written.
//!
//! Matchings are one `resident hospital` pair per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, Matching, RawClass, RawInstance, ROOT_CLASS};

pub(crate) fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub(crate) fn check_id(line: usize, id: &str) -> Result<()> {
    if id.is_empty() || id.contains(':') || id.starts_with('#') {
        return Err(syntax(line, format!("malformed identifier {id:?}")));
    }
    Ok(())
}

/// Parses the instance format. Only syntax is checked here; unknown names,
/// laminarity and the like are reported by [`Instance::validate`].
pub fn parse_instance(text: &str) -> Result<RawInstance> {
    let mut raw = RawInstance::default();
    for (i, full) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(full).trim();
        if line.is_empty() {
            continue;
        }
        let Some((head, body)) = line.split_once(':') else {
            return Err(syntax(line_no, "expected a ':' separating header and body"));
        };
        let head_tokens: Vec<&str> = head.split_whitespace().collect();
        let body_tokens: Vec<&str> = body.split_whitespace().collect();
        match head_tokens.as_slice() {
            ["residents"] => {
                for t in body_tokens {
                    check_id(line_no, t)?;
                    raw.residents.push(t.to_string());
                }
            }
            ["hospitals"] => {
                // Capacities are attached with ':' so the body was split at the
                // first colon only; re-split on whitespace.
                for t in body_tokens {
                    let Some((name, cap)) = t.rsplit_once(':') else {
                        return Err(syntax(line_no, format!("hospital {t:?} lacks ':capacity'")));
                    };
                    check_id(line_no, name)?;
                    let cap: u32 = cap.parse().map_err(|_| syntax(line_no, format!("bad capacity in {t:?}")))?;
                    raw.hospitals.push((name.to_string(), cap));
                }
            }
            ["pref", owner] => {
                check_id(line_no, owner)?;
                raw.resident_prefs.push((owner.to_string(), body_tokens.iter().map(|s| s.to_string()).collect()));
            }
            ["hpref", owner] => {
                check_id(line_no, owner)?;
                raw.hospital_prefs.push((owner.to_string(), body_tokens.iter().map(|s| s.to_string()).collect()));
            }
            ["class", id, "quota", quota] => {
                let Some((hospital, name)) = id.rsplit_once('.') else {
                    return Err(syntax(line_no, format!("class id {id:?} must be HOSPITAL.NAME")));
                };
                check_id(line_no, hospital)?;
                if name.is_empty() || name == ROOT_CLASS {
                    return Err(syntax(line_no, format!("invalid class name {name:?}")));
                }
                let quota: u32 = quota.parse().map_err(|_| syntax(line_no, format!("bad quota {quota:?}")))?;
                if body_tokens.is_empty() {
                    return Err(syntax(line_no, "class has no members"));
                }
                raw.classes.push(RawClass {
                    hospital: hospital.to_string(),
                    name: name.to_string(),
                    quota,
                    members: body_tokens.iter().map(|s| s.to_string()).collect(),
                });
            }
            _ => return Err(syntax(line_no, format!("unrecognised line header {head:?}"))),
        }
    }
    Ok(raw)
}

/// Parse and validate in one step.
pub fn read_instance(text: &str) -> Result<Instance> {
    Ok(Instance::validate(&parse_instance(text)?)?)
}

/// Canonical text: fixed section order, single spaces, classes in tree preorder.
pub fn write_instance(instance: &Instance) -> String {
    let raw = instance.to_raw();
    let mut out = String::new();
    out.push_str("residents:");
    for r in &raw.residents {
        write!(out, " {r}").unwrap();
    }
    out.push_str("\nhospitals:");
    for (h, q) in &raw.hospitals {
        write!(out, " {h}:{q}").unwrap();
    }
    out.push('\n');
    for (owner, list) in &raw.resident_prefs {
        writeln!(out, "pref {owner}: {}", list.join(" ")).unwrap();
    }
    for (owner, list) in &raw.hospital_prefs {
        writeln!(out, "hpref {owner}: {}", list.join(" ")).unwrap();
    }
    for c in &raw.classes {
        writeln!(out, "class {}.{} quota {}: {}", c.hospital, c.name, c.quota, c.members.join(" ")).unwrap();
    }
    out
}

/// Parses `resident hospital` lines against `instance`. Unknown identifiers
/// are syntax errors here; non-edges and double assignments are rejected too.
pub fn parse_matching(instance: &Instance, text: &str) -> Result<Matching> {
    let mut m = Matching::empty(instance.num_residents());
    for (i, full) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = strip_comment(full).split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [r, h] => {
                let ri = instance.resident_id(r).ok_or_else(|| syntax(line_no, format!("unknown resident {r}")))?;
                let hi = instance.hospital_id(h).ok_or_else(|| syntax(line_no, format!("unknown hospital {h}")))?;
                if !instance.is_edge(ri, hi) {
                    return Err(syntax(line_no, format!("({r}, {h}) is not an edge")));
                }
                if m.hospital_of(ri).is_some() {
                    return Err(syntax(line_no, format!("{r} is matched twice")));
                }
                m.assign(ri, Some(hi));
            }
            _ => return Err(syntax(line_no, "expected 'resident hospital'")),
        }
    }
    Ok(m)
}

pub fn write_matching(instance: &Instance, m: &Matching) -> String {
    let mut out = String::new();
    for (r, h) in m.pairs() {
        writeln!(out, "{} {}", instance.resident_name(r), instance.hospital_name(h)).unwrap();
    }
    out
}
