//! Student–project allocation view of a partitioned instance.
//!
//! ```text
//! students: r1 r2 r3 r4
//! lecturers: h1:2 h2:1 h3:1
//! projects: h1.c1@h1:1 h1.c2@h1:1 h2.*@h2:1 h3.*@h3:1   # name@lecturer:capacity
//! pref r3: h1.c2 h2.*
//! lpref h1: r2 r3 r4 r1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::{check_id, strip_comment, syntax};
use crate::model::{Instance, ROOT_CLASS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaProject {
    pub name: String,
    pub lecturer: usize,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpaInstance {
    pub students: Vec<String>,
    pub lecturers: Vec<(String, u32)>,
    pub projects: Vec<SpaProject>,
    /// Project indices, best first.
    pub student_prefs: Vec<Vec<usize>>,
    /// Student indices, best first.
    pub lecturer_prefs: Vec<Vec<usize>>,
}

/// The project of `r` at `h`: the top-level class holding `r`, or the root
/// when `h` has no other classes.
fn project_class(instance: &Instance, h: usize, r: usize) -> usize {
    let tree = instance.class_tree(h);
    tree.chain(r).find(|&c| tree.class(c).depth == 1).unwrap_or(0)
}

/// Students are residents, lecturers are hospitals, and every top-level
/// class becomes a project with the class quota (a hospital without classes
/// offers one project of its full capacity). Rank `k` on every list maps to
/// rank `k` on the corresponding new list.
pub fn pcsm_to_spa(instance: &Instance) -> Result<SpaInstance> {
    let mut spa = SpaInstance::default();
    let mut project_of: HashMap<(usize, usize), usize> = HashMap::new();
    for h in 0..instance.num_hospitals() {
        let tree = instance.class_tree(h);
        let tops: Vec<usize> = (1..tree.len()).filter(|&c| tree.class(c).depth == 1).collect();
        let flat = tops.len() + 1 == tree.len();
        let covered: usize = tops.iter().map(|&c| tree.class(c).members.len()).sum();
        if !(tops.is_empty() || flat && covered == instance.hospital_prefs(h).len()) {
            return Err(Error::NotPartition { hospital: instance.hospital_name(h).to_string() });
        }
        let hname = instance.hospital_name(h);
        spa.lecturers.push((hname.to_string(), instance.capacity(h)));
        let classes = if tops.is_empty() { vec![0] } else { tops };
        for c in classes {
            project_of.insert((h, c), spa.projects.len());
            spa.projects.push(SpaProject {
                name: format!("{hname}.{}", tree.class(c).name),
                lecturer: h,
                capacity: tree.class(c).quota,
            });
        }
        spa.lecturer_prefs.push(instance.hospital_prefs(h).to_vec());
    }
    for r in 0..instance.num_residents() {
        spa.students.push(instance.resident_name(r).to_string());
        spa.student_prefs.push(
            instance.resident_prefs(r).iter().map(|&h| project_of[&(h, project_class(instance, h, r))]).collect(),
        );
    }
    Ok(spa)
}

pub fn write_spa(spa: &SpaInstance) -> String {
    let mut out = String::from("students:");
    for s in &spa.students {
        write!(out, " {s}").unwrap();
    }
    out.push_str("\nlecturers:");
    for (l, q) in &spa.lecturers {
        write!(out, " {l}:{q}").unwrap();
    }
    out.push_str("\nprojects:");
    for p in &spa.projects {
        write!(out, " {}@{}:{}", p.name, spa.lecturers[p.lecturer].0, p.capacity).unwrap();
    }
    out.push('\n');
    for (s, prefs) in spa.students.iter().zip(&spa.student_prefs) {
        let names: Vec<&str> = prefs.iter().map(|&p| spa.projects[p].name.as_str()).collect();
        writeln!(out, "pref {s}: {}", names.join(" ")).unwrap();
    }
    for ((l, _), prefs) in spa.lecturers.iter().zip(&spa.lecturer_prefs) {
        let names: Vec<&str> = prefs.iter().map(|&s| spa.students[s].as_str()).collect();
        writeln!(out, "lpref {l}: {}", names.join(" ")).unwrap();
    }
    out
}

/// Reads the format produced by [`write_spa`].
pub fn parse_spa(text: &str) -> Result<SpaInstance> {
    let mut spa = SpaInstance::default();
    let mut pending_prefs: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut pending_lprefs: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (i, full) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(full).trim();
        if line.is_empty() {
            continue;
        }
        let Some((head, body)) = line.split_once(':') else {
            return Err(syntax(line_no, "expected a ':' separating header and body"));
        };
        let body: Vec<String> = body.split_whitespace().map(str::to_string).collect();
        match head.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["students"] => {
                for t in body {
                    check_id(line_no, &t)?;
                    spa.students.push(t);
                }
            }
            ["lecturers"] => {
                for t in body {
                    let (name, cap) =
                        t.rsplit_once(':').ok_or_else(|| syntax(line_no, format!("{t:?} lacks ':capacity'")))?;
                    let cap = cap.parse().map_err(|_| syntax(line_no, format!("bad capacity in {t:?}")))?;
                    spa.lecturers.push((name.to_string(), cap));
                }
            }
            ["projects"] => {
                for t in body {
                    let bad = || syntax(line_no, format!("project {t:?} must be NAME@LECTURER:CAPACITY"));
                    let (rest, cap) = t.rsplit_once(':').ok_or_else(bad)?;
                    let (name, lecturer) = rest.rsplit_once('@').ok_or_else(bad)?;
                    let lecturer = spa
                        .lecturers
                        .iter()
                        .position(|(l, _)| l == lecturer)
                        .ok_or_else(|| syntax(line_no, format!("unknown lecturer {lecturer}")))?;
                    let capacity = cap.parse().map_err(|_| bad())?;
                    spa.projects.push(SpaProject { name: name.to_string(), lecturer, capacity });
                }
            }
            ["pref", owner] => pending_prefs.push((line_no, owner.to_string(), body)),
            ["lpref", owner] => pending_lprefs.push((line_no, owner.to_string(), body)),
            _ => return Err(syntax(line_no, format!("unrecognised line header {head:?}"))),
        }
    }

    let lookup = |names: &[String], line: usize, what: &str, key: &str| -> Result<usize> {
        names.iter().position(|n| n == key).ok_or_else(|| syntax(line, format!("unknown {what} {key}")))
    };
    let project_names: Vec<String> = spa.projects.iter().map(|p| p.name.clone()).collect();
    let lecturer_names: Vec<String> = spa.lecturers.iter().map(|(l, _)| l.clone()).collect();
    spa.student_prefs = vec![Vec::new(); spa.students.len()];
    spa.lecturer_prefs = vec![Vec::new(); spa.lecturers.len()];
    for (line, owner, list) in pending_prefs {
        let s = lookup(&spa.students, line, "student", &owner)?;
        spa.student_prefs[s] =
            list.iter().map(|p| lookup(&project_names, line, "project", p)).collect::<Result<_>>()?;
    }
    for (line, owner, list) in pending_lprefs {
        let l = lookup(&lecturer_names, line, "lecturer", &owner)?;
        spa.lecturer_prefs[l] =
            list.iter().map(|s| lookup(&spa.students, line, "student", s)).collect::<Result<_>>()?;
    }
    Ok(spa)
}

impl SpaInstance {
    pub fn project_id(&self, name: &str) -> Option<usize> {
        self.projects.iter().position(|p| p.name == name)
    }

    pub fn student_id(&self, name: &str) -> Option<usize> {
        self.students.iter().position(|s| s == name)
    }
}

/// Name of the single project of a hospital without classes.
pub fn root_project_name(hospital: &str) -> String {
    format!("{hospital}.{ROOT_CLASS}")
}
