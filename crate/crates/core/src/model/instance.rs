use std::collections::{HashMap, HashSet};

use super::classes::{ClassSpec, ClassTree};
use crate::error::{ValidationErrors, ValidationIssue};

/// A declared class as it appears in the text format, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClass {
    pub hospital: String,
    pub name: String,
    pub quota: u32,
    pub members: Vec<String>,
}

/// Syntactically parsed instance data. Nothing here is checked yet; see
/// [`Instance::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub residents: Vec<String>,
    pub hospitals: Vec<(String, u32)>,
    pub resident_prefs: Vec<(String, Vec<String>)>,
    pub hospital_prefs: Vec<(String, Vec<String>)>,
    pub classes: Vec<RawClass>,
}

impl RawInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn resident(mut self, name: &str, prefs: &[&str]) -> Self {
        self.residents.push(name.to_string());
        if !prefs.is_empty() {
            self.resident_prefs.push((name.to_string(), prefs.iter().map(|s| s.to_string()).collect()));
        }
        self
    }

    pub fn hospital(mut self, name: &str, capacity: u32, prefs: &[&str]) -> Self {
        self.hospitals.push((name.to_string(), capacity));
        if !prefs.is_empty() {
            self.hospital_prefs.push((name.to_string(), prefs.iter().map(|s| s.to_string()).collect()));
        }
        self
    }

    pub fn class(mut self, hospital: &str, name: &str, quota: u32, members: &[&str]) -> Self {
        self.classes.push(RawClass {
            hospital: hospital.to_string(),
            name: name.to_string(),
            quota,
            members: members.iter().map(|s| s.to_string()).collect(),
        });
        self
    }
}

/// A validated LCSM⁺ instance: residents and hospitals with strict,
/// mutually consistent preference lists, capacities and a laminar class tree
/// per hospital. Vertices are addressed by their index in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    residents: Vec<String>,
    hospitals: Vec<String>,
    capacity: Vec<u32>,
    resident_prefs: Vec<Vec<usize>>,
    hospital_prefs: Vec<Vec<usize>>,
    resident_rank: Vec<HashMap<usize, usize>>,
    hospital_rank: Vec<HashMap<usize, usize>>,
    trees: Vec<ClassTree>,
    resident_index: HashMap<String, usize>,
    hospital_index: HashMap<String, usize>,
}

impl Instance {
    /// Checks every invariant and collects all problems instead of stopping
    /// at the first one. The root class of each hospital is synthesized.
    pub fn validate(raw: &RawInstance) -> Result<Instance, ValidationErrors> {
        let mut issues = Vec::new();

        let mut resident_index = HashMap::new();
        for (i, r) in raw.residents.iter().enumerate() {
            if resident_index.insert(r.clone(), i).is_some() {
                issues.push(ValidationIssue::DuplicateIdentifier { name: r.clone() });
            }
        }
        let mut hospital_index = HashMap::new();
        let mut capacity = Vec::with_capacity(raw.hospitals.len());
        for (i, (h, q)) in raw.hospitals.iter().enumerate() {
            if hospital_index.insert(h.clone(), i).is_some() {
                issues.push(ValidationIssue::DuplicateIdentifier { name: h.clone() });
            }
            if *q == 0 {
                issues.push(ValidationIssue::BadQuota {
                    hospital: h.clone(),
                    detail: "capacity must be positive".to_string(),
                });
            }
            capacity.push(*q);
        }

        let mut resident_prefs = vec![Vec::new(); raw.residents.len()];
        let mut seen = HashSet::new();
        for (owner, list) in &raw.resident_prefs {
            let Some(&r) = resident_index.get(owner) else {
                issues.push(ValidationIssue::UnknownIdentifier {
                    context: "resident preference line".to_string(),
                    name: owner.clone(),
                });
                continue;
            };
            if !seen.insert(r) {
                issues.push(ValidationIssue::DuplicateIdentifier { name: format!("preference line for {owner}") });
                continue;
            }
            resident_prefs[r] = resolve_list(owner, list, &hospital_index, &mut issues);
        }
        let mut hospital_prefs = vec![Vec::new(); raw.hospitals.len()];
        let mut seen = HashSet::new();
        for (owner, list) in &raw.hospital_prefs {
            let Some(&h) = hospital_index.get(owner) else {
                issues.push(ValidationIssue::UnknownIdentifier {
                    context: "hospital preference line".to_string(),
                    name: owner.clone(),
                });
                continue;
            };
            if !seen.insert(h) {
                issues.push(ValidationIssue::DuplicateIdentifier { name: format!("preference line for {owner}") });
                continue;
            }
            hospital_prefs[h] = resolve_list(owner, list, &resident_index, &mut issues);
        }

        let resident_rank = ranks(&resident_prefs);
        let hospital_rank = ranks(&hospital_prefs);
        for (r, list) in resident_prefs.iter().enumerate() {
            for &h in list {
                if !hospital_rank[h].contains_key(&r) {
                    issues.push(ValidationIssue::NonMutualEdge {
                        resident: raw.residents[r].clone(),
                        hospital: raw.hospitals[h].0.clone(),
                    });
                }
            }
        }
        for (h, list) in hospital_prefs.iter().enumerate() {
            for &r in list {
                if !resident_rank[r].contains_key(&h) {
                    issues.push(ValidationIssue::NonMutualEdge {
                        resident: raw.residents[r].clone(),
                        hospital: raw.hospitals[h].0.clone(),
                    });
                }
            }
        }

        let mut declared: Vec<Vec<ClassSpec>> = vec![Vec::new(); raw.hospitals.len()];
        for class in &raw.classes {
            let Some(&h) = hospital_index.get(&class.hospital) else {
                issues.push(ValidationIssue::UnknownIdentifier {
                    context: format!("class {}", class.name),
                    name: class.hospital.clone(),
                });
                continue;
            };
            let mut members = Vec::with_capacity(class.members.len());
            let mut ok = true;
            for m in &class.members {
                match resident_index.get(m) {
                    Some(&r) => members.push(r),
                    None => {
                        ok = false;
                        issues.push(ValidationIssue::UnknownIdentifier {
                            context: format!("class {}.{}", class.hospital, class.name),
                            name: m.clone(),
                        });
                    }
                }
            }
            if ok {
                declared[h].push(ClassSpec { name: class.name.clone(), members, quota: class.quota });
            }
        }

        let mut trees = Vec::with_capacity(raw.hospitals.len());
        for (h, specs) in declared.into_iter().enumerate() {
            let name = |r: usize| raw.residents[r].clone();
            match ClassTree::build(&raw.hospitals[h].0, &hospital_prefs[h], capacity[h], specs, &name) {
                Ok(tree) => trees.push(tree),
                Err(mut found) => issues.append(&mut found),
            }
        }

        if !issues.is_empty() {
            return Err(ValidationErrors(issues));
        }
        Ok(Instance {
            residents: raw.residents.clone(),
            hospitals: raw.hospitals.iter().map(|(h, _)| h.clone()).collect(),
            capacity,
            resident_prefs,
            hospital_prefs,
            resident_rank,
            hospital_rank,
            trees,
            resident_index,
            hospital_index,
        })
    }

    /// Inverse of [`Instance::validate`]: the raw data a serializer would emit.
    pub fn to_raw(&self) -> RawInstance {
        let mut raw = RawInstance {
            residents: self.residents.clone(),
            hospitals: self.hospitals.iter().cloned().zip(self.capacity.iter().copied()).collect(),
            ..RawInstance::default()
        };
        for (r, list) in self.resident_prefs.iter().enumerate() {
            if !list.is_empty() {
                raw.resident_prefs
                    .push((self.residents[r].clone(), list.iter().map(|&h| self.hospitals[h].clone()).collect()));
            }
        }
        for (h, list) in self.hospital_prefs.iter().enumerate() {
            if !list.is_empty() {
                raw.hospital_prefs
                    .push((self.hospitals[h].clone(), list.iter().map(|&r| self.residents[r].clone()).collect()));
            }
            for class in self.trees[h].classes().iter().skip(1) {
                raw.classes.push(RawClass {
                    hospital: self.hospitals[h].clone(),
                    name: class.name.clone(),
                    quota: class.quota,
                    members: class.members.iter().map(|&r| self.residents[r].clone()).collect(),
                });
            }
        }
        raw
    }

    pub fn num_residents(&self) -> usize {
        self.residents.len()
    }

    pub fn num_hospitals(&self) -> usize {
        self.hospitals.len()
    }

    /// |E|.
    pub fn num_edges(&self) -> usize {
        self.resident_prefs.iter().map(Vec::len).sum()
    }

    pub fn resident_name(&self, r: usize) -> &str {
        &self.residents[r]
    }

    pub fn hospital_name(&self, h: usize) -> &str {
        &self.hospitals[h]
    }

    pub fn resident_id(&self, name: &str) -> Option<usize> {
        self.resident_index.get(name).copied()
    }

    pub fn hospital_id(&self, name: &str) -> Option<usize> {
        self.hospital_index.get(name).copied()
    }

    pub fn capacity(&self, h: usize) -> u32 {
        self.capacity[h]
    }

    pub fn resident_prefs(&self, r: usize) -> &[usize] {
        &self.resident_prefs[r]
    }

    pub fn hospital_prefs(&self, h: usize) -> &[usize] {
        &self.hospital_prefs[h]
    }

    /// Position of `h` on `r`'s list, 0 being the favourite.
    pub fn resident_rank(&self, r: usize, h: usize) -> Option<usize> {
        self.resident_rank[r].get(&h).copied()
    }

    pub fn hospital_rank(&self, h: usize, r: usize) -> Option<usize> {
        self.hospital_rank[h].get(&r).copied()
    }

    pub fn is_edge(&self, r: usize, h: usize) -> bool {
        self.resident_rank[r].contains_key(&h)
    }

    pub fn class_tree(&self, h: usize) -> &ClassTree {
        &self.trees[h]
    }

    /// True when `h` prefers `a` to `b`. Both must be on `h`'s list.
    pub fn hospital_prefers(&self, h: usize, a: usize, b: usize) -> bool {
        self.hospital_rank[h][&a] < self.hospital_rank[h][&b]
    }

    /// True when `r` prefers `a` to `b`, where `None` is being unmatched.
    pub fn resident_prefers(&self, r: usize, a: usize, b: Option<usize>) -> bool {
        match b {
            None => true,
            Some(b) => self.resident_rank[r][&a] < self.resident_rank[r][&b],
        }
    }
}

fn resolve_list(
    owner: &str,
    list: &[String],
    index: &HashMap<String, usize>,
    issues: &mut Vec<ValidationIssue>,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(list.len());
    let mut seen = HashSet::new();
    for name in list {
        match index.get(name) {
            Some(&i) => {
                if seen.insert(i) {
                    out.push(i);
                } else {
                    issues.push(ValidationIssue::DuplicatePrefEntry { owner: owner.to_string(), entry: name.clone() });
                }
            }
            None => issues.push(ValidationIssue::UnknownIdentifier {
                context: format!("preference list of {owner}"),
                name: name.clone(),
            }),
        }
    }
    out
}

fn ranks(prefs: &[Vec<usize>]) -> Vec<HashMap<usize, usize>> {
    prefs.iter().map(|list| list.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect()
}
