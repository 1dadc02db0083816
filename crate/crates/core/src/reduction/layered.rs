use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ensure_feasible, Instance, Matching, RawInstance, ROOT_CLASS};
use crate::popularity::{hospital_pref_vote, resident_vote, AltEdge, Label, Side, Structure, Vertex};

/// The layered instance `G_s`.
///
/// Resident `r` of `G` becomes `s` level copies `r#0 .. r#(s-1)`, and `s - 1`
/// capacity-one dummy hospitals `d_r#0 .. d_r#(s-2)` chain consecutive
/// copies together. Copies are numbered resident-major (`r * s + level`);
/// real hospitals keep their indices and the dummies follow them.
#[derive(Debug, Clone)]
pub struct LayeredInstance {
    s: usize,
    base: Instance,
    layered: Instance,
}

impl LayeredInstance {
    pub fn levels(&self) -> usize {
        self.s
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    /// `G_s` as a plain instance.
    pub fn instance(&self) -> &Instance {
        &self.layered
    }

    pub fn copy(&self, r: usize, level: usize) -> usize {
        debug_assert!(level < self.s);
        r * self.s + level
    }

    /// `(resident of G, level)` of a copy.
    pub fn origin(&self, copy: usize) -> (usize, usize) {
        (copy / self.s, copy % self.s)
    }

    pub fn dummy(&self, r: usize, level: usize) -> usize {
        debug_assert!(level + 1 < self.s);
        self.base.num_hospitals() + r * (self.s - 1) + level
    }

    pub fn is_dummy(&self, h: usize) -> bool {
        h >= self.base.num_hospitals()
    }

    /// `(resident of G, level)` for a dummy hospital.
    pub fn dummy_origin(&self, h: usize) -> Option<(usize, usize)> {
        let k = h.checked_sub(self.base.num_hospitals())?;
        Some((k / (self.s - 1), k % (self.s - 1)))
    }

    /// Level of the copy of `r` sitting at a real hospital, falling back to
    /// the top level when there is none.
    pub fn lift_level(&self, m_s: &Matching, r: usize) -> usize {
        (0..self.s).find(|&j| m_s.hospital_of(self.copy(r, j)).is_some_and(|h| !self.is_dummy(h))).unwrap_or(self.s - 1)
    }
}

pub fn copy_name(resident: &str, level: usize) -> String {
    format!("{resident}#{level}")
}

pub fn dummy_name(resident: &str, level: usize) -> String {
    format!("d_{resident}#{level}")
}

/// Builds `G_s` for `2 <= s <= |R|`.
///
/// Copy `i` of `r` lists `d_r#(i-1)` (if any), then `r`'s list in `G`,
/// then `d_r#i` (if any). Real hospitals rank the whole top level first,
/// then the next level down, each block in their original order. Every
/// class keeps its name and quota and is lifted to all copies of its members.
pub fn build_gs(instance: &Instance, s: usize) -> Result<LayeredInstance> {
    let n = instance.num_residents();
    if s < 2 || s > n {
        return Err(Error::BadLevelCount { s, max: n });
    }
    let names = (0..n)
        .map(|r| instance.resident_name(r))
        .chain((0..instance.num_hospitals()).map(|h| instance.hospital_name(h)));
    for name in names {
        if name.contains('#') {
            return Err(Error::ReservedName(name.to_string()));
        }
    }

    let rname = |r: usize| instance.resident_name(r);
    let hname = |h: usize| instance.hospital_name(h).to_string();
    let mut raw = RawInstance::default();
    for r in 0..n {
        for i in 0..s {
            let mut prefs = Vec::with_capacity(instance.resident_prefs(r).len() + 2);
            if i > 0 {
                prefs.push(dummy_name(rname(r), i - 1));
            }
            prefs.extend(instance.resident_prefs(r).iter().map(|&h| hname(h)));
            if i + 1 < s {
                prefs.push(dummy_name(rname(r), i));
            }
            raw.residents.push(copy_name(rname(r), i));
            raw.resident_prefs.push((copy_name(rname(r), i), prefs));
        }
    }
    let lift = |members: &[usize]| -> Vec<String> {
        (0..s).rev().flat_map(|i| members.iter().map(move |&r| copy_name(rname(r), i))).collect()
    };
    for h in 0..instance.num_hospitals() {
        raw.hospitals.push((hname(h), instance.capacity(h)));
        raw.hospital_prefs.push((hname(h), lift(instance.hospital_prefs(h))));
        for class in instance.class_tree(h).classes().iter().filter(|c| c.name != ROOT_CLASS) {
            raw.classes.push(crate::model::RawClass {
                hospital: hname(h),
                name: class.name.clone(),
                quota: class.quota,
                members: lift(&class.members),
            });
        }
    }
    for r in 0..n {
        for i in 0..s - 1 {
            let d = dummy_name(rname(r), i);
            raw.hospitals.push((d.clone(), 1));
            raw.hospital_prefs.push((d, vec![copy_name(rname(r), i), copy_name(rname(r), i + 1)]));
        }
    }

    let layered = Instance::validate(&raw)?;
    Ok(LayeredInstance { s, base: instance.clone(), layered })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    /// Every dummy is matched to one of its two copies.
    I1,
    /// At most one copy of a resident is at a real hospital.
    I2,
    /// Copies below the real one sit at their own dummy, copies above it at
    /// the previous dummy; with no real placement the top copy is unmatched.
    I3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantIssue {
    pub invariant: Invariant,
    pub resident: usize,
    pub detail: String,
}

impl fmt::Display for InvariantIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.invariant, self.detail)
    }
}

/// All I1–I3 violations of `m_s`, per resident of `G`.
pub fn check_invariants(layered: &LayeredInstance, m_s: &Matching) -> Vec<InvariantIssue> {
    let g = layered.instance();
    let s = layered.levels();
    let at = |c: usize| m_s.hospital_of(c);
    let name = |h: Option<usize>| h.map_or("nothing".to_string(), |h| g.hospital_name(h).to_string());
    let mut issues = Vec::new();
    for r in 0..layered.base().num_residents() {
        let issue = |invariant, detail: String| InvariantIssue { invariant, resident: r, detail };
        for i in 0..s - 1 {
            let d = layered.dummy(r, i);
            if at(layered.copy(r, i)) != Some(d) && at(layered.copy(r, i + 1)) != Some(d) {
                issues.push(issue(Invariant::I1, format!("{} is unmatched", g.hospital_name(d))));
            }
        }
        let real: Vec<usize> =
            (0..s).filter(|&j| at(layered.copy(r, j)).is_some_and(|h| !layered.is_dummy(h))).collect();
        if real.len() > 1 {
            let copies: Vec<&str> = real.iter().map(|&j| g.resident_name(layered.copy(r, j))).collect();
            issues.push(issue(Invariant::I2, format!("{} are all at real hospitals", copies.join(", "))));
        }
        let top = *real.first().unwrap_or(&(s - 1));
        for j in 0..s {
            let copy = layered.copy(r, j);
            let expected = match j.cmp(&top) {
                std::cmp::Ordering::Less => Some(layered.dummy(r, j)),
                std::cmp::Ordering::Greater => Some(layered.dummy(r, j - 1)),
                std::cmp::Ordering::Equal if real.is_empty() => None,
                std::cmp::Ordering::Equal => continue,
            };
            if at(copy) != expected {
                issues.push(issue(
                    Invariant::I3,
                    format!("{} is at {}, expected {}", g.resident_name(copy), name(at(copy)), name(expected)),
                ));
            }
        }
    }
    issues
}

/// `map(M_s)`: each resident goes to the real hospital of its copy there.
pub fn map_down(layered: &LayeredInstance, m_s: &Matching) -> Result<Matching> {
    ensure_feasible(layered.instance(), m_s, "M_s")?;
    let base = layered.base();
    let mut m = Matching::empty(base.num_residents());
    for r in 0..base.num_residents() {
        let mut real =
            (0..layered.levels()).filter_map(|j| m_s.hospital_of(layered.copy(r, j))).filter(|&h| !layered.is_dummy(h));
        let first = real.next();
        if real.next().is_some() {
            return Err(Error::InvariantViolation(format!(
                "several copies of {} are at real hospitals",
                base.resident_name(r)
            )));
        }
        m.assign(r, first);
    }
    Ok(m)
}

/// `map⁻¹(M)` for a matching: the copy chosen by [`LayeredInstance::lift_level`]
/// takes `r`'s hospital.
pub fn lift_matching(layered: &LayeredInstance, m_s: &Matching, m: &Matching) -> Matching {
    let mut out = Matching::empty(layered.instance().num_residents());
    for (r, h) in m.pairs() {
        out.assign(layered.copy(r, layered.lift_level(m_s, r)), Some(h));
    }
    out
}

/// `map⁻¹(ρ, M_s)`: every resident replaced by its lifted copy. Labels on
/// the result are recomputed in `G_s` against `M_s`, with each hospital
/// comparing the rival copy to the adjacent current copy on the structure.
pub fn map_up(layered: &LayeredInstance, m_s: &Matching, rho: &Structure) -> Structure {
    let level = |r: usize| layered.lift_level(m_s, r);
    let lift_vertex = |v: Vertex| match v {
        Vertex::Resident(r) => Vertex::Resident(layered.copy(r, level(r))),
        h => h,
    };
    let mut lifted = Structure {
        kind: rho.kind,
        vertices: rho.vertices.iter().copied().map(lift_vertex).collect(),
        edges: rho
            .edges
            .iter()
            .map(|e| AltEdge { resident: layered.copy(e.resident, level(e.resident)), label: None, ..*e })
            .collect(),
    };
    let g = layered.instance();
    for slot in lifted.hospital_slots() {
        let Some(i) = slot.rival else { continue };
        let copy = lifted.edges[i].resident;
        let partner = slot.current.map(|c| lifted.edges[c].resident);
        lifted.edges[i].label = Some(Label::new(
            resident_vote(g, copy, Some(slot.hospital), m_s.hospital_of(copy)),
            hospital_pref_vote(g, slot.hospital, Some(copy), partner),
        ));
    }
    lifted
}

/// A lower copy of a rival resident evaluated against the hospital it
/// reaches on a lifted structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerCopyLabel {
    pub copy: usize,
    pub hospital: usize,
    pub label: Label,
}

/// For every sub-path `r_a^j, h, r_b` of a lifted structure, the labels of
/// `(r_a^j', h)` for all `j' < j`, computed against `M_s` with `r_b` as the
/// displaced resident. Edges already on the structure are skipped.
pub fn lower_copy_labels(layered: &LayeredInstance, m_s: &Matching, rho_s: &Structure) -> Vec<LowerCopyLabel> {
    let g = layered.instance();
    let mut out = Vec::new();
    for slot in rho_s.hospital_slots() {
        let (Some(a), Some(b)) = (slot.rival, slot.current) else { continue };
        let (r_a, j_a) = layered.origin(rho_s.edges[a].resident);
        let partner = rho_s.edges[b].resident;
        for j in 0..j_a {
            let copy = layered.copy(r_a, j);
            if rho_s.edges.iter().any(|e| e.resident == copy && e.hospital == slot.hospital) {
                continue;
            }
            out.push(LowerCopyLabel {
                copy,
                hospital: slot.hospital,
                label: Label::new(
                    resident_vote(g, copy, Some(slot.hospital), m_s.hospital_of(copy)),
                    hospital_pref_vote(g, slot.hospital, Some(copy), Some(partner)),
                ),
            });
        }
    }
    out
}

/// The level change at one hospital of a lifted structure: the rival
/// resident arrives at `rival_level`, the current one leaves from
/// `current_level`. `label` is the label of the rival edge in `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStep {
    pub hospital: usize,
    pub rival: usize,
    pub rival_level: usize,
    pub current: usize,
    pub current_level: usize,
    pub label: Label,
}

/// Level steps at every hospital of `rho` (a structure in `G`) where both
/// a rival and a current edge meet.
pub fn level_steps(layered: &LayeredInstance, m_s: &Matching, rho: &Structure) -> Vec<LevelStep> {
    rho.hospital_slots()
        .into_iter()
        .filter_map(|slot| {
            let (a, b) = (&rho.edges[slot.rival?], &rho.edges[slot.current?]);
            Some(LevelStep {
                hospital: slot.hospital,
                rival: a.resident,
                rival_level: layered.lift_level(m_s, a.resident),
                current: b.resident,
                current_level: layered.lift_level(m_s, b.resident),
                label: a.label.expect("rival edges carry labels"),
            })
        })
        .collect()
}

/// Whether every edge of a lifted structure is an edge of `G_s` on the
/// expected side of `M_s`.
pub fn lift_is_consistent(layered: &LayeredInstance, m_s: &Matching, rho_s: &Structure) -> bool {
    let g = layered.instance();
    rho_s.edges.iter().all(|e| {
        !layered.is_dummy(e.hospital)
            && g.is_edge(e.resident, e.hospital)
            && (m_s.hospital_of(e.resident) == Some(e.hospital)) == (e.side == Side::Current)
    })
}
