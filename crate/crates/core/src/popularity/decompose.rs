use std::collections::HashMap;

use super::corr::{correspond_all, CorrMap, TieBreak};
use super::votes::{hospital_pref_vote, resident_vote, Vertex};
use crate::error::Result;
use crate::model::{ensure_feasible, Instance, Matching};

/// Which matching an edge of `M ⊕ M'` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// In `M \ M'`.
    Current,
    /// In `M' \ M`.
    Rival,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Current => Side::Rival,
            Side::Rival => Side::Current,
        }
    }
}

/// Votes attached to an `M' \ M` edge `(r, h)`: r's vote for `h` over
/// `M(r)`, and h's vote for `r` over its corresponding resident.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Label {
    pub resident: i8,
    pub hospital: i8,
}

impl Label {
    pub const fn new(resident: i8, hospital: i8) -> Self {
        Label { resident, hospital }
    }

    pub fn is_positive(self) -> bool {
        self.resident == 1 && self.hospital == 1
    }

    pub fn is_negative(self) -> bool {
        self.resident == -1 && self.hospital == -1
    }

    pub fn sum(self) -> i64 {
        self.resident as i64 + self.hospital as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AltEdge {
    pub resident: usize,
    pub hospital: usize,
    pub side: Side,
    /// Present exactly on rival edges.
    pub label: Option<Label>,
}

impl AltEdge {
    fn is_negative(&self) -> bool {
        self.label.is_some_and(Label::is_negative)
    }

    fn is_positive(&self) -> bool {
        self.label.is_some_and(Label::is_positive)
    }

    fn other_end(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Resident(_) => Vertex::Hospital(self.hospital),
            Vertex::Hospital(_) => Vertex::Resident(self.resident),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Path,
    Cycle,
}

/// An alternating path or cycle.
///
/// `vertices[i]` and `vertices[i + 1]` are the ends of `edges[i]`; for a
/// cycle the last edge wraps around to `vertices[0]`, which is not repeated.
/// A hospital may occur at several positions, and each position is a
/// separate occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub kind: StructureKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<AltEdge>,
}

impl Structure {
    pub(crate) fn from_edges(kind: StructureKind, start: Vertex, edges: Vec<AltEdge>) -> Structure {
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        let mut v = start;
        vertices.push(v);
        for e in &edges {
            v = e.other_end(v);
            vertices.push(v);
        }
        if kind == StructureKind::Cycle {
            vertices.pop();
        }
        Structure { kind, vertices, edges }
    }

    pub fn is_cycle(&self) -> bool {
        self.kind == StructureKind::Cycle
    }

    /// Path endpoints whose edge on the path is an `M` edge.
    pub fn current_endpoints(&self) -> Vec<Vertex> {
        if self.is_cycle() || self.edges.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        if self.edges[0].side == Side::Current {
            out.push(self.vertices[0]);
        }
        if self.edges[self.edges.len() - 1].side == Side::Current {
            out.push(*self.vertices.last().unwrap());
        }
        out
    }

    /// Whether one end of this path is an `M'` edge, i.e. the path starts at
    /// a resident unmatched in `M` or at a free slot of a hospital.
    pub fn has_rival_end(&self) -> bool {
        !self.is_cycle()
            && !self.edges.is_empty()
            && (self.edges[0].side == Side::Rival || self.edges[self.edges.len() - 1].side == Side::Rival)
    }

    pub fn positive_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.is_positive()).count()
    }

    pub fn negative_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.is_negative()).count()
    }

    /// Sum of both label components over the rival edges.
    pub fn label_total(&self) -> i64 {
        self.edges.iter().filter_map(|e| e.label).map(Label::sum).sum()
    }

    /// Every hospital occurrence with the indices of its incident rival and
    /// current edges. A path end has only one of the two.
    pub fn hospital_slots(&self) -> Vec<HospitalSlot> {
        let n = self.edges.len();
        let mut out = Vec::new();
        for (p, v) in self.vertices.iter().enumerate() {
            let Vertex::Hospital(h) = *v else { continue };
            let before = if p > 0 {
                Some(p - 1)
            } else if self.is_cycle() {
                Some(n - 1)
            } else {
                None
            };
            let after = (p < n).then_some(p);
            let mut slot = HospitalSlot { hospital: h, rival: None, current: None };
            for i in before.into_iter().chain(after) {
                match self.edges[i].side {
                    Side::Rival => slot.rival = Some(i),
                    Side::Current => slot.current = Some(i),
                }
            }
            out.push(slot);
        }
        out
    }

    /// The vertex sequence with the first vertex repeated at the end for cycles.
    pub fn walk(&self) -> Vec<Vertex> {
        let mut v = self.vertices.clone();
        if self.is_cycle() {
            v.push(self.vertices[0]);
        }
        v
    }
}

/// One visit of a structure to a hospital.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HospitalSlot {
    pub hospital: usize,
    pub rival: Option<usize>,
    pub current: Option<usize>,
}

/// `M ⊕ M'` split into alternating paths and cycles, with labels on the
/// rival edges and the multiset of path endpoints reached by an `M` edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDecomposition {
    pub structures: Vec<Structure>,
    pub endpoints: Vec<Vertex>,
}

impl LabeledDecomposition {
    fn new(structures: Vec<Structure>) -> Self {
        let endpoints = structures.iter().flat_map(Structure::current_endpoints).collect();
        LabeledDecomposition { structures, endpoints }
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.structures.iter().map(|s| s.edges.len()).sum()
    }
}

/// Decomposes `M ⊕ M'` using the default correspondence.
pub fn decompose(instance: &Instance, m: &Matching, m_prime: &Matching) -> Result<LabeledDecomposition> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    let a = m.hospital_sets(instance.num_hospitals());
    let b = m_prime.hospital_sets(instance.num_hospitals());
    let corr = correspond_all(instance, &a, &b, TieBreak::default());
    Ok(decompose_with(instance, m, m_prime, &corr))
}

#[derive(Clone, Copy)]
enum Via {
    Resident,
    Hospital,
}

/// Grows a maximal structure from every not-yet-covered edge, in
/// (resident, hospital) order. Through a resident the walk switches to the
/// resident's edge in the other matching; through a hospital it moves to the
/// edge of the corresponding resident.
pub(crate) fn decompose_with(
    instance: &Instance,
    m: &Matching,
    m_prime: &Matching,
    corr: &CorrMap,
) -> LabeledDecomposition {
    let mut edges = Vec::new();
    for r in 0..instance.num_residents() {
        let (a, b) = (m.hospital_of(r), m_prime.hospital_of(r));
        if a == b {
            continue;
        }
        let mut here = Vec::with_capacity(2);
        if let Some(h) = a {
            here.push(AltEdge { resident: r, hospital: h, side: Side::Current, label: None });
        }
        if let Some(h) = b {
            let label = Label::new(
                resident_vote(instance, r, Some(h), a),
                hospital_pref_vote(instance, h, Some(r), corr.get(h, r)),
            );
            here.push(AltEdge { resident: r, hospital: h, side: Side::Rival, label: Some(label) });
        }
        here.sort_by_key(|e| e.hospital);
        edges.extend(here);
    }

    let by_side: HashMap<(usize, Side), usize> =
        edges.iter().enumerate().map(|(i, e)| ((e.resident, e.side), i)).collect();
    let by_pair: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, e)| ((e.resident, e.hospital), i)).collect();
    let step = |i: usize, via: Via| -> Option<usize> {
        let e = &edges[i];
        match via {
            Via::Resident => by_side.get(&(e.resident, e.side.other())).copied(),
            Via::Hospital => corr.get(e.hospital, e.resident).map(|p| by_pair[&(p, e.hospital)]),
        }
    };
    let walk = |seed: usize, first: Via| -> (Vec<usize>, bool) {
        let mut seq = Vec::new();
        let (mut cur, mut via) = (seed, first);
        loop {
            match step(cur, via) {
                None => return (seq, false),
                Some(n) if n == seed => return (seq, true),
                Some(n) => {
                    seq.push(n);
                    cur = n;
                    via = match via {
                        Via::Resident => Via::Hospital,
                        Via::Hospital => Via::Resident,
                    };
                }
            }
        }
    };

    let mut used = vec![false; edges.len()];
    let mut structures = Vec::new();
    for seed in 0..edges.len() {
        if used[seed] {
            continue;
        }
        let (forward, closed) = walk(seed, Via::Hospital);
        let mut order = Vec::new();
        if !closed {
            let (mut backward, _) = walk(seed, Via::Resident);
            backward.reverse();
            order.extend(backward);
        }
        order.push(seed);
        order.extend(forward);
        for &i in &order {
            used[i] = true;
        }

        let seq: Vec<AltEdge> = order.iter().map(|&i| edges[i]).collect();
        let start = if seq.len() == 1 || seq[0].resident != seq[1].resident {
            Vertex::Resident(seq[0].resident)
        } else {
            Vertex::Hospital(seq[0].hospital)
        };
        let kind = if closed { StructureKind::Cycle } else { StructureKind::Path };
        structures.push(Structure::from_edges(kind, start, seq));
    }
    LabeledDecomposition::new(structures)
}

/// Removes every `(-1, -1)` edge, splitting paths and opening cycles.
pub fn reduced_decomposition(dec: &LabeledDecomposition) -> LabeledDecomposition {
    let mut out = Vec::new();
    for s in &dec.structures {
        let n = s.edges.len();
        let cut: Vec<usize> = (0..n).filter(|&i| s.edges[i].is_negative()).collect();
        if cut.is_empty() {
            out.push(s.clone());
            continue;
        }
        let positions: Vec<usize> = match s.kind {
            StructureKind::Path => (0..n).collect(),
            StructureKind::Cycle => (1..=n).map(|k| (cut[0] + k) % n).collect(),
        };
        let mut segment: Vec<usize> = Vec::new();
        let mut flush = |segment: &mut Vec<usize>| {
            if let Some(&first) = segment.first() {
                let edges = segment.iter().map(|&i| s.edges[i]).collect();
                out.push(Structure::from_edges(StructureKind::Path, s.vertices[first], edges));
            }
            segment.clear();
        };
        for i in positions {
            if s.edges[i].is_negative() {
                flush(&mut segment);
            } else {
                segment.push(i);
            }
        }
        flush(&mut segment);
    }
    LabeledDecomposition::new(out)
}

/// Δ(M', M) recovered from a (reduced or full) decomposition: -1 for every
/// endpoint reached by an `M` edge plus every label component.
pub fn rewritten_delta(dec: &LabeledDecomposition) -> i64 {
    -(dec.endpoints.len() as i64) + dec.structures.iter().map(Structure::label_total).sum::<i64>()
}

/// `M ⊕ ρ`: at every occurrence on `ρ`, drop the `M` edge and add the `M'` edge.
pub fn apply_structure(m: &Matching, structure: &Structure) -> Matching {
    let mut out = m.clone();
    for e in structure.edges.iter().filter(|e| e.side == Side::Current) {
        if out.hospital_of(e.resident) == Some(e.hospital) {
            out.assign(e.resident, None);
        }
    }
    for e in structure.edges.iter().filter(|e| e.side == Side::Rival) {
        out.assign(e.resident, Some(e.hospital));
    }
    out
}
