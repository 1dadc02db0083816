//! Independent reference implementations used as test oracles. Nothing
//! here calls into the popularity or stable modules.

#![allow(dead_code)]

use lcsm_core::model::{Instance, Matching};

/// Literal feasibility: every class count within its quota.
pub fn set_fits(inst: &Instance, h: usize, set: &[usize]) -> bool {
    inst.class_tree(h).classes().iter().all(|c| set.iter().filter(|r| c.members.contains(r)).count() as u32 <= c.quota)
}

pub fn matching_fits(inst: &Instance, m: &Matching) -> bool {
    (0..inst.num_hospitals()).all(|h| set_fits(inst, h, &m.residents_of(h)))
        && m.pairs().all(|(r, h)| inst.is_edge(r, h))
}

/// Blocking pairs by the definition: try adding `r` directly, then every
/// single displacement of a worse resident.
pub fn literal_blocking_pairs(inst: &Instance, m: &Matching) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..inst.num_residents() {
        for &h in inst.resident_prefs(r) {
            if m.hospital_of(r) == Some(h) {
                continue;
            }
            let improves = match m.hospital_of(r) {
                None => true,
                Some(cur) => inst.resident_rank(r, h) < inst.resident_rank(r, cur),
            };
            if !improves {
                continue;
            }
            let set = m.residents_of(h);
            let mut plus = set.clone();
            plus.push(r);
            let ok = set_fits(inst, h, &plus)
                || set.iter().any(|&w| {
                    inst.hospital_rank(h, r) < inst.hospital_rank(h, w) && {
                        let mut swapped: Vec<usize> = set.iter().copied().filter(|&x| x != w).collect();
                        swapped.push(r);
                        set_fits(inst, h, &swapped)
                    }
                });
            if ok {
                out.push((r, h));
            }
        }
    }
    out.sort();
    out
}

fn cmp_vote(a: Option<usize>, b: Option<usize>) -> i64 {
    match (a, b) {
        (None, None) => 0,
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        (Some(x), Some(y)) => (y as i64 - x as i64).signum(),
    }
}

/// Per-hospital pairing: repeatedly take the deepest class (earliest in
/// the tree's listing on ties) holding unpaired residents of both sides,
/// and pair them best with best.
pub fn reference_pairs(inst: &Instance, h: usize, a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    let rank = |r: &usize| inst.hospital_rank(h, *r).unwrap();
    let mut y: Vec<usize> = a.iter().copied().filter(|r| !b.contains(r)).collect();
    let mut yp: Vec<usize> = b.iter().copied().filter(|r| !a.contains(r)).collect();
    y.sort_by_key(rank);
    yp.sort_by_key(rank);
    let classes = inst.class_tree(h).classes();
    let mut pairs = Vec::new();
    loop {
        let mut best: Option<usize> = None;
        for (i, c) in classes.iter().enumerate() {
            let both = y.iter().any(|r| c.members.contains(r)) && yp.iter().any(|r| c.members.contains(r));
            if both && best.is_none_or(|b| classes[b].depth < c.depth) {
                best = Some(i);
            }
        }
        let Some(c) = best else { break };
        let xs: Vec<usize> = y.iter().copied().filter(|r| classes[c].members.contains(r)).collect();
        let xps: Vec<usize> = yp.iter().copied().filter(|r| classes[c].members.contains(r)).collect();
        for (&p, &q) in xs.iter().zip(&xps) {
            pairs.push((p, q));
            y.retain(|&v| v != p);
            yp.retain(|&v| v != q);
        }
    }
    pairs
}

/// Δ(M', M) evaluated vertex by vertex.
pub fn reference_delta(inst: &Instance, m: &Matching, mp: &Matching) -> i64 {
    let mut total = 0;
    for r in 0..inst.num_residents() {
        let rank = |h: Option<usize>| h.map(|h| inst.resident_rank(r, h).unwrap());
        total += cmp_vote(rank(mp.hospital_of(r)), rank(m.hospital_of(r)));
    }
    for h in 0..inst.num_hospitals() {
        let a = m.residents_of(h);
        let b = mp.residents_of(h);
        total += b.len() as i64 - a.len() as i64;
        for (p, q) in reference_pairs(inst, h, &a, &b) {
            total += cmp_vote(inst.hospital_rank(h, q), inst.hospital_rank(h, p));
        }
    }
    total
}

/// Every feasible matching, by plain recursion over all assignments.
pub fn all_matchings(inst: &Instance) -> Vec<Matching> {
    fn go(inst: &Instance, r: usize, cur: &mut Matching, out: &mut Vec<Matching>) {
        if r == inst.num_residents() {
            if matching_fits(inst, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for h in inst.resident_prefs(r).iter().copied().map(Some).chain([None]) {
            cur.assign(r, h);
            go(inst, r + 1, cur, out);
        }
        cur.assign(r, None);
    }
    let mut out = Vec::new();
    go(inst, 0, &mut Matching::empty(inst.num_residents()), &mut out);
    out
}

pub fn reference_is_popular(inst: &Instance, all: &[Matching], m: &Matching) -> bool {
    all.iter().all(|x| reference_delta(inst, m, x) <= 0)
}
