use std::cmp::Ordering;

use super::corr::{correspond, correspond_all, HospitalCorr, TieBreak};
use super::decompose::{decompose_with, rewritten_delta};
use crate::error::{Error, Result};
use crate::model::{ensure_feasible, Instance, Matching};

/// A resident or a hospital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Resident(usize),
    Hospital(usize),
}

impl Vertex {
    pub fn name(self, instance: &Instance) -> &str {
        match self {
            Vertex::Resident(r) => instance.resident_name(r),
            Vertex::Hospital(h) => instance.hospital_name(h),
        }
    }
}

/// +1 if `u` prefers `x` to `y`, -1 if the reverse, 0 if they are equal.
/// `None` stands for being unmatched, which every neighbour beats.
pub fn vote(instance: &Instance, u: Vertex, x: Option<usize>, y: Option<usize>) -> Result<i8> {
    let rank = |v: usize| match u {
        Vertex::Resident(r) => instance.resident_rank(r, v),
        Vertex::Hospital(h) => instance.hospital_rank(h, v),
    };
    let neighbour_name = |v: usize| match u {
        Vertex::Resident(_) => instance.hospital_name(v).to_string(),
        Vertex::Hospital(_) => instance.resident_name(v).to_string(),
    };
    let resolve = |v: Option<usize>| -> Result<Option<usize>> {
        match v {
            None => Ok(None),
            Some(v) => rank(v).map(Some).ok_or_else(|| Error::NotANeighbor {
                vertex: u.name(instance).to_string(),
                candidate: neighbour_name(v),
            }),
        }
    };
    Ok(compare_ranks(resolve(x)?, resolve(y)?))
}

fn compare_ranks(x: Option<usize>, y: Option<usize>) -> i8 {
    match (x, y) {
        (None, None) => 0,
        (Some(_), None) => 1,
        (None, Some(_)) => -1,
        (Some(a), Some(b)) => match a.cmp(&b) {
            Ordering::Less => 1,
            Ordering::Greater => -1,
            Ordering::Equal => 0,
        },
    }
}

pub(crate) fn resident_vote(instance: &Instance, r: usize, x: Option<usize>, y: Option<usize>) -> i8 {
    compare_ranks(
        x.map(|h| instance.resident_rank(r, h).expect("edge")),
        y.map(|h| instance.resident_rank(r, h).expect("edge")),
    )
}

pub(crate) fn hospital_pref_vote(instance: &Instance, h: usize, x: Option<usize>, y: Option<usize>) -> i8 {
    compare_ranks(
        x.map(|r| instance.hospital_rank(h, r).expect("edge")),
        y.map(|r| instance.hospital_rank(h, r).expect("edge")),
    )
}

/// One hospital's share of a tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HospitalTally {
    pub vote: i64,
    /// Residents common to both matchings, whose votes go unused.
    pub common: u32,
    /// Positions left empty in both matchings.
    pub vacant: u32,
}

/// Per-vertex votes of `M'` against `M` and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    pub per_resident: Vec<i8>,
    pub per_hospital: Vec<HospitalTally>,
    /// Δ(M', M).
    pub delta: i64,
}

/// V_h: the size difference plus the votes over corresponding pairs.
pub fn hospital_vote(
    instance: &Instance,
    h: usize,
    m: &Matching,
    m_prime: &Matching,
    corr: &HospitalCorr,
) -> Result<i64> {
    let a = m.residents_of(h);
    let b = m_prime.residents_of(h);
    let mismatch = |msg: String| Err(Error::CorrMismatch(msg));
    let diff: Vec<usize> =
        a.iter().filter(|r| !b.contains(r)).chain(b.iter().filter(|r| !a.contains(r))).copied().collect();
    if corr.partner.len() != diff.len() || diff.iter().any(|r| !corr.partner.contains_key(r)) {
        return mismatch(format!("correspondence for {} does not cover M(h) ⊕ M'(h)", instance.hospital_name(h)));
    }
    for (r, p) in corr.paired() {
        let r_in_a = a.contains(&r);
        let p_in_a = a.contains(&p);
        if r_in_a == p_in_a || corr.get(p) != Some(r) {
            return mismatch(format!(
                "{} and {} are not a cross pair",
                instance.resident_name(r),
                instance.resident_name(p)
            ));
        }
    }
    Ok(hospital_vote_raw(instance, h, &a, &b, corr))
}

fn hospital_vote_raw(instance: &Instance, h: usize, a: &[usize], b: &[usize], corr: &HospitalCorr) -> i64 {
    let mut v = b.len() as i64 - a.len() as i64;
    for &r in b.iter().filter(|r| !a.contains(r)) {
        if let Some(p) = corr.get(r) {
            v += hospital_pref_vote(instance, h, Some(r), Some(p)) as i64;
        }
    }
    v
}

/// The naive scheme that ignores classes: the k-th best resident of
/// `M(h) \ M'(h)` is compared with the k-th best of `M'(h) \ M(h)`, and
/// leftovers on the larger side vote by presence.
pub fn hospital_vote_positional(instance: &Instance, h: usize, m: &Matching, m_prime: &Matching) -> Result<i64> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    let a = m.residents_of(h);
    let b = m_prime.residents_of(h);
    let rank = |r: &usize| instance.hospital_rank(h, *r).unwrap();
    let mut only_a: Vec<usize> = a.iter().copied().filter(|r| !b.contains(r)).collect();
    let mut only_b: Vec<usize> = b.iter().copied().filter(|r| !a.contains(r)).collect();
    only_a.sort_by_key(rank);
    only_b.sort_by_key(rank);
    let paired: i64 =
        only_b.iter().zip(&only_a).map(|(&x, &y)| hospital_pref_vote(instance, h, Some(x), Some(y)) as i64).sum();
    // Unmatched leftovers: one presence vote each.
    Ok(paired + only_b.len() as i64 - only_a.len() as i64)
}

/// Δ(M', M) with the full per-vertex breakdown.
pub fn delta(instance: &Instance, m: &Matching, m_prime: &Matching) -> Result<VoteTally> {
    delta_with(instance, m, m_prime, TieBreak::default())
}

pub fn delta_with(instance: &Instance, m: &Matching, m_prime: &Matching, tie_break: TieBreak) -> Result<VoteTally> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    Ok(tally_unchecked(instance, m, m_prime, tie_break))
}

pub(crate) fn tally_unchecked(instance: &Instance, m: &Matching, m_prime: &Matching, tie_break: TieBreak) -> VoteTally {
    let a = m.hospital_sets(instance.num_hospitals());
    let b = m_prime.hospital_sets(instance.num_hospitals());
    let corr = correspond_all(instance, &a, &b, tie_break);

    let per_resident: Vec<i8> = (0..instance.num_residents())
        .map(|r| resident_vote(instance, r, m_prime.hospital_of(r), m.hospital_of(r)))
        .collect();
    let per_hospital: Vec<HospitalTally> = (0..instance.num_hospitals())
        .map(|h| {
            let common = a[h].iter().filter(|r| b[h].contains(r)).count() as u32;
            let vacant = instance.capacity(h) - a[h].len().max(b[h].len()) as u32;
            HospitalTally { vote: hospital_vote_raw(instance, h, &a[h], &b[h], &corr.hospitals[h]), common, vacant }
        })
        .collect();
    let delta = per_resident.iter().map(|&v| v as i64).sum::<i64>() + per_hospital.iter().map(|t| t.vote).sum::<i64>();

    debug_assert_eq!(
        delta,
        rewritten_delta(&decompose_with(instance, m, m_prime, &corr)),
        "direct vote sum disagrees with the path/cycle rewrite"
    );
    VoteTally { per_resident, per_hospital, delta }
}

/// Δ(M', M) without building a tally; hospitals untouched by the
/// difference are skipped. Both matchings must be feasible.
pub(crate) fn delta_fast(instance: &Instance, m: &Matching, m_prime: &Matching) -> i64 {
    let mut total = 0i64;
    let mut dirty: Vec<usize> = Vec::new();
    for r in 0..instance.num_residents() {
        let (a, b) = (m.hospital_of(r), m_prime.hospital_of(r));
        if a != b {
            total += resident_vote(instance, r, b, a) as i64;
            dirty.extend(a);
            dirty.extend(b);
        }
    }
    dirty.sort_unstable();
    dirty.dedup();
    for h in dirty {
        let a = m.residents_of(h);
        let b = m_prime.residents_of(h);
        let corr = correspond(instance, h, &a, &b, TieBreak::default());
        total += hospital_vote_raw(instance, h, &a, &b, &corr);
    }
    total
}

/// Δ(M', M) only.
pub fn delta_value(instance: &Instance, m: &Matching, m_prime: &Matching) -> Result<i64> {
    Ok(delta(instance, m, m_prime)?.delta)
}
