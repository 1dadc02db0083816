//! Instances, matchings, feasibility under class quotas, and stability.

mod classes;
mod instance;
mod matching;

pub use classes::{Chain, Class, ClassTree, ROOT_CLASS};
pub use instance::{Instance, RawClass, RawInstance};
pub use matching::Matching;

use crate::error::{Error, Result};

/// Whether `set` respects every class quota of `h`, the root included.
pub fn is_feasible_set(instance: &Instance, h: usize, set: &[usize]) -> Result<bool> {
    let tree = instance.class_tree(h);
    match tree.counts(set.iter().copied()) {
        Some(counts) => Ok(tree.within_quotas(&counts)),
        None => {
            let r = set.iter().copied().find(|&r| tree.leaf_of(r).is_none()).unwrap_or_default();
            Err(Error::UnknownResident {
                resident: instance.resident_name(r).to_string(),
                hospital: instance.hospital_name(h).to_string(),
            })
        }
    }
}

/// Every matched pair is an edge and every M(h) is a feasible set.
pub fn is_feasible_matching(instance: &Instance, m: &Matching) -> bool {
    if m.num_residents() != instance.num_residents() {
        return false;
    }
    if m.pairs().any(|(r, h)| h >= instance.num_hospitals() || !instance.is_edge(r, h)) {
        return false;
    }
    m.hospital_sets(instance.num_hospitals())
        .iter()
        .enumerate()
        .all(|(h, set)| is_feasible_set(instance, h, set).unwrap_or(false))
}

pub(crate) fn ensure_feasible(instance: &Instance, m: &Matching, what: &str) -> Result<()> {
    if is_feasible_matching(instance, m) {
        Ok(())
    } else {
        Err(Error::InfeasibleInput(format!("{what} is not a feasible matching")))
    }
}

/// Whether `h` would take `r` given its current set `current`, either into a
/// free slot or by dropping someone it likes less. `counts` are the per-class
/// counts of `current`.
///
/// Classes containing `r` form a chain, so only the deepest saturated one
/// matters: displacing its least preferred member frees every saturated
/// ancestor as well.
pub(crate) fn would_accept(instance: &Instance, h: usize, current: &[usize], counts: &[u32], r: usize) -> bool {
    let tree = instance.class_tree(h);
    let Some(saturated) = tree.chain(r).find(|&c| counts[c] >= tree.class(c).quota) else {
        return true;
    };
    let worst =
        current.iter().copied().filter(|&x| tree.contains(saturated, x)).max_by_key(|&x| instance.hospital_rank(h, x));
    match worst {
        Some(w) => instance.hospital_prefers(h, r, w),
        None => false,
    }
}

/// All pairs blocking `m`, sorted by (resident, hospital).
pub fn blocking_pairs(instance: &Instance, m: &Matching) -> Result<Vec<(usize, usize)>> {
    ensure_feasible(instance, m, "matching")?;
    let sets = m.hospital_sets(instance.num_hospitals());
    let counts: Vec<Vec<u32>> = sets
        .iter()
        .enumerate()
        .map(|(h, s)| instance.class_tree(h).counts(s.iter().copied()).expect("feasible"))
        .collect();
    let mut out = Vec::new();
    for r in 0..instance.num_residents() {
        let current = m.hospital_of(r);
        for &h in instance.resident_prefs(r) {
            if Some(h) == current {
                break;
            }
            if would_accept(instance, h, &sets[h], &counts[h], r) {
                out.push((r, h));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_stable(instance: &Instance, m: &Matching) -> Result<bool> {
    Ok(blocking_pairs(instance, m)?.is_empty())
}
