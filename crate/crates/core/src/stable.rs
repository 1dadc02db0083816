//! Resident-proposing deferred acceptance under laminar class quotas.

use std::collections::{BTreeSet, VecDeque};

use crate::model::{Instance, Matching};

/// Outcome of a deferred-acceptance run.
#[derive(Debug, Clone)]
pub struct StableRun {
    pub matching: Matching,
    pub proposals: usize,
}

/// A stable matching of `instance`. Deterministic for a fixed instance.
pub fn solve_stable(instance: &Instance) -> Matching {
    solve_stable_traced(instance).matching
}

/// Same as [`solve_stable`], also reporting how many proposals were made.
///
/// Free residents wait in a FIFO queue seeded in index order and propose
/// down their lists. A hospital takes a proposer outright when the enlarged
/// set stays feasible. Otherwise it looks at the deepest saturated class
/// containing the proposer and keeps the better of the proposer and that
/// class's least preferred member.
pub fn solve_stable_traced(instance: &Instance) -> StableRun {
    let n = instance.num_residents();
    let mut next = vec![0usize; n];
    let mut matching = Matching::empty(n);
    // Per hospital, per class: matched members keyed by the hospital's rank.
    let mut held: Vec<Vec<BTreeSet<(usize, usize)>>> =
        (0..instance.num_hospitals()).map(|h| vec![BTreeSet::new(); instance.class_tree(h).len()]).collect();
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut proposals = 0;

    while let Some(r) = queue.pop_front() {
        let prefs = instance.resident_prefs(r);
        let Some(&h) = prefs.get(next[r]) else {
            continue;
        };
        next[r] += 1;
        proposals += 1;

        let tree = instance.class_tree(h);
        let rank = instance.hospital_rank(h, r).expect("mutual acceptability");
        let sets = &mut held[h];
        let saturated = tree.chain(r).find(|&c| sets[c].len() as u32 >= tree.class(c).quota);
        let rejected = match saturated {
            None => None,
            Some(c) => match sets[c].last().copied() {
                Some((worst_rank, worst)) if rank < worst_rank => Some(worst),
                _ => Some(r),
            },
        };
        if rejected != Some(r) {
            for c in tree.chain(r) {
                sets[c].insert((rank, r));
            }
            matching.assign(r, Some(h));
        }
        if let Some(w) = rejected {
            if w != r {
                let w_rank = instance.hospital_rank(h, w).unwrap();
                for c in tree.chain(w) {
                    sets[c].remove(&(w_rank, w));
                }
                matching.assign(w, None);
            }
            queue.push_back(w);
        }
    }

    StableRun { matching, proposals }
}
