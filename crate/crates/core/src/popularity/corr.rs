use std::collections::BTreeMap;

use crate::error::Result;
use crate::model::{ensure_feasible, Instance, Matching};

/// How to choose among equally deep candidate classes in the correspondence
/// loop. Any choice is legal; the default is the one used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// First class in DFS preorder of the tree.
    #[default]
    Preorder,
    /// Last class in DFS preorder.
    ReversePreorder,
}

/// The pairing of one hospital's residents in `M(h) ⊕ M'(h)`.
///
/// Every resident of the symmetric difference has an entry; `None` means
/// no partner from the other side was found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HospitalCorr {
    pub partner: BTreeMap<usize, Option<usize>>,
}

impl HospitalCorr {
    pub fn get(&self, r: usize) -> Option<usize> {
        self.partner.get(&r).copied().flatten()
    }

    pub fn paired(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner.iter().filter_map(|(&r, &p)| p.map(|p| (r, p)))
    }
}

/// Correspondences for every hospital.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrMap {
    pub hospitals: Vec<HospitalCorr>,
}

impl CorrMap {
    pub fn get(&self, h: usize, r: usize) -> Option<usize> {
        self.hospitals[h].get(r)
    }
}

/// Pairs residents of `M(h) \ M'(h)` with residents of `M'(h) \ M(h)` class
/// by class, always working in a deepest class that still has unpaired
/// residents from both sides and matching them up rank for rank.
pub fn find_correspondence(instance: &Instance, h: usize, m: &Matching, m_prime: &Matching) -> Result<HospitalCorr> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    Ok(correspond(instance, h, &m.residents_of(h), &m_prime.residents_of(h), TieBreak::default()))
}

/// Correspondences for all hospitals at once.
pub fn correspondence(instance: &Instance, m: &Matching, m_prime: &Matching, tie_break: TieBreak) -> Result<CorrMap> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    let a = m.hospital_sets(instance.num_hospitals());
    let b = m_prime.hospital_sets(instance.num_hospitals());
    Ok(correspond_all(instance, &a, &b, tie_break))
}

pub(crate) fn correspond_all(instance: &Instance, a: &[Vec<usize>], b: &[Vec<usize>], tie_break: TieBreak) -> CorrMap {
    CorrMap {
        hospitals: (0..instance.num_hospitals()).map(|h| correspond(instance, h, &a[h], &b[h], tie_break)).collect(),
    }
}

pub(crate) fn correspond(
    instance: &Instance,
    h: usize,
    current: &[usize],
    rival: &[usize],
    tie_break: TieBreak,
) -> HospitalCorr {
    let tree = instance.class_tree(h);
    let rank = |r: &usize| instance.hospital_rank(h, *r).expect("matched residents are acceptable");
    let mut y: Vec<usize> = current.iter().copied().filter(|r| !rival.contains(r)).collect();
    let mut y_prime: Vec<usize> = rival.iter().copied().filter(|r| !current.contains(r)).collect();
    y.sort_by_key(rank);
    y_prime.sort_by_key(rank);

    let mut corr = HospitalCorr::default();
    for &r in y.iter().chain(&y_prime) {
        corr.partner.insert(r, None);
    }

    while !y.is_empty() && !y_prime.is_empty() {
        let xs = tree.counts(y.iter().copied()).expect("feasible");
        let xs_prime = tree.counts(y_prime.iter().copied()).expect("feasible");
        let candidates = (0..tree.len()).filter(|&c| xs[c] > 0 && xs_prime[c] > 0);
        let chosen = match tie_break {
            TieBreak::Preorder => candidates.max_by_key(|&c| (tree.class(c).depth, std::cmp::Reverse(c))),
            TieBreak::ReversePreorder => candidates.max_by_key(|&c| (tree.class(c).depth, c)),
        }
        .expect("the root holds both sides");

        let in_class = |r: &usize| tree.contains(chosen, *r);
        let x: Vec<usize> = y.iter().copied().filter(in_class).collect();
        let x_prime: Vec<usize> = y_prime.iter().copied().filter(in_class).collect();
        for (&r, &rp) in x.iter().zip(&x_prime) {
            corr.partner.insert(r, Some(rp));
            corr.partner.insert(rp, Some(r));
            y.retain(|&v| v != r);
            y_prime.retain(|&v| v != rp);
        }
    }
    corr
}
