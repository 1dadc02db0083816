//! Votes, Δ, the hospital-side correspondence, and the path/cycle
//! characterization of popularity.

mod corr;
mod decompose;
mod votes;

pub use corr::{correspondence, find_correspondence, CorrMap, HospitalCorr, TieBreak};
pub use decompose::{
    apply_structure, decompose, reduced_decomposition, rewritten_delta, AltEdge, HospitalSlot, Label,
    LabeledDecomposition, Side, Structure, StructureKind,
};
pub use votes::{
    delta, delta_value, delta_with, hospital_vote, hospital_vote_positional, vote, HospitalTally, Vertex, VoteTally,
};

pub(crate) use votes::{delta_fast, hospital_pref_vote, resident_vote, tally_unchecked};

use crate::error::Result;
use crate::model::{ensure_feasible, Instance, Matching};

/// Why a reduced structure certifies that `M'` beats `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// An alternating cycle with a `(1, 1)` edge.
    Cycle11,
    /// A path with a `(1, 1)` edge and an end reached by an `M'` edge.
    OpenPath11,
    /// A path whose two end edges are in `M` and with at least two `(1, 1)` edges.
    MatchedPath2x11,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Cycle11 => "cycle-with-(1,1)",
            ViolationKind::OpenPath11 => "path-with-(1,1)-and-free-end",
            ViolationKind::MatchedPath2x11 => "matched-path-with-two-(1,1)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub structure: Structure,
}

/// Classifies one structure of a reduced decomposition.
pub fn classify(structure: &Structure) -> Option<ViolationKind> {
    let positive = structure.positive_edges();
    if positive == 0 {
        return None;
    }
    if structure.is_cycle() {
        Some(ViolationKind::Cycle11)
    } else if structure.has_rival_end() {
        Some(ViolationKind::OpenPath11)
    } else if positive >= 2 {
        Some(ViolationKind::MatchedPath2x11)
    } else {
        None
    }
}

/// Scans the reduced decomposition of `M ⊕ M'` for any of the three
/// certificate shapes. An empty result for every `M'` implies `M` is
/// popular. The converse can fail: a path whose two ends sit at the same
/// hospital may be reported even though swapping along it re-pairs that
/// hospital's residents and gains nothing (`fixtures/charc_gap.lcsm`).
pub fn check_characterization(instance: &Instance, m: &Matching, m_prime: &Matching) -> Result<Vec<Violation>> {
    let reduced = reduced_decomposition(&decompose(instance, m, m_prime)?);
    Ok(reduced
        .structures
        .into_iter()
        .filter_map(|s| classify(&s).map(|kind| Violation { kind, structure: s }))
        .collect())
}

/// Whether `M` is at least as good as `M'` in a head-to-head vote.
pub fn not_beaten_by(instance: &Instance, m: &Matching, m_prime: &Matching) -> Result<bool> {
    ensure_feasible(instance, m, "M")?;
    ensure_feasible(instance, m_prime, "M'")?;
    Ok(tally_unchecked(instance, m, m_prime, TieBreak::default()).delta <= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sample, sample_m, sample_m_double_prime, sample_m_prime};
    use crate::model::RawInstance;

    #[test]
    fn sample_has_no_certificate_against_m() {
        let inst = sample();
        let m = sample_m(&inst);
        assert!(check_characterization(&inst, &m, &sample_m_prime(&inst)).unwrap().is_empty());
        assert!(check_characterization(&inst, &m, &sample_m_double_prime(&inst)).unwrap().is_empty());
    }

    #[test]
    fn sample_reverse_direction_is_certified() {
        // M beats M', so M' must show a certificate against M.
        let inst = sample();
        let m = sample_m(&inst);
        let mp = sample_m_prime(&inst);
        assert_eq!(delta_value(&inst, &mp, &m).unwrap(), 1);
        assert!(!check_characterization(&inst, &mp, &m).unwrap().is_empty());
    }

    #[test]
    fn unmatched_resident_with_free_seat() {
        // a is left out although h has room: a one-edge rival path labelled (1, 1).
        let inst = Instance::validate(&RawInstance::new().resident("a", &["h"]).hospital("h", 1, &["a"])).unwrap();
        let empty = Matching::empty(1);
        let full = Matching::from_pairs(&inst, &[(0, 0)]).unwrap();
        let v = check_characterization(&inst, &empty, &full).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::OpenPath11);
        assert!(!not_beaten_by(&inst, &empty, &full).unwrap());
        assert!(not_beaten_by(&inst, &full, &empty).unwrap());
    }

    #[test]
    fn swapped_square_is_a_tie() {
        let raw = RawInstance::new()
            .resident("a", &["y", "x"])
            .resident("b", &["y", "x"])
            .hospital("x", 1, &["a", "b"])
            .hospital("y", 1, &["a", "b"]);
        let inst = Instance::validate(&raw).unwrap();
        let m = Matching::from_names(&inst, &[("a", "x"), ("b", "y")]).unwrap();
        let mp = Matching::from_names(&inst, &[("a", "y"), ("b", "x")]).unwrap();
        assert_eq!(delta_value(&inst, &m, &mp).unwrap(), 0);
        // One (1,1) edge on a path with M edges at both ends: no certificate.
        assert!(check_characterization(&inst, &m, &mp).unwrap().is_empty());
    }
}
