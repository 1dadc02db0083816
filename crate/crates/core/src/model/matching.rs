use crate::error::{Error, Result};

use super::Instance;

/// A partial assignment of residents to hospitals, indexed by resident.
///
/// The derived ordering compares assignments lexicographically, which is the
/// order the brute-force enumerator visits them in only when hospitals are
/// numbered in preference order; callers needing enumeration order should
/// keep the enumeration index instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    assignment: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(num_residents: usize) -> Self {
        Matching { assignment: vec![None; num_residents] }
    }

    /// Wraps a raw assignment without checking it against any instance.
    pub fn from_assignment(assignment: Vec<Option<usize>>) -> Self {
        Matching { assignment }
    }

    /// Builds a matching from (resident, hospital) index pairs, rejecting
    /// non-edges and residents assigned twice. Feasibility is not checked.
    pub fn from_pairs(instance: &Instance, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(instance.num_residents());
        for &(r, h) in pairs {
            if r >= instance.num_residents() || h >= instance.num_hospitals() {
                return Err(Error::InfeasibleInput(format!("pair ({r}, {h}) out of range")));
            }
            if !instance.is_edge(r, h) {
                return Err(Error::InfeasibleInput(format!(
                    "({}, {}) is not an edge",
                    instance.resident_name(r),
                    instance.hospital_name(h)
                )));
            }
            if m.assignment[r].is_some() {
                return Err(Error::InfeasibleInput(format!("{} is matched twice", instance.resident_name(r))));
            }
            m.assignment[r] = Some(h);
        }
        Ok(m)
    }

    /// Same as [`Matching::from_pairs`] but with identifiers.
    pub fn from_names(instance: &Instance, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (r, h) in pairs {
            let ri = instance
                .resident_id(r)
                .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown resident {r}") })?;
            let hi = instance
                .hospital_id(h)
                .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown hospital {h}") })?;
            idx.push((ri, hi));
        }
        Matching::from_pairs(instance, &idx)
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn num_residents(&self) -> usize {
        self.assignment.len()
    }

    pub fn hospital_of(&self, r: usize) -> Option<usize> {
        self.assignment[r]
    }

    pub fn assign(&mut self, r: usize, h: Option<usize>) {
        self.assignment[r] = h;
    }

    /// Number of matched residents.
    pub fn len(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().enumerate().filter_map(|(r, h)| h.map(|h| (r, h)))
    }

    pub fn contains(&self, r: usize, h: usize) -> bool {
        self.assignment.get(r).copied().flatten() == Some(h)
    }

    /// M(h) for every hospital, residents in increasing index order.
    pub fn hospital_sets(&self, num_hospitals: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); num_hospitals];
        for (r, h) in self.pairs() {
            sets[h].push(r);
        }
        sets
    }

    /// M(h) for one hospital.
    pub fn residents_of(&self, h: usize) -> Vec<usize> {
        self.pairs().filter(|&(_, x)| x == h).map(|(r, _)| r).collect()
    }
}
