//! The two end-to-end algorithms. Both run deferred acceptance on a layered
//! instance and project the result back: with two levels for a largest
//! popular matching (`O(mn)` overall), with `|R|` levels for a matching
//! popular among maximum-cardinality ones (`O(mn²)`).

use crate::error::Result;
use crate::model::{Instance, Matching};
use crate::reduction::{build_gs, map_down};
use crate::stable::solve_stable;

fn layered_pipeline(instance: &Instance, s: usize) -> Result<Matching> {
    let layered = build_gs(instance, s)?;
    let m_s = solve_stable(layered.instance());
    map_down(&layered, &m_s)
}

/// A popular matching of maximum size.
///
/// Fails only if an identifier contains `#`, which is reserved for level
/// copies, or if the layered stable matching breaks its invariants.
pub fn max_cardinality_popular(instance: &Instance) -> Result<Matching> {
    if instance.num_residents() < 2 {
        // Two levels need two residents; with one the stable matching is already largest.
        return Ok(solve_stable(instance));
    }
    layered_pipeline(instance, 2)
}

/// A maximum-cardinality matching that no other maximum-cardinality
/// matching beats.
///
/// Errors as [`max_cardinality_popular`].
pub fn popular_among_max_cardinality(instance: &Instance) -> Result<Matching> {
    if instance.num_residents() <= 1 {
        return Ok(solve_stable(instance));
    }
    layered_pipeline(instance, instance.num_residents())
}
