//! The layered instance `G_s` with its invariants and the maps between `G`
//! and `G_s`, plus the student–project allocation transform.

mod layered;
mod spa;

pub use layered::{
    build_gs, check_invariants, copy_name, dummy_name, level_steps, lift_is_consistent, lift_matching,
    lower_copy_labels, map_down, map_up, Invariant, InvariantIssue, LayeredInstance, LevelStep, LowerCopyLabel,
};
pub use spa::{parse_spa, pcsm_to_spa, root_project_name, write_spa, SpaInstance, SpaProject};
