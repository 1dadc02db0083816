//! Small hand-written instances shared by tests, examples and the CLI goldens.

use crate::model::{Instance, Matching, RawInstance};

/// Four residents, three hospitals; `h1` has capacity 2 and splits its list
/// into `{r1, r2}` and `{r3, r4}`, each with quota 1.
pub fn sample_raw() -> RawInstance {
    RawInstance::new()
        .resident("r1", &["h1"])
        .resident("r2", &["h2", "h1", "h3"])
        .resident("r3", &["h1", "h2"])
        .resident("r4", &["h1"])
        .hospital("h1", 2, &["r2", "r3", "r4", "r1"])
        .hospital("h2", 1, &["r3", "r2"])
        .hospital("h3", 1, &["r2"])
        .class("h1", "c1", 1, &["r1", "r2"])
        .class("h1", "c2", 1, &["r3", "r4"])
}

pub fn sample() -> Instance {
    Instance::validate(&sample_raw()).expect("sample instance is valid")
}

/// The stable matching `{(r1,h1), (r2,h2), (r3,h1)}`.
pub fn sample_m(instance: &Instance) -> Matching {
    Matching::from_names(instance, &[("r1", "h1"), ("r2", "h2"), ("r3", "h1")]).unwrap()
}

/// `{(r2,h1), (r3,h2), (r4,h1)}`, blocked by `(r3, h1)`.
pub fn sample_m_prime(instance: &Instance) -> Matching {
    Matching::from_names(instance, &[("r2", "h1"), ("r3", "h2"), ("r4", "h1")]).unwrap()
}

/// The size-4 popular matching `{(r1,h1), (r2,h3), (r3,h2), (r4,h1)}`.
pub fn sample_m_double_prime(instance: &Instance) -> Matching {
    Matching::from_names(instance, &[("r1", "h1"), ("r2", "h3"), ("r3", "h2"), ("r4", "h1")]).unwrap()
}
