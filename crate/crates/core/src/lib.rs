//! Popular matchings in many-to-one markets where hospitals cap admissions
//! per class, and classes nest (form a laminar family).
//!
//! * [`stable`] — deferred acceptance under class quotas.
//! * [`popularity`] — votes, Δ, the alternating-structure decomposition and
//!   the certificate check.
//! * [`reduction`] — the layered instance `G_s` and the SPA transform.
//! * [`solvers`] — largest popular matching, and popular among largest.
//! * [`oracle`] — exhaustive checks for small instances.

pub mod error;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod popularity;
pub mod reduction;
pub mod solvers;
pub mod stable;

pub use error::{Error, Result};
pub use model::{Instance, Matching, RawInstance};
