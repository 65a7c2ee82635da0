//! Link-level simulator for vehicle-to-vehicle visible light links at a
//! blocked intersection: a mirror-array IRS on a roadside unit, an
//! amplify-and-forward optical relay, and NLOS road reflection.

pub mod budget;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod irs;
pub mod metrics;
pub mod nrr;
pub mod optics;
pub mod quadrature;
pub mod relay;
pub mod report;
pub mod scenario;
pub mod sweep;
pub mod vec3;

pub use budget::{evaluate, evaluate_with, LinkBudget, Scheme, SchemeDetail};
pub use error::{Error, Result};
pub use exec::Exec;
pub use scenario::Scenario;
pub use vec3::Vec3;
