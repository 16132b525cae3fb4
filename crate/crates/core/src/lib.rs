//! Quasi-classical athermality: relative majorization, cooling and heating
//! bounds, qubit monotones, energy-gap sets and an LP cross-check.

pub mod error;
pub mod esets;
pub mod majorization;
pub mod monotones;
pub mod oracle;
pub mod roots;
pub mod tempbounds;
pub mod thermo;
pub mod types;

pub use error::{Error, Result};
pub use majorization::{alpha_at, compute_elbows, relatively_majorizes, Elbow, TestingBoundary};
pub use types::{validate_state, AthermalityState, ExtendedBeta, ExtendedReal, GibbsContext, ProbabilityVector};
