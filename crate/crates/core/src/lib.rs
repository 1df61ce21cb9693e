//! Causal mediation analysis with a differentially misclassified binary
//! mediator.
//!
//! The observed mediator `M*` is a noisy copy of a latent binary mediator
//! `M` whose error rates depend on covariates `Z` and on `M` itself. Three
//! estimators correct the outcome model for that error:
//!
//! * [`em::run_em`]: joint maximum likelihood by EM over the latent class,
//!   optionally SQUAREM-accelerated;
//! * [`pvw::run_pvw`]: two-step predictive value weighting;
//! * [`ols::run_ols_correction`]: two-step least-squares correction for
//!   Normal outcomes.
//!
//! [`effects`] turns fitted parameters into controlled and natural
//! direct/indirect effects, and [`sim`] runs the simulation settings used to
//! check that the corrections remove the bias of the naive fit.
//!
//! Latent classes are coded 1 and 2, with 2 the reference; the mediator
//! enters linear predictors as `1{M = 1}`.

pub mod effects;
pub mod em;
pub mod error;
pub mod glm;
pub mod io;
pub mod model;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod ols;
pub mod parallel;
pub mod pvw;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
pub use glm::Family;
pub use model::{MediationDataset, ParameterSet};
pub use report::{FitReport, Method};
