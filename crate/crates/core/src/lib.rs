//! Autoregressive time-series analysis under measurement error.
//!
//! The observed series `X*_t` is a contaminated version of a latent AR(p)
//! process `X_t`, linked either by an additive model
//! `X*_t = alpha0 + alpha1 * X_t + e_t` or a multiplicative model
//! `X*_t = beta0 * u_t * X_t` with mean-one noise `u_t`. This crate provides
//!
//! * empirical moments, differencing, and stationarity checks ([`series`],
//!   [`model`]),
//! * least-squares and estimating-equation AR fits ([`estimate`]),
//! * closed-form limits of the naive (error-ignoring) estimators and the
//!   asymptotic covariance of surrogate autocovariances ([`naive`],
//!   [`bartlett`]),
//! * bias-corrected estimation with block-bootstrap and sandwich standard
//!   errors ([`corrected`]),
//! * h-step forecasting with error-adjusted initial values and prediction
//!   intervals ([`forecast`]),
//! * ADF screening and AIC lag selection ([`select`]),
//! * a Monte Carlo harness that reproduces every closed form by simulation
//!   ([`montecarlo`]).
//!
//! Replicate-level loops (bootstrap, Monte Carlo experiments) run on rayon
//! when the default `parallel` feature is enabled and fall back to sequential
//! iteration otherwise. Every replicate owns an RNG stream keyed by
//! `(seed, replicate)`, so results are bit-identical across feature settings,
//! thread counts, and schedules.

pub mod bartlett;
pub mod corrected;
pub mod error;
pub mod error_models;
pub mod estimate;
pub mod forecast;
pub mod model;
pub mod montecarlo;
pub mod naive;
pub mod select;
pub mod series;
pub mod stats;

mod eigen;
pub(crate) mod exec;
pub(crate) mod linalg;

pub use error::{Error, Result};
pub use error_models::{AdditiveError, ErrorModel, MultiplicativeError, NoiseDist};
pub use estimate::{fit_ee, fit_ls, fitted_equivalence_gap, ArFit, FitMethod};
pub use model::ArModel;
pub use series::{AutocovSummary, Series};
