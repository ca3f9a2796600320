//! Characterization metrics for photon-pair sources measured with noisy,
//! inefficient, non photon-number-resolving detectors.
//!
//! Three engines compute the same six quantities (Cauchy-Schwarz witness,
//! auto-, conditional and cross-correlations, Hong-Ou-Mandel and two-photon
//! interference visibilities):
//!
//! * [`analytic`] - exact closed forms, single-mode and multimode, plus the
//!   ideal and first-order approximate variants and extremum finders;
//! * [`oracle`] - a first-principles truncated Fock-space simulator that
//!   rebuilds every metric from states, beamsplitters and the click law;
//! * [`mc`] - a Monte Carlo click sampler with count-ratio estimators.

pub mod analytic;
pub mod detector;
pub mod error;
pub mod fock;
pub mod mc;
pub mod metric;
pub mod optimum;
pub mod oracle;

pub use detector::{DetectorModel, SourceParams};
pub use error::{Error, Result};
pub use metric::{MetricKind, MetricValue, Provenance};
