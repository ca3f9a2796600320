//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its physical domain.
    #[error("invalid parameter {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The requested metric diverges at the given parameters (e.g. the ideal
    /// Cauchy-Schwarz parameter at p = 0).
    #[error("metric diverges at {name} = {value}")]
    DivergentMetric { name: &'static str, value: f64 },

    /// Numerator and denominator of a count-ratio metric are both zero to
    /// machine resolution; no physical ratio exists.
    #[error("indeterminate ratio: all count rates vanish for the given source and detector")]
    IndeterminateRatio,

    /// The metric is monotone over the searchable emission-probability range,
    /// so there is no interior extremum to report.
    #[error("no interior extremum of {metric} on the search interval")]
    NoExtremum { metric: &'static str },

    /// A truncated state (or an adaptive refinement of one) cannot represent
    /// the requested quantity within tolerance.
    #[error("cutoff {cutoff} too small: tail mass bound {tail_mass:.3e} exceeds {tolerance:.3e}")]
    CutoffTooSmall {
        cutoff: u32,
        tail_mass: f64,
        tolerance: f64,
    },

    /// A mode index is out of range or repeated where distinct modes are
    /// required.
    #[error("invalid mode index {index} for a state with {mode_count} modes")]
    InvalidMode { index: usize, mode_count: usize },

    /// A Monte Carlo denominator count is zero; the estimator is reported as
    /// unusable rather than silently dropped.
    #[error("degenerate counts: {context} produced zero events over {trials} trials")]
    DegenerateCounts { context: &'static str, trials: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
