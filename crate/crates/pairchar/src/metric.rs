//! Metric identifiers and the common result type carried by every
//! evaluation engine.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which characterization quantity to evaluate. The six exact metrics have
/// closed-form, oracle and Monte Carlo engines; the ideal and approximate
/// variants are closed-form only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// Ideal Cauchy-Schwarz parameter `(1 + 1/p)^2 / 4`.
    RIdeal,
    /// Cauchy-Schwarz witness with imperfect detectors.
    RTilde,
    /// First-order development of `RTilde` in `eta` and `p_dc`.
    RTildeFirstOrder,
    /// Auto-correlation of one unconditioned arm.
    G2Auto,
    /// First-order-in-`p_dc` Taylor form of `G2Auto`.
    G2AutoTaylor,
    /// Auto-correlation of the heralded arm.
    G2Conditional,
    /// Cross-correlation between the twin arms.
    G2Cross,
    /// Ideal cross-correlation `1 + 1/p`.
    G2CrossIdeal,
    /// Hong-Ou-Mandel dip visibility.
    VHom,
    /// Small-`eta`, zero-dark-count approximation of `VHom`.
    VHomSmallEta,
    /// Two-photon interference visibility of the polarization-entangled
    /// source.
    VEnt,
}

impl MetricKind {
    pub const ALL: [MetricKind; 11] = [
        MetricKind::RIdeal,
        MetricKind::RTilde,
        MetricKind::RTildeFirstOrder,
        MetricKind::G2Auto,
        MetricKind::G2AutoTaylor,
        MetricKind::G2Conditional,
        MetricKind::G2Cross,
        MetricKind::G2CrossIdeal,
        MetricKind::VHom,
        MetricKind::VHomSmallEta,
        MetricKind::VEnt,
    ];

    /// The six exact metrics that every engine implements.
    pub const EXACT: [MetricKind; 6] = [
        MetricKind::RTilde,
        MetricKind::G2Auto,
        MetricKind::G2Conditional,
        MetricKind::G2Cross,
        MetricKind::VHom,
        MetricKind::VEnt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::RIdeal => "r_ideal",
            MetricKind::RTilde => "r_tilde",
            MetricKind::RTildeFirstOrder => "r_tilde_first_order",
            MetricKind::G2Auto => "g2_auto",
            MetricKind::G2AutoTaylor => "g2_auto_taylor",
            MetricKind::G2Conditional => "g2_conditional",
            MetricKind::G2Cross => "g2_cross",
            MetricKind::G2CrossIdeal => "g2_cross_ideal",
            MetricKind::VHom => "v_hom",
            MetricKind::VHomSmallEta => "v_hom_small_eta",
            MetricKind::VEnt => "v_ent",
        }
    }

    /// Whether the oracle and Monte Carlo engines can evaluate this kind.
    pub fn is_exact(&self) -> bool {
        MetricKind::EXACT.contains(self)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MetricKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or(Error::InvalidParameter {
                name: "metric",
                value: f64::NAN,
                constraint: "unknown metric name",
            })
    }
}

/// Which computation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
    MonteCarlo,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
            Provenance::MonteCarlo => "monte_carlo",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "closed_form" => Ok(Provenance::ClosedForm),
            "oracle" => Ok(Provenance::Oracle),
            "monte_carlo" => Ok(Provenance::MonteCarlo),
            _ => Err(Error::InvalidParameter {
                name: "engine",
                value: f64::NAN,
                constraint: "one of closed_form|oracle|monte_carlo",
            }),
        }
    }
}

/// A scalar metric value plus the engine that produced it and any numeric
/// diagnostics (truncation cutoff, tail mass, standard error, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub kind: MetricKind,
    pub value: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl MetricValue {
    pub fn closed_form(kind: MetricKind, value: f64) -> Self {
        Self {
            kind,
            value,
            provenance: Provenance::ClosedForm,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }
}
