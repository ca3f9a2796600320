//! Extremum finders over the emission probability: where a metric is best
//! for a given detector.

use std::collections::BTreeMap;

use crate::analytic;
use crate::detector::{DetectorModel, SourceParams};
use crate::error::{Error, Result};
use crate::metric::MetricKind;

/// Search interval for the emission probability.
const P_MIN: f64 = 1e-12;
const P_MAX: f64 = 1.0 - 1e-6;
/// Relative tolerance on the located optimum.
const P_REL_TOL: f64 = 1e-6;
/// Bracketing scan resolution (log-spaced points).
const SCAN_POINTS: usize = 240;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Maximize,
    Minimize,
}

impl Objective {
    /// The conventional objective for each extremizable metric.
    pub fn for_kind(kind: MetricKind) -> Option<Objective> {
        match kind {
            MetricKind::RTilde | MetricKind::G2Cross | MetricKind::VHom | MetricKind::VEnt => {
                Some(Objective::Maximize)
            }
            MetricKind::G2Conditional => Some(Objective::Minimize),
            _ => None,
        }
    }
}

/// Location and value of an interior extremum, with search diagnostics.
/// When `p_dc > 0`, `diagnostics["p_opt_vs_pdc_over_eta"]` records the ratio
/// of the located optimum to the `p_dc / eta` rule of thumb.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub p_opt: f64,
    pub value: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Locate the interior extremum of a closed-form metric over
/// `p in (1e-12, 1 - 1e-6)` by log-spaced bracketing followed by
/// golden-section refinement to relative tolerance `1e-6`.
pub fn find_p_opt(
    kind: MetricKind,
    det: &DetectorModel,
    n_modes: u32,
    objective: Objective,
) -> Result<Optimum> {
    if Objective::for_kind(kind) != Some(objective) {
        return Err(Error::InvalidParameter {
            name: "metric",
            value: f64::NAN,
            constraint: "extremum search supports r_tilde/g2_cross/v_hom/v_ent (max) and g2_conditional (min)",
        });
    }
    let sign = match objective {
        Objective::Maximize => 1.0,
        Objective::Minimize => -1.0,
    };
    let eval = |p: f64| -> f64 {
        SourceParams::from_equivalent_p(p, n_modes)
            .and_then(|s| analytic::evaluate(kind, &s, det))
            .map(|m| sign * m.value)
            .unwrap_or(f64::NEG_INFINITY)
    };

    // log-spaced bracketing scan
    let ln_lo = P_MIN.ln();
    let ln_hi = P_MAX.ln();
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (SCAN_POINTS - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid.iter().map(|&p| eval(p)).collect();
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan");
    if best == 0 || best == SCAN_POINTS - 1 || values[best] == f64::NEG_INFINITY {
        return Err(Error::NoExtremum {
            metric: kind.name(),
        });
    }

    // golden-section refinement on the log axis
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut a, mut b) = (grid[best - 1].ln(), grid[best + 1].ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (eval(c.exp()), eval(d.exp()));
    while (b - a) > P_REL_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d.exp());
        }
    }
    let p_opt = (0.5 * (a + b)).exp();
    let value = sign * eval(p_opt);

    let mut diagnostics = BTreeMap::new();
    if det.p_dc() > 0.0 && det.eta() > 0.0 {
        let rule_of_thumb = det.p_dc() / det.eta();
        diagnostics.insert(
            "p_opt_vs_pdc_over_eta".to_owned(),
            p_opt / rule_of_thumb,
        );
    }
    Ok(Optimum {
        p_opt,
        value,
        diagnostics,
    })
}
