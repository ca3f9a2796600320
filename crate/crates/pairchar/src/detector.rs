//! Detector and source parameterization, and the elementary click law both
//! the closed forms and the Fock oracle are built on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A noisy, non photon-number-resolving detector: overall efficiency `eta`
/// (channel transmission folded in) and dark-count probability `p_dc` per
/// detection gate. All detectors of a setup share one model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    eta: f64,
    p_dc: f64,
}

impl DetectorModel {
    pub fn new(eta: f64, p_dc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                constraint: "0 <= eta <= 1",
            });
        }
        if !(0.0..1.0).contains(&p_dc) {
            return Err(Error::InvalidParameter {
                name: "p_dc",
                value: p_dc,
                constraint: "0 <= p_dc < 1",
            });
        }
        Ok(Self { eta, p_dc })
    }

    /// An ideal detector: unit efficiency, no dark counts.
    pub fn ideal() -> Self {
        Self { eta: 1.0, p_dc: 0.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn p_dc(&self) -> f64 {
        self.p_dc
    }

    /// Probability that `n` incident photons produce a click:
    /// `1 - (1 - p_dc) (1 - eta)^n`, i.e. one minus the probability to lose
    /// every photon and not get a dark count.
    pub fn click_prob(&self, n: u64) -> f64 {
        1.0 - (1.0 - self.p_dc) * self.survival(n)
    }

    /// `(1 - eta)^n`, evaluated in the log domain for large `n` so that deep
    /// truncations do not accumulate repeated-multiplication drift.
    pub fn survival(&self, n: u64) -> f64 {
        let base = 1.0 - self.eta;
        if n == 0 {
            1.0
        } else if base == 0.0 {
            0.0
        } else if n <= 64 {
            base.powi(n as i32)
        } else {
            (n as f64 * base.ln()).exp()
        }
    }

    /// The effective detector seen through one arm of a 50:50 splitter:
    /// `eta/2`, same dark-count probability.
    pub fn halved(&self) -> Self {
        Self {
            eta: self.eta / 2.0,
            p_dc: self.p_dc,
        }
    }
}

/// Pair-emission parameters of the source: per-mode emission probability
/// `p_bar` and the number `N` of independent pair modes. `n_modes = 1` is the
/// two-mode squeezed state; large `N` approaches Poissonian counting
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    p_bar: f64,
    n_modes: u32,
}

impl SourceParams {
    pub fn new(p_bar: f64, n_modes: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&p_bar) {
            return Err(Error::InvalidParameter {
                name: "p_bar",
                value: p_bar,
                constraint: "0 <= p_bar < 1",
            });
        }
        if n_modes == 0 {
            return Err(Error::InvalidParameter {
                name: "n_modes",
                value: 0.0,
                constraint: "n_modes >= 1",
            });
        }
        Ok(Self { p_bar, n_modes })
    }

    /// Build from the single-mode-equivalent emission probability `p`: the
    /// per-mode probability is chosen so the mean photon number matches a
    /// single-mode source with that `p`, i.e. `p_bar = p / (N - p(N-1))`.
    pub fn from_equivalent_p(p: f64, n_modes: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                constraint: "0 <= p < 1",
            });
        }
        let n = f64::from(n_modes.max(1));
        Self::new(p / (n - p * (n - 1.0)), n_modes)
    }

    pub fn p_bar(&self) -> f64 {
        self.p_bar
    }

    pub fn n_modes(&self) -> u32 {
        self.n_modes
    }

    /// The single-mode-equivalent emission probability
    /// `p = N p_bar / (1 + (N-1) p_bar)`.
    pub fn equivalent_p(&self) -> f64 {
        let n = f64::from(self.n_modes);
        n * self.p_bar / (1.0 + (n - 1.0) * self.p_bar)
    }

    /// Mean photon number per arm, `N p_bar / (1 - p_bar)`.
    pub fn mean_photons(&self) -> f64 {
        f64::from(self.n_modes) * self.p_bar / (1.0 - self.p_bar)
    }
}
