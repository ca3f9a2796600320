//! Truncated Fock-space states: sparse amplitude maps over multimode
//! occupation tuples, with the beamsplitter transformation and the
//! click-law detection probability built on top.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::detector::DetectorModel;
use crate::error::{Error, Result};

/// Photon occupation numbers, one entry per mode.
pub type Occupation = Vec<u16>;

/// A pure multimode state truncated at a finite total photon number.
/// `tail_mass` bounds the probability discarded by the truncation,
/// assuming the supplied normalization constant is exact for the
/// untruncated state.
#[derive(Debug, Clone)]
pub struct FockState {
    mode_count: usize,
    amps: BTreeMap<Occupation, Complex64>,
    cutoff: u32,
    tail_mass: f64,
}

impl FockState {
    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Maximum total photon number representable in this truncation.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Upper bound on the probability mass removed by the truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, occ: &[u16]) -> Complex64 {
        self.amps.get(occ).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Occupation-number probabilities in deterministic (lexicographic)
    /// order. This is the distribution the Monte Carlo sampler draws from.
    pub fn probabilities(&self) -> Vec<(Occupation, f64)> {
        self.amps
            .iter()
            .map(|(occ, amp)| (occ.clone(), amp.norm_sqr()))
            .collect()
    }

    /// `sum over basis of |amplitude|^2 f(occupation)` - the expectation of
    /// any occupation-diagonal observable on the truncated state.
    pub fn expectation<F: Fn(&[u16]) -> f64>(&self, f: F) -> f64 {
        self.amps
            .iter()
            .map(|(occ, amp)| amp.norm_sqr() * f(occ))
            .sum()
    }

    /// Expectation of a product of per-mode survival bases,
    /// `< prod_i bases[i]^{n_i} >`.
    pub fn generating_moment(&self, bases: &[f64]) -> Result<f64> {
        if bases.len() != self.mode_count {
            return Err(Error::InvalidMode {
                index: bases.len(),
                mode_count: self.mode_count,
            });
        }
        Ok(self.expectation(|occ| {
            occ.iter()
                .zip(bases)
                .map(|(&n, &x)| x.powi(i32::from(n)))
                .product()
        }))
    }

    /// Rewrite each basis term under the two-mode mixing
    /// `a_i^dag -> sqrt(t) d^dag + sqrt(1-t) dbar^dag`,
    /// `a_j^dag -> sqrt(1-t) d^dag - sqrt(t) dbar^dag`
    /// (the 50:50 sign convention at `t = 1/2`), with `d` landing in slot `i`
    /// and `dbar` in slot `j`. Unitary, so norm and cutoff are preserved.
    pub fn apply_beamsplitter(&self, mode_i: usize, mode_j: usize, t: f64) -> Result<FockState> {
        for &m in &[mode_i, mode_j] {
            if m >= self.mode_count {
                return Err(Error::InvalidMode {
                    index: m,
                    mode_count: self.mode_count,
                });
            }
        }
        if mode_i == mode_j {
            return Err(Error::InvalidMode {
                index: mode_j,
                mode_count: self.mode_count,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter {
                name: "transmittance",
                value: t,
                constraint: "0 <= t <= 1",
            });
        }

        let max_n = usize::from(u16::MAX.min(self.cutoff as u16)) + 2;
        let ln_fact = ln_factorial_table(max_n);
        let st = t.sqrt();
        let sr = (1.0 - t).sqrt();

        let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, amp) in &self.amps {
            let ni = usize::from(occ[mode_i]);
            let nj = usize::from(occ[mode_j]);
            let base_ln = ln_fact[ni] + ln_fact[nj];
            for k in 0..=ni {
                for m in 0..=nj {
                    let d_count = k + m;
                    let dbar_count = ni + nj - d_count;
                    // binomial expansion coefficient times the factorial
                    // normalization of the rebuilt number states
                    let ln_binom = ln_fact[ni] - ln_fact[k] - ln_fact[ni - k] + ln_fact[nj]
                        - ln_fact[m]
                        - ln_fact[nj - m];
                    let ln_norm = 0.5 * (ln_fact[d_count] + ln_fact[dbar_count] - base_ln);
                    let sign = if (nj - m) % 2 == 1 { -1.0 } else { 1.0 };
                    let coeff = sign
                        * st.powi((k + nj - m) as i32)
                        * sr.powi((ni - k + m) as i32)
                        * (ln_binom + ln_norm).exp();
                    if coeff == 0.0 {
                        continue;
                    }
                    let mut occ2 = occ.clone();
                    occ2[mode_i] = d_count as u16;
                    occ2[mode_j] = dbar_count as u16;
                    *out.entry(occ2).or_insert(Complex64::new(0.0, 0.0)) += amp * coeff;
                }
            }
        }
        // drop exact zeros produced by destructive interference
        out.retain(|_, a| a.norm_sqr() > 0.0);
        Ok(FockState {
            mode_count: self.mode_count,
            amps: out,
            cutoff: self.cutoff,
            tail_mass: self.tail_mass,
        })
    }
}

/// Expand `norm * exp(sum_k c_k a_{i_k}^dag a_{j_k}^dag) |0...0>` as a
/// truncated series, keeping generator orders `0..=pair_cutoff` (each order
/// carries two photons, so total photons run up to `2 * pair_cutoff`).
/// `norm` must be the exact normalization constant of the untruncated state
/// (or 1 for intentionally unnormalized expansions); the recorded
/// `tail_mass` is the probability mass of the dropped orders. Errors with
/// `CutoffTooSmall` when that mass exceeds `tail_tol`.
pub fn make_pair_exponential_state(
    mode_count: usize,
    terms: &[(usize, usize, f64)],
    norm: f64,
    pair_cutoff: u32,
    tail_tol: f64,
) -> Result<FockState> {
    for &(i, j, c) in terms {
        for &m in &[i, j] {
            if m >= mode_count {
                return Err(Error::InvalidMode {
                    index: m,
                    mode_count,
                });
            }
        }
        if c.abs() >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "coefficient",
                value: c,
                constraint: "|c| < 1 for a convergent series",
            });
        }
    }

    let vacuum: Occupation = vec![0; mode_count];
    let mut total: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    total.insert(vacuum.clone(), Complex64::new(1.0, 0.0));
    let mut current: BTreeMap<Occupation, Complex64> = total.clone();

    for order in 1..=pair_cutoff {
        let mut next: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, amp) in &current {
            for &(i, j, c) in terms {
                let (ni, nj) = (f64::from(occ[i]), f64::from(occ[j]));
                let factor = if i == j {
                    ((ni + 1.0) * (ni + 2.0)).sqrt()
                } else {
                    ((ni + 1.0) * (nj + 1.0)).sqrt()
                };
                let mut occ2 = occ.clone();
                occ2[i] += 1;
                occ2[j] += 1;
                *next.entry(occ2).or_insert(Complex64::new(0.0, 0.0)) +=
                    amp * (c * factor / f64::from(order));
            }
        }
        for (occ, amp) in &next {
            *total.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        current = next;
    }

    for amp in total.values_mut() {
        *amp *= norm;
    }
    let kept: f64 = total.values().map(|a| a.norm_sqr()).sum();
    let tail_mass = (1.0 - kept).max(0.0);
    if tail_mass > tail_tol {
        return Err(Error::CutoffTooSmall {
            cutoff: pair_cutoff,
            tail_mass,
            tolerance: tail_tol,
        });
    }
    Ok(FockState {
        mode_count,
        amps: total,
        cutoff: 2 * pair_cutoff,
        tail_mass,
    })
}

/// One physical detector per group of modes: a group of size two models a
/// detector whose gate covers two temporal modes, with the survival factor
/// applied to the group's total photon number and a single dark-count
/// factor.
#[derive(Debug, Clone)]
pub struct DetectorAssignment {
    pub groups: Vec<Vec<usize>>,
    pub det: DetectorModel,
}

impl DetectorAssignment {
    pub fn new(groups: Vec<Vec<usize>>, det: DetectorModel) -> Self {
        Self { groups, det }
    }

    fn validate(&self, mode_count: usize) -> Result<()> {
        let mut seen = vec![false; mode_count];
        for group in &self.groups {
            for &m in group {
                if m >= mode_count {
                    return Err(Error::InvalidMode {
                        index: m,
                        mode_count,
                    });
                }
                if seen[m] {
                    return Err(Error::InvalidMode {
                        index: m,
                        mode_count,
                    });
                }
                seen[m] = true;
            }
        }
        Ok(())
    }

    /// Total photons seen by each group for a given occupation.
    pub fn group_counts(&self, occ: &[u16]) -> Vec<u64> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&m| u64::from(occ[m])).sum())
            .collect()
    }
}

/// Probability that every detector of the assignment clicks: the truncated
/// expectation of the product of click operators, exact on the kept terms
/// (the state's `tail_mass` bounds the additional uncertainty). Modes not
/// covered by any group are traced out.
pub fn detection_probability(state: &FockState, assignment: &DetectorAssignment) -> Result<f64> {
    assignment.validate(state.mode_count())?;
    Ok(state.expectation(|occ| {
        assignment
            .groups
            .iter()
            .map(|g| {
                let n: u64 = g.iter().map(|&m| u64::from(occ[m])).sum();
                assignment.det.click_prob(n)
            })
            .product()
    }))
}

fn ln_factorial_table(up_to: usize) -> Vec<f64> {
    let mut table = vec![0.0f64; up_to + 1];
    for n in 1..=up_to {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
}
