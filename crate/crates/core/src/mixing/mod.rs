//! Three-term progression mixing: the defect `Theta`, verifiers for each
//! inequality used to bound it, and an adversarial set search.

mod chain;
mod ensemble;
mod lemmas;
mod search;
mod theta;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chain::{cs_chain_diagnostics, ChainReport, DEFAULT_CHAIN_MAX_ORDER};
pub use ensemble::{random_ensemble, trial_seed, EnsembleKind};
pub use lemmas::{
    gamma_functional, verify_bnp, verify_claim_fc_mu, verify_derivative_bound, verify_parseval,
    GammaMode, EXHAUSTIVE_GAMMA_MAX_ORDER,
};
pub use search::{adversarial_search, SearchResult};
pub use theta::{count_progressions, theta_defect, theta_of_sets};

/// Tolerance for exhaustive comparisons.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for the mean-zero preconditions.
pub const MEAN_ZERO_TOL: f64 = 1e-10;
/// Slack admitted on `||f||_inf <= 1` checks.
pub(crate) const SUP_SLACK: f64 = 1e-12;

/// `(2 / sqrt(D))^(1/4)`; at least 1, and so vacuous, for `D <= 4`.
pub fn theorem_bound(d: usize) -> Result<f64> {
    if d < 1 {
        return Err(Error::Precondition("quasirandom degree must be at least 1".into()));
    }
    Ok((2.0 / (d as f64).sqrt()).powf(0.25))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixingReport {
    pub theta: f64,
    pub raw_expectation: Complex64,
    pub product_of_means: Complex64,
    pub bound: f64,
    #[serde(rename = "D")]
    pub d: usize,
    pub margin: f64,
    /// The bound is at least 1, or the group is not quasirandom.
    pub vacuous: bool,
    /// Some input had `||f||_inf > 1`, so the bound does not apply.
    pub sup_norm_exceeded: bool,
}

impl MixingReport {
    /// Whether the defect respects the bound at tolerance `tol`.
    pub fn within_bound(&self, tol: f64) -> bool {
        self.sup_norm_exceeded || self.theta <= self.bound + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaId {
    Bnp,
    Derivative,
    Gamma,
    Fcmu,
    Parseval,
    Chain,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LemmaId::Bnp => "bnp",
            LemmaId::Derivative => "derivative",
            LemmaId::Gamma => "gamma",
            LemmaId::Fcmu => "fcmu",
            LemmaId::Parseval => "parseval",
            LemmaId::Chain => "chain",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Mode {
    Exhaustive,
    Sampled { m: usize, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sampled { m, .. } => write!(f, "sampled({m})"),
        }
    }
}

/// Outcome of checking one inequality instance `lhs <= rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub lhs: f64,
    pub rhs: f64,
    pub mode: Mode,
    pub passed: bool,
    pub margin: f64,
    /// Standard error of the sampled mean; zero in exhaustive mode.
    pub stderr: f64,
    pub tol: f64,
}

impl LemmaReport {
    pub(crate) fn exhaustive(lemma_id: LemmaId, lhs: f64, rhs: f64, tol: f64) -> Self {
        LemmaReport {
            lemma_id,
            lhs,
            rhs,
            mode: Mode::Exhaustive,
            passed: lhs <= rhs + tol,
            margin: rhs - lhs,
            stderr: 0.0,
            tol,
        }
    }

    pub(crate) fn sampled(
        lemma_id: LemmaId,
        lhs: f64,
        rhs: f64,
        m: usize,
        seed: u64,
        stderr: f64,
        tol: f64,
    ) -> Self {
        LemmaReport {
            lemma_id,
            lhs,
            rhs,
            mode: Mode::Sampled { m, seed },
            passed: lhs <= rhs + 3.0 * stderr + tol,
            margin: rhs - lhs,
            stderr,
            tol,
        }
    }
}

/// Mean and standard error of a sample.
pub(crate) fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert!((theorem_bound(4).unwrap() - 1.0).abs() < 1e-15);
        assert!((theorem_bound(64).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        // (2 / sqrt 3)^(1/4) evaluated independently via logs.
        let expect = (0.25 * (2f64.ln() - 0.5 * 3f64.ln())).exp();
        assert!((theorem_bound(3).unwrap() - expect).abs() < 1e-12);
        assert!((theorem_bound(3).unwrap() - 1.036615).abs() < 1e-6);
        assert!(theorem_bound(1).unwrap() > 1.0);
        assert!(theorem_bound(0).is_err());
    }

    #[test]
    fn sampled_pass_rule_uses_three_sigma() {
        let r = LemmaReport::sampled(LemmaId::Gamma, 1.05, 1.0, 10, 0, 0.02, 0.0);
        assert!(r.passed);
        let r = LemmaReport::sampled(LemmaId::Gamma, 1.07, 1.0, 10, 0, 0.02, 0.0);
        assert!(!r.passed);
    }

    #[test]
    fn stderr_of_constant_sample_is_zero() {
        let (m, s) = mean_and_stderr(&[2.0; 5]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 0.0);
        let (_, s) = mean_and_stderr(&[0.0, 2.0]);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
