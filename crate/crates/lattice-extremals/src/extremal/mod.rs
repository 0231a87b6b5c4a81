//! Ratio functionals of theta/zeta/eta, the extremum search over the
//! fundamental domain, grid sign suites for the derivative lemmas, the
//! minimum-principle checker and cusp probes.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{ensure, Result};
use crate::modular::ModularPoint;

mod functional;
mod optimize;
mod probe;
mod suites;

pub use functional::{functional_eval, scan_grid, scan_points, ScanRow};
pub use optimize::{find_extremum, nelder_mead, pick_best, seed_grid, SEED_GRID_SIDE};
pub use probe::{cusp_limit, divergence_probe, CuspLimit, ProbeResult, ProbeVerdict};
pub use suites::{
    verify_lemma, verify_minimum_principle, HypothesisMargin, LemmaParams, LemmaReport, SUITE_IDS,
};

/// A lattice functional built from θ, ζ and the eta invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioSpec {
    /// θ(β, z)/θ(α, z)
    ThetaRatio { alpha: f64, beta: f64 },
    /// θ(β, z)/θ(α, z)^k
    ThetaPowerRatio { alpha: f64, beta: f64, k: f64 },
    /// ζ(s, z)/θ(α, z)^k
    ZetaThetaRatio { s: f64, alpha: f64, k: f64 },
    /// Σ b_j θ(β_j, z) / Σ a_i θ(α_i, z)
    SumRatio { a: Vec<f64>, alpha: Vec<f64>, b: Vec<f64>, beta: Vec<f64> },
    /// (R/√2) θ(R²/2, τ) / (√Im τ |η(τ)|²)
    PartitionZ { r: f64 },
    /// ζ(c/2, τ) / (√Im τ |η(τ)|²)^c
    PartitionZTc { c: f64 },
    /// θ(R₂²/2, τ)/θ(R₁²/2, τ)
    PartitionRatio { r1: f64, r2: f64 },
    /// ζ(s, z) − θ(α, z)^k
    ZetaThetaDifference { s: f64, alpha: f64, k: f64 },
}

fn positive(v: f64, msg: &'static str) -> Result<()> {
    ensure(v > 0.0 && v.is_finite(), msg)
}

fn weights_ok(w: &[f64], p: &[f64]) -> Result<()> {
    ensure(!w.is_empty() && w.len() == p.len(), "weights and parameters must have equal nonzero length")?;
    ensure(w.iter().all(|&v| v >= 0.0 && v.is_finite()), "weights must be nonnegative")?;
    ensure(w.iter().any(|&v| v > 0.0), "at least one weight must be positive")?;
    p.iter().try_for_each(|&v| positive(v, "theta parameters must be positive"))
}

impl RatioSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RatioSpec::ThetaRatio { alpha, beta } => {
                positive(*alpha, "alpha must be positive")?;
                positive(*beta, "beta must be positive")
            }
            RatioSpec::ThetaPowerRatio { alpha, beta, k } => {
                positive(*alpha, "alpha must be positive")?;
                positive(*beta, "beta must be positive")?;
                positive(*k, "k must be positive")
            }
            RatioSpec::ZetaThetaRatio { s, alpha, k } | RatioSpec::ZetaThetaDifference { s, alpha, k } => {
                ensure(*s > 1.0 && s.is_finite(), "s must exceed 1")?;
                positive(*alpha, "alpha must be positive")?;
                positive(*k, "k must be positive")
            }
            RatioSpec::SumRatio { a, alpha, b, beta } => {
                weights_ok(a, alpha)?;
                weights_ok(b, beta)
            }
            RatioSpec::PartitionZ { r } => positive(*r, "R must be positive"),
            RatioSpec::PartitionZTc { c } => ensure(*c > 2.0 && c.is_finite(), "c must exceed 2"),
            RatioSpec::PartitionRatio { r1, r2 } => {
                positive(*r1, "R1 must be positive")?;
                positive(*r2, "R2 must be positive")
            }
        }
    }

    /// Short human-readable form, e.g. `ThetaRatio(1.5,3)`.
    pub fn label(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let list = |v: &[f64]| v.iter().map(|x| alloc::format!("{x}")).collect::<Vec<_>>().join(";");
        let _ = match self {
            RatioSpec::ThetaRatio { alpha, beta } => write!(s, "ThetaRatio({alpha},{beta})"),
            RatioSpec::ThetaPowerRatio { alpha, beta, k } => write!(s, "ThetaPowerRatio({alpha},{beta},{k})"),
            RatioSpec::ZetaThetaRatio { s: z, alpha, k } => write!(s, "ZetaThetaRatio({z},{alpha},{k})"),
            RatioSpec::SumRatio { a, alpha, b, beta } => {
                write!(s, "SumRatio([{}],[{}],[{}],[{}])", list(a), list(alpha), list(b), list(beta))
            }
            RatioSpec::PartitionZ { r } => write!(s, "PartitionZ({r})"),
            RatioSpec::PartitionZTc { c } => write!(s, "PartitionZTc({c})"),
            RatioSpec::PartitionRatio { r1, r2 } => write!(s, "PartitionRatio({r1},{r2})"),
            RatioSpec::ZetaThetaDifference { s: z, alpha, k } => write!(s, "ZetaThetaDifference({z},{alpha},{k})"),
        };
        s
    }
}

/// Direction of the extremum search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

/// Outcome of [`find_extremum`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Best point, reduced to the fundamental domain.
    pub argopt: ModularPoint,
    pub value: f64,
    pub iterations: usize,
    /// Simplex diameter fell below 1e−10.
    pub converged: bool,
    pub distance_to_hexagonal: f64,
    /// Set when the search ran off towards the cusp instead of converging.
    pub diagnosis: Option<&'static str>,
}
