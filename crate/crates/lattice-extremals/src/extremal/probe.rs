use alloc::vec::Vec;

use libm::{pow, sqrt};

use super::functional::functional_eval;
use super::{Mode, RatioSpec};
use crate::error::{ensure, Result};
use crate::modular::ModularPoint;
use crate::scalar::{riemann_zeta, SeriesConfig};

/// Limit of a functional along z = iy as y → ∞, from θ(α, iy) ~ √(y/α),
/// ζ(s, iy) ~ 2ζ(2s) y^s and √y|η(iy)|² ~ √y e^{−πy/6}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CuspLimit {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

/// Heuristic label; a monotone sequence on finitely many heights is evidence,
/// not proof, that no extremum exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    EscapesToCusp,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    /// (y, value) along z = iy.
    pub rows: Vec<(f64, f64)>,
    pub limit: CuspLimit,
    pub verdict: ProbeVerdict,
}

fn power_limit(exponent: f64, coef: f64) -> CuspLimit {
    if exponent > 0.0 {
        if coef > 0.0 { CuspLimit::PlusInfinity } else { CuspLimit::MinusInfinity }
    } else if exponent < 0.0 {
        CuspLimit::Finite(0.0)
    } else {
        CuspLimit::Finite(coef)
    }
}

/// Asymptotic limit of `spec` along the imaginary axis.
pub fn cusp_limit(spec: &RatioSpec) -> Result<CuspLimit> {
    spec.validate()?;
    Ok(match spec {
        RatioSpec::ThetaRatio { alpha, beta } => CuspLimit::Finite(sqrt(alpha / beta)),
        // √(y/β) / (y/α)^{k/2}
        RatioSpec::ThetaPowerRatio { alpha, beta, k } => power_limit(0.5 * (1.0 - k), pow(*alpha, k / 2.0) / sqrt(*beta)),
        // 2ζ(2s)y^s / (y/α)^{k/2}
        RatioSpec::ZetaThetaRatio { s, alpha, k } => {
            power_limit(s - k / 2.0, 2.0 * riemann_zeta(2.0 * s)? * pow(*alpha, k / 2.0))
        }
        RatioSpec::ZetaThetaDifference { s, alpha, k } => {
            let lead = 2.0 * riemann_zeta(2.0 * s)?;
            let other = pow(*alpha, -k / 2.0);
            if 2.0 * s > *k || (2.0 * s == *k && lead > other) {
                CuspLimit::PlusInfinity
            } else {
                CuspLimit::MinusInfinity
            }
        }
        RatioSpec::SumRatio { a, alpha, b, beta } => {
            let num: f64 = b.iter().zip(beta).map(|(w, p)| w / sqrt(*p)).sum();
            let den: f64 = a.iter().zip(alpha).map(|(w, p)| w / sqrt(*p)).sum();
            CuspLimit::Finite(num / den)
        }
        RatioSpec::PartitionZ { .. } | RatioSpec::PartitionZTc { .. } => CuspLimit::PlusInfinity,
        RatioSpec::PartitionRatio { r1, r2 } => CuspLimit::Finite(r1 / r2),
    })
}

/// Evaluates `spec` along z = iy and labels whether the search direction
/// runs off to the cusp: for Max the values must increase strictly towards a
/// limit no smaller than all of them, for Min decrease strictly towards one
/// no larger (equality only arises once the values saturate in floating point).
pub fn divergence_probe(spec: &RatioSpec, mode: Mode, ys: &[f64], cfg: &SeriesConfig) -> Result<ProbeResult> {
    ensure(ys.len() >= 4, "need at least 4 heights")?;
    ensure(ys.windows(2).all(|w| w[1] > w[0]), "heights must increase")?;
    ensure(ys[0] > 0.0, "heights must be positive")?;
    let limit = cusp_limit(spec)?;
    let rows = ys
        .iter()
        .map(|&y| Ok((y, functional_eval(spec, ModularPoint::new(0.0, y)?, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    let last = rows[rows.len() - 1].1;
    let escapes = match mode {
        Mode::Max => {
            rows.windows(2).all(|w| w[1].1 > w[0].1)
                && match limit {
                    CuspLimit::PlusInfinity => true,
                    CuspLimit::Finite(l) => l >= last,
                    CuspLimit::MinusInfinity => false,
                }
        }
        Mode::Min => {
            rows.windows(2).all(|w| w[1].1 < w[0].1)
                && match limit {
                    CuspLimit::MinusInfinity => true,
                    CuspLimit::Finite(l) => l <= last,
                    CuspLimit::PlusInfinity => false,
                }
        }
    };
    let verdict = if escapes { ProbeVerdict::EscapesToCusp } else { ProbeVerdict::Inconclusive };
    Ok(ProbeResult { rows, limit, verdict })
}
