use alloc::vec::Vec;

use libm::{pow, sqrt};

use super::RatioSpec;
use crate::epstein::zeta_value;
use crate::error::{ensure, Result};
use crate::modular::{reduce, ModularPoint};
use crate::scalar::SeriesConfig;
use crate::theta::{theta_value, weighted_eta, EtaMethod};

/// Evaluates `spec` at z. The point is reduced to the fundamental domain
/// first, so every evaluator runs where its series converge fastest.
pub fn functional_eval(spec: &RatioSpec, z: ModularPoint, cfg: &SeriesConfig) -> Result<f64> {
    spec.validate()?;
    let z = reduce(z)?;
    let th = |a: f64| theta_value(a, z, cfg);
    Ok(match spec {
        RatioSpec::ThetaRatio { alpha, beta } => th(*beta)? / th(*alpha)?,
        RatioSpec::ThetaPowerRatio { alpha, beta, k } => th(*beta)? / pow(th(*alpha)?, *k),
        RatioSpec::ZetaThetaRatio { s, alpha, k } => zeta_value(*s, z, cfg)? / pow(th(*alpha)?, *k),
        RatioSpec::ZetaThetaDifference { s, alpha, k } => zeta_value(*s, z, cfg)? - pow(th(*alpha)?, *k),
        RatioSpec::SumRatio { a, alpha, b, beta } => {
            let mut num = 0.0;
            for (w, p) in b.iter().zip(beta) {
                num += w * th(*p)?;
            }
            let mut den = 0.0;
            for (w, p) in a.iter().zip(alpha) {
                den += w * th(*p)?;
            }
            num / den
        }
        RatioSpec::PartitionZ { r } => {
            r / sqrt(2.0) * th(r * r / 2.0)? / weighted_eta(z, EtaMethod::QProduct, cfg)?
        }
        RatioSpec::PartitionZTc { c } => {
            zeta_value(c / 2.0, z, cfg)? / pow(weighted_eta(z, EtaMethod::QProduct, cfg)?, *c)
        }
        RatioSpec::PartitionRatio { r1, r2 } => th(r2 * r2 / 2.0)? / th(r1 * r1 / 2.0)?,
    })
}

/// One row of a [`scan_grid`] table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}

/// Grid points of a scan in output order: x outer, y inner.
pub fn scan_points(x_range: (f64, f64, usize), y_range: (f64, f64, usize)) -> Result<Vec<(f64, f64)>> {
    ensure(x_range.2 >= 2 && y_range.2 >= 2, "grid counts must be at least 2")?;
    ensure(y_range.0 > 0.0 && y_range.1 > 0.0, "y range must lie in the upper half-plane")?;
    ensure(x_range.0.is_finite() && x_range.1.is_finite() && y_range.1.is_finite(), "ranges must be finite")?;
    let ys = linspace(y_range.0, y_range.1, y_range.2);
    Ok(linspace(x_range.0, x_range.1, x_range.2).flat_map(|x| ys.clone().map(move |y| (x, y))).collect())
}

/// Evaluates `spec` on a rectangular grid.
pub fn scan_grid(
    spec: &RatioSpec,
    x_range: (f64, f64, usize),
    y_range: (f64, f64, usize),
    cfg: &SeriesConfig,
) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    scan_points(x_range, y_range)?
        .into_iter()
        .map(|(x, y)| Ok(ScanRow { x, y, value: functional_eval(spec, ModularPoint::new(x, y)?, cfg)? }))
        .collect()
}
