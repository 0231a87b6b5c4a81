use alloc::vec::Vec;

use super::functional::{functional_eval, linspace};
use super::{Mode, OptResult, RatioSpec};
use crate::error::{Error, Result};
use crate::modular::{reduce, ModularPoint};
use crate::scalar::SeriesConfig;

/// Seeds per axis of the multistart grid.
pub const SEED_GRID_SIDE: usize = 5;
const INITIAL_STEP: f64 = 0.05;
const DIAMETER_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 2000;
/// Reduced heights beyond this count as running off to the cusp.
const CUSP_HEIGHT: f64 = 1e3;

/// Deterministic 5×5 seeds in [0, 1/2] × [0.87, 3], x outer.
pub fn seed_grid() -> Vec<(f64, f64)> {
    let ys = linspace(0.87, 3.0, SEED_GRID_SIDE);
    linspace(0.0, 0.5, SEED_GRID_SIDE).flat_map(|x| ys.clone().map(move |y| (x, y))).collect()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

/// One Nelder–Mead run from `seed` in raw (x, y) coordinates. Points with
/// y ≤ 0 are rejected by an infinite penalty; every evaluation reduces to the
/// fundamental domain inside [`functional_eval`].
pub fn nelder_mead(spec: &RatioSpec, mode: Mode, seed: (f64, f64), cfg: &SeriesConfig) -> Result<OptResult> {
    spec.validate()?;
    let sign = match mode {
        Mode::Min => 1.0,
        Mode::Max => -1.0,
    };
    let f = |p: (f64, f64)| -> Result<f64> {
        // Also rejects NaN heights.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(p.1 > 0.0) || !p.0.is_finite() || !p.1.is_finite() {
            return Ok(f64::INFINITY);
        }
        Ok(sign * functional_eval(spec, ModularPoint::new(p.0, p.1)?, cfg)?)
    };
    let mut simplex = [seed, (seed.0 + INITIAL_STEP, seed.1), (seed.0, seed.1 + INITIAL_STEP)];
    let mut vals = [f(simplex[0])?, f(simplex[1])?, f(simplex[2])?];
    let mut iterations = 0;
    let mut converged = false;
    let mut diagnosis = None;
    while iterations < MAX_ITERATIONS {
        // Order best → worst.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let diameter = dist(simplex[0], simplex[1]).max(dist(simplex[0], simplex[2])).max(dist(simplex[1], simplex[2]));
        if diameter < DIAMETER_TOL {
            converged = true;
            break;
        }
        if let Ok(r) = reduce(ModularPoint::new(simplex[0].0, simplex[0].1.max(f64::MIN_POSITIVE))?) {
            if r.y() > CUSP_HEIGHT {
                diagnosis = Some("escapes to the cusp (y -> infinity)");
                break;
            }
        }
        iterations += 1;

        let c = ((simplex[0].0 + simplex[1].0) / 2.0, (simplex[0].1 + simplex[1].1) / 2.0);
        let at = |t: f64| (c.0 + t * (simplex[2].0 - c.0), c.1 + t * (simplex[2].1 - c.1));
        let xr = at(-1.0);
        let fr = f(xr)?;
        if fr < vals[0] {
            let xe = at(-2.0);
            let fe = f(xe)?;
            if fe < fr {
                simplex[2] = xe;
                vals[2] = fe;
            } else {
                simplex[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let p = at(-0.5);
                (p, f(p)?)
            } else {
                let p = at(0.5);
                (p, f(p)?)
            };
            if fc < fr.min(vals[2]) {
                simplex[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = ((simplex[0].0 + simplex[i].0) / 2.0, (simplex[0].1 + simplex[i].1) / 2.0);
                    vals[i] = f(simplex[i])?;
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    let argopt = reduce(ModularPoint::new(simplex[best].0, simplex[best].1)?)?;
    Ok(OptResult {
        argopt,
        value: sign * vals[best],
        iterations,
        converged,
        distance_to_hexagonal: argopt.distance(&ModularPoint::hexagonal()),
        diagnosis,
    })
}

/// Selects the best converged run. A run diagnosed as escaping to the cusp
/// is returned (unconverged) instead when nothing converged or when it had
/// already beaten every converged value.
pub fn pick_best(mode: Mode, runs: Vec<Result<OptResult>>) -> Result<OptResult> {
    let better = |a: &OptResult, b: &OptResult| match mode {
        Mode::Min => a.value < b.value,
        Mode::Max => a.value > b.value,
    };
    let mut best: Option<OptResult> = None;
    let mut escaped: Option<OptResult> = None;
    let mut first_err = None;
    for run in runs {
        match run {
            Ok(r) if r.converged => {
                if best.as_ref().is_none_or(|b| better(&r, b)) {
                    best = Some(r);
                }
            }
            Ok(r) => {
                if r.diagnosis.is_some() && escaped.is_none() {
                    escaped = Some(r);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (best, escaped) {
        // A run that escaped with a better value than every converged run
        // shows the converged point is only a local extremum.
        (Some(b), Some(e)) if better(&e, &b) => return Ok(e),
        (Some(b), _) => return Ok(b),
        (None, Some(e)) => return Ok(e),
        (None, None) => {}
    }
    Err(first_err.unwrap_or(Error::NoConvergence("extremum search")))
}

/// Multistart Nelder–Mead from [`seed_grid`].
pub fn find_extremum(spec: &RatioSpec, mode: Mode, cfg: &SeriesConfig) -> Result<OptResult> {
    spec.validate()?;
    let runs = seed_grid().into_iter().map(|s| nelder_mead(spec, mode, s, cfg)).collect();
    pick_best(mode, runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_deterministic() {
        let s = seed_grid();
        assert_eq!(s.len(), 25);
        assert_eq!(s[0], (0.0, 0.87));
        assert_eq!(s[24], (0.5, 3.0));
    }

    #[test]
    fn theta_ratio_max_is_hexagonal() {
        let cfg = SeriesConfig::default();
        let spec = RatioSpec::ThetaRatio { alpha: 1.5, beta: 3.0 };
        let r = nelder_mead(&spec, Mode::Max, (0.25, 1.5), &cfg).unwrap();
        assert!(r.converged);
        assert!(r.distance_to_hexagonal < 1e-6, "{r:?}");
    }

    #[test]
    fn escaping_run_is_diagnosed() {
        let cfg = SeriesConfig::default();
        let spec = RatioSpec::ThetaPowerRatio { alpha: 1.0, beta: 2.0, k: 0.5 };
        // e^{iπ/3} is a local maximum of θ(2)/θ(1)^{1/2}; the multistart
        // still sees the unbounded growth towards the cusp.
        let local = nelder_mead(&spec, Mode::Max, (0.25, 1.5), &cfg).unwrap();
        assert!(local.converged && local.distance_to_hexagonal < 1e-6);
        let r = find_extremum(&spec, Mode::Max, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.diagnosis.is_some());
        assert!(r.value > local.value);
    }
}
