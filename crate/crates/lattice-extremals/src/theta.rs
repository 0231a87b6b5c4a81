//! The lattice theta function θ(α, z) = Σ_{(m,n)∈ℤ²} e^{−πα|mz+n|²/y},
//! its partial derivatives and envelopes, and the Dedekind-eta invariant
//! √y |η(z)|².

use core::f64::consts::PI;

use libm::{ceil, cos, exp, log, log1p, round, sqrt};

use crate::error::{ensure, Error, Result};
use crate::modular::ModularPoint;
use crate::scalar::{mu, theta1d, theta3, BoundPair, SeriesConfig};
use crate::sum::Compensated;

/// A series value with an absolute truncation-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub err_estimate: f64,
    pub terms_used: usize,
}

/// How to evaluate θ(α, z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaMethod {
    /// θ = √(y/α) Σ_m e^{−παym²} ϑ(y/α; mx); the production path.
    Factorized,
    /// Plain double sum with an explicit Gaussian tail bound; an oracle.
    DirectLattice,
    /// θ(α, iy) = √(y/α) ϑ₃(αy) ϑ₃(y/α); only valid for x = 0.
    AxisClosedForm,
}

/// Which derivative [`theta_partial`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaPartial {
    Dx,
    Dy,
    /// ∂²/∂x∂α (√α θ(α, z))
    DsDxSqrt,
    /// ∂²/∂y∂α (√α θ(α, z))
    DsDySqrt,
}

/// Which envelope [`theta_deriv_envelopes`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaEnvelope {
    /// Upper bound of −θ_x / sin(2πx).
    DxOverSinUpper,
    /// Lower bound of −θ_x / sin(2πx).
    DxOverSinLower,
    /// Upper bound of θ_y / θ (requires α ≥ 1).
    DyOverThetaUpper,
}

/// Evaluation methods for the eta invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    /// Log-accumulated q-product.
    QProduct,
    /// −(√6/4)(θ(3/2, τ) − 2θ(6, τ)).
    ThetaDifference,
}

fn check_alpha(alpha: f64) -> Result<()> {
    ensure(alpha > 0.0 && alpha.is_finite(), "alpha must be positive")
}

/// Evaluates θ(α, z).
///
/// For α < 1 the factorized path uses θ(α, z) = θ(1/α, z)/α so the number of
/// rows stays bounded as α → 0.
pub fn theta(alpha: f64, z: ModularPoint, method: ThetaMethod, cfg: &SeriesConfig) -> Result<EvalResult> {
    check_alpha(alpha)?;
    match method {
        ThetaMethod::Factorized => {
            if alpha < 1.0 {
                let r = factorized(1.0 / alpha, z, cfg)?;
                Ok(EvalResult { value: r.value / alpha, err_estimate: r.err_estimate / alpha, ..r })
            } else {
                factorized(alpha, z, cfg)
            }
        }
        ThetaMethod::DirectLattice => direct(alpha, z, cfg),
        ThetaMethod::AxisClosedForm => {
            ensure(z.x() == 0.0, "axis closed form needs x = 0")?;
            let y = z.y();
            let v = sqrt(y / alpha) * theta3(alpha * y, cfg)? * theta3(y / alpha, cfg)?;
            Ok(EvalResult { value: v, err_estimate: 4.0 * cfg.rel_tol * v, terms_used: 2 })
        }
    }
}

/// Production value of θ(α, z).
pub fn theta_value(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<f64> {
    Ok(theta(alpha, z, ThetaMethod::Factorized, cfg)?.value)
}

/// Row cutoff N = ⌈√(ln(1/tol)/(παy))⌉ + 2.
fn row_cutoff(alpha: f64, y: f64, tol: f64) -> usize {
    ceil(sqrt(log(1.0 / tol) / (PI * alpha * y))) as usize + 2
}

fn factorized(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<EvalResult> {
    let (x, y) = (z.x(), z.y());
    let xx = y / alpha;
    let n = row_cutoff(alpha, y, cfg.rel_tol);
    if n > cfg.max_terms {
        return Err(Error::MaxTerms { what: "theta rows", limit: cfg.max_terms });
    }
    let mut acc = Compensated::new();
    acc.add(theta1d(xx, 0.0, cfg)?);
    for m in 1..=n {
        let mf = m as f64;
        let w = exp(-PI * alpha * y * mf * mf);
        acc.add(2.0 * w * theta1d(xx, mf * x, cfg)?);
    }
    let pref = sqrt(xx);
    let value = pref * acc.value();
    // ϑ(X;Y) ≤ ϑ₃(X): bound the omitted rows by a geometric series.
    let next = n as f64 + 1.0;
    let tail = 2.0 * pref * theta3(xx, cfg)? * exp(-PI * alpha * y * next * next)
        / (1.0 - exp(-PI * alpha * y * (2.0 * next + 1.0)));
    Ok(EvalResult { value, err_estimate: tail + 4.0 * cfg.rel_tol * value, terms_used: 2 * n + 1 })
}

/// Index ranges of the direct double sum and a bound on everything omitted.
struct Window {
    rows: i64,
    half_width: i64,
    tail: f64,
}

fn window(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<Window> {
    let y = z.y();
    let l = log(10.0 / cfg.rel_tol);
    let rows = ceil(sqrt(l / (PI * alpha * y))) as i64 + 1;
    let half_width = ceil(sqrt(l * y / (PI * alpha))) as i64 + 1;
    let count = (2 * rows + 1) as u128 * (2 * half_width + 1) as u128;
    if count > cfg.max_terms as u128 {
        return Err(Error::MaxTerms { what: "direct lattice sum", limit: cfg.max_terms });
    }
    // Rows |m| > M: each row is at most ϑ₃(α/y) times e^{−παym²}.
    let r1 = rows as f64 + 1.0;
    let row_tail = 2.0 * theta3(alpha / y, cfg)? * exp(-PI * alpha * y * r1 * r1)
        / (1.0 - exp(-PI * alpha * y * (2.0 * r1 + 1.0)));
    // Inside a kept row, omitted n have |mx + n| ≥ W + 1/2.
    let w = half_width as f64 + 0.5;
    let col_tail = (2 * rows + 1) as f64 * 2.0 * exp(-PI * alpha * w * w / y)
        / (1.0 - exp(-PI * alpha * (2.0 * w + 1.0) / y));
    Ok(Window { rows, half_width, tail: row_tail + col_tail })
}

fn direct(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<EvalResult> {
    let (x, y) = (z.x(), z.y());
    let win = window(alpha, z, cfg)?;
    let mut acc = Compensated::new();
    let mut terms = 0usize;
    for m in -win.rows..=win.rows {
        let mf = m as f64;
        let centre = round(-mf * x) as i64;
        for n in centre - win.half_width..=centre + win.half_width {
            let u = mf * x + n as f64;
            acc.add(exp(-PI * alpha * (u * u / y + mf * mf * y)));
            terms += 1;
        }
    }
    let value = acc.value();
    Ok(EvalResult { value, err_estimate: win.tail + 1e-15 * value * 4.0, terms_used: terms })
}

/// θ and its first and mixed derivatives from one pass over the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaJet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    /// ∂²/∂x∂α (√α θ)
    pub ds_dx_sqrt: f64,
    /// ∂²/∂y∂α (√α θ)
    pub ds_dy_sqrt: f64,
}

/// Termwise-differentiated lattice sum.
///
/// With Q = (mx+n)²/y + m²y each term is e^{−παQ};
/// Q_x = 2m(mx+n)/y and Q_y = m² − (mx+n)²/y². The mixed derivatives use
/// ∂_α(√α e^{−παQ}) = e^{−παQ}(1/(2√α) − π√αQ), so
/// ∂_v∂_α(√α e^{−παQ}) = π√α Q_v e^{−παQ}(παQ − 3/2).
pub fn theta_jet(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<ThetaJet> {
    check_alpha(alpha)?;
    if alpha < 1.0 {
        // θ(α) = θ(β)/α with β = 1/α, and √αθ(α) = √βθ(β).
        let b = 1.0 / alpha;
        let j = jet_direct(b, z, cfg)?;
        return Ok(ThetaJet {
            value: j.value * b,
            dx: j.dx * b,
            dy: j.dy * b,
            ds_dx_sqrt: -b * b * j.ds_dx_sqrt,
            ds_dy_sqrt: -b * b * j.ds_dy_sqrt,
        });
    }
    jet_direct(alpha, z, cfg)
}

fn jet_direct(alpha: f64, z: ModularPoint, cfg: &SeriesConfig) -> Result<ThetaJet> {
    let (x, y) = (z.x(), z.y());
    let win = window(alpha, z, cfg)?;
    let (mut v, mut vx, mut vy, mut px, mut py) =
        (Compensated::new(), Compensated::new(), Compensated::new(), Compensated::new(), Compensated::new());
    let sa = sqrt(alpha);
    for m in -win.rows..=win.rows {
        let mf = m as f64;
        let centre = round(-mf * x) as i64;
        for n in centre - win.half_width..=centre + win.half_width {
            let u = mf * x + n as f64;
            let q = u * u / y + mf * mf * y;
            let e = exp(-PI * alpha * q);
            let qx = 2.0 * mf * u / y;
            let qy = mf * mf - u * u / (y * y);
            let mixed = PI * sa * e * (PI * alpha * q - 1.5);
            v.add(e);
            vx.add(-PI * alpha * qx * e);
            vy.add(-PI * alpha * qy * e);
            px.add(qx * mixed);
            py.add(qy * mixed);
        }
    }
    Ok(ThetaJet { value: v.value(), dx: vx.value(), dy: vy.value(), ds_dx_sqrt: px.value(), ds_dy_sqrt: py.value() })
}

/// One partial derivative of θ(α, z) (or of √α θ(α, z) for the mixed kinds).
pub fn theta_partial(alpha: f64, z: ModularPoint, which: ThetaPartial, cfg: &SeriesConfig) -> Result<f64> {
    let j = theta_jet(alpha, z, cfg)?;
    Ok(match which {
        ThetaPartial::Dx => j.dx,
        ThetaPartial::Dy => j.dy,
        ThetaPartial::DsDxSqrt => j.ds_dx_sqrt,
        ThetaPartial::DsDySqrt => j.ds_dy_sqrt,
    })
}

/// Lower bound max(1, √(y/α)) and upper bound θ(α, iy) = ϑ₃(α/y)ϑ₃(αy).
pub fn theta_bounds(alpha: f64, z: ModularPoint) -> Result<BoundPair> {
    check_alpha(alpha)?;
    let cfg = SeriesConfig::default();
    let y = z.y();
    let r = y / alpha;
    let lower = if r >= 1.0 { sqrt(r) } else { 1.0 };
    let upper = theta3(alpha / y, &cfg)? * theta3(alpha * y, &cfg)?;
    Ok(BoundPair { lower, upper })
}

/// Σ_{n≥1} n² e^{−c n²}, summed until terms stop mattering.
fn weighted_gauss(c: f64) -> f64 {
    let mut acc = Compensated::new();
    let mut n = 1.0f64;
    loop {
        let t = n * n * exp(-c * n * n);
        acc.add(t);
        if t < 1e-18 * acc.value() || n > 1e6 {
            return acc.value();
        }
        n += 1.0;
    }
}

/// Explicit envelopes on −θ_x/sin(2πx) and θ_y/θ.
pub fn theta_deriv_envelopes(alpha: f64, z: ModularPoint, which: ThetaEnvelope) -> Result<f64> {
    check_alpha(alpha)?;
    let y = z.y();
    let r = y / alpha;
    let small = PI / (PI + 2.0);
    match which {
        ThetaEnvelope::DxOverSinUpper | ThetaEnvelope::DxOverSinLower => {
            let upper = which == ThetaEnvelope::DxOverSinUpper;
            if r >= 0.2 {
                let m = mu(r)?;
                let factor = if upper { 1.0 + m } else { 1.0 - m };
                // Σ n² e^{−πy(n²α + 1/α)} = e^{−πy/α} Σ n² e^{−παyn²}
                let s = exp(-PI * y / alpha) * weighted_gauss(PI * alpha * y);
                Ok(8.0 * PI * factor * sqrt(r) * s)
            } else if r <= small {
                if upper {
                    Ok(2.0 / r * weighted_gauss(PI * alpha * y))
                } else {
                    let s = exp(-PI * alpha / (4.0 * y)) * weighted_gauss(PI * alpha * y);
                    Ok(2.0 * PI / r * s)
                }
            } else {
                Err(Error::Domain("y/alpha outside both envelope regimes"))
            }
        }
        ThetaEnvelope::DyOverThetaUpper => {
            ensure(alpha >= 1.0, "theta_y/theta envelope needs alpha >= 1")?;
            if r >= 1.0 {
                Ok(1.0 / (2.0 * y))
            } else {
                Ok(2.0 * PI * alpha / (y * y) * exp(-PI * alpha / y))
            }
        }
    }
}

/// √Im(τ) |η(τ)|², the modular-invariant weight of the eta function.
pub fn weighted_eta(tau: ModularPoint, method: EtaMethod, cfg: &SeriesConfig) -> Result<f64> {
    match method {
        EtaMethod::QProduct => {
            let (x, y) = (tau.x(), tau.y());
            // |q| = e^{−2πy}; |η|² = |q|^{1/12} Π |1 − qⁿ|².
            let mut acc = Compensated::new();
            acc.add(0.5 * log(y) - PI * y / 6.0);
            let mut n = 1usize;
            loop {
                let nf = n as f64;
                let r = exp(-2.0 * PI * y * nf);
                if r < 1e-18 {
                    break;
                }
                // ln|1 − rⁿe^{iφ}|² = ln(1 − 2r cos φ + r²)
                let phi = 2.0 * PI * nf * x;
                acc.add(log1p(-2.0 * r * cos(phi) + r * r));
                n += 1;
                if n > cfg.max_terms {
                    return Err(Error::MaxTerms { what: "eta product", limit: cfg.max_terms });
                }
            }
            Ok(exp(acc.value()))
        }
        EtaMethod::ThetaDifference => {
            let a = theta_value(1.5, tau, cfg)?;
            let b = theta_value(6.0, tau, cfg)?;
            Ok(-(sqrt(6.0) / 4.0) * (a - 2.0 * b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{apply_map, UnimodularMap};

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn pt(x: f64, y: f64) -> ModularPoint {
        ModularPoint::new(x, y).unwrap()
    }

    /// Independent oracle: a fixed 81×81 box, no window logic, no duality.
    fn theta_box(alpha: f64, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for m in -40..=40 {
            for n in -40..=40 {
                let (m, n) = (f64::from(m), f64::from(n));
                let u = m * x + n;
                s += (-PI * alpha * (u * u / y + m * m * y)).exp();
            }
        }
        s
    }

    #[test]
    fn theta_at_i_is_theta3_squared() {
        let t3 = theta3(1.0, &cfg()).unwrap();
        for m in [ThetaMethod::Factorized, ThetaMethod::DirectLattice, ThetaMethod::AxisClosedForm] {
            let v = theta(1.0, pt(0.0, 1.0), m, &cfg()).unwrap().value;
            assert!((v - t3 * t3).abs() < 1e-14, "{m:?}");
            assert!((v - 1.180_340_6).abs() < 1e-7);
        }
    }

    #[test]
    fn matches_box_oracle() {
        for &(a, x, y) in &[(1.5, 0.25, 1.1), (0.3, 0.4, 0.9), (6.0, 0.5, 0.87), (20.0, 0.1, 2.5), (0.05, 0.2, 1.3)] {
            let want = theta_box(a, x, y);
            for m in [ThetaMethod::Factorized, ThetaMethod::DirectLattice] {
                let r = theta(a, pt(x, y), m, &cfg()).unwrap();
                assert!((r.value - want).abs() < 1e-13 * want, "{a} {x} {y} {m:?}: {} vs {want}", r.value);
            }
        }
    }

    #[test]
    fn theta_3_2i_three_methods() {
        let z = pt(0.0, 2.0);
        let vals: alloc::vec::Vec<f64> = [ThetaMethod::Factorized, ThetaMethod::DirectLattice, ThetaMethod::AxisClosedForm]
            .iter()
            .map(|m| theta(3.0, z, *m, &cfg()).unwrap().value)
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-10);
            assert!((v - 1.017_966_608_325_9).abs() < 1e-12);
        }
    }

    #[test]
    fn invariant_under_inversion() {
        let z = pt(0.3, 1.4);
        let w = apply_map(&UnimodularMap::S, z, false);
        let a = theta_value(2.0, z, &cfg()).unwrap();
        let b = theta_value(2.0, w, &cfg()).unwrap();
        assert!((a - b).abs() < 1e-13 * a);
    }

    #[test]
    fn axis_form_rejects_off_axis() {
        assert!(theta(1.0, pt(0.1, 1.0), ThetaMethod::AxisClosedForm, &cfg()).is_err());
        assert!(theta(0.0, pt(0.0, 1.0), ThetaMethod::Factorized, &cfg()).is_err());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(theta_partial(1.3, pt(0.0, 1.7), ThetaPartial::Dx, &cfg()).unwrap(), 0.0);
        let z = pt(0.25, 1.1);
        let dx = theta_partial(1.5, z, ThetaPartial::Dx, &cfg()).unwrap();
        let dy = theta_partial(1.5, z, ThetaPartial::Dy, &cfg()).unwrap();
        assert!(dx < 0.0 && dy > 0.0);
        let h = 1e-5;
        let f = |x: f64, y: f64| theta_box(1.5, x, y);
        let fdx = (f(0.25 + h, 1.1) - f(0.25 - h, 1.1)) / (2.0 * h);
        let fdy = (f(0.25, 1.1 + h) - f(0.25, 1.1 - h)) / (2.0 * h);
        assert!((dx - fdx).abs() < 1e-8 && (dy - fdy).abs() < 1e-8);
    }

    #[test]
    fn mixed_partials_match_differences() {
        let g = |a: f64, x: f64, y: f64| a.sqrt() * theta_box(a, x, y);
        for &(a, x, y) in &[(1.0, 0.3, 1.2), (2.0, 0.5, 0.7), (0.6, 0.2, 1.5)] {
            let z = pt(x, y);
            let h = 1e-4;
            let fd_x = (g(a + h, x + h, y) - g(a + h, x - h, y) - g(a - h, x + h, y) + g(a - h, x - h, y)) / (4.0 * h * h);
            let fd_y = (g(a + h, x, y + h) - g(a + h, x, y - h) - g(a - h, x, y + h) + g(a - h, x, y - h)) / (4.0 * h * h);
            let px = theta_partial(a, z, ThetaPartial::DsDxSqrt, &cfg()).unwrap();
            let py = theta_partial(a, z, ThetaPartial::DsDySqrt, &cfg()).unwrap();
            assert!((px - fd_x).abs() < 1e-6, "{a}: {px} vs {fd_x}");
            assert!((py - fd_y).abs() < 1e-6, "{a}: {py} vs {fd_y}");
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(theta_bounds(1.0, pt(0.0, 4.0)).unwrap().lower, 2.0);
        assert_eq!(theta_bounds(4.0, pt(0.0, 1.0)).unwrap().lower, 1.0);
        let b = theta_bounds(3.0, pt(0.5, 2.0)).unwrap();
        let want = theta3(1.5, &cfg()).unwrap() * theta3(6.0, &cfg()).unwrap();
        assert!((b.upper - want).abs() < 1e-15);
        let v = theta_value(3.0, pt(0.5, 2.0), &cfg()).unwrap();
        assert!(b.lower <= v && v <= b.upper);
    }

    #[test]
    fn envelope_examples() {
        let e = theta_deriv_envelopes(1.0, pt(0.2, 3.0), ThetaEnvelope::DyOverThetaUpper).unwrap();
        assert!((e - 1.0 / 6.0).abs() < 1e-16);
        let e = theta_deriv_envelopes(6.0, pt(0.2, 1.5), ThetaEnvelope::DyOverThetaUpper).unwrap();
        let want = 2.0 * PI * 6.0 / 2.25 * (-4.0 * PI).exp();
        assert!((e - want).abs() < 1e-15 * want);
        let z = pt(0.2, 1.3);
        let q = -theta_partial(2.0, z, ThetaPartial::Dx, &cfg()).unwrap() / (2.0 * PI * 0.2).sin();
        let lo = theta_deriv_envelopes(2.0, z, ThetaEnvelope::DxOverSinLower).unwrap();
        let hi = theta_deriv_envelopes(2.0, z, ThetaEnvelope::DxOverSinUpper).unwrap();
        assert!(lo <= q && q <= hi, "{lo} {q} {hi}");
    }

    #[test]
    fn eta_at_i() {
        // Γ(1/4)² / (4π^{3/2})
        let closed = crate::scalar::gamma(0.25).powi(2) / (4.0 * PI.powf(1.5));
        let q = weighted_eta(pt(0.0, 1.0), EtaMethod::QProduct, &cfg()).unwrap();
        assert!((q - closed).abs() < 1e-14);
        assert!((q - 0.590_170_3).abs() < 1e-7);
        let t = weighted_eta(pt(0.0, 1.0), EtaMethod::ThetaDifference, &cfg()).unwrap();
        assert!((q - t).abs() < 1e-12);
    }

    #[test]
    fn eta_identity_off_axis() {
        let z = pt(0.3, 1.2);
        let q = weighted_eta(z, EtaMethod::QProduct, &cfg()).unwrap();
        let t = weighted_eta(z, EtaMethod::ThetaDifference, &cfg()).unwrap();
        assert!((q - t).abs() < 1e-10);
    }

    #[test]
    fn eta_is_largest_at_hexagonal_point() {
        let hex = weighted_eta(ModularPoint::hexagonal(), EtaMethod::QProduct, &cfg()).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let x = 0.5 * i as f64 / 19.0;
                let y = (1.0 - x * x).sqrt() + 2.0 * j as f64 / 19.0;
                let v = weighted_eta(pt(x, y), EtaMethod::QProduct, &cfg()).unwrap();
                assert!(v <= hex + 1e-15);
            }
        }
    }
}
