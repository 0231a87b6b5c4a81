//! Scalar special functions: one-dimensional theta functions, Riemann zeta,
//! divisor sums, incomplete gamma and the modified Bessel function K_ν.

use core::f64::consts::PI;

use libm::{cos, cosh, exp, fabs, floor, lgamma, log, pow, sin, sinh, sqrt, tgamma};

use crate::error::{ensure, Error, Result};
use crate::quad::gl20_composite;
use crate::sum::Compensated;

/// Truncation controls shared by every series evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative truncation tolerance, in (0, 1e−3].
    pub rel_tol: f64,
    /// Hard cap on the number of terms of any single series (≥ 16).
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-14, max_terms: 100_000 }
    }
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        ensure(rel_tol > 0.0 && rel_tol <= 1e-3, "rel_tol must lie in (0, 1e-3]")?;
        ensure(max_terms >= 16, "max_terms must be at least 16")?;
        Ok(Self { rel_tol, max_terms })
    }

    /// Same cap, tolerance tightened to at most `tol`.
    pub fn tightened(self, tol: f64) -> Self {
        Self { rel_tol: self.rel_tol.min(tol), ..self }
    }
}

/// A lower/upper envelope pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

/// Below this argument theta series switch to their Poisson-dual form.
const THETA3_DUAL_BELOW: f64 = 0.05;
/// Crossover for ϑ(X;Y): the Gaussian-comb form has only positive terms,
/// so it is used whenever the Fourier form could cancel noticeably.
const THETA1D_DUAL_BELOW: f64 = 1.0;

/// Jacobi ϑ₃(x) = Σ_{n∈ℤ} e^{−πn²x}.
pub fn theta3(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    ensure(x > 0.0 && x.is_finite(), "theta3 needs x > 0")?;
    if x < THETA3_DUAL_BELOW {
        return Ok(theta3_direct(1.0 / x, cfg)? / sqrt(x));
    }
    theta3_direct(x, cfg)
}

fn theta3_direct(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    let mut acc = Compensated::new();
    acc.add(1.0);
    for n in 1..=cfg.max_terms {
        let nf = n as f64;
        acc.add(2.0 * exp(-PI * nf * nf * x));
        // Bound on everything after term n by a geometric series.
        let next = nf + 1.0;
        let tail = 2.0 * exp(-PI * next * next * x) / (1.0 - exp(-PI * (2.0 * next + 1.0) * x));
        if tail < cfg.rel_tol * acc.value() {
            return Ok(acc.value());
        }
    }
    Err(Error::MaxTerms { what: "theta3", limit: cfg.max_terms })
}

/// ϑ(X;Y) = Σ_{n∈ℤ} e^{−πn²X} e^{2πinY} = 1 + 2Σ_{n≥1} e^{−πn²X} cos(2πnY).
pub fn theta1d(x: f64, y: f64, cfg: &SeriesConfig) -> Result<f64> {
    theta1d_pair(x, y, cfg, false)
}

/// ∂ϑ(X;Y)/∂Y = −4π Σ_{n≥1} n e^{−πn²X} sin(2πnY).
pub fn theta1d_dy(x: f64, y: f64, cfg: &SeriesConfig) -> Result<f64> {
    theta1d_pair(x, y, cfg, true)
}

fn theta1d_pair(x: f64, y: f64, cfg: &SeriesConfig, deriv: bool) -> Result<f64> {
    ensure(x > 0.0 && x.is_finite(), "theta1d needs X > 0")?;
    ensure(y.is_finite(), "theta1d needs finite Y")?;
    let y = y - floor(y);
    if deriv && (y == 0.0 || y == 0.5) {
        return Ok(0.0);
    }
    if x < THETA1D_DUAL_BELOW {
        theta1d_comb(x, y, cfg, deriv)
    } else {
        theta1d_fourier(x, y, cfg, deriv)
    }
}

fn theta1d_fourier(x: f64, y: f64, cfg: &SeriesConfig, deriv: bool) -> Result<f64> {
    let mut acc = Compensated::new();
    // Scale against which truncation is judged: ϑ₃-like magnitude for the value,
    // the leading coefficient for the derivative.
    let scale = if deriv { 4.0 * PI * exp(-PI * x) } else { 1.0 };
    if !deriv {
        acc.add(1.0);
    }
    for n in 1..=cfg.max_terms {
        let nf = n as f64;
        let g = exp(-PI * nf * nf * x);
        if deriv {
            acc.add(-4.0 * PI * nf * g * sin(2.0 * PI * nf * y));
        } else {
            acc.add(2.0 * g * cos(2.0 * PI * nf * y));
        }
        let next = nf + 1.0;
        let ratio = exp(-PI * (2.0 * next + 1.0) * x);
        let lead = if deriv { 4.0 * PI * next } else { 2.0 };
        // (n+1+j)/(n+1) ≤ 2^j keeps the geometric bound valid for the n-weighted series.
        let tail = lead * exp(-PI * next * next * x) / (1.0 - if deriv { 2.0 * ratio } else { ratio });
        if ratio < 0.5 && tail < cfg.rel_tol * scale.max(fabs(acc.value())) {
            return Ok(acc.value());
        }
    }
    Err(Error::MaxTerms { what: "theta1d", limit: cfg.max_terms })
}

/// Poisson-dual form X^{−1/2} Σ_n e^{−π(n−Y)²/X} (and its Y-derivative).
fn theta1d_comb(x: f64, y: f64, cfg: &SeriesConfig, deriv: bool) -> Result<f64> {
    let pref = 1.0 / sqrt(x);
    let term = |n: f64| {
        let u = n - y;
        let g = exp(-PI * u * u / x);
        if deriv {
            g * 2.0 * PI * u / x
        } else {
            g
        }
    };
    let mut acc = Compensated::new();
    // y ∈ [0, 1): the nearest integers are 0 and 1.
    acc.add(term(0.0));
    acc.add(term(1.0));
    let scale = if deriv { 0.0 } else { 1.0 };
    for k in 1..=cfg.max_terms {
        let lo = -(k as f64);
        let hi = 1.0 + k as f64;
        acc.add(term(lo));
        acc.add(term(hi));
        // Omitted offsets satisfy |n − y| ≥ k + 1; the first is ≤ e^{−πk²/X}·q.
        let d = k as f64;
        let q = exp(-PI * (2.0 * d + 1.0) / x);
        let lead = exp(-PI * d * d / x) * if deriv { 2.0 * PI * (d + 1.0) / x } else { 1.0 };
        let tail = 2.0 * lead * q / (1.0 - if deriv { 2.0 * q } else { q });
        if q < 0.5 && tail < cfg.rel_tol * (scale + fabs(acc.value())).max(1e-300) {
            return Ok(pref * acc.value());
        }
        if deriv && tail < 1e-300 {
            return Ok(pref * acc.value());
        }
    }
    Err(Error::MaxTerms { what: "theta1d", limit: cfg.max_terms })
}

/// μ(X) = Σ_{n≥2} n² e^{−π(n²−1)X}.
pub fn mu(x: f64) -> Result<f64> {
    ensure(x >= 0.05 && x.is_finite(), "mu needs X >= 0.05")?;
    let mut acc = Compensated::new();
    let mut n = 2u32;
    loop {
        let nf = f64::from(n);
        let t = nf * nf * exp(-PI * (nf * nf - 1.0) * x);
        acc.add(t);
        let nn = nf + 1.0;
        let next = nn * nn * exp(-PI * (nn * nn - 1.0) * x);
        if next < 1e-17 * acc.value() {
            return Ok(acc.value());
        }
        n += 1;
        if n > 100_000 {
            return Err(Error::MaxTerms { what: "mu", limit: 100_000 });
        }
    }
}

/// Envelopes (ϑ̲(X), ϑ̄(X)) with −ϑ̄ sin 2πY ≤ ∂_Yϑ(X;Y) ≤ −ϑ̲ sin 2πY
/// whenever sin 2πY > 0.
///
/// For X > 1/5 these are 4πe^{−πX}(1 ∓ μ(X)); below that (the small-X regime
/// X < π/(π+2)) they are πe^{−π/(4X)}X^{−3/2} and X^{−3/2}.
pub fn deriv_envelopes(x: f64) -> Result<BoundPair> {
    ensure(x > 0.0 && x.is_finite(), "deriv_envelopes needs X > 0")?;
    if x > 0.2 {
        let m = mu(x)?;
        let base = 4.0 * PI * exp(-PI * x);
        Ok(BoundPair { lower: base * (1.0 - m), upper: base * (1.0 + m) })
    } else {
        let p = pow(x, -1.5);
        Ok(BoundPair { lower: PI * exp(-PI / (4.0 * x)) * p, upper: p })
    }
}

/// Bernoulli numbers B_2, B_4, …, B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin (50 direct terms, 10
/// correction terms).
pub fn riemann_zeta(s: f64) -> Result<f64> {
    ensure(s > 1.0 && s.is_finite(), "riemann_zeta needs s > 1")?;
    const N: u32 = 50;
    let mut acc = Compensated::new();
    // Summing small terms first.
    for n in (1..N).rev() {
        acc.add(pow(f64::from(n), -s));
    }
    let nf = f64::from(N);
    let ns = pow(nf, -s);
    acc.add(nf * ns / (s - 1.0));
    acc.add(0.5 * ns);
    // Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut fact = 2.0; // (2k)!
    let mut npow = ns / nf; // N^{−s−2k+1}
    for (k, b) in BERNOULLI.iter().enumerate() {
        acc.add(b / fact * rising * npow);
        let k2 = 2.0 * (k as f64 + 1.0);
        rising *= (s + k2 - 1.0) * (s + k2);
        fact *= (k2 + 1.0) * (k2 + 2.0);
        npow /= nf * nf;
    }
    Ok(acc.value())
}

/// σ_e(n) = Σ_{d | n} d^e.
pub fn divisor_sigma(n: u64, e: f64) -> f64 {
    assert!(n >= 1, "divisor_sigma needs n >= 1");
    let mut acc = Compensated::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc.add(pow(d as f64, e));
            let q = n / d;
            if q != d {
                acc.add(pow(q as f64, e));
            }
        }
        d += 1;
    }
    acc.value()
}

/// Γ(s) for real s (thin wrapper so callers need not depend on libm).
pub fn gamma(s: f64) -> f64 {
    tgamma(s)
}

/// ln |Γ(s)|.
pub fn ln_gamma(s: f64) -> f64 {
    lgamma(s)
}

/// Upper incomplete gamma Γ(s, x) = ∫_x^∞ t^{s−1} e^{−t} dt.
///
/// Power series for γ(s, x) when x < s + 1, modified Lentz continued
/// fraction otherwise.
pub fn incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    ensure(s > 0.0 && s.is_finite(), "incomplete_gamma needs s > 0")?;
    ensure(x >= 0.0 && x.is_finite(), "incomplete_gamma needs x >= 0")?;
    if x == 0.0 {
        return Ok(tgamma(s));
    }
    let prefix = exp(s * log(x) - x);
    if x < s + 1.0 {
        // γ(s,x) = x^s e^{−x} Σ_n x^n / (s (s+1) … (s+n))
        let mut term = 1.0 / s;
        let mut acc = Compensated::new();
        acc.add(term);
        let mut a = s;
        for _ in 0..10_000 {
            a += 1.0;
            term *= x / a;
            acc.add(term);
            if term < acc.value() * 1e-17 {
                return Ok(tgamma(s) - prefix * acc.value());
            }
        }
        Err(Error::NoConvergence("incomplete_gamma series"))
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if fabs(d) < TINY {
                d = TINY;
            }
            c = b + an / c;
            if fabs(c) < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if fabs(delta - 1.0) < 1e-16 {
                return Ok(prefix * h);
            }
        }
        Err(Error::NoConvergence("incomplete_gamma continued fraction"))
    }
}

/// Piecewise-in-s lower bound of Γ(s, x) for s ≥ 1; exact at s = 1, 2, 3.
pub fn incomplete_gamma_lower_bound(s: f64, x: f64) -> Result<f64> {
    ensure(s >= 1.0 && s.is_finite(), "lower bound needs s >= 1")?;
    ensure(x >= 0.0 && x.is_finite(), "lower bound needs x >= 0")?;
    let e = exp(-x);
    let wide = |s: f64| ((pow(x + 2.0, s) - pow(x, s) - pow(2.0, s)) / (2.0 * s) + tgamma(s)) * e;
    Ok(if s == 1.0 {
        e
    } else if s < 2.0 {
        wide(s)
    } else if s == 2.0 {
        (x + 1.0) * e
    } else if s < 3.0 {
        ((pow(x + 2.0, s - 1.0) + pow(x, s - 1.0) - pow(2.0, s - 1.0)) / 2.0 + tgamma(s)) * e
    } else if s == 3.0 {
        (x * x + 2.0 * x + 2.0) * e
    } else {
        wide(s)
    })
}

/// Modified Bessel function K_ν(y) = ∫₀^∞ e^{−y cosh t} cosh(νt) dt.
///
/// The integrand is scaled by e^{y} so it peaks near 1, truncated where it
/// falls below 1e−18 of its maximum, and integrated with composite 20-point
/// Gauss–Legendre, doubling panels until two passes agree to 1e−13.
pub fn bessel_k(nu: f64, y: f64) -> Result<f64> {
    ensure(nu >= 0.0 && nu.is_finite(), "bessel_k needs nu >= 0")?;
    ensure(y.is_finite(), "bessel_k needs finite y")?;
    if y < 1e-3 {
        return Err(Error::Domain("bessel_k rejects y < 1e-3"));
    }
    // cosh t − 1 = 2 sinh²(t/2) avoids cancellation near t = 0.
    let g = |t: f64| {
        let sh = sinh(0.5 * t);
        exp(-2.0 * y * sh * sh) * cosh(nu * t)
    };
    let mut t = 0.0;
    let mut peak = g(0.0);
    let mut prev = peak;
    loop {
        t += 0.25;
        let v = g(t);
        peak = peak.max(v);
        if v < prev && v < 1e-18 * peak {
            break;
        }
        prev = v;
        if t > 200.0 {
            return Err(Error::NoConvergence("bessel_k truncation"));
        }
    }
    let mut panels = 4;
    let mut old = gl20_composite(0.0, t, panels, g);
    while panels < 8192 {
        panels *= 2;
        let new = gl20_composite(0.0, t, panels, g);
        if fabs(new - old) <= 1e-13 * fabs(new) {
            return Ok(exp(-y) * new);
        }
        old = new;
    }
    Err(Error::NoConvergence("bessel_k quadrature"))
}

/// dK_ν/dy = −(K_{ν−1}(y) + K_{ν+1}(y))/2, using K_{−μ} = K_μ.
pub fn bessel_k_deriv(nu: f64, y: f64) -> Result<f64> {
    Ok(-0.5 * (bessel_k(fabs(nu - 1.0), y)? + bessel_k(nu + 1.0, y)?))
}

/// Upper bound e^{−(y−x)} (y/x)^{−1/2} on K_ν(y)/K_ν(x), valid for ν > 1/2, y > x > 0.
pub fn bessel_k_ratio_bound(nu: f64, x: f64, y: f64) -> Result<f64> {
    ensure(nu > 0.5, "ratio bound needs nu > 1/2")?;
    ensure(x > 0.0 && y > x, "ratio bound needs y > x > 0")?;
    Ok(exp(-(y - x)) / sqrt(y / x))
}
