use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, pow, sin, sqrt};

use super::functional::{functional_eval, linspace};
use super::RatioSpec;
use crate::epstein::FourierRow;
use crate::error::{ensure, Error, Result};
use crate::modular::{ModularPoint, HEX_Y};
use crate::scalar::SeriesConfig;
use crate::theta::{theta_jet, ThetaJet};

/// Registered suite identifiers.
pub const SUITE_IDS: [&str; 12] = [
    "montgomery_dx",
    "montgomery_dy",
    "sqrt_ordering",
    "ppp_1",
    "ppp_2",
    "ppp_3",
    "arc_monotone",
    "lemma3b_dx",
    "lemma3c_dy",
    "lemma3a_floor",
    "sum_ratio_dx",
    "sum_ratio_dy",
];

/// Margins at or above this count as passing.
const MARGIN_TOL: f64 = -1e-12;

/// Parameters of a suite; each suite reads the fields it needs and rejects
/// values outside the hypotheses of the corresponding statement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LemmaParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub s: Option<f64>,
    /// Power of θ in ζ/θ^k; defaults to 2s.
    pub k: Option<f64>,
    /// Upper end of the y-range for suites on unbounded regions.
    pub y_max: Option<f64>,
    /// Sum-ratio weights and parameters: Σ b_j θ(β_j) / Σ a_i θ(α_i).
    pub a: Vec<f64>,
    pub alphas: Vec<f64>,
    pub b: Vec<f64>,
    pub betas: Vec<f64>,
}

/// Worst margin of one checked inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisMargin {
    pub name: &'static str,
    pub worst_margin: f64,
    pub worst_point: ModularPoint,
    pub points: usize,
}

/// Result of a grid sign check. `worst_margin` is the smallest value of the
/// quantity that the statement asserts to be nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub passed: bool,
    pub grid_shape: (usize, usize),
    pub worst_point: ModularPoint,
    pub worst_margin: f64,
    pub params: LemmaParams,
    /// Per-inequality breakdown (one entry for single-inequality suites).
    pub hypotheses: Vec<HypothesisMargin>,
}

struct Worst {
    name: &'static str,
    margin: f64,
    point: ModularPoint,
    points: usize,
}

impl Worst {
    fn new(name: &'static str) -> Self {
        Self { name, margin: f64::INFINITY, point: ModularPoint::hexagonal(), points: 0 }
    }

    fn push(&mut self, x: f64, y: f64, margin: f64) -> Result<()> {
        self.points += 1;
        // NaN must not hide behind a comparison.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(margin >= self.margin) {
            self.margin = margin;
            self.point = ModularPoint::new(x, y)?;
        }
        Ok(())
    }

    fn finish(self) -> HypothesisMargin {
        HypothesisMargin { name: self.name, worst_margin: self.margin, worst_point: self.point, points: self.points }
    }
}

fn report(id: &str, grid: (usize, usize), params: LemmaParams, hypotheses: Vec<HypothesisMargin>) -> LemmaReport {
    let worst = hypotheses
        .iter()
        .min_by(|a, b| a.worst_margin.total_cmp(&b.worst_margin))
        .cloned()
        .unwrap_or(HypothesisMargin { name: "", worst_margin: f64::NAN, worst_point: ModularPoint::hexagonal(), points: 0 });
    LemmaReport {
        lemma_id: id.to_string(),
        passed: worst.worst_margin >= MARGIN_TOL,
        grid_shape: grid,
        worst_point: worst.worst_point,
        worst_margin: worst.worst_margin,
        params,
        hypotheses,
    }
}

fn need(v: Option<f64>, msg: &'static str) -> Result<f64> {
    v.filter(|x| x.is_finite()).ok_or(Error::Domain(msg))
}

/// Left end of the fundamental-domain row at height y.
fn row_x_min(y: f64) -> f64 {
    if y >= 1.0 { 0.0 } else { sqrt((1.0 - y * y).max(0.0)).min(0.5) }
}

/// Points of 𝒟_𝒢 ∩ {y_lo ≤ y ≤ y_hi} row by row: m heights, n abscissae per
/// row spanning the row's intersection with the domain. With `interior`
/// the abscissae avoid the row ends (for quotients by sin 2πx).
fn domain_rows(n: usize, m: usize, y_lo: f64, y_hi: f64, interior: bool) -> Vec<(f64, Vec<f64>)> {
    linspace(y_lo.max(HEX_Y), y_hi, m)
        .map(|y| {
            let lo = row_x_min(y);
            let xs = if interior {
                (0..n).map(|i| lo + (0.5 - lo) * (i + 1) as f64 / (n + 1) as f64).collect()
            } else {
                linspace(lo, 0.5, n).collect()
            };
            (y, xs)
        })
        .collect()
}

fn check_grid(grid: (usize, usize)) -> Result<()> {
    ensure(grid.0 >= 2 && grid.1 >= 2, "grid must be at least 2x2")
}

fn jet(alpha: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<ThetaJet> {
    theta_jet(alpha, ModularPoint::new(x, y)?, cfg)
}

/// Runs a registered sign-check suite on a grid (n_x, n_y). One-dimensional
/// suites (boundary segments and the arc) use n_y points and report shape (1, n_y).
pub fn verify_lemma(suite_id: &str, params: &LemmaParams, grid: (usize, usize)) -> Result<LemmaReport> {
    check_grid(grid)?;
    let cfg = SeriesConfig::default();
    let (n, m) = grid;
    let p = params.clone();
    match suite_id {
        "montgomery_dx" | "montgomery_dy" => {
            let alpha = need(p.alpha, "suite needs alpha")?;
            ensure(alpha >= 1.0, "Montgomery's lemmas need alpha >= 1")?;
            let y_max = p.y_max.unwrap_or(3.0);
            let dx = suite_id == "montgomery_dx";
            let mut w = Worst::new(if dx { "-theta_x" } else { "theta_y" });
            for (y, xs) in domain_rows(n, m, HEX_Y, y_max, false) {
                for x in xs {
                    let j = jet(alpha, x, y, &cfg)?;
                    w.push(x, y, if dx { -j.dx } else { j.dy })?;
                }
            }
            Ok(report(suite_id, grid, p, alloc::vec![w.finish()]))
        }
        "sqrt_ordering" => {
            let alpha = need(p.alpha, "suite needs alpha")?;
            let beta = need(p.beta, "suite needs beta")?;
            ensure(beta > alpha && alpha >= 1.0, "sqrt ordering needs beta > alpha >= 1")?;
            let y_max = p.y_max.unwrap_or(3.0);
            let mut w = Worst::new("sqrt(beta)theta(beta) - sqrt(alpha)theta(alpha)");
            for (y, xs) in domain_rows(n, m, HEX_Y, y_max, false) {
                for x in xs {
                    let tb = jet(beta, x, y, &cfg)?.value;
                    let ta = jet(alpha, x, y, &cfg)?.value;
                    w.push(x, y, sqrt(beta) * tb - sqrt(alpha) * ta)?;
                }
            }
            Ok(report(suite_id, grid, p, alloc::vec![w.finish()]))
        }
        "ppp_1" | "ppp_2" | "ppp_3" => {
            let s = need(p.s, "suite needs s")?;
            ensure(s >= 1.0, "the mixed-derivative lemma needs s >= 1")?;
            let y_max = p.y_max.unwrap_or(10.0);
            // (x, y range, sign asserted for P = ∂y∂s(√s θ(s, z)))
            let (x, lo, hi, sign, name) = match suite_id {
                "ppp_1" => (0.5, HEX_Y, y_max, -1.0, "-P on x=1/2, y>=sqrt(3)/2"),
                "ppp_2" => (0.5, 0.5, HEX_Y, 1.0, "P on x=1/2, 1/2<=y<=sqrt(3)/2"),
                _ => (0.0, 1.0, y_max, -1.0, "-P on x=0, y>=1"),
            };
            let mut w = Worst::new(name);
            for y in linspace(lo, hi, m) {
                w.push(x, y, sign * jet(s, x, y, &cfg)?.ds_dy_sqrt)?;
            }
            Ok(report(suite_id, (1, m), p, alloc::vec![w.finish()]))
        }
        "arc_monotone" => {
            let alpha = need(p.alpha, "suite needs alpha")?;
            let beta = need(p.beta, "suite needs beta")?;
            ensure(beta > alpha && alpha > 0.0, "arc monotonicity needs beta > alpha > 0")?;
            let mut w = Worst::new("-d/dt [theta(beta)/theta(alpha)](e^{it})");
            for t in linspace(PI / 3.0, PI / 2.0, m) {
                let (x, y) = (cos(t), sin(t));
                let (ja, jb) = (jet(alpha, x, y, &cfg)?, jet(beta, x, y, &cfg)?);
                let rx = (jb.dx * ja.value - jb.value * ja.dx) / (ja.value * ja.value);
                let ry = (jb.dy * ja.value - jb.value * ja.dy) / (ja.value * ja.value);
                w.push(x, y, -(rx * -sin(t) + ry * cos(t)))?;
            }
            Ok(report(suite_id, (1, m), p, alloc::vec![w.finish()]))
        }
        "lemma3b_dx" | "lemma3c_dy" | "lemma3a_floor" => {
            let s = need(p.s, "suite needs s")?;
            let alpha = need(p.alpha, "suite needs alpha")?;
            ensure(s > 1.0, "needs s > 1")?;
            ensure(alpha >= 3.0 * s, "needs alpha >= 3s")?;
            let k = p.k.unwrap_or(2.0 * s);
            ensure(k > 0.0 && k <= 2.0 * s, "needs 0 < k <= 2s")?;
            let hs = zeta_theta_suite(suite_id, s, alpha, k, grid, p.y_max, &cfg)?;
            Ok(report(suite_id, grid, p, alloc::vec![hs]))
        }
        "sum_ratio_dx" | "sum_ratio_dy" => {
            ensure(p.a.len() == p.alphas.len() && p.b.len() == p.betas.len(), "weights and parameters must pair up")?;
            ensure(!p.a.is_empty() && !p.b.is_empty(), "suite needs weights")?;
            ensure(p.a.iter().chain(&p.b).all(|&v| v >= 0.0), "weights must be nonnegative")?;
            let amax = p.alphas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let bmin = p.betas.iter().cloned().fold(f64::INFINITY, f64::min);
            ensure(bmin >= amax && amax >= 1.0, "needs min beta >= max alpha >= 1")?;
            let y_max = p.y_max.unwrap_or(3.0);
            let ratio = |x: f64, y: f64| -> Result<(f64, f64)> {
                let (mut nv, mut nx, mut ny, mut dv, mut dx, mut dy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
                for (w, b) in p.b.iter().zip(&p.betas) {
                    let j = jet(*b, x, y, &cfg)?;
                    nv += w * j.value;
                    nx += w * j.dx;
                    ny += w * j.dy;
                }
                for (w, a) in p.a.iter().zip(&p.alphas) {
                    let j = jet(*a, x, y, &cfg)?;
                    dv += w * j.value;
                    dx += w * j.dx;
                    dy += w * j.dy;
                }
                Ok(((nx * dv - nv * dx) / (dv * dv), (ny * dv - nv * dy) / (dv * dv)))
            };
            if suite_id == "sum_ratio_dx" {
                let mut w = Worst::new("d/dx sum ratio");
                for (y, xs) in domain_rows(n, m, HEX_Y, y_max, false) {
                    for x in xs {
                        w.push(x, y, ratio(x, y)?.0)?;
                    }
                }
                Ok(report(suite_id, grid, p, alloc::vec![w.finish()]))
            } else {
                let mut w = Worst::new("-d/dy sum ratio on x=1/2");
                for y in linspace(HEX_Y, p.y_max.unwrap_or(10.0), m) {
                    w.push(0.5, y, -ratio(0.5, y)?.1)?;
                }
                Ok(report(suite_id, (1, m), p, alloc::vec![w.finish()]))
            }
        }
        _ => Err(Error::UnknownSuite),
    }
}

/// The three ζ/θ^k statements, with W = ζ(s, z)/θ(α, z)^k:
/// lemma3b_dx: −W_x/(W sin 2πx) > 0 on 𝒟_𝒢 ∩ {y ≤ 2};
/// lemma3c_dy: W_y/W > 0 on [0, 1/2] × [4/3, 2];
/// lemma3a_floor: W(z)/W(e^{iπ/3}) − 1 > 0 on [0, 1/2] × [2, y_max].
fn zeta_theta_suite(
    id: &str,
    s: f64,
    alpha: f64,
    k: f64,
    (n, m): (usize, usize),
    y_max: Option<f64>,
    cfg: &SeriesConfig,
) -> Result<HypothesisMargin> {
    match id {
        "lemma3b_dx" => {
            let mut w = Worst::new("-W_x/(W sin 2pi x)");
            for (y, xs) in domain_rows(n, m, HEX_Y, y_max.unwrap_or(2.0), true) {
                let row = FourierRow::new(s, y, cfg)?;
                for x in xs {
                    let sn = sin(2.0 * PI * x);
                    if sn < 1e-8 {
                        // degenerate row at the corner e^{iπ/3}
                        continue;
                    }
                    let j = jet(alpha, x, y, cfg)?;
                    let margin = row.dx_over_sin(x) / row.value(x) - k * (-j.dx / sn) / j.value;
                    w.push(x, y, margin)?;
                }
            }
            Ok(w.finish())
        }
        "lemma3c_dy" => {
            let mut w = Worst::new("W_y/W");
            for y in linspace(4.0 / 3.0, y_max.unwrap_or(2.0), m) {
                let row = FourierRow::new(s, y, cfg)?;
                for x in linspace(0.0, 0.5, n) {
                    let j = jet(alpha, x, y, cfg)?;
                    w.push(x, y, row.dy(x) / row.value(x) - k * j.dy / j.value)?;
                }
            }
            Ok(w.finish())
        }
        _ => {
            let hex = ModularPoint::hexagonal();
            let w_of = |row: &FourierRow, x: f64, y: f64| -> Result<f64> {
                Ok(row.value(x) / pow(jet(alpha, x, y, cfg)?.value, k))
            };
            let w_hex = w_of(&FourierRow::new(s, hex.y(), cfg)?, hex.x(), hex.y())?;
            let mut w = Worst::new("W/W(hex) - 1");
            for y in linspace(2.0, y_max.unwrap_or(10.0), m) {
                let row = FourierRow::new(s, y, cfg)?;
                for x in linspace(0.0, 0.5, n) {
                    w.push(x, y, w_of(&row, x, y)? / w_hex - 1.0)?;
                }
            }
            Ok(w.finish())
        }
    }
}

const FD_STEP: f64 = 1e-6;
const FD_TOL: f64 = 1e-13;

/// Checks the hypotheses of the refined minimum principle for W = `spec`:
///
/// 1. ∂_y W > 0 on [0, 1/2] × [a, c];
/// 2. ∂_x W < 0 (as −∂_x W / sin 2πx > 0) for interior x on [0, 1/2] × [b, c];
/// 3. W(z) > W(z₀) at 20 points with y geometric in [c, 10c];
/// 4. a/(1/4 + a²) ≥ b.
///
/// Derivatives are central differences of [`functional_eval`] with step
/// 1e−6 and series tolerance 1e−13.
pub fn verify_minimum_principle(
    spec: &RatioSpec,
    a: f64,
    b: f64,
    c: f64,
    z0: ModularPoint,
    grid: (usize, usize),
) -> Result<LemmaReport> {
    spec.validate()?;
    check_grid(grid)?;
    ensure(a.is_finite() && b.is_finite() && c.is_finite(), "a, b, c must be finite")?;
    ensure(b > 0.0 && b < a, "needs 0 < b < a")?;
    ensure(a > HEX_Y, "needs a > sqrt(3)/2")?;
    ensure(c > a, "needs c > a")?;
    let cfg = SeriesConfig::default().tightened(FD_TOL);
    let f = |x: f64, y: f64| functional_eval(spec, ModularPoint::new(x, y)?, &cfg);
    let (n, m) = grid;

    let mut h1 = Worst::new("d_y W on [0,1/2]x[a,c]");
    for y in linspace(a, c, m) {
        for x in linspace(0.0, 0.5, n) {
            let d = (f(x, y + FD_STEP)? - f(x, y - FD_STEP)?) / (2.0 * FD_STEP);
            h1.push(x, y, d)?;
        }
    }
    let mut h2 = Worst::new("-d_x W / sin(2 pi x) on [0,1/2]x[b,c]");
    for y in linspace(b, c, m) {
        for i in 0..n {
            let x = 0.5 * (i + 1) as f64 / (n + 1) as f64;
            let d = (f(x + FD_STEP, y)? - f(x - FD_STEP, y)?) / (2.0 * FD_STEP);
            h2.push(x, y, -d / sin(2.0 * PI * x))?;
        }
    }
    let w0 = functional_eval(spec, z0, &cfg)?;
    let mut h3 = Worst::new("W(z) - W(z0) on y >= c");
    for i in 0..20 {
        let y = c * pow(10.0, i as f64 / 19.0);
        let x = [0.0, 0.25, 0.5][i % 3];
        h3.push(x, y, f(x, y)? - w0)?;
    }
    let mut h4 = Worst::new("a/(1/4+a^2) - b");
    h4.push(0.5, a, a / (0.25 + a * a) - b)?;

    let params = LemmaParams { y_max: Some(c), ..LemmaParams::default() };
    // The geometric constraint holds with equality at (4/3, 48/73); the
    // margin tolerance absorbs its rounding.
    Ok(report("minimum_principle", grid, params, alloc::vec![h1.finish(), h2.finish(), h3.finish(), h4.finish()]))
}
