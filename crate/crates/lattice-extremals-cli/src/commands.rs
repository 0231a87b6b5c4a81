//! The eval, reduce, scan, find and verify verbs.

use std::io::Write;

use clap::{Args, ValueEnum};
use lattice_extremals::epstein::{
    bound_functions, zeta_chowla_selberg, zeta_direct, zeta_partial, BoundFunction, ZetaPartial,
};
use lattice_extremals::extremal::{
    divergence_probe, functional_eval, nelder_mead, pick_best, scan_points, seed_grid, verify_lemma,
    verify_minimum_principle, CuspLimit, LemmaParams, Mode, ProbeVerdict, RatioSpec, SUITE_IDS,
};
use lattice_extremals::modular::{classify_region, reduce as reduce_point, reduce_to_fundamental_domain};
use lattice_extremals::scalar::{mu, theta1d, theta3};
use lattice_extremals::theta::{theta, theta_jet, weighted_eta, EtaMethod, ThetaMethod};
use lattice_extremals::{EvalResult, ModularPoint};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{parse_complex, parse_range, parse_spec};
use crate::output::{fmt12, lemma_report, num, point, write_csv, write_json};
use crate::{CliError, Format, Global, Outcome};

const DEFAULT_GRID: (usize, usize) = (128, 128);

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("{what} requires {flag}")))
}

fn modular_point((x, y): (f64, f64)) -> Result<ModularPoint, CliError> {
    ModularPoint::new(x, y).map_err(|_| usage(format!("point {x}{y:+}i is not in the upper half-plane")))
}

/// Writes a flat object as JSON, or as a two-row CSV (keys, values).
fn emit_record(out: &mut impl Write, fmt: Format, record: Map<String, Value>) -> Result<(), CliError> {
    match fmt {
        Format::Json => write_json(out, &Value::Object(record))?,
        Format::Csv => {
            let keys: Vec<&str> = record.keys().map(String::as_str).collect();
            let vals = record
                .values()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            write_csv(out, &keys, &[vals])?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- eval

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Lattice theta θ(α, z).
    Theta,
    /// θ(α, z) with its x-, y- and mixed α-derivatives.
    ThetaJet,
    /// Epstein zeta ζ(s, z).
    Zeta,
    /// ∂ζ/∂x.
    ZetaDx,
    /// ∂ζ/∂y.
    ZetaDy,
    /// Eta invariant √Im τ |η(τ)|².
    Eta,
    /// Jacobi ϑ₃(x) = Σ e^{−πn²x}.
    Theta3,
    /// One-dimensional theta ϑ(x; y).
    Theta1d,
    /// Envelope function μ(x).
    Mu,
    /// Bound function 𝒜_s(y), ℬ_a(s, y) or ℬ_b(s, y).
    Bound,
    /// A ratio functional given by --spec.
    Functional,
    /// Region label of the (α, β) quadrant split.
    Region,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Production path (factorized theta, Fourier-expanded zeta, q-product eta).
    Default,
    /// Plain lattice sum (theta, zeta) or theta difference (eta).
    Direct,
    /// Closed form on the imaginary axis (theta only).
    Axis,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    As,
    Ba,
    Bb,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Quantity to evaluate.
    #[arg(value_enum)]
    pub quantity: Quantity,
    /// Point of the upper half-plane, X+Yi.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<(f64, f64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Real argument for theta3, theta1d and mu.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Second real argument (theta1d, bound).
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Bound function for `bound`.
    #[arg(long = "fn", value_enum)]
    pub bound: Option<BoundKind>,
    /// Functional for `functional`, e.g. ThetaRatio(1.5,3).
    #[arg(long, value_parser = parse_spec)]
    pub spec: Option<RatioSpec>,
    #[arg(long, value_enum, default_value = "default")]
    pub method: Method,
    /// Lattice cutoff for the direct zeta sum.
    #[arg(long, default_value_t = 200)]
    pub cutoff: usize,
}

fn eval_record(quantity: &str, r: EvalResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("quantity".into(), json!(quantity));
    m.insert("value".into(), num(r.value));
    m.insert("err_estimate".into(), num(r.err_estimate));
    m.insert("terms_used".into(), json!(r.terms_used));
    m
}

/// Kernels that do not track their own error report `null` for
/// err_estimate and terms_used.
fn plain_record(quantity: &str, value: f64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("quantity".into(), json!(quantity));
    m.insert("value".into(), num(value));
    m.insert("err_estimate".into(), Value::Null);
    m.insert("terms_used".into(), Value::Null);
    m
}

pub fn eval(a: &EvalArgs, g: &Global, out: &mut impl Write) -> Outcome {
    let cfg = g.config()?;
    let q = a.quantity;
    let name = q.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let name = name.as_str();
    if a.method == Method::Axis && q != Quantity::Theta {
        return Err(usage("--method axis applies to theta only"));
    }
    // Validate every required flag before computing anything.
    let record = match q {
        Quantity::Theta => {
            let (alpha, z) = (need(a.alpha, "--alpha", name)?, modular_point(need(a.z, "--z", name)?)?);
            let method = match a.method {
                Method::Default => ThetaMethod::Factorized,
                Method::Direct => ThetaMethod::DirectLattice,
                Method::Axis => ThetaMethod::AxisClosedForm,
            };
            eval_record(name, theta(alpha, z, method, &cfg)?)
        }
        Quantity::ThetaJet => {
            let (alpha, z) = (need(a.alpha, "--alpha", name)?, modular_point(need(a.z, "--z", name)?)?);
            let j = theta_jet(alpha, z, &cfg)?;
            let mut m = plain_record(name, j.value);
            m.insert("dx".into(), num(j.dx));
            m.insert("dy".into(), num(j.dy));
            m.insert("ds_dx_sqrt".into(), num(j.ds_dx_sqrt));
            m.insert("ds_dy_sqrt".into(), num(j.ds_dy_sqrt));
            m
        }
        Quantity::Zeta => {
            let (s, z) = (need(a.s, "--s", name)?, modular_point(need(a.z, "--z", name)?)?);
            let r = match a.method {
                Method::Direct => zeta_direct(s, z, a.cutoff)?,
                // ζ and the eta invariant are modular invariant; the
                // production paths expect reduced points.
                _ => zeta_chowla_selberg(s, reduce_point(z)?, &cfg)?,
            };
            eval_record(name, r)
        }
        Quantity::ZetaDx | Quantity::ZetaDy => {
            let (s, z) = (need(a.s, "--s", name)?, modular_point(need(a.z, "--z", name)?)?);
            let which = if q == Quantity::ZetaDx { ZetaPartial::Dx } else { ZetaPartial::Dy };
            plain_record(name, zeta_partial(s, z, which, &cfg)?)
        }
        Quantity::Eta => {
            let z = reduce_point(modular_point(need(a.z, "--z", name)?)?)?;
            let method = if a.method == Method::Direct { EtaMethod::ThetaDifference } else { EtaMethod::QProduct };
            plain_record(name, weighted_eta(z, method, &cfg)?)
        }
        Quantity::Theta3 => plain_record(name, theta3(need(a.x, "--x", name)?, &cfg)?),
        Quantity::Theta1d => {
            let (x, y) = (need(a.x, "--x", name)?, need(a.y, "--y", name)?);
            plain_record(name, theta1d(x, y, &cfg)?)
        }
        Quantity::Mu => plain_record(name, mu(need(a.x, "--x", name)?)?),
        Quantity::Bound => {
            let which = match need(a.bound, "--fn", name)? {
                BoundKind::As => BoundFunction::As,
                BoundKind::Ba => BoundFunction::Ba,
                BoundKind::Bb => BoundFunction::Bb,
            };
            let (s, y) = (need(a.s, "--s", name)?, need(a.y, "--y", name)?);
            let b = bound_functions(which, s, y)?;
            let mut m = plain_record(name, b.value);
            m.insert("outside_proof_range".into(), json!(b.outside_proof_range));
            m
        }
        Quantity::Functional => {
            let spec = a.spec.clone().ok_or_else(|| usage("functional requires --spec"))?;
            let z = modular_point(need(a.z, "--z", name)?)?;
            let mut m = plain_record(name, functional_eval(&spec, z, &cfg)?);
            m.insert("spec".into(), json!(spec.label()));
            m
        }
        Quantity::Region => {
            let (alpha, beta) = (need(a.alpha, "--alpha", name)?, need(a.beta, "--beta", name)?);
            let mut m = Map::new();
            m.insert("quantity".into(), json!(name));
            m.insert("region".into(), json!(format!("{:?}", classify_region(alpha, beta)?)));
            m
        }
    };
    emit_record(out, g.format_or(Format::Json), record)?;
    Ok(true)
}

// ---------------------------------------------------------------- reduce

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Point of the upper half-plane, X+Yi.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: (f64, f64),
}

pub fn reduce(a: &ReduceArgs, g: &Global, out: &mut impl Write) -> Outcome {
    let z = modular_point(a.z)?;
    let r = reduce_to_fundamental_domain(z)?;
    let word: Vec<&str> = r.word.iter().map(|w| w.label()).collect();
    let mut m = Map::new();
    m.insert("input".into(), point(z));
    m.insert("x".into(), num(r.reduced.x()));
    m.insert("y".into(), num(r.reduced.y()));
    m.insert("map".into(), json!(r.map.entries()));
    m.insert("reflected".into(), json!(r.reflected));
    m.insert("word".into(), json!(word.join(" ")));
    if g.format_or(Format::Json) == Format::Csv {
        m.remove("input");
        m.insert("map".into(), json!(r.map.entries().map(|v| v.to_string()).join(" ")));
    }
    emit_record(out, g.format_or(Format::Json), m)?;
    Ok(true)
}

// ---------------------------------------------------------------- scan

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Functional, e.g. ThetaRatio(1.5,3).
    #[arg(value_parser = parse_spec)]
    pub spec: RatioSpec,
    /// x range lo,hi.
    #[arg(long, value_parser = parse_range, default_value = "0,0.5", allow_hyphen_values = true)]
    pub x_range: (f64, f64),
    /// y range lo,hi.
    #[arg(long, value_parser = parse_range, default_value = "0.8660254037844386,2")]
    pub y_range: (f64, f64),
}

pub fn scan(a: &ScanArgs, g: &Global, out: &mut impl Write) -> Outcome {
    let cfg = g.config()?;
    let (n, m) = g.grid_or(DEFAULT_GRID);
    if n < 2 || m < 2 {
        return Err(usage("scan needs at least 2 points per axis"));
    }
    let pts = scan_points((a.x_range.0, a.x_range.1, n), (a.y_range.0, a.y_range.1, m))?;
    let values = pts
        .par_iter()
        .map(|&(x, y)| functional_eval(&a.spec, ModularPoint::new(x, y)?, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    match g.format_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                pts.iter().zip(&values).map(|(&(x, y), &v)| vec![fmt12(x), fmt12(y), fmt12(v)]).collect();
            write_csv(out, &["x", "y", "value"], &rows)?;
        }
        Format::Json => {
            let rows: Vec<Value> =
                pts.iter().zip(&values).map(|(&(x, y), &v)| json!({"x": num(x), "y": num(y), "value": num(v)})).collect();
            write_json(out, &json!({"spec": a.spec.label(), "grid_shape": [n, m], "rows": rows}))?;
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------- find

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Min,
    Max,
}

#[derive(Args, Debug)]
pub struct FindArgs {
    /// Functional, e.g. ZetaThetaRatio(2,6,4).
    #[arg(value_parser = parse_spec)]
    pub spec: RatioSpec,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Also probe along z = iy at these heights (comma-separated, increasing).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub probe: Option<Vec<f64>>,
}

fn limit_json(l: CuspLimit) -> Value {
    match l {
        CuspLimit::Finite(v) => num(v),
        CuspLimit::PlusInfinity => json!("+inf"),
        CuspLimit::MinusInfinity => json!("-inf"),
    }
}

pub fn find(a: &FindArgs, g: &Global, out: &mut impl Write) -> Outcome {
    let cfg = g.config()?;
    let mode = match a.mode {
        ModeArg::Min => Mode::Min,
        ModeArg::Max => Mode::Max,
    };
    if let Some(ys) = &a.probe {
        if ys.len() < 4 || ys[0] <= 0.0 || ys.windows(2).any(|w| w[1] <= w[0]) {
            return Err(usage("--probe needs at least 4 increasing positive heights"));
        }
    }
    let runs = seed_grid().par_iter().map(|&s| nelder_mead(&a.spec, mode, s, &cfg)).collect();
    let r = pick_best(mode, runs)?;
    let mut m = Map::new();
    m.insert("spec".into(), json!(a.spec.label()));
    m.insert("mode".into(), json!(if mode == Mode::Min { "min" } else { "max" }));
    m.insert("argopt".into(), point(r.argopt));
    m.insert("value".into(), num(r.value));
    m.insert("iterations".into(), json!(r.iterations));
    m.insert("converged".into(), json!(r.converged));
    m.insert("distance_to_hexagonal".into(), num(r.distance_to_hexagonal));
    m.insert("diagnosis".into(), r.diagnosis.map_or(Value::Null, |d| json!(d)));
    if let Some(ys) = &a.probe {
        let p = divergence_probe(&a.spec, mode, ys, &cfg)?;
        m.insert(
            "probe".into(),
            json!({
                "rows": p.rows.iter().map(|&(y, v)| json!({"y": num(y), "value": num(v)})).collect::<Vec<_>>(),
                "limit": limit_json(p.limit),
                "verdict": match p.verdict {
                    ProbeVerdict::EscapesToCusp => "escapes_to_cusp",
                    ProbeVerdict::Inconclusive => "inconclusive",
                },
                "note": "heuristic label from finitely many heights, not a proof",
            }),
        );
    }
    match g.format_or(Format::Json) {
        Format::Json => write_json(out, &Value::Object(m))?,
        Format::Csv => {
            m.remove("probe");
            m.remove("argopt");
            let mut flat = Map::new();
            flat.insert("spec".into(), m["spec"].clone());
            flat.insert("mode".into(), m["mode"].clone());
            flat.insert("x".into(), num(r.argopt.x()));
            flat.insert("y".into(), num(r.argopt.y()));
            for k in ["value", "iterations", "converged", "distance_to_hexagonal", "diagnosis"] {
                flat.insert(k.into(), m[k].clone());
            }
            emit_record(out, Format::Csv, flat)?;
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------- verify

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite id (see --list), an alias (lemma3a, lemma3b, lemma3c) or
    /// minimum-principle.
    #[arg(required_unless_present = "list")]
    pub suite: Option<String>,
    /// List suite ids and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    /// Sum-ratio denominator weights a_i (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<f64>,
    /// Sum-ratio denominator parameters α_i.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Vec<f64>,
    /// Sum-ratio numerator weights b_j.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Vec<f64>,
    /// Sum-ratio numerator parameters β_j.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Vec<f64>,
    /// Minimum principle: functional to check.
    #[arg(long, value_parser = parse_spec, default_value = "ZetaThetaRatio(2,6,4)")]
    pub spec: RatioSpec,
    /// Minimum principle: constants a,b,c (fractions p/q allowed).
    #[arg(long, value_parser = parse_abc, default_value = "4/3,48/73,2")]
    pub abc: (f64, f64, f64),
    /// Minimum principle: candidate minimizer.
    #[arg(long, value_parser = parse_complex, default_value = "0.5+0.8660254037844386i")]
    pub z0: (f64, f64),
}

fn parse_real(s: &str) -> Result<f64, String> {
    let err = || format!("invalid number '{s}'");
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (p.trim().parse().map_err(|_| err())?, q.trim().parse().map_err(|_| err())?);
            if q == 0.0 {
                return Err(err());
            }
            Ok(p / q)
        }
        None => s.trim().parse().map_err(|_| err()),
    }
}

fn parse_abc(s: &str) -> Result<(f64, f64, f64), String> {
    let v = s.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected a,b,c, got '{s}'")),
    }
}

fn suite_id(name: &str) -> Option<&'static str> {
    let canonical = match name {
        "lemma3a" => "lemma3a_floor",
        "lemma3b" => "lemma3b_dx",
        "lemma3c" => "lemma3c_dy",
        other => other,
    };
    SUITE_IDS.iter().copied().find(|&id| id == canonical)
}

pub fn verify(a: &VerifyArgs, g: &Global, out: &mut impl Write) -> Outcome {
    if a.list {
        let mut ids: Vec<&str> = SUITE_IDS.to_vec();
        ids.push("minimum_principle");
        write_json(out, &json!({ "suites": ids }))?;
        return Ok(true);
    }
    let grid = g.grid_or(DEFAULT_GRID);
    let name = a.suite.as_deref().unwrap_or_default();
    let report = if matches!(name, "minimum-principle" | "minimum_principle") {
        let (ma, mb, mc) = a.abc;
        verify_minimum_principle(&a.spec, ma, mb, mc, modular_point(a.z0)?, grid)?
    } else {
        let id = suite_id(name).ok_or_else(|| usage(format!("unknown suite '{name}'; run 'verify --list'")))?;
        let params = LemmaParams {
            alpha: a.alpha,
            beta: a.beta,
            s: a.s,
            k: a.k,
            y_max: a.y_max,
            a: a.a.clone(),
            alphas: a.alphas.clone(),
            b: a.b.clone(),
            betas: a.betas.clone(),
        };
        verify_lemma(id, &params, grid)?
    };
    match g.format_or(Format::Json) {
        Format::Json => write_json(out, &lemma_report(&report))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .hypotheses
                .iter()
                .map(|h| {
                    vec![
                        report.lemma_id.clone(),
                        h.name.to_string(),
                        fmt12(h.worst_margin),
                        fmt12(h.worst_point.x()),
                        fmt12(h.worst_point.y()),
                        h.points.to_string(),
                        report.passed.to_string(),
                    ]
                })
                .collect();
            write_csv(out, &["lemma_id", "hypothesis", "worst_margin", "x", "y", "points", "passed"], &rows)?;
        }
    }
    Ok(report.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_resolve() {
        assert_eq!(suite_id("lemma3b"), Some("lemma3b_dx"));
        assert_eq!(suite_id("lemma3c"), Some("lemma3c_dy"));
        assert_eq!(suite_id("lemma3a"), Some("lemma3a_floor"));
        assert_eq!(suite_id("ppp_2"), Some("ppp_2"));
        assert_eq!(suite_id("nope"), None);
    }

    #[test]
    fn fractions() {
        let (a, b, c) = parse_abc("4/3,48/73,2").unwrap();
        assert_eq!((a, b, c), (4.0 / 3.0, 48.0 / 73.0, 2.0));
        assert!(parse_abc("1,2").is_err());
        assert!(parse_abc("1/0,1,1").is_err());
    }
}
