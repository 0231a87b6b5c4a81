//! Points of the upper half-plane, the SL₂(ℤ) action and reduction to the
//! fundamental domain 𝒟 = {|z| ≥ 1, 0 ≤ Re z ≤ 1/2}.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use core::fmt;

use libm::{cos, fabs, sin, sqrt, trunc};

use crate::error::{ensure, Error, Result};

/// Tolerance used for membership tests on the boundary of 𝒟.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Default step cap for [`reduce_to_fundamental_domain`].
pub const MAX_REDUCTION_STEPS: usize = 10_000;

/// √3/2, the height of the hexagonal point.
pub const HEX_Y: f64 = 0.866_025_403_784_438_6;

/// A point z = x + iy with y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularPoint {
    x: f64,
    y: f64,
}

impl ModularPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        ensure(x.is_finite() && y.is_finite(), "point coordinates must be finite")?;
        ensure(y > 0.0, "point must lie in the upper half-plane (y > 0)")?;
        Ok(Self { x, y })
    }

    /// The hexagonal point e^{iπ/3}.
    pub const fn hexagonal() -> Self {
        Self { x: 0.5, y: HEX_Y }
    }

    /// The square-lattice point i.
    pub const fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn abs2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Euclidean distance to another point.
    pub fn distance(&self, other: &ModularPoint) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        sqrt(dx * dx + dy * dy)
    }

    /// Whether the point lies in the closure of 𝒟 up to [`BOUNDARY_TOL`].
    pub fn in_fundamental_domain(&self) -> bool {
        self.x >= -BOUNDARY_TOL && self.x <= 0.5 + BOUNDARY_TOL && self.abs2() >= 1.0 - BOUNDARY_TOL
    }
}

impl fmt::Display for ModularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// An integer matrix (a b; c d) with ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMap {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl UnimodularMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        ensure(a * d - b * c == 1, "map must have determinant 1")?;
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    /// z ↦ −1/z.
    pub const S: Self = Self { a: 0, b: 1, c: -1, d: 0 };
    /// z ↦ z + 1.
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    /// z ↦ z − 1.
    pub const T_INV: Self = Self { a: 1, b: -1, c: 0, d: 1 };

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Whether the map acts as the identity (±I).
    pub fn is_identity(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }
}

/// Generators of the extended group acting on ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// z ↦ −1/z
    S,
    /// z ↦ z + 1
    T,
    /// z ↦ z − 1
    TInv,
    /// z ↦ −z̄
    R,
}

impl Generator {
    pub fn label(&self) -> &'static str {
        match self {
            Generator::S => "S",
            Generator::T => "T",
            Generator::TInv => "T^-1",
            Generator::R => "R",
        }
    }

    /// Applies this generator to a point.
    pub fn apply(&self, z: ModularPoint) -> ModularPoint {
        match self {
            Generator::S => apply_map(&UnimodularMap::S, z, false),
            Generator::T => ModularPoint { x: z.x + 1.0, y: z.y },
            Generator::TInv => ModularPoint { x: z.x - 1.0, y: z.y },
            Generator::R => ModularPoint { x: -z.x, y: z.y },
        }
    }
}

/// Applies generators left to right: `word[0]` acts first.
pub fn apply_word(z: ModularPoint, word: &[Generator]) -> ModularPoint {
    word.iter().fold(z, |p, g| g.apply(p))
}

/// Outcome of [`reduce_to_fundamental_domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    pub reduced: ModularPoint,
    /// Applying `map` and then, if `reflected`, x ↦ −x reproduces `reduced`.
    pub map: UnimodularMap,
    pub reflected: bool,
    /// Generators in the order they were applied.
    pub word: Vec<Generator>,
}

/// Möbius action (az+b)/(cz+d), followed by x ↦ −x when `reflect` is set.
pub fn apply_map(map: &UnimodularMap, z: ModularPoint, reflect: bool) -> ModularPoint {
    let (a, b, c, d) = (map.a as f64, map.b as f64, map.c as f64, map.d as f64);
    // (az+b)/(cz+d) = (az+b)(c z̄ + d)/|cz+d|²
    let nr = a * z.x + b;
    let ni = a * z.y;
    let dr = c * z.x + d;
    let di = c * z.y;
    let den = dr * dr + di * di;
    let x = (nr * dr + ni * di) / den;
    // Im = (ad − bc) y / |cz+d|² = y / |cz+d|².
    let y = z.y / den;
    ModularPoint { x: if reflect { -x } else { x }, y }
}

/// Nearest integer with ties broken toward zero.
fn round_ties_to_zero(x: f64) -> f64 {
    let t = trunc(x);
    let frac = x - t;
    if fabs(frac) > 0.5 {
        t + frac.signum()
    } else {
        t
    }
}

/// Maps z into the closed fundamental domain: repeatedly translate x into
/// [−1/2, 1/2] and invert while |z| < 1, then reflect to x ≥ 0.
pub fn reduce_to_fundamental_domain(z: ModularPoint) -> Result<ReductionResult> {
    reduce_with_limit(z, MAX_REDUCTION_STEPS)
}

pub fn reduce_with_limit(z: ModularPoint, max_steps: usize) -> Result<ReductionResult> {
    let mut p = z;
    let mut map = UnimodularMap::IDENTITY;
    let mut word = Vec::new();
    let mut steps = 0usize;
    loop {
        let k = round_ties_to_zero(p.x);
        if k != 0.0 {
            let n = k as i64;
            steps += n.unsigned_abs() as usize;
            if steps > max_steps {
                return Err(Error::NoConvergence("fundamental-domain reduction"));
            }
            p.x -= k;
            let (g, m) = if n > 0 {
                (Generator::TInv, UnimodularMap::T_INV)
            } else {
                (Generator::T, UnimodularMap::T)
            };
            for _ in 0..n.unsigned_abs() {
                word.push(g);
                map = m.compose(&map);
            }
        }
        if p.abs2() < 1.0 - 1e-15 {
            steps += 1;
            if steps > max_steps {
                return Err(Error::NoConvergence("fundamental-domain reduction"));
            }
            p = apply_map(&UnimodularMap::S, p, false);
            word.push(Generator::S);
            map = UnimodularMap::S.compose(&map);
        } else {
            break;
        }
    }
    // Recompute from the accumulated map so the stated invariant holds exactly
    // up to one Möbius evaluation.
    let direct = apply_map(&map, z, false);
    let reflected = direct.x < 0.0;
    if reflected {
        word.push(Generator::R);
    }
    let reduced = ModularPoint { x: fabs(direct.x), y: direct.y };
    Ok(ReductionResult { reduced, map, reflected, word })
}

/// Convenience: the reduced representative only.
pub fn reduce(z: ModularPoint) -> Result<ModularPoint> {
    Ok(reduce_to_fundamental_domain(z)?.reduced)
}

/// The four open (α, β) regions and their common boundary β = α or αβ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// β > α, αβ > 1
    I,
    /// β < α, αβ > 1
    II,
    /// β < α, αβ < 1
    III,
    /// β > α, αβ < 1
    IV,
    Boundary,
}

pub fn classify_region(alpha: f64, beta: f64) -> Result<Region> {
    ensure(alpha > 0.0 && beta > 0.0, "alpha and beta must be positive")?;
    let prod = alpha * beta;
    Ok(if beta == alpha || prod == 1.0 {
        Region::Boundary
    } else {
        match (beta > alpha, prod > 1.0) {
            (true, true) => Region::I,
            (false, true) => Region::II,
            (false, false) => Region::III,
            (true, false) => Region::IV,
        }
    })
}

/// Boundary curves of 𝒟.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCurve {
    /// x = 0, y = t ≥ 1.
    Gamma1,
    /// z = e^{it}, t ∈ [π/3, π/2].
    Gamma2,
    /// x = 1/2, y = t ≥ √3/2.
    Gamma3,
}

pub fn boundary_point(curve: BoundaryCurve, t: f64) -> Result<ModularPoint> {
    ensure(t.is_finite(), "curve parameter must be finite")?;
    match curve {
        BoundaryCurve::Gamma1 => {
            ensure(t >= 1.0, "Gamma1 needs t >= 1")?;
            Ok(ModularPoint { x: 0.0, y: t })
        }
        BoundaryCurve::Gamma2 => {
            ensure((FRAC_PI_3..=FRAC_PI_2).contains(&t), "Gamma2 needs t in [pi/3, pi/2]")?;
            if t == FRAC_PI_3 {
                return Ok(ModularPoint::hexagonal());
            }
            if t == FRAC_PI_2 {
                return Ok(ModularPoint::i());
            }
            Ok(ModularPoint { x: cos(t), y: sin(t) })
        }
        BoundaryCurve::Gamma3 => {
            ensure(t >= HEX_Y, "Gamma3 needs t >= sqrt(3)/2")?;
            Ok(ModularPoint { x: 0.5, y: t })
        }
    }
}
