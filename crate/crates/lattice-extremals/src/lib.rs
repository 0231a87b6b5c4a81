//! Lattice theta functions, Epstein zeta functions and the Dedekind-eta
//! invariant on the modular upper half-plane, together with tools that
//! search for extremal lattice shapes and check derivative signs on grids.
//!
//! The crate is `no_std` (it needs `alloc`); all transcendental functions
//! come from [`libm`].
//!
//! Module map:
//!
//! - [`modular`]: points of ℍ, SL₂(ℤ) action, reduction to the fundamental
//!   domain 𝒟 = {|z| ≥ 1, 0 ≤ x ≤ 1/2}, boundary curves, (α, β) regions.
//! - [`scalar`]: one-dimensional theta functions, Riemann zeta, divisor sums,
//!   incomplete gamma, Bessel K and the envelope/bound helpers built on them.
//! - [`theta`]: θ(α, z) and its derivatives, bounds, the eta invariant.
//! - [`epstein`]: ζ(s, z) by direct summation, Chowla–Selberg and Rankin
//!   intervals, derivatives and the 𝒜/ℬ bound functions.
//! - [`extremal`]: ratio functionals, Nelder–Mead extremum search, grid
//!   sign suites, the minimum-principle checker and cusp probes.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod epstein;
mod error;
pub mod extremal;
pub mod modular;
mod quad;
pub mod scalar;
mod sum;
pub mod theta;

pub use error::{Error, Result};
pub use modular::ModularPoint;
pub use scalar::SeriesConfig;
pub use theta::EvalResult;
