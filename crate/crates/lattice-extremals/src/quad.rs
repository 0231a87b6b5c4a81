//! Fixed-order Gauss–Legendre rules.

#![allow(clippy::excessive_precision)]

/// Nonnegative nodes and weights of the 20-point rule on [−1, 1].
const GL20: [(f64, f64); 10] = [
    (7.652_652_113_349_733_83e-2, 1.527_533_871_307_257_82e-1),
    (2.277_858_511_416_450_96e-1, 1.491_729_864_726_036_58e-1),
    (3.737_060_887_154_195_49e-1, 1.420_961_093_183_818_75e-1),
    (5.108_670_019_508_271_26e-1, 1.316_886_384_491_765_26e-1),
    (6.360_536_807_265_150_25e-1, 1.181_945_319_615_182_45e-1),
    (7.463_319_064_601_507_96e-1, 1.019_301_198_172_402_61e-1),
    (8.391_169_718_222_187_82e-1, 8.327_674_157_670_467_15e-2),
    (9.122_344_282_513_258_35e-1, 6.267_204_833_410_944_25e-2),
    (9.639_719_272_779_138_09e-1, 4.060_142_980_038_621_70e-2),
    (9.931_285_991_850_948_85e-1, 1.761_400_713_915_327_32e-2),
];

/// 20-point Gauss–Legendre approximation of ∫_a^b f.
pub(crate) fn gl20<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = crate::sum::Compensated::new();
    for &(x, w) in GL20.iter() {
        acc.add(w * (f(c - h * x) + f(c + h * x)));
    }
    h * acc.value()
}

/// Composite rule with `panels` equal pieces.
pub(crate) fn gl20_composite<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    let w = (b - a) / panels as f64;
    let mut acc = crate::sum::Compensated::new();
    for i in 0..panels {
        let lo = a + w * i as f64;
        acc.add(gl20(lo, lo + w, &mut f));
    }
    acc.value()
}

/// Adaptive bisection driven by the difference between one panel and its
/// two halves. `tol` is absolute.
pub(crate) fn gl20_adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
    f: &mut F,
) -> Option<f64> {
    let whole = gl20(a, b, &mut *f);
    adapt(a, b, whole, tol, max_depth, f)
}

fn adapt<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    f: &mut F,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let left = gl20(a, m, &mut *f);
    let right = gl20(m, b, &mut *f);
    let both = left + right;
    // Differences at roundoff level of the panel are accepted regardless of tol.
    let floor = 64.0 * f64::EPSILON * (libm::fabs(left) + libm::fabs(right));
    if libm::fabs(both - whole) <= tol.max(floor) {
        return Some(both);
    }
    if depth == 0 {
        return None;
    }
    Some(adapt(a, m, left, 0.5 * tol, depth - 1, f)? + adapt(m, b, right, 0.5 * tol, depth - 1, f)?)
}
