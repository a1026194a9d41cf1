//! Bessel functions J0 and I0.
//!
//! Both are evaluated from their integral representations
//!
//! ```text
//! J0(x) = (1/2pi) int_0^{2pi} cos(x sin t) dt
//! I0(x) = (1/2pi) int_0^{2pi} exp(x cos t) dt
//! ```
//!
//! with the composite trapezoid rule on the periodic integrand. For a
//! periodic analytic function the trapezoid rule converges spectrally: the
//! aliasing error with N nodes is 2 sum_{j>=1} J_{jN}(x) (resp. I_{jN}),
//! which is far below f64 resolution once N >= max(64, 4x). These functions
//! sit on cold paths (correlation coefficients, density checks), so the
//! O(N) cost per call is irrelevant next to table-driven approximations and
//! there are no polynomial coefficients to mistype.

use std::f64::consts::PI;

fn node_count(x: f64) -> usize {
    let n = (4.0 * x.abs()).ceil() as usize + 64;
    // Keep N even so the sin/cos symmetry of the nodes is exact.
    n + (n & 1)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    let n = node_count(x);
    let mut sum = 0.0;
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        sum += (x * t.sin()).cos();
    }
    sum / n as f64
}

/// Modified Bessel function of the first kind, order zero.
///
/// Overflows to infinity for x beyond roughly 713; use [`bessel_i0_scaled`]
/// when the exponential growth must be factored out.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x > 712.0 {
        return f64::INFINITY;
    }
    bessel_i0_scaled(x) * x.exp()
}

/// Exponentially scaled modified Bessel function, exp(-|x|) I0(x).
///
/// Stable for all finite x.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    let n = node_count(x);
    let mut sum = 0.0;
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        sum += (x * (t.cos() - 1.0)).exp();
    }
    sum / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, rel: f64) {
        let scale = expected.abs().max(1e-300);
        assert!(
            (actual - expected).abs() <= rel * scale,
            "expected {expected:e}, got {actual:e}"
        );
    }

    #[test]
    fn j0_reference_values() {
        assert_close(bessel_j0(0.0), 1.0, 1e-15);
        assert_close(bessel_j0(0.1), 0.99750156206604003228, 1e-14);
        assert_close(bessel_j0(1.0), 0.76519768655796655145, 1e-14);
        assert_close(bessel_j0(2.4), 0.0025076832972438130151, 1e-11);
        assert_close(bessel_j0(5.0), -0.17759677131433830435, 1e-13);
        assert_close(bessel_j0(10.0), -0.24593576445134833520, 1e-13);
        assert_close(bessel_j0(31.4), 0.098653744091573261481, 1e-13);
        assert_close(bessel_j0(75.0), 0.034643913805097056137, 1e-12);
    }

    #[test]
    fn j0_is_even() {
        for &x in &[0.3, 1.7, 8.2] {
            assert_eq!(bessel_j0(x), bessel_j0(-x));
        }
    }

    #[test]
    fn i0_reference_values() {
        assert_close(bessel_i0(0.0), 1.0, 1e-15);
        assert_close(bessel_i0(0.1), 1.0025015629340956014, 1e-14);
        assert_close(bessel_i0(1.0), 1.2660658777520083356, 1e-14);
        assert_close(bessel_i0(3.7), 8.7386175241693955850, 1e-14);
        assert_close(bessel_i0(12.0), 18948.925349296308861, 1e-13);
        assert_close(bessel_i0(50.0), 2.9325537838493363267e20, 1e-13);
        assert_close(bessel_i0(700.0), 1.5295933476718737363e302, 1e-12);
    }

    #[test]
    fn i0_scaled_reference_values() {
        assert_close(bessel_i0_scaled(0.5), 0.64503527044915006811, 1e-14);
        assert_close(bessel_i0_scaled(12.0), 0.11642622121344044298, 1e-13);
        assert_close(bessel_i0_scaled(300.0), 0.023042558415085461794, 1e-13);
        assert_close(bessel_i0_scaled(5000.0), 0.0056420368987445886570, 1e-13);
    }

    #[test]
    fn i0_overflow_is_infinite() {
        assert!(bessel_i0(800.0).is_infinite());
    }
}
