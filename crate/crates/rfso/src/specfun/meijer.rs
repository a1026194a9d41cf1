//! Meijer G-function evaluation.
//!
//! Covers the shapes needed by the closed-form layer: G^{m,n}_{p,q} with
//! every lower parameter in the numerator (m = q), at most one upper
//! parameter in the numerator (n <= 1), q > p, and real argument z >= 0.
//! In Mellin-Barnes form, with an upward vertical contour at Re(s) = c,
//!
//! ```text
//!               1    /  prod_j Gamma(b_j - s) prod_{i<=n} Gamma(1 - a_i + s)
//! G(z) =      ----- |   ------------------------------------------------- z^s ds
//!             2*pi*i /             prod_{i>n} Gamma(a_i - s)
//! ```
//!
//! where c lies left of every b_j and right of every a_i - 1 (i <= n).
//!
//! Two independent evaluation routes are implemented:
//!
//! * closing the contour to the right gives the ascending series over
//!   residues at s = b_r + k. Each branch is assembled from a log-space
//!   k = 0 coefficient followed by exact multiplicative ladder updates, so
//!   inner gammas are never re-evaluated. This is fast and accurate while
//!   the terms do not cancel catastrophically.
//! * direct trapezoid integration along the vertical line through the real
//!   saddle point of the integrand, with step halving until two refinements
//!   agree to 1e-10. The trapezoid rule converges geometrically here since
//!   the integrand decays like exp(-(m + 2n - p) pi |t| / 2).
//!
//! The series route refuses cases it cannot certify (lower parameters
//! separated by integers, which create higher-order poles; term-to-sum
//! cancellation beyond 1e6; enormous arguments) and the contour route is
//! used instead. The two routes cross-check each other in the tests.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{digamma, ln_gamma_complex, ln_gamma_sign};
use crate::error::{Result, RfsoError};

/// One branch of the ascending expansion, G(z) ~ sum_r sign_r
/// exp(log_coeff_r) z^exponent_r for z -> 0, ordered by ascending exponent.
#[derive(Debug, Clone, Copy)]
pub struct LeadingTerm {
    pub exponent: f64,
    pub log_coeff: f64,
    pub sign: f64,
}

/// Prepared evaluator for a fixed parameter set.
#[derive(Debug, Clone)]
pub struct MeijerEvaluator {
    /// Upper parameters contributing Gamma(1 - a + s) to the numerator.
    a_front: Vec<f64>,
    /// Upper parameters contributing Gamma(a - s) to the denominator.
    a_rest: Vec<f64>,
    /// Lower parameters, all contributing Gamma(b - s) to the numerator.
    b: Vec<f64>,
    /// Some pair of lower parameters differs by (nearly) an integer, so the
    /// residue series would hit higher-order poles.
    degenerate: bool,
}

const CANCELLATION_LIMIT: f64 = 1e6;
const SERIES_MAX_TERMS: usize = 500;
const SERIES_MAX_ARG: f64 = 1e9;

impl MeijerEvaluator {
    /// Builds an evaluator for G^{m,n}_{p,q}(z) with m = q = `b.len()`,
    /// n = `a_front.len()` (0 or 1) and p = n + `a_rest.len()`.
    pub fn new(a_front: &[f64], a_rest: &[f64], b: &[f64]) -> Result<Self> {
        let n = a_front.len();
        let p = n + a_rest.len();
        let q = b.len();
        if q == 0 {
            return Err(RfsoError::InvalidParameter(
                "meijer: at least one lower parameter is required".into(),
            ));
        }
        if n > 1 {
            return Err(RfsoError::InvalidParameter(
                "meijer: at most one numerator upper parameter is supported".into(),
            ));
        }
        if q <= p {
            return Err(RfsoError::InvalidParameter(format!(
                "meijer: need q > p for a convergent ascending series, got p={p}, q={q}"
            )));
        }
        if q + 2 * n <= p {
            return Err(RfsoError::InvalidParameter(
                "meijer: contour integrand does not decay for this shape".into(),
            ));
        }
        for &x in a_front.iter().chain(a_rest.iter()).chain(b.iter()) {
            if !x.is_finite() {
                return Err(RfsoError::InvalidParameter(
                    "meijer: parameters must be finite".into(),
                ));
            }
        }
        let mut degenerate = false;
        for i in 0..b.len() {
            for j in 0..i {
                let d = b[i] - b[j];
                if (d - d.round()).abs() < 1e-6 {
                    degenerate = true;
                }
            }
        }
        Ok(Self {
            a_front: a_front.to_vec(),
            a_rest: a_rest.to_vec(),
            b: b.to_vec(),
            degenerate,
        })
    }

    /// Evaluates G(z). May overflow to +/-infinity for extreme parameter
    /// sets; use [`Self::eval_log`] when the magnitude can be large.
    pub fn eval(&self, z: f64) -> Result<f64> {
        let (log_abs, sign) = self.eval_log(z)?;
        Ok(sign * log_abs.exp())
    }

    /// Evaluates G(z) as (ln |G|, sign) with sign in {-1, 0, +1}.
    pub fn eval_log(&self, z: f64) -> Result<(f64, f64)> {
        if !z.is_finite() || z < 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "meijer: argument must be finite and nonnegative, got {z}"
            )));
        }
        if z == 0.0 {
            return self.eval_at_zero();
        }
        if !self.degenerate && z < SERIES_MAX_ARG {
            if let Some(result) = self.eval_residue(z) {
                return Ok(result);
            }
        }
        self.eval_contour(z)
    }

    /// Limit z -> 0+: branches with b_r > 0 vanish, a branch with b_r = 0
    /// tends to its k = 0 coefficient, and any b_r < 0 diverges.
    fn eval_at_zero(&self) -> Result<(f64, f64)> {
        if self.b.iter().any(|&b| b < 0.0) {
            return Err(RfsoError::Numerical(
                "meijer: diverges at z = 0 (negative lower parameter)".into(),
            ));
        }
        for (r, &br) in self.b.iter().enumerate() {
            if br == 0.0 {
                let (log, sign) = self.branch_coeff(r).ok_or_else(|| {
                    RfsoError::Numerical(
                        "meijer: degenerate parameters in the z = 0 limit".into(),
                    )
                })?;
                return Ok((log, sign));
            }
        }
        Ok((f64::NEG_INFINITY, 0.0))
    }

    /// Log-magnitude and sign of the k = 0 residue coefficient of branch r,
    /// i.e. everything multiplying z^{b_r}. `None` marks a pole in a
    /// numerator gamma (the series route cannot be used); a pole in the
    /// denominator makes the whole branch vanish.
    fn branch_coeff(&self, r: usize) -> Option<(f64, f64)> {
        let br = self.b[r];
        let mut log = 0.0;
        let mut sign = 1.0;
        for (j, &bj) in self.b.iter().enumerate() {
            if j == r {
                continue;
            }
            let (l, s) = ln_gamma_sign(bj - br);
            if s == 0.0 {
                return None;
            }
            log += l;
            sign *= s;
        }
        for &a in &self.a_front {
            let (l, s) = ln_gamma_sign(1.0 - a + br);
            if s == 0.0 {
                return None;
            }
            log += l;
            sign *= s;
        }
        for &a in &self.a_rest {
            let (l, s) = ln_gamma_sign(a - br);
            if s == 0.0 {
                // 1/Gamma vanishes at k = 0 and stays zero for every k,
                // since a - b_r - k remains a nonpositive integer.
                return Some((f64::NEG_INFINITY, 0.0));
            }
            log -= l;
            sign *= s;
        }
        Some((log, sign))
    }

    /// Ascending-series coefficients, sorted by exponent. These drive the
    /// closed-form asymptotic expansions in the analysis layer.
    pub fn leading_terms(&self) -> Result<Vec<LeadingTerm>> {
        if self.degenerate {
            return Err(RfsoError::Numerical(
                "meijer: ascending expansion degenerates (lower parameters differ by integers)"
                    .into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.b.len());
        for (r, &br) in self.b.iter().enumerate() {
            let (log_coeff, sign) = self.branch_coeff(r).ok_or_else(|| {
                RfsoError::Numerical("meijer: pole in ascending-series coefficient".into())
            })?;
            terms.push(LeadingTerm {
                exponent: br,
                log_coeff,
                sign,
            });
        }
        terms.sort_by(|x, y| x.exponent.total_cmp(&y.exponent));
        Ok(terms)
    }

    /// Ascending-series coefficients including the descending ladder of every
    /// branch: all terms sign exp(log_coeff) z^{b_r + k} with b_r + k <=
    /// `max_exponent`, sorted by exponent. [`Self::leading_terms`] is the
    /// k = 0 subset. Branches killed by a denominator pole are omitted, and a
    /// ladder stops early when a later denominator pole zeroes it.
    pub fn expansion_terms(&self, max_exponent: f64) -> Result<Vec<LeadingTerm>> {
        if self.degenerate {
            return Err(RfsoError::Numerical(
                "meijer: ascending expansion degenerates (lower parameters differ by integers)"
                    .into(),
            ));
        }
        let mut terms = Vec::new();
        for (r, &br) in self.b.iter().enumerate() {
            let (mut log, mut sign) = self.branch_coeff(r).ok_or_else(|| {
                RfsoError::Numerical("meijer: pole in ascending-series coefficient".into())
            })?;
            if sign == 0.0 {
                continue;
            }
            if br <= max_exponent {
                terms.push(LeadingTerm {
                    exponent: br,
                    log_coeff: log,
                    sign,
                });
            }
            let mut k = 0.0f64;
            while br + k + 1.0 <= max_exponent {
                let mut ratio = -1.0 / (k + 1.0);
                let mut blocked = false;
                for (j, &bj) in self.b.iter().enumerate() {
                    if j == r {
                        continue;
                    }
                    let d = bj - br - (k + 1.0);
                    if d.abs() < 1e-9 {
                        blocked = true;
                        break;
                    }
                    ratio /= d;
                }
                if blocked {
                    break;
                }
                for &a in &self.a_front {
                    ratio *= 1.0 - a + br + k;
                }
                for &a in &self.a_rest {
                    ratio *= a - br - (k + 1.0);
                }
                if ratio == 0.0 {
                    break;
                }
                log += ratio.abs().ln();
                sign *= ratio.signum();
                terms.push(LeadingTerm {
                    exponent: br + k + 1.0,
                    log_coeff: log,
                    sign,
                });
                k += 1.0;
            }
        }
        terms.sort_by(|x, y| x.exponent.total_cmp(&y.exponent));
        Ok(terms)
    }

    /// Residue (ascending) series. Returns `None` when the result cannot be
    /// certified: term growth past f64 range, no convergence within the term
    /// budget, or term-to-sum cancellation beyond `CANCELLATION_LIMIT`.
    fn eval_residue(&self, z: f64) -> Option<(f64, f64)> {
        let ln_z = z.ln();
        let m = self.b.len();
        let mut coeffs = Vec::with_capacity(m);
        for r in 0..m {
            coeffs.push(self.branch_coeff(r)?);
        }
        // Shared log offset so that the largest k = 0 term maps to 1.0.
        let offset = coeffs
            .iter()
            .zip(&self.b)
            .filter(|((_, sign), _)| *sign != 0.0)
            .map(|((log, _), &br)| log + br * ln_z)
            .fold(f64::NEG_INFINITY, f64::max);
        if offset == f64::NEG_INFINITY {
            return Some((f64::NEG_INFINITY, 0.0));
        }
        let mut total = 0.0f64;
        let mut max_contrib = 0.0f64;
        for r in 0..m {
            let (log, sign) = coeffs[r];
            if sign == 0.0 {
                continue;
            }
            let br = self.b[r];
            let base = (log + br * ln_z - offset).exp();
            if base == 0.0 {
                continue;
            }
            // t_k = T_{r,k} / T_{r,0}; exact multiplicative updates.
            let mut t = 1.0f64;
            let mut branch_sum = 1.0f64;
            let mut max_t = 1.0f64;
            let mut small_run = 0usize;
            let mut converged = false;
            for k in 0..SERIES_MAX_TERMS {
                let kf = k as f64;
                let mut ratio = -z / (kf + 1.0);
                for (j, &bj) in self.b.iter().enumerate() {
                    if j == r {
                        continue;
                    }
                    ratio /= bj - br - (kf + 1.0);
                }
                for &a in &self.a_front {
                    ratio *= 1.0 - a + br + kf;
                }
                for &a in &self.a_rest {
                    ratio *= a - br - (kf + 1.0);
                }
                t *= ratio;
                if t == 0.0 {
                    converged = true;
                    break;
                }
                if !t.is_finite() {
                    return None;
                }
                branch_sum += t;
                let at = t.abs();
                if at > max_t {
                    max_t = at;
                }
                if at < 1e-19 * branch_sum.abs().max(1e-30) {
                    small_run += 1;
                    if small_run >= 2 {
                        converged = true;
                        break;
                    }
                } else {
                    small_run = 0;
                }
            }
            if !converged {
                return None;
            }
            total += sign * base * branch_sum;
            max_contrib = max_contrib.max(base * max_t);
        }
        if total == 0.0 || max_contrib > CANCELLATION_LIMIT * total.abs() {
            return None;
        }
        Some((offset + total.abs().ln(), total.signum()))
    }

    /// Derivative of the log-integrand along the real axis; its zero is the
    /// saddle point through which the contour is routed.
    fn saddle_deriv(&self, c: f64, ln_z: f64) -> f64 {
        let mut d = ln_z;
        for &bj in &self.b {
            d -= digamma(bj - c);
        }
        for &a in &self.a_front {
            d += digamma(1.0 - a + c);
        }
        for &a in &self.a_rest {
            d += digamma(a - c);
        }
        d
    }

    /// Real saddle point, clamped to the strip allowed by the poles:
    /// max_i(a_i - 1) < c < min_j b_j.
    fn saddle(&self, ln_z: f64) -> f64 {
        let hi_bound = self.b.iter().cloned().fold(f64::INFINITY, f64::min);
        let lo_bound = self
            .a_front
            .iter()
            .map(|&a| a - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut lo, mut hi);
        if lo_bound.is_finite() {
            let margin = 0.02 * (hi_bound - lo_bound).min(1.0);
            lo = lo_bound + margin;
            hi = hi_bound - margin;
        } else {
            hi = hi_bound - 0.05;
            lo = hi - 2.0;
            let mut width = 2.0;
            while self.saddle_deriv(lo, ln_z) > 0.0 && width < 1e4 {
                width *= 2.0;
                lo = hi - width;
            }
        }
        if self.saddle_deriv(hi, ln_z) <= 0.0 {
            return hi;
        }
        if self.saddle_deriv(lo, ln_z) >= 0.0 {
            return lo;
        }
        // The derivative is increasing in c (numerator gammas dominate), so
        // plain bisection pins the root.
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.saddle_deriv(mid, ln_z) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Trapezoid integration along Re(s) = c with step halving.
    fn eval_contour(&self, z: f64) -> Result<(f64, f64)> {
        let ln_z = z.ln();
        let c = self.saddle(ln_z);
        for &a in &self.a_rest {
            if a - c < 0.25 {
                return Err(RfsoError::Numerical(format!(
                    "meijer: contour at c={c:.3} leaves the principal half-plane of \
                     denominator parameter a={a:.3}"
                )));
            }
        }
        let log_f = |t: f64| -> Complex64 {
            let s = Complex64::new(c, t);
            let mut acc = s * ln_z;
            for &bj in &self.b {
                acc += ln_gamma_complex(Complex64::new(bj - c, -t));
            }
            for &a in &self.a_front {
                acc += ln_gamma_complex(Complex64::new(1.0 - a + c, t));
            }
            for &a in &self.a_rest {
                acc -= ln_gamma_complex(Complex64::new(a - c, -t));
            }
            acc
        };
        let scale = log_f(0.0).re;
        let mut h = 0.25f64.min(PI / (4.0 * (1.0 + ln_z.abs())));
        let mut prev: Option<f64> = None;
        let mut last = 0.0f64;
        for _ in 0..14 {
            let sum = self.trap_sum(&log_f, scale, h)?;
            last = sum;
            if let Some(p) = prev {
                if (sum - p).abs() <= 1e-10 * sum.abs() + 1e-15 {
                    let value = sum;
                    if value == 0.0 {
                        return Ok((f64::NEG_INFINITY, 0.0));
                    }
                    return Ok((scale + value.abs().ln(), value.signum()));
                }
            }
            prev = Some(sum);
            h *= 0.5;
        }
        let p = prev.unwrap_or(f64::NAN);
        if (last - p).abs() <= 1e-7 * last.abs() + 1e-13 {
            // Accept a slightly looser tolerance rather than fail outright.
            return Ok((scale + last.abs().ln(), last.signum()));
        }
        Err(RfsoError::Numerical(format!(
            "meijer: contour integral did not stabilize at z={z:e}"
        )))
    }

    /// One trapezoid pass: (h/pi) [g(0)/2 + sum_{k>=1} g(kh)] with
    /// g(t) = Re exp(log_f(t) - scale), truncated once the integrand
    /// magnitude has fallen 18 decades below its running peak.
    fn trap_sum<F: Fn(f64) -> Complex64>(&self, log_f: &F, scale: f64, h: f64) -> Result<f64> {
        let g = |t: f64| (log_f(t) - scale).exp();
        let g0 = g(0.0);
        let mut sum = 0.5 * g0.re;
        let mut peak = g0.norm();
        let mut small_run = 0usize;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            let v = g(t);
            sum += v.re;
            let mag = v.norm();
            if mag > peak {
                peak = mag;
            }
            if mag < 1e-18 * peak {
                small_run += 1;
                if small_run >= 3 && t > 2.0 {
                    break;
                }
            } else {
                small_run = 0;
            }
            k += 1;
            if k > 4_000_000 {
                return Err(RfsoError::Numerical(
                    "meijer: contour integrand failed to decay".into(),
                ));
            }
        }
        Ok(sum * h / PI)
    }
}
