//! Gamma-family functions: log-gamma (real and complex), digamma, upper
//! incomplete gamma for arbitrary real order, the exponential integral E1,
//! and binomial coefficients.

use num_complex::Complex64;

const LN_2PI_HALF: f64 = 0.918938533204672741780329736406; // ln(2*pi)/2
const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

/// Lanczos approximation, g = 7, 9 coefficients. Relative accuracy is about
/// 1e-15 over the right half plane.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// sin(pi x) with the argument reduced exactly, so that accuracy does not
/// degrade for large |x| the way a naive `(PI * x).sin()` would.
fn sin_pi(x: f64) -> f64 {
    // Reduce modulo 2 exactly (f64 holds integers up to 2^53).
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    // r in [-1, 1]; fold into [-0.5, 0.5] where sin(pi r) is well conditioned.
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (std::f64::consts::PI * r).sin()
}

/// Natural log of |Gamma(x)| together with the sign of Gamma(x).
///
/// Returns `(ln|Gamma(x)|, sign)`. At the poles (x a non-positive integer)
/// the log is +inf and the sign is 0.
pub fn ln_gamma_sign(x: f64) -> (f64, f64) {
    if x >= 0.5 {
        (lanczos_ln_gamma(x), 1.0)
    } else {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let s = sin_pi(x);
        if s == 0.0 {
            return (f64::INFINITY, 0.0);
        }
        let val = std::f64::consts::PI.ln() - s.abs().ln() - lanczos_ln_gamma(1.0 - x);
        (val, s.signum())
    }
}

/// Natural log of Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_sign(x).0
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64 - 1.0);
    }
    let t = x + 6.5; // x + g - 0.5
    LN_2PI_HALF + (x - 0.5) * t.ln() - t + acc.ln()
}

/// Gamma(x) on the real line. Poles return +/-inf by sign of the
/// approach, via the reflection formula's sin factor; Gamma of a
/// non-positive integer is NaN-free but unbounded, so callers should
/// screen their arguments.
pub fn gamma(x: f64) -> f64 {
    let (ln_abs, sign) = ln_gamma_sign(x);
    if sign == 0.0 {
        return f64::INFINITY;
    }
    sign * ln_abs.exp()
}

/// Log-gamma for complex arguments with Re(z) > 0 (no reflection branch;
/// the Mellin-Barnes contours used in this crate keep all gamma arguments
/// in the right half plane).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0, "ln_gamma_complex requires Re(z) > 0");
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + (i as f64 - 1.0));
    }
    let t = z + 6.5;
    (z - 0.5) * t.ln() - t + acc.ln() + LN_2PI_HALF
}

/// Digamma (psi) function. Uses the ascending recurrence up to x >= 6 and
/// then the asymptotic series; reflection handles x < 0. Accuracy ~1e-14.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        // psi(x) = psi(1-x) - pi cot(pi x); poles at non-positive integers.
        let s = sin_pi(x);
        if s == 0.0 {
            return f64::NAN;
        }
        let c = sin_pi(x + 0.5); // cos(pi x) with the same exact reduction
        return digamma(1.0 - x) - std::f64::consts::PI * c / s;
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 12.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    // Bernoulli tail: ln y - 1/2y - 1/12y^2 + 1/120y^4 - 1/252y^6 + 1/240y^8
    // - 1/132y^10 + 691/32760y^12; the first omitted term is below 1e-16 of
    // the total once y >= 12.
    acc + y.ln() - 0.5 * inv
        - inv2
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 120.0
                        - inv2
                            * (1.0 / 252.0
                                - inv2
                                    * (1.0 / 240.0
                                        - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))))
}

/// Exponential integral E1(x) for x > 0.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 requires x > 0");
    exp_integral_e1_scaled(x) * (-x).exp()
}

/// exp(x) * E1(x) for x > 0, avoiding underflow at large x.
pub fn exp_integral_e1_scaled(x: f64) -> f64 {
    if x <= 1.0 {
        // Power series for E1, then scale.
        let mut sum = -EULER_GAMMA - x.ln();
        let mut term = 1.0;
        for k in 1..=40 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum * x.exp()
    } else {
        // Continued fraction e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))),
        // evaluated by the modified Lentz method.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut f = d;
        for k in 1..=200 {
            let a = -(k as f64) * (k as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        f
    }
}

/// Upper incomplete gamma Gamma(s, x) for real s (any sign) and x > 0.
///
/// The order may be negative and non-integer, which the high-SNR capacity
/// expansion requires. Branches:
/// * x >= max(1.5, s+1): Lentz continued fraction (all s);
/// * small x, s > 0: lower-series complement (all-positive terms);
/// * small x, s < 0 non-integer: alternating entire-function series;
/// * small x, s a non-positive integer: E1 plus downward recurrence.
pub fn upper_incomplete(s: f64, x: f64) -> f64 {
    upper_incomplete_impl(s, x, false)
}

/// exp(x) * Gamma(s, x): the scaled form keeps products like
/// e^{x} Gamma(s, x) representable when x is large.
pub fn upper_incomplete_scaled(s: f64, x: f64) -> f64 {
    upper_incomplete_impl(s, x, true)
}

fn upper_incomplete_impl(s: f64, x: f64, scaled: bool) -> f64 {
    assert!(x > 0.0, "upper incomplete gamma requires x > 0");
    let rounded = s.round();
    let is_nonpos_int = s <= 0.5 && (s - rounded).abs() < 1e-12 && rounded <= 0.0;

    if x >= 1.5f64.max(s + 1.0) {
        // Continued fraction Gamma(s,x) = e^{-x} x^s / (x+1-s- 1(1-s)/(x+3-s- ...)).
        let tiny = 1e-300;
        let mut b = x + 1.0 - s;
        if b == 0.0 {
            b = tiny;
        }
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut f = d;
        for k in 1..=500 {
            let a = -(k as f64) * (k as f64 - s);
            b += 2.0;
            d = a * d + b;
            if d == 0.0 {
                d = tiny;
            }
            c = b + a / c;
            if c == 0.0 {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let ln_scale = s * x.ln() - if scaled { 0.0 } else { x };
        return f * ln_scale.exp();
    }

    let e_factor = if scaled { x.exp() } else { 1.0 };

    if is_nonpos_int {
        // Gamma(0,x) = E1(x), then Gamma(s-1,x) = (Gamma(s,x) - x^{s-1} e^{-x})/(s-1).
        let n = (-rounded) as i64;
        let mut g = exp_integral_e1(x);
        let emx = (-x).exp();
        let mut sk = 0.0;
        for _ in 0..n {
            sk -= 1.0;
            g = (g - x.powf(sk) * emx) / sk;
        }
        return g * e_factor;
    }

    if s > 0.0 {
        // gamma(s,x) by the all-positive lower series, then complement.
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= x / (s + k);
            sum += term;
            if term < 1e-17 * sum || k > 500.0 {
                break;
            }
            k += 1.0;
        }
        let lower = sum * (s * x.ln() - x).exp();
        let g = gamma(s) - lower;
        return g * e_factor;
    }

    // s < 0, non-integer, x < 1.5: gamma(s,x) = x^s sum_k (-x)^k / (k! (s+k)),
    // an entire-function series; then Gamma(s,x) = Gamma(s) - gamma(s,x).
    let mut term = 1.0;
    let mut sum = 1.0 / s;
    for k in 1..=120 {
        term *= -x / k as f64;
        let add = term / (s + k as f64);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() && k > 8 {
            break;
        }
    }
    let lower = sum * x.powf(s);
    (gamma(s) - lower) * e_factor
}

/// Binomial coefficient as f64; exact for every value that fits.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
