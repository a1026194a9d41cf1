//! Relay hardware impairment: soft-envelope limiter power amplifier.
//!
//! The relay amplifier clips the signal envelope at its saturation level.
//! For a Gaussian input, Bussgang's theorem splits the clipped output into a
//! scaled replica plus uncorrelated distortion noise: y = nu * x + d. With
//! the input backoff IBO = A_sat^2 / E|x|^2,
//!
//! ```text
//! mu = E|y|^2 / E|x|^2 = 1 - exp(-IBO)
//! nu = E[x* y] / E|x|^2 = mu + (sqrt(pi)/2) sqrt(IBO) erfc(sqrt(IBO))
//! ```
//!
//! so the distortion-to-signal power ratio is (mu - nu^2) / nu^2. Everything
//! the end-to-end analysis needs is folded into one factor kappa >= 1 that
//! multiplies the second-hop SNR in the combined SNDR; kappa = 1 recovers
//! ideal hardware. The distortion also caps the ergodic capacity at a finite
//! ceiling no matter how strong both hops become.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, RfsoError};
use crate::specfun::erfc;

/// Soft-envelope limiter state derived from the input backoff.
#[derive(Debug, Clone, Copy)]
pub struct SelImpairment {
    ibo: f64,
    nu: f64,
    mu: f64,
}

impl SelImpairment {
    /// Builds from a linear input backoff.
    pub fn new(ibo: f64) -> Result<Self> {
        if !ibo.is_finite() || ibo <= 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "input backoff must be positive and finite, got {ibo}"
            )));
        }
        let mu = 1.0 - (-ibo).exp();
        let s = ibo.sqrt();
        let nu = mu + 0.5 * std::f64::consts::PI.sqrt() * s * erfc(s);
        Ok(Self { ibo, nu, mu })
    }

    /// Builds from an input backoff in dB.
    pub fn from_ibo_db(ibo_db: f64) -> Result<Self> {
        Self::new(10f64.powf(ibo_db / 10.0))
    }

    /// No clipping at all; kappa is exactly one.
    pub fn ideal() -> Self {
        Self {
            ibo: f64::INFINITY,
            nu: 1.0,
            mu: 1.0,
        }
    }

    pub fn ibo(&self) -> f64 {
        self.ibo
    }

    /// Bussgang linear gain.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Output-to-input power ratio.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Distortion-noise power relative to the retained signal power,
    /// (mu - nu^2) / nu^2. Clamped at zero: deep backoff drives the true
    /// value below f64 resolution.
    pub fn distortion_to_signal(&self) -> f64 {
        ((self.mu - self.nu * self.nu) / (self.nu * self.nu)).max(0.0)
    }

    /// Combined impairment factor for a relay whose input hop has the given
    /// mean SNR: kappa = 1 + d2s * (mean + 1). The "+ 1" accounts for the
    /// receiver noise that is clipped along with the signal.
    pub fn kappa(&self, mean_input_snr: f64) -> f64 {
        1.0 + self.distortion_to_signal() * (mean_input_snr + 1.0)
    }

    /// Ergodic-capacity ceiling in bits/s/Hz of an intensity-modulated
    /// link whose only impairment is this amplifier. Infinite for ideal
    /// hardware.
    pub fn capacity_ceiling_bits(&self) -> f64 {
        let d = self.mu - self.nu * self.nu;
        if d <= 0.0 {
            return f64::INFINITY;
        }
        let e = std::f64::consts::E;
        (1.0 + e * self.nu * self.nu / (2.0 * std::f64::consts::PI * d)).log2()
    }

    /// Clips one complex baseband sample at the saturation envelope implied
    /// by the backoff, for unit input power.
    pub fn clip(&self, x: Complex64) -> Complex64 {
        if !self.ibo.is_finite() {
            return x;
        }
        let a = self.ibo.sqrt();
        let r = x.norm();
        if r <= a {
            x
        } else {
            x * (a / r)
        }
    }

    /// Monte Carlo estimate of (nu, mu) from `trials` unit-power complex
    /// Gaussian samples pushed through the limiter. Used to cross-check the
    /// closed forms against the actual nonlinearity.
    pub fn bussgang_empirical<R: Rng + ?Sized>(&self, trials: u64, rng: &mut R) -> (f64, f64) {
        let scale = (0.5f64).sqrt();
        let mut cross = 0.0;
        let mut power_out = 0.0;
        let mut power_in = 0.0;
        for _ in 0..trials {
            let x = Complex64::new(
                scale * rng.sample::<f64, _>(StandardNormal),
                scale * rng.sample::<f64, _>(StandardNormal),
            );
            let y = self.clip(x);
            cross += (x.conj() * y).re;
            power_out += y.norm_sqr();
            power_in += x.norm_sqr();
        }
        (cross / power_in, power_out / power_in)
    }
}

/// Instantaneous end-to-end SNDR of the two-hop fixed-gain link:
/// gamma = g1 g2 / (kappa g2 + zeta), where zeta folds the fixed relay gain
/// and the impairment offset together.
pub fn end_to_end_sndr(gamma1: f64, gamma2: f64, kappa: f64, zeta: f64) -> f64 {
    gamma1 * gamma2 / (kappa * gamma2 + zeta)
}
