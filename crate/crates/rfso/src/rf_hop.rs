//! RF hop: Rayleigh fading with partial relay selection on stale estimates.
//!
//! Selection ranks the candidate relays by their *estimated* instantaneous
//! SNR, but by the time the chosen relay transmits, the channel has moved.
//! The estimate and the realized channel are modeled as jointly complex
//! Gaussian with power correlation `rho` (Jakes' model ties `rho` to the
//! normalized Doppler-delay product). Everything downstream needs the
//! distribution of the realized SNR of the selected relay, which is a finite
//! mixture of exponentials; this module exposes the mixture, its closed-form
//! mean, and a direct sampler used by the simulation route.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Result, RfsoError};
use crate::specfun::{bessel_j0, binomial};

/// Largest supported relay pool; keeps the sampler allocation-free.
pub const MAX_RELAYS: u32 = 64;

/// Correlation coefficient of the selected-vs-realized channel under Jakes'
/// autocorrelation: J0(2 pi f_d T_d), clamped to [0, 1].
///
/// Values of J0 within 1e-12 of zero are clamped to exactly zero: at that
/// point the estimate carries no usable information and tiny signed residues
/// would only inject noise into downstream formulas. Doppler-delay products
/// that land on a negative lobe of J0 are rejected: the selection model
/// requires a nonnegative correlation, and silently flipping the sign would
/// misstate the channel.
pub fn jakes_rho(doppler_delay: f64) -> Result<f64> {
    if !doppler_delay.is_finite() || doppler_delay < 0.0 {
        return Err(RfsoError::InvalidParameter(format!(
            "jakes_rho: doppler-delay product must be finite and nonnegative, got {doppler_delay}"
        )));
    }
    let r = bessel_j0(2.0 * std::f64::consts::PI * doppler_delay);
    if r < -1e-12 {
        return Err(RfsoError::InvalidParameter(format!(
            "jakes_rho: J0(2 pi {doppler_delay}) = {r:.6} is on a negative lobe; \
             choose a smaller doppler-delay product"
        )));
    }
    Ok(r.clamp(0.0, 1.0))
}

/// One exponential component of the selected-SNR mixture: the complementary
/// CDF is `front * sum_n weight_n * exp(-decay_n * x)`.
#[derive(Debug, Clone, Copy)]
pub struct MixtureTerm {
    /// Signed weight of this component (alternating binomial factor).
    pub weight: f64,
    /// Exponential decay rate in inverse SNR units.
    pub decay: f64,
}

/// Realized SNR of the relay whose estimate ranks `rank` from the bottom
/// among `n_relays` candidates (rank = n_relays selects the best estimate).
#[derive(Debug, Clone)]
pub struct RfSelection {
    n_relays: u32,
    rank: u32,
    rho: f64,
    mean_snr: f64,
}

impl RfSelection {
    pub fn new(n_relays: u32, rank: u32, rho: f64, mean_snr: f64) -> Result<Self> {
        if n_relays == 0 || n_relays > MAX_RELAYS {
            return Err(RfsoError::InvalidParameter(format!(
                "relay count must be in 1..={MAX_RELAYS}, got {n_relays}"
            )));
        }
        if rank == 0 || rank > n_relays {
            return Err(RfsoError::InvalidParameter(format!(
                "selection rank must be in 1..={n_relays}, got {rank}"
            )));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(RfsoError::InvalidParameter(format!(
                "correlation must be in [0, 1], got {rho}"
            )));
        }
        if !mean_snr.is_finite() || mean_snr <= 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "mean SNR must be positive and finite, got {mean_snr}"
            )));
        }
        Ok(Self {
            n_relays,
            rank,
            rho,
            mean_snr,
        })
    }

    pub fn n_relays(&self) -> u32 {
        self.n_relays
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    /// Common prefactor of the mixture: rank * C(n_relays, rank).
    pub fn front(&self) -> f64 {
        self.rank as f64 * binomial(self.n_relays, self.rank)
    }

    /// Exponential mixture components of the complementary CDF.
    pub fn terms(&self) -> Vec<MixtureTerm> {
        let n = self.n_relays as f64;
        let m = self.rank as f64;
        let mut out = Vec::with_capacity(self.rank as usize);
        for j in 0..self.rank {
            let jf = j as f64;
            let gap = n - m + jf; // relays ranked above, plus the sum index
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let weight = sign * binomial(self.rank - 1, j) / (gap + 1.0);
            let decay = (gap + 1.0) / ((gap * (1.0 - self.rho) + 1.0) * self.mean_snr);
            out.push(MixtureTerm { weight, decay });
        }
        out
    }

    /// P(selected-relay realized SNR > x).
    pub fn ccdf(&self, x: f64) -> f64 {
        let front = self.front();
        let s: f64 = self
            .terms()
            .iter()
            .map(|t| t.weight * (-t.decay * x).exp())
            .sum();
        (front * s).clamp(0.0, 1.0)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.ccdf(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let front = self.front();
        let s: f64 = self
            .terms()
            .iter()
            .map(|t| t.weight * t.decay * (-t.decay * x).exp())
            .sum();
        (front * s).max(0.0)
    }

    /// Closed-form mean of the realized SNR.
    pub fn mean(&self) -> f64 {
        let front = self.front();
        front
            * self
                .terms()
                .iter()
                .map(|t| t.weight / t.decay)
                .sum::<f64>()
    }

    /// Draws one selection event: rank the estimated SNRs of all candidates,
    /// keep the requested order statistic, then perturb the underlying
    /// complex gain to account for the estimate being stale. Returns the
    /// stale estimate the selector acted on and the SNR actually realized.
    pub fn sample_selected_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let n = self.n_relays as usize;
        let mut estimates = [0.0f64; MAX_RELAYS as usize];
        for slot in estimates[..n].iter_mut() {
            *slot = self.mean_snr * rng.sample::<f64, _>(Exp1);
        }
        estimates[..n].sort_unstable_by(f64::total_cmp);
        let selected = estimates[self.rank as usize - 1];
        if self.rho >= 1.0 {
            return (selected, selected);
        }
        // Conditional on the estimate, each quadrature of the realized gain
        // is Gaussian around the scaled estimate.
        let sigma = ((1.0 - self.rho) * self.mean_snr / 2.0).sqrt();
        let re = (self.rho * selected).sqrt() + sigma * rng.sample::<f64, _>(StandardNormal);
        let im = sigma * rng.sample::<f64, _>(StandardNormal);
        (selected, re * re + im * im)
    }

    /// Draws one realized SNR, discarding the stale estimate it was selected
    /// on.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_selected_pair(rng).1
    }
}
