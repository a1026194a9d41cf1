//! FSO hop: Gamma-Gamma turbulence with misalignment (pointing error) loss.
//!
//! The optical irradiance factors as I = I_a * I_p: I_a is the unit-mean
//! turbulence fade, modeled Gamma-Gamma with shape parameters (alpha, beta),
//! and I_p is the fraction of the beam collected by the aperture when the
//! beam center jitters around the aperture center. Under a Gaussian beam and
//! Rayleigh-distributed radial jitter, I_p = A0 * U^{1/xi^2} with U uniform
//! on (0, 1), where A0 is the collected fraction at perfect alignment and
//! xi is the ratio of equivalent beam radius to twice the jitter deviation.
//!
//! The module works with the normalized irradiance I / E[I]: path loss and
//! A0 cancel once the SNR axis is referenced to the mean received power, so
//! only (alpha, beta, xi) shape the distribution.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Result, RfsoError};
use crate::specfun::{erf, ln_gamma, MeijerEvaluator};

/// Physical link description from which the fading shape is derived.
#[derive(Debug, Clone)]
pub struct FsoGeometry {
    /// Carrier wavelength in meters.
    pub wavelength_m: f64,
    /// Propagation distance in meters.
    pub link_length_m: f64,
    /// Refractive-index structure parameter C_n^2 in m^(-2/3).
    pub cn2: f64,
    /// Beam waist radius at the transmitter, meters.
    pub beam_waist_m: f64,
    /// Phase front radius of curvature at the transmitter, meters
    /// (negative for a converging design, as in the reference link budget).
    pub phase_front_radius_m: f64,
    /// Receiver aperture radius, meters.
    pub aperture_radius_m: f64,
    /// Standard deviation of the radial pointing jitter at the receiver,
    /// meters.
    pub pointing_jitter_m: f64,
    /// Weather attenuation coefficient in dB/km (clear air: 0.43).
    pub attenuation_db_per_km: f64,
    /// Optical-to-electrical conversion efficiency (dimensionless).
    pub oe_conversion: f64,
    /// Transmit optical power, normalized units.
    pub tx_power: f64,
    /// Receiver electrical noise power, normalized units.
    pub noise_power: f64,
}

impl FsoGeometry {
    /// Reference link budget at moderate turbulence (C_n^2 = 5e-14) in clear
    /// air. Powers and efficiency default to unity so the absolute SNR scale
    /// stays a free knob.
    pub fn moderate_turbulence() -> Self {
        Self {
            wavelength_m: 1550e-9,
            link_length_m: 1000.0,
            cn2: 5e-14,
            beam_waist_m: 5e-3,
            phase_front_radius_m: -10.0,
            aperture_radius_m: 0.05,
            pointing_jitter_m: 0.0375,
            attenuation_db_per_km: 0.43,
            oe_conversion: 1.0,
            tx_power: 1.0,
            noise_power: 1.0,
        }
    }

    /// Same link at weak turbulence (C_n^2 = 5e-15).
    pub fn weak_turbulence() -> Self {
        Self {
            cn2: 5e-15,
            ..Self::moderate_turbulence()
        }
    }

    /// Derives the fading-shape parameters and the intermediate beam
    /// quantities from the physical description.
    pub fn derive(&self) -> Result<DerivedGeometry> {
        for (name, value) in [
            ("wavelength_m", self.wavelength_m),
            ("link_length_m", self.link_length_m),
            ("cn2", self.cn2),
            ("beam_waist_m", self.beam_waist_m),
            ("aperture_radius_m", self.aperture_radius_m),
            ("pointing_jitter_m", self.pointing_jitter_m),
            ("oe_conversion", self.oe_conversion),
            ("tx_power", self.tx_power),
            ("noise_power", self.noise_power),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(RfsoError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if !self.phase_front_radius_m.is_finite() || self.phase_front_radius_m == 0.0 {
            return Err(RfsoError::InvalidParameter(
                "phase_front_radius_m must be finite and nonzero".into(),
            ));
        }
        if !self.attenuation_db_per_km.is_finite() || self.attenuation_db_per_km < 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "attenuation_db_per_km must be nonnegative and finite, got {}",
                self.attenuation_db_per_km
            )));
        }
        let k = 2.0 * std::f64::consts::PI / self.wavelength_m;
        let l = self.link_length_m;
        let rytov_variance = 1.23 * self.cn2 * k.powf(7.0 / 6.0) * l.powf(11.0 / 6.0);
        let s125 = rytov_variance.powf(6.0 / 5.0);
        // Gaussian-beam parameters at the receiver plane.
        let theta0 = 1.0 - l / self.phase_front_radius_m;
        let lambda0 = 2.0 * l / (k * self.beam_waist_m * self.beam_waist_m);
        let denom = theta0 * theta0 + lambda0 * lambda0;
        let lambda1 = lambda0 / denom;
        let beam_radius_m =
            self.beam_waist_m * (denom * (1.0 + 1.63 * s125 * lambda1)).sqrt();
        // Fraction of power collected by a circular aperture of radius a
        // from a Gaussian beam of radius w_L, and the equivalent beam that
        // makes the collected fraction exactly Gaussian in the displacement.
        let v = (std::f64::consts::PI / 2.0).sqrt() * self.aperture_radius_m / beam_radius_m;
        let erf_v = erf(v);
        let a0 = erf_v * erf_v;
        let weq2 = beam_radius_m * beam_radius_m * std::f64::consts::PI.sqrt() * erf_v
            / (2.0 * v * (-v * v).exp());
        let xi = weq2.sqrt() / (2.0 * self.pointing_jitter_m);
        let (alpha, beta) = turbulence_shapes(rytov_variance)?;
        // Beer-Lambert attenuation; the coefficient arrives in dB/km.
        let path_loss =
            10f64.powf(-self.attenuation_db_per_km * self.link_length_m / 1000.0 / 10.0);
        // Mean electrical SNR of the square-law detector, referenced to the
        // mean received irradiance E[I] = I_l A0 h (unit-mean turbulence).
        let xi2 = xi * xi;
        let h = xi2 / (xi2 + 1.0);
        let mean_optical = self.tx_power * self.oe_conversion * h * a0 * path_loss;
        let mean_snr = mean_optical * mean_optical / self.noise_power;
        Ok(DerivedGeometry {
            rytov_variance,
            theta0,
            lambda0,
            beam_radius_m,
            collection_v: v,
            collected_fraction: a0,
            equivalent_beam_radius_m: weq2.sqrt(),
            alpha,
            beta,
            xi,
            path_loss,
            mean_snr,
        })
    }

    /// Convenience: derive and build the sampling/analysis channel.
    pub fn channel(&self) -> Result<FsoChannel> {
        let d = self.derive()?;
        FsoChannel::new(d.alpha, d.beta, d.xi)
    }

    /// Builds the physical-space irradiance sampler (turbulence, pointing
    /// displacement and deterministic path loss, not normalized).
    pub fn irradiance_sampler(&self) -> Result<IrradianceSampler> {
        let d = self.derive()?;
        IrradianceSampler::new(&d, self.pointing_jitter_m)
    }
}

/// Gamma-Gamma shape parameters (alpha, beta) for a given Rytov variance
/// under the plane-wave scintillation model. Both decrease as the turbulence
/// strengthens.
pub fn turbulence_shapes(rytov_variance: f64) -> Result<(f64, f64)> {
    if !rytov_variance.is_finite() || rytov_variance <= 0.0 {
        return Err(RfsoError::InvalidParameter(format!(
            "rytov_variance must be positive and finite, got {rytov_variance}"
        )));
    }
    let s125 = rytov_variance.powf(6.0 / 5.0);
    let alpha = 1.0 / ((0.49 * rytov_variance / (1.0 + 1.11 * s125).powf(7.0 / 6.0)).exp() - 1.0);
    let beta = 1.0 / ((0.51 * rytov_variance / (1.0 + 0.69 * s125).powf(5.0 / 6.0)).exp() - 1.0);
    Ok((alpha, beta))
}

/// Intermediate quantities of the geometry derivation, kept for reporting.
#[derive(Debug, Clone, Copy)]
pub struct DerivedGeometry {
    pub rytov_variance: f64,
    pub theta0: f64,
    pub lambda0: f64,
    pub beam_radius_m: f64,
    pub collection_v: f64,
    pub collected_fraction: f64,
    pub equivalent_beam_radius_m: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    /// Deterministic Beer-Lambert transmittance I_l over the link.
    pub path_loss: f64,
    /// Mean electrical SNR of the optical hop, (Pt eta h A0 I_l)^2 / sigma^2.
    pub mean_snr: f64,
}

/// Draws physical irradiance I = I_a * I_l * I_p by simulating each factor
/// literally: Gamma-Gamma turbulence (product of two unit-mean Gamma
/// variates), the fixed path loss, and the pointing loss obtained by drawing
/// the Rayleigh radial displacement R and evaluating the Gaussian-beam
/// collection profile A0 exp(-2 R^2 / w_eq^2). The analysis layer never uses
/// this route, which is what makes it an independent check of the normalized
/// model behind [`FsoChannel`].
#[derive(Debug, Clone)]
pub struct IrradianceSampler {
    turb_large: Gamma<f64>,
    turb_small: Gamma<f64>,
    collected_fraction: f64,
    equivalent_beam_radius_m: f64,
    pointing_jitter_m: f64,
    path_loss: f64,
    xi2: f64,
}

impl IrradianceSampler {
    fn new(d: &DerivedGeometry, pointing_jitter_m: f64) -> Result<Self> {
        let turb_large = Gamma::new(d.alpha, 1.0 / d.alpha).map_err(|e| {
            RfsoError::InvalidParameter(format!("turbulence shape alpha={}: {e}", d.alpha))
        })?;
        let turb_small = Gamma::new(d.beta, 1.0 / d.beta).map_err(|e| {
            RfsoError::InvalidParameter(format!("turbulence shape beta={}: {e}", d.beta))
        })?;
        Ok(Self {
            turb_large,
            turb_small,
            collected_fraction: d.collected_fraction,
            equivalent_beam_radius_m: d.equivalent_beam_radius_m,
            pointing_jitter_m,
            path_loss: d.path_loss,
            xi2: d.xi * d.xi,
        })
    }

    /// Pointing loss alone: R ~ Rayleigh(sigma_s), I_p = A0 e^{-2R^2/w_eq^2}.
    pub fn sample_pointing<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let radial = self.pointing_jitter_m * (-2.0 * u.ln()).sqrt();
        let w2 = self.equivalent_beam_radius_m * self.equivalent_beam_radius_m;
        self.collected_fraction * (-2.0 * radial * radial / w2).exp()
    }

    /// Full physical irradiance draw I = I_a * I_l * I_p.
    pub fn sample_irradiance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let turbulence = self.turb_large.sample(rng) * self.turb_small.sample(rng);
        turbulence * self.path_loss * self.sample_pointing(rng)
    }

    /// E[I_p] = A0 xi^2 / (xi^2 + 1), the target of the mean-pointing check.
    pub fn pointing_mean(&self) -> f64 {
        self.collected_fraction * self.xi2 / (self.xi2 + 1.0)
    }

    /// E[I] = I_l * E[I_p] (turbulence is unit-mean).
    pub fn mean(&self) -> f64 {
        self.path_loss * self.pointing_mean()
    }
}

/// Normalized irradiance distribution of the optical hop.
#[derive(Debug, Clone)]
pub struct FsoChannel {
    alpha: f64,
    beta: f64,
    xi2: f64,
    turb_large: Gamma<f64>,
    turb_small: Gamma<f64>,
}

impl FsoChannel {
    pub fn new(alpha: f64, beta: f64, xi: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("xi", xi)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(RfsoError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let turb_large = Gamma::new(alpha, 1.0 / alpha).map_err(|e| {
            RfsoError::InvalidParameter(format!("turbulence shape alpha={alpha}: {e}"))
        })?;
        let turb_small = Gamma::new(beta, 1.0 / beta).map_err(|e| {
            RfsoError::InvalidParameter(format!("turbulence shape beta={beta}: {e}"))
        })?;
        Ok(Self {
            alpha,
            beta,
            xi2: xi * xi,
            turb_large,
            turb_small,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn xi2(&self) -> f64 {
        self.xi2
    }

    /// Mean collected fraction of the pointing loss relative to A0:
    /// h = xi^2 / (xi^2 + 1), so that E[I_p] = A0 h.
    pub fn pointing_mean(&self) -> f64 {
        self.xi2 / (self.xi2 + 1.0)
    }

    /// Draws I / E[I]: unit-mean turbulence times pointing loss rescaled by
    /// its own mean.
    pub fn sample_normalized<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let turbulence = self.turb_large.sample(rng) * self.turb_small.sample(rng);
        let u: f64 = rng.gen();
        let pointing = u.powf(1.0 / self.xi2);
        turbulence * pointing / self.pointing_mean()
    }

    /// Density of the normalized irradiance at x > 0.
    pub fn pdf_normalized(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let h = self.pointing_mean();
        let b = [self.xi2 - 1.0, self.alpha - 1.0, self.beta - 1.0];
        let g = MeijerEvaluator::new(&[], &[self.xi2], &b)?;
        let (log_g, sign) = g.eval_log(self.alpha * self.beta * h * x)?;
        if sign <= 0.0 {
            return Ok(0.0);
        }
        let log_pref = (self.alpha * self.beta * self.xi2 * h).ln()
            - ln_gamma(self.alpha)
            - ln_gamma(self.beta);
        Ok((log_pref + log_g).exp())
    }

    /// Density of the electrical SNR gamma2 = mean_snr * (I/E[I])^2 of the
    /// square-law detector, at x > 0.
    pub fn snr_pdf(&self, mean_snr: f64, x: f64) -> Result<f64> {
        if !mean_snr.is_finite() || mean_snr <= 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "mean_snr must be positive and finite, got {mean_snr}"
            )));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        let s = (x / mean_snr).sqrt();
        Ok(self.pdf_normalized(s)? / (2.0 * (x * mean_snr).sqrt()))
    }
}
