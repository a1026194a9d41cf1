//! Experiment configuration: a JSON document describing one sweep.
//!
//! Every field has a Table-II-style default, so the empty document `{}` is a
//! complete, runnable experiment (clear-air moderate turbulence, N = m = 5,
//! rho = 0.9, IBO = 30 dB, outage metric at gamma_th = -20 dB). Keys carry
//! their unit in the name (`..._db`, `..._km`, `..._nm`, `..._cm`, `..._mm`)
//! and unknown keys are rejected, so a typo fails loudly instead of silently
//! running the default.
//!
//! The swept `snr_grid_db` axis is the conventional "average SNR" of the
//! figures: both hop means follow the axis value (linear), each optionally
//! shifted by its block's `snr_offset_db`. The optical geometry shapes the
//! fading distribution (alpha, beta, xi) and is echoed, together with every
//! other derived quantity, into the output provenance header.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analysis::{LinkModel, ModulationParams};
use crate::error::{Result, RfsoError};
use crate::fso_hop::{DerivedGeometry, FsoChannel, FsoGeometry};
use crate::impairment::SelImpairment;
use crate::mcsim::{McMetric, McPlan};
use crate::rf_hop::{RfSelection, MAX_RELAYS};

/// RF hop block: relay population and selection behavior.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RfBlock {
    /// Relay count N.
    #[serde(alias = "N")]
    pub n: u32,
    /// Selected order statistic m (m = N picks the best estimate).
    pub m: u32,
    /// Correlation between the selection estimate and the realized channel.
    pub rho: f64,
    /// dB shift of this hop's mean SNR relative to the swept axis.
    pub snr_offset_db: f64,
}

impl Default for RfBlock {
    fn default() -> Self {
        Self {
            n: 5,
            m: 5,
            rho: 0.9,
            snr_offset_db: 0.0,
        }
    }
}

/// FSO hop block: physical link geometry in unit-suffixed keys.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FsoBlock {
    pub link_length_km: f64,
    pub wavelength_nm: f64,
    pub aperture_radius_cm: f64,
    pub beam_waist_mm: f64,
    /// Phase-front radius of curvature at the transmitter; negative for the
    /// converging reference design.
    pub phase_front_radius_m: f64,
    /// Refractive-index structure parameter C_n^2 in m^(-2/3).
    pub cn2: f64,
    /// Pointing jitter standard deviation sigma_s.
    pub sigma_s_cm: f64,
    /// Weather attenuation (clear air: 0.43 dB/km).
    pub sigma_db_per_km: f64,
    /// Optical-to-electrical conversion efficiency.
    pub oe_conversion: f64,
    /// Transmit optical power, normalized units.
    pub tx_power: f64,
    /// Receiver electrical noise power, normalized units.
    pub noise_power: f64,
    /// dB shift of this hop's mean SNR relative to the swept axis.
    pub snr_offset_db: f64,
    /// Direct pointing-coefficient override: when set, xi is imposed instead
    /// of derived from the beam geometry (alpha and beta stay derived).
    pub xi_override: Option<f64>,
}

impl Default for FsoBlock {
    fn default() -> Self {
        Self {
            link_length_km: 1.0,
            wavelength_nm: 1550.0,
            aperture_radius_cm: 5.0,
            beam_waist_mm: 5.0,
            phase_front_radius_m: -10.0,
            cn2: 5e-14,
            sigma_s_cm: 3.75,
            sigma_db_per_km: 0.43,
            oe_conversion: 1.0,
            tx_power: 1.0,
            noise_power: 1.0,
            snr_offset_db: 0.0,
            xi_override: None,
        }
    }
}

/// Amplifier block: either a soft-envelope limiter at the given input
/// back-off or the ideal (distortionless) amplifier.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HpaBlock {
    pub ibo_db: Option<f64>,
    pub ideal: bool,
}

impl Default for HpaBlock {
    fn default() -> Self {
        Self {
            ibo_db: None,
            ideal: false,
        }
    }
}

/// Which quantity the sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Outage,
    Bep,
    Capacity,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Outage => "outage",
            MetricKind::Bep => "bep",
            MetricKind::Capacity => "capacity",
        })
    }
}

/// Which evaluation routes the sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Asymptotic,
    Mc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Asymptotic => "asymptotic",
            Method::Mc => "mc",
        })
    }
}

/// Monte Carlo block mirroring [`McPlan`].
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McBlock {
    pub trials: u64,
    pub seed: u64,
    pub batch: u64,
}

impl Default for McBlock {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1550,
            batch: 100_000,
        }
    }
}

/// One fully described experiment. Construct through [`load_config`] or
/// [`parse_config`] so the invariants have been checked.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    rf: RfBlock,
    fso: FsoBlock,
    hpa: HpaBlock,
    metric: MetricKind,
    modulation: String,
    gamma_th_db: f64,
    snr_grid_db: Vec<f64>,
    methods: Vec<Method>,
    mc: McBlock,
    output: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            rf: RfBlock::default(),
            fso: FsoBlock::default(),
            hpa: HpaBlock::default(),
            metric: MetricKind::Outage,
            modulation: "cbfsk".into(),
            gamma_th_db: -20.0,
            snr_grid_db: (0..=12).map(|k| 5.0 * k as f64).collect(),
            methods: vec![Method::Analytic, Method::Asymptotic, Method::Mc],
            mc: McBlock::default(),
            output: PathBuf::from("sweep.csv"),
        }
    }
}

/// Reads and validates a JSON experiment description.
pub fn load_config<P: AsRef<Path>>(path: P) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| RfsoError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Validates a JSON experiment description already in memory.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| RfsoError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn methods(&self) -> &[Method] {
        &self.methods
    }

    pub fn snr_grid_db(&self) -> &[f64] {
        &self.snr_grid_db
    }

    pub fn gamma_th_db(&self) -> f64 {
        self.gamma_th_db
    }

    pub fn output(&self) -> &Path {
        &self.output
    }

    pub fn set_output(&mut self, path: PathBuf) {
        self.output = path;
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.mc.seed = seed;
    }

    pub fn mc_trials(&self) -> u64 {
        self.mc.trials
    }

    pub fn mc_seed(&self) -> u64 {
        self.mc.seed
    }

    /// Outage threshold on the linear scale.
    pub fn gamma_th(&self) -> f64 {
        10f64.powf(self.gamma_th_db / 10.0)
    }

    /// The physical geometry with units resolved to meters.
    pub fn fso_geometry(&self) -> FsoGeometry {
        FsoGeometry {
            wavelength_m: self.fso.wavelength_nm * 1e-9,
            link_length_m: self.fso.link_length_km * 1e3,
            cn2: self.fso.cn2,
            beam_waist_m: self.fso.beam_waist_mm * 1e-3,
            phase_front_radius_m: self.fso.phase_front_radius_m,
            aperture_radius_m: self.fso.aperture_radius_cm * 1e-2,
            pointing_jitter_m: self.fso.sigma_s_cm * 1e-2,
            attenuation_db_per_km: self.fso.sigma_db_per_km,
            oe_conversion: self.fso.oe_conversion,
            tx_power: self.fso.tx_power,
            noise_power: self.fso.noise_power,
        }
    }

    /// Derived beam/turbulence quantities for the provenance header.
    pub fn derived_geometry(&self) -> Result<DerivedGeometry> {
        self.fso_geometry().derive()
    }

    pub fn modulation(&self) -> Result<ModulationParams> {
        match self.modulation.as_str() {
            "cbfsk" => Ok(ModulationParams::cbfsk()),
            "cbpsk" => Ok(ModulationParams::cbpsk()),
            "nbfsk" => Ok(ModulationParams::nbfsk()),
            "dbpsk" => Ok(ModulationParams::dbpsk()),
            other => Err(RfsoError::Config(format!(
                "modulation: unknown preset '{other}', expected one of cbfsk, cbpsk, nbfsk, dbpsk"
            ))),
        }
    }

    pub fn impairment(&self) -> Result<SelImpairment> {
        if self.hpa.ideal {
            Ok(SelImpairment::ideal())
        } else {
            SelImpairment::from_ibo_db(self.hpa.ibo_db.unwrap_or(30.0))
        }
    }

    /// The optical fading channel, honoring a direct xi override.
    pub fn fso_channel(&self) -> Result<FsoChannel> {
        let d = self.derived_geometry()?;
        let xi = self.fso.xi_override.unwrap_or(d.xi);
        FsoChannel::new(d.alpha, d.beta, xi)
    }

    /// Builds the link model at one swept average SNR (linear scale).
    pub fn link_model(&self, snr_axis: f64) -> Result<LinkModel> {
        if !snr_axis.is_finite() || snr_axis <= 0.0 {
            return Err(RfsoError::InvalidParameter(format!(
                "swept SNR must be positive and finite, got {snr_axis}"
            )));
        }
        let gbar1 = snr_axis * 10f64.powf(self.rf.snr_offset_db / 10.0);
        let gbar2 = snr_axis * 10f64.powf(self.fso.snr_offset_db / 10.0);
        let rf = RfSelection::new(self.rf.n, self.rf.m, self.rf.rho, gbar1)?;
        LinkModel::new(rf, self.fso_channel()?, gbar2, self.impairment()?)
    }

    /// The metric with its parameters resolved.
    pub fn mc_metric(&self) -> Result<McMetric> {
        Ok(match self.metric {
            MetricKind::Outage => McMetric::Outage {
                gamma_th: self.gamma_th(),
            },
            MetricKind::Bep => McMetric::Bep {
                modulation: self.modulation()?,
            },
            MetricKind::Capacity => McMetric::Capacity,
        })
    }

    pub fn mc_plan(&self) -> Result<McPlan> {
        McPlan::new(self.mc.trials, self.mc.seed, self.mc.batch, self.mc_metric()?)
    }

    /// Applies one `KEY=VALUE` override with a dotted key path. Callers must
    /// re-run [`ExperimentConfig::validate`] after the last override.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        fn bad(key: &str, value: &str, expected: &str) -> RfsoError {
            RfsoError::Config(format!("override {key}: expected {expected}, got '{value}'"))
        }
        let parse_f64 = |key: &str, value: &str| -> Result<f64> {
            value.parse().map_err(|_| bad(key, value, "a number"))
        };
        let parse_u64 = |key: &str, value: &str| -> Result<u64> {
            value.parse().map_err(|_| bad(key, value, "an unsigned integer"))
        };
        let parse_u32 = |key: &str, value: &str| -> Result<u32> {
            value.parse().map_err(|_| bad(key, value, "an unsigned integer"))
        };
        let parse_bool = |key: &str, value: &str| -> Result<bool> {
            value.parse().map_err(|_| bad(key, value, "true or false"))
        };
        match key {
            "rf.n" => self.rf.n = parse_u32(key, value)?,
            "rf.m" => self.rf.m = parse_u32(key, value)?,
            "rf.rho" => self.rf.rho = parse_f64(key, value)?,
            "rf.snr_offset_db" => self.rf.snr_offset_db = parse_f64(key, value)?,
            "fso.link_length_km" => self.fso.link_length_km = parse_f64(key, value)?,
            "fso.wavelength_nm" => self.fso.wavelength_nm = parse_f64(key, value)?,
            "fso.aperture_radius_cm" => self.fso.aperture_radius_cm = parse_f64(key, value)?,
            "fso.beam_waist_mm" => self.fso.beam_waist_mm = parse_f64(key, value)?,
            "fso.phase_front_radius_m" => {
                self.fso.phase_front_radius_m = parse_f64(key, value)?
            }
            "fso.cn2" => self.fso.cn2 = parse_f64(key, value)?,
            "fso.sigma_s_cm" => self.fso.sigma_s_cm = parse_f64(key, value)?,
            "fso.sigma_db_per_km" => self.fso.sigma_db_per_km = parse_f64(key, value)?,
            "fso.oe_conversion" => self.fso.oe_conversion = parse_f64(key, value)?,
            "fso.tx_power" => self.fso.tx_power = parse_f64(key, value)?,
            "fso.noise_power" => self.fso.noise_power = parse_f64(key, value)?,
            "fso.snr_offset_db" => self.fso.snr_offset_db = parse_f64(key, value)?,
            "fso.xi_override" => self.fso.xi_override = Some(parse_f64(key, value)?),
            "hpa.ibo_db" => self.hpa.ibo_db = Some(parse_f64(key, value)?),
            "hpa.ideal" => self.hpa.ideal = parse_bool(key, value)?,
            "metric" => {
                self.metric = match value {
                    "outage" => MetricKind::Outage,
                    "bep" => MetricKind::Bep,
                    "capacity" => MetricKind::Capacity,
                    _ => return Err(bad(key, value, "outage, bep, or capacity")),
                }
            }
            "modulation" => self.modulation = value.to_string(),
            "gamma_th_db" => self.gamma_th_db = parse_f64(key, value)?,
            "snr_grid_db" => {
                let grid: std::result::Result<Vec<f64>, _> =
                    value.split(',').map(|s| s.trim().parse()).collect();
                self.snr_grid_db =
                    grid.map_err(|_| bad(key, value, "a comma-separated number list"))?;
            }
            "methods" => {
                let mut methods = Vec::new();
                for item in value.split(',') {
                    methods.push(match item.trim() {
                        "analytic" => Method::Analytic,
                        "asymptotic" => Method::Asymptotic,
                        "mc" => Method::Mc,
                        _ => {
                            return Err(bad(
                                key,
                                value,
                                "a comma-separated subset of analytic, asymptotic, mc",
                            ))
                        }
                    });
                }
                self.methods = methods;
            }
            "mc.trials" => self.mc.trials = parse_u64(key, value)?,
            "mc.seed" => self.mc.seed = parse_u64(key, value)?,
            "mc.batch" => self.mc.batch = parse_u64(key, value)?,
            "output" => self.output = PathBuf::from(value),
            _ => {
                return Err(RfsoError::Config(format!(
                    "override {key}: unknown configuration key"
                )))
            }
        }
        Ok(())
    }

    /// Checks every invariant the schema cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.rf.n == 0 || self.rf.n > MAX_RELAYS {
            return Err(RfsoError::Config(format!(
                "rf.n: relay count must lie in 1..={MAX_RELAYS}, got {}",
                self.rf.n
            )));
        }
        if self.rf.m == 0 || self.rf.m > self.rf.n {
            return Err(RfsoError::Config(format!(
                "rf.m: selection rank must lie in 1..=N (N = {}), got {}",
                self.rf.n, self.rf.m
            )));
        }
        if !self.rf.rho.is_finite() || !(0.0..=1.0).contains(&self.rf.rho) {
            return Err(RfsoError::Config(format!(
                "rf.rho: correlation must lie in the interval [0, 1], got {}",
                self.rf.rho
            )));
        }
        for (name, value) in [
            ("rf.snr_offset_db", self.rf.snr_offset_db),
            ("fso.snr_offset_db", self.fso.snr_offset_db),
            ("gamma_th_db", self.gamma_th_db),
        ] {
            if !value.is_finite() {
                return Err(RfsoError::Config(format!(
                    "{name}: must be finite, got {value}"
                )));
            }
        }
        if let Some(xi) = self.fso.xi_override {
            if !xi.is_finite() || xi <= 0.0 {
                return Err(RfsoError::Config(format!(
                    "fso.xi_override: must be positive and finite, got {xi}"
                )));
            }
        }
        if self.hpa.ideal && self.hpa.ibo_db.is_some() {
            return Err(RfsoError::Config(
                "hpa: ideal = true conflicts with an explicit ibo_db; set one or the other"
                    .into(),
            ));
        }
        if self.snr_grid_db.is_empty() {
            return Err(RfsoError::Config(
                "snr_grid_db: at least one grid point is required".into(),
            ));
        }
        if let Some(bad) = self.snr_grid_db.iter().find(|v| !v.is_finite()) {
            return Err(RfsoError::Config(format!(
                "snr_grid_db: grid points must be finite, got {bad}"
            )));
        }
        if self.methods.is_empty() {
            return Err(RfsoError::Config(
                "methods: at least one of analytic, asymptotic, mc is required".into(),
            ));
        }
        // Deep checks: realize each component once so field errors surface
        // at load time, not at the first grid point.
        self.modulation()
            .map_err(|e| RfsoError::Config(format!("modulation: {e}")))?;
        self.impairment()
            .map_err(|e| RfsoError::Config(format!("hpa.ibo_db: {e}")))?;
        self.derived_geometry()
            .map_err(|e| RfsoError::Config(format!("fso: {e}")))?;
        self.fso_channel()
            .map_err(|e| RfsoError::Config(format!("fso: {e}")))?;
        if self.methods.contains(&Method::Mc) {
            self.mc_plan()
                .map_err(|e| RfsoError::Config(format!("mc: {e}")))?;
        }
        Ok(())
    }

    /// Every resolved setting and derived quantity as `key = value` pairs,
    /// in a stable order, for the output provenance header. `kappa` depends
    /// on the swept SNR through the relay gain, so it is reported at the
    /// first grid point.
    pub fn provenance(&self) -> Result<Vec<(String, String)>> {
        let d = self.derived_geometry()?;
        let hpa = self.impairment()?;
        let first_snr = 10f64.powf(self.snr_grid_db[0] / 10.0);
        let first_model = self.link_model(first_snr)?;
        let grid = self
            .snr_grid_db
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(",");
        let methods = self
            .methods
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut pairs: Vec<(String, String)> = vec![
            ("metric".into(), self.metric.to_string()),
            ("methods".into(), methods),
            ("modulation".into(), self.modulation.clone()),
            ("gamma_th_db".into(), format!("{}", self.gamma_th_db)),
            ("snr_grid_db".into(), grid),
            ("rf.n".into(), format!("{}", self.rf.n)),
            ("rf.m".into(), format!("{}", self.rf.m)),
            ("rf.rho".into(), format!("{}", self.rf.rho)),
            ("rf.snr_offset_db".into(), format!("{}", self.rf.snr_offset_db)),
            ("fso.link_length_km".into(), format!("{}", self.fso.link_length_km)),
            ("fso.wavelength_nm".into(), format!("{}", self.fso.wavelength_nm)),
            ("fso.aperture_radius_cm".into(), format!("{}", self.fso.aperture_radius_cm)),
            ("fso.beam_waist_mm".into(), format!("{}", self.fso.beam_waist_mm)),
            ("fso.phase_front_radius_m".into(), format!("{}", self.fso.phase_front_radius_m)),
            ("fso.cn2".into(), format!("{:e}", self.fso.cn2)),
            ("fso.sigma_s_cm".into(), format!("{}", self.fso.sigma_s_cm)),
            ("fso.sigma_db_per_km".into(), format!("{}", self.fso.sigma_db_per_km)),
            ("fso.oe_conversion".into(), format!("{}", self.fso.oe_conversion)),
            ("fso.tx_power".into(), format!("{}", self.fso.tx_power)),
            ("fso.noise_power".into(), format!("{}", self.fso.noise_power)),
            ("fso.snr_offset_db".into(), format!("{}", self.fso.snr_offset_db)),
        ];
        if let Some(xi) = self.fso.xi_override {
            pairs.push(("fso.xi_override".into(), format!("{xi}")));
        }
        pairs.push((
            "hpa".into(),
            if self.hpa.ideal {
                "ideal".into()
            } else {
                format!("ibo_db = {}", self.hpa.ibo_db.unwrap_or(30.0))
            },
        ));
        pairs.push(("mc.trials".into(), format!("{}", self.mc.trials)));
        pairs.push(("mc.seed".into(), format!("{}", self.mc.seed)));
        pairs.push(("mc.batch".into(), format!("{}", self.mc.batch)));
        let derived: [(&str, f64); 13] = [
            ("derived.rytov_variance", d.rytov_variance),
            ("derived.alpha", d.alpha),
            ("derived.beta", d.beta),
            ("derived.xi", self.fso.xi_override.unwrap_or(d.xi)),
            ("derived.beam_radius_m", d.beam_radius_m),
            ("derived.equivalent_beam_radius_m", d.equivalent_beam_radius_m),
            ("derived.collected_fraction_a0", d.collected_fraction),
            ("derived.path_loss_il", d.path_loss),
            ("derived.mean_snr_scale", d.mean_snr),
            ("derived.nu", hpa.nu()),
            ("derived.mu", hpa.mu()),
            ("derived.distortion_to_signal", hpa.distortion_to_signal()),
            ("derived.kappa_at_first_point", first_model.kappa()),
        ];
        for (name, value) in derived {
            pairs.push((name.into(), format!("{value:.12e}")));
        }
        Ok(pairs)
    }
}
