use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{BandFilterSpec, FilterBand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WirelengthModel {
    Wa,
    Lse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleModel {
    GaussianRedistribution,
    ExpRestoration,
    LinearRestoration,
    SigmoidRestoration,
}

impl ScheduleModel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ScheduleModel::GaussianRedistribution),
            "exp" => Ok(ScheduleModel::ExpRestoration),
            "linear" => Ok(ScheduleModel::LinearRestoration),
            "sigmoid" => Ok(ScheduleModel::SigmoidRestoration),
            other => Err(Error::Config(format!(
                "unknown schedule model '{other}' (expected gaussian|exp|linear|sigmoid)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScheduleModel::GaussianRedistribution => "gaussian",
            ScheduleModel::ExpRestoration => "exp",
            ScheduleModel::LinearRestoration => "linear",
            ScheduleModel::SigmoidRestoration => "sigmoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RescaleMode {
    BboxAffine,
    None,
}

/// Full run configuration. Key names follow the tuning-space
/// conventions; see `docs/config.md` for the grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    // spectral initialization
    pub low_filter_sigma: f64,
    pub mid_filter_sigma: f64,
    pub high_filter_sigma: f64,
    pub low_filter_k: u32,
    pub mid_filter_k: u32,
    pub high_filter_k: u32,
    pub low_filter_effect: f64,
    pub mid_filter_effect: f64,
    pub init_window: f64,
    pub init_rescale: RescaleMode,
    // area-hint refinement
    pub refine_iteration: u32,
    pub refine_num_bin_xy: usize,
    pub detection_ratio: f64,
    /// per-bin capacity; defaults to target_density when unset
    pub bin_capacity: Option<f64>,
    pub refine_relax: f64,
    pub refine_mu: f64,
    pub refine_filter_k: u32,
    // macro schedule
    pub schedule_model: ScheduleModel,
    pub schedule_iteration: u32,
    pub sigma_factor: f64,
    pub k_factor: f64,
    // global placement
    pub density_weight: f64,
    pub gamma: f64,
    pub gp_learning_rate: f64,
    pub gp_wirelength: WirelengthModel,
    pub ref_hpwl: f64,
    pub lower_pcof: f64,
    pub upper_pcof: f64,
    pub target_density: f64,
    pub num_bin_x: usize,
    pub num_bin_y: usize,
    pub gp_max_iteration: u32,
    pub stop_overflow: f64,
    // shared
    pub seed: u64,
    pub max_net_degree: usize,
    /// independent placement starts per run; the best result is kept
    pub num_starts: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            low_filter_sigma: 4.0,
            mid_filter_sigma: 4.0,
            high_filter_sigma: 2.0,
            low_filter_k: 4,
            mid_filter_k: 2,
            high_filter_k: 2,
            low_filter_effect: 0.5,
            mid_filter_effect: 0.3,
            init_window: 1.0,
            init_rescale: RescaleMode::BboxAffine,
            refine_iteration: 3,
            refine_num_bin_xy: 16,
            detection_ratio: 0.1,
            bin_capacity: None,
            refine_relax: 0.5,
            refine_mu: 4.0,
            refine_filter_k: 2,
            schedule_model: ScheduleModel::ExpRestoration,
            schedule_iteration: 150,
            sigma_factor: 0.05,
            k_factor: 2.0,
            density_weight: 1e-2,
            gamma: 4.0,
            gp_learning_rate: 0.01,
            gp_wirelength: WirelengthModel::Wa,
            ref_hpwl: 3.5e5,
            lower_pcof: 0.95,
            upper_pcof: 1.05,
            target_density: 0.9,
            num_bin_x: 32,
            num_bin_y: 32,
            gp_max_iteration: 1000,
            stop_overflow: 0.1,
            seed: 1,
            max_net_degree: 100,
            num_starts: 1,
        }
    }
}

impl RunConfig {
    pub fn band_filter(&self) -> BandFilterSpec {
        let high = 1.0 - self.low_filter_effect - self.mid_filter_effect;
        BandFilterSpec {
            low: FilterBand {
                sigma: self.low_filter_sigma,
                k: self.low_filter_k,
                alpha: self.low_filter_effect,
            },
            mid: FilterBand {
                sigma: self.mid_filter_sigma,
                k: self.mid_filter_k,
                alpha: self.mid_filter_effect,
            },
            high: FilterBand {
                sigma: self.high_filter_sigma,
                k: self.high_filter_k,
                alpha: high,
            },
        }
    }

    pub fn bin_capacity(&self) -> f64 {
        self.bin_capacity.unwrap_or(self.target_density)
    }

    pub fn validate(&self) -> Result<()> {
        if self.low_filter_effect + self.mid_filter_effect > 1.0 + 1e-12 {
            return Err(Error::Config(format!(
                "low_filter_effect + mid_filter_effect = {} exceeds 1",
                self.low_filter_effect + self.mid_filter_effect
            )));
        }
        if self.low_filter_effect < 0.0 || self.mid_filter_effect < 0.0 {
            return Err(Error::Config("filter effects must be >= 0".into()));
        }
        self.band_filter().validate()?;
        if !(0.0 < self.init_window && self.init_window <= 1.0) {
            return Err(Error::Config("init_window must be in (0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.refine_relax) {
            return Err(Error::Config("refine_relax must be in [0, 1]".into()));
        }
        if self.refine_mu <= 0.0 {
            return Err(Error::Config("refine_mu must be > 0".into()));
        }
        if self.refine_filter_k < 1 {
            return Err(Error::Config("refine_filter_k must be >= 1".into()));
        }
        if !(0.0 < self.target_density && self.target_density <= 1.0) {
            return Err(Error::Config("target_density must be in (0, 1]".into()));
        }
        if let Some(c) = self.bin_capacity {
            if c <= 0.0 {
                return Err(Error::Config("bin_capacity must be > 0".into()));
            }
        }
        if !(0.0..1.0).contains(&self.stop_overflow) {
            return Err(Error::Config("stop_overflow must be in [0, 1)".into()));
        }
        if self.lower_pcof <= 0.0 || self.upper_pcof < self.lower_pcof {
            return Err(Error::Config("need 0 < RePlAce_LOWER_PCOF <= RePlAce_UPPER_PCOF".into()));
        }
        if self.gamma <= 0.0 || self.gp_learning_rate <= 0.0 || self.ref_hpwl <= 0.0 {
            return Err(Error::Config("gamma, GP_learning_rate, RePlAce_ref_hpwl must be > 0".into()));
        }
        if self.num_bin_x < 1 || self.num_bin_y < 1 || self.refine_num_bin_xy < 1 {
            return Err(Error::Config("bin counts must be >= 1".into()));
        }
        if self.num_starts < 1 {
            return Err(Error::Config("num_starts must be >= 1".into()));
        }
        Ok(())
    }

    /// Parses the flat key=value text format. `[section]` headers and
    /// `#` comments are ignored; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                continue;
            }
            let mut parts = line.splitn(2, '=');
            let key = parts.next().unwrap().trim();
            let val = parts
                .next()
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", idx + 1)))?
                .trim();
            cfg.set(key, val)
                .map_err(|e| Error::Config(format!("line {}: {e}", idx + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        RunConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, val: &str) -> Result<()> {
        fn f(v: &str) -> Result<f64> {
            v.parse()
                .map_err(|_| Error::Config(format!("expected number, got '{v}'")))
        }
        fn u(v: &str) -> Result<u32> {
            v.parse()
                .map_err(|_| Error::Config(format!("expected integer, got '{v}'")))
        }
        fn us(v: &str) -> Result<usize> {
            v.parse()
                .map_err(|_| Error::Config(format!("expected integer, got '{v}'")))
        }
        match key {
            "low_filter_sigma" => self.low_filter_sigma = f(val)?,
            "mid_filter_sigma" => self.mid_filter_sigma = f(val)?,
            "high_filter_sigma" => self.high_filter_sigma = f(val)?,
            "low_filter_k" => self.low_filter_k = u(val)?,
            "mid_filter_k" => self.mid_filter_k = u(val)?,
            "high_filter_k" => self.high_filter_k = u(val)?,
            "low_filter_effect" => self.low_filter_effect = f(val)?,
            "mid_filter_effect" => self.mid_filter_effect = f(val)?,
            "init_window" => self.init_window = f(val)?,
            "init_rescale" => {
                self.init_rescale = match val {
                    "bbox-affine" => RescaleMode::BboxAffine,
                    "none" => RescaleMode::None,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown init_rescale '{other}' (expected bbox-affine|none)"
                        )))
                    }
                }
            }
            "refine_iteration" => self.refine_iteration = u(val)?,
            "refine_num_bin_xy" => self.refine_num_bin_xy = us(val)?,
            "detection_ratio" => self.detection_ratio = f(val)?,
            "bin_capacity" => self.bin_capacity = Some(f(val)?),
            "refine_relax" => self.refine_relax = f(val)?,
            "refine_mu" => self.refine_mu = f(val)?,
            "refine_filter_k" => self.refine_filter_k = u(val)?,
            "schedule_model" => self.schedule_model = ScheduleModel::parse(val)?,
            "schedule_iteration" => self.schedule_iteration = u(val)?,
            "sigma_factor" => self.sigma_factor = f(val)?,
            "k_factor" => self.k_factor = f(val)?,
            "density_weight" => self.density_weight = f(val)?,
            "gamma" => self.gamma = f(val)?,
            "GP_learning_rate" => self.gp_learning_rate = f(val)?,
            "GP_wirelength" => {
                self.gp_wirelength = match val {
                    "WA" | "wa" => WirelengthModel::Wa,
                    "LSE" | "lse" => WirelengthModel::Lse,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown GP_wirelength '{other}' (expected WA|LSE)"
                        )))
                    }
                }
            }
            "RePlAce_ref_hpwl" => self.ref_hpwl = f(val)?,
            "RePlAce_LOWER_PCOF" => self.lower_pcof = f(val)?,
            "RePlAce_UPPER_PCOF" => self.upper_pcof = f(val)?,
            "target_density" => self.target_density = f(val)?,
            "num_bin_x" => self.num_bin_x = us(val)?,
            "num_bin_y" => self.num_bin_y = us(val)?,
            "gp_max_iteration" => self.gp_max_iteration = u(val)?,
            "stop_overflow" => self.stop_overflow = f(val)?,
            "seed" => {
                self.seed = val
                    .parse()
                    .map_err(|_| Error::Config(format!("expected integer, got '{val}'")))?
            }
            "max_net_degree" => self.max_net_degree = us(val)?,
            "num_starts" => self.num_starts = u(val)?,
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Canonical key=value rendering, used for config hashing and echo.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("low_filter_sigma", self.low_filter_sigma.to_string());
        kv("mid_filter_sigma", self.mid_filter_sigma.to_string());
        kv("high_filter_sigma", self.high_filter_sigma.to_string());
        kv("low_filter_k", self.low_filter_k.to_string());
        kv("mid_filter_k", self.mid_filter_k.to_string());
        kv("high_filter_k", self.high_filter_k.to_string());
        kv("low_filter_effect", self.low_filter_effect.to_string());
        kv("mid_filter_effect", self.mid_filter_effect.to_string());
        kv("init_window", self.init_window.to_string());
        kv(
            "init_rescale",
            match self.init_rescale {
                RescaleMode::BboxAffine => "bbox-affine".into(),
                RescaleMode::None => "none".into(),
            },
        );
        kv("refine_iteration", self.refine_iteration.to_string());
        kv("refine_num_bin_xy", self.refine_num_bin_xy.to_string());
        kv("detection_ratio", self.detection_ratio.to_string());
        kv("bin_capacity", self.bin_capacity().to_string());
        kv("refine_relax", self.refine_relax.to_string());
        kv("refine_mu", self.refine_mu.to_string());
        kv("refine_filter_k", self.refine_filter_k.to_string());
        kv("schedule_model", self.schedule_model.name().into());
        kv("schedule_iteration", self.schedule_iteration.to_string());
        kv("sigma_factor", self.sigma_factor.to_string());
        kv("k_factor", self.k_factor.to_string());
        kv("density_weight", self.density_weight.to_string());
        kv("gamma", self.gamma.to_string());
        kv("GP_learning_rate", self.gp_learning_rate.to_string());
        kv(
            "GP_wirelength",
            match self.gp_wirelength {
                WirelengthModel::Wa => "WA".into(),
                WirelengthModel::Lse => "LSE".into(),
            },
        );
        kv("RePlAce_ref_hpwl", self.ref_hpwl.to_string());
        kv("RePlAce_LOWER_PCOF", self.lower_pcof.to_string());
        kv("RePlAce_UPPER_PCOF", self.upper_pcof.to_string());
        kv("target_density", self.target_density.to_string());
        kv("num_bin_x", self.num_bin_x.to_string());
        kv("num_bin_y", self.num_bin_y.to_string());
        kv("gp_max_iteration", self.gp_max_iteration.to_string());
        kv("stop_overflow", self.stop_overflow.to_string());
        kv("seed", self.seed.to_string());
        kv("max_net_degree", self.max_net_degree.to_string());
        kv("num_starts", self.num_starts.to_string());
        s
    }

    /// Stable hex hash of the canonical key=value rendering.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_key_values().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
