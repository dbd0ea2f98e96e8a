//! Experiment configuration: pinned defaults plus a user override file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zoo::{standard_members, SymplecticMap};

pub const DEFAULTS: &str = include_str!("../defaults.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Growth,
    Propagation,
    Delta,
    Spectrum,
    Filling,
    Distortion,
    Certificate,
    Appendix,
    Isoperimetric,
    Flux,
    All,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub output: OutputConfig,
    pub growth: GrowthConfig,
    pub classify: ClassifyConfig,
    pub propagation: PropagationConfig,
    pub delta: DeltaConfig,
    pub spectrum: SpectrumConfig,
    pub filling: FillingConfig,
    pub distortion: DistortionConfig,
    pub certificate: CertificateConfig,
    pub isoperimetric: IsoperimetricConfig,
    pub flux: FluxConfig,
    pub appendix: AppendixConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub maps: Vec<String>,
    pub n_max: usize,
    pub grid: usize,
    pub translation_n_max: usize,
    pub skew_n_max: usize,
    pub twist_n_min: usize,
    pub twist_n_max: usize,
    pub twist_grid: usize,
    pub shear_tolerance: f64,
    pub twist_tolerance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub elliptic_slack: f64,
    pub hyperbolic_margin: f64,
    pub parabolic_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationConfig {
    pub n_max: usize,
    pub grid: usize,
    pub grid_4d: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaConfig {
    pub map: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub n_max: u32,
    pub scaling_tolerance: f64,
    pub independence_tolerance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub h0: f64,
    pub epsilon: f64,
    pub n_max: u32,
    pub tolerance: f64,
    pub conjugators: Vec<[f64; 2]>,
    pub inequality_grid: usize,
    pub inequality_n: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FillingConfig {
    pub resolution: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub per_octave: u32,
    pub hyperbolic_resolution: usize,
    pub hyperbolic_s_max: f64,
    pub invert_t: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortionConfig {
    pub q: i64,
    pub p: i64,
    pub n_max: u64,
    pub radius: usize,
    /// Radius at which the search is timed against the runtime budget.
    pub timing_radius: usize,
    pub max_nodes: usize,
    pub construct_k_max: u32,
    pub liminf_k_max: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    pub n_max: u32,
    pub grid: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoperimetricConfig {
    pub loops: usize,
    pub winding_loops: usize,
    pub kappa: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxConfig {
    pub samples: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendixConfig {
    pub n_max: usize,
    pub grid: usize,
    pub fixed_samples: usize,
}

/// Recursively overlays `top` onto `base`; tables merge, everything else
/// replaces.
fn merge(base: &mut toml::Value, top: toml::Value) {
    match (base, top) {
        (toml::Value::Table(b), toml::Value::Table(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl ExperimentConfig {
    pub fn defaults() -> Self {
        Self::from_overrides("").expect("embedded defaults are valid")
    }

    /// Parses a TOML override on top of the defaults.
    pub fn from_overrides(text: &str) -> Result<Self> {
        let mut base: toml::Value = toml::from_str(DEFAULTS).map_err(|e| Error::Config(e.to_string()))?;
        let top: toml::Value = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, top);
        let cfg: ExperimentConfig = base.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_overrides(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("growth.shear_tolerance", self.growth.shear_tolerance),
            ("growth.twist_tolerance", self.growth.twist_tolerance),
            ("classify.elliptic_slack", self.classify.elliptic_slack),
            ("classify.hyperbolic_margin", self.classify.hyperbolic_margin),
            ("classify.parabolic_residual", self.classify.parabolic_residual),
            ("delta.scaling_tolerance", self.delta.scaling_tolerance),
            ("delta.independence_tolerance", self.delta.independence_tolerance),
            ("spectrum.tolerance", self.spectrum.tolerance),
            ("spectrum.epsilon", self.spectrum.epsilon),
            ("filling.s_min", self.filling.s_min),
            ("isoperimetric.kappa", self.isoperimetric.kappa),
            ("flux.tolerance", self.flux.tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.filling.s_max <= self.filling.s_min || self.filling.per_octave == 0 {
            return Err(Error::Config("filling grid is empty".into()));
        }
        if self.growth.twist_n_min > self.growth.twist_n_max {
            return Err(Error::Config("growth.twist_n_min exceeds twist_n_max".into()));
        }
        for m in &self.growth.maps {
            resolve_map(m)?;
        }
        resolve_map(&self.delta.map)?;
        Ok(())
    }
}

/// A standard member by name, or an inline JSON description.
pub fn resolve_map(spec: &str) -> Result<(String, SymplecticMap)> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        let map = SymplecticMap::from_json(trimmed)?;
        return Ok((map.model_name().to_string(), map));
    }
    standard_members()
        .into_iter()
        .find(|(name, _)| *name == trimmed)
        .map(|(name, m)| (name.to_string(), m))
        .ok_or_else(|| Error::Config(format!("unknown map {trimmed:?}; use a name from `zoo list` or a JSON description")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse() {
        let cfg = ExperimentConfig::defaults();
        assert_eq!(cfg.experiment, ExperimentKind::All);
        assert_eq!(cfg.isoperimetric.loops, 200);
    }

    #[test]
    fn overrides_and_rejections() {
        let cfg = ExperimentConfig::from_overrides("seed = 5\n[growth]\nn_max = 8\n").unwrap();
        assert_eq!((cfg.seed, cfg.growth.n_max, cfg.growth.grid), (5, 8, 64));
        assert!(ExperimentConfig::from_overrides("bogus = 1").is_err());
        assert!(ExperimentConfig::from_overrides("[growth]\nbogus = 1").is_err());
        assert!(ExperimentConfig::from_overrides("[flux]\ntolerance = -1.0").is_err());
        assert!(ExperimentConfig::from_overrides("[growth\n").is_err());
        assert!(ExperimentConfig::from_overrides("[delta]\nmap = \"nope\"").is_err());
    }

    #[test]
    fn inline_maps() {
        let (name, _) = resolve_map(r#"{"model":"torus2","params":{"kind":"translation","shift":[0.5,0.0]}}"#).unwrap();
        assert_eq!(name, "torus2");
    }
}
