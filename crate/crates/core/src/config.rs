//! Run configuration shared by every pipeline stage.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::features::FeatureConfig;
use crate::learn::ForestParams;
use crate::scenario::ScenarioConfig;
use crate::{Error, Result};

/// Settings specific to the estimation-noise sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub scenarios_per_cell: usize,
    pub sigma_grid: Vec<f64>,
    pub forest: ForestParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scenarios_per_cell: 10,
            sigma_grid: vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0],
            forest: ForestParams { n_trees: 50, ..ForestParams::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub features: FeatureConfig,
    pub forest: ForestParams,
    /// Fraction of scenarios per class held out for testing.
    pub test_fraction: f64,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            features: FeatureConfig::default(),
            forest: ForestParams::default(),
            test_fraction: 0.3,
            sweep: SweepConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid run config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.features.validate()?;
        self.forest.validate()?;
        self.sweep.forest.validate()?;
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config("test_fraction must lie in (0, 1)".into()));
        }
        validate_sigma_grid(&self.sweep.sigma_grid)?;
        if self.sweep.scenarios_per_cell == 0 {
            return Err(Error::Config("sweep.scenarios_per_cell must be at least 1".into()));
        }
        Ok(())
    }

    pub fn hash(&self) -> Result<String> {
        hash_json(self)
    }
}

pub fn validate_sigma_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("sigma grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return Err(Error::Config(format!("sigma values must be finite and >= 0, got {bad}")));
    }
    Ok(())
}

/// SHA-256 (hex) of the compact JSON serialization of `value`.
pub fn hash_json<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
