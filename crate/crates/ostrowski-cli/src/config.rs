use std::fs;
use std::path::Path;

use ostrowski::NormConfig;
use serde::Deserialize;

/// One bound/sweep job as read from a `--config` JSON file. Every field
/// is optional here; completeness is checked only after the inline flags
/// have been merged on top.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub expression: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub breakpoints: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub grid: Option<usize>,
    pub mode: Option<String>,
    pub format: Option<OutputFormat>,
    pub norm: Option<NormSection>,
}

/// Sampling controls, nested under `"norm"` in the config file.
#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSection {
    pub tol: Option<f64>,
    pub max_samples: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid config file {}: {e}", path.display()))
    }

    /// Lay `flags` over `self`: any field given inline wins.
    pub fn merged_with(mut self, flags: JobConfig) -> JobConfig {
        if flags.expression.is_some() {
            self.expression = flags.expression;
        }
        if flags.a.is_some() {
            self.a = flags.a;
        }
        if flags.b.is_some() {
            self.b = flags.b;
        }
        if flags.breakpoints.is_some() {
            self.breakpoints = flags.breakpoints;
        }
        if flags.p.is_some() {
            self.p = flags.p;
        }
        if flags.grid.is_some() {
            self.grid = flags.grid;
        }
        if flags.mode.is_some() {
            self.mode = flags.mode;
        }
        if flags.format.is_some() {
            self.format = flags.format;
        }
        if let Some(over) = flags.norm {
            let mut base = self.norm.unwrap_or_default();
            if over.tol.is_some() {
                base.tol = over.tol;
            }
            if over.max_samples.is_some() {
                base.max_samples = over.max_samples;
            }
            self.norm = Some(base);
        }
        self
    }

    pub fn norm_config(&self) -> NormConfig {
        let mut cfg = NormConfig::default();
        if let Some(norm) = self.norm {
            if let Some(tol) = norm.tol {
                cfg.tol = tol;
            }
            if let Some(max) = norm.max_samples {
                cfg.max_samples = max;
            }
        }
        cfg
    }
}
