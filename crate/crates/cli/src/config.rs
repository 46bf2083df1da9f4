//! Declarative experiment files and their merge with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use mimo_core::montecarlo::SweepConfig;
use mimo_core::presets::{Preset, DEFAULT_STOP_AT_ERRORS, DEFAULT_TRIALS};
use mimo_core::Modulation;

use crate::parse;

/// ```toml
/// out = "results"
///
/// [[sweep]]
/// n = 32
/// u = 32
/// mod = "qpsk"
/// snr = "0:2:30"
/// detectors = ["mmse:qr", "admin:5", "simo"]
/// trials = 2000
/// seed = 7
///
/// [complexity]
/// users = [4, 8, 16, 32, 64, 128]
/// t = 3
/// ```
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    #[serde(default, rename = "sweep")]
    pub sweeps: Vec<SweepEntry>,
    pub complexity: Option<ComplexityEntry>,
}

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepEntry {
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub u: Option<usize>,
    #[serde(rename = "mod")]
    pub modulation: Option<String>,
    pub snr: Option<String>,
    pub detectors: Option<Vec<String>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub stop_at_errors: Option<u64>,
}

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityEntry {
    pub users: Option<Vec<u64>>,
    pub t: Option<u64>,
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("config: cannot read {}: {e}", path.display()))?;
        toml::from_str(&text)
            .map_err(|e| format!("config: {}: {}", path.display(), e.message().trim()))
    }
}

impl SweepEntry {
    /// Fields set in `self` take precedence over `base`.
    pub fn over(self, base: &SweepEntry) -> SweepEntry {
        SweepEntry {
            preset: self.preset.or_else(|| base.preset.clone()),
            n: self.n.or(base.n),
            u: self.u.or(base.u),
            modulation: self.modulation.or_else(|| base.modulation.clone()),
            snr: self.snr.or_else(|| base.snr.clone()),
            detectors: self.detectors.or_else(|| base.detectors.clone()),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            stop_at_errors: self.stop_at_errors.or(base.stop_at_errors),
        }
    }

    /// Resolves into a validated sweep. Errors name the offending field.
    pub fn resolve(&self) -> Result<(SweepConfig, Option<Preset>), String> {
        let preset = self
            .preset
            .as_deref()
            .map(|p| p.parse::<Preset>().map_err(|e| format!("preset: {e}")))
            .transpose()?;
        let mut cfg = match preset {
            Some(p) => {
                let seed = self
                    .seed
                    .ok_or_else(|| format!("seed: required with preset {p}"))?;
                p.sweep(seed)
                    .ok_or_else(|| format!("preset: {p} is a complexity preset, use `complexity`"))?
            }
            None => {
                let need = |field: &str| format!("{field}: required without a preset");
                SweepConfig {
                    n: self.n.ok_or_else(|| need("n"))?,
                    u: self.u.ok_or_else(|| need("u"))?,
                    modulation: Modulation::Qpsk,
                    snr_db: Vec::new(),
                    curves: Vec::new(),
                    trials: DEFAULT_TRIALS,
                    master_seed: self.seed.unwrap_or(0),
                    stop_at_errors: Some(DEFAULT_STOP_AT_ERRORS),
                }
            }
        };
        if preset.is_none() {
            if self.modulation.is_none() {
                return Err("mod: required without a preset".into());
            }
            if self.snr.is_none() {
                return Err("snr: required without a preset".into());
            }
            if self.detectors.is_none() {
                return Err("det: required without a preset".into());
            }
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(u) = self.u {
            cfg.u = u;
        }
        if let Some(m) = &self.modulation {
            cfg.modulation = m.parse().map_err(|e| format!("mod: {e}"))?;
        }
        if let Some(s) = &self.snr {
            cfg.snr_db = parse::snr_grid(s).map_err(|e| format!("snr: {e}"))?;
        }
        if let Some(dets) = &self.detectors {
            cfg.curves = dets
                .iter()
                .map(|d| parse::curve(d).map_err(|e| format!("det: {e}")))
                .collect::<Result<_, _>>()?;
            if cfg.curves.is_empty() {
                return Err("det: no detectors given".into());
            }
        }
        if let Some(t) = self.trials {
            if t == 0 {
                return Err("trials: must be >= 1".into());
            }
            cfg.trials = t;
        }
        if let Some(stop) = self.stop_at_errors {
            // 0 disables early stopping
            cfg.stop_at_errors = (stop > 0).then_some(stop);
        }
        if cfg.n == 0 {
            return Err("n: must be >= 1".into());
        }
        if cfg.u == 0 || cfg.u > cfg.n {
            return Err(format!("u: must satisfy 1 <= u <= n (u={}, n={})", cfg.u, cfg.n));
        }
        cfg.validate().map_err(|e| format!("config: {e}"))?;
        Ok((cfg, preset))
    }
}
