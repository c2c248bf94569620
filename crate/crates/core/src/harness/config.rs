//! Experiment configuration: a flat `key = value` file plus overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::HarnessError;
use crate::excitation::{epsilon_grid, geometric_grid, ExcitationMode};
use crate::lattice::LatticeKind;
use crate::statistics::{DEFAULT_EPSILON_CUT, DEFAULT_RESAMPLES};

/// Environment variable holding the default output directory.
pub const OUTPUT_ENV: &str = "RDM_OUT";

/// Linear sizes of the default desk-scale study.
pub const DESK_SIZES: [usize; 6] = [8, 16, 24, 32, 48, 64];
pub const DESK_INSTANCES: u64 = 2000;
/// Sizes of the full-scale preset.
pub const FULL_SIZES: [usize; 10] = [8, 16, 24, 32, 48, 64, 80, 100, 128, 160];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kinds: Vec<LatticeKind>,
    pub sizes: Vec<usize>,
    pub instances: u64,
    pub mode: ExcitationMode,
    pub epsilons: Vec<f64>,
    pub master_seed: u64,
    pub workers: usize,
    pub output: PathBuf,
    /// Tail window for the excitation-size fit as powers of L.
    pub tail_window: (f64, f64),
    pub epsilon_cut: f64,
    pub winding_only: bool,
    pub resamples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kinds: LatticeKind::ALL.to_vec(),
            sizes: DESK_SIZES.to_vec(),
            instances: DESK_INSTANCES,
            mode: ExcitationMode::Max,
            epsilons: epsilon_grid(),
            master_seed: 1,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output: std::env::var_os(OUTPUT_ENV)
                .map_or_else(|| PathBuf::from("out"), PathBuf::from),
            tail_window: (0.5, 1.0),
            epsilon_cut: DEFAULT_EPSILON_CUT,
            winding_only: false,
            resamples: DEFAULT_RESAMPLES,
        }
    }
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, HarnessError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| bad(format!("{key}: cannot parse `{s}`")))
        })
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(bad(format!("{key}: expected a boolean, got `{value}`"))),
    }
}

impl ExperimentConfig {
    /// Preset for the full range of sizes.
    pub fn full_scale() -> Self {
        Self {
            sizes: FULL_SIZES.to_vec(),
            instances: 10_000,
            ..Self::default()
        }
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let value = value.trim();
        match key.trim() {
            "preset" => match value {
                "desk" => {
                    *self = Self {
                        output: self.output.clone(),
                        ..Self::default()
                    }
                }
                "full" => {
                    *self = Self {
                        output: self.output.clone(),
                        ..Self::full_scale()
                    }
                }
                _ => return Err(bad(format!("preset: unknown preset `{value}`"))),
            },
            "kinds" => self.kinds = parse_list(key, value)?,
            "sizes" | "L" => self.sizes = parse_list(key, value)?,
            "instances" => {
                self.instances = value
                    .parse()
                    .map_err(|_| bad(format!("instances: `{value}`")))?
            }
            "mode" | "excitation" => self.mode = value.parse().map_err(bad)?,
            "epsilons" => self.epsilons = parse_list(key, value)?,
            "epsilon_grid" => {
                let parts: Vec<&str> = value.split(':').collect();
                let [lo, hi, n] = parts.as_slice() else {
                    return Err(bad("epsilon_grid: expected lo:hi:points"));
                };
                let lo: f64 = lo.trim().parse().map_err(|_| bad("epsilon_grid: lo"))?;
                let hi: f64 = hi.trim().parse().map_err(|_| bad("epsilon_grid: hi"))?;
                let n: usize = n.trim().parse().map_err(|_| bad("epsilon_grid: points"))?;
                self.epsilons = geometric_grid(lo, hi, n);
            }
            "seed" | "master_seed" => {
                self.master_seed = value.parse().map_err(|_| bad(format!("seed: `{value}`")))?
            }
            "workers" => {
                self.workers = value
                    .parse()
                    .map_err(|_| bad(format!("workers: `{value}`")))?
            }
            "output" | "out" => self.output = PathBuf::from(value),
            "tail_window" => {
                let v: Vec<f64> = parse_list(key, value)?;
                let [lo, hi] = v.as_slice() else {
                    return Err(bad("tail_window: expected two powers of L"));
                };
                self.tail_window = (*lo, *hi);
            }
            "epsilon_cut" => {
                self.epsilon_cut = value
                    .parse()
                    .map_err(|_| bad(format!("epsilon_cut: `{value}`")))?
            }
            "winding_only" => self.winding_only = parse_bool(key, value)?,
            "resamples" => {
                self.resamples = value
                    .parse()
                    .map_err(|_| bad(format!("resamples: `{value}`")))?
            }
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k, v)
                .map_err(|e| bad(format!("line {}: {e}", i + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ConfigFile {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.kinds.is_empty() {
            return Err(bad("no lattice kinds"));
        }
        if self.sizes.is_empty() {
            return Err(bad("no sizes"));
        }
        if let Some(l) = self.sizes.iter().find(|&&l| l < 2 || l % 2 == 1) {
            return Err(bad(format!("size {l} is not an even integer >= 2")));
        }
        if self.instances == 0 {
            return Err(bad("instances must be at least 1"));
        }
        if self.workers == 0 {
            return Err(bad("workers must be at least 1"));
        }
        if self.mode == ExcitationMode::Epsilon {
            if self.epsilons.is_empty() {
                return Err(bad("epsilon mode needs a non-empty epsilon grid"));
            }
            if self.epsilons.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
                return Err(bad("epsilon values must be finite and non-negative"));
            }
            if self.epsilons.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("epsilon grid must be strictly increasing"));
            }
        }
        Ok(())
    }

    /// Canonical text of every setting that influences the records.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let kinds: Vec<&str> = self.kinds.iter().map(|k| k.as_str()).collect();
        let sizes: Vec<String> = self.sizes.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "kinds={}", kinds.join(","));
        let _ = writeln!(s, "sizes={}", sizes.join(","));
        let _ = writeln!(s, "instances={}", self.instances);
        let _ = writeln!(s, "mode={}", self.mode);
        if self.mode == ExcitationMode::Epsilon {
            let eps: Vec<String> = self.epsilons.iter().map(|e| format!("{e:.16e}")).collect();
            let _ = writeln!(s, "epsilons={}", eps.join(","));
        }
        let _ = writeln!(s, "seed={}", self.master_seed);
        s
    }

    /// SHA-256 of [`Self::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}
