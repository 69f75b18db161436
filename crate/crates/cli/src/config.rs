//! Run configuration: defaults, the key=value config file, and flag
//! overrides.
//!
//! Precedence is flags over config file over defaults. The file format is
//! one `key = value` pair per line, `#` comments, lists comma-separated;
//! the schema is documented in the README.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// How instruments are brought onto a common date support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignmentPolicy {
    /// Keep only trading days present in every instrument.
    #[default]
    IntersectDates,
}

/// Everything a pipeline run needs.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub index_id: String,
    pub k: usize,
    pub l: usize,
    pub d_grid: Vec<f64>,
    /// Band width for the per-stock flow stage.
    pub flows_d: f64,
    /// Discretize each series at its own equiprobable band width in the
    /// flow stage instead of the shared `flows_d`.
    pub equiprobable_flows: bool,
    pub hist_bin_width: f64,
    pub top_k: usize,
    pub surrogates: usize,
    /// Shuffle both series per surrogate replicate instead of the source
    /// only.
    pub shuffle_both: bool,
    pub seed: u64,
    #[serde(skip)] // echoing the destination would break output determinism
    pub output_dir: PathBuf,
    pub alignment: AlignmentPolicy,
}

/// The grid spans 0 to 0.06 in steps of 0.0025, bracketing every band
/// width the analysis cares about.
pub fn default_d_grid() -> Vec<f64> {
    (0..=24).map(|i| i as f64 * 0.0025).collect()
}

/// Partially resolved configuration; `None` means "not given here".
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub inputs: Vec<PathBuf>,
    pub index_id: Option<String>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub d_grid: Option<Vec<f64>>,
    pub flows_d: Option<f64>,
    pub equiprobable_flows: Option<bool>,
    pub hist_bin_width: Option<f64>,
    pub top_k: Option<usize>,
    pub surrogates: Option<usize>,
    pub shuffle_both: Option<bool>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub alignment: Option<AlignmentPolicy>,
}

impl PartialConfig {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            inputs: if self.inputs.is_empty() {
                base.inputs
            } else {
                self.inputs
            },
            index_id: self.index_id.or(base.index_id),
            k: self.k.or(base.k),
            l: self.l.or(base.l),
            d_grid: self.d_grid.or(base.d_grid),
            flows_d: self.flows_d.or(base.flows_d),
            equiprobable_flows: self.equiprobable_flows.or(base.equiprobable_flows),
            hist_bin_width: self.hist_bin_width.or(base.hist_bin_width),
            top_k: self.top_k.or(base.top_k),
            surrogates: self.surrogates.or(base.surrogates),
            shuffle_both: self.shuffle_both.or(base.shuffle_both),
            seed: self.seed.or(base.seed),
            output_dir: self.output_dir.or(base.output_dir),
            alignment: self.alignment.or(base.alignment),
        }
    }

    /// Apply defaults and validate into a full config.
    pub fn resolve(self) -> Result<RunConfig> {
        if self.inputs.is_empty() {
            return Err(CliError::usage(
                "no input files given (--input or `inputs` in the config file)",
            ));
        }
        let index_id = self
            .index_id
            .ok_or_else(|| CliError::usage("missing index id (--index-id or `index_id`)"))?;
        let output_dir = self
            .output_dir
            .ok_or_else(|| CliError::usage("missing output dir (--output-dir or `output_dir`)"))?;

        let config = RunConfig {
            inputs: self.inputs,
            index_id,
            k: self.k.unwrap_or(1),
            l: self.l.unwrap_or(1),
            d_grid: self.d_grid.unwrap_or_else(default_d_grid),
            flows_d: self.flows_d.unwrap_or(0.015),
            equiprobable_flows: self.equiprobable_flows.unwrap_or(false),
            hist_bin_width: self.hist_bin_width.unwrap_or(0.005),
            top_k: self.top_k.unwrap_or(10),
            surrogates: self.surrogates.unwrap_or(20),
            shuffle_both: self.shuffle_both.unwrap_or(false),
            seed: self.seed.unwrap_or(0),
            output_dir,
            alignment: self.alignment.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.l < 1 {
            return Err(CliError::usage(format!(
                "history lengths must be >= 1 (k = {}, l = {})",
                self.k, self.l
            )));
        }
        if self.d_grid.is_empty() {
            return Err(CliError::usage("d_grid must be nonempty"));
        }
        for (i, &d) in self.d_grid.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(CliError::usage(format!("d_grid[{i}] = {d} is negative")));
            }
            if i > 0 && self.d_grid[i - 1] >= d {
                return Err(CliError::usage(format!(
                    "d_grid must be strictly increasing (position {i})"
                )));
            }
        }
        if !self.flows_d.is_finite() || self.flows_d < 0.0 {
            return Err(CliError::usage(format!(
                "flows_d = {} is negative",
                self.flows_d
            )));
        }
        if !self.hist_bin_width.is_finite() || self.hist_bin_width <= 0.0 {
            return Err(CliError::usage(format!(
                "hist_bin_width = {} must be positive",
                self.hist_bin_width
            )));
        }
        if self.surrogates < 1 {
            return Err(CliError::usage("surrogates must be >= 1"));
        }
        let mut seen = BTreeSet::new();
        for p in &self.inputs {
            if !seen.insert(p) {
                return Err(CliError::usage(format!(
                    "input {} listed twice",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    /// The smallest return-series length the embedding can digest.
    pub fn min_return_len(&self) -> usize {
        self.k.max(self.l) + 2
    }
}

/// Parse the key=value config file.
pub fn parse_config_file(path: &Path) -> Result<PartialConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = PartialConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            CliError::usage(format!(
                "{}:{}: bad {what} value `{value}`",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "inputs" => {
                cfg.inputs = value
                    .split(',')
                    .map(|s| PathBuf::from(s.trim()))
                    .filter(|p| !p.as_os_str().is_empty())
                    .collect();
            }
            "index_id" => cfg.index_id = Some(value.to_string()),
            "k" => cfg.k = Some(value.parse().map_err(|_| bad("k"))?),
            "l" => cfg.l = Some(value.parse().map_err(|_| bad("l"))?),
            "d_grid" => {
                let grid: std::result::Result<Vec<f64>, _> =
                    value.split(',').map(|s| s.trim().parse()).collect();
                cfg.d_grid = Some(grid.map_err(|_| bad("d_grid"))?);
            }
            "flows_d" => cfg.flows_d = Some(value.parse().map_err(|_| bad("flows_d"))?),
            "equiprobable_flows" => {
                cfg.equiprobable_flows = Some(value.parse().map_err(|_| bad("equiprobable_flows"))?)
            }
            "hist_bin_width" => {
                cfg.hist_bin_width = Some(value.parse().map_err(|_| bad("hist_bin_width"))?)
            }
            "top_k" => cfg.top_k = Some(value.parse().map_err(|_| bad("top_k"))?),
            "surrogates" => cfg.surrogates = Some(value.parse().map_err(|_| bad("surrogates"))?),
            "shuffle_both" => {
                cfg.shuffle_both = Some(value.parse().map_err(|_| bad("shuffle_both"))?)
            }
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
            "alignment" => {
                cfg.alignment = Some(match value {
                    "intersect_dates" => AlignmentPolicy::IntersectDates,
                    _ => return Err(bad("alignment")),
                })
            }
            other => {
                return Err(CliError::usage(format!(
                    "{}:{}: unknown config key `{other}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}
