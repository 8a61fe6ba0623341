//! Run configuration: JSON config files with strict (unknown-key-rejecting)
//! parsing, command-line flags overriding file values, and precondition
//! validation that reports every offending key at once.
//!
//! A JSON output produced by this tool embeds its resolved configuration
//! under a top-level `"config"` key; such files can be fed back through
//! `--config` to reproduce a run.

use anyhow::{anyhow, bail, Context, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Load a command's config section from a JSON file. Accepts either a bare
/// config object or a previous JSON output carrying `"config"`. The
/// `"command"` tag, when present, must match `expected_command`.
pub fn load_config<T: DeserializeOwned>(path: &Path, expected_command: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {} as JSON", path.display()))?;
    let section = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    if let Some(cmd) = section.get("command").and_then(|c| c.as_str()) {
        if cmd != expected_command {
            bail!(
                "config file {} is for command `{cmd}`, but `{expected_command}` was invoked",
                path.display()
            );
        }
    }
    let de = section.clone();
    serde_path_to_error::deserialize(de).map_err(|e| {
        anyhow!(
            "invalid config {}: key `{}`: {}",
            path.display(),
            e.path(),
            e.inner()
        )
    })
}

/// Collects precondition violations so a bad config reports every offending
/// key in one pass.
#[derive(Default)]
pub struct Validator {
    errors: Vec<String>,
}

impl Validator {
    pub fn require(&mut self, ok: bool, key: &str, message: impl fmt::Display) {
        if !ok {
            self.errors.push(format!("`{key}`: {message}"));
        }
    }

    pub fn finish(self) -> Result<()> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            bail!("invalid configuration:\n  {}", self.errors.join("\n  "))
        }
    }
}

macro_rules! merge_fields {
    ($file:expr, $flags:expr; $($field:ident),+ $(,)?) => {{
        let mut out = $file;
        $( if $flags.$field.is_some() { out.$field = $flags.$field.clone(); } )+
        out
    }};
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("`lambda`: range must be start:end:step, got `{spec}`");
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| anyhow!("`lambda`: `{p}` is not a number"))
        })
        .collect::<Result<_>>()?;
    gaugekit_core::dicke_thermo::lambda_grid(nums[0], nums[1], nums[2])
        .map_err(|e| anyhow!("`lambda`: {e}"))
}

// ---------------------------------------------------------------- dipole

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DipoleSolveConfig {
    pub command: Option<String>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub ek: Option<f64>,
    pub harmonic: Option<bool>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub npoints: Option<usize>,
    pub states: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct DipoleSolveRun {
    pub spec: gaugekit_core::dipole1d::PotentialSpec,
    pub states: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl DipoleSolveConfig {
    pub fn merge(file: Self, flags: Self) -> Self {
        merge_fields!(file, flags; command, beta, gamma, ek, harmonic, xmin, xmax, npoints, states, output, format)
    }

    pub fn resolve(self) -> Result<DipoleSolveRun> {
        use gaugekit_core::dipole1d::{Grid1d, Potential, PotentialSpec};
        let beta = self.beta.unwrap_or(3.95);
        let gamma = self.gamma.unwrap_or(2.08);
        let ek = self.ek.unwrap_or(1.0);
        let harmonic = self.harmonic.unwrap_or(false);
        let (xmin_d, xmax_d, np_d) = if harmonic {
            (-8.0, 8.0, 16001)
        } else {
            (-4.0, 4.0, 2001)
        };
        let xmin = self.xmin.unwrap_or(xmin_d);
        let xmax = self.xmax.unwrap_or(xmax_d);
        let npoints = self.npoints.unwrap_or(np_d);
        let states = self.states.unwrap_or(8);

        let mut v = Validator::default();
        v.require(ek > 0.0, "ek", "kinetic coefficient must be positive");
        v.require(gamma > 0.0 || harmonic, "gamma", "must be positive for a confining well");
        v.require(xmax > xmin, "xmax", "must exceed xmin");
        v.require(npoints >= 201, "npoints", "need at least 201 grid points");
        v.require(states >= 1, "states", "need at least one state");
        v.finish()?;

        let potential = if harmonic {
            Potential::Harmonic
        } else {
            Potential::QuarticWell { beta, gamma }
        };
        Ok(DipoleSolveRun {
            spec: PotentialSpec {
                kinetic_coeff: ek,
                potential,
                grid: Grid1d::new(xmin, xmax, npoints),
            },
            states,
            output: self.output,
            format: self.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DipoleKernelConfig {
    pub command: Option<String>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub ek: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub npoints: Option<usize>,
    pub levels: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct DipoleKernelRun {
    pub spec: gaugekit_core::dipole1d::PotentialSpec,
    pub levels: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl DipoleKernelConfig {
    pub fn merge(file: Self, flags: Self) -> Self {
        merge_fields!(file, flags; command, beta, gamma, ek, xmin, xmax, npoints, levels, output, format)
    }

    pub fn resolve(self) -> Result<DipoleKernelRun> {
        use gaugekit_core::dipole1d::{Grid1d, Potential, PotentialSpec};
        let beta = self.beta.unwrap_or(3.95);
        let gamma = self.gamma.unwrap_or(2.08);
        let ek = self.ek.unwrap_or(1.0);
        let xmin = self.xmin.unwrap_or(-5.0);
        let xmax = self.xmax.unwrap_or(5.0);
        let npoints = self.npoints.unwrap_or(501);
        let levels = self.levels.unwrap_or(2);

        let mut v = Validator::default();
        v.require(ek > 0.0, "ek", "kinetic coefficient must be positive");
        v.require(gamma > 0.0, "gamma", "must be positive for a confining well");
        v.require(xmax > xmin, "xmax", "must exceed xmin");
        v.require(npoints >= 201, "npoints", "need at least 201 grid points");
        v.require(levels >= 1, "levels", "need at least one retained level");
        v.finish()?;

        Ok(DipoleKernelRun {
            spec: PotentialSpec {
                kinetic_coeff: ek,
                potential: Potential::QuarticWell { beta, gamma },
                grid: Grid1d::new(xmin, xmax, npoints),
            },
            levels,
            output: self.output,
            format: self.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

// ---------------------------------------------------------------- dicke

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DickeFiniteConfig {
    pub command: Option<String>,
    pub n: Option<u32>,
    pub eta: Option<f64>,
    pub wc: Option<f64>,
    pub wx: Option<f64>,
    pub alpha: Option<f64>,
    pub diamagnetic: Option<f64>,
    pub nmax: Option<usize>,
    pub levels: Option<usize>,
    pub dim_cap: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct DickeFiniteRun {
    pub params: gaugekit_core::dicke_finite::DickeFiniteParams,
    /// None means: converge the cutoff automatically from the policy seed.
    pub explicit_nmax: bool,
    pub levels: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl DickeFiniteConfig {
    pub fn merge(file: Self, flags: Self) -> Self {
        merge_fields!(file, flags; command, n, eta, wc, wx, alpha, diamagnetic, nmax, levels, dim_cap, output, format)
    }

    pub fn resolve(self) -> Result<DickeFiniteRun> {
        use gaugekit_core::dicke_finite::{DickeFiniteParams, DEFAULT_DIM_CAP};
        let n = self.n.unwrap_or(1);
        let eta = self.eta.unwrap_or(0.3);
        let wc = self.wc.unwrap_or(1.0);
        let wx = self.wx.unwrap_or(1.0);
        let alpha = self.alpha.unwrap_or(2.0);
        let levels = self.levels.unwrap_or(6);
        let dim_cap = self.dim_cap.unwrap_or(DEFAULT_DIM_CAP);

        let mut v = Validator::default();
        v.require(n >= 1, "n", "need at least one dipole");
        v.require(eta >= 0.0 && eta.is_finite(), "eta", "must be non-negative");
        v.require(wc > 0.0, "wc", "must be positive");
        v.require(wx > 0.0, "wx", "must be positive");
        v.require(alpha >= 1.0, "alpha", "must be at least 1");
        v.require(levels >= 1, "levels", "need at least one level");
        if let Some(nm) = self.nmax {
            v.require(nm >= 2, "nmax", "need a Fock cutoff of at least 2");
        }
        if let Some(d) = self.diamagnetic {
            v.require(d >= 0.0, "diamagnetic", "must be non-negative");
        }
        v.finish()?;

        let mut params = DickeFiniteParams::new(n, wc, wx, eta);
        params.alpha = alpha;
        params.diamagnetic = self.diamagnetic;
        params.dim_cap = dim_cap;
        if let Some(nm) = self.nmax {
            params.n_max = nm;
        }
        params.validate().map_err(|e| anyhow!("{e}"))?;
        Ok(DickeFiniteRun {
            params,
            explicit_nmax: self.nmax.is_some(),
            levels,
            output: self.output,
            format: self.format.unwrap_or(OutputFormat::Json),
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DickeThermoConfig {
    pub command: Option<String>,
    pub wc: Option<f64>,
    pub wx: Option<f64>,
    pub alpha: Option<f64>,
    /// Coupling grid as "start:end:step".
    pub lambda: Option<String>,
    pub printed_forms: Option<bool>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct DickeThermoRun {
    pub omega_c: f64,
    pub omega_x: f64,
    pub alpha: f64,
    pub lambda_spec: String,
    pub lambda_grid: Vec<f64>,
    pub printed_forms: bool,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl DickeThermoConfig {
    pub fn merge(file: Self, flags: Self) -> Self {
        merge_fields!(file, flags; command, wc, wx, alpha, lambda, printed_forms, output, format)
    }

    pub fn resolve(self) -> Result<DickeThermoRun> {
        let wc = self.wc.unwrap_or(1.0);
        let wx = self.wx.unwrap_or(1.0);
        let alpha = self.alpha.unwrap_or(2.0);
        let mut v = Validator::default();
        v.require(wc > 0.0, "wc", "must be positive");
        v.require(wx > 0.0, "wx", "must be positive");
        v.require(alpha >= 1.0, "alpha", "must be at least 1");
        v.finish()?;
        let lambda_spec = self.lambda.unwrap_or_else(|| "0:2:0.01".to_string());
        let lambda_grid = parse_range(&lambda_spec)?;
        Ok(DickeThermoRun {
            omega_c: wc,
            omega_x: wx,
            alpha,
            lambda_spec,
            lambda_grid,
            printed_forms: self.printed_forms.unwrap_or(false),
            output: self.output,
            format: self.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

// ---------------------------------------------------------------- hopfield

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HopfieldConfig {
    pub command: Option<String>,
    pub w0: Option<f64>,
    pub beta: Option<f64>,
    pub wk_min: Option<f64>,
    pub wk_max: Option<f64>,
    pub points: Option<usize>,
    /// Explicit photon frequencies; overrides the log-spaced grid.
    pub wk: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone)]
pub struct HopfieldRun {
    pub params: gaugekit_core::hopfield::HopfieldParams,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl HopfieldConfig {
    pub fn merge(file: Self, flags: Self) -> Self {
        merge_fields!(file, flags; command, w0, beta, wk_min, wk_max, points, wk, output, format)
    }

    pub fn resolve(self) -> Result<HopfieldRun> {
        use gaugekit_core::hopfield::HopfieldParams;
        let w0 = self.w0.unwrap_or(1.0);
        let beta = self.beta.unwrap_or(0.5);
        let mut v = Validator::default();
        v.require(w0 > 0.0, "w0", "must be positive");
        v.require(beta >= 0.0, "beta", "must be non-negative");
        if let Some(ws) = &self.wk {
            v.require(!ws.is_empty(), "wk", "need at least one photon mode");
            v.require(ws.iter().all(|&w| w > 0.0), "wk", "photon frequencies must be positive");
        }
        if let Some(p) = self.points {
            v.require(p >= 2, "points", "need at least two grid points");
        }
        v.finish()?;

        let params = match self.wk {
            Some(ws) => HopfieldParams::new(w0, beta, ws),
            None => {
                let lo = self.wk_min.unwrap_or(0.05 * w0);
                let hi = self.wk_max.unwrap_or(5.0 * w0);
                let n = self.points.unwrap_or(100);
                let mut vv = Validator::default();
                vv.require(lo > 0.0, "wk_min", "must be positive");
                vv.require(hi > lo, "wk_max", "must exceed wk_min");
                vv.finish()?;
                let ratio = (hi / lo).ln();
                let freqs: Vec<f64> = (0..n)
                    .map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp())
                    .collect();
                HopfieldParams::new(w0, beta, freqs)
            }
        }
        .map_err(|e| anyhow!("{e}"))?;
        Ok(HopfieldRun {
            params,
            output: self.output,
            format: self.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_overrides_file() {
        let file = DickeThermoConfig {
            wx: Some(0.5),
            alpha: Some(1.5),
            ..Default::default()
        };
        let flags = DickeThermoConfig {
            wx: Some(0.8),
            ..Default::default()
        };
        let merged = DickeThermoConfig::merge(file, flags);
        assert_eq!(merged.wx, Some(0.8));
        assert_eq!(merged.alpha, Some(1.5));
    }

    #[test]
    fn empty_config_resolves_with_defaults() {
        let run = DickeThermoConfig::default().resolve().unwrap();
        assert_eq!(run.omega_c, 1.0);
        assert_eq!(run.lambda_grid.len(), 201);
    }

    #[test]
    fn negative_eta_rejected_by_name() {
        let cfg = DickeFiniteConfig {
            eta: Some(-0.1),
            ..Default::default()
        };
        let err = cfg.resolve().unwrap_err().to_string();
        assert!(err.contains("eta"), "message must name the key: {err}");
    }

    #[test]
    fn multiple_violations_reported_together() {
        let cfg = DickeFiniteConfig {
            eta: Some(-0.1),
            wx: Some(-2.0),
            alpha: Some(0.5),
            ..Default::default()
        };
        let err = cfg.resolve().unwrap_err().to_string();
        assert!(err.contains("eta") && err.contains("wx") && err.contains("alpha"));
    }

    #[test]
    fn lambda_range_parsing() {
        let run = DickeThermoConfig {
            lambda: Some("0:1:0.5".into()),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(run.lambda_grid, vec![0.0, 0.5, 1.0]);
        assert!(DickeThermoConfig {
            lambda: Some("0;1;0.5".into()),
            ..Default::default()
        }
        .resolve()
        .is_err());
    }
}
