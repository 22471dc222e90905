//! Experiment configuration: TOML config files, flag overlays (flags win),
//! regime tokens, and validated run configurations.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzKind, Regime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VarianceVsN,
    VarianceVsDepth,
    Otoc,
    Entropy,
    Vqe,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::VarianceVsN => "variance-vs-n",
            ExperimentKind::VarianceVsDepth => "variance-vs-depth",
            ExperimentKind::Otoc => "otoc",
            ExperimentKind::Entropy => "entropy",
            ExperimentKind::Vqe => "vqe",
        }
    }
}

/// A regime column token resolved to a circuit family plus sampling regime.
///
/// Bare tokens follow the reference kick angles: `pm` is g = 0.1 pi, `dtc`
/// is g = 0.9 pi, `thermal` is g = 0.5 pi, and `hea` selects the
/// hardware-efficient baseline. `label=X` pins g to X pi instead, e.g.
/// `pm=0.16`. `pm-window` / `dtc-window` sample g from the full MBL
/// windows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRegime {
    pub token: String,
    pub ansatz: AnsatzKind,
    pub regime: Regime,
}

pub fn parse_regime_token(token: &str) -> Result<ResolvedRegime> {
    let (name, g_override) = match token.split_once('=') {
        Some((name, value)) => {
            let multiple: f64 = value.parse().map_err(|_| {
                Error::config(format!("regimes: '{value}' in '{token}' is not a number"))
            })?;
            if !(0.0..=1.0).contains(&multiple) {
                return Err(Error::config(format!(
                    "regimes: kick angle {multiple} pi outside [0, pi] in '{token}'"
                )));
            }
            (name, Some(multiple * PI))
        }
        None => (token, None),
    };
    let base = match name {
        "pm" => Regime::pm(),
        "thermal" => Regime::thermal(),
        "dtc" => Regime::dtc(),
        "pm-window" => Regime::pm_window(),
        "dtc-window" => Regime::dtc_window(),
        "hea" => {
            if g_override.is_some() {
                return Err(Error::config(format!(
                    "regimes: '{token}' cannot set a kick angle for the HEA"
                )));
            }
            return Ok(ResolvedRegime {
                token: token.to_string(),
                ansatz: AnsatzKind::Hea,
                regime: Regime::thermal(),
            });
        }
        other => {
            return Err(Error::config(format!(
                "regimes: unknown regime '{other}' (expected pm, thermal, dtc, hea, \
                 pm-window, dtc-window, optionally label=g/pi)"
            )));
        }
    };
    let regime = match g_override {
        Some(g) => base.with_g_point(g),
        None => base,
    };
    Ok(ResolvedRegime { token: token.to_string(), ansatz: AnsatzKind::Mbl, regime })
}

/// Partial configuration from a TOML file or command-line flags. Merging is
/// field-wise with the overlay (flags) winning.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub qubits: Option<Vec<usize>>,
    pub regimes: Option<Vec<String>>,
    pub depth_factor: Option<usize>,
    pub depths: Option<Vec<usize>>,
    pub max_depth: Option<usize>,
    pub instances: Option<usize>,
    pub iterations: Option<usize>,
    pub xxz_j: Option<f64>,
    pub xxz_delta: Option<f64>,
    pub learning_rate: Option<f64>,
    pub param_index: Option<usize>,
    pub tied: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub no_plot: Option<bool>,
}

impl ConfigOverlay {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::config(format!("config {}: {e}", path.display())))
    }

    /// Overlay `self` (higher precedence) on top of `base`.
    pub fn merged_over(self, base: ConfigOverlay) -> ConfigOverlay {
        ConfigOverlay {
            qubits: self.qubits.or(base.qubits),
            regimes: self.regimes.or(base.regimes),
            depth_factor: self.depth_factor.or(base.depth_factor),
            depths: self.depths.or(base.depths),
            max_depth: self.max_depth.or(base.max_depth),
            instances: self.instances.or(base.instances),
            iterations: self.iterations.or(base.iterations),
            xxz_j: self.xxz_j.or(base.xxz_j),
            xxz_delta: self.xxz_delta.or(base.xxz_delta),
            learning_rate: self.learning_rate.or(base.learning_rate),
            param_index: self.param_index.or(base.param_index),
            tied: self.tied.or(base.tied),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            workers: self.workers.or(base.workers),
            no_plot: self.no_plot.or(base.no_plot),
        }
    }

    /// Validate and fill defaults for the given experiment kind.
    pub fn into_config(self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let seed = self
            .seed
            .ok_or_else(|| Error::config("seed: missing (no wall-clock default)".to_string()))?;
        let qubits = self.qubits.unwrap_or_default();
        if qubits.is_empty() {
            return Err(Error::config("qubits: empty list".to_string()));
        }
        for &n in &qubits {
            if n < 2 {
                return Err(Error::config(format!("qubits: {n} is below the 2-qubit minimum")));
            }
        }
        let regimes = self.regimes.unwrap_or_else(|| vec!["pm".into(), "thermal".into()]);
        if regimes.is_empty() {
            return Err(Error::config("regimes: empty list".to_string()));
        }
        for token in &regimes {
            parse_regime_token(token)?;
        }
        if kind == ExperimentKind::Vqe && qubits.len() != 1 {
            return Err(Error::config(format!(
                "qubits: vqe takes exactly one qubit count, got {}",
                qubits.len()
            )));
        }
        if kind == ExperimentKind::VarianceVsDepth && self.depths.as_deref().unwrap_or(&[]).is_empty()
        {
            return Err(Error::config("depths: required for variance-vs-depth".to_string()));
        }
        let instances = self.instances.unwrap_or(match kind {
            ExperimentKind::Otoc | ExperimentKind::Vqe => 100,
            _ => 200,
        });
        if instances < 2 {
            return Err(Error::config(format!("instances: {instances} is below the minimum of 2")));
        }
        Ok(ExperimentConfig {
            kind,
            qubits,
            regimes,
            depth_factor: self.depth_factor.unwrap_or(2),
            depths: self.depths.unwrap_or_default(),
            max_depth: self.max_depth,
            instances,
            iterations: self.iterations.unwrap_or(200),
            xxz_j: self.xxz_j.unwrap_or(1.0),
            xxz_delta: self.xxz_delta.unwrap_or(1.0),
            learning_rate: self.learning_rate.unwrap_or(0.05),
            param_index: self.param_index,
            tied: self.tied.unwrap_or(false),
            seed,
            out_dir: self.out.unwrap_or_else(|| PathBuf::from("results")),
            workers: self.workers,
            no_plot: self.no_plot.unwrap_or(false),
        })
    }
}

/// A fully validated experiment description; echoed into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub qubits: Vec<usize>,
    pub regimes: Vec<String>,
    /// Depth as a multiple of N (variance-vs-n and vqe).
    pub depth_factor: usize,
    /// Absolute depths (variance-vs-depth).
    pub depths: Vec<usize>,
    /// Depth ceiling for otoc/entropy sweeps; entropy defaults to 4N and
    /// otoc to 30 when unset.
    pub max_depth: Option<usize>,
    pub instances: usize,
    pub iterations: usize,
    pub xxz_j: f64,
    pub xxz_delta: f64,
    pub learning_rate: f64,
    /// Observed slot for variance sweeps: a within-block index when tied, a
    /// global slot otherwise. Unset, each sweep point observes the first
    /// ZZ-rotation slot of the second block (the earliest slot whose
    /// gradient is not pinned to zero by the initial Z eigenstate), or
    /// slot 0 for the HEA.
    pub param_index: Option<usize>,
    /// One disorder draw per instance copied across blocks (Floquet
    /// repetition) instead of fresh per-block draws.
    pub tied: bool,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
    pub no_plot: bool,
}

impl ExperimentConfig {
    pub fn resolved_regimes(&self) -> Result<Vec<ResolvedRegime>> {
        self.regimes.iter().map(|t| parse_regime_token(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bare_tokens_use_reference_kick_angles() {
        let pm = parse_regime_token("pm").unwrap();
        assert_eq!(pm.ansatz, AnsatzKind::Mbl);
        assert_abs_diff_eq!(pm.regime.g_low, 0.1 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.regime.g_high, 0.1 * PI, epsilon = 1e-15);

        let hea = parse_regime_token("hea").unwrap();
        assert_eq!(hea.ansatz, AnsatzKind::Hea);

        let window = parse_regime_token("pm-window").unwrap();
        assert_eq!(window.regime.g_low, 0.0);
        assert_abs_diff_eq!(window.regime.g_high, 0.2 * PI, epsilon = 1e-15);
    }

    #[test]
    fn g_override_is_in_units_of_pi() {
        let r = parse_regime_token("dtc=0.86").unwrap();
        assert_abs_diff_eq!(r.regime.g_low, 0.86 * PI, epsilon = 1e-12);
        assert_eq!(r.regime.label.as_str(), "dtc");
        assert!(parse_regime_token("hea=0.3").is_err());
        assert!(parse_regime_token("pm=nope").is_err());
        assert!(parse_regime_token("pm=1.5").is_err());
        assert!(parse_regime_token("mystery").is_err());
    }

    #[test]
    fn merge_gives_flags_precedence() {
        let file = ConfigOverlay {
            qubits: Some(vec![4, 6]),
            seed: Some(1),
            instances: Some(50),
            ..ConfigOverlay::default()
        };
        let flags = ConfigOverlay { seed: Some(9), ..ConfigOverlay::default() };
        let merged = flags.merged_over(file);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.qubits, Some(vec![4, 6]));
        assert_eq!(merged.instances, Some(50));
    }

    #[test]
    fn validation_messages() {
        let err = ConfigOverlay { seed: Some(1), ..Default::default() }
            .into_config(ExperimentKind::Otoc)
            .unwrap_err();
        assert!(err.to_string().contains("qubits: empty list"), "{err}");

        let err = ConfigOverlay { qubits: Some(vec![4]), ..Default::default() }
            .into_config(ExperimentKind::Otoc)
            .unwrap_err();
        assert!(err.to_string().contains("seed: missing"), "{err}");

        let err = ConfigOverlay {
            qubits: Some(vec![4, 6]),
            seed: Some(1),
            ..Default::default()
        }
        .into_config(ExperimentKind::Vqe)
        .unwrap_err();
        assert!(err.to_string().contains("exactly one qubit count"), "{err}");

        let err = ConfigOverlay { qubits: Some(vec![4]), seed: Some(1), ..Default::default() }
            .into_config(ExperimentKind::VarianceVsDepth)
            .unwrap_err();
        assert!(err.to_string().contains("depths: required"), "{err}");
    }

    #[test]
    fn toml_files_parse_and_reject_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        std::fs::write(&path, "qubits = [4, 6]\nregimes = [\"pm\", \"hea\"]\nseed = 3\n").unwrap();
        let overlay = ConfigOverlay::from_toml_file(&path).unwrap();
        assert_eq!(overlay.qubits, Some(vec![4, 6]));
        let config = overlay.into_config(ExperimentKind::VarianceVsN).unwrap();
        assert_eq!(config.seed, 3);
        assert_eq!(config.depth_factor, 2);

        std::fs::write(&path, "qubits = [4]\nbogus = 1\n").unwrap();
        let err = ConfigOverlay::from_toml_file(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
