//! Bundled experiment presets (`reproduce-fig`). Each figure id maps to a
//! full experiment configuration at either desk scale (reduced qubit counts
//! and ensembles) or paper scale.

use std::path::PathBuf;

use crate::error::{Error, Result};

use super::config::{ConfigOverlay, ExperimentConfig, ExperimentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    F2a,
    F2b,
    F2c,
    F2d,
    F3,
    F4a,
    F4b,
    F5,
    F6,
}

impl FigureId {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "2a" => Ok(FigureId::F2a),
            "2b" => Ok(FigureId::F2b),
            "2c" => Ok(FigureId::F2c),
            "2d" => Ok(FigureId::F2d),
            "3" => Ok(FigureId::F3),
            "4a" => Ok(FigureId::F4a),
            "4b" => Ok(FigureId::F4b),
            "5" => Ok(FigureId::F5),
            "6" => Ok(FigureId::F6),
            other => Err(Error::config(format!(
                "figure: unknown id '{other}' (expected 2a, 2b, 2c, 2d, 3, 4a, 4b, 5, 6)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F2c => "2c",
            FigureId::F2d => "2d",
            FigureId::F3 => "3",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5 => "5",
            FigureId::F6 => "6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced qubit counts / ensembles that finish on a workstation.
    Desk,
    /// The published settings.
    Paper,
}

impl Scale {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(Error::config(format!("scale: unknown '{other}' (desk or paper)"))),
        }
    }
}

fn strings(items: &[&str]) -> Option<Vec<String>> {
    Some(items.iter().map(|s| s.to_string()).collect())
}

/// The preset overlay (qubits, regimes, depths, ensembles) for a figure.
pub fn figure_overlay(figure: FigureId, scale: Scale) -> (ExperimentKind, ConfigOverlay) {
    let desk = scale == Scale::Desk;
    let mut overlay = ConfigOverlay::default();
    let kind = match figure {
        FigureId::F2a => {
            overlay.regimes = strings(&["pm", "dtc", "thermal", "hea"]);
            overlay.qubits = Some(if desk { vec![4, 6, 8, 10] } else { vec![4, 6, 8, 10, 12] });
            overlay.depth_factor = Some(2);
            overlay.instances = Some(200);
            ExperimentKind::VarianceVsN
        }
        FigureId::F2b | FigureId::F2c | FigureId::F2d => {
            overlay.regimes = strings(&[match figure {
                FigureId::F2b => "thermal",
                FigureId::F2c => "pm",
                _ => "dtc",
            }]);
            overlay.qubits = Some(if desk { vec![4, 6, 8, 10] } else { vec![4, 6, 8, 10, 12] });
            overlay.depths = Some(vec![4, 8, 16, 32, 64]);
            overlay.instances = Some(200);
            ExperimentKind::VarianceVsDepth
        }
        FigureId::F3 => {
            overlay.regimes = strings(&["pm=0.16", "thermal=0.7", "dtc=0.86"]);
            overlay.qubits = Some(vec![8]);
            overlay.max_depth = Some(30);
            overlay.instances = Some(100);
            ExperimentKind::Otoc
        }
        FigureId::F4a => {
            overlay.regimes = strings(&["dtc=0.9"]);
            overlay.qubits = Some(if desk { vec![8, 10] } else { vec![8, 10, 12, 16] });
            overlay.instances = Some(if desk { 200 } else { 1000 });
            ExperimentKind::Entropy
        }
        FigureId::F4b => {
            overlay.regimes = strings(&["thermal"]);
            overlay.qubits = Some(if desk { vec![8, 10] } else { vec![6, 8, 10, 12] });
            overlay.instances = Some(if desk { 200 } else { 1000 });
            ExperimentKind::Entropy
        }
        FigureId::F5 | FigureId::F6 => {
            // The cost/entropy dynamics and the late crossover need the full
            // N = 12, D = 24 system even at desk scale; desk only trims the
            // figure-6 ensemble.
            overlay.regimes = strings(&["pm", "thermal"]);
            overlay.qubits = Some(vec![12]);
            overlay.depth_factor = Some(2);
            overlay.iterations = Some(200);
            overlay.instances = Some(if figure == FigureId::F6 && !desk { 1000 } else { 100 });
            ExperimentKind::Vqe
        }
    };
    (kind, overlay)
}

/// Build the full configuration for `reproduce-fig`: preset values,
/// caller-provided seed/output knobs on top.
pub fn reproduce_figure_config(
    figure: FigureId,
    scale: Scale,
    seed: u64,
    out_dir: Option<PathBuf>,
    workers: Option<usize>,
    no_plot: bool,
) -> Result<ExperimentConfig> {
    let (kind, preset) = figure_overlay(figure, scale);
    let caller = ConfigOverlay {
        seed: Some(seed),
        out: Some(out_dir.unwrap_or_else(|| PathBuf::from(format!("results/fig{}", figure.as_str())))),
        workers,
        no_plot: Some(no_plot),
        ..ConfigOverlay::default()
    };
    caller.merged_over(preset).into_config(kind)
}
