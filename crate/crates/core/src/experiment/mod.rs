//! Experiment front end: validated configurations, deterministic parallel
//! execution, CSV/JSON/SVG emission, and bundled figure presets.
//!
//! Running the same configuration with the same seed produces byte-identical
//! CSV files regardless of worker count: all randomness flows through
//! per-instance RNG streams and every reduction is performed in instance
//! order on the coordinating thread.

pub mod config;
pub mod csv;
pub mod presets;
pub mod runner;
pub mod svg;

pub use config::{parse_regime_token, ConfigOverlay, ExperimentConfig, ExperimentKind, ResolvedRegime};
pub use presets::{reproduce_figure_config, FigureId, Scale};
pub use runner::{run, verify_manifest, FileEntry, ResultManifest, WORKERS_ENV_VAR};
