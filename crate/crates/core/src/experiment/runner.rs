//! Experiment execution: deterministic parallel sweeps, CSV/SVG emission,
//! and the checksummed result manifest.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ansatz::{mbl_slots_per_block, AnsatzKind};
use crate::entropy::{entropy_growth, EntropyTrace};
use crate::error::{Error, Result};
use crate::gradient::{gradient_variance, VarianceRecord};
use crate::otoc::{otoc_trace, OtocTrace};
use crate::vqe::{build_xxz, run_vqe, AdamConfig, OptimRun, VqeConfig, XxzSpec};

use super::config::{ExperimentConfig, ExperimentKind};
use super::csv;
use super::svg::{self, Series};

/// Environment variable overriding the default worker count. A `--workers`
/// flag or config-file entry still wins over it.
pub const WORKERS_ENV_VAR: &str = "MBLVQE_WORKERS";

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything a run emitted, with checksums, plus the resolved config.
#[derive(Debug, Clone, Serialize)]
pub struct ResultManifest {
    pub artifact_version: String,
    pub config: ExperimentConfig,
    pub files: Vec<FileEntry>,
    pub total_runtime_seconds: f64,
}

pub fn effective_workers(config: &ExperimentConfig) -> usize {
    config
        .workers
        .or_else(|| {
            std::env::var(WORKERS_ENV_VAR)
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
        })
        .filter(|&w| w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Execute the configured experiment and write CSV, SVG (unless disabled),
/// and `manifest.json` into the output directory. Output bytes are
/// independent of the worker count.
pub fn run(config: &ExperimentConfig) -> Result<ResultManifest> {
    let start = Instant::now();
    std::fs::create_dir_all(&config.out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_workers(config))
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;
    let outputs = pool.install(|| execute(config))?;

    let mut files = Vec::with_capacity(outputs.len());
    for (name, contents) in &outputs {
        let path = config.out_dir.join(name);
        std::fs::write(&path, contents)?;
        files.push(FileEntry {
            path: name.clone(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
            bytes: contents.len() as u64,
        });
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));

    let manifest = ResultManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        files,
        total_runtime_seconds: start.elapsed().as_secs_f64(),
    };
    let manifest_json =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::config(e.to_string()))?;
    std::fs::write(config.out_dir.join("manifest.json"), manifest_json)?;
    Ok(manifest)
}

/// Recompute checksums of the files listed in a manifest against what is on
/// disk in `dir`; errors on any mismatch or missing file.
pub fn verify_manifest(manifest: &ResultManifest, dir: &Path) -> Result<()> {
    for entry in &manifest.files {
        let bytes = std::fs::read(dir.join(&entry.path))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        if digest != entry.sha256 {
            return Err(Error::config(format!("checksum mismatch for {}", entry.path)));
        }
    }
    Ok(())
}

fn execute(config: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    match config.kind {
        ExperimentKind::VarianceVsN | ExperimentKind::VarianceVsDepth => run_variance(config),
        ExperimentKind::Otoc => run_otoc(config),
        ExperimentKind::Entropy => run_entropy(config),
        ExperimentKind::Vqe => run_vqe_experiment(config),
    }
}

fn xxz_spec(config: &ExperimentConfig, num_qubits: usize) -> XxzSpec {
    XxzSpec { num_qubits, j: config.xxz_j, delta: config.xxz_delta }
}

fn ensure_finite<'a>(values: impl Iterator<Item = &'a f64>, context: &str) -> Result<()> {
    for v in values {
        if !v.is_finite() {
            return Err(Error::NonFinite(context.to_string()));
        }
    }
    Ok(())
}

fn run_variance(config: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    let mut records: Vec<VarianceRecord> = Vec::new();
    for resolved in config.resolved_regimes()? {
        for &n in &config.qubits {
            let depths: Vec<usize> = match config.kind {
                ExperimentKind::VarianceVsN => vec![config.depth_factor * n],
                _ => config.depths.clone(),
            };
            let h = build_xxz(&xxz_spec(config, n))?;
            for depth in depths {
                let slot = config.param_index.unwrap_or(match resolved.ansatz {
                    // The first-block ZZ/Z slots act on the initial Z
                    // eigenstate and carry identically zero gradient; the
                    // second block's first ZZ slot is the earliest one with
                    // signal. Tied sweeps sum that bond's occurrence in
                    // every block, so the within-block index is 0.
                    AnsatzKind::Mbl if !config.tied && depth >= 2 => mbl_slots_per_block(n),
                    _ => 0,
                });
                let mut record = gradient_variance(
                    resolved.ansatz,
                    n,
                    depth,
                    &resolved.regime,
                    &h,
                    slot,
                    config.instances,
                    config.seed,
                    config.tied,
                )?;
                record.regime_label = resolved.token.clone();
                ensure_finite([record.mean, record.variance].iter(), "gradient variance")?;
                records.push(record);
            }
        }
    }

    let mut outputs = vec![(format!("{}.csv", stem(config)), csv::variance_csv(&records))];
    if !config.no_plot {
        let series = match config.kind {
            ExperimentKind::VarianceVsN => group_series(&records, |r| r.regime_label.clone(), |r| {
                (r.num_qubits as f64, r.variance)
            }),
            _ => group_series(
                &records,
                |r| format!("{} N={}", r.regime_label, r.num_qubits),
                |r| (r.depth_blocks as f64, r.variance),
            ),
        };
        let x_label = match config.kind {
            ExperimentKind::VarianceVsN => "qubits",
            _ => "depth (blocks)",
        };
        outputs.push((
            format!("{}.svg", stem(config)),
            svg_string(
                "gradient variance of the observed slot",
                x_label,
                "Var[dE/dtheta]",
                true,
                &series,
            ),
        ));
    }
    Ok(outputs)
}

fn run_otoc(config: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    let mut traces: Vec<OtocTrace> = Vec::new();
    for resolved in config.resolved_regimes()? {
        for &n in &config.qubits {
            let max_depth = config.max_depth.unwrap_or(30);
            let mut trace = otoc_trace(
                resolved.ansatz,
                n,
                &resolved.regime,
                max_depth,
                config.instances,
                config.seed,
                config.tied,
            )?;
            trace.regime_label = resolved.token.clone();
            ensure_finite(trace.mean_otoc.iter().chain(&trace.stderr), "otoc trace")?;
            traces.push(trace);
        }
    }

    let mut outputs = vec![(format!("{}.csv", stem(config)), csv::otoc_csv(&traces))];
    if !config.no_plot {
        let mut series = Vec::new();
        for t in &traces {
            series.push(Series {
                label: format!("{} N={}", t.regime_label, t.num_qubits),
                points: t
                    .depths
                    .iter()
                    .zip(&t.mean_otoc)
                    .map(|(&d, &f)| (d as f64, f))
                    .collect(),
            });
        }
        outputs.push((
            format!("{}.svg", stem(config)),
            svg_string("end-to-end X-X OTOC", "depth (blocks)", "F", false, &series),
        ));
    }
    Ok(outputs)
}

fn run_entropy(config: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    let mut traces: Vec<EntropyTrace> = Vec::new();
    for resolved in config.resolved_regimes()? {
        for &n in &config.qubits {
            let max_depth = config.max_depth.unwrap_or(4 * n);
            let mut trace = entropy_growth(
                resolved.ansatz,
                n,
                &resolved.regime,
                max_depth,
                config.instances,
                config.seed,
                config.tied,
            )?;
            trace.regime_label = resolved.token.clone();
            ensure_finite(trace.mean_entropy.iter().chain(&trace.std_entropy), "entropy trace")?;
            traces.push(trace);
        }
    }

    let mut outputs = vec![(format!("{}.csv", stem(config)), csv::entropy_csv(&traces))];
    if !config.no_plot {
        let mut series = Vec::new();
        for t in &traces {
            series.push(Series {
                label: format!("{} N={}", t.regime_label, t.num_qubits),
                points: t
                    .depths
                    .iter()
                    .zip(&t.mean_entropy)
                    .map(|(&d, &s)| (d as f64, s))
                    .collect(),
            });
        }
        outputs.push((
            format!("{}.svg", stem(config)),
            svg_string("half-chain entropy growth", "depth (blocks)", "S (bits)", false, &series),
        ));
    }
    Ok(outputs)
}

fn run_vqe_experiment(config: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    let n = config.qubits[0];
    let mut runs: Vec<OptimRun> = Vec::new();
    for resolved in config.resolved_regimes()? {
        let vqe_config = VqeConfig {
            ansatz: resolved.ansatz,
            num_qubits: n,
            depth_blocks: config.depth_factor * n,
            regime: resolved.regime,
            xxz: xxz_spec(config, n),
            num_iterations: config.iterations,
            num_instances: config.instances,
            master_seed: config.seed,
            adam: AdamConfig { learning_rate: config.learning_rate, ..AdamConfig::default() },
            tied_blocks: config.tied,
        };
        let mut run = run_vqe(&vqe_config)?;
        run.regime_label = resolved.token.clone();
        ensure_finite(
            run.mean_cost.iter().chain(&run.var_cost).chain(&run.mean_entropy_bits),
            "vqe run",
        )?;
        runs.push(run);
    }

    let mut outputs = vec![(format!("{}.csv", stem(config)), csv::vqe_csv(&runs))];
    if !config.no_plot && !runs.is_empty() {
        let mut cost_series: Vec<Series> = runs
            .iter()
            .map(|r| Series {
                label: r.regime_label.clone(),
                points: r
                    .iterations
                    .iter()
                    .zip(&r.mean_cost)
                    .map(|(&t, &c)| (t as f64, c))
                    .collect(),
            })
            .collect();
        let ground = runs[0].exact_ground_energy;
        cost_series.push(Series {
            label: "exact ground".into(),
            points: vec![(0.0, ground), (config.iterations as f64, ground)],
        });
        outputs.push((
            format!("{}-cost.svg", stem(config)),
            svg_string("VQE cost dynamics", "iteration", "E", false, &cost_series),
        ));
        let entropy_series: Vec<Series> = runs
            .iter()
            .map(|r| Series {
                label: r.regime_label.clone(),
                points: r
                    .iterations
                    .iter()
                    .zip(&r.mean_entropy_bits)
                    .map(|(&t, &s)| (t as f64, s))
                    .collect(),
            })
            .collect();
        outputs.push((
            format!("{}-entropy.svg", stem(config)),
            svg_string("VQE entropy dynamics", "iteration", "S (bits)", false, &entropy_series),
        ));
    }
    Ok(outputs)
}

fn stem(config: &ExperimentConfig) -> String {
    config.kind.as_str().to_string()
}

fn group_series<T>(
    records: &[T],
    key: impl Fn(&T) -> String,
    point: impl Fn(&T) -> (f64, f64),
) -> Vec<Series> {
    let mut series: Vec<Series> = Vec::new();
    for record in records {
        let label = key(record);
        let p = point(record);
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push(p),
            None => series.push(Series { label, points: vec![p] }),
        }
    }
    series
}

// Rendering into strings keeps all file writes on the coordinating thread
// and lets the manifest checksum exactly what was written.
fn svg_string(title: &str, x: &str, y: &str, log_y: bool, series: &[Series]) -> String {
    svg::render(title, x, y, log_y, series)
}
