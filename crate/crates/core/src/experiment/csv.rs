//! CSV emission with fixed schemas and 17-significant-digit floats, so
//! re-parsing a file reproduces the in-memory records bit for bit.

use crate::entropy::EntropyTrace;
use crate::error::{Error, Result};
use crate::gradient::VarianceRecord;
use crate::otoc::OtocTrace;
use crate::vqe::OptimRun;

pub const VARIANCE_HEADER: &str =
    "regime,num_qubits,depth,param_index,num_instances,mean_grad,var_grad,seed";
pub const ENTROPY_HEADER: &str =
    "regime,num_qubits,depth,mean_entropy_bits,std_entropy_bits,num_instances,seed";
pub const OTOC_HEADER: &str = "regime,num_qubits,depth,mean_otoc,stderr,method,num_instances,seed";
pub const VQE_HEADER: &str =
    "regime,iteration,mean_cost,var_cost,mean_entropy_bits,var_entropy_bits,exact_ground_energy,num_instances,seed";

/// 17 significant digits: enough to round-trip any finite f64 exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(text: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| Error::config(format!("invalid float field '{text}'")))
}

pub fn variance_csv(records: &[VarianceRecord]) -> String {
    let mut out = String::from(VARIANCE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.regime_label,
            r.num_qubits,
            r.depth_blocks,
            r.param_index,
            r.num_instances,
            format_f64(r.mean),
            format_f64(r.variance),
            r.seed
        ));
    }
    out
}

pub fn entropy_csv(traces: &[EntropyTrace]) -> String {
    let mut out = String::from(ENTROPY_HEADER);
    out.push('\n');
    for t in traces {
        for (k, depth) in t.depths.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t.regime_label,
                t.num_qubits,
                depth,
                format_f64(t.mean_entropy[k]),
                format_f64(t.std_entropy[k]),
                t.num_instances,
                t.seed
            ));
        }
    }
    out
}

pub fn otoc_csv(traces: &[OtocTrace]) -> String {
    let mut out = String::from(OTOC_HEADER);
    out.push('\n');
    for t in traces {
        for (k, depth) in t.depths.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                t.regime_label,
                t.num_qubits,
                depth,
                format_f64(t.mean_otoc[k]),
                format_f64(t.stderr[k]),
                t.method.as_str(),
                t.num_instances,
                t.seed
            ));
        }
    }
    out
}

pub fn vqe_csv(runs: &[OptimRun]) -> String {
    let mut out = String::from(VQE_HEADER);
    out.push('\n');
    for run in runs {
        for (k, iteration) in run.iterations.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                run.regime_label,
                iteration,
                format_f64(run.mean_cost[k]),
                format_f64(run.var_cost[k]),
                format_f64(run.mean_entropy_bits[k]),
                format_f64(run.var_entropy_bits[k]),
                format_f64(run.exact_ground_energy),
                run.num_instances,
                run.seed
            ));
        }
    }
    out
}

/// Parsed row of a variance CSV; used by tests and downstream tooling.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceRow {
    pub regime: String,
    pub num_qubits: usize,
    pub depth: usize,
    pub param_index: usize,
    pub num_instances: usize,
    pub mean_grad: f64,
    pub var_grad: f64,
    pub seed: u64,
}

pub fn parse_variance_csv(text: &str) -> Result<Vec<VarianceRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == VARIANCE_HEADER => {}
        other => {
            return Err(Error::config(format!("unexpected variance header {other:?}")));
        }
    }
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::config(format!("variance row has {} fields", fields.len())));
            }
            Ok(VarianceRow {
                regime: fields[0].to_string(),
                num_qubits: parse_usize(fields[1])?,
                depth: parse_usize(fields[2])?,
                param_index: parse_usize(fields[3])?,
                num_instances: parse_usize(fields[4])?,
                mean_grad: parse_f64(fields[5])?,
                var_grad: parse_f64(fields[6])?,
                seed: parse_u64(fields[7])?,
            })
        })
        .collect()
}

fn parse_usize(text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| Error::config(format!("invalid integer field '{text}'")))
}

fn parse_u64(text: &str) -> Result<u64> {
    text.parse()
        .map_err(|_| Error::config(format!("invalid integer field '{text}'")))
}
