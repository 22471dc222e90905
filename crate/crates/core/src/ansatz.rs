//! Circuit constructors and regime-specific parameter sampling.
//!
//! Two ansatz families are provided:
//!
//! - The kicked-Ising MBL circuit: per block, RZZ on every adjacent pair
//!   (scale 2, so a slot holding J realizes exp(-i J ZZ)), then RZ on every
//!   site, then an RX "kick" on every site. Which phase the block realizes
//!   (paramagnetic MBL, thermalizing, or time-crystalline MBL) is set by the
//!   kick-angle window of the [`Regime`].
//! - The hardware-efficient baseline: layers of single-qubit rotations with
//!   random axes followed by a CNOT ladder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Which circuit family an experiment draws instances from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzKind {
    Mbl,
    Hea,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    Pm,
    Thermal,
    Dtc,
    Custom,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::Pm => "pm",
            RegimeLabel::Thermal => "thermal",
            RegimeLabel::Dtc => "dtc",
            RegimeLabel::Custom => "custom",
        }
    }
}

/// Sampling intervals (radians) for the couplings J, fields h, and kick
/// angles g. Intervals may be points (`low == high`), which is how the
/// figure conventions pin g while J and h stay disordered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub label: RegimeLabel,
    pub g_low: f64,
    pub g_high: f64,
    pub j_low: f64,
    pub j_high: f64,
    pub h_low: f64,
    pub h_high: f64,
}

/// Disorder window for the ZZ couplings: J in [-1.5 pi, -0.5 pi].
pub const J_WINDOW: (f64, f64) = (-1.5 * PI, -0.5 * PI);
/// Disorder window for the longitudinal fields: h in [-pi, pi].
pub const H_WINDOW: (f64, f64) = (-PI, PI);

impl Regime {
    fn with_g(label: RegimeLabel, g_low: f64, g_high: f64) -> Self {
        Regime {
            label,
            g_low,
            g_high,
            j_low: J_WINDOW.0,
            j_high: J_WINDOW.1,
            h_low: H_WINDOW.0,
            h_high: H_WINDOW.1,
        }
    }

    /// Paramagnetic MBL window: g in (0, 0.2 pi].
    pub fn pm_window() -> Self {
        Regime::with_g(RegimeLabel::Pm, 0.0, 0.2 * PI)
    }

    /// Time-crystal MBL window: g in [0.84 pi, pi).
    pub fn dtc_window() -> Self {
        Regime::with_g(RegimeLabel::Dtc, 0.84 * PI, PI)
    }

    /// Thermalizing point g = 0.5 pi (override with [`Regime::with_g_point`]
    /// or [`Regime::with_g_range`] for a window).
    pub fn thermal() -> Self {
        Regime::with_g(RegimeLabel::Thermal, 0.5 * PI, 0.5 * PI)
    }

    /// Paramagnetic MBL at the reference kick angle g = 0.1 pi.
    pub fn pm() -> Self {
        Regime::pm_window().with_g_point(0.1 * PI)
    }

    /// Time-crystal MBL at the reference kick angle g = 0.9 pi.
    pub fn dtc() -> Self {
        Regime::dtc_window().with_g_point(0.9 * PI)
    }

    pub fn custom(g: (f64, f64), j: (f64, f64), h: (f64, f64)) -> Self {
        Regime {
            label: RegimeLabel::Custom,
            g_low: g.0,
            g_high: g.1,
            j_low: j.0,
            j_high: j.1,
            h_low: h.0,
            h_high: h.1,
        }
    }

    /// Pin the kick angle to a single value, keeping the label.
    pub fn with_g_point(mut self, g: f64) -> Self {
        self.g_low = g;
        self.g_high = g;
        self
    }

    pub fn with_g_range(mut self, low: f64, high: f64) -> Self {
        self.g_low = low;
        self.g_high = high;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, low, high) in [
            ("g", self.g_low, self.g_high),
            ("J", self.j_low, self.j_high),
            ("h", self.h_low, self.h_high),
        ] {
            if !low.is_finite() || !high.is_finite() {
                return Err(Error::NonFinite(format!("{name} interval of regime")));
            }
            if low > high {
                return Err(Error::contract(format!(
                    "{name} interval [{low}, {high}] is inverted"
                )));
            }
        }
        Ok(())
    }
}

/// One parameter draw for the MBL circuit: J per bond per block, h and g
/// per site per block.
#[derive(Debug, Clone, PartialEq)]
pub struct MblParams {
    pub num_qubits: usize,
    pub depth_blocks: usize,
    pub j: Vec<f64>,
    pub h: Vec<f64>,
    pub g: Vec<f64>,
}

impl MblParams {
    /// Slot-ordered parameter vector matching [`build_mbl_circuit`]:
    /// per block, bonds' J then sites' h then sites' g.
    pub fn flatten(&self) -> Vec<f64> {
        let n = self.num_qubits;
        let mut out = Vec::with_capacity(self.depth_blocks * (3 * n - 1));
        for block in 0..self.depth_blocks {
            out.extend_from_slice(&self.j[block * (n - 1)..(block + 1) * (n - 1)]);
            out.extend_from_slice(&self.h[block * n..(block + 1) * n]);
            out.extend_from_slice(&self.g[block * n..(block + 1) * n]);
        }
        out
    }
}

/// Per-block slot count for the MBL circuit: (N-1) J + N h + N g.
pub fn mbl_slots_per_block(num_qubits: usize) -> usize {
    3 * num_qubits - 1
}

/// Slot index observed by the variance experiments: the first ZZ-rotation
/// parameter of the first block.
pub const FIRST_ZZ_SLOT: usize = 0;

/// The kicked-Ising MBL circuit with open boundaries.
///
/// Block b binds slots `[b*(3N-1), (b+1)*(3N-1))` as J(bonds), h(sites),
/// g(sites) in that order.
pub fn build_mbl_circuit(num_qubits: usize, depth_blocks: usize) -> Result<Circuit> {
    if num_qubits < 2 {
        return Err(Error::contract(format!(
            "MBL circuit needs at least 2 qubits, got {num_qubits}"
        )));
    }
    if depth_blocks < 1 {
        return Err(Error::contract("depth_blocks must be at least 1"));
    }
    let per_block = mbl_slots_per_block(num_qubits);
    let mut gates = Vec::with_capacity(depth_blocks * per_block);
    for block in 0..depth_blocks {
        let base = block * per_block;
        for bond in 0..num_qubits - 1 {
            gates.push(Gate::rzz(bond, bond + 1, base + bond).with_scale(2.0));
        }
        for site in 0..num_qubits {
            gates.push(Gate::rz(site, base + (num_qubits - 1) + site));
        }
        for site in 0..num_qubits {
            gates.push(Gate::rx(site, base + (2 * num_qubits - 1) + site));
        }
    }
    Circuit::with_blocks(num_qubits, gates, depth_blocks * per_block, depth_blocks)
}

/// Draw uniform from [low, high); low == high yields the point.
fn draw_half_open(rng: &mut impl Rng, low: f64, high: f64) -> f64 {
    low + rng.random::<f64>() * (high - low)
}

/// Draw uniform from the open interval (low, high); low == high yields the
/// point. The open interval sits inside both closure conventions the MBL
/// windows are quoted with.
fn draw_open(rng: &mut impl Rng, low: f64, high: f64) -> f64 {
    if low == high {
        return low;
    }
    loop {
        let u: f64 = rng.random();
        if u != 0.0 {
            return low + u * (high - low);
        }
    }
}

pub(crate) fn sample_mbl_params_with_rng(
    num_qubits: usize,
    depth_blocks: usize,
    regime: &Regime,
    rng: &mut impl Rng,
    tied: bool,
) -> Result<MblParams> {
    regime.validate()?;
    if num_qubits < 2 || depth_blocks < 1 {
        return Err(Error::contract(
            "parameter sampling needs num_qubits >= 2 and depth_blocks >= 1",
        ));
    }
    let blocks_to_draw = if tied { 1 } else { depth_blocks };
    let mut j = Vec::with_capacity(depth_blocks * (num_qubits - 1));
    let mut h = Vec::with_capacity(depth_blocks * num_qubits);
    let mut g = Vec::with_capacity(depth_blocks * num_qubits);
    for _ in 0..blocks_to_draw {
        for _ in 0..num_qubits - 1 {
            j.push(draw_half_open(rng, regime.j_low, regime.j_high));
        }
        for _ in 0..num_qubits {
            h.push(draw_half_open(rng, regime.h_low, regime.h_high));
        }
        for _ in 0..num_qubits {
            g.push(draw_open(rng, regime.g_low, regime.g_high));
        }
    }
    if tied {
        for _ in 1..depth_blocks {
            j.extend_from_within(0..num_qubits - 1);
            h.extend_from_within(0..num_qubits);
            g.extend_from_within(0..num_qubits);
        }
    }
    Ok(MblParams { num_qubits, depth_blocks, j, h, g })
}

/// Sample one disorder realization; every slot drawn independently.
pub fn sample_mbl_params(
    num_qubits: usize,
    depth_blocks: usize,
    regime: &Regime,
    rng_seed: u64,
) -> Result<MblParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_mbl_params_with_rng(num_qubits, depth_blocks, regime, &mut rng, false)
}

/// Sample with block 0's draws copied to every block, so the circuit
/// repeats one Floquet period D times.
pub fn sample_mbl_params_tied(
    num_qubits: usize,
    depth_blocks: usize,
    regime: &Regime,
    rng_seed: u64,
) -> Result<MblParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_mbl_params_with_rng(num_qubits, depth_blocks, regime, &mut rng, true)
}

/// The hardware-efficient baseline: `depth_layers` repetitions of one
/// single-qubit rotation per qubit (axis uniform over {x,y,z}, fixed by
/// `axis_seed`) followed by a CNOT ladder on adjacent pairs.
pub fn build_hea_circuit(num_qubits: usize, depth_layers: usize, axis_seed: u64) -> Result<Circuit> {
    if num_qubits < 2 {
        return Err(Error::contract(format!(
            "HEA circuit needs at least 2 qubits, got {num_qubits}"
        )));
    }
    if depth_layers < 1 {
        return Err(Error::contract("depth_layers must be at least 1"));
    }
    let mut axis_rng = ChaCha8Rng::seed_from_u64(axis_seed);
    let mut gates = Vec::new();
    for layer in 0..depth_layers {
        for site in 0..num_qubits {
            let slot = layer * num_qubits + site;
            gates.push(match axis_rng.random_range(0..3u8) {
                0 => Gate::rx(site, slot),
                1 => Gate::ry(site, slot),
                _ => Gate::rz(site, slot),
            });
        }
        for site in 0..num_qubits - 1 {
            gates.push(Gate::cnot(site, site + 1));
        }
    }
    Circuit::with_blocks(
        num_qubits,
        gates,
        num_qubits * depth_layers,
        depth_layers,
    )
}

pub(crate) fn sample_hea_params_with_rng(num_slots: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..num_slots).map(|_| draw_half_open(rng, 0.0, 2.0 * PI)).collect()
}

/// i.i.d. uniform draws from [0, 2 pi), one per slot.
pub fn sample_hea_params(num_slots: usize, rng_seed: u64) -> Result<Vec<f64>> {
    if num_slots < 1 {
        return Err(Error::contract("num_slots must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok(sample_hea_params_with_rng(num_slots, &mut rng))
}
