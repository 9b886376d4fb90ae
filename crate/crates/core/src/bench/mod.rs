//! Benchmark harness: random circuits, the depth- and size-scaling
//! experiments, realistic-circuit metrics, curve fits and the ring sorting
//! baseline.

mod experiments;
mod fit;
mod random;
mod realistic;
mod sorting;

pub use experiments::{
    depth_scaling_experiment, size_scaling_experiment, write_depth_csv, write_size_csv, ArchFamily,
    DepthRow, SizeRow,
};
pub use fit::{fit_polylog, fit_power_law, FitError};
pub use random::{gen_random_circuit, random_mapping};
pub use realistic::{
    compile, realistic_benchmark, write_realistic_csv, CompileError, Compiled, Failures,
    RealisticRow,
};
pub use sorting::{apply_schedule, odd_even_sort_schedule, sort_baseline_overhead};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{slice_timesteps, Circuit};
use crate::router::RoutingResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("density {density} on {qubits} qubits gives no gates per timestep")]
    InfeasibleDensity { density: String, qubits: usize },
    #[error("random circuits need at least two qubits, got {0}")]
    TooFewQubits(usize),
    #[error("{0}")]
    Io(String),
}

/// Routing quality of one circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub swaps: usize,
    /// Output over input timesteps, SWAP counted as a single gate.
    #[serde(rename = "R")]
    pub r: f64,
    /// Output minus input timesteps.
    #[serde(rename = "N")]
    pub n: i64,
    /// Output over input CNOT depth.
    #[serde(rename = "R_D")]
    pub r_d: f64,
    /// Output over input CNOT count.
    #[serde(rename = "R_C")]
    pub r_c: f64,
    pub fallbacks: usize,
    pub ms: f64,
}

/// `num / den`, with `0 / 0` read as no change.
pub(crate) fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        if num == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    /// `result` is the router output (with SWAP gates) and `synthesized` the
    /// final hardware circuit; timestep metrics come from the former, CNOT
    /// metrics from the latter.
    pub fn measure(
        input: &Circuit,
        result: &RoutingResult,
        synthesized: &Circuit,
        ms: f64,
    ) -> Metrics {
        let t_in = slice_timesteps(input).len();
        let t_out = slice_timesteps(&result.routed).len();
        Metrics {
            swaps: result.swap_count,
            r: ratio(t_out, t_in),
            n: t_out as i64 - t_in as i64,
            r_d: ratio(synthesized.cx_depth(), input.cx_depth()),
            r_c: ratio(
                synthesized.count_kind(crate::circuit::GateKind::Cx),
                input.count_kind(crate::circuit::GateKind::Cx),
            ),
            fallbacks: result.fallback_count,
            ms,
        }
    }
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Seed for one sample of an experiment, mixed from the master seed and the
/// sample's coordinates so that results do not depend on scheduling.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    let mut h = splitmix(master);
    for &c in coords {
        h = splitmix(h ^ c.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
