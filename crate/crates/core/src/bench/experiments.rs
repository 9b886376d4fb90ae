use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{derive_seed, gen_random_circuit, mean_std, random_mapping, BenchError};
use crate::architecture::{ArchError, Architecture};
use crate::circuit::slice_timesteps;
use crate::router::{route, RoutingConfig};

/// Architecture families of the size-scaling experiment, indexed by their
/// generator parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchFamily {
    /// Ring with the given number of nodes.
    Ring,
    /// Square grid with the given side.
    Grid,
    /// Cyclic butterfly with the given word length.
    Butterfly,
}

impl ArchFamily {
    pub fn build(self, param: usize) -> Result<Architecture, ArchError> {
        match self {
            ArchFamily::Ring => Architecture::ring(param),
            ArchFamily::Grid => Architecture::square_grid(param),
            ArchFamily::Butterfly => Architecture::cyclic_butterfly(param),
        }
    }

    pub fn from_name(name: &str) -> Option<ArchFamily> {
        match name {
            "ring" => Some(ArchFamily::Ring),
            "grid" => Some(ArchFamily::Grid),
            "butterfly" => Some(ArchFamily::Butterfly),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthRow {
    pub arch: String,
    pub t: usize,
    #[serde(rename = "mean_R")]
    pub mean_r: f64,
    #[serde(rename = "std_R")]
    pub std_r: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeRow {
    pub arch: String,
    pub n: usize,
    pub d: f64,
    #[serde(rename = "mean_N")]
    pub mean_n: f64,
    #[serde(rename = "std_N")]
    pub std_n: f64,
    pub samples: usize,
}

/// Routes `samples` random full-density circuits of `t` timesteps for each
/// `t` in `ts`, placing them with the initial-mapping pass, and reports the
/// depth ratio `R`. The circuits depend only on the node count, `t`, the
/// sample index and `seed`, so architectures of equal size see the same set.
pub fn depth_scaling_experiment(
    arch: &Architecture,
    ts: &[usize],
    samples: usize,
    seed: u64,
    cfg: &RoutingConfig,
) -> Vec<DepthRow> {
    let n = arch.num_nodes();
    ts.iter()
        .map(|&t| {
            let ratios: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let c = gen_random_circuit(
                        n,
                        1.0,
                        t,
                        derive_seed(seed, &[n as u64, t as u64, i as u64]),
                    )
                    .expect("full density is feasible for n >= 2");
                    let r = route(&c, arch, None, cfg).expect("circuit fits the architecture");
                    slice_timesteps(&r.routed).len() as f64 / t as f64
                })
                .collect();
            let (mean_r, std_r) = mean_std(&ratios);
            DepthRow {
                arch: arch.name().to_string(),
                t,
                mean_r,
                std_r,
                samples,
            }
        })
        .collect()
}

/// Routes `samples_per_node * n` single-timestep circuits per architecture
/// size and density from a random initial mapping (placement bypassed), and
/// reports the timestep overhead `N`.
pub fn size_scaling_experiment(
    family: ArchFamily,
    params: &[usize],
    densities: &[f64],
    samples_per_node: usize,
    seed: u64,
    cfg: &RoutingConfig,
) -> Result<Vec<SizeRow>, BenchError> {
    let mut rows = Vec::new();
    for &param in params {
        let arch = family
            .build(param)
            .map_err(|e| BenchError::Io(e.to_string()))?;
        let n = arch.num_nodes();
        for &d in densities {
            gen_random_circuit(n, d, 1, 0)?;
            let samples = samples_per_node * n;
            let overheads: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let key = [n as u64, d.to_bits(), i as u64];
                    let c = gen_random_circuit(n, d, 1, derive_seed(seed, &key)).unwrap();
                    let m = random_mapping(n, n, derive_seed(seed ^ 0x5eed, &key));
                    let r = route(&c, &arch, Some(&m), cfg).expect("circuit fits the architecture");
                    slice_timesteps(&r.routed).len() as f64 - 1.0
                })
                .collect();
            let (mean_n, std_n) = mean_std(&overheads);
            rows.push(SizeRow {
                arch: arch.name().to_string(),
                n,
                d,
                mean_n,
                std_n,
                samples,
            });
        }
    }
    Ok(rows)
}

fn write_rows<T: Serialize>(rows: &[T], out: impl Write) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| BenchError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| BenchError::Io(e.to_string()))
}

/// CSV with columns `arch,t,mean_R,std_R,samples`.
pub fn write_depth_csv(rows: &[DepthRow], out: impl Write) -> Result<(), BenchError> {
    write_rows(rows, out)
}

/// CSV with columns `arch,n,d,mean_N,std_N,samples`.
pub fn write_size_csv(rows: &[SizeRow], out: impl Write) -> Result<(), BenchError> {
    write_rows(rows, out)
}
