use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{ratio, BenchError, Metrics};
use crate::architecture::Architecture;
use crate::circuit::{parse_qasm, Circuit, GateKind};
use crate::placement::Mapping;
use crate::router::{route, RoutingConfig, RoutingError, RoutingResult};
use crate::synthesis::{cleanup, decompose_swaps, redirect_cnots, SynthesisError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// Output of the full pipeline for one circuit.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub result: RoutingResult,
    /// Final circuit: swaps decomposed (unless kept), CNOTs reoriented on
    /// directed devices, cleaned up.
    pub synthesized: Circuit,
    pub metrics: Metrics,
}

/// Place (unless `initial` is given), route, decompose swaps, reorient
/// CNOTs when `arch` is directed, and clean up. With `keep_swaps` the swaps
/// stay as primitive gates and reorientation is skipped for them.
pub fn compile(
    circuit: &Circuit,
    arch: &Architecture,
    initial: Option<&Mapping>,
    cfg: &RoutingConfig,
    keep_swaps: bool,
) -> Result<Compiled, CompileError> {
    let start = Instant::now();
    let result = route(circuit, arch, initial, cfg)?;
    let mut out = if keep_swaps {
        result.routed.clone()
    } else {
        decompose_swaps(&result.routed, Some(arch))
    };
    if arch.is_directed() {
        out = redirect_cnots(&out, arch)?;
    }
    let synthesized = cleanup(&out);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let metrics = Metrics::measure(circuit, &result, &synthesized, ms);
    Ok(Compiled {
        result,
        synthesized,
        metrics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealisticRow {
    pub name: String,
    /// CNOT count and CNOT depth of the input.
    pub g_in: usize,
    pub d_in: usize,
    pub g_out: usize,
    pub d_out: usize,
    #[serde(rename = "R_D")]
    pub r_d: f64,
    #[serde(rename = "R_C")]
    pub r_c: f64,
    pub ms: f64,
}

/// Files that failed to parse or route, with the reason.
pub type Failures = Vec<(String, String)>;

/// Compiles every `.qasm` file in `dir` (sorted by name) for `arch`.
/// Returns the per-circuit rows and, separately, files that failed to parse
/// or route, with the reason.
pub fn realistic_benchmark(
    dir: &Path,
    arch: &Architecture,
    cfg: &RoutingConfig,
) -> Result<(Vec<RealisticRow>, Failures), BenchError> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| BenchError::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    files.sort();

    let outcomes: Vec<Result<RealisticRow, (String, String)>> = files
        .par_iter()
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let fail = |msg: String| (name.clone(), msg);
            let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
            let circuit = parse_qasm(&text).map_err(|e| fail(e.to_string()))?;
            let compiled =
                compile(&circuit, arch, None, cfg, false).map_err(|e| fail(e.to_string()))?;
            let (g_in, d_in) = (circuit.count_kind(GateKind::Cx), circuit.cx_depth());
            let out = &compiled.synthesized;
            let (g_out, d_out) = (out.count_kind(GateKind::Cx), out.cx_depth());
            Ok(RealisticRow {
                name,
                g_in,
                d_in,
                g_out,
                d_out,
                r_d: ratio(d_out, d_in),
                r_c: ratio(g_out, g_in),
                ms: compiled.metrics.ms,
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok((rows, failures))
}

/// CSV with columns `name,g_in,d_in,g_out,d_out,R_D,R_C,ms`.
pub fn write_realistic_csv(rows: &[RealisticRow], out: impl Write) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| BenchError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| BenchError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_single_cnot_has_unit_ratios() {
        let dir = std::env::temp_dir().join(format!("qroute-realistic-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(
            dir.join("one.qasm"),
            "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n",
        )
        .unwrap();
        std::fs::write(dir.join("bad.qasm"), "qreg q[2];\nccx q[0],q[1],q[2];\n").unwrap();
        std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
        let (rows, failures) =
            realistic_benchmark(&dir, &Architecture::ibmqx5(), &RoutingConfig::default()).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].r_d, rows[0].r_c), (1.0, 1.0));
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].0, "bad");
    }
}
