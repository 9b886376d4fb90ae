//! `qroute`: route QASM circuits onto device graphs, run the benchmark
//! experiments, and verify routed output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use qroute::architecture::Architecture;
use qroute::bench::{
    compile, depth_scaling_experiment, realistic_benchmark, size_scaling_experiment,
    write_depth_csv, write_realistic_csv, write_size_csv, ArchFamily,
};
use qroute::circuit::{emit_qasm, parse_qasm, Circuit, GateKind};
use qroute::placement::{Mapping, MappingTable};
use qroute::router::RoutingConfig;
use qroute::verify::{check_conformance, check_mapped_equivalence};

/// Exit code for conformance failures of routed output.
const EXIT_CONFORMANCE: u8 = 2;
/// Exit code of `verify` when output and input differ.
const EXIT_INEQUIVALENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qroute",
    version,
    about = "Qubit routing for restricted-connectivity devices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route a circuit, synthesize swaps, write QASM and print metrics.
    Route(RouteArgs),
    /// Run a benchmark experiment and write CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Check routed output against its input and mapping log.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RouteArgs {
    /// Input OpenQASM 2.0 file.
    #[arg(long)]
    circuit: PathBuf,
    /// Architecture name (ring:N, grid:N, butterfly:R, complete:N, tokyo,
    /// qx5, acorn) or edge-list file.
    #[arg(long)]
    arch: String,
    /// Output QASM file.
    #[arg(long)]
    out: PathBuf,
    /// Mapping log file; defaults to the output path with extension
    /// `map.json`.
    #[arg(long)]
    mapping_log: Option<PathBuf>,
    #[command(flatten)]
    routing: RoutingArgs,
    /// Start from the identity mapping instead of running placement.
    #[arg(long)]
    no_place: bool,
    /// Leave swaps as `swap` gates instead of decomposing them.
    #[arg(long)]
    keep_swaps: bool,
    /// Also require CNOTs to follow edge orientation in the self-check.
    #[arg(long)]
    directed_strict: bool,
}

#[derive(Args)]
struct RoutingArgs {
    /// Slices after the frontier used to rank swaps.
    #[arg(long, default_value_t = RoutingConfig::default().lookahead)]
    lookahead: usize,
    /// Tie-breaking seed; 0 picks the lowest edge.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RoutingArgs {
    fn config(&self) -> RoutingConfig {
        RoutingConfig {
            lookahead: self.lookahead,
            seed: self.seed,
            ..RoutingConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Depth ratio R of random full-density circuits against timesteps.
    Depth {
        #[arg(long)]
        arch: String,
        /// Timestep counts, as `A..B` (inclusive) or a comma list.
        #[arg(long, default_value = "2..10")]
        t: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Master seed of the random circuits.
        #[arg(long, default_value_t = 1)]
        circuit_seed: u64,
        #[command(flatten)]
        routing: RoutingArgs,
        /// CSV file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Timestep overhead N of single-slice circuits against device size.
    Size {
        /// ring, grid or butterfly.
        #[arg(long)]
        family: String,
        /// Family parameters, as `A..B` (inclusive) or a comma list.
        #[arg(long)]
        sizes: String,
        /// Gate densities, comma separated.
        #[arg(long, default_value = "1")]
        density: String,
        #[arg(long, default_value_t = 2)]
        samples_per_node: usize,
        #[arg(long, default_value_t = 1)]
        circuit_seed: u64,
        #[command(flatten)]
        routing: RoutingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile every `.qasm` file of a directory and report R_D and R_C.
    Realistic {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        arch: String,
        #[command(flatten)]
        routing: RoutingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Original circuit.
    #[arg(long)]
    input: PathBuf,
    /// Routed circuit over device nodes.
    #[arg(long)]
    output: PathBuf,
    /// Mapping log written by `route`.
    #[arg(long)]
    mapping: PathBuf,
    /// Architecture to check conformance against; skipped when absent.
    #[arg(long)]
    arch: Option<String>,
    /// Also require CNOTs to follow edge orientation.
    #[arg(long)]
    directed_strict: bool,
    /// Seed of the random input states.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Largest number of wires simulated (idle nodes are not counted).
    #[arg(long, default_value_t = 16)]
    max_qubits: usize,
}

/// Initial and final placement of a routed circuit, logical qubit to node.
#[derive(Serialize, Deserialize)]
struct MappingLog {
    initial: MappingTable,
    #[serde(rename = "final")]
    final_: MappingTable,
}

#[derive(Serialize)]
struct VerifyReport {
    conforms: Option<bool>,
    equivalent: bool,
    /// Smallest overlap over the random input states.
    fidelity: f64,
}

/// Failure that ends the program with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Route(args) => route(args),
        Command::Bench(cmd) => bench(cmd),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("qroute: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_qasm(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Built-in name first, then edge-list file.
fn load_arch(spec: &str) -> Result<Architecture, Failure> {
    match Architecture::from_name(spec) {
        Ok(arch) => Ok(arch),
        Err(named) if !Path::new(spec).is_file() => Err(named.into()),
        Err(_) => Architecture::from_edge_list(&read(Path::new(spec))?)
            .map_err(|e| Failure(format!("{spec}: {e}"))),
    }
}

/// `A..B` (inclusive) or `a,b,c`.
fn parse_usizes(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure(format!("cannot read `{text}` as a range or list"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok((num(a)?..=num(b)?).collect()),
        None => text.split(',').map(num).collect(),
    }
}

fn route(args: RouteArgs) -> Outcome {
    let circuit = load_circuit(&args.circuit)?;
    let arch = load_arch(&args.arch)?;
    let identity = Mapping::identity(circuit.num_qubits(), arch.num_nodes());
    let initial = args.no_place.then_some(&identity);
    let compiled = compile(
        &circuit,
        &arch,
        initial,
        &args.routing.config(),
        args.keep_swaps,
    )?;

    write(&args.out, &emit_qasm(&compiled.synthesized))?;
    let log = MappingLog {
        initial: (&compiled.result.initial_mapping).into(),
        final_: (&compiled.result.final_mapping).into(),
    };
    let log_path = args
        .mapping_log
        .unwrap_or_else(|| args.out.with_extension("map.json"));
    write(&log_path, &(serde_json::to_string_pretty(&log)? + "\n"))?;
    println!("{}", serde_json::to_string(&compiled.metrics)?);

    let report = check_conformance(&compiled.synthesized, &arch, args.directed_strict);
    if !report.is_pass() {
        for v in &report.violations {
            eprintln!("qroute: conformance: {v}");
        }
        return Ok(EXIT_CONFORMANCE);
    }
    Ok(0)
}

fn emit_csv(
    out: Option<PathBuf>,
    fill: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
) -> Outcome {
    match out {
        Some(path) => {
            let mut file =
                fs::File::create(&path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            fill(&mut file)?;
        }
        None => fill(&mut io::stdout().lock())?,
    }
    Ok(0)
}

fn bench(cmd: BenchCommand) -> Outcome {
    match cmd {
        BenchCommand::Depth {
            arch,
            t,
            samples,
            circuit_seed,
            routing,
            out,
        } => {
            let arch = load_arch(&arch)?;
            let ts = parse_usizes(&t)?;
            let rows =
                depth_scaling_experiment(&arch, &ts, samples, circuit_seed, &routing.config());
            emit_csv(out, |w| Ok(write_depth_csv(&rows, w)?))
        }
        BenchCommand::Size {
            family,
            sizes,
            density,
            samples_per_node,
            circuit_seed,
            routing,
            out,
        } => {
            let family = ArchFamily::from_name(&family)
                .ok_or_else(|| Failure(format!("unknown family `{family}`")))?;
            let sizes = parse_usizes(&sizes)?;
            let densities = density
                .split(',')
                .map(|d| d.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()?;
            let rows = size_scaling_experiment(
                family,
                &sizes,
                &densities,
                samples_per_node,
                circuit_seed,
                &routing.config(),
            )?;
            emit_csv(out, |w| Ok(write_size_csv(&rows, w)?))
        }
        BenchCommand::Realistic {
            dir,
            arch,
            routing,
            out,
        } => {
            let arch = load_arch(&arch)?;
            let (rows, failures) = realistic_benchmark(&dir, &arch, &routing.config())?;
            for (name, reason) in &failures {
                eprintln!("qroute: skipped {name}: {reason}");
            }
            emit_csv(out, |w| Ok(write_realistic_csv(&rows, w)?))
        }
    }
}

/// Measurements are dropped: the check covers the unitary part, which is
/// exact when every measurement is terminal.
fn unitary_part(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.num_qubits());
    for g in c.gates().iter().filter(|g| g.kind != GateKind::Measure) {
        out.push(g.clone());
    }
    out
}

fn verify(args: VerifyArgs) -> Outcome {
    let input = load_circuit(&args.input)?;
    let output = load_circuit(&args.output)?;
    let log: MappingLog = serde_json::from_str(&read(&args.mapping)?)?;
    let (nq, nn) = (input.num_qubits(), output.num_qubits());
    let shape = || {
        Failure(format!(
            "mapping log does not fit {nq} qubits on {nn} nodes"
        ))
    };
    let initial = log.initial.to_mapping(nq, nn).ok_or_else(shape)?;
    let final_ = log.final_.to_mapping(nq, nn).ok_or_else(shape)?;

    let conforms = match &args.arch {
        Some(spec) => {
            let report = check_conformance(&output, &load_arch(spec)?, args.directed_strict);
            for v in &report.violations {
                eprintln!("qroute: conformance: {v}");
            }
            Some(report.is_pass())
        }
        None => None,
    };

    let e = check_mapped_equivalence(
        &unitary_part(&input),
        &unitary_part(&output),
        &initial,
        &final_,
        args.seed,
        args.max_qubits,
    )?;
    let report = VerifyReport {
        conforms,
        equivalent: e.equivalent,
        fidelity: e.fidelity,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(match (report.conforms, report.equivalent) {
        (Some(false), _) => EXIT_CONFORMANCE,
        (_, false) => EXIT_INEQUIVALENT,
        _ => 0,
    })
}
