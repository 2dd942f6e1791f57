//! Command-line front end: compile, verify, decode, emit-circuit, render.
//!
//! Exit codes: 0 success, 1 input error, 2 compile or verification
//! failure, 3 enumeration cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use paritycc_core::artifact::{self, LoadedLayout};
use paritycc_core::circuit::schedule;
use paritycc_core::cnot::{emit_circuit, lay_out_contiguous};
use paritycc_core::code::{CodeError, ParityCode};
use paritycc_core::decoder::correct_and_decode;
use paritycc_core::layout::{lay_out, sufficient_strength, LayoutOptions};
use paritycc_core::oracle::{self, OracleError};
use paritycc_core::problem::LogicalProblem;
use paritycc_core::projector::{build_projector_set, AncillaRecord, ProjectorMode, ProjectorSet};
use paritycc_core::render;

#[derive(Parser)]
#[command(name = "paritycc", version, about = "Parity compiler for constrained k-body optimization problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a problem file to a device layout (and circuit in cnot mode).
    Compile(CompileArgs),
    /// Brute-force check that a compiled layout reproduces the logical optima.
    Verify(VerifyArgs),
    /// Decode measured bit-strings through majority-voted readout sets.
    Decode(DecodeArgs),
    /// Compile a problem and print its scheduled CNOT/Rz circuit.
    EmitCircuit(EmitCircuitArgs),
    /// Draw a compiled layout as ASCII and SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Problem file (text format, or JSON with a .json extension).
    problem: PathBuf,
    /// Target device type.
    #[arg(long, value_parser = ["plaquette", "cnot"], default_value = "plaquette")]
    mode: String,
    /// Longest projector allowed in cnot mode.
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    /// Seed for all seeded behavior.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Backtrack-node budget for the placement search.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Plaquette coupling strength; default 1 + 2·Σ|J|.
    #[arg(long)]
    strength: Option<f64>,
    /// Worker threads for enumeration (compile itself is single-threaded).
    #[arg(long)]
    threads: Option<usize>,
    /// Print G, P, D, C in dump format.
    #[arg(long)]
    dump_matrices: bool,
    /// Layout output path; defaults to <problem>.layout.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    problem: PathBuf,
    layout: PathBuf,
    /// Override the strength recorded in the layout file.
    #[arg(long)]
    strength: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct DecodeArgs {
    layout: PathBuf,
    /// One measured bit-string per line, column order = physical index.
    samples: PathBuf,
    /// Readout sets per sample for the majority vote.
    #[arg(long, default_value_t = 7)]
    num_sets: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EmitCircuitArgs {
    problem: PathBuf,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Rotation angle applied to every projector.
    #[arg(long, default_value_t = 1.0)]
    angle: f64,
    /// Write the circuit text here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    layout: PathBuf,
    /// SVG output path; defaults to <layout>.svg.
    #[arg(long)]
    svg: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Compile(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Compile(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Compile(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Decode(args) => cmd_decode(args),
        Command::EmitCircuit(args) => cmd_emit_circuit(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<LogicalProblem, Failure> {
    let text = read_file(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        paritycc_core::problem::parse_problem_json(&text)
    } else {
        paritycc_core::problem::parse_problem(&text)
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_layout(path: &Path) -> Result<LoadedLayout, Failure> {
    let text = read_file(path)?;
    artifact::load_layout_file(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn configure_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        oracle::configure_threads(t);
    }
}

fn layout_path(problem: &Path, out: &Option<PathBuf>) -> PathBuf {
    out.clone()
        .unwrap_or_else(|| problem.with_extension("layout.json"))
}

fn sibling_path(layout_path: &Path, suffix: &str) -> PathBuf {
    let s = layout_path.to_string_lossy();
    let stem = s.strip_suffix(".layout.json").unwrap_or(&s);
    PathBuf::from(format!("{stem}{suffix}"))
}

fn dump_matrices(code: &ParityCode) {
    let labels: Vec<String> = code
        .term_labels()
        .iter()
        .map(|s| {
            let parts: Vec<String> = s.iter().map(|q| (q + 1).to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    println!("# terms: {}", labels.join(" "));
    for (name, matrix) in [
        ("G", code.generator()),
        ("P", code.check()),
        ("D", code.decode_matrix()),
        ("C", code.constraint_matrix()),
    ] {
        println!("{name}");
        print!("{}", matrix.dump());
    }
}

fn cmd_compile(args: CompileArgs) -> Result<u8, Failure> {
    configure_threads(args.threads);
    let problem = load_problem(&args.problem)?;
    let code = ParityCode::from_problem(&problem)?;
    if args.dump_matrices {
        dump_matrices(&code);
    }
    let strength = args
        .strength
        .unwrap_or_else(|| sufficient_strength(problem.total_abs_coefficient()));
    let options = LayoutOptions {
        budget: args.budget,
        seed: args.seed,
        ..LayoutOptions::default()
    };
    let out_path = layout_path(&args.problem, &args.out);
    match args.mode.as_str() {
        "plaquette" => {
            let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
            let layout = lay_out(&set, &options)
                .map_err(|e| Failure::Compile(e.to_string()))?;
            let ancillas = all_ancillas(&set, &layout.dynamical_ancillas);
            let file = artifact::plaquette_layout_file(&code, &layout, &ancillas, strength);
            write_file(&out_path, &to_json(&file)?)?;
            println!(
                "compiled {} qubits, {} plaquettes, {} ancillas, grid {}x{} -> {}",
                layout.num_physical,
                layout.plaquettes.len(),
                ancillas.len(),
                layout.grid_bounds.0,
                layout.grid_bounds.1,
                out_path.display()
            );
        }
        "cnot" => {
            if args.max_len < 2 {
                return Err(Failure::Input("--max-len must be at least 2".into()));
            }
            let set = build_projector_set(code.check(), ProjectorMode::Cnot { max_len: args.max_len });
            let layout = lay_out_contiguous(&set, &options)
                .map_err(|e| Failure::Compile(e.to_string()))?;
            let file = artifact::cnot_layout_file(&code, &layout, &set.ancillas, strength);
            write_file(&out_path, &to_json(&file)?)?;
            let angles = vec![1.0; layout.trees.len()];
            let circuit = schedule(&emit_circuit(&layout.trees, &angles, layout.num_physical));
            let circuit_json = sibling_path(&out_path, ".circuit.json");
            let circuit_text = sibling_path(&out_path, ".circuit.txt");
            write_file(&circuit_json, &to_json(&circuit)?)?;
            write_file(&circuit_text, &circuit.to_text())?;
            println!(
                "compiled {} qubits, {} projector trees, depth {} -> {}, {}, {}",
                layout.num_physical,
                layout.trees.len(),
                circuit.depth(),
                out_path.display(),
                circuit_json.display(),
                circuit_text.display()
            );
        }
        other => return Err(Failure::Input(format!("unknown mode `{other}`"))),
    }
    Ok(0)
}

fn all_ancillas(set: &ProjectorSet, dynamical: &[AncillaRecord]) -> Vec<AncillaRecord> {
    let mut out = set.ancillas.clone();
    out.extend(dynamical.iter().cloned());
    out
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Input(format!("serialization failed: {e}")))
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    configure_threads(args.threads);
    let problem = load_problem(&args.problem)?;
    let loaded = load_layout(&args.layout)?;
    if loaded.mode != "plaquette" {
        return Err(Failure::Input(
            "verify requires a plaquette-mode layout".into(),
        ));
    }
    let code = ParityCode::from_problem(&problem)?;
    if code.generator().dump() != loaded.code.generator().dump() {
        return Err(Failure::Input(
            "layout file was not compiled from this problem (generator mismatch)".into(),
        ));
    }
    let strength = args.strength.unwrap_or(loaded.strength);
    let report = oracle::verify_pipeline(&problem, &loaded.code, &loaded.layout, strength)?;
    println!("{}", to_json(&report)?.trim_end());
    Ok(if report.decoded_match { 0 } else { 2 })
}

fn cmd_decode(args: DecodeArgs) -> Result<u8, Failure> {
    let loaded = load_layout(&args.layout)?;
    if loaded.mode != "plaquette" {
        return Err(Failure::Input("decode requires a plaquette-mode layout".into()));
    }
    let text = read_file(&args.samples)?;
    if args.num_sets == 0 {
        return Err(Failure::Input("--num-sets must be at least 1".into()));
    }
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bits: Result<Vec<u8>, Failure> = line
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Failure::Input(format!(
                    "{}:{}: invalid character `{other}` in sample",
                    args.samples.display(),
                    idx + 1
                ))),
            })
            .collect();
        let bits = bits?;
        if bits.len() != loaded.layout.num_physical {
            return Err(Failure::Input(format!(
                "{}:{}: sample has {} bits, layout has {} physical qubits",
                args.samples.display(),
                idx + 1,
                bits.len(),
                loaded.layout.num_physical
            )));
        }
        let outcome = correct_and_decode(
            &loaded.code,
            &loaded.layout,
            &bits,
            args.num_sets,
            args.seed.wrapping_add(idx as u64),
        );
        let logical: String = outcome
            .logical
            .iter()
            .map(|&b| if b == 0 { '0' } else { '1' })
            .collect();
        let ties = if outcome.ties.is_empty() {
            "-".to_string()
        } else {
            outcome
                .ties
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        println!("{logical}\tsyndrome_weight={}\tties={ties}", outcome.syndrome_weight);
    }
    Ok(0)
}

fn cmd_emit_circuit(args: EmitCircuitArgs) -> Result<u8, Failure> {
    let problem = load_problem(&args.problem)?;
    let code = ParityCode::from_problem(&problem)?;
    if args.max_len < 2 {
        return Err(Failure::Input("--max-len must be at least 2".into()));
    }
    let set = build_projector_set(code.check(), ProjectorMode::Cnot { max_len: args.max_len });
    let options = LayoutOptions {
        budget: args.budget,
        seed: args.seed,
        ..LayoutOptions::default()
    };
    let layout = lay_out_contiguous(&set, &options)
        .map_err(|e| Failure::Compile(e.to_string()))?;
    let angles = vec![args.angle; layout.trees.len()];
    let circuit = schedule(&emit_circuit(&layout.trees, &angles, layout.num_physical));
    let text = circuit.to_text();
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_render(args: RenderArgs) -> Result<u8, Failure> {
    let loaded = load_layout(&args.layout)?;
    let ancillas = loaded.layout.dynamical_ancillas.clone();
    let svg_path = args
        .svg
        .clone()
        .unwrap_or_else(|| args.layout.with_extension("svg"));
    print!("{}", render::ascii(&loaded.layout, &loaded.code, &ancillas));
    let svg = if loaded.mode == "cnot" {
        render::svg_cnot(
            &loaded.layout.positions,
            loaded.layout.grid_bounds,
            &loaded.trees,
            &loaded.code,
            &ancillas,
        )
    } else {
        render::svg(&loaded.layout, &loaded.code, &ancillas)
    };
    write_file(&svg_path, &svg)?;
    eprintln!("svg -> {}", svg_path.display());
    Ok(0)
}
