//! The `eqasm` command line tool: assemble, disassemble, simulate,
//! explore instantiation design spaces, and validate configurations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use eqasm_core::InstantiationConfig;
use eqasm_dse::{BenchKind, BenchParams, SetupMode};
use eqasm_sim::{RunOptions, ScriptedResults};

fn long_version() -> String {
    format!(
        "{} (default config hash {})",
        env!("CARGO_PKG_VERSION"),
        InstantiationConfig::default().hash_hex()
    )
}

#[derive(Parser)]
#[command(
    name = "eqasm",
    about = "Toolchain for the eQASM quantum instruction set",
    version = long_version()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Everything one simulation run needs.
#[derive(clap::Args)]
struct RunManifest {
    /// Assembled program binary.
    program: PathBuf,
    /// Instantiation configuration file (built-in default when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for measurement sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scripted measurement results overriding the backend.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Stop after this many wall cycles.
    #[arg(long, default_value_t = 10_000_000)]
    max_cycles: u64,
    /// Write the execution trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print the final state vector (index, real, imag per line).
    #[arg(long)]
    dump_state: bool,
    /// Timeline origin; gives the pipeline head start before cycle 0.
    #[arg(long, default_value_t = 0)]
    timeline_offset: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble eQASM text into a program binary.
    Asm {
        /// Source file.
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output binary.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Disassemble a program binary to text on standard output.
    Disasm {
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Execute a program binary on the microarchitecture simulator.
    Run(RunManifest),
    /// Count instructions across architecture configurations.
    Dse {
        /// Benchmark family: rb, parallel or sequential.
        #[arg(long)]
        benchmark: String,
        /// Sweep to run (only "default" is defined).
        #[arg(long, default_value = "default")]
        sweep: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family size parameter: Cliffords per qubit, layers, or gates.
        #[arg(long)]
        size: Option<u32>,
        /// Count SMIS/SMIT setup words (default assumes preloaded masks).
        #[arg(long)]
        count_setup: bool,
        /// Output CSV file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a configuration file against every invariant.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<InstantiationConfig> {
    let cfg = match path {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            InstantiationConfig::from_toml(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => InstantiationConfig::default(),
    };
    let errors = cfg.validate();
    let topo_errors = cfg.topology.validate();
    if !errors.is_empty() || !topo_errors.is_empty() {
        for e in &errors {
            eprintln!("error: {e}");
        }
        for e in &topo_errors {
            eprintln!("error: {e}");
        }
        return Err(anyhow!("invalid configuration"));
    }
    Ok(cfg)
}

fn cmd_asm(input: &Path, config: &Option<PathBuf>, output: &Path) -> Result<ExitCode> {
    let cfg = load_config(config)?;
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let name = input.display().to_string();
    match eqasm_asm::assemble(&text, &cfg) {
        Ok(assembled) => {
            for warning in &assembled.warnings {
                eprintln!("{}: warning: {}", name, warning);
            }
            let bytes = eqasm_asm::write_binary(&assembled.words, cfg.hash());
            fs::write(output, bytes).with_context(|| format!("writing {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(diagnostics) => {
            for d in &diagnostics {
                eprintln!("{}", d.render(&name));
            }
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_disasm(input: &Path, config: &Option<PathBuf>) -> Result<ExitCode> {
    let cfg = load_config(config)?;
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let words = eqasm_asm::read_binary(&bytes, cfg.hash())?;
    let instructions = eqasm_asm::decode(&words, &cfg)?;
    let mut out = String::new();
    for instr in &instructions {
        out.push_str(&instr.to_string());
        out.push('\n');
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(manifest: &RunManifest) -> Result<ExitCode> {
    let cfg = load_config(&manifest.config)?;
    let bytes = fs::read(&manifest.program)
        .with_context(|| format!("reading {}", manifest.program.display()))?;
    let words = eqasm_asm::read_binary(&bytes, cfg.hash())?;
    let instructions = eqasm_asm::decode(&words, &cfg)?;
    let script = match &manifest.script {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(
                ScriptedResults::parse(&text, cfg.num_qubits())
                    .map_err(|e| anyhow!("{}: {e}", path.display()))?,
            )
        }
        None => None,
    };
    let opts = RunOptions {
        seed: manifest.seed,
        script,
        max_cycles: manifest.max_cycles,
        timeline_offset: manifest.timeline_offset,
    };
    let outcome = eqasm_sim::run_program(&cfg, &instructions, &opts)
        .map_err(|e| anyhow!("program rejected: {e}"))?;
    if let Some(path) = &manifest.trace {
        fs::write(path, outcome.trace.render())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if manifest.dump_state {
        let mut out = String::new();
        for (idx, amp) in outcome.backend.amplitudes().iter().enumerate() {
            out.push_str(&format!("{idx}\t{:.17e}\t{:.17e}\n", amp.re, amp.im));
        }
        print!("{out}");
    }
    match outcome.halt {
        None => Ok(ExitCode::SUCCESS),
        Some(err) => {
            eprintln!("halt: {err}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_dse(
    benchmark: &str,
    sweep_name: &str,
    seed: u64,
    size: Option<u32>,
    count_setup: bool,
    output: &Path,
) -> Result<ExitCode> {
    let kind = match benchmark {
        "rb" => BenchKind::RbLike,
        "parallel" => BenchKind::ParallelLike,
        "sequential" => BenchKind::SequentialLike,
        other => {
            return Err(anyhow!(
                "unknown benchmark '{other}' (rb|parallel|sequential)"
            ))
        }
    };
    if sweep_name != "default" {
        return Err(anyhow!("unknown sweep '{sweep_name}'"));
    }
    let mut params = BenchParams::defaults(kind, seed);
    if let Some(size) = size {
        params.size = size;
    }
    let circuit = eqasm_dse::generate_benchmark(kind, &params);
    let errors = circuit.validate();
    if !errors.is_empty() {
        return Err(anyhow!("generated circuit invalid: {errors:?}"));
    }
    let mode = if count_setup {
        SetupMode::CountedLru
    } else {
        SetupMode::Uncounted
    };
    let cells = eqasm_dse::default_sweep();
    let rows = eqasm_dse::sweep(&cells, &[(kind.name().to_string(), circuit)], mode)?;
    fs::write(output, eqasm_dse::render_csv(&rows))
        .with_context(|| format!("writing {}", output.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(config: &Option<PathBuf>) -> Result<ExitCode> {
    let cfg = load_config(config)?;
    println!("configuration ok (hash {})", cfg.hash_hex());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Asm {
            input,
            config,
            output,
        } => cmd_asm(input, config, output),
        Command::Disasm { input, config } => cmd_disasm(input, config),
        Command::Run(manifest) => cmd_run(manifest),
        Command::Dse {
            benchmark,
            sweep,
            seed,
            size,
            count_setup,
            output,
        } => cmd_dse(benchmark, sweep, *seed, *size, *count_setup, output),
        Command::Validate { config } => cmd_validate(config),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
