use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdmera::dmera::{causal_cone, Circuit, DmeraSpec, Layout, Side, SubsystemSpec};
use qdmera::qsim::{hermitian_eigenvalues, von_neumann_entropy};
use qdmera_cli::{run, ExperimentConfig, ExperimentKind, HarnessError};

#[derive(Parser)]
#[command(name = "qdmera", about = "DMERA causal-cone entanglement experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Added to every seed index; overrides `seed_base` in the config.
    #[arg(long)]
    seed_base: Option<u64>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// VQSE on causal cones of random DMERA circuits.
    RandomDmera(RunArgs),
    /// VQE ground states of the long-range Ising chain, then VQSE.
    Lrtim(RunArgs),
    /// Shot-based VQSE under depolarizing and readout noise, with mitigation.
    NoisyLrtim(RunArgs),
    /// Causal-cone sizes against the closed forms and the reference table.
    ConeReport(RunArgs),
    /// Writes the causal-cone circuit of a random DMERA in text form.
    ExportCone {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value = "L")]
        side: Side,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced state of some wires of a circuit in text form.
    ConeRdm {
        circuit: PathBuf,
        /// Comma-separated wires to keep.
        #[arg(long, value_delimiter = ',')]
        wires: Vec<usize>,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn experiment(kind: ExperimentKind, args: &RunArgs) -> Result<(), HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            ExperimentConfig::parse(&text, kind)?
        }
        None => ExperimentConfig::defaults(kind),
    };
    if cfg.experiment != kind {
        return Err(HarnessError::Config(format!(
            "config is for `{}`, not `{}`",
            cfg.experiment.name(),
            kind.name()
        )));
    }
    if let Some(s) = args.seed_base {
        cfg.seed_base = s;
    }
    let out = run(&cfg, &args.out, args.workers)?;
    if let Some(report) = out.report {
        print!("{report}");
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn main_inner(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::RandomDmera(a) => experiment(ExperimentKind::RandomDmera, &a),
        Command::Lrtim(a) => experiment(ExperimentKind::LrtimSweep, &a),
        Command::NoisyLrtim(a) => experiment(ExperimentKind::NoisyLrtim, &a),
        Command::ConeReport(a) => experiment(ExperimentKind::ConeReport, &a),
        Command::ExportCone { n, side, m, seed, out } => {
            let spec = DmeraSpec::random(n, Layout::CALIBRATED, seed)?;
            let cone = causal_cone(&spec, SubsystemSpec::new(side, m)?)?;
            let mut text = format!(
                "# causal cone of {} outputs on side {} of a random {n}-qubit DMERA, seed {seed}\n# outputs on compact wires {:?}\n",
                m,
                side.label(),
                cone.output_map
            );
            text += &cone.circuit.to_text();
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| HarnessError::io(&p, e))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::ConeRdm { circuit, wires } => {
            let c = Circuit::from_text(&read(&circuit)?)?;
            let rho = c.simulate().partial_trace(&wires)?;
            println!("entropy {}", von_neumann_entropy(&rho));
            println!("spectrum {:?}", hermitian_eigenvalues(&rho));
            println!("diagonal {:?}", rho.diagonal());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
