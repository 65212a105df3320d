mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quantum_strata::sampling::DEFAULT_SEED;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "qstrata", version, about = "Geometry of quantum states: classification, decomposition, tensors and flows")]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for any randomized input (random start vectors).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Reporting tolerance (structure-constant listing and table comparison).
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// JSON input file; `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Inline JSON input.
    #[arg(long)]
    json: Option<String>,
}

impl Input {
    fn read(&self) -> Result<String, CliError> {
        if let Some(s) = &self.json {
            return Ok(s.clone());
        }
        let path = self.input.as_ref().expect("clap enforces one input source");
        if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecomposeMode {
    Spectral,
    Bloch,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Lambda,
    #[value(name = "R", alias = "r")]
    R,
    Distributions,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FlowMode {
    Hamiltonian,
    GradientEigensolve,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify a density state and report its stratum.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Write a state as a convex combination of pure states.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "spectral")]
        mode: DecomposeMode,
        /// Line direction in Bloch coordinates (bloch mode).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
    },
    /// Evaluate Lambda, R or the distributions at a point of u*.
    Tensors {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// List nonzero structure constants as CSV.
    Constants {
        #[arg(long)]
        n: usize,
    },
    /// Run the Hamiltonian flow or the gradient eigensolver.
    Flow {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: FlowMode,
        /// Integrator step (hamiltonian) or absolute gradient step (eigensolve).
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = quantum_strata::kaehler::DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Time horizon of the Hamiltonian flow.
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        /// Search for the smallest eigenvalue instead of the largest.
        #[arg(long)]
        descent: bool,
        /// Write the sample or convergence trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Classify a cubic grid of qubit Bloch coordinates over [-0.6, 0.6]^3.
    Ballgrid {
        #[arg(long, default_value_t = 41)]
        resolution: usize,
    },
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = match &cli.command {
        Command::Classify { input } => commands::classify(&input.read()?)?,
        Command::Decompose { input, mode, direction } => {
            let dir = match direction.as_deref() {
                None => None,
                Some(&[x, y, z]) => Some([x, y, z]),
                Some(d) => return Err(CliError::Usage(format!("--direction needs 3 components, got {}", d.len()))),
            };
            match mode {
                DecomposeMode::Spectral => commands::decompose_spectral(&input.read()?)?,
                DecomposeMode::Bloch => commands::decompose_bloch(&input.read()?, dir)?,
            }
        }
        Command::Tensors { input, which } => {
            let text = input.read()?;
            match which {
                Which::Lambda => commands::tensor(&text, quantum_strata::dual_tensors::TensorKind::Lambda)?,
                Which::R => commands::tensor(&text, quantum_strata::dual_tensors::TensorKind::RiemannJordan)?,
                Which::Distributions => commands::distributions(&text)?,
            }
        }
        Command::Constants { n } => commands::constants(*n, cli.tol)?,
        Command::Flow { input, mode, step, max_iter, t_end, descent, trace } => {
            let text = input.read()?;
            let (result, trace_csv) = match mode {
                FlowMode::Hamiltonian => commands::flow_hamiltonian(&text, *step, *t_end, cli.seed)?,
                FlowMode::GradientEigensolve => commands::flow_eigensolve(&text, *step, *max_iter, *descent, cli.seed)?,
            };
            if let Some(p) = trace {
                write_out(Some(p), &trace_csv)?;
            }
            result
        }
        Command::Ballgrid { resolution } => commands::ballgrid(*resolution)?,
    };
    write_out(cli.output.as_ref(), &out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
