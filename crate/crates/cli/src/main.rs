use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "toda", version, about = "Discrete Toda lattice, its ultradiscrete limit and the box-ball automaton")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve an exact rational state `{"N", "a", "b"}`.
    Evolve {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Add the conserved quantities I_1..I_N of every step.
        #[arg(long)]
        invariants: bool,
        /// Reject states with a nonpositive entry.
        #[arg(long)]
        require_positive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Evolve an ultradiscrete state `{"N", "A", "B", "L"}` by the min-plus equations.
    UdEvolve {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Print the U rows instead of JSON.
        #[arg(long)]
        render: bool,
        /// Overrides the state's L; defaults to 1.
        #[arg(long = "L")]
        l: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the kicker/ball automaton on integer counts.
    Ca {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        render: bool,
        #[arg(long = "L")]
        l: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Casorati tau grid of spectral data `{"lambdas", "fs"}`.
    Tau {
        #[arg(long)]
        spectral: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        t0: i64,
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        t1: i64,
        #[arg(long, value_enum, default_value_t = Gauge::Hirota)]
        gauge: Gauge,
        /// Also recover the states a_n^t, b_n^t.
        #[arg(long)]
        states: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Tropical inverse scattering of an ultradiscrete state.
    Scatter {
        #[arg(long)]
        state: PathBuf,
        /// Overrides the state's L.
        #[arg(long = "L")]
        l: Option<String>,
        #[arg(long, value_enum, default_value_t = Coeffs::Index)]
        coeffs: Coeffs,
        #[arg(long, default_value = "1e-6")]
        q1: String,
        #[arg(long, default_value = "1e-7")]
        q2: String,
        /// Working precision in bits; chosen from the data when omitted.
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Report)]
        emit: Emit,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        t0: i64,
        /// Last U row; defaults to t0 + 2N + 3.
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<i64>,
        #[command(flatten)]
        out: Output,
    },
    /// Check the dual Grothendieck form of the degenerate tau functions.
    Grothendieck {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        gamma: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run the randomized and exhaustive invariant suites.
    Check {
        /// One of conservation, bilinear, ca, tropical, grothendieck, roundtrip; all when omitted.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long, default_value_t = 2018)]
        seed: u64,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long = "exhaustive-N", default_value_t = 4)]
        exhaustive_n: usize,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gauge {
    Hirota,
    Casorati,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Coeffs {
    Example4,
    Index,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    /// Envelope formulas of T_1..T_{N+1}.
    #[value(name = "T")]
    T,
    /// The U grid for t0..t1.
    #[value(name = "U")]
    U,
    /// Valuations, checks, envelopes and the U grid.
    Report,
    /// `{"Lambda", "F", "L"}`.
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0} check suite(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }

    fn context(self, what: &str) -> CliError {
        match self {
            CliError::Input(m) => CliError::Input(format!("{what}: {m}")),
            CliError::Compute(m) => CliError::Compute(format!("{what}: {m}")),
            other => other,
        }
    }
}

impl From<toda_core::Error> for CliError {
    fn from(e: toda_core::Error) -> Self {
        use toda_core::Error as E;
        match e {
            E::Parse(_) | E::Argument(_) => CliError::Input(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(out: &Output, text: &str) -> CliResult<()> {
    let res = if out.output.as_os_str() == "-" {
        io::stdout().lock().write_all(text.as_bytes())
    } else {
        fs::write(&out.output, text)
    };
    res.map_err(|e| CliError::Input(format!("{}: {e}", out.output.display())))
}

fn run(cli: Cli) -> CliResult<()> {
    let (text, out, failed) = match cli.command {
        Command::Evolve { state, steps, invariants, require_positive, out } => {
            (commands::evolve(&read_input(&state)?, steps, invariants, require_positive)?, out, 0)
        }
        Command::UdEvolve { state, steps, render, l, out } => {
            (commands::ud_evolve(&read_input(&state)?, steps, render, l.as_deref(), false)?, out, 0)
        }
        Command::Ca { state, steps, render, l, out } => {
            (commands::ud_evolve(&read_input(&state)?, steps, render, l.as_deref(), true)?, out, 0)
        }
        Command::Tau { spectral, t0, t1, gauge, states, out } => {
            let gauge = match gauge {
                Gauge::Hirota => toda_core::lax::TauGauge::Hirota,
                Gauge::Casorati => toda_core::lax::TauGauge::Casorati,
            };
            (commands::tau(&read_input(&spectral)?, t0, t1, gauge, states)?, out, 0)
        }
        Command::Scatter { state, l, coeffs, q1, q2, precision, emit, t0, t1, out } => {
            let coeffs = match coeffs {
                Coeffs::Example4 => toda_core::scatter::CoeffChoice::Example4,
                Coeffs::Index => toda_core::scatter::CoeffChoice::Index,
            };
            let args = commands::ScatterArgs { l, coeffs, q1, q2, precision, emit, t0, t1 };
            (commands::scatter(&read_input(&state)?, &args)?, out, 0)
        }
        Command::Grothendieck { n, gamma, out } => (commands::grothendieck(n, &gamma)?, out, 0),
        Command::Check { suite, seed, n, exhaustive_n, cases, out } => {
            let (text, failed) = commands::check(&suite, seed, n, exhaustive_n, cases)?;
            (text, out, failed)
        }
    };
    write_output(&out, &text)?;
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
