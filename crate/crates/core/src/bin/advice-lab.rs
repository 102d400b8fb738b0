use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use advice_lab::harness::{
    cmd_box, cmd_compress, cmd_grover, cmd_hellman, cmd_verify, with_pool, BoxCmdConfig, CompressConfig, Format,
    GroverConfig, HarnessError, HellmanConfig, Report, SchemeChoice, Suite, VerifyConfig,
};
use advice_lab::hybrid::BoxAlgorithm;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "advice-lab", version, about = "Query-with-advice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Parity,
    Grover,
    Idle,
    Sweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Hellman,
    Grover,
    Lookup,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Swapping,
    Tv,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Grover inversion of a random point.
    Grover {
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Defaults to ⌊(π/4)·√N⌋.
        #[arg(long)]
        iterations: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Box problem with the parity advice scheme.
    Box {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = AlgArg::Parity)]
        alg: AlgArg,
        /// Grover iterations for `--alg grover`.
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Hellman table sweep over strides.
    Hellman {
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64])]
        s: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Encode/decode round trips of a random permutation.
    Compress {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Hellman)]
        scheme: SchemeArg,
        /// Stride for `--scheme hellman`.
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value_t = 0.9)]
        delta: f64,
        #[arg(long, default_value_t = 0.001)]
        c: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Random instances of the swapping and TV inequalities.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 16])]
        n: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn emit<R: Serialize>(report: Report<R>, common: &Common) -> Result<bool, HarnessError> {
    let format = match common.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match &common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| HarnessError::Output(format!("{}: {e}", path.display())))?;
            report.write(io::BufWriter::new(file), format)?;
        }
        None => report.write(io::stdout().lock(), format)?,
    }
    let mut err = io::stderr().lock();
    for line in &report.summary {
        let _ = writeln!(err, "{line}");
    }
    for line in &report.violations {
        let _ = writeln!(err, "violation: {line}");
    }
    Ok(report.violations.is_empty())
}

fn dispatch(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Grover { n, iterations, common } => {
            let config = GroverConfig {
                n,
                trials: common.trials,
                seed: common.seed,
                iterations,
            };
            emit(with_pool(|| cmd_grover(&config))??, &common)
        }
        Command::Box {
            n,
            m,
            alg,
            iterations,
            common,
        } => {
            let algorithm = match alg {
                AlgArg::Parity => BoxAlgorithm::Parity,
                AlgArg::Grover => BoxAlgorithm::Grover { iterations },
                AlgArg::Idle => BoxAlgorithm::Idle,
                AlgArg::Sweep => BoxAlgorithm::Sweep,
            };
            let config = BoxCmdConfig {
                n,
                m,
                algorithm,
                trials: common.trials,
                seed: common.seed,
            };
            emit(with_pool(|| cmd_box(&config))??, &common)
        }
        Command::Hellman { n, s, common } => {
            let config = HellmanConfig {
                n,
                s,
                trials: common.trials,
                seed: common.seed,
            };
            emit(with_pool(|| cmd_hellman(&config))??, &common)
        }
        Command::Compress {
            n,
            scheme,
            s,
            iterations,
            delta,
            c,
            common,
        } => {
            let scheme = match scheme {
                SchemeArg::Hellman => SchemeChoice::Hellman { s },
                SchemeArg::Grover => SchemeChoice::Grover { iterations },
                SchemeArg::Lookup => SchemeChoice::Lookup,
            };
            let config = CompressConfig {
                n,
                scheme,
                delta,
                c,
                trials: common.trials,
                seed: common.seed,
            };
            emit(with_pool(|| cmd_compress(&config))??, &common)
        }
        Command::Verify { suite, n, common } => {
            let suite = match suite {
                SuiteArg::Swapping => Suite::Swapping,
                SuiteArg::Tv => Suite::Tv,
                SuiteArg::All => Suite::All,
            };
            let config = VerifyConfig {
                suite,
                sizes: n,
                trials: common.trials,
                seed: common.seed,
            };
            emit(with_pool(|| cmd_verify(&config))??, &common)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
