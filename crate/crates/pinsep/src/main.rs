use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pinsep::algebra::DEFAULT_MAX_DIM;
use pinsep::cli::corpus::CORPUS;
use pinsep::cli::{render_text, run, selftest, Command, DiffOp, Leg, Options, Payload, Report};
use pinsep::error::Error;

#[derive(Parser, Debug)]
#[command(
    name = "pinsep",
    version,
    about = "Exact classification of finite purely inseparable extensions over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Frobenius chain, Galois, F-extension and purely inseparable verdicts for one leg.
    Classify(Common),
    /// The legs of A ⊂ B ⊂ C and the tower theorems.
    Tower(Common),
    /// Jacobson-Bourbaki roundtrips and special bases.
    Jb(Common),
    /// Diff^k by both routes, with optional operator dumps.
    Diff {
        #[command(flatten)]
        common: Common,
        /// Top order k.
        #[arg(long)]
        order: Option<usize>,
        /// Operators to dump.
        #[arg(long, value_enum)]
        op: Option<OpArg>,
    },
    /// Property suite over the bundled corpus or one file.
    Selftest {
        file: Option<PathBuf>,
        /// Only this property group.
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Input document, `-` for stdin.
    file: PathBuf,
    /// Inclusion `X:Y`.
    #[arg(long)]
    leg: Option<Leg>,
    /// Run past the size thresholds.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest algebra dimension to build.
    #[arg(long, env = "PINSEP_MAX_DIM", default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Basis,
    Delta,
    Ext,
    Res,
}

impl From<OpArg> for DiffOp {
    fn from(o: OpArg) -> Self {
        match o {
            OpArg::Basis => DiffOp::Basis,
            OpArg::Delta => DiffOp::Delta,
            OpArg::Ext => DiffOp::Ext,
            OpArg::Res => DiffOp::Res,
        }
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    let read = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    read.map_err(|e| Error::precondition(format!("cannot read {}: {e}", path.display())))
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", render_text(report)),
    }
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (cmd, common, order, op) = match cli.command {
        Sub::Classify(c) => (Command::Classify, c, None, None),
        Sub::Tower(c) => (Command::Tower, c, None, None),
        Sub::Jb(c) => (Command::Jb, c, None, None),
        Sub::Diff { common, order, op } => (Command::Diff, common, order, op.map(DiffOp::from)),
        Sub::Selftest { file, filter, output } => {
            let owned;
            let inputs: Vec<(&str, &str)> = match &file {
                Some(path) => {
                    owned = (path.display().to_string(), read_input(path)?);
                    vec![(owned.0.as_str(), owned.1.as_str())]
                }
                None => CORPUS.to_vec(),
            };
            let digest_input: String = inputs.iter().map(|(n, t)| format!("{n}\n{t}")).collect();
            let result = selftest(&inputs, filter.as_deref(), output.max_dim)?;
            let failed = result.failed;
            let mut report = Report::new("selftest", digest_input.as_bytes(), Payload::Selftest(result));
            if output.timing {
                report.timing_us = Some(start.elapsed().as_micros() as u64);
            }
            emit(&report, output.format);
            return Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    };
    let text = read_input(&common.file)?;
    let opts = Options {
        leg: common.leg,
        order,
        op,
        force: common.force,
        max_dim: common.output.max_dim,
    };
    let mut report = run(cmd, &text, &opts)?;
    if common.output.timing {
        report.timing_us = Some(start.elapsed().as_micros() as u64);
    }
    emit(&report, common.output.format);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
