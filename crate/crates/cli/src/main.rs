use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hysmooth_cli::report::DEFAULT_CODIM_LIMIT;
use hysmooth_cli::{check, run_corpus, CliError, IdealFile, Settings};
use hysmooth_core::smoothness::Mode;

/// Decide smoothness of an affine or projective variety over F_p.
#[derive(Debug, Parser)]
#[command(name = "hysmooth", version)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "corpus"])))]
struct Args {
    /// Ideal file to check.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Directory of `.ideal` files with `.expected` sidecars.
    #[arg(long, value_name = "DIR", conflicts_with = "trace")]
    corpus: Option<PathBuf>,
    /// Chart construction; overrides the file's `mode` line.
    #[arg(long)]
    mode: Option<Mode>,
    /// Largest codimension handed to the Jacobian criterion.
    #[arg(long = "codim-limit", value_name = "C", default_value_t = DEFAULT_CODIM_LIMIT)]
    codim_limit: u32,
    /// Worker threads.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    /// Scheduling seed; 0 is first-come first-served.
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Write the firing trace as JSON lines.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Cap on reductions per Gröbner basis computation.
    #[arg(long, value_name = "K")]
    budget: Option<u64>,
}

fn run(args: Args) -> Result<i32, CliError> {
    let settings = Settings {
        mode: args.mode,
        codim_limit: args.codim_limit,
        threads: args.threads as usize,
        seed: args.seed,
        budget: args.budget,
    };
    if let Some(dir) = &args.corpus {
        let report = run_corpus(dir, &settings)?;
        println!("{report}");
        return Ok(report.exit_code());
    }
    let path = args.input.expect("clap enforces one source");
    let file = IdealFile::read(&path)?;
    let mut sink = match &args.trace {
        Some(t) => Some(BufWriter::new(File::create(t).map_err(|e| CliError::io(t, e))?)),
        None => None,
    };
    let report = check(&file, &path.display().to_string(), &settings, sink.as_mut().map(|w| w as &mut dyn Write))?;
    if let (Some(w), Some(t)) = (sink.as_mut(), &args.trace) {
        w.flush().map_err(|e| CliError::io(t, e))?;
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json}");
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hysmooth: {e}");
            ExitCode::from(2)
        }
    }
}
