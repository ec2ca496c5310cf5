use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inc2ecb::cli::{bench, dump_dominators, run_stream, RunOptions};
use inc2ecb::{Engine, Error};

#[derive(Parser)]
#[command(version, about = "Incremental 2-edge-connected blocks of a directed graph")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a command stream.
    Run {
        /// Input file, stdin when omitted.
        input: Option<PathBuf>,
        /// Output file, stdout when omitted.
        output: Option<PathBuf>,
        /// Verify every answer against brute force (at most 200 vertices).
        #[arg(long)]
        oracle_check: bool,
        #[arg(long, default_value = "twoway")]
        engine: Engine,
        /// Append `# metric name value` lines.
        #[arg(long)]
        metrics: bool,
    },
    /// Random insertions: incremental engine against per-insertion recomputation.
    Bench {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 20000)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "twoway")]
        engine: Engine,
    },
    /// Print the dominator trees of every component after the stream's insertions.
    DumpDom {
        input: Option<PathBuf>,
        #[arg(long, default_value = "twoway")]
        engine: Engine,
    },
}

fn open(path: Option<PathBuf>) -> io::Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn execute(cmd: Cmd) -> Result<(), Error> {
    let io_err = |e: io::Error| Error::InvalidInput(e.to_string());
    match cmd {
        Cmd::Run { input, output, oracle_check, engine, metrics } => {
            let opts = RunOptions { oracle_check, engine, metrics };
            let input = open(input).map_err(io_err)?;
            let mut out: Box<dyn Write> = match output {
                Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
                None => Box::new(BufWriter::new(io::stdout())),
            };
            let result = run_stream(input, &mut out, opts);
            out.flush().map_err(io_err)?;
            result
        }
        Cmd::Bench { n, m, seed, engine } => {
            println!("{}", bench(n, m, seed, engine)?);
            Ok(())
        }
        Cmd::DumpDom { input, engine } => {
            print!("{}", dump_dominators(open(input).map_err(io_err)?, engine)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for oracle mismatches.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::OracleMismatch(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
