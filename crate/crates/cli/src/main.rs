//! `sslce`: build, query, verify and benchmark sublinear-space LCE indexes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
//! 3 corrupt index file.

mod bench;
mod verify;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sslce::corpus::{self, Family};
use sslce::index::AnyIndex;
use sslce::{Mode, Text};

#[derive(Parser)]
#[command(
    name = "sslce",
    version,
    about = "Sublinear-space LCE indexes and sparse suffix sorting"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index and write it to a file.
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        tau: usize,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer LCE queries from an index file, one JSON object per line.
    Query {
        #[arg(long)]
        index: PathBuf,
        /// File of whitespace-separated 1-based `i j` pairs, one per line.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        pairs: Option<PathBuf>,
        /// Number of uniformly random pairs.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check an index and its building blocks against brute force.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        tau: usize,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one answer before checking it (tests the checker).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Build and query every (mode, tau) cell and print a CSV table.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        tau_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_mode, default_value = "rand,det,dcover")]
        modes: Vec<Mode>,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a generated text.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Either a file or a generated corpus.
#[derive(Args)]
struct InputArgs {
    #[arg(long, required_unless_present = "gen", conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Corpus family to generate instead of reading a file.
    #[arg(long, value_parser = parse_family, requires = "n")]
    gen: Option<Family>,
    /// Length of the generated text.
    #[arg(long, requires = "gen")]
    n: Option<usize>,
    #[arg(long, requires = "gen", default_value_t = 4)]
    sigma: u8,
    #[arg(long, requires = "gen", default_value_t = 1)]
    gen_seed: u64,
}

impl InputArgs {
    fn load(&self) -> Result<Text, Failure> {
        match (&self.input, self.gen) {
            (Some(path), _) => read_file(path).map(Text::new),
            (None, Some(f)) => {
                let n = self
                    .n
                    .ok_or_else(|| Failure::Usage("--gen needs --n".into()))?;
                check_sigma(self.sigma)?;
                Ok(corpus::generate(f, n, self.sigma, self.gen_seed))
            }
            (None, None) => Err(Failure::Usage("one of --input or --gen is required".into())),
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: sslce::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: sslce::Error| e.to_string())
}

fn check_sigma(sigma: u8) -> Result<(), Failure> {
    if sigma == 0 || sigma > 26 {
        return Err(Failure::Usage(format!("--sigma {sigma} outside 1..=26")));
    }
    Ok(())
}

/// Why a command stopped, and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Usage(String),
    Io(String),
    Corrupt(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Corrupt(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) | Failure::Io(m) | Failure::Corrupt(m) => f.write_str(m),
        }
    }
}

impl From<sslce::Error> for Failure {
    fn from(e: sslce::Error) -> Failure {
        match e {
            sslce::Error::Corrupt(_) => Failure::Corrupt(e.to_string()),
            sslce::Error::Io(_) => Failure::Io(e.to_string()),
            // a broken internal invariant is a failed check, not bad input
            sslce::Error::Contract(_) => Failure::Verify(e.to_string()),
            sslce::Error::OutOfRange { .. } | sslce::Error::Parameter(_) => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Elapsed milliseconds, rounded to microseconds.
pub fn millis(t0: Instant) -> f64 {
    (t0.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn io_err(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

#[derive(Serialize)]
struct BuildSummary {
    n: usize,
    tau: usize,
    mode: String,
    set_size: usize,
    build_ms: f64,
    peak_aux_words: usize,
}

#[derive(Serialize)]
struct QueryLine {
    i: usize,
    j: usize,
    lce: usize,
    comparisons: usize,
}

fn cmd_build(text: &Text, tau: usize, mode: Mode, seed: u64, out: &PathBuf) -> Result<(), Failure> {
    let t0 = Instant::now();
    let (idx, info) = AnyIndex::build(text, tau, mode, seed)?;
    let build_ms = millis(t0);
    write_file(out, &idx.to_bytes(text))?;
    let summary = BuildSummary {
        n: text.len(),
        tau,
        mode: mode.to_string(),
        set_size: info.set_size,
        build_ms,
        peak_aux_words: info.peak_aux_words,
    };
    println!(
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    );
    Ok(())
}

/// Parse a pairs file, reporting the first malformed line.
fn parse_pairs(src: &str, n: usize) -> Result<Vec<(usize, usize)>, Failure> {
    let mut out = Vec::new();
    for (k, line) in src.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let bad = |why: &str| Failure::Usage(format!("pairs line {}: {why}: {line:?}", k + 1));
        if fields.len() != 2 {
            return Err(bad("expected two positions"));
        }
        let i: usize = fields[0].parse().map_err(|_| bad("not a position"))?;
        let j: usize = fields[1].parse().map_err(|_| bad("not a position"))?;
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(bad(&format!("position outside 1..={n}")));
        }
        out.push((i, j));
    }
    Ok(out)
}

fn cmd_query(
    index: &PathBuf,
    pairs: Option<&PathBuf>,
    random: Option<usize>,
    seed: u64,
) -> Result<(), Failure> {
    let (text, idx) = AnyIndex::from_bytes(&read_file(index)?)?;
    let n = text.len();
    let pairs = match (pairs, random) {
        (Some(p), _) => {
            let raw = read_file(p)?;
            let src = String::from_utf8(raw)
                .map_err(|_| Failure::Usage(format!("{} is not UTF-8", p.display())))?;
            parse_pairs(&src, n)?
        }
        (None, Some(k)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n)))
                .collect()
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --pairs or --random is required".into(),
            ))
        }
    };
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    for (i, j) in pairs {
        let (lce, comparisons) = idx.lce_counted(&text, i, j)?;
        serde_json::to_writer(
            &mut w,
            &QueryLine {
                i,
                j,
                lce,
                comparisons,
            },
        )
        .map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(w).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn cmd_gen(
    family: Family,
    n: usize,
    sigma: u8,
    seed: u64,
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    check_sigma(sigma)?;
    let text = corpus::generate(family, n, sigma, seed);
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(io_err),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Build {
            input,
            tau,
            mode,
            seed,
            out,
        } => cmd_build(&input.load()?, tau, mode, seed, &out),
        Cmd::Query {
            index,
            pairs,
            random,
            seed,
        } => cmd_query(&index, pairs.as_ref(), random, seed),
        Cmd::Verify {
            input,
            tau,
            mode,
            trials,
            seed,
            inject_fault,
        } => {
            let text = input.load()?;
            let report = verify::run(&text, tau, mode, trials, seed, inject_fault)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            match report.counterexample {
                Some(c) => Err(Failure::Verify(c)),
                None => Ok(()),
            }
        }
        Cmd::Bench {
            input,
            tau_list,
            modes,
            queries,
            seed,
        } => {
            let text = input.load()?;
            let stdout = io::stdout();
            bench::run(&text, &tau_list, &modes, queries, seed, stdout.lock())
        }
        Cmd::Gen {
            family,
            n,
            sigma,
            seed,
            out,
        } => cmd_gen(family, n, sigma, seed, out.as_ref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sslce: {f}");
            ExitCode::from(f.code())
        }
    }
}
