use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfrep::cf::Fraction;
use cfrep::decompose::DecomposeConfig;
use cfrep::experiments::{cmd_cost_survey, cmd_decompose, cmd_expand, cmd_zaremba, ConfigFile, Sampling, ZarembaOutput};
use cfrep::zaremba::{Congruence, QuotientBound, ScanOptions, TailConvention};
use cfrep::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "cfrep", version, about = "Continued fractions with bounded partial quotients")]
struct Cli {
    /// File of `key=value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical expansion, cost and continuant matrix of b/q in [0, 1).
    Expand {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
    /// Exceptional denominators q <= N for the bound A.
    Zaremba {
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long = "A")]
        a: Option<u64>,
        /// Restrict witnesses to b ≡ beta (mod d).
        #[arg(long, value_name = "d:beta")]
        congruence: Option<Congruence>,
        #[arg(long)]
        lenient_tail: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Per-q CSV; the density summary goes to <out>.density.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signed representation of a rational by bounded-quotient fractions.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
        #[command(flatten)]
        params: SplitParams,
        #[arg(long)]
        trace: bool,
    },
    /// Decompose every sampled b/q in a range and record costs.
    CostSurvey {
        #[arg(long)]
        q_min: Option<u64>,
        /// Upper end of the range; `--N` is accepted as an alias.
        #[arg(long, alias = "N")]
        q_max: Option<u64>,
        #[command(flatten)]
        params: SplitParams,
        /// Numerators drawn per q at or above --full-below.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        full_below: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SplitParams {
    #[arg(long = "A")]
    a: Option<u64>,
    /// Prime window exponent, as `n/d` or a decimal.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    /// Denominators up to this are emitted without splitting.
    #[arg(long)]
    q0: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scan cap per witness search.
    #[arg(long)]
    budget: Option<u64>,
}

fn parse_delta(s: &str) -> Result<Fraction> {
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let den = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Parse(s.to_string()))?;
        let num: i64 = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
        return Fraction::new(num, den);
    }
    s.parse()
}

impl SplitParams {
    fn resolve(&self, file: &ConfigFile) -> Result<DecomposeConfig> {
        let mut cfg = DecomposeConfig::default();
        let a = file.resolve(self.a, "A", cfg.bound.get())?;
        cfg.bound = QuotientBound::new(a)?;
        cfg.max_bound = cfg.max_bound.max(a);
        if let Some(d) = file.resolve_opt(self.delta.clone(), "delta")? {
            cfg.delta = parse_delta(&d)?;
        }
        cfg.r = file.resolve(self.r, "r", cfg.r)?;
        cfg.base_threshold = file.resolve(self.q0, "q0", cfg.base_threshold)?;
        cfg.seed = file.resolve(self.seed, "seed", cfg.seed)?;
        cfg.oracle_budget = file.resolve(self.budget, "budget", cfg.oracle_budget)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Expand { fraction } => cmd_expand(&fraction, out),
        Command::Zaremba {
            n,
            a,
            congruence,
            lenient_tail,
            workers,
            out: path,
        } => {
            let n = file
                .resolve_opt(n, "N")?
                .ok_or_else(|| Error::Config("--N is required".into()))?;
            let bound = QuotientBound::new(file.resolve(a, "A", 5)?)?;
            let congruence = file.resolve_opt(congruence, "congruence")?;
            let tail = if file.switch(lenient_tail, "lenient-tail")? {
                TailConvention::Lenient
            } else {
                TailConvention::Strict
            };
            let opts = ScanOptions {
                tail,
                workers: file.resolve(workers, "workers", 1)?,
            };
            let output = ZarembaOutput {
                path: file.resolve_opt(path, "out")?,
            };
            cmd_zaremba(n, bound, congruence, &opts, &output, out).map(drop)
        }
        Command::Decompose { fraction, params, trace } => {
            let cfg = params.resolve(&file)?;
            cmd_decompose(&fraction, &cfg, file.switch(trace, "trace")?, out)
        }
        Command::CostSurvey {
            q_min,
            q_max,
            params,
            samples,
            full_below,
            workers,
            out: path,
        } => {
            let cfg = params.resolve(&file)?;
            let defaults = Sampling::default();
            let sampling = Sampling {
                full_below: file.resolve(full_below, "full-below", defaults.full_below)?,
                per_q: file.resolve(samples, "samples", defaults.per_q)?,
                seed: cfg.seed,
            };
            let q_min = file.resolve(q_min, "q-min", 2)?;
            let q_max = match file.resolve_opt(q_max, "q-max")? {
                Some(v) => v,
                None => file
                    .resolve_opt(None, "N")?
                    .ok_or_else(|| Error::Config("--q-max is required".into()))?,
            };
            let workers = file.resolve(workers, "workers", 1)?;
            let path = file.resolve_opt::<PathBuf>(path, "out")?;
            cmd_cost_survey(q_min, q_max, &cfg, sampling, workers, path.as_deref(), out).map(drop)
        }
    }
}

/// 2 for failures of the computation itself, 1 for bad input.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Decomposition(_)
        | Error::Verification(_)
        | Error::WindowExhausted { .. }
        | Error::Overflow(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Error::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
