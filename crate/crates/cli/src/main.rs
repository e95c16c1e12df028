//! `norlund` — sweeps and diagnostics for Voronoi summation and weighted
//! random-permutation statistics, emitting plot-ready CSV or JSON.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration,
//! 3 enumeration-guard violation (see `--override-guard`), 4 numeric
//! overflow.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use norlund_core::clt::PNorm;
use norlund_core::Error;

use commands::Ctx;
use output::Report;

#[derive(Parser)]
#[command(
    name = "norlund",
    version,
    about = "Voronoi summation diagnostics and weighted permutation statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every random choice; echoed into the output header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Raise the exact-enumeration guard to its hard ceiling.
    #[arg(long, global = true)]
    override_guard: bool,

    /// Emit only the two-column (x, y) plot series of the command.
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Weight coefficients p_0..p_n derived from the data d.
    Weights {
        /// Weight data: constant:THETA, random:LO,HI (seeded), or file:PATH.
        #[arg(long)]
        d: String,
        /// Largest index to emit.
        #[arg(long)]
        n: usize,
    },
    /// Remainder-inequality diagnostics over an n sweep.
    Voronoi {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Coefficient family: alternating, ones, log1p, alternating-harmonic, seeded:K.
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n_sweep: Vec<usize>,
        /// Tail horizon as a multiple of n (>= 8).
        #[arg(long, default_value_t = 8)]
        tail_mult: usize,
    },
    /// Summability trajectory S(g;n)/(n·p_n) over an n sweep.
    Tauber {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Coefficient family (see `voronoi --help`).
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n_sweep: Vec<usize>,
    },
    /// Mean of a multiplicative function with deviation and majorant diagnostics.
    Mean {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Multiplicative family: one, expi, signflip, eps:EPS, seeded:K.
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n_sweep: Vec<usize>,
        /// Large-deviation cutoff for the majorant.
        #[arg(long, default_value_t = 0.1)]
        u: f64,
    },
    /// Exact law of an additive function at a single n.
    Dist {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Size of the symmetric group.
        #[arg(long)]
        n: usize,
        /// Additive shape: fixedpoints, ones, flat, sparse, decay:ALPHA.
        #[arg(long)]
        hhat: String,
    },
    /// Corrected normal-approximation gap over an n sweep (ĥ normalized internally).
    Clt {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Additive shape (see `dist --help`).
        #[arg(long)]
        hhat: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n_sweep: Vec<usize>,
        /// Exponent for the L-functionals: a number >= 1 or "inf".
        #[arg(long, default_value = "4")]
        p: String,
    },
    /// Seeded cycle-type samples.
    Sample {
        /// Weight data (see `weights --help`).
        #[arg(long)]
        d: String,
        /// Size of the symmetric group.
        #[arg(long)]
        n: usize,
        /// Number of draws from one seeded stream.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Check suites over the standard families: voronoi, goncharov, inequalities, clt.
    Check {
        /// Suite name: voronoi, goncharov, inequalities, clt.
        #[arg(long)]
        suite: String,
        /// Cap on the suite's n values.
        #[arg(long, default_value_t = 512)]
        nmax: usize,
    },
}

fn sweep_string(ns: &[usize]) -> String {
    ns.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let ctx = Ctx {
        seed: cli.seed,
        override_guard: cli.override_guard,
    };
    let (mut report, mut config) = match &cli.command {
        Command::Weights { d, n } => (
            commands::weights(d, *n, &ctx)?,
            vec![
                ("command", "weights".to_string()),
                ("d", d.clone()),
                ("n", n.to_string()),
            ],
        ),
        Command::Voronoi {
            d,
            a,
            n_sweep,
            tail_mult,
        } => {
            if *tail_mult < 8 {
                return Err(Error::Argument(format!(
                    "tail multiplier {tail_mult} below the minimum 8"
                )));
            }
            (
                commands::voronoi(d, a, n_sweep, *tail_mult, &ctx)?,
                vec![
                    ("command", "voronoi".to_string()),
                    ("d", d.clone()),
                    ("a", a.clone()),
                    ("n-sweep", sweep_string(n_sweep)),
                    ("tail-mult", tail_mult.to_string()),
                ],
            )
        }
        Command::Tauber { d, a, n_sweep } => (
            commands::tauber(d, a, n_sweep, &ctx)?,
            vec![
                ("command", "tauber".to_string()),
                ("d", d.clone()),
                ("a", a.clone()),
                ("n-sweep", sweep_string(n_sweep)),
            ],
        ),
        Command::Mean { d, f, n_sweep, u } => (
            commands::mean(d, f, n_sweep, *u, &ctx)?,
            vec![
                ("command", "mean".to_string()),
                ("d", d.clone()),
                ("f", f.clone()),
                ("n-sweep", sweep_string(n_sweep)),
                ("u", u.to_string()),
            ],
        ),
        Command::Dist { d, n, hhat } => (
            commands::dist(d, *n, hhat, &ctx)?,
            vec![
                ("command", "dist".to_string()),
                ("d", d.clone()),
                ("n", n.to_string()),
                ("hhat", hhat.clone()),
            ],
        ),
        Command::Clt {
            d,
            hhat,
            n_sweep,
            p,
        } => {
            let p = PNorm::parse(p)?;
            (
                commands::clt_sweep(d, hhat, n_sweep, p, &ctx)?,
                vec![
                    ("command", "clt".to_string()),
                    ("d", d.clone()),
                    ("hhat", hhat.clone()),
                    ("n-sweep", sweep_string(n_sweep)),
                    ("p", p.to_string()),
                    ("normalized", "true".to_string()),
                ],
            )
        }
        Command::Sample { d, n, count } => (
            commands::sample(d, *n, *count, &ctx)?,
            vec![
                ("command", "sample".to_string()),
                ("d", d.clone()),
                ("n", n.to_string()),
                ("count", count.to_string()),
            ],
        ),
        Command::Check { suite, nmax } => (
            commands::check(suite, *nmax, &ctx)?,
            vec![
                ("command", "check".to_string()),
                ("suite", suite.clone()),
                ("nmax", nmax.to_string()),
            ],
        ),
    };
    config.push(("seed", cli.seed.to_string()));
    config.push((
        "format",
        match cli.format {
            Format::Csv => "csv".to_string(),
            Format::Json => "json".to_string(),
        },
    ));
    if cli.override_guard {
        config.push(("override-guard", "true".to_string()));
    }
    if cli.plot {
        config.push(("plot", "true".to_string()));
    }
    report.set_config(
        config
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    );
    Ok(report)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Guard { .. } => 3,
        Error::NonFinite(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("norlund: {err}");
            return ExitCode::from(exit_code_for(&err));
        }
    };
    let text = match cli.format {
        Format::Csv => report.to_csv(cli.plot),
        Format::Json => report.to_json(cli.plot),
    };
    let result = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| format!("cannot write '{}': {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("norlund: {msg}");
            ExitCode::from(1)
        }
    }
}
