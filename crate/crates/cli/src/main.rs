mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crossint::hirschorn::Functional;
use crossint::oracle::SearchMode;
use crossint::setfam::InstanceParams;
use crossint::Error;

use report::{Format, Report};

const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_ASSERTION: u8 = 4;

/// Exact computations for cross-t-intersecting uniform set families.
#[derive(Parser)]
#[command(name = "crossint", version)]
struct Cli {
    /// Output format; scans default to csv, single instances to json.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    a: u32,
    #[arg(long)]
    b: u32,
    #[arg(long)]
    t: u32,
}

impl ParamArgs {
    fn strict(self) -> crossint::Result<InstanceParams> {
        InstanceParams::new(self.n, self.a, self.b, self.t)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Best Hirschorn pair and every (s, u, v) attaining it.
    Hirschorn {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "product")]
        functional: Functional,
    },
    /// Exact optimum over all cross-t-intersecting pairs, with witnesses.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "product")]
        functional: Functional,
        #[arg(long, default_value = "compressed")]
        mode: SearchMode,
    },
    /// M, n³·M, the entropy and concentration bounds, and the regime.
    Bounds {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// The (n, 2, n - 2, 1) series for n ≡ 8 (mod 12) up to --max-n.
    ScanProp4 {
        #[arg(long)]
        max_n: u32,
    },
    /// A_k/B_k against the best Hirschorn pair for k in --kmin..=--kmax.
    ScanAkbk {
        #[arg(long, default_value_t = 3)]
        kmin: u32,
        #[arg(long, default_value_t = 50)]
        kmax: u32,
        /// Also list the families and check them pair by pair (k <= 4).
        #[arg(long)]
        verify_explicit: bool,
    },
    /// Seeded compression trials plus the exhaustive prefix/complement scan.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> crossint::Result<Report> {
    match &cli.command {
        Command::Hirschorn { params, functional } => {
            let p = InstanceParams::new_counting(params.n, params.a, params.b, params.t)?;
            Ok(commands::hirschorn(p, *functional))
        }
        Command::Oracle { params, functional, mode } => {
            let caps = commands::caps_from_env(std::env::var("CROSSINT_CAPS").ok().as_deref())?;
            commands::oracle_cmd(params.strict()?, *functional, *mode, &caps)
        }
        Command::Bounds { params } => Ok(commands::bounds(params.strict()?)),
        Command::ScanProp4 { max_n } => commands::scan_prop4(*max_n),
        Command::ScanAkbk { kmin, kmax, verify_explicit } => commands::scan_akbk(*kmin, *kmax, *verify_explicit),
        Command::Verify { params, trials, seed } => commands::verify(params.strict()?, *trials, *seed),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) -> crossint::Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: usize) -> crossint::Result<()> {
    if threads > 1 {
        eprintln!("warning: built without the parallel feature, --threads {threads} ignored");
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) => EXIT_CAP,
        Error::Usage(_) | Error::InvalidParams(_) | Error::Parse(_) => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads(cli.threads).and_then(|_| run(&cli));
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = report.render(cli.output, &mut stdout).and_then(|_| stdout.flush()) {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }
    if !report.failures.is_empty() {
        for f in &report.failures {
            eprintln!("assertion failed: {f}");
        }
        return ExitCode::from(EXIT_ASSERTION);
    }
    ExitCode::SUCCESS
}
