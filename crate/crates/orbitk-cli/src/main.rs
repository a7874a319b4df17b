//! Command-line driver for orbit, loop-catalog, sweep, and verification runs.
//!
//! Exit codes: 0 on success (including verifications whose violations match
//! the expected set), 1 on usage errors, 2 on resource errors (sieve budget),
//! 3 when a verification finds violations outside the expected set.

mod output;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitk::{
    analyze, enumerate_loops, find_prime_ap, least_k_for_periods, orbit_prefix, seed_bound,
    sweep_loop_counts, verify_even_descent, verify_loop_prime_bound, verify_odd_lemma,
    verify_primorial_lemma, BoundMode, FactorTable, LoopBoundKind, PrimeAP, VerificationReport,
    Violation, DEFAULT_DESCENT_STEP_CAP, DEFAULT_MAX_STEPS,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_UNEXPECTED_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "orbitk",
    version,
    about = "Orbits, loop catalogs, and sweeps for the prime-shift / largest-prime-factor map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweeps (defaults to ORBITK_THREADS, then all cores)
    #[arg(long, global = true, env = "ORBITK_THREADS")]
    threads: Option<usize>,

    /// Override the automatic sieve size
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,

    /// Seed-bound mode for loop enumeration
    #[arg(long, global = true, default_value = "safe", value_parser = parse_mode)]
    mode: BoundMode,

    /// Write results to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format for data commands
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Defensive iteration cap for orbit analysis
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print one orbit with its loop highlighted
    Orbit {
        /// Start value (at least 2)
        #[arg(long)]
        x0: u64,
        /// Shift added to primes (at least 1)
        #[arg(long)]
        k: u64,
        /// How many terms to print (default: every distinct value)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write the complete loop catalog for one k
    Loops {
        #[arg(long)]
        k: u64,
    },
    /// Loop counts for every k in a range (CSV: k,num_loops)
    SweepLoops {
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        /// Upper end of the range (default 200, or 5000 with --long)
        #[arg(long)]
        k_max: Option<u64>,
        /// Run the full k=1..5000 sweep by default
        #[arg(long)]
        long: bool,
    },
    /// Least k attaining each period (CSV: period,least_k)
    SweepPeriods {
        /// Largest period to search for (default 20, or 50 with --long)
        #[arg(long)]
        l_max: Option<usize>,
        /// Largest k to scan (default 300, or 5000 with --long)
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long)]
        long: bool,
    },
    /// Check a claim over a parameter grid; exit 0 iff violations match the
    /// built-in expected set
    Verify {
        #[arg(value_enum)]
        claim: ClaimArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Search for a prime arithmetic progression of a given length
    FindAp {
        #[arg(long)]
        length: u32,
        #[arg(long, default_value_t = 10_000)]
        difference_limit: u64,
        #[arg(long, default_value_t = 100_000)]
        first_limit: u64,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    k_min: Option<u64>,
    #[arg(long)]
    k_max: Option<u64>,
    /// Largest prime tested (odd / even grids)
    #[arg(long, default_value_t = 100_000)]
    p_max: u64,
    /// Explicit progression(s) FIRST,DIFFERENCE,LENGTH for the primorial claim
    #[arg(long, value_name = "FIRST,DIFF,LEN")]
    ap: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClaimArg {
    Primorial,
    Odd,
    Even,
    LoopBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_mode(s: &str) -> Result<BoundMode, String> {
    BoundMode::from_str(s).map_err(|e| e.to_string())
}

enum CliError {
    Usage(String),
    Lib(orbitk::Error),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) if e.is_resource() => EXIT_RESOURCE,
            CliError::Lib(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_RESOURCE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<orbitk::Error> for CliError {
    fn from(e: orbitk::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let pool = build_pool(cli.threads)?;
    pool.install(|| dispatch(&cli))
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))
}

/// Build the factor table: the automatic size comes from the command's
/// parameters, `--sieve-limit` overrides it but may not undercut the bound
/// the command needs for completeness.
fn build_table(required: u64, comfortable: u64, sieve_limit: Option<u64>) -> Result<FactorTable, CliError> {
    let limit = match sieve_limit {
        Some(l) if l < required => {
            return Err(CliError::Lib(orbitk::Error::TableTooSmall {
                required,
                limit: l,
            }))
        }
        Some(l) => l,
        None => comfortable.max(required).max(2),
    };
    Ok(FactorTable::build(limit)?)
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Orbit { x0, k, n } => cmd_orbit(cli, *x0, *k, *n),
        Command::Loops { k } => cmd_loops(cli, *k),
        Command::SweepLoops { k_min, k_max, long } => {
            let k_max = k_max.unwrap_or(if *long { 5_000 } else { 200 });
            cmd_sweep_loops(cli, *k_min, k_max)
        }
        Command::SweepPeriods { l_max, k_max, long } => {
            let l_max = l_max.unwrap_or(if *long { 50 } else { 20 });
            let k_max = k_max.unwrap_or(if *long { 5_000 } else { 300 });
            cmd_sweep_periods(cli, l_max, k_max)
        }
        Command::Verify { claim, grid } => cmd_verify(cli, *claim, grid),
        Command::FindAp {
            length,
            difference_limit,
            first_limit,
        } => cmd_find_ap(cli, *length, *difference_limit, *first_limit),
    }
}

fn emit(cli: &Cli, content: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_orbit(cli: &Cli, x0: u64, k: u64, n: Option<usize>) -> Result<u8, CliError> {
    if x0 < 2 {
        return Err(CliError::Usage("--x0 must be at least 2".into()));
    }
    if k < 1 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let table = build_table(2, 1_000_000, cli.sieve_limit)?;
    let record = analyze(x0, k, &table, cli.max_steps)?;
    let n = n.unwrap_or(record.stopping_time).max(1);
    let terms = orbit_prefix(x0, k, &table, n)?;
    let rendered = match cli.format {
        Format::Csv => output::orbit_text(&record, &terms),
        Format::Json => output::orbit_json(&record, &terms),
    };
    emit(cli, &rendered)?;
    Ok(EXIT_OK)
}

fn cmd_loops(cli: &Cli, k: u64) -> Result<u8, CliError> {
    if k < 1 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let required = seed_bound(k, cli.mode);
    let table = build_table(required, required.max(100_000), cli.sieve_limit)?;
    let catalog = enumerate_loops(k, &table, cli.mode)?;
    let rendered = match cli.format {
        Format::Csv => output::loops_csv(&catalog),
        Format::Json => output::loops_json(&catalog),
    };
    emit(cli, &rendered)?;
    Ok(EXIT_OK)
}

fn cmd_sweep_loops(cli: &Cli, k_min: u64, k_max: u64) -> Result<u8, CliError> {
    if k_min < 1 || k_max < k_min {
        return Err(CliError::Usage(format!(
            "invalid k range [{k_min}, {k_max}]"
        )));
    }
    let required = seed_bound(k_max, cli.mode);
    let table = build_table(required, required.max(100_000), cli.sieve_limit)?;
    let rows = sweep_loop_counts(k_min, k_max, &table, cli.mode)?;
    let rendered = match cli.format {
        Format::Csv => output::sweep_loops_csv(&rows),
        Format::Json => output::sweep_loops_json(&rows),
    };
    emit(cli, &rendered)?;
    Ok(EXIT_OK)
}

fn cmd_sweep_periods(cli: &Cli, l_max: usize, k_max: u64) -> Result<u8, CliError> {
    if l_max < 2 {
        return Err(CliError::Usage("--l-max must be at least 2".into()));
    }
    if k_max < 1 {
        return Err(CliError::Usage("--k-max must be at least 1".into()));
    }
    let required = seed_bound(k_max, cli.mode);
    let table = build_table(required, required.max(100_000), cli.sieve_limit)?;
    let rows = least_k_for_periods(l_max, k_max, &table, cli.mode)?;
    let rendered = match cli.format {
        Format::Csv => output::sweep_periods_csv(&rows),
        Format::Json => output::sweep_periods_json(&rows),
    };
    emit(cli, &rendered)?;
    Ok(EXIT_OK)
}

fn cmd_find_ap(
    cli: &Cli,
    length: u32,
    difference_limit: u64,
    first_limit: u64,
) -> Result<u8, CliError> {
    if length < 2 {
        return Err(CliError::Usage("--length must be at least 2".into()));
    }
    let table = build_table(first_limit.max(2), first_limit.max(1_000_000), cli.sieve_limit)?;
    let ap = find_prime_ap(length, difference_limit, first_limit, &table)?;
    let rendered = match cli.format {
        Format::Csv => output::ap_csv(ap.as_ref()),
        Format::Json => output::ap_json(ap.as_ref()),
    };
    emit(cli, &rendered)?;
    Ok(EXIT_OK)
}

fn parse_ap_flag(s: &str, table: &FactorTable) -> Result<PrimeAP, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--ap expects FIRST,DIFFERENCE,LENGTH, got '{s}'"
        )));
    }
    let first: u64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid first term in --ap '{s}'")))?;
    let difference: u64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid difference in --ap '{s}'")))?;
    let length: u32 = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid length in --ap '{s}'")))?;
    PrimeAP::new(first, difference, length, Some(table))
        .map_err(|e| CliError::Usage(format!("--ap '{s}': {e}")))
}

fn cmd_verify(cli: &Cli, claim: ClaimArg, grid: &GridArgs) -> Result<u8, CliError> {
    let (report, expected) = match claim {
        ClaimArg::Primorial => {
            let first_limit = 100_000u64;
            let table = build_table(first_limit, 1_000_000, cli.sieve_limit)?;
            let aps = if grid.ap.is_empty() {
                // Default grid: the smallest progression of each length 3..=10.
                let mut found = Vec::new();
                for length in 3..=10u32 {
                    if let Some(ap) = find_prime_ap(length, 10_000, first_limit, &table)? {
                        found.push(ap);
                    }
                }
                found
            } else {
                grid.ap
                    .iter()
                    .map(|s| parse_ap_flag(s, &table))
                    .collect::<Result<Vec<_>, _>>()?
            };
            (verify_primorial_lemma(&aps), Vec::new())
        }
        ClaimArg::Odd => {
            let k_min = grid.k_min.unwrap_or(3);
            let k_max = grid.k_max.unwrap_or(99);
            let ks: Vec<u64> = (k_min..=k_max).filter(|k| k % 2 == 1 && *k >= 3).collect();
            if ks.is_empty() {
                return Err(CliError::Usage(format!(
                    "no odd k >= 3 in [{k_min}, {k_max}]"
                )));
            }
            let comfortable = grid.p_max.saturating_add(k_max).saturating_add(1);
            let table = build_table(grid.p_max, comfortable, cli.sieve_limit)?;
            (verify_odd_lemma(&ks, grid.p_max, &table)?, Vec::new())
        }
        ClaimArg::Even => {
            let k_min = grid.k_min.unwrap_or(2);
            let k_max = grid.k_max.unwrap_or(200);
            let ks: Vec<u64> = (k_min..=k_max).filter(|k| k % 2 == 0 && *k >= 2).collect();
            if ks.is_empty() {
                return Err(CliError::Usage(format!(
                    "no even k >= 2 in [{k_min}, {k_max}]"
                )));
            }
            let comfortable = grid
                .p_max
                .saturating_add(k_max.saturating_mul(k_max))
                .min(grid.p_max.saturating_add(50_000_000));
            let table = build_table(grid.p_max, comfortable, cli.sieve_limit)?;
            let report = verify_even_descent(&ks, grid.p_max, &table, DEFAULT_DESCENT_STEP_CAP)?;
            let expected = expected_even_violations(&ks, grid.p_max);
            (report, expected)
        }
        ClaimArg::LoopBound => {
            let k_min = grid.k_min.unwrap_or(1);
            let k_max = grid.k_max.unwrap_or(200);
            if k_min < 1 || k_max < k_min {
                return Err(CliError::Usage(format!(
                    "invalid k range [{k_min}, {k_max}]"
                )));
            }
            let required = seed_bound(k_max, BoundMode::Safe);
            let table = build_table(required, required.max(100_000), cli.sieve_limit)?;
            let report = verify_loop_prime_bound(k_min, k_max, &table)?;
            let expected = expected_loop_bound_violations(k_min, k_max);
            (report, expected)
        }
    };

    let (unexpected, missing) = diff_violations(&report, &expected);
    let rendered = match cli.format {
        Format::Csv => output::report_text(&report, &unexpected, &missing),
        Format::Json => output::report_json(&report, &unexpected, &missing),
    };
    emit(cli, &rendered)?;
    if unexpected.is_empty() && missing.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "error: {} violations differ from the expected set ({} unexpected, {} missing)",
            report.claim,
            unexpected.len(),
            missing.len()
        );
        Ok(EXIT_UNEXPECTED_VIOLATION)
    }
}

/// The single known even-descent counterexample: k=2, p=3 (the cycle
/// 3, 5, 7, 9 never reaches a prime below 3).
fn expected_even_violations(ks: &[u64], p_max: u64) -> Vec<Violation> {
    if ks.contains(&2) && p_max >= 3 {
        vec![Violation::EvenDescent { k: 2, p: 3 }]
    } else {
        Vec::new()
    }
}

/// Known small-k loops whose smallest prime entry exceeds a bound. Verified
/// against the exhaustive oracle; no others exist for k up to 200.
fn expected_loop_bound_violations(k_min: u64, k_max: u64) -> Vec<Violation> {
    let all = [
        Violation::LoopPrimeBound {
            k: 1,
            elements: vec![2, 3, 4],
            min_prime: 2,
            bound: LoopBoundKind::HalfKSquared,
        },
        Violation::LoopPrimeBound {
            k: 1,
            elements: vec![2, 3, 4],
            min_prime: 2,
            bound: LoopBoundKind::HalfKRootK,
        },
        Violation::LoopPrimeBound {
            k: 2,
            elements: vec![2, 4],
            min_prime: 2,
            bound: LoopBoundKind::HalfKRootK,
        },
        Violation::LoopPrimeBound {
            k: 2,
            elements: vec![3, 5, 7, 9],
            min_prime: 3,
            bound: LoopBoundKind::HalfKSquared,
        },
        Violation::LoopPrimeBound {
            k: 2,
            elements: vec![3, 5, 7, 9],
            min_prime: 3,
            bound: LoopBoundKind::HalfKRootK,
        },
        Violation::LoopPrimeBound {
            k: 3,
            elements: vec![3, 6],
            min_prime: 3,
            bound: LoopBoundKind::HalfKRootK,
        },
    ];
    all.into_iter()
        .filter(|v| match v {
            Violation::LoopPrimeBound { k, .. } => (k_min..=k_max).contains(k),
            _ => false,
        })
        .collect()
}

fn diff_violations(
    report: &VerificationReport,
    expected: &[Violation],
) -> (Vec<String>, Vec<String>) {
    let unexpected = report
        .violations
        .iter()
        .filter(|v| !expected.contains(v))
        .map(|v| v.to_string())
        .collect();
    let missing = expected
        .iter()
        .filter(|v| !report.violations.contains(v))
        .map(|v| v.to_string())
        .collect();
    (unexpected, missing)
}
