use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use mhs_core::bounds::{applicable_bound, compute_m, compute_m_prime};
use mhs_core::exact_arith::format_decimal_upper;
use mhs_core::mhs::{
    mhs_eval_checked, mhs_star_eval_checked, mhs_upper_eval, parse_composition, Composition,
    CostPolicy, SumKind,
};
use mhs_core::primes::{compute_m_r, scan_bound, DEFAULT_SIEVE_LIMIT};
use mhs_core::tables::TableData;
use mhs_core::verify::{
    exact_witness, less_than_one_witness, star_witness, window_witness, Manifest, Outcome,
    TableChecks, TheoremOptions, VerificationReport, Verifier, DEFAULT_EXACT_LIMIT,
    DEFAULT_SAMPLES,
};
use mhs_core::{Error, PrimeSieve};

const SIEVE_ENV: &str = "MHS_SIEVE_LIMIT";

#[derive(Parser)]
#[command(name = "mhs", version, about = "Exact multiple harmonic sums and non-integrality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate H_n(s)
    Eval(EvalArgs),
    /// Evaluate H*_n(s)
    EvalStar(EvalArgs),
    /// Print a non-integrality witness as JSON
    Witness {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: String,
        #[arg(long)]
        star: bool,
    },
    /// Print m_r for a range of lengths
    Mr {
        #[arg(long, value_parser = parse_range)]
        r: RangeInclusive<u64>,
    },
    /// s_1 bounds M and M' for (s_1, tail) at n
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        tail: String,
    },
    /// Check the optimal-set, exclusion and s_1 bound tables
    VerifyTables {
        #[arg(long, value_parser = parse_range, default_value = "2..29")]
        r: RangeInclusive<u64>,
        #[arg(long)]
        skip_cover: bool,
        #[arg(long)]
        skip_s1: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check that H_n(s) is never an integer for the given lengths
    VerifyTheorem {
        #[arg(long, value_parser = parse_range, default_value = "1..6")]
        r: RangeInclusive<u64>,
        /// Lengths up to this are checked exhaustively, longer ones sampled
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check that H*_n(s) is never an integer over a box of parameters
    VerifyStar {
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        #[arg(long, default_value_t = 6)]
        weight_cap: u32,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    n: u64,
    /// Composition, e.g. "1,2" or "{1}^4,2"
    #[arg(long)]
    s: String,
    #[arg(long, conflicts_with = "upper")]
    exact: bool,
    /// Certified upper bound printed as a decimal
    #[arg(long)]
    upper: bool,
    #[arg(long, default_value_t = 12)]
    digits: usize,
    /// Largest n·r allowed for exact evaluation
    #[arg(long, default_value_t = CostPolicy::default().threshold)]
    max_cost: u64,
}

#[derive(Args)]
struct RunArgs {
    /// Where to write the JSON manifest
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall times in the manifest (makes it run-dependent)
    #[arg(long)]
    timings: bool,
    /// No heartbeat lines on stderr
    #[arg(long)]
    quiet: bool,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {text:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn composition(text: &str) -> anyhow::Result<Composition> {
    parse_composition(text).with_context(|| format!("in composition {text:?}"))
}

fn sieve_limit() -> anyhow::Result<u64> {
    match std::env::var(SIEVE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SIEVE_ENV} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_SIEVE_LIMIT),
    }
}

fn sieve() -> anyhow::Result<PrimeSieve> {
    Ok(PrimeSieve::new(sieve_limit()?))
}

fn to_usize(r: &RangeInclusive<u64>) -> RangeInclusive<usize> {
    *r.start() as usize..=*r.end() as usize
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Eval(args) => eval(args, SumKind::Ordinary),
        Command::EvalStar(args) => eval(args, SumKind::Star),
        Command::Witness { n, s, star } => witness(n, &composition(&s)?, star),
        Command::Mr { r } => {
            if *r.start() == 0 {
                bail!("r must be positive");
            }
            let needed = scan_bound(*r.end());
            let limit = sieve_limit()?.max(needed);
            let sieve = PrimeSieve::new(limit);
            let cells = r
                .map(|r| Ok(format!("{r}:{}", compute_m_r(r, &sieve)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            println!("{}", cells.join(" "));
            Ok(true)
        }
        Command::Bounds { n, tail } => bounds(n, &composition(&tail)?),
        Command::VerifyTables {
            r,
            skip_cover,
            skip_s1,
            run,
        } => {
            let checks = TableChecks {
                cover: !skip_cover,
                s1_bounds: !skip_s1,
                ..TableChecks::default()
            };
            suite(run, |v| v.verify_tables(to_usize(&r), checks))
        }
        Command::VerifyTheorem {
            r,
            exact_limit,
            samples,
            run,
        } => {
            let options = TheoremOptions {
                exact_limit,
                samples,
            };
            suite(run, |v| v.verify_theorem_main(to_usize(&r), options))
        }
        Command::VerifyStar {
            n_max,
            r_max,
            weight_cap,
            run,
        } => suite(run, |v| v.verify_theorem_star(n_max, r_max, weight_cap)),
    }
}

fn eval(args: EvalArgs, kind: SumKind) -> anyhow::Result<bool> {
    let s = composition(&args.s)?;
    if args.upper {
        if kind == SumKind::Star {
            bail!("--upper is only available for ordinary sums");
        }
        let upper = mhs_upper_eval(args.n, &s).to_rational();
        println!("≤ {}", format_decimal_upper(&upper, args.digits));
        return Ok(true);
    }
    let policy = CostPolicy {
        threshold: args.max_cost,
    };
    let value = match kind {
        SumKind::Ordinary => mhs_eval_checked(args.n, &s, &policy),
        SumKind::Star => mhs_star_eval_checked(args.n, &s, &policy),
    }
    .map_err(|e| match e {
        Error::CostExceeded { .. } => {
            anyhow::anyhow!("{e}; use --upper or raise --max-cost")
        }
        e => e.into(),
    })?;
    println!("{}", value.value);
    Ok(true)
}

fn witness(n: u64, s: &Composition, star: bool) -> anyhow::Result<bool> {
    let sieve = sieve()?;
    let policy = CostPolicy::default();
    let found = if star {
        if n < s.len() as u64 {
            bail!("need n >= r, got n = {n}, r = {}", s.len());
        }
        if n == 1 {
            None
        } else {
            Some(star_witness(n, s, &sieve, &policy)?)
        }
    } else {
        match window_witness(n, s, &sieve, &policy)? {
            Some(w) => Some(w),
            None => less_than_one_witness(n, s).or_else(|| {
                policy
                    .allows(n, s.len())
                    .then(|| exact_witness(n, s, SumKind::Ordinary))
                    .flatten()
            }),
        }
    };
    match found {
        Some(w) => {
            println!("{}", serde_json::to_string_pretty(&w)?);
            Ok(true)
        }
        None => {
            eprintln!("no non-integrality witness for n = {n}, s = {s}");
            Ok(false)
        }
    }
}

fn bounds(n: u64, tail: &Composition) -> anyhow::Result<bool> {
    let sieve = sieve()?;
    let tail = tail.exponents();
    let show = |label: &str, b: mhs_core::Result<mhs_core::bounds::S1Bound>| match b {
        Ok(b) => println!(
            "{label}: {} (variant {:?}, p = {}, nu_p(c_p) = {})",
            b.value,
            b.variant,
            b.p.map_or("-".into(), |p| p.to_string()),
            b.nu_cp.map_or("-".into(), |v| v.to_string()),
        ),
        Err(e) => println!("{label}: unavailable ({e})"),
    };
    show("M", compute_m(n, tail, &sieve));
    show("M'", compute_m_prime(n, tail, &sieve));
    let b = applicable_bound(n, tail, &sieve)?;
    println!("s_1 > {} gives a negative valuation", b.value);
    Ok(true)
}

fn suite(
    args: RunArgs,
    f: impl FnOnce(&Verifier) -> mhs_core::Result<Vec<VerificationReport>> + Send,
) -> anyhow::Result<bool> {
    let mut verifier = Verifier::new(sieve()?, TableData::builtin()?);
    verifier.timings = args.timings;
    if !args.quiet {
        verifier = verifier.with_progress(Arc::new(|msg: &str| eprintln!("[mhs] {msg}")));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build()?;
    let reports = pool.install(|| f(&verifier))?;
    let manifest = Manifest::new(verifier.tables().sha256.clone(), reports);
    if let Some(path) = &args.out {
        fs::write(path, manifest.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    for r in &manifest.reports {
        let status = match r.outcome {
            Outcome::Verified => "verified",
            Outcome::Failed => "FAILED",
            Outcome::Skipped => "skipped",
        };
        match &r.reason {
            Some(reason) if r.outcome != Outcome::Verified => {
                println!("{status:>8}  {}  ({reason})", r.claim)
            }
            _ => println!("{status:>8}  {}", r.claim),
        }
    }
    let s = manifest.summary;
    println!(
        "{} verified, {} failed, {} skipped",
        s.verified, s.failed, s.skipped
    );
    Ok(manifest.all_verified())
}
