//! Command-line driver. [`run`] parses arguments, runs the requested audit
//! and writes one JSON record per task.
//!
//! Exit codes: 0 when every expectation holds, 2 when a theorem violation
//! (or a failed re-validation) is found, 1 for usage and configuration
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomp::{
    audit_theorems, reproduce_product_witness, AuditConfig, AuditKind, DecompError,
    LambdaScope, SearchOptions, SearchReport, TheoremViolation,
};
use crate::field::{FieldContext, DEFAULT_PRIME_BOUND};
use crate::report::{ReportRecord, ReportWriter};
use crate::set::ElementSet;
use crate::suites::{self, IdentityCounts, SuiteSummary, UnityRanges};

#[derive(Debug, Parser)]
#[command(name = "sgdecomp", version, about = "Decomposition searches and audits for shifted multiplicative subgroups of prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep a theorem over a prime range and check its prediction.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Record product decompositions without asserting anything.
    Census {
        #[command(subcommand)]
        which: CensusCmd,
    },
    /// Rediscover the two known decompositions with lambda outside G.
    Reproduce {
        #[command(subcommand)]
        which: ReproduceCmd,
    },
    /// Auxiliary-polynomial audits on sampled instances.
    Stepanov {
        #[command(subcommand)]
        which: StepanovCmd,
    },
    /// Randomized exact identity checks.
    Identities {
        #[command(subcommand)]
        which: IdentitiesCmd,
    },
    /// Checks over complex roots of unity.
    Unity {
        #[command(subcommand)]
        which: UnityCmd,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// No AB = (G - lambda) \ {0} for lambda in G.
    Sarkozy(SweepArgs),
    /// No A/A equal to a shifted coset target once |G| >= 3.
    Ratio(SweepArgs),
    /// No A - A = G ∪ {0} once |G| is not 2 or 6.
    Levsonn(SweepArgs),
    /// A + B = G only with |A| = |B| = sqrt|G|.
    KalmyninSum(SweepArgs),
    /// Difference-clique bound for the quadratic residues.
    Clique(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum CensusCmd {
    LambdaNotInG(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum ReproduceCmd {
    Counterexamples(OutputArgs),
}

#[derive(Debug, Subcommand)]
enum StepanovCmd {
    Audit(StepanovArgs),
}

#[derive(Debug, Subcommand)]
enum IdentitiesCmd {
    Fuzz(FuzzArgs),
}

#[derive(Debug, Subcommand)]
enum UnityCmd {
    Audit(UnityArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    InG,
    NotInG,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write records here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report elapsed_ms as 0 so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pmin: u32,
    /// Defaults depend on the audit.
    #[arg(long)]
    pmax: Option<u32>,
    /// Comma-separated subgroup orders; all proper subgroups when absent.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "in-g")]
    lambda_scope: ScopeArg,
    /// Cross-check product searches against brute force for small p.
    #[arg(long, value_enum, default_value = "on")]
    oracle: Toggle,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Abort any single search after this many nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct StepanovArgs {
    #[arg(long, default_value_t = 5)]
    pmin: u32,
    #[arg(long, default_value_t = 101)]
    pmax: u32,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 101)]
    pmax: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct UnityArgs {
    #[arg(long, default_value_t = 3)]
    mmin: usize,
    /// Largest order for the product-distinctness check.
    #[arg(long, default_value_t = 100)]
    mmax: usize,
    /// Largest order for the 2x2 decomposition search.
    #[arg(long, default_value_t = 50)]
    search_max: usize,
    /// Largest order for the Möbius classification (at most 12).
    #[arg(long, default_value_t = 8)]
    classify_max: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Clean,
    Violation,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(Status::Clean) => 0,
        Ok(Status::Violation) => 2,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<Status, CliError> {
    match command {
        Command::Verify { which } => {
            let (kind, args, default_pmax) = match which {
                VerifyCmd::Sarkozy(a) => (AuditKind::Sarkozy, a, 61),
                VerifyCmd::Ratio(a) => (AuditKind::RatioSet, a, 31),
                VerifyCmd::Levsonn(a) => (AuditKind::LevSonn, a, 61),
                VerifyCmd::KalmyninSum(a) => (AuditKind::KalmyninSum, a, 61),
                VerifyCmd::Clique(a) => (AuditKind::PaleyClique, a, 101),
            };
            run_sweep(kind, &args, default_pmax)
        }
        Command::Census { which: CensusCmd::LambdaNotInG(args) } => run_sweep(AuditKind::Census, &args, 61),
        Command::Reproduce { which: ReproduceCmd::Counterexamples(out) } => run_reproduce(&out),
        Command::Stepanov { which: StepanovCmd::Audit(args) } => {
            check_range(args.pmin, args.pmax)?;
            let start = Instant::now();
            let suite = suites::stepanov_suite(args.seed, args.samples, args.pmin, args.pmax);
            emit_suites("stepanov", &[suite], start, &args.output)
        }
        Command::Identities { which: IdentitiesCmd::Fuzz(args) } => {
            check_range(3, args.pmax)?;
            let start = Instant::now();
            let suites = suites::identity_suite(args.seed, IdentityCounts::default(), args.pmax);
            emit_suites("identities", &suites, start, &args.output)
        }
        Command::Unity { which: UnityCmd::Audit(args) } => {
            if args.mmin < 3 || args.mmin > args.mmax || args.classify_max > 12 {
                return Err(CliError::Usage("orders must satisfy 3 <= mmin <= mmax and classify-max <= 12".into()));
            }
            let start = Instant::now();
            let ranges = UnityRanges {
                mmin: args.mmin,
                product_claim_max: args.mmax,
                search_max: args.search_max,
                classify_max: args.classify_max,
            };
            emit_suites("unity", &suites::unity_suite(ranges), start, &args.output)
        }
    }
}

fn check_range(pmin: u32, pmax: u32) -> Result<(), CliError> {
    if pmin < 3 || pmax < pmin || pmax > DEFAULT_PRIME_BOUND {
        return Err(CliError::Usage(format!(
            "prime range [{pmin}, {pmax}] must satisfy 3 <= pmin <= pmax <= {DEFAULT_PRIME_BOUND}"
        )));
    }
    if crate::field::odd_primes_in(pmin, pmax).is_empty() {
        return Err(CliError::Usage(format!("no odd primes in [{pmin}, {pmax}]")));
    }
    Ok(())
}

fn open_output(out: &OutputArgs) -> Result<ReportWriter<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok(ReportWriter::new(sink))
}

fn report_violation(v: &TheoremViolation) {
    let mut line = format!(
        "violation: {} p={} |G|={} params={}: {}",
        v.task.name,
        v.task.p.map_or("-".into(), |p| p.to_string()),
        v.task.subgroup_order.map_or("-".into(), |d| d.to_string()),
        v.task.params,
        v.detail
    );
    if let Some(w) = &v.witness {
        line.push_str(&format!("; A = {}", w.a));
        if let Some(b) = &w.b {
            line.push_str(&format!(", B = {b}"));
        }
    }
    eprintln!("{line}");
}

/// Witnesses are checked once more, independently of the search, before
/// they are written.
fn revalidate(report: &SearchReport) -> bool {
    let Some(p) = report.task.p else { return report.witnesses.is_empty() };
    let Ok(ctx) = FieldContext::new(p as u64) else { return false };
    report.witnesses.iter().all(|w| w.validate(&ctx))
}

fn run_sweep(kind: AuditKind, args: &SweepArgs, default_pmax: u32) -> Result<Status, CliError> {
    let pmax = args.pmax.unwrap_or(default_pmax);
    check_range(args.pmin, pmax)?;
    let config = AuditConfig {
        pmin: args.pmin,
        pmax,
        orders: args.orders.clone(),
        lambda_scope: match args.lambda_scope {
            ScopeArg::InG => LambdaScope::InG,
            ScopeArg::NotInG => LambdaScope::NotInG,
            ScopeArg::All => LambdaScope::All,
        },
        oracle: args.oracle == Toggle::On,
        workers: args.workers,
        search: SearchOptions { node_budget: args.node_budget, ..SearchOptions::default() },
    };
    let outcome = audit_theorems(&config, kind).map_err(|e| match e {
        DecompError::EmptyRange { .. } => CliError::Usage(e.to_string()),
        other => CliError::Usage(format!("audit failed: {other}")),
    })?;
    let mut writer = open_output(&args.output)?;
    let mut status = Status::Clean;
    for report in &outcome.reports {
        if !revalidate(report) {
            eprintln!("re-validation failed for {} p={:?}", report.task.name, report.task.p);
            status = Status::Violation;
        }
        writer.emit(&ReportRecord::from_search(report, !args.output.no_timing))?;
    }
    writer.finish()?;
    for v in &outcome.violations {
        report_violation(v);
        status = Status::Violation;
    }
    Ok(status)
}

fn run_reproduce(out: &OutputArgs) -> Result<Status, CliError> {
    let cases: [(u32, u32, u32, &[u32], &[u32]); 2] =
        [(11, 5, 2, &[1, 7], &[1, 2, 3]), (19, 6, 2, &[1, 9], &[6, 9, 18])];
    let mut writer = open_output(out)?;
    let mut status = Status::Clean;
    for (p, order, lambda, a, b) in cases {
        let ctx = FieldContext::new(p as u64).map_err(|e| CliError::Usage(e.to_string()))?;
        let g = ctx.subgroup_of_order(order).map_err(|e| CliError::Usage(e.to_string()))?;
        let a_set = ElementSet::from_residues(p, a.iter().copied());
        let b_set = ElementSet::from_residues(p, b.iter().copied());
        let (mut report, hit) = reproduce_product_witness(&ctx, &g, lambda, &a_set, &b_set)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        report.task.name = "reproduce".into();
        report.task.subgroup_order = Some(order);
        report.task.params = serde_json::json!({
            "lambda": lambda,
            "given": { "A": a, "B": b },
        });
        match hit {
            Some(w) if w.validate(&ctx) => report.witnesses = vec![w],
            _ => {
                eprintln!("p={p}: decomposition equivalent to A = {a_set}, B = {b_set} not found");
                report.witnesses.clear();
                status = Status::Violation;
            }
        }
        writer.emit(&ReportRecord::from_search(&report, !out.no_timing))?;
    }
    writer.finish()?;
    Ok(status)
}

fn emit_suites(
    task: &str,
    suites: &[SuiteSummary],
    start: Instant,
    out: &OutputArgs,
) -> Result<Status, CliError> {
    let elapsed = if out.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let mut writer = open_output(out)?;
    let mut status = Status::Clean;
    for s in suites {
        writer.emit(&ReportRecord::from_suite(task, s, elapsed))?;
        for f in &s.failures {
            eprintln!("violation: {task}/{}: {f}", s.name);
            status = Status::Violation;
        }
    }
    writer.finish()?;
    Ok(status)
}
