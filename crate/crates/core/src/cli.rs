//! Command-line front end used by the `sdmm` binary.
//!
//! [`run`] parses arguments and returns the exit code together with everything
//! that would be printed, so the commands can be tested without spawning a
//! process. Exit codes: 0 success, 1 decode, verification or security failure,
//! 2 configuration error.
//!
//! The default seed comes from `--seed`, then the `SDMM_SEED` environment
//! variable, then the config file, then 0.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{prime_power, Field};
use crate::linalg::FieldMatrix;
use crate::records::{format_records, Record};
use crate::schemes::config::parse_indices;
use crate::schemes::{
    default_field, exhaustive_security_audit, mds_conjecture_bound, verify_mds_security, SabotagedScheme,
    SchemeConfig, SchemeKind,
};
use crate::simulator::{
    parameter_grid, random_inputs, run_experiment, straggler_cases, sweep, CollectionPolicy,
    ExperimentConfig, ExperimentReport, SweepCase, WorkerBehavior, WorkerPool,
};

pub const SEED_ENV: &str = "SDMM_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sdmm", version, about = "Secure distributed matrix multiplication simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and print its report.
    Run(RunArgs),
    /// Run many seeded trials over a parameter grid or over straggler sets.
    Sweep(SweepArgs),
    /// Check security: MDS randomness codes, and optionally exact mutual information.
    Audit(AuditArgs),
    /// Print worker counts, recovery thresholds and field conditions per construction.
    Compare(CompareArgs),
    /// Print the field-size limits for N workers and X colluders.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Records,
}

/// Scheme selection shared by `run` and `audit`. Inline flags override the
/// config file.
#[derive(Debug, Args, Clone)]
pub struct SchemeArgs {
    /// Scheme config file (`key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// flex, flex-redundant, dft or binary.
    #[arg(long)]
    pub scheme: Option<SchemeKind>,
    /// Field: `q`, `p^m` or `p^m/c0,...,cm`. Defaults to the smallest field the scheme supports.
    #[arg(long = "q")]
    pub field: Option<Field>,
    #[arg(long = "P")]
    pub partitions: Option<usize>,
    #[arg(long = "X")]
    pub collusion: Option<usize>,
    #[arg(long = "S")]
    pub stragglers: Option<usize>,
    /// Comma-separated 0-based workers where the decoding vector vanishes (flex-redundant).
    #[arg(long = "zero-set")]
    pub zero_set: Option<String>,
    /// Zero-pad the inner dimension up to a multiple of P.
    #[arg(long)]
    pub pad: bool,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Matrix file for A.
    #[arg(long, requires = "b", conflicts_with = "random")]
    pub a: Option<PathBuf>,
    /// Matrix file for B.
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Random A (t x s) and B (s x r).
    #[arg(long, num_args = 3, value_names = ["T", "S", "R"])]
    pub random: Option<Vec<usize>>,
    /// Compare the decoded product with a direct multiplication.
    #[arg(long)]
    pub verify: bool,
    /// Comma-separated 0-based workers that never respond.
    #[arg(long = "stragglers")]
    pub straggling: Option<String>,
    /// Comma-separated `worker:rank` pairs for delayed workers.
    #[arg(long)]
    pub delays: Option<String>,
    /// all, first:K or deadline:R.
    #[arg(long, default_value = "all")]
    pub collect: CollectionPolicy,
    /// Write the decoded product here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep a single config file instead of a grid.
    #[arg(long, conflicts_with_all = ["schemes", "partitions", "collusion"])]
    pub config: Option<PathBuf>,
    /// Comma-separated scheme names for the grid.
    #[arg(long, default_value = "flex,flex-redundant,dft,binary")]
    pub schemes: String,
    /// Comma-separated P values.
    #[arg(long = "P", default_value = "1,2,3,4")]
    pub partitions: String,
    /// Comma-separated X values.
    #[arg(long = "X", default_value = "1,2,3")]
    pub collusion: String,
    /// Stragglers tolerated by flex-redundant cases.
    #[arg(long = "S", default_value_t = 1)]
    pub stragglers: usize,
    /// For a config sweep: run every straggler set of size at most S.
    #[arg(long)]
    pub all_straggler_sets: bool,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Enumerate all inputs and randomness and compute exact mutual information.
    #[arg(long)]
    pub exhaustive: bool,
    /// Largest coalition to audit (default X).
    #[arg(long)]
    pub max_collusion: Option<usize>,
    /// Replace the randomness with zeros, to confirm the audit detects leakage.
    #[arg(long)]
    pub sabotage: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long = "P")]
    pub partitions: usize,
    #[arg(long = "X")]
    pub collusion: usize,
    #[arg(long = "S", default_value_t = 0)]
    pub stragglers: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "N")]
    pub workers: usize,
    #[arg(long = "X")]
    pub collusion: usize,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn config_error(err: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_CONFIG,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: EXIT_CONFIG,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Audit(args) => cmd_audit(&args),
        Command::Compare(args) => Outcome::ok(cmd_compare(&args)),
        Command::Bounds(args) => Outcome::ok(format!(
            "{}\n",
            mds_conjecture_bound(args.workers, args.collusion)
        )),
    }
}

impl SchemeArgs {
    /// Merges the config file (if any) with inline flags.
    pub fn resolve(&self) -> Result<SchemeConfig> {
        let mut config = match &self.config {
            Some(path) => SchemeConfig::load(path)?,
            None => {
                let missing = |flag: &str| Error::InvalidParams(format!("--{flag} is required without --config"));
                SchemeConfig::new(
                    self.scheme.ok_or_else(|| missing("scheme"))?,
                    self.partitions.ok_or_else(|| missing("P"))?,
                    self.collusion.ok_or_else(|| missing("X"))?,
                    self.stragglers.unwrap_or(0),
                )
            }
        };
        if let Some(kind) = self.scheme {
            config.scheme = kind;
        }
        if let Some(p) = self.partitions {
            config.partitions = p;
        }
        if let Some(x) = self.collusion {
            config.collusion = x;
        }
        if let Some(s) = self.stragglers {
            config.stragglers = s;
        }
        if let Some(f) = &self.field {
            config.field = Some(f.clone());
        }
        if let Some(z) = &self.zero_set {
            config.zero_set = Some(parse_indices(z)?);
        }
        if self.pad {
            config.pad = true;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        Ok(config)
    }
}

fn cmd_run(args: &RunArgs) -> Outcome {
    let prepared = (|| -> Result<(ExperimentConfig, FieldMatrix, FieldMatrix, WorkerPool)> {
        let mut scheme = args.scheme.resolve()?;
        let (a, b) = match (&args.a, &args.b, &args.random) {
            (Some(pa), Some(pb), None) => {
                let a = FieldMatrix::parse(&std::fs::read_to_string(pa)?)?;
                let b = FieldMatrix::parse(&std::fs::read_to_string(pb)?)?;
                if a.field() != b.field() {
                    return Err(Error::MixedFields {
                        left: a.field().to_string(),
                        right: b.field().to_string(),
                    });
                }
                if scheme.field.is_none() {
                    scheme.field = Some(a.field().clone());
                }
                scheme.rows = a.rows();
                scheme.inner = a.cols();
                scheme.cols = b.cols();
                (a, b)
            }
            (None, None, Some(dims)) => {
                scheme.rows = dims[0];
                scheme.inner = dims[1];
                scheme.cols = dims[2];
                random_inputs(&scheme)?
            }
            _ => {
                return Err(Error::InvalidParams(
                    "give either --a and --b matrix files or --random T S R".into(),
                ))
            }
        };
        let n = scheme.worker_count();
        let mut pool = WorkerPool::with_stragglers(n, &parse_indices(args.straggling.as_deref().unwrap_or(""))?)?;
        if let Some(delays) = &args.delays {
            for pair in delays.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (w, r) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("delay `{pair}`: expected worker:rank")))?;
                let w: usize = w.trim().parse().map_err(|_| Error::Parse(format!("delay `{pair}`")))?;
                let r: u32 = r.trim().parse().map_err(|_| Error::Parse(format!("delay `{pair}`")))?;
                pool.set(w, WorkerBehavior::Delayed(r))?;
            }
        }
        let config = ExperimentConfig {
            scheme,
            policy: args.collect,
            verify: args.verify,
        };
        Ok((config, a, b, pool))
    })();
    let (config, a, b, pool) = match prepared {
        Ok(v) => v,
        Err(e) => return Outcome::config_error(e),
    };
    let report = match run_experiment(&config, &a, &b, &pool) {
        Ok(r) => r,
        Err(e) => return Outcome::config_error(e),
    };
    if let (Some(path), Some(product)) = (&args.out, &report.product) {
        if let Err(e) = std::fs::write(path, product.to_string()) {
            return Outcome::config_error(e);
        }
    }
    let stdout = match args.format {
        OutputFormat::Records => report.to_record(args.timing).to_string(),
        OutputFormat::Text => report_text(&report, args.timing),
    };
    let stderr = match report.check() {
        Ok(()) => String::new(),
        Err(e) => format!("error: {e}\n"),
    };
    Outcome {
        code: if report.passed() { EXIT_OK } else { EXIT_FAILURE },
        stdout,
        stderr,
    }
}

fn report_text(report: &ExperimentReport, timing: bool) -> String {
    let mut out = String::new();
    let record = report.to_record(timing);
    let width = record.entries().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in record.entries() {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

fn cmd_sweep(args: &SweepArgs) -> Outcome {
    let cases = match sweep_cases(args) {
        Ok(c) => c,
        Err(e) => return Outcome::config_error(e),
    };
    let reports = sweep(&cases, args.trials, args.seed);
    let passed = reports.iter().filter(|r| r.passed()).count();
    let stdout = match args.format {
        OutputFormat::Records => {
            let mut records: Vec<Record> = reports.iter().map(|r| r.to_record(false)).collect();
            let mut summary = Record::new("summary");
            summary
                .push("reports", reports.len())
                .push("passed", passed)
                .push("failed", reports.len() - passed);
            records.push(summary);
            format_records(&records)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<15} {:>12} {:>2} {:>2} {:>2} {:>3} {:<20} {:<13} {}",
                "scheme", "field", "P", "X", "S", "N", "stragglers", "path", "result"
            );
            for r in &reports {
                let s = &r.config.scheme;
                let result = if r.passed() {
                    "ok".to_string()
                } else {
                    format!("FAILED: {}", r.failure.as_deref().unwrap_or("oracle mismatch"))
                };
                let _ = writeln!(
                    out,
                    "{:<15} {:>12} {:>2} {:>2} {:>2} {:>3} {:<20} {:<13} {}",
                    s.scheme.name(),
                    r.field,
                    s.partitions,
                    s.collusion,
                    s.stragglers,
                    r.workers,
                    format!("[{}]", r.stragglers.iter().join(",")),
                    r.path.map_or("none", |p| p.name()),
                    result
                );
            }
            let _ = writeln!(out, "{passed}/{} passed", reports.len());
            out
        }
    };
    Outcome {
        code: if passed == reports.len() { EXIT_OK } else { EXIT_FAILURE },
        stdout,
        stderr: String::new(),
    }
}

fn sweep_cases(args: &SweepArgs) -> Result<Vec<SweepCase>> {
    if let Some(path) = &args.config {
        let config = ExperimentConfig::new(SchemeConfig::load(path)?);
        return Ok(if args.all_straggler_sets {
            straggler_cases(&config)
        } else {
            vec![SweepCase::new(config)]
        });
    }
    if args.all_straggler_sets {
        return Err(Error::InvalidParams("--all-straggler-sets needs --config".into()));
    }
    let kinds = args
        .schemes
        .split(',')
        .map(str::parse::<SchemeKind>)
        .collect::<Result<Vec<_>>>()?;
    let ps = parse_indices(&args.partitions)?;
    let xs = parse_indices(&args.collusion)?;
    Ok(parameter_grid(&kinds, ps, xs, args.stragglers))
}

fn cmd_audit(args: &AuditArgs) -> Outcome {
    let built = (|| {
        let mut config = args.scheme.resolve()?;
        if args.exhaustive {
            let p = config.partitions;
            config = config.with_dims(1, p, 1);
        }
        let scheme = config.build()?;
        Ok::<_, Error>((config, scheme))
    })();
    let (config, base) = match built {
        Ok(v) => v,
        Err(e) => return Outcome::config_error(e),
    };
    let sabotaged = SabotagedScheme::new(base.as_ref());
    let scheme: &dyn crate::schemes::Scheme = if args.sabotage { &sabotaged } else { base.as_ref() };

    let mut record = Record::new("audit");
    record
        .push("scheme", config.scheme)
        .push("field", &scheme.params().field)
        .push("P", config.partitions)
        .push("X", config.collusion)
        .push("S", config.stragglers)
        .push("workers", scheme.worker_count())
        .push("sabotaged", args.sabotage);

    let mds = match verify_mds_security(scheme) {
        Ok(m) => m,
        Err(e) => return Outcome::config_error(e),
    };
    record
        .push("a_security_code", format!("[{}, {}]", mds.a_code.0, mds.a_code.1))
        .push("a_security_code_mds", mds.a_code_mds)
        .push("b_security_code", format!("[{}, {}]", mds.b_code.0, mds.b_code.1))
        .push("b_security_code_mds", mds.b_code_mds);
    let mut passed = mds.passed();

    if args.exhaustive {
        let max = args.max_collusion.unwrap_or(config.collusion);
        match exhaustive_security_audit(scheme, max) {
            Ok(audit) => {
                let worst = audit.worst().cloned();
                record
                    .push("states", audit.states)
                    .push("coalitions", audit.coalitions.len())
                    .push("max_collusion", max)
                    .push("mutual_information_zero", audit.secure())
                    .push("max_mutual_information_bits", format!("{:.6}", audit.max_bits()));
                if let Some((members, _)) = worst.filter(|(_, mi)| !mi.exact_zero) {
                    record.push("worst_coalition", members.iter().join(","));
                }
                passed &= audit.secure();
            }
            Err(e) => return Outcome::config_error(e),
        }
    }
    record.push("passed", passed);
    let stdout = match args.format {
        OutputFormat::Records => record.to_string(),
        OutputFormat::Text => {
            let width = record.entries().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            record
                .entries()
                .iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    };
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_FAILURE },
        stdout,
        stderr: if passed {
            String::new()
        } else {
            "error: security check failed\n".into()
        },
    }
}

/// One row of the construction comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub construction: &'static str,
    pub implemented: bool,
    pub stragglers: bool,
    pub workers: usize,
    pub recovery_threshold: usize,
    /// Rendered, since one construction only gives a lower bound.
    pub minimal_recovery: String,
    pub field_condition: String,
    /// Smallest admissible field where the condition pins one down.
    pub smallest_field: Option<u64>,
}

pub fn comparison_rows(p: usize, x: usize, s: usize) -> Vec<ComparisonRow> {
    let base = p + 2 * x;
    let redundant = 2 * p + 2 * x + s - 1;
    let threshold = 2 * p + 2 * x - 1;
    let smallest_at_least = |n: usize| (n.max(2) as u64..).find(|&q| prime_power(q).is_some());
    let dft_field = default_field(SchemeKind::Dft, base).ok().map(|f| f.order() as u64);
    vec![
        ComparisonRow {
            construction: "flex",
            implemented: true,
            stragglers: false,
            workers: base,
            recovery_threshold: base,
            minimal_recovery: base.to_string(),
            field_condition: format!("q >= N = {base}"),
            smallest_field: smallest_at_least(base),
        },
        ComparisonRow {
            construction: "flex-redundant",
            implemented: true,
            stragglers: true,
            workers: redundant,
            recovery_threshold: threshold,
            minimal_recovery: base.to_string(),
            field_condition: format!("q >= N = {redundant}"),
            smallest_field: smallest_at_least(redundant),
        },
        ComparisonRow {
            construction: "secure-matdot",
            implemented: false,
            stragglers: true,
            workers: redundant,
            recovery_threshold: threshold,
            minimal_recovery: format!(">= {base}"),
            field_condition: format!("q >= P + N = {}, divisibility conditions", p + redundant),
            smallest_field: None,
        },
        ComparisonRow {
            construction: "hera",
            implemented: false,
            stragglers: false,
            workers: base,
            recovery_threshold: base,
            minimal_recovery: base.to_string(),
            field_condition: format!("q is a square, q^(3/2) >= 2(P + X) = {}", 2 * (p + x)),
            smallest_field: None,
        },
        ComparisonRow {
            construction: "dft",
            implemented: true,
            stragglers: false,
            workers: base,
            recovery_threshold: base,
            minimal_recovery: base.to_string(),
            field_condition: format!("N | (q - 1), N = {base}"),
            smallest_field: dft_field,
        },
    ]
}

fn cmd_compare(args: &CompareArgs) -> String {
    let rows = comparison_rows(args.partitions, args.collusion, args.stragglers);
    match args.format {
        OutputFormat::Records => {
            let records: Vec<Record> = rows
                .iter()
                .map(|row| {
                    let mut r = Record::new("construction");
                    r.push("name", row.construction)
                        .push("status", if row.implemented { "implemented" } else { "reference only" })
                        .push("P", args.partitions)
                        .push("X", args.collusion)
                        .push("S", args.stragglers)
                        .push("stragglers", if row.stragglers { "yes" } else { "no" })
                        .push("workers", row.workers)
                        .push("recovery_threshold", row.recovery_threshold)
                        .push("minimal_recovery_size", &row.minimal_recovery)
                        .push("field_condition", &row.field_condition)
                        .push(
                            "smallest_field",
                            row.smallest_field.map_or("-".to_string(), |q| q.to_string()),
                        );
                    r
                })
                .collect();
            format_records(&records)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "P = {}, X = {}, S = {}",
                args.partitions, args.collusion, args.stragglers
            );
            let _ = writeln!(
                out,
                "{:<32} {:<10} {:>7} {:>9} {:>7}  {:<45} {}",
                "construction", "stragglers", "workers", "threshold", "minimal", "field condition", "smallest q"
            );
            for row in &rows {
                let name = if row.implemented {
                    row.construction.to_string()
                } else {
                    format!("{} (reference only)", row.construction)
                };
                let _ = writeln!(
                    out,
                    "{:<32} {:<10} {:>7} {:>9} {:>7}  {:<45} {}",
                    name,
                    if row.stragglers { "yes" } else { "no" },
                    row.workers,
                    row.recovery_threshold,
                    row.minimal_recovery,
                    row.field_condition,
                    row.smallest_field.map_or("-".to_string(), |q| q.to_string())
                );
            }
            out
        }
    }
}
