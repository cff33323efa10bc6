use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pcl_core::classgroup::ClassGroupConfig;
use pcl_core::predictor::predict;
use pcl_core::veritool::cache::Cache;
use pcl_core::veritool::render::{self, Format, Record};
use pcl_core::veritool::{primes_in_range, Analyzer, FieldSelection, Outcome, RunMeta};
use pcl_core::Error;

/// 3-class groups of L = Q(∛p) and k = Q(∛p, ζ₃) for primes p ≡ 1 (mod 3).
#[derive(Parser)]
#[command(name = "pcl", version)]
struct Cli {
    /// Directory for cached class groups (one JSON file per field).
    #[arg(long, global = true, env = "PCL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Worker threads for multi-prime commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print elapsed time and cache provenance per prime on stderr.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum FieldArg {
    L,
    #[value(name = "k")]
    K,
    #[value(name = "both")]
    Both,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Multiplies the relation search budget.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    effort: u32,
    /// Scales the relation base bound.
    #[arg(long, default_value_t = 1.0)]
    bound_mult: f64,
}

#[derive(Subcommand)]
enum Command {
    /// What the theory predicts from p alone.
    Predict { p: u64 },
    /// Compute class groups and their 3-structure.
    Analyze {
        p: u64,
        #[arg(long, value_enum, default_value_t = FieldArg::Both)]
        field: FieldArg,
        /// Treat the argument as any cubefree radicand and print the whole class group.
        #[arg(long)]
        pure: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compare predictions with computed class groups.
    Verify {
        #[arg(required_unless_present = "range", conflicts_with = "range")]
        p: Option<u64>,
        /// Inclusive range `A..B`.
        #[arg(long)]
        range: Option<String>,
        /// Residues of p mod 9 to keep: `4,7`, `1` or `all`.
        #[arg(long, default_value = "all")]
        mod9: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Recompute one of the published tables.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        search: SearchArgs,
    },
}

const USAGE: u8 = 2;

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(exit_code(&e), e.to_string())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidPrime(_) | Error::InvalidRadicand(_) | Error::InvalidArgument(_) => USAGE,
        Error::InvariantViolated(_) => 1,
        _ => 3,
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

fn config(s: &SearchArgs) -> Result<ClassGroupConfig, Failure> {
    if !(s.bound_mult.is_finite() && s.bound_mult > 0.0 && s.bound_mult <= 100.0) {
        return Err(usage(format!("--bound-mult must lie in (0, 100], got {}", s.bound_mult)));
    }
    Ok(ClassGroupConfig { seed: s.seed, effort: s.effort, bound_mult: s.bound_mult })
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || usage(format!("--range expects A..B, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_mod9(s: &str) -> Result<Vec<u64>, Failure> {
    if s == "all" {
        return Ok(vec![1, 4, 7]);
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.trim().parse::<u64>() {
            Ok(r @ (1 | 4 | 7)) => out.push(r),
            _ => return Err(usage(format!("--mod9 expects residues among 1, 4, 7 or `all`, got `{s}`"))),
        }
    }
    Ok(out)
}

fn report_meta(p: u64, meta: &RunMeta, timings: bool) {
    for w in &meta.warnings {
        eprintln!("warning: {w}");
    }
    if timings {
        let prov: Vec<String> = meta.provenance.iter().map(|(f, s)| format!("{f} {}", serde_json::json!(s).as_str().unwrap_or(""))).collect();
        eprintln!("p={p} {:.3}s {}", meta.elapsed.as_secs_f64(), prov.join(", "));
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure(3, e.to_string()))?;
    }
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Tsv => Format::Tsv,
    };
    let cache = cli.cache_dir.map(Cache::new);
    let analyzer = |s: &SearchArgs| config(s).map(|c| Analyzer::new(c, cache.clone()));
    match cli.command {
        Command::Predict { p } => {
            let r = predict(p)?;
            print!("{}", render::render(&[render::prediction_record(&r)], format));
            Ok(0)
        }
        Command::Analyze { p, field, pure, search } => {
            let an = analyzer(&search)?;
            let fields = match field {
                FieldArg::L => FieldSelection::L,
                FieldArg::K => FieldSelection::K,
                FieldArg::Both => FieldSelection::Both,
            };
            if pure {
                let rs = an.analyze_pure(p, fields)?;
                let recs: Vec<Record> = rs.iter().map(render::pure_record).collect();
                print!("{}", render::render(&recs, format));
                return Ok(0);
            }
            let a = an.analyze(p, fields)?;
            report_meta(p, &a.meta, cli.timings);
            print!("{}", render::render(&[render::analysis_record(&a, &an.config)], format));
            if let Some(msg) = &a.incomplete {
                eprintln!("incomplete: {msg}");
                return Ok(3);
            }
            Ok(0)
        }
        Command::Verify { p, range, mod9, search } => {
            let an = analyzer(&search)?;
            let primes = match (p, range) {
                (Some(p), _) => vec![p],
                (None, Some(r)) => {
                    let (a, b) = parse_range(&r)?;
                    primes_in_range(a, b, &parse_mod9(&mod9)?)
                }
                (None, None) => return Err(usage("give a prime or --range A..B")),
            };
            if primes.is_empty() {
                return Err(usage("no primes p ≡ 1 (mod 3) selected"));
            }
            let results = an.verify_all(&primes);
            let mut records = Vec::new();
            let mut worst = Outcome::Match;
            let (mut matched, mut mismatched, mut incomplete) = (0, 0, 0);
            for (&p, r) in primes.iter().zip(results) {
                match r {
                    Ok(v) => {
                        report_meta(p, &v.computed.meta, cli.timings);
                        match v.outcome {
                            Outcome::Match => matched += 1,
                            Outcome::Mismatch => mismatched += 1,
                            Outcome::Incomplete => incomplete += 1,
                        }
                        worst = worst.max(v.outcome);
                        records.push(render::verification_record(&v));
                    }
                    Err(e) => {
                        if exit_code(&e) == USAGE && primes.len() == 1 {
                            return Err(e.into());
                        }
                        eprintln!("p={p}: {e}");
                        let o = if exit_code(&e) == 1 { Outcome::Mismatch } else { Outcome::Incomplete };
                        if o == Outcome::Mismatch {
                            mismatched += 1;
                        } else {
                            incomplete += 1;
                        }
                        worst = worst.max(o);
                    }
                }
            }
            print!("{}", render::render(&records, format));
            let summary = format!(
                "summary: {} primes, {matched} MATCH, {mismatched} MISMATCH, {incomplete} INCOMPLETE",
                primes.len()
            );
            match format {
                Format::Text => println!("\n{summary}"),
                _ => eprintln!("{summary}"),
            }
            Ok(worst.exit_code() as u8)
        }
        Command::Table { which, search } => {
            let an = analyzer(&search)?;
            let t = an.table(which)?;
            print!("{}", render::render_table(&t, format));
            for row in &t.rows {
                if let Some(msg) = &row.incomplete {
                    eprintln!("p={}: incomplete: {msg}", row.p);
                }
            }
            Ok(t.outcome.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
