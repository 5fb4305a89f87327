//! Command-line front end: per-knot expansion and slope reports, oracle
//! verification sweeps, and range censuses.
//!
//! Exit codes: 0 success, 1 verification failure or resource ceiling,
//! 2 invalid input, 3 I/O failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use twobridge::{
    fold_knot, knot_report, normalize_knot, run_census, verify_range, CensusConfig,
    CensusFormat, Error, KnotParams, KnotSlopeReport, ReportMode, SubTuple,
};

#[derive(Parser)]
#[command(
    name = "twobridge",
    version,
    about = "Continued-fraction expansions and boundary slopes of 2-bridge knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every expansion of a knot with its sub-tuple, signed difference, and slope
    Expand(ExpandArgs),
    /// Print the slope multiset and repeated-slope groups of a knot
    Slopes(SlopesArgs),
    /// Check every canonical knot up to a bound against the brute-force oracle
    Verify(VerifyArgs),
    /// Write one record per canonical knot over a range of alpha
    Census(CensusArgs),
}

#[derive(Args)]
struct KnotArgs {
    /// Determinant of the knot; odd and at least 3
    #[arg(long)]
    alpha: BigInt,
    /// Any equivalent beta; it is reduced mod alpha and mirror-folded
    #[arg(long, allow_hyphen_values = true)]
    beta: BigInt,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
    format: ReportFormatArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Materialize every expansion and count signs directly
    Full,
    /// Signed-sum shortcut only
    Fast,
}

#[derive(Args)]
struct SlopesArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
    format: ReportFormatArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    mode: ModeArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify every canonical knot with alpha up to this bound
    #[arg(long)]
    max_alpha: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CensusFormatArg {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 3)]
    min_alpha: u64,
    #[arg(long)]
    max_alpha: u64,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = CensusFormatArg::Csv)]
    format: CensusFormatArg,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_invalid_input() {
                ExitCode::from(2)
            } else if e.is_io() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Expand(args) => cmd_expand(args),
        Command::Slopes(args) => cmd_slopes(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Census(args) => cmd_census(args),
    }
}

/// The knot the user named (mirror-folded into range) plus the smaller
/// inverse-class representative that censuses deduplicate by.
fn prepare(args: &KnotArgs) -> Result<(KnotParams, KnotParams), Error> {
    let used = fold_knot(&args.alpha, &args.beta)?;
    let class = normalize_knot(&args.alpha, &args.beta)?;
    Ok((used, class))
}

fn cmd_expand(args: ExpandArgs) -> Result<(), Error> {
    let (knot, class) = prepare(&args.knot)?;
    let report = knot_report(&knot, ReportMode::Full)?;
    match args.format {
        ReportFormatArg::Text => print_expand_text(&report, &class),
        ReportFormatArg::Json => println!("{}", report_json(&report, &class)),
    }
    Ok(())
}

fn cmd_slopes(args: SlopesArgs) -> Result<(), Error> {
    let (knot, class) = prepare(&args.knot)?;
    let mode = match args.mode {
        ModeArg::Full => ReportMode::Full,
        ModeArg::Fast => ReportMode::Fast,
    };
    let report = knot_report(&knot, mode)?;
    match args.format {
        ReportFormatArg::Text => print_slopes_text(&report, &class),
        ReportFormatArg::Json => println!("{}", report_json(&report, &class)),
    }
    Ok(())
}

fn print_knot_header(report: &KnotSlopeReport, class: &KnotParams) {
    println!("knot: {}", report.knot);
    if report.knot != *class {
        println!("class representative: {class}");
    }
    println!("positive: {}", report.positive);
    println!("even: {}", report.even);
    println!("delta: {}", report.context.delta);
    println!("n0_diff: {}", report.context.n0_diff);
}

fn print_collisions(report: &KnotSlopeReport) {
    if report.collisions.is_empty() {
        println!("repeated slopes: none");
        return;
    }
    println!("repeated slopes: {}", report.collisions.len());
    for (slope, subs) in &report.collisions {
        let group: Vec<String> = subs.iter().map(SubTuple::to_string).collect();
        println!("slope {}: {}", slope, group.join(" "));
    }
}

fn print_expand_text(report: &KnotSlopeReport, class: &KnotParams) {
    print_knot_header(report, class);
    println!("subtuple\texpansion\tsigned_diff\tslope");
    for entry in &report.entries {
        let expansion = entry
            .expansion
            .as_ref()
            .map_or_else(|| "-".to_string(), |e| e.to_string());
        println!(
            "{}\t{}\t{}\t{}",
            entry.subtuple, expansion, entry.signed_diff, entry.slope
        );
    }
    print_collisions(report);
}

fn print_slopes_text(report: &KnotSlopeReport, class: &KnotParams) {
    print_knot_header(report, class);
    let mut multiset: BTreeMap<&BigInt, u64> = BTreeMap::new();
    for entry in &report.entries {
        *multiset.entry(&entry.slope).or_insert(0) += 1;
    }
    let rendered: Vec<String> = multiset
        .iter()
        .map(|(slope, count)| format!("{slope}:{count}"))
        .collect();
    println!("slopes: {}", rendered.join(" "));
    print_collisions(report);
}

fn big_number(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

fn subtuple_json(s: &SubTuple) -> Value {
    Value::Array(s.indices().iter().map(|&i| json!(i)).collect())
}

fn entries_json(entries: &[BigInt]) -> Value {
    Value::Array(entries.iter().map(big_number).collect())
}

/// Deterministic JSON rendering: object keys are sorted, numbers keep their
/// exact decimal digits, so parse-then-reprint is the identity on bytes.
fn report_json(report: &KnotSlopeReport, class: &KnotParams) -> Value {
    let mut map = Map::new();
    map.insert("alpha".into(), big_number(report.knot.alpha()));
    map.insert("beta".into(), big_number(report.knot.beta()));
    map.insert("canonical_beta".into(), big_number(class.beta()));
    map.insert("positive".into(), entries_json(report.positive.entries()));
    map.insert("even".into(), entries_json(report.even.entries()));
    map.insert("delta".into(), json!(report.context.delta));
    map.insert("n0_diff".into(), big_number(&report.context.n0_diff));
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|entry| {
            let mut e = Map::new();
            e.insert("subtuple".into(), subtuple_json(&entry.subtuple));
            e.insert(
                "expansion".into(),
                entry
                    .expansion
                    .as_ref()
                    .map_or(Value::Null, |n| entries_json(n.entries())),
            );
            e.insert("signed_diff".into(), big_number(&entry.signed_diff));
            e.insert("slope".into(), big_number(&entry.slope));
            Value::Object(e)
        })
        .collect();
    map.insert("entries".into(), Value::Array(entries));
    let mut collisions = Map::new();
    for (slope, subs) in &report.collisions {
        collisions.insert(
            slope.to_string(),
            Value::Array(subs.iter().map(subtuple_json).collect()),
        );
    }
    map.insert("collisions".into(), Value::Object(collisions));
    Value::Object(map)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Error> {
    let summary = verify_range(args.max_alpha, args.workers)?;
    println!("{}", summary.to_json_string());
    Ok(())
}

fn cmd_census(args: CensusArgs) -> Result<(), Error> {
    let format = match args.format {
        CensusFormatArg::Csv => CensusFormat::Csv,
        CensusFormatArg::Jsonl => CensusFormat::Jsonl,
    };
    let cfg = CensusConfig::new(args.min_alpha, args.max_alpha, args.workers, format);
    let summary = match &args.out {
        Some(path) => {
            let file = File::create(path)?;
            let mut writer = BufWriter::new(file);
            run_census(&cfg, &mut writer)?
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            run_census(&cfg, &mut lock)?
        }
    };
    println!("{}", summary.to_json_string());
    Ok(())
}
