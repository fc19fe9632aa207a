//! Argument parsing and command dispatch for the `dilset` binary.

use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dilset_core::bounds::{verify_bounds, BoundReport};
use dilset_core::constructions::{digit_deficit, ConstructionSpec};
use dilset_core::digits::dilated_sumset_size_by_digits;
use dilset_core::residue::{
    check_dichotomy_dist1, check_dichotomy_dist2, is_reduced, partition, reduce, DichotomyReport,
};
use dilset_core::search::{SearchConfig, DEFAULT_WITNESS_CAP};
use dilset_core::set::{dilated_sumset_size, dilated_sumset_with, linear_sumset, DEFAULT_BITSET_THRESHOLD};
use dilset_core::{Backend, DilationPair, IntSet};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bench::{run_bench, BenchConfig};
use crate::input::{format_literal, parse_set_input, InputError, InputSource, ParsedSet};
use crate::parallel::search_parallel;
use crate::report::*;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const OVERFLOW: u8 = 4;
    pub const VIOLATION: u8 = 10;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Core(#[from] dilset_core::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use dilset_core::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Input(_) => exit::PARSE,
            CliError::Core(E::Overflow) => exit::OVERFLOW,
            CliError::Core(E::EmptySet | E::NotIncreasing { .. }) => exit::PARSE,
            CliError::Core(_) => exit::USAGE,
            CliError::Output(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "dilset",
    version,
    about = "Exact computations with dilated sumsets p·A + q·A"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
}

impl PairArgs {
    fn pair(&self) -> CliResult<DilationPair> {
        DilationPair::new(self.p, self.q).map_err(|_| {
            CliError::Usage(format!(
                "invalid pair (p, q) = ({}, {}): need 1 <= p < q and gcd(p, q) = 1",
                self.p, self.q
            ))
        })
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Comma-separated integers such as `0,1,3,4`; `-` reads the literal from standard input.
    #[arg(long, allow_hyphen_values = true)]
    pub set: Option<String>,
    /// One integer per line with `#` comments; `-` reads standard input.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl InputArgs {
    fn source(&self) -> InputSource {
        match (&self.set, &self.file) {
            (Some(s), _) => InputSource::Literal(s.clone()),
            (None, Some(f)) => InputSource::File(f.clone()),
            (None, None) => unreachable!("clap enforces exactly one input"),
        }
    }
}

#[derive(Debug, Args)]
pub struct SetCommand {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute p·A + q·A.
    Sumset {
        #[command(flatten)]
        common: SetCommand,
        #[arg(long, default_value = "auto", value_parser = parse_backend)]
        backend: Backend,
        /// Output span (in bits) below which `auto` may pick the bitset.
        #[arg(long, default_value_t = DEFAULT_BITSET_THRESHOLD)]
        threshold: u64,
    },
    /// Compare |p·A + q·A| against every proved bound; exits 10 on a violation.
    Verify(SetCommand),
    /// Apply reduction steps until the set is reduced.
    Reduce(SetCommand),
    /// Show the residue classes mod p and mod q and their cells.
    Partition(SetCommand),
    /// Evaluate both growth dichotomies.
    Lemmas {
        #[command(flatten)]
        common: SetCommand,
        /// Reduce the set first.
        #[arg(long)]
        reduce: bool,
    },
    /// Generate an extremal construction.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Exhaustively minimise |p·A + q·A| over canonical n-element sets.
    Search(SearchArgs),
    /// Time the sumset backends on seeded workloads.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ConstructOutput {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// {1, ..., n}, measured against (p, q).
    Interval {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        p: i64,
        #[arg(long, default_value_t = 2)]
        q: i64,
        #[command(flatten)]
        out: ConstructOutput,
    },
    /// {i + x·q : 0 <= i <= d, 0 <= x < n}.
    Strided {
        #[arg(long)]
        q: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        out: ConstructOutput,
    },
    /// Base-q numbers with t + 1 digits, each below a.
    Digits {
        #[arg(long)]
        q: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        out: ConstructOutput,
    },
    /// Deficit (q + 1)|A| - |A + q·A| of the digit sets with a = ⌊√q⌋, t = ⌊log₂ √q⌋.
    Deficit {
        #[arg(long, default_value_t = 5)]
        q_min: i64,
        #[arg(long, default_value_t = 64)]
        q_max: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Set size, or an inclusive range such as `2..6`.
    #[arg(long, value_parser = parse_n_range)]
    pub n: RangeInclusive<usize>,
    #[arg(long)]
    pub max_elem: u64,
    /// Identify A with max(A) - A.
    #[arg(long)]
    pub reflection: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
    pub witness_cap: usize,
    /// Disable branch-and-bound pruning.
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1)]
    pub p: i64,
    #[arg(long, default_value_t = 2)]
    pub q: i64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub size: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub span: u64,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1000)]
    pub crossover_size: usize,
    /// Largest crossover span is 10^this.
    #[arg(long, default_value_t = 8)]
    pub crossover_max_exp: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
        .map_err(|_| format!("unknown backend {s:?}; expected merge, hash, bitset or auto"))
}

/// Accepts `N`, `A..B` or `A..=B` (both inclusive).
pub fn parse_n_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid set size {t:?}"));
    let range = match s.split_once("..") {
        None => {
            let n = num(s)?;
            n..=n
        }
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
    };
    if range.is_empty() || *range.start() == 0 {
        return Err(format!("empty or zero size range {s:?}"));
    }
    Ok(range)
}

fn n_label(range: &RangeInclusive<usize>) -> String {
    if range.start() == range.end() {
        range.start().to_string()
    } else {
        format!("{}..={}", range.start(), range.end())
    }
}

/// Runs one command. Returns the exit code for reports that completed,
/// which is [`exit::VIOLATION`] when a proved statement failed.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    match cli.command {
        Command::Sumset {
            common,
            backend,
            threshold,
        } => cmd_sumset(&common, backend, threshold, out, err),
        Command::Verify(c) => cmd_verify(&c, out, err),
        Command::Reduce(c) => cmd_reduce(&c, out, err),
        Command::Partition(c) => cmd_partition(&c, out, err),
        Command::Lemmas { common, reduce } => cmd_lemmas(&common, reduce, out, err),
        Command::Construct { kind } => cmd_construct(kind, out),
        Command::Search(a) => cmd_search(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    }
}

/// Validates the pair before touching the input, then parses the set.
fn load(c: &SetCommand, err: &mut dyn Write) -> CliResult<(DilationPair, ParsedSet)> {
    let pair = c.pair.pair()?;
    let parsed = parse_set_input(&c.input.source())?;
    if parsed.duplicates > 0 {
        writeln!(err, "warning: ignored {} duplicate element(s)", parsed.duplicates)?;
    }
    Ok((pair, parsed))
}

fn base_params(pair: DilationPair, parsed: &ParsedSet) -> Value {
    json!({
        "p": pair.p(),
        "q": pair.q(),
        "set": format_literal(&parsed.set),
        "duplicates_ignored": parsed.duplicates,
    })
}

fn write_json<R: Serialize>(out: &mut dyn Write, command: &'static str, params: Value, report: R) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, &Envelope::new(command, params, report))?;
    writeln!(out)?;
    Ok(())
}

fn write_csv<R: Serialize>(out: &mut dyn Write, rows: impl IntoIterator<Item = R>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sumset(
    c: &SetCommand,
    backend: Backend,
    threshold: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<u8> {
    let (pair, parsed) = load(c, err)?;
    let sum = dilated_sumset_with(&parsed.set, pair, backend, threshold)?;
    let report = SumsetJson {
        size: sum.len(),
        backend: backend.name().into(),
        sumset: format_literal(&sum),
    };
    match c.format {
        Format::Plain => writeln!(out, "size {}\n{}", report.size, report.sumset)?,
        Format::Json => {
            let mut params = base_params(pair, &parsed);
            params["threshold"] = json!(threshold);
            write_json(out, "sumset", params, report)?
        }
        Format::Csv => write_csv(out, [report])?,
    }
    Ok(exit::OK)
}

fn cmd_verify(c: &SetCommand, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    let (pair, parsed) = load(c, err)?;
    let report = verify_bounds(&parsed.set, pair)?;
    let json = BoundsJson::from(&report);
    match c.format {
        Format::Plain => {
            writeln!(out, "(p, q) = {pair}, n = {}, |p·A + q·A| = {}", json.n, json.actual)?;
            for check in &json.checks {
                writeln!(
                    out,
                    "{:<16} {:<6} bound {:>12}  slack {:>12}  {}",
                    check.name,
                    check.kind,
                    check.bound,
                    check.slack,
                    if check.violated { "VIOLATED" } else { "ok" }
                )?;
            }
        }
        Format::Json => write_json(out, "verify", base_params(pair, &parsed), &json)?,
        Format::Csv => write_csv(out, &json.checks)?,
    }
    Ok(verify_exit_code(&report))
}

/// [`exit::VIOLATION`] iff the report contains a violated bound.
pub fn verify_exit_code(report: &BoundReport) -> u8 {
    if report.has_violations() {
        exit::VIOLATION
    } else {
        exit::OK
    }
}

fn cmd_reduce(c: &SetCommand, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    let (pair, parsed) = load(c, err)?;
    let (_, trace) = reduce(&parsed.set, pair)?;
    let json = ReduceJson::new(&trace, dilated_sumset_size(&parsed.set, pair)?);
    match c.format {
        Format::Plain => {
            for (k, s) in json.steps.iter().enumerate() {
                writeln!(
                    out,
                    "step {}: side {}, residue {}, divisor {}, span before {}",
                    k + 1,
                    s.side,
                    s.residue,
                    s.divisor,
                    s.span_before
                )?;
            }
            writeln!(out, "final {}", json.final_set)?;
        }
        Format::Json => write_json(out, "reduce", base_params(pair, &parsed), &json)?,
        Format::Csv => write_csv(out, &json.steps)?,
    }
    Ok(exit::OK)
}

fn cmd_partition(c: &SetCommand, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    let (pair, parsed) = load(c, err)?;
    let part = partition(&parsed.set, pair)?;
    let json = PartitionJson::new(&part, is_reduced(&parsed.set, pair))?;
    match c.format {
        Format::Plain => {
            writeln!(
                out,
                "r = {} of p = {}, s = {} of q = {}, reduced: {}",
                json.r,
                pair.p(),
                json.s,
                pair.q(),
                json.reduced
            )?;
            for (label, classes) in [("P", &json.p_classes), ("Q", &json.q_classes)] {
                for (k, class) in classes.iter().enumerate() {
                    writeln!(out, "{label}{k} residue {}: {}", class.residue, class.set)?;
                }
            }
            for cell in &json.cells {
                if !cell.set.is_empty() {
                    writeln!(
                        out,
                        "A{}{} offset {}: {} (image size {})",
                        cell.i, cell.j, cell.offset, cell.set, cell.image_size
                    )?;
                }
            }
        }
        Format::Json => write_json(out, "partition", base_params(pair, &parsed), &json)?,
        Format::Csv => write_csv(out, &json.cells)?,
    }
    Ok(exit::OK)
}

/// A failed record only counts against a proved statement when the set is reduced.
fn lemmas_exit_code(reports: &[DichotomyReport]) -> u8 {
    if reports.iter().any(|r| r.reliable && !r.all_satisfied()) {
        exit::VIOLATION
    } else {
        exit::OK
    }
}

fn cmd_lemmas(c: &SetCommand, reduce_first: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<u8> {
    let (pair, parsed) = load(c, err)?;
    let checked: IntSet = if reduce_first {
        reduce(&parsed.set, pair)?.0
    } else {
        parsed.set.clone()
    };
    let reports = vec![
        check_dichotomy_dist1(&checked, pair)?,
        check_dichotomy_dist2(&checked, pair)?,
    ];
    let json = LemmasJson {
        checked: format_literal(&checked),
        reduced: is_reduced(&checked, pair),
        reports: reports.iter().map(DichotomyJson::from).collect(),
    };
    match c.format {
        Format::Plain => {
            writeln!(out, "checked {} (reduced: {})", json.checked, json.reduced)?;
            for r in &json.reports {
                writeln!(
                    out,
                    "{}: {} records, {} failures, applies: {}",
                    r.lemma,
                    r.records.len(),
                    r.failures,
                    r.reliable
                )?;
                for rec in r.records.iter().filter(|rec| !rec.satisfied) {
                    writeln!(
                        out,
                        "  failed side {} i {} j {:?}: lhs {} < rhs {}",
                        rec.side, rec.i, rec.j, rec.lhs, rec.rhs
                    )?;
                }
            }
        }
        Format::Json => {
            let mut params = base_params(pair, &parsed);
            params["reduce"] = json!(reduce_first);
            write_json(out, "lemmas", params, &json)?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "lemma",
                "side",
                "i",
                "j",
                "hypothesis_holds",
                "trivially_satisfied",
                "fd_holds",
                "inequality_holds",
                "lhs",
                "rhs",
                "satisfied",
            ])?;
            for (lemma, r) in json
                .reports
                .iter()
                .flat_map(|rep| rep.records.iter().map(move |r| (rep.lemma, r)))
            {
                w.write_record([
                    lemma.to_string(),
                    r.side.to_string(),
                    r.i.to_string(),
                    r.j.map_or(String::new(), |j| j.to_string()),
                    r.hypothesis_holds.to_string(),
                    r.trivially_satisfied.to_string(),
                    r.fd_holds.to_string(),
                    r.inequality_holds.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.satisfied.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(lemmas_exit_code(&reports))
}

fn cmd_construct(kind: ConstructKind, out: &mut dyn Write) -> CliResult<u8> {
    let (spec, pair, opts) = match kind {
        ConstructKind::Interval { n, p, q, out } => {
            DilationPair::new(p, q).map_err(|_| CliError::Usage(format!("invalid pair ({p}, {q})")))?;
            (ConstructionSpec::Interval { n }, (p, q), out)
        }
        ConstructKind::Strided { q, d, n, out } => (ConstructionSpec::StridedBlock { q, d, n }, (1, q), out),
        ConstructKind::Digits { q, a, t, out } => (ConstructionSpec::DigitSet { q, a, t }, (1, q), out),
        ConstructKind::Deficit { q_min, q_max, format } => return cmd_deficit(q_min, q_max, format, out),
    };
    let c = spec.build()?;
    let computed = match spec {
        ConstructionSpec::Interval { .. } => dilated_sumset_size(&c.set, DilationPair::new(pair.0, pair.1)?)? as u128,
        ConstructionSpec::StridedBlock { q, .. } => linear_sumset(&c.set, 1, &c.set, q)?.len() as u128,
        ConstructionSpec::DigitSet { q, .. } => dilated_sumset_size_by_digits(&c.set, 1, q)?,
    };
    let json = ConstructJson::new(&c, pair, computed);
    let params = json!({ "kind": json.kind, "q": json.q, "d": json.d, "a": json.a, "t": json.t, "n": json.n });
    if let Some(path) = &opts.sidecar {
        let mut buf = Vec::new();
        write_json(&mut buf, "construct", params.clone(), &json)?;
        fs::write(path, buf)?;
    }
    match opts.format {
        Format::Plain => writeln!(out, "{}", json.set)?,
        Format::Json => write_json(out, "construct", params, &json)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "kind",
                "size",
                "predicted_size",
                "predicted_sumset",
                "computed_sumset",
                "set",
            ])?;
            w.write_record([
                json.kind,
                &json.size.to_string(),
                &json.predicted_size,
                json.predicted_sumset.as_deref().unwrap_or(""),
                &json.computed_sumset,
                &json.set,
            ])?;
            w.flush()?;
        }
    }
    Ok(exit::OK)
}

fn cmd_deficit(q_min: i64, q_max: i64, format: Format, out: &mut dyn Write) -> CliResult<u8> {
    if q_min > q_max {
        return Err(CliError::Usage(format!("empty range {q_min}..={q_max}")));
    }
    // Small q have no admissible digit parameters and are skipped.
    let rows: Vec<DeficitRow> = (q_min..=q_max)
        .filter_map(|q| digit_deficit(q).ok())
        .map(|d| DeficitRow::from(&d))
        .collect();
    match format {
        Format::Plain => {
            writeln!(
                out,
                "{:>6} {:>4} {:>3} {:>12} {:>14} {:>14}",
                "q", "a", "t", "|A|", "|A+q·A|", "deficit"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>6} {:>4} {:>3} {:>12} {:>14} {:>14}",
                    r.q, r.a, r.t, r.size, r.sumset, r.deficit
                )?;
            }
        }
        Format::Json => write_json(
            out,
            "construct-deficit",
            json!({ "q_min": q_min, "q_max": q_max }),
            &rows,
        )?,
        Format::Csv => write_csv(out, &rows)?,
    }
    Ok(exit::OK)
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> CliResult<u8> {
    let pair = a.pair.pair()?;
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in a.n.clone() {
        let mut cfg = SearchConfig::new(pair, n, a.max_elem);
        cfg.use_reflection = a.reflection;
        cfg.prune = !a.no_prune;
        cfg.witness_cap = a.witness_cap;
        rows.push(SearchRow::from(&search_parallel(&cfg, a.jobs)?));
    }
    match a.format {
        Format::Plain => {
            for r in &rows {
                let status = if r.violation {
                    "VIOLATION".to_string()
                } else if r.certified {
                    format!("certified by {}", r.lower_bound_name)
                } else {
                    format!(
                        "conditional on span <= {} (bound {} = {})",
                        r.max_elem, r.lower_bound_name, r.lower_bound
                    )
                };
                writeln!(
                    out,
                    "n = {}: minimum {}, {} witness(es), first {}, {status}",
                    r.n,
                    r.minimum,
                    r.witness_count,
                    r.witnesses.first().map_or("-", String::as_str)
                )?;
            }
        }
        Format::Json => {
            let params = json!({
                "p": pair.p(),
                "q": pair.q(),
                "n": n_label(&a.n),
                "max_elem": a.max_elem,
                "reflection": a.reflection,
                "prune": !a.no_prune,
                "witness_cap": a.witness_cap,
            });
            write_json(out, "search", params, json!({ "results": rows }))?
        }
        Format::Csv => write_csv(out, rows.iter().map(SearchCsvRow::from))?,
    }
    Ok(if rows.iter().any(|r| r.violation) {
        exit::VIOLATION
    } else {
        exit::OK
    })
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<u8> {
    let pair = DilationPair::new(a.p, a.q).map_err(|_| CliError::Usage(format!("invalid pair ({}, {})", a.p, a.q)))?;
    let mut cfg = BenchConfig::new(pair);
    cfg.seed = a.seed;
    cfg.size = a.size;
    cfg.span = a.span;
    cfg.repeats = a.repeats;
    cfg.crossover_size = a.crossover_size;
    cfg.crossover_spans = (3..=a.crossover_max_exp.max(3)).map(|k| 10u64.pow(k)).collect();
    let report = run_bench(&cfg)?;
    match a.format {
        Format::Plain => {
            writeln!(
                out,
                "{:<10} {:>7} {:>10} {:>11} {:>6}",
                "workload", "|A|", "span", "|p·A+q·A|", "agree"
            )?;
            for w in &report.workloads {
                writeln!(
                    out,
                    "{:<10} {:>7} {:>10} {:>11} {:>6}",
                    w.workload, w.size, w.span, w.sumset_size, w.backends_agree
                )?;
            }
            writeln!(out, "\ntiming (wall clock, varies between runs), median ms")?;
            writeln!(
                out,
                "{:<10} {:>10} {:>10} {:>10}",
                "workload", "merge", "hash", "bitset"
            )?;
            for t in &report.timing.rows {
                writeln!(
                    out,
                    "{:<10} {:>10.2} {:>10.2} {:>10.2}",
                    t.workload, t.merge_ms, t.hash_ms, t.bitset_ms
                )?;
            }
            writeln!(out, "\ncrossover, |A| = {}", report.crossover_size)?;
            writeln!(out, "{:>12} {:>10} {:>10} {:>8}", "span", "merge", "bitset", "faster")?;
            for r in &report.timing.crossover {
                writeln!(
                    out,
                    "{:>12} {:>10.2} {:>10.2} {:>8}",
                    r.span, r.merge_ms, r.bitset_ms, r.faster
                )?;
            }
            match report.timing.crossover_span {
                Some(s) => writeln!(out, "merge overtakes bitset at span {s}")?,
                None => writeln!(out, "bitset fastest at every measured span")?,
            }
        }
        Format::Json => {
            let params = json!({
                "p": pair.p(),
                "q": pair.q(),
                "seed": a.seed,
                "size": a.size,
                "span": a.span,
                "repeats": a.repeats,
                "crossover_size": a.crossover_size,
                "crossover_spans": cfg.crossover_spans,
            });
            write_json(out, "bench", params, &report)?
        }
        Format::Csv => write_csv(out, &report.timing.rows)?,
    }
    Ok(exit::OK)
}
