//! Batch command-line front end: count tables, generated subgroups,
//! closure traces, seed sets, the linearity-index search, and the full
//! verification suite.
//!
//! Exit codes: 0 on success, 1 when a verification or consistency check
//! fails, 2 on unusable flags or input files. Output is byte-for-byte
//! deterministic for fixed inputs and seeds, whatever `--jobs` says.

mod config;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::FileConfig;
use nearspace::counting::{brute_count, count_subgroups, CountTable, DEFAULT_PAIR_BUDGET};
use nearspace::genclose::{
    find_seed_set, generated_subgroup, lc_closure, mdim, search_linearity_index, seed_number,
    SearchStrategy,
};
use nearspace::nearfield::{DicksonPair, Nearfield, ValidationMode};
use nearspace::nvspace::{CanonicalSubgroup, DEFAULT_ENUM_CAP};
use nearspace::Vector;
use num_bigint::BigUint;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nearspace",
    version,
    about = "Finite nearfields, near-vector spaces, and exact subgroup counting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nearfield construction and validation
    Nearfield {
        #[command(subcommand)]
        command: NearfieldCommand,
    },
    /// Emit the subgroup-count tables
    Count(CountArgs),
    /// Brute-force subgroup counts checked against the formula
    BruteCount(BruteCountArgs),
    /// Canonical form of the subgroup generated by input vectors
    Gen(GenArgs),
    /// Closure trace and linearity index of input vectors
    LcIndex(LcIndexArgs),
    /// Search a grid of (n, k) cells for high linearity indices
    LcSearch(LcSearchArgs),
    /// Maximum dimension generated by k vectors
    Mdim(MdimArgs),
    /// Minimal seed set of a subgroup
    Seedset(SeedsetArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum NearfieldCommand {
    /// Build the nearfield for a pair (q, n) and validate its axioms
    Check(NearfieldCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct NearfieldCheckArgs {
    /// Prime power q of the pair (q, n)
    #[arg(long)]
    q: u64,
    /// Twist degree n of the pair (q, n)
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Triples to sample in sampled mode
    #[arg(long)]
    samples: Option<u64>,
    /// RNG seed; required by sampled mode
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n_max: u64,
    /// Restrict output to one dimension column
    #[arg(long)]
    dim: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<TableFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct BruteCountArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    /// Pair-enumeration budget (pairs examined: q^(2n))
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    /// Ambient dimension; inferred from the vectors file when omitted
    #[arg(long)]
    n: Option<usize>,
    /// JSON file holding an array of vectors (arrays of element indices)
    #[arg(long)]
    vectors: String,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct LcIndexArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    vectors: String,
    /// Cap on the materialized closure size
    #[arg(long)]
    cap: Option<u64>,
    /// Include the full element set in the output
    #[arg(long)]
    elements: bool,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct LcSearchArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    k_max: usize,
    /// Sample COUNT random tuples per cell instead of exhausting
    #[arg(long, value_name = "COUNT")]
    random: Option<u64>,
    /// RNG seed; required by --random
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct MdimArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SeedsetArgs {
    /// Nearfield order |R|
    #[arg(long)]
    q: u64,
    /// JSON file holding a subgroup, bare or under a "subgroup" key
    /// (the `gen` output round-trips)
    #[arg(long)]
    subgroup: String,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Include the long-running checks (brute count at n = 4)
    #[arg(long)]
    slow: bool,
    /// Reference-table JSON; the embedded copy is used when omitted
    #[arg(long)]
    fixtures: Option<String>,
    /// Comma-separated nearfield orders to verify
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u64>>,
    /// Sampled-validation triple count for large orders
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
}

#[derive(Debug)]
enum CmdError {
    /// Bad flags or input files: exit 2.
    Usage(String),
    /// A verification or consistency failure: exit 1.
    Mismatch(String),
}

impl CmdError {
    fn usage(e: impl ToString) -> CmdError {
        CmdError::Usage(e.to_string())
    }
}

type CmdResult = Result<(), CmdError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match FileConfig::from_env() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli, cfg: &FileConfig) -> CmdResult {
    match cli.command {
        Command::Nearfield {
            command: NearfieldCommand::Check(args),
        } => cmd_nearfield_check(args, cfg),
        Command::Count(args) => cmd_count(args, cfg),
        Command::BruteCount(args) => with_jobs(args.jobs, cfg, |cfg| cmd_brute_count(args, cfg)),
        Command::Gen(args) => cmd_gen(args, cfg),
        Command::LcIndex(args) => cmd_lc_index(args, cfg),
        Command::LcSearch(args) => with_jobs(args.jobs, cfg, |cfg| cmd_lc_search(args, cfg)),
        Command::Mdim(args) => cmd_mdim(args, cfg),
        Command::Seedset(args) => cmd_seedset(args, cfg),
        Command::Verify(args) => with_jobs(args.jobs, cfg, |cfg| cmd_verify(args, cfg)),
    }
}

/// Runs `body` inside a dedicated rayon pool when a job count is given.
/// Results are identical for any job count; the pool only changes how
/// the deterministic work is scheduled.
fn with_jobs(
    flag: Option<usize>,
    cfg: &FileConfig,
    body: impl FnOnce(&FileConfig) -> CmdResult + Send,
) -> CmdResult {
    let jobs = match flag {
        Some(j) => Some(j),
        None => cfg
            .u64_value("jobs")
            .map_err(CmdError::Usage)?
            .map(|j| j as usize),
    };
    match jobs {
        None => body(cfg),
        Some(0) => Err(CmdError::Usage("--jobs must be at least 1".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(CmdError::usage)?;
            pool.install(|| body(cfg))
        }
    }
}

fn emit(output: Option<&str>, text: &str) -> CmdResult {
    match output {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .map_err(|e| CmdError::Usage(format!("cannot write {path}: {e}")))
        }
    }
}

fn resolve_report_format(
    flag: Option<ReportFormat>,
    cfg: &FileConfig,
    default: ReportFormat,
) -> Result<ReportFormat, CmdError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match cfg.str_value("format") {
        Some("text") => Ok(ReportFormat::Text),
        Some("json") => Ok(ReportFormat::Json),
        Some("csv") | Some("markdown") | None => Ok(default),
        Some(other) => Err(CmdError::Usage(format!("config format `{other}` unknown"))),
    }
}

fn resolve_table_format(
    flag: Option<TableFormat>,
    cfg: &FileConfig,
) -> Result<TableFormat, CmdError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match cfg.str_value("format") {
        Some("csv") => Ok(TableFormat::Csv),
        Some("json") => Ok(TableFormat::Json),
        Some("markdown") | Some("text") | None => Ok(TableFormat::Markdown),
        Some(other) => Err(CmdError::Usage(format!("config format `{other}` unknown"))),
    }
}

fn build_nearfield(order: u64) -> Result<Nearfield, CmdError> {
    let pair = DicksonPair::for_order(order).map_err(CmdError::usage)?;
    Nearfield::dickson(pair).map_err(|e| match e {
        nearspace::Error::AxiomValidationFailed(_) => CmdError::Mismatch(e.to_string()),
        other => CmdError::Usage(other.to_string()),
    })
}

/// Loads a JSON array of vectors and settles the ambient dimension.
fn load_vectors(
    nf: &Nearfield,
    path: &str,
    n_flag: Option<usize>,
) -> Result<(usize, Vec<Vector>), CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {path}: {e}")))?;
    let raw: Vec<Vec<u64>> = serde_json::from_str(&text)
        .map_err(|e| CmdError::Usage(format!("{path}: expected an array of vectors: {e}")))?;
    let n = match (n_flag, raw.first()) {
        (Some(n), _) => n,
        (None, Some(first)) => first.len(),
        (None, None) => {
            return Err(CmdError::Usage(format!(
                "{path} holds no vectors; pass --n for the ambient dimension"
            )))
        }
    };
    let mut vectors = Vec::with_capacity(raw.len());
    for (i, coords) in raw.iter().enumerate() {
        if coords.len() != n {
            return Err(CmdError::Usage(format!(
                "{path}: vector {i} has {} coordinates, expected {n}",
                coords.len()
            )));
        }
        vectors.push(Vector::from_indices(nf, coords).map_err(CmdError::usage)?);
    }
    Ok((n, vectors))
}

fn vector_indices(v: &Vector) -> Vec<u64> {
    v.coords().iter().map(|c| c.0 as u64).collect()
}

fn cmd_nearfield_check(args: NearfieldCheckArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Text)?;
    let pair = DicksonPair::new(args.q, args.n).map_err(CmdError::usage)?;
    let nf = Nearfield::dickson(pair).map_err(|e| match e {
        nearspace::Error::AxiomValidationFailed(_) => CmdError::Mismatch(e.to_string()),
        other => CmdError::Usage(other.to_string()),
    })?;

    let mode = match args.mode.unwrap_or(ModeArg::Exhaustive) {
        ModeArg::Exhaustive => ValidationMode::Exhaustive,
        ModeArg::Sampled => {
            let samples = match args.samples {
                Some(s) => s,
                None => cfg
                    .u64_value("samples")
                    .map_err(CmdError::Usage)?
                    .unwrap_or(1_000_000),
            };
            let seed = match args.seed {
                Some(s) => Some(s),
                None => cfg.u64_value("seed").map_err(CmdError::Usage)?,
            };
            let seed = seed.ok_or_else(|| {
                CmdError::Usage("sampled mode needs an explicit --seed".into())
            })?;
            ValidationMode::Sampled {
                count: samples,
                seed,
            }
        }
    };

    let report = nf.validate_axioms(mode).map_err(CmdError::usage)?;
    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&json!({
            "pair": {"q": pair.q, "n": pair.n},
            "report": report,
        }))
        .expect("report serializes"),
        ReportFormat::Text => {
            let mut lines = vec![
                format!("nearfield of order {} (pair q={}, n={})", nf.order(), pair.q, pair.n),
                format!(
                    "mode: {}, {} triples checked",
                    match mode {
                        ValidationMode::Exhaustive => "exhaustive".to_string(),
                        ValidationMode::Sampled { count, seed } =>
                            format!("sampled (count {count}, seed {seed})"),
                    },
                    report.checked_triples
                ),
            ];
            let flag = |ok: bool| if ok { "PASS" } else { "FAIL" };
            lines.push(format!(
                "  additive group              {}",
                flag(report.additive_group.passed)
            ));
            lines.push(format!(
                "  multiplicative group        {}",
                flag(report.multiplicative_group.passed)
            ));
            lines.push(format!(
                "  left distributivity         {}",
                flag(report.left_distributivity.passed)
            ));
            lines.push(format!(
                "  zero symmetry               {}",
                flag(report.zero_symmetry.passed)
            ));
            lines.push(format!(
                "  negative-one commutation    {}",
                flag(report.neg_one_commutation.passed)
            ));
            lines.push(format!(
                "  paired zero distributivity  {}",
                flag(report.paired_zero_distributivity.passed)
            ));
            lines.push(match report.properness_witness {
                Some([a, b, c]) => {
                    format!("  properness witness          ({a}, {b}, {c})")
                }
                None => "  properness witness          none (right distributive)".to_string(),
            });
            lines.push(format!(
                "overall: {}",
                flag(report.all_passed())
            ));
            lines.join("\n")
        }
    };
    emit(args.output.as_deref(), &text)?;
    if !report.all_passed() {
        return Err(CmdError::Mismatch(format!(
            "axiom validation failed: {}",
            report.failed_checks().join(", ")
        )));
    }
    Ok(())
}

fn cmd_count(args: CountArgs, cfg: &FileConfig) -> CmdResult {
    if args.q < 3 {
        return Err(CmdError::Usage("--q must be at least 3".into()));
    }
    let format = resolve_table_format(args.format, cfg)?;
    let text = match args.dim {
        Some(dim) => {
            let rows: Vec<(u64, BigUint)> = (0..=args.n_max)
                .map(|n| (n, count_subgroups(args.q, dim, n)))
                .collect();
            match format {
                TableFormat::Csv => {
                    let mut out = vec!["n,count".to_string()];
                    out.extend(rows.iter().map(|(n, c)| format!("{n},{c}")));
                    out.join("\n")
                }
                TableFormat::Markdown => {
                    let mut out = vec!["| n | count |".to_string(), "| --- | --- |".to_string()];
                    out.extend(rows.iter().map(|(n, c)| format!("| {n} | {c} |")));
                    out.join("\n")
                }
                TableFormat::Json => serde_json::to_string_pretty(&json!({
                    "q": args.q,
                    "dim": dim,
                    "rows": rows
                        .iter()
                        .map(|(n, c)| json!({"n": n, "count": c.to_string()}))
                        .collect::<Vec<_>>(),
                }))
                .expect("serializes"),
            }
        }
        None => {
            let table = CountTable::build(args.q, args.n_max);
            render_table(&table, args.n_max, format)
        }
    };
    emit(args.output.as_deref(), &text)
}

fn render_table(table: &CountTable, n_max: u64, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut header = vec!["n".to_string()];
            header.extend((0..=n_max).map(|l| l.to_string()));
            header.push("total".to_string());
            let mut out = vec![header.join(",")];
            for row in &table.rows {
                let mut cells = vec![row.n.to_string()];
                for l in 0..=n_max {
                    cells.push(
                        row.counts
                            .get(l as usize)
                            .map(|c| c.to_string())
                            .unwrap_or_default(),
                    );
                }
                cells.push(row.total.to_string());
                out.push(cells.join(","));
            }
            out.join("\n")
        }
        TableFormat::Markdown => {
            let mut header = vec!["n".to_string()];
            header.extend((0..=n_max).map(|l| l.to_string()));
            header.push("total".to_string());
            let mut out = vec![
                format!("| {} |", header.join(" | ")),
                format!("|{}|", vec![" --- "; header.len()].join("|")),
            ];
            for row in &table.rows {
                let mut cells = vec![row.n.to_string()];
                for l in 0..=n_max {
                    cells.push(
                        row.counts
                            .get(l as usize)
                            .map(|c| c.to_string())
                            .unwrap_or_else(|| " ".to_string()),
                    );
                }
                cells.push(row.total.to_string());
                out.push(format!("| {} |", cells.join(" | ")));
            }
            out.join("\n")
        }
        TableFormat::Json => serde_json::to_string_pretty(&json!({
            "q": table.q,
            "n_max": n_max,
            "rows": table
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "counts": row.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "total": row.total.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        }))
        .expect("serializes"),
    }
}

fn cmd_brute_count(args: BruteCountArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Text)?;
    let nf = build_nearfield(args.q)?;
    let budget = match args.budget {
        Some(b) => b,
        None => cfg
            .u64_value("budget")
            .map_err(CmdError::Usage)?
            .unwrap_or(DEFAULT_PAIR_BUDGET),
    };
    let oracle = brute_count(&nf, args.n, budget).map_err(CmdError::usage)?;
    let formula: Vec<BigUint> = (0..=args.n)
        .map(|l| count_subgroups(args.q, l, args.n))
        .collect();
    let all_match = oracle
        .iter()
        .zip(&formula)
        .all(|(&got, want)| BigUint::from(got) == *want);

    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&json!({
            "q": args.q,
            "n": args.n,
            "oracle": oracle,
            "formula": formula.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "match": all_match,
        }))
        .expect("serializes"),
        ReportFormat::Text => {
            let mut lines = vec![format!(
                "order {}, n = {}: {} generator pairs enumerated",
                args.q,
                args.n,
                args.q.pow(2 * args.n as u32)
            )];
            lines.push("dim  oracle  formula  match".to_string());
            for (l, (&got, want)) in oracle.iter().zip(&formula).enumerate() {
                lines.push(format!(
                    "{l:>3}  {got:>6}  {want:>7}  {}",
                    if BigUint::from(got) == *want { "yes" } else { "NO" }
                ));
            }
            lines.push(if all_match {
                "PASS: oracle matches the formula".to_string()
            } else {
                "FAIL: oracle disagrees with the formula".to_string()
            });
            lines.join("\n")
        }
    };
    emit(args.output.as_deref(), &text)?;
    if !all_match {
        return Err(CmdError::Mismatch(
            "brute-force counts disagree with the formula".into(),
        ));
    }
    Ok(())
}

fn cmd_gen(args: GenArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Json)?;
    let nf = build_nearfield(args.q)?;
    let (n, vectors) = load_vectors(&nf, &args.vectors, args.n)?;
    let result = generated_subgroup(&nf, n, &vectors).map_err(CmdError::usage)?;

    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&json!({
            "q": args.q,
            "n": n,
            "dim": result.subgroup.dim(),
            "subgroup": result.subgroup,
            "certificates": result
                .certificates
                .iter()
                .map(|c| vector_indices(&c.to_vector()))
                .collect::<Vec<_>>(),
            "column_classes": result.column_classes,
        }))
        .expect("serializes"),
        ReportFormat::Text => {
            let mut lines = vec![format!(
                "generated subgroup in R^{n} over order {}: dimension {}",
                args.q,
                result.subgroup.dim()
            )];
            for block in result.subgroup.blocks() {
                let values: Vec<String> = block
                    .values
                    .iter()
                    .map(|(j, v)| format!("{j}:{}", v.0))
                    .collect();
                lines.push(format!(
                    "  block pivot {}: {}",
                    block.pivot,
                    values.join(" ")
                ));
            }
            lines.push(format!(
                "  forced-zero coordinates: {:?}",
                result.subgroup.zero_coordinates()
            ));
            lines.push(format!("  certificates: {}", result.certificates.len()));
            lines.join("\n")
        }
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_lc_index(args: LcIndexArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Json)?;
    let nf = build_nearfield(args.q)?;
    let (n, vectors) = load_vectors(&nf, &args.vectors, args.n)?;
    let cap = match args.cap {
        Some(c) => c,
        None => cfg
            .u64_value("enum_cap")
            .map_err(CmdError::Usage)?
            .unwrap_or(DEFAULT_ENUM_CAP),
    };
    let trace = lc_closure(&nf, n, &vectors, cap).map_err(CmdError::usage)?;

    let text = match format {
        ReportFormat::Json => {
            let mut value = json!({
                "q": args.q,
                "n": n,
                "levels": trace.levels,
                "index": trace.index,
                "final_size": trace.elements.len(),
            });
            if args.elements {
                value["elements"] = json!(trace
                    .elements
                    .iter()
                    .map(vector_indices)
                    .collect::<Vec<_>>());
            }
            serde_json::to_string_pretty(&value).expect("serializes")
        }
        ReportFormat::Text => format!(
            "closure in R^{n} over order {}: levels {:?}, index {}, final size {}",
            args.q,
            trace.levels,
            trace.index,
            trace.elements.len()
        ),
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_lc_search(args: LcSearchArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Json)?;
    let nf = build_nearfield(args.q)?;
    let cap = match args.cap {
        Some(c) => c,
        None => cfg
            .u64_value("enum_cap")
            .map_err(CmdError::Usage)?
            .unwrap_or(DEFAULT_ENUM_CAP),
    };
    let strategy = match args.random {
        None => SearchStrategy::Exhaustive,
        Some(count) => {
            let seed = match args.seed {
                Some(s) => Some(s),
                None => cfg.u64_value("seed").map_err(CmdError::Usage)?,
            };
            let seed = seed.ok_or_else(|| {
                CmdError::Usage("--random needs an explicit --seed".into())
            })?;
            SearchStrategy::Random { count, seed }
        }
    };
    let report = search_linearity_index(&nf, 1..=args.n_max, 1..=args.k_max, strategy, cap)
        .map_err(CmdError::usage)?;

    let text = match format {
        ReportFormat::Json => {
            let mut value = serde_json::to_value(&report).expect("serializes");
            value["q"] = json!(args.q);
            value["n_max"] = json!(args.n_max);
            value["k_max"] = json!(args.k_max);
            serde_json::to_string_pretty(&value).expect("serializes")
        }
        ReportFormat::Text => {
            let mut lines = vec![format!(
                "linearity-index search over order {}, n \u{2264} {}, k \u{2264} {}",
                args.q, args.n_max, args.k_max
            )];
            lines.push(format!("max index observed: {}", report.max_index));
            for (index, count) in &report.counts {
                lines.push(format!("  index {index}: {count} tuples"));
            }
            lines.push(format!("witnesses at max: {}", report.witnesses.len()));
            for w in report.witnesses.iter().take(10) {
                let rendered: Vec<Vec<u64>> = w.iter().map(vector_indices).collect();
                lines.push(format!("  {rendered:?}"));
            }
            if report.witnesses.len() > 10 {
                lines.push(format!("  ... {} more", report.witnesses.len() - 10));
            }
            lines.join("\n")
        }
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_mdim(args: MdimArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Text)?;
    if args.q < 2 || args.k < 1 {
        return Err(CmdError::Usage("need q \u{2265} 2 and k \u{2265} 1".into()));
    }
    let value = mdim(args.q, args.k);
    let text = match format {
        ReportFormat::Text => value.to_string(),
        ReportFormat::Json => serde_json::to_string_pretty(&json!({
            "q": args.q,
            "k": args.k,
            "mdim": value.to_string(),
        }))
        .expect("serializes"),
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_seedset(args: SeedsetArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Json)?;
    let nf = build_nearfield(args.q)?;
    let text = std::fs::read_to_string(&args.subgroup)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", args.subgroup)))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CmdError::Usage(format!("{}: not JSON: {e}", args.subgroup)))?;
    // Accept the `gen` output document as-is, or a bare subgroup object.
    let sub_value = value.get("subgroup").cloned().unwrap_or(value);
    let parsed: CanonicalSubgroup = serde_json::from_value(sub_value)
        .map_err(|e| CmdError::Usage(format!("{}: not a subgroup: {e}", args.subgroup)))?;
    let subgroup = parsed.revalidate(&nf).map_err(CmdError::usage)?;

    let seeds = find_seed_set(&nf, &subgroup).map_err(|e| match e {
        nearspace::Error::InternalInconsistency(_) => CmdError::Mismatch(e.to_string()),
        other => CmdError::Usage(other.to_string()),
    })?;

    let out = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&json!({
            "q": args.q,
            "n": subgroup.ambient_dim(),
            "dim": subgroup.dim(),
            "seed_number": seed_number(args.q, subgroup.dim() as u64),
            "seeds": seeds.iter().map(vector_indices).collect::<Vec<_>>(),
        }))
        .expect("serializes"),
        ReportFormat::Text => {
            let mut lines = vec![format!(
                "seed set for a dim-{} subgroup of R^{} over order {}: {} vectors",
                subgroup.dim(),
                subgroup.ambient_dim(),
                args.q,
                seeds.len()
            )];
            for s in &seeds {
                lines.push(format!("  {:?}", vector_indices(s)));
            }
            lines.join("\n")
        }
    };
    emit(args.output.as_deref(), &out)
}

fn cmd_verify(args: VerifyArgs, cfg: &FileConfig) -> CmdResult {
    let format = resolve_report_format(args.format, cfg, ReportFormat::Text)?;
    let fixtures_path = args
        .fixtures
        .clone()
        .or_else(|| cfg.str_value("fixtures").map(String::from));
    let fixtures = verify::Fixtures::load(fixtures_path.as_deref()).map_err(CmdError::Usage)?;
    let samples = match args.samples {
        Some(s) => s,
        None => cfg
            .u64_value("samples")
            .map_err(CmdError::Usage)?
            .unwrap_or(1_000_000),
    };
    let seed = match args.seed {
        Some(s) => s,
        None => cfg.u64_value("seed").map_err(CmdError::Usage)?.unwrap_or(1),
    };
    let settings = verify::VerifySettings {
        orders: args.orders.unwrap_or_else(|| vec![9, 64, 625]),
        samples,
        seed,
        slow: args.slow,
    };

    let outcomes = verify::run(&settings, &fixtures).map_err(CmdError::Usage)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();

    match format {
        ReportFormat::Json => {
            let text = serde_json::to_string_pretty(&json!({
                "checks": outcomes,
                "failed": failed,
            }))
            .expect("serializes");
            println!("{text}");
        }
        ReportFormat::Text => {
            for o in &outcomes {
                println!(
                    "{} {} ({})",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.detail
                );
            }
            println!(
                "verify: {} checks, {} failed",
                outcomes.len(),
                failed
            );
        }
    }
    if failed > 0 {
        return Err(CmdError::Mismatch(format!("{failed} checks failed")));
    }
    Ok(())
}
