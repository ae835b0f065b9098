//! Command-line front door: bounds, class checks, feasibility verdicts,
//! range tables, constructions, exhaustive search and structural
//! verification. JSON output is schema-stable and timestamp-free; see
//! docs/cli.md for the schemas.

use clap::{Args, Parser, Subcommand};
use mdd::constructions;
use mdd::feasibility::{self, Status};
use mdd::graph6;
use mdd::metrics::{self, GraphSpec};
use mdd::search::{self, SearchOptions, Strategy};
use mdd::structure;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "mdd", version, about = "Degree/diameter analysis for bipartite graphs of small defect")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Maximum degree Δ (>= 2)
    #[arg(long)]
    delta: usize,
    /// Diameter D (>= 2)
    #[arg(long)]
    diameter: usize,
    /// Defect ε (>= 0)
    #[arg(long)]
    defect: usize,
}

impl SpecArgs {
    fn spec(&self) -> Result<GraphSpec, CliError> {
        GraphSpec::new(self.delta, self.diameter, self.defect)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Moore bipartite bound and the best known upper bound
    Bound {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        diameter: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check graph6/sparse6 files against a (Δ,D,-ε) class, line by line
    Check {
        files: Vec<PathBuf>,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Existence verdict for a (Δ,D,-ε) class with citation-tagged reasons
    Feasible {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Verdict table over degree or residue ranges (CSV by default)
    Table {
        /// Defect shared by every row
        #[arg(long)]
        defect: usize,
        /// Degree range "lo:hi" (point mode)
        #[arg(long, conflicts_with = "residues")]
        delta_range: Option<String>,
        /// Residue-class mode: one row per (d-1) mod (D-1), defect 4 only
        #[arg(long)]
        residues: bool,
        /// Diameter range "lo:hi"
        #[arg(long)]
        diameter_range: String,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a named construction and emit graph6
    Construct {
        /// delorme-22 | delorme-38 | heawood | claw | cycle:K | path:K |
        /// kab:A,B | circulant:N:O1,O2,... | pg2:Q
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive isomorph-free catalogue search for a (Δ,D,-ε) class
    Search {
        #[command(flatten)]
        spec: SpecArgs,
        /// Catalogue output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Worker count (default: MDD_JOBS, else logical CPU count)
        #[arg(long)]
        jobs: Option<usize>,
        /// Node-expansion cap
        #[arg(long)]
        budget: Option<u64>,
        /// vertex-augmentation (default) or edge-augmentation
        #[arg(long)]
        strategy: Option<String>,
        /// Override the desk-scale order gate (default 32, hard cap 64)
        #[arg(long)]
        max_order: Option<usize>,
        /// Force a minimum girth during generation
        #[arg(long)]
        girth_floor: Option<usize>,
        /// Checkpoint file for resumable runs
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the defect-4 structural theorem suite on graph6 files
    VerifyStructure {
        file: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
}

enum CliError {
    Usage(String),
    Negative,
    Internal(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli.command));
    match outcome {
        Ok(Ok(())) => ExitCode::from(EXIT_OK),
        Ok(Err(CliError::Negative)) => ExitCode::from(EXIT_NEGATIVE),
        Ok(Err(CliError::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(_) => {
            eprintln!("internal error: panic");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bound {
            delta,
            diameter,
            json,
        } => bound(delta, diameter, json),
        Command::Check { files, spec, json } => check(&files, spec.spec()?, json),
        Command::Feasible { spec, json } => feasible(spec.spec()?, json),
        Command::Table {
            defect,
            delta_range,
            residues,
            diameter_range,
            json,
            output,
        } => table(defect, delta_range, residues, &diameter_range, json, output),
        Command::Construct { name, output, json } => construct(&name, output, json),
        Command::Search {
            spec,
            output,
            jobs,
            budget,
            strategy,
            max_order,
            girth_floor,
            checkpoint,
            json,
        } => run_search(
            spec.spec()?,
            output,
            jobs,
            budget,
            strategy,
            max_order,
            girth_floor,
            checkpoint,
            json,
        ),
        Command::VerifyStructure { file, spec, json } => verify(&file, spec.spec()?, json),
    }
}

fn bound(delta: usize, diameter: usize, json: bool) -> Result<(), CliError> {
    let moore = metrics::moore_bound(delta, diameter).map_err(|e| CliError::Usage(e.to_string()))?;
    let best = feasibility::best_upper_bound(delta, diameter)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if json {
        let payload = json!({
            "delta": delta.to_string(),
            "diameter": diameter.to_string(),
            "moore_bound": moore.to_decimal(),
            "best_upper_bound": best.bound,
            "kind": best.kind,
            "justification": best.justification,
        });
        println!("{payload}");
    } else {
        println!(
            "Moore bipartite bound M^b({delta},{diameter}) = {}",
            moore.to_decimal()
        );
        let qualifier = match best.kind {
            feasibility::BoundKind::Exact => "exactly",
            feasibility::BoundKind::Upper => "at most",
        };
        println!("maximum order is {qualifier} {}", best.bound);
        for j in &best.justification {
            println!("  - {j}");
        }
    }
    Ok(())
}

type ParsedRecord = (usize, Result<mdd::BipartiteGraph, mdd::GraphError>);

fn read_records(path: &PathBuf) -> Result<Vec<ParsedRecord>, CliError> {
    let text = std::fs::read(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.split(|&b| b == b'\n').enumerate() {
        let trimmed: Vec<u8> = line
            .iter()
            .copied()
            .filter(|b| !b.is_ascii_whitespace())
            .collect();
        if trimmed.is_empty() || trimmed.starts_with(b"#") {
            continue;
        }
        out.push((idx + 1, graph6::parse_record(&trimmed)));
    }
    Ok(out)
}

fn check(files: &[PathBuf], spec: GraphSpec, json: bool) -> Result<(), CliError> {
    if files.is_empty() {
        return Err(CliError::Usage("check needs at least one file".into()));
    }
    let mut all_ok = true;
    let mut payload = Vec::new();
    for file in files {
        for (line, parsed) in read_records(file)? {
            let entry = match parsed {
                Ok(g) => {
                    let result = metrics::check_spec(&g, spec);
                    let report = metrics::graph_report(&g)
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    all_ok &= result.ok;
                    let failed: Vec<&str> = result
                        .clauses
                        .iter()
                        .filter(|c| !c.ok)
                        .map(|c| c.clause)
                        .collect();
                    if !json {
                        let mark = if result.ok { "ok" } else { "FAIL" };
                        println!(
                            "{}:{line}: {mark} delta={} diameter={} order={} defect={}{}",
                            file.display(),
                            report.delta,
                            report.diameter,
                            report.order,
                            report.defect,
                            if failed.is_empty() {
                                String::new()
                            } else {
                                format!(" failed={}", failed.join(","))
                            }
                        );
                    }
                    json!({
                        "file": file.display().to_string(),
                        "line": line,
                        "ok": result.ok,
                        "failed_clauses": failed,
                        "graph": report,
                    })
                }
                Err(e) => {
                    all_ok = false;
                    if !json {
                        println!("{}:{line}: FAIL unreadable: {e}", file.display());
                    }
                    json!({
                        "file": file.display().to_string(),
                        "line": line,
                        "ok": false,
                        "error": e.to_string(),
                    })
                }
            };
            payload.push(entry);
        }
    }
    if json {
        println!("{}", json!({ "spec": spec, "results": payload }));
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Negative)
    }
}

fn feasible(spec: GraphSpec, json: bool) -> Result<(), CliError> {
    let verdict = feasibility::verdict(spec);
    if json {
        println!(
            "{}",
            serde_json::to_string(&verdict).map_err(|e| CliError::Internal(e.to_string()))?
        );
    } else {
        let status = match verdict.status {
            Status::Exists => "exists",
            Status::Impossible => "impossible",
            Status::Unknown => "unknown",
        };
        println!("{spec}: {status}");
        if let Some(w) = &verdict.witness {
            println!("  witness: {w}");
        }
        for r in &verdict.reasons {
            println!("  [{}] {}", r.tag, r.detail);
        }
        for n in &verdict.notes {
            println!("  note: {n}");
        }
    }
    match verdict.status {
        Status::Impossible => Err(CliError::Negative),
        _ => Ok(()),
    }
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("range must be lo:hi, got '{text}'")))?;
    let lo: usize = lo
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range bound '{lo}'")))?;
    let hi: usize = hi
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range bound '{hi}'")))?;
    if lo > hi {
        return Err(CliError::Usage("empty range".into()));
    }
    Ok(lo..=hi)
}

fn table(
    defect: usize,
    delta_range: Option<String>,
    residues: bool,
    diameter_range: &str,
    json: bool,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let diameters = parse_range(diameter_range)?;
    let rows = if residues {
        if defect != 4 {
            return Err(CliError::Usage(
                "residue-class mode is specific to defect 4".into(),
            ));
        }
        feasibility::scan_table_residues(diameters).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        let deltas = parse_range(&delta_range.ok_or_else(|| {
            CliError::Usage("point mode needs --delta-range lo:hi".into())
        })?)?;
        feasibility::scan_table(defect, deltas, diameters)
    };
    let rendered = if json {
        serde_json::to_string(&rows).map_err(|e| CliError::Internal(e.to_string()))? + "\n"
    } else {
        feasibility::scan_rows_to_csv(&rows)
    };
    match output {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn construct(name: &str, output: Option<PathBuf>, json: bool) -> Result<(), CliError> {
    let g = constructions::build_by_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let record = graph6::write_graph6(&g);
    let rendered = if json {
        let report = metrics::graph_report(&g).map_err(|e| CliError::Internal(e.to_string()))?;
        serde_json::to_string(&json!({
            "name": name,
            "graph6": record,
            "graph": report,
        }))
        .map_err(|e| CliError::Internal(e.to_string()))?
            + "\n"
    } else {
        record + "\n"
    };
    match output {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn default_jobs() -> usize {
    if let Ok(text) = std::env::var("MDD_JOBS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    spec: GraphSpec,
    output: Option<PathBuf>,
    jobs: Option<usize>,
    budget: Option<u64>,
    strategy: Option<String>,
    max_order: Option<usize>,
    girth_floor: Option<usize>,
    checkpoint: Option<PathBuf>,
    json: bool,
) -> Result<(), CliError> {
    let mut opts = SearchOptions::new(spec).with_jobs(jobs.unwrap_or_else(default_jobs));
    if let Some(b) = budget {
        opts = opts.with_budget(b);
    }
    if let Some(m) = max_order {
        opts = opts.with_max_order(m);
    }
    opts.girth_floor = girth_floor;
    opts.checkpoint_path = checkpoint;
    if let Some(text) = strategy {
        opts.strategy = match text.as_str() {
            "vertex-augmentation" | "vertex" => Strategy::VertexAugmentation,
            "edge-augmentation" | "edge" => Strategy::EdgeAugmentation,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown strategy '{other}' (vertex-augmentation | edge-augmentation)"
                )))
            }
        };
    }
    let cat = search::enumerate(&opts).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &output {
        search::save_catalogue(&cat, path).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    if json {
        let payload = json!({
            "spec": spec,
            "members": cat.members.len(),
            "complete": cat.complete,
            "members_graph6": cat.canonical_lines(),
            "provenance": cat.provenance,
            "output": output.as_ref().map(|p| p.display().to_string()),
        });
        println!("{payload}");
    } else {
        println!(
            "{spec}: {} graph(s), search {}",
            cat.members.len(),
            if cat.complete {
                "complete"
            } else {
                "budget-truncated"
            }
        );
        if output.is_none() {
            for line in cat.canonical_lines() {
                println!("{line}");
            }
        }
    }
    if cat.complete {
        Ok(())
    } else {
        Err(CliError::Negative)
    }
}

fn verify(file: &PathBuf, spec: GraphSpec, json: bool) -> Result<(), CliError> {
    if spec.defect != 4 {
        return Err(CliError::Usage(
            "the structural theorem suite applies to defect-4 classes".into(),
        ));
    }
    let mut all_ok = true;
    let mut payload = Vec::new();
    for (line, parsed) in read_records(file)? {
        match parsed {
            Ok(g) => {
                if !metrics::check_spec(&g, spec).ok {
                    all_ok = false;
                    if !json {
                        println!("{}:{line}: FAIL not a member of {spec}", file.display());
                    }
                    payload.push(json!({
                        "line": line,
                        "ok": false,
                        "error": format!("graph is not a member of {spec}"),
                    }));
                    continue;
                }
                let report = structure::verify_structure(&g, spec);
                all_ok &= report.passed();
                if !json {
                    println!(
                        "{}:{line}: {} girth_ok={} cor45_ok={} partition=({},{},{}) pairing={}",
                        file.display(),
                        if report.passed() { "ok" } else { "FAIL" },
                        report.girth_ok,
                        report.cor45_ok,
                        report.partition.s_d1,
                        report.partition.s_d2,
                        report.partition.s_d3,
                        report.repeat_pairing_ok,
                    );
                    for v in &report.violations {
                        println!("    violation: {v}");
                    }
                }
                payload.push(json!({ "line": line, "report": report }));
            }
            Err(e) => {
                all_ok = false;
                if !json {
                    println!("{}:{line}: FAIL unreadable: {e}", file.display());
                }
                payload.push(json!({ "line": line, "ok": false, "error": e.to_string() }));
            }
        }
    }
    if json {
        println!("{}", json!({ "spec": spec, "results": payload }));
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Negative)
    }
}
