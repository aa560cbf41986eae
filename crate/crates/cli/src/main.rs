//! `dyncycle`: generate workloads, replay them through a structure, verify
//! answers against brute-force oracles and record per-operation timings.
//!
//! Exit codes: 0 success, 1 answer mismatch, 2 input error.

mod session;
mod workload_file;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dyncycle_core::harness::{generate, Op, UpdateKind, WeightRegime, WorkloadParams, MAX_WEIGHT};
use dyncycle_core::sssp::dijkstra_calls;

use session::{Params, Session, Structure};
use workload_file::{read_pairs, read_workload, write_workload, ParsedWorkload};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::input(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "dyncycle",
    version,
    about = "Dynamic minimum-weight cycle structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random workload.
    Gen(GenArgs),
    /// Replay a workload and write one CSV row per query.
    Run(RunArgs),
    /// Compare query answers with brute-force recomputation.
    Check(CheckArgs),
    /// Replay a workload and write per-operation timings and counters.
    Bench(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Nonneg,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Vertex,
    Edge,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    updates: usize,
    #[arg(long, value_enum, default_value = "nonneg")]
    weights: RegimeArg,
    /// Largest weight magnitude.
    #[arg(long = "W", default_value_t = 100)]
    max_weight: u64,
    /// Target average out-degree.
    #[arg(long, default_value_t = 2.0)]
    degree: f64,
    #[arg(long, value_enum, default_value = "vertex")]
    kind: KindArg,
    /// Insert a query after every this many updates; 0 for none.
    #[arg(long, default_value_t = 1)]
    query_every: usize,
    #[arg(long, env = "DYNCYCLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long, value_enum)]
    structure: Structure,
    /// Threshold for `threshold` and `edge-threshold`.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Lower bound on positive cycle weights (approx).
    #[arg(long)]
    c: Option<f64>,
    /// Upper bound on positive cycle weights (approx); defaults to n * W.
    #[arg(long = "C")]
    cap: Option<f64>,
    /// Phase length of the exact structures.
    #[arg(long)]
    delta: Option<usize>,
    /// File of `s t` lines (mpsp).
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long, env = "DYNCYCLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Workload path; standard input when omitted or `-`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    structure: StructureArgs,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    structure: StructureArgs,
    /// Results CSV to verify instead of running the structure.
    #[arg(long)]
    expected: Option<PathBuf>,
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let f = File::open(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufReader::new(f)))
        }
        _ => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn read_pairs_file(path: &Path) -> Result<Vec<(usize, usize)>, Failure> {
    let f = File::open(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    read_pairs(BufReader::new(f))
}

/// Loads the workload and builds a session for it.
fn prepare(args: &StructureArgs) -> Result<(ParsedWorkload, Session), Failure> {
    let workload = read_workload(open_input(&args.input)?)?;
    let pairs = match &args.pairs {
        Some(p) => read_pairs_file(p)?,
        None => Vec::new(),
    };
    let params = Params {
        structure: args.structure,
        mu: args.mu,
        eps: args.eps,
        c: args.c,
        cap: args.cap,
        delta: args.delta,
        pairs,
        seed: args.seed,
    };
    let h = &workload.header;
    let default_cap = (h.n as f64 * h.max_weight as f64).max(1.0);
    let session = Session::new(h.n, &params, default_cap).map_err(Failure::input)?;
    Ok((workload, session))
}

fn apply_at(session: &mut Session, line: usize, op: &Op) -> Result<(), Failure> {
    session
        .apply(op)
        .map_err(|e| Failure::input(format!("line {line}: {e}")))
}

fn answer_at(session: &Session, line: usize) -> Result<String, Failure> {
    session
        .answer()
        .map_err(|e| Failure::input(format!("line {line}: {e}")))
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    if args.max_weight > MAX_WEIGHT {
        return Err(Failure::input(format!("--W must be at most {MAX_WEIGHT}")));
    }
    if args.degree.is_nan() || args.degree < 0.0 {
        return Err(Failure::input("--degree must be non-negative"));
    }
    let params = WorkloadParams {
        n: args.n,
        seed: args.seed,
        updates: args.updates,
        regime: match args.weights {
            RegimeArg::Nonneg => WeightRegime::NonNeg,
            RegimeArg::Signed => WeightRegime::Signed,
        },
        max_weight: args.max_weight,
        avg_degree: args.degree,
        kind: match args.kind {
            KindArg::Vertex => UpdateKind::Vertex,
            KindArg::Edge => UpdateKind::Edge,
        },
        query_every: args.query_every,
    };
    let mut out = open_output(&args.out)?;
    write_workload(&mut out, &generate(&params))?;
    out.flush()?;
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let (workload, mut session) = prepare(&args.structure)?;
    let mut out = csv::Writer::from_writer(open_output(&args.out)?);
    out.write_record(["query_index", "answer"])?;
    let mut q = 0usize;
    for (line, op) in &workload.ops {
        apply_at(&mut session, *line, op)?;
        if *op == Op::Query {
            out.write_record([q.to_string(), answer_at(&session, *line)?])?;
            q += 1;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_expected(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Failure::input(format!(
                "{}: expected two columns, got {}",
                path.display(),
                rec.len()
            )));
        }
        rows.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(rows)
}

fn cmd_check(args: &CheckArgs) -> Result<(), Failure> {
    let (workload, mut session) = prepare(&args.structure)?;
    let given = match &args.expected {
        Some(p) => Some(read_expected(p)?),
        None => None,
    };
    let mut q = 0usize;
    let mut mismatches = 0usize;
    let stderr = io::stderr();
    let mut report = stderr.lock();
    for (line, op) in &workload.ops {
        apply_at(&mut session, *line, op)?;
        if *op != Op::Query {
            continue;
        }
        let oracle = session.expected();
        let got = match &given {
            Some(rows) => rows.get(q).map(|(idx, ans)| {
                if *idx == q.to_string() {
                    ans.clone()
                } else {
                    format!("<row labelled {idx}>")
                }
            }),
            None => Some(answer_at(&session, *line)?),
        };
        match got {
            Some(ans) if ans == oracle => {}
            Some(ans) => {
                mismatches += 1;
                writeln!(
                    report,
                    "query {q} (line {line}): got {ans}, oracle {oracle}"
                )?;
            }
            None => {
                mismatches += 1;
                writeln!(report, "query {q} (line {line}): missing, oracle {oracle}")?;
            }
        }
        q += 1;
    }
    if let Some(rows) = &given {
        if rows.len() > q {
            mismatches += rows.len() - q;
            writeln!(report, "{} rows beyond the last query", rows.len() - q)?;
        }
    }
    println!("{q} queries checked, {mismatches} mismatches");
    if mismatches > 0 {
        Err(Failure::mismatch(format!("{mismatches} mismatches")))
    } else {
        Ok(())
    }
}

fn op_kind(op: &Op) -> &'static str {
    match op {
        Op::VertexUpdate { .. } => "vertex_update",
        Op::InsertEdge { .. } => "insert_edge",
        Op::DeleteEdge { .. } => "delete_edge",
        Op::Query => "query",
    }
}

fn cmd_bench(args: &RunArgs) -> Result<(), Failure> {
    let (workload, mut session) = prepare(&args.structure)?;
    let mut out = csv::Writer::from_writer(open_output(&args.out)?);
    out.write_record([
        "op_index",
        "op_kind",
        "wall_ns",
        "dijkstra_calls",
        "update_calls",
    ])?;
    for (i, (line, op)) in workload.ops.iter().enumerate() {
        let calls = dijkstra_calls();
        let updates = session.update_calls();
        let start = Instant::now();
        if *op == Op::Query {
            answer_at(&session, *line)?;
        } else {
            apply_at(&mut session, *line, op)?;
        }
        let ns = start.elapsed().as_nanos();
        out.write_record([
            i.to_string(),
            op_kind(op).to_string(),
            ns.to_string(),
            (dijkstra_calls() - calls).to_string(),
            (session.update_calls() - updates).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dyncycle: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn header_weights_names() {
        assert_eq!(
            serde_json::to_string(&workload_file::Weights::Nonneg).unwrap(),
            "\"nonneg\""
        );
    }
}
