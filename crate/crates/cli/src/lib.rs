//! Command-line front end. `run` holds all behavior so tests can drive it
//! without spawning a process.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graphsym::amenability::{amenable_iso, check_amenable, Violation};
use graphsym::cell_structure::anisotropic_components;
use graphsym::generators::{benchmark_instance, generate, named, random_amenable, Family, GraphSpec, ShapeParams};
use graphsym::oracle::{self, OracleError, OracleLimits};
use graphsym::symmetry::{analyze, CountMode, SymmetryError, SymmetryReport};
use graphsym::{stable_partition, Graph};

#[derive(Debug, Parser)]
#[command(name = "graphsym", version, about = "Color refinement and symmetry parameters of amenable graphs")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Args)]
struct GlobalOpts {
    /// Input format; inferred from the file extension when omitted
    /// (`.g6`/`.graph6` is graph6, anything else an edge list).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the brute-force size guards.
    #[arg(long, global = true)]
    max_oracle_n: Option<usize>,
    /// Evaluate leg counts with big integers instead of saturating.
    #[arg(long, global = true)]
    exact_counts: bool,
    /// Print the per-component breakdown.
    #[arg(long, global = true)]
    components: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stable partition (coarsest equitable partition).
    Refine { input: String },
    /// Cell graph and anisotropic forest.
    Cells { input: String },
    /// Amenability verdict.
    Amenable { input: String },
    /// Distinguishing number of an amenable graph.
    Dist { input: String },
    /// Fixing number of an amenable graph.
    Fix { input: String },
    /// Isomorphism test, exact when either graph is amenable.
    Iso { g: String, h: String },
    /// Brute-force reference computations for small graphs.
    Oracle {
        #[arg(value_enum)]
        op: OracleOp,
        input: String,
        /// Number of colors for `count`.
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// Work relative to the stable partition instead of the unit one.
        #[arg(long)]
        celled: bool,
    },
    /// Emit a graph from a named family, a spec file or the random generator.
    Gen {
        #[arg(long, conflicts_with_all = ["spec", "random", "bench"])]
        family: Option<String>,
        /// JSON component spec.
        #[arg(long)]
        spec: Option<String>,
        /// Random amenable graph with at most this many vertices.
        #[arg(long)]
        random: Option<usize>,
        /// Benchmark instance with about this many vertices.
        #[arg(long)]
        bench: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        out: Format,
    },
    /// Time dist+fix on benchmark instances; CSV on stdout, summary on stderr.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000, 40_000, 80_000, 160_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleOp {
    Aut,
    Dist,
    Fix,
    Count,
}

/// A failure with its exit code: 1 for input problems, 2 for refusals
/// (not amenable, over an oracle guard).
struct Failure {
    code: i32,
    message: String,
    payload: Value,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure { code: 1, message: format!("{e:#}"), payload: json!({ "error": "input", "message": format!("{e:#}") }) }
    }
}

impl From<SymmetryError> for Failure {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::NotAmenable(verdict) => Failure {
                code: 2,
                message: format!("not amenable: {}", describe(verdict.violation().expect("verdict is negative"))),
                payload: json!({ "error": "not_amenable", "verdict": verdict.to_json() }),
            },
            other => Failure { code: 1, message: other.to_string(), payload: json!({ "error": "internal", "message": other.to_string() }) },
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let (code, kind) = match e {
            OracleError::TooLarge { .. } => (2, "too_large"),
            _ => (1, "oracle"),
        };
        Failure { code, message: e.to_string(), payload: json!({ "error": kind, "message": e.to_string() }) }
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let json_mode = cli.opts.json;
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            if json_mode {
                let _ = writeln!(stdout, "{}", f.payload);
            }
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let o = &cli.opts;
    match &cli.cmd {
        Command::Refine { input } => {
            let g = load(input, o.format)?;
            let p = stable_partition(&g);
            if o.json {
                emit(out, &p.to_json())
            } else {
                for cell in p.cells() {
                    emit_line(out, &join(cell))?;
                }
                Ok(())
            }
        }
        Command::Cells { input } => cmd_cells(&load(input, o.format)?, o, out),
        Command::Amenable { input } => {
            let g = load(input, o.format)?;
            let verdict = check_amenable(&g);
            if o.json {
                return emit(out, &verdict.to_json());
            }
            match (verdict.forest(), verdict.violation()) {
                (Some(f), _) => emit_line(out, &format!("amenable ({} components)", f.components.len())),
                (None, Some(v)) => emit_line(out, &format!("not amenable: {}", describe(v))),
                (None, None) => unreachable!(),
            }
        }
        Command::Dist { input } | Command::Fix { input } => {
            let g = load(input, o.format)?;
            let mode = if o.exact_counts { CountMode::Exact } else { CountMode::Saturating };
            let report = analyze(&g, mode)?;
            let dist = matches!(cli.cmd, Command::Dist { .. });
            print_report(&report, dist, o, out)
        }
        Command::Iso { g, h } => {
            let answer = amenable_iso(&load(g, o.format)?, &load(h, o.format)?);
            if o.json {
                emit(out, &json!({ "answer": answer }))
            } else {
                emit_line(out, &format!("{answer:?}"))
            }
        }
        Command::Oracle { op, input, colors, celled } => {
            let g = load(input, o.format)?;
            let limits = o.max_oracle_n.map(OracleLimits::uniform).unwrap_or_default();
            let p = celled.then(|| stable_partition(&g));
            let p = p.as_ref();
            let value = match op {
                OracleOp::Aut => {
                    let s = oracle::aut_summary(&g, p, limits)?;
                    let gens: Vec<&[usize]> = s.generators.iter().map(|p| p.images()).collect();
                    json!({ "order": s.order.to_string(), "generators": gens })
                }
                OracleOp::Dist => json!(oracle::dist_number_bf(&g, p, limits)?),
                OracleOp::Fix => json!(oracle::fix_number_bf(&g, p, limits)?),
                OracleOp::Count => json!(oracle::dist_count_bf(&g, p, *colors, limits)?.to_string()),
            };
            match (&value, o.json) {
                (_, true) => emit(out, &json!({ "op": format!("{op:?}").to_lowercase(), "value": value })),
                (Value::Object(m), false) => emit_line(out, m["order"].as_str().unwrap_or_default()),
                (Value::String(s), false) => emit_line(out, s),
                (v, false) => emit_line(out, &v.to_string()),
            }
        }
        Command::Gen { family, spec, random, bench, out: fmt } => {
            let (g, p) = if let Some(f) = family {
                let g = named(f.parse::<Family>().map_err(anyhow::Error::from)?).map_err(anyhow::Error::from)?;
                let p = stable_partition(&g);
                (g, p)
            } else if let Some(path) = spec {
                let spec = GraphSpec::from_json(&read_input(path)?).map_err(anyhow::Error::from)?;
                generate(&spec, o.seed).map_err(anyhow::Error::from)?
            } else if let Some(n) = random {
                let (g, p, _) = random_amenable(*n, &ShapeParams::default(), o.seed).map_err(anyhow::Error::from)?;
                (g, p)
            } else if let Some(n) = bench {
                benchmark_instance(*n, o.seed).map_err(anyhow::Error::from)?
            } else {
                return Err(anyhow!("gen needs one of --family, --spec, --random, --bench").into());
            };
            let text = match fmt {
                Format::Edgelist => g.to_edge_list(),
                Format::Graph6 => {
                    if g.n() > 258_047 {
                        return Err(anyhow!("graph too large for graph6").into());
                    }
                    g.to_graph6() + "\n"
                }
            };
            if o.json {
                emit(out, &json!({ "n": g.n(), "m": g.m(), "graph": text, "partition": p.cells() }))
            } else {
                write!(out, "{text}").map_err(io_fail)
            }
        }
        Command::Bench { sizes, repeats } => cmd_bench(sizes, (*repeats).max(1), o.seed, out, err),
    }
}

fn cmd_cells(g: &Graph, o: &GlobalOpts, out: &mut dyn Write) -> CmdResult {
    let verdict = check_amenable(g);
    let cg = &verdict.cell_graph;
    let forest = anisotropic_components(cg).ok();
    if o.json {
        let forest_json = forest.as_ref().map(|f| f.to_json());
        return emit(
            out,
            &json!({
                "partition": verdict.partition.cells(),
                "cell_graph": cg.to_json(),
                "forest": forest_json,
                "amenable": verdict.is_amenable(),
            }),
        );
    }
    for (i, cell) in verdict.partition.cells().iter().enumerate() {
        emit_line(out, &format!("cell {i}: size {} d {} {:?}  [{}]", cell.len(), cg.diag[i], cg.cell_kind[i], join(cell)))?;
    }
    for info in cg.anisotropic_pairs() {
        emit_line(out, &format!("pair {}-{}: {:?}", info.small, info.large, info.kind))?;
    }
    match forest {
        Some(f) => {
            for (i, c) in f.components.iter().enumerate() {
                emit_line(out, &format!("component {i}: root {} cells {}", c.root(), join(&c.cells)))?;
            }
            Ok(())
        }
        None => emit_line(out, "anisotropic structure is not a forest"),
    }
}

fn print_report(report: &SymmetryReport, dist: bool, o: &GlobalOpts, out: &mut dyn Write) -> CmdResult {
    let value = if dist { report.dist_number } else { report.fix_number };
    if o.json {
        let key = if dist { "dist_number" } else { "fix_number" };
        let mut body = json!({ key: value });
        if o.components {
            body["components"] = serde_json::to_value(&report.components).map_err(|e| anyhow!(e))?;
        }
        return emit(out, &body);
    }
    emit_line(out, &value.to_string())?;
    if o.components {
        for (i, c) in report.components.iter().enumerate() {
            emit_line(
                out,
                &format!(
                    "component {i}: root {} head {:?} vertices {} D {} Fix {}",
                    c.root_cell, c.head, c.vertex_count, c.dist, c.fix
                ),
            )?;
        }
    }
    Ok(())
}

fn cmd_bench(sizes: &[usize], repeats: usize, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    emit_line(out, "n,m,seconds,dist,fix")?;
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for &target in sizes {
        let (g, _) = benchmark_instance(target, seed).map_err(anyhow::Error::from)?;
        let mut best = f64::INFINITY;
        let mut last = None;
        for _ in 0..repeats {
            let start = Instant::now();
            let report = analyze(&g, CountMode::Saturating)?;
            best = best.min(start.elapsed().as_secs_f64());
            last = Some(report);
        }
        let r = last.expect("repeats >= 1");
        emit_line(out, &format!("{},{},{:.6},{},{}", g.n(), g.m(), best, r.dist_number, r.fix_number))?;
        rows.push((g.n(), best));
    }
    for w in rows.windows(2) {
        let _ = writeln!(err, "n {} -> {}: time ratio {:.2}", w[0].0, w[1].0, w[1].1 / w[0].1.max(1e-9));
    }
    if let Some(max) = rows.iter().map(|r| r.1).reduce(f64::max) {
        let _ = writeln!(err, "slowest run: {max:.3} s");
    }
    Ok(())
}

fn describe(v: &Violation) -> String {
    match v {
        Violation::CondA { cell, kind } => format!("condition A: cell {cell} induces {kind:?}"),
        Violation::CondB { cells, d } => {
            format!("condition B: cells {} and {} have degrees {} and {}", cells.0, cells.1, d.0, d.1)
        }
        Violation::CondC { component, reason } => format!("condition C: component {component}: {reason}"),
        Violation::CondD { component, reason } => format!("condition D: component {component}: {reason:?}"),
    }
}

fn read_input(path: &str) -> anyhow::Result<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(text)
}

fn load(path: &str, format: Option<Format>) -> Result<Graph, Failure> {
    let text = read_input(path)?;
    let format = format.unwrap_or_else(|| {
        match Path::new(path).extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("g6" | "graph6") => Format::Graph6,
            _ => Format::Edgelist,
        }
    });
    let g = match format {
        Format::Edgelist => Graph::parse_edge_list(&text).map(|(g, _)| g),
        Format::Graph6 => {
            let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
            Graph::from_graph6(line)
        }
    };
    g.with_context(|| format!("parsing {path}")).map_err(Failure::from)
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn io_fail(e: std::io::Error) -> Failure {
    anyhow::Error::from(e).into()
}

fn emit(out: &mut dyn Write, v: &Value) -> CmdResult {
    writeln!(out, "{v}").map_err(io_fail)
}

fn emit_line(out: &mut dyn Write, s: &str) -> CmdResult {
    writeln!(out, "{s}").map_err(io_fail)
}
