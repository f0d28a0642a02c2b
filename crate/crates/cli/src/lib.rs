//! Command implementations for the `chronomatch` binary.
//!
//! Every command writes its primary output (CSV or a single number) to the
//! `out` writer and human-oriented notes to `err`, so the commands can be
//! driven in-process by tests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use chronomatch::analytics::rank_graph_nodes;
use chronomatch::baseline::{StaticMatcher, StaticPattern};
use chronomatch::engine::{count_matches, mean_window_size, node_participation, temporal_match, Delta, MatchQuery};
use chronomatch::graph::TemporalGraph;
use chronomatch::ingest::{load_dataset, EdgeListFormat};
use chronomatch::motif::{builtin_motif, parse_motif, validate_motif, Motif, BUILTIN_NAMES};
use chronomatch::parallel::{par_count_matches, par_node_participation};

#[derive(Debug, Parser)]
#[command(
    name = "chronomatch",
    version,
    about = "Temporal motif matching on timestamped edge lists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write every match as a CSV row.
    Match(MatchArgs),
    /// Print the number of matches.
    Count(CountArgs),
    /// Rank graph nodes by the number of matches they take part in.
    Rank(RankArgs),
    /// Time temporal matching against the static baseline.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    Snap,
    Konect,
    Csv,
}

impl FormatArg {
    fn format(self) -> Option<EdgeListFormat> {
        match self {
            FormatArg::Auto => None,
            FormatArg::Snap => Some(EdgeListFormat::SNAP),
            FormatArg::Konect => Some(EdgeListFormat::KONECT),
            FormatArg::Csv => Some(EdgeListFormat::CSV),
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Temporal edge list.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Motif file, or `builtin:NAME`.
    #[arg(long)]
    pub motif: String,
    /// Window: seconds, `<n>s|m|h|d|w`, or `inf`.
    #[arg(long)]
    pub delta: Delta,
    /// Ignore node and edge attributes in the motif.
    #[arg(long)]
    pub no_attributes: bool,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long)]
    pub limit: Option<u64>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long)]
    pub limit: Option<u64>,
    /// Split the search over all cores.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub query: QueryArgs,
    /// Only count the node playing this motif node.
    #[arg(long)]
    pub role: Option<String>,
    /// Report the rank of this node label.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Name used in the report; defaults to the file stem.
    #[arg(long)]
    pub name: Option<String>,
    /// Comma-separated motifs (builtin names or files).
    #[arg(long, value_delimiter = ',', default_value = "M1,M2,M3,M4,M5,M6")]
    pub motifs: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "3600,86400")]
    pub deltas: Vec<Delta>,
    /// Stop a static baseline run after this many seconds.
    #[arg(long)]
    pub time_cap: Option<f64>,
    /// Report CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write (static/temporal ratio, speed-up) pairs here.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    /// Run motifs on separate threads. Each search stays single-threaded.
    #[arg(long)]
    pub parallel_cells: bool,
}

pub fn load_motif(spec: &str) -> Result<Motif> {
    let motif = match spec.strip_prefix("builtin:") {
        Some(name) => builtin_motif(name).with_context(|| format!("builtin motifs are {BUILTIN_NAMES}"))?,
        None => {
            let text = std::fs::read_to_string(spec).with_context(|| format!("reading motif {spec}"))?;
            parse_motif(&text).with_context(|| format!("parsing motif {spec}"))?
        }
    };
    for w in validate_motif(&motif) {
        log::warn!("{spec}: {}", w.message);
    }
    Ok(motif)
}

fn load_graph(args: &GraphArgs) -> Result<TemporalGraph> {
    let start = Instant::now();
    let g = load_dataset(&args.graph, args.format.format())?;
    info!("load time {:.3}s", start.elapsed().as_secs_f64());
    Ok(g)
}

fn query(args: &QueryArgs, limit: Option<u64>) -> Result<MatchQuery> {
    let motif = load_motif(&args.motif)?;
    Ok(MatchQuery::new(motif, args.delta)
        .with_limit(limit)
        .with_attributes(!args.no_attributes))
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(stdout),
    })
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Match(a) => cmd_match(&a, out, err),
        Command::Count(a) => cmd_count(&a, out, err),
        Command::Rank(a) => cmd_rank(&a, out, err),
        Command::Bench(a) => cmd_bench(&a, out, err),
    }
}

/// Header of the match CSV for `motif`.
pub fn match_header(motif: &Motif) -> String {
    let mut cols = vec!["match_id".to_owned()];
    for r in 1..=motif.edge_count() {
        cols.extend([
            format!("edge_index_{r}"),
            format!("src_{r}"),
            format!("dst_{r}"),
            format!("time_{r}"),
        ]);
    }
    cols.extend(motif.labels().iter().map(|l| format!("node_{l}")));
    cols.extend(["t_start".to_owned(), "t_end".to_owned()]);
    cols.join(",")
}

pub fn cmd_match(a: &MatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let q = query(&a.query, a.limit)?;
    let mut w = open_out(&a.out, out)?;
    writeln!(w, "{}", match_header(&q.motif))?;
    let mut io_error = None;
    let mut line = String::new();
    let mut id = 0u64;
    let summary = temporal_match(&g, &q, |m| {
        use std::fmt::Write as _;
        line.clear();
        id += 1;
        let _ = write!(line, "{id}");
        for &e in m.edges() {
            let edge = g.edge(e);
            let _ = write!(line, ",{e},{},{},{}", g.label(edge.src), g.label(edge.dst), edge.time);
        }
        for n in m.nodes() {
            let _ = write!(line, ",{}", g.label(n));
        }
        let _ = write!(line, ",{},{}", m.t_start(), m.t_end());
        match writeln!(w, "{line}") {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                io_error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = io_error {
        return Err(e).context("writing matches");
    }
    w.flush()?;
    writeln!(
        err,
        "matches: {}  edges scanned: {}{}",
        summary.matches,
        summary.edges_scanned,
        if summary.truncated {
            "  (truncated by --limit)"
        } else {
            ""
        }
    )?;
    Ok(())
}

pub fn cmd_count(a: &CountArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let q = query(&a.query, a.limit)?;
    let start = Instant::now();
    let n = if a.parallel {
        par_count_matches(&g, &q).matches
    } else {
        count_matches(&g, &q)
    };
    info!("search time {:.3}s", start.elapsed().as_secs_f64());
    writeln!(out, "{n}")?;
    Ok(())
}

pub fn cmd_rank(a: &RankArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let q = query(&a.query, None)?;
    let counts = if a.parallel {
        par_node_participation(&g, &q, a.role.as_deref())?
    } else {
        node_participation(&g, &q, a.role.as_deref())?
    };
    let table = rank_graph_nodes(&g, &counts, a.target.as_deref());
    writeln!(out, "rank,node,count")?;
    for row in &table.rows {
        writeln!(out, "{},{},{}", row.rank, row.label, row.count)?;
    }
    writeln!(err, "ranked nodes: {}", table.len())?;
    if a.target.is_some() {
        match table.target_rank {
            Some(r) => writeln!(err, "target: {r}")?,
            None => writeln!(err, "target: absent")?,
        }
    }
    Ok(())
}

/// One (motif, delta) cell of a benchmark report.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub graph: String,
    pub motif: String,
    pub delta: Delta,
    pub temporal_count: u64,
    pub temporal_sec: f64,
    /// Embeddings found; a lower bound when `static_capped`.
    pub static_count: u64,
    pub static_sec: f64,
    pub static_capped: bool,
    /// Mean edges per delta window.
    pub k_window: f64,
}

pub const BENCH_HEADER: &str = "graph,motif,delta,temporal_count,temporal_sec,static_count,static_sec,speedup,k_window";

impl BenchRow {
    /// Static time over temporal time. A lower bound when the static run
    /// was capped.
    pub fn speedup(&self) -> f64 {
        self.static_sec / self.temporal_sec.max(1e-9)
    }

    pub fn to_csv(&self) -> String {
        let capped = if self.static_capped { ">" } else { "" };
        let count = if self.static_capped {
            format!(">={}", self.static_count)
        } else {
            self.static_count.to_string()
        };
        format!(
            "{},{},{},{},{:.6},{},{capped}{:.6},{capped}{:.3},{:.3}",
            self.graph,
            self.motif,
            self.delta,
            self.temporal_count,
            self.temporal_sec,
            count,
            self.static_sec,
            self.speedup(),
            self.k_window
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub time_cap: Option<Duration>,
    pub warmup: bool,
    pub parallel_cells: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            time_cap: None,
            warmup: true,
            parallel_cells: false,
        }
    }
}

fn bench_motif(
    g: &TemporalGraph,
    static_graph: &chronomatch::graph::StaticGraph,
    name: &str,
    graph_name: &str,
    motif: &Motif,
    deltas: &[Delta],
    cfg: &BenchConfig,
) -> Vec<BenchRow> {
    let pattern = StaticPattern::from(motif);
    let start = Instant::now();
    let st = StaticMatcher::new(static_graph, &pattern)
        .with_time_cap(cfg.time_cap)
        .count();
    let static_sec = start.elapsed().as_secs_f64();
    info!("{name}: static {} embeddings in {static_sec:.3}s", st.embeddings);

    deltas
        .iter()
        .map(|&delta| {
            let q = MatchQuery::new(motif.clone(), delta);
            if cfg.warmup {
                count_matches(g, &q);
            }
            let start = Instant::now();
            let temporal_count = count_matches(g, &q);
            let temporal_sec = start.elapsed().as_secs_f64();
            info!("{name} delta={delta}: {temporal_count} matches in {temporal_sec:.3}s");
            BenchRow {
                graph: graph_name.to_owned(),
                motif: name.to_owned(),
                delta,
                temporal_count,
                temporal_sec,
                static_count: st.embeddings,
                static_sec,
                static_capped: st.timed_out,
                k_window: mean_window_size(g, delta),
            }
        })
        .collect()
}

/// Runs every (motif, delta) cell on an already loaded graph. Only the
/// searches are timed.
pub fn run_bench(
    g: &TemporalGraph,
    graph_name: &str,
    motifs: &[(String, Motif)],
    deltas: &[Delta],
    cfg: &BenchConfig,
) -> Vec<BenchRow> {
    let sg = g.merge_parallel_edges();
    let cell = |(name, motif): &(String, Motif)| bench_motif(g, &sg, name, graph_name, motif, deltas, cfg);
    #[cfg(feature = "parallel")]
    if cfg.parallel_cells {
        use rayon::prelude::*;
        return motifs.par_iter().flat_map_iter(cell).collect();
    }
    motifs.iter().flat_map(cell).collect()
}

pub fn write_bench_csv(rows: &[BenchRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{BENCH_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_csv())?;
    }
    Ok(())
}

/// (static/temporal count ratio, speed-up) pairs for a log-log plot. Rows
/// with a zero count or a capped static run have no finite ratio and are
/// left out.
pub fn write_plot_data(rows: &[BenchRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "graph,motif,delta,count_ratio,speedup")?;
    for r in rows {
        if r.static_capped || r.static_count == 0 || r.temporal_count == 0 {
            continue;
        }
        let ratio = r.static_count as f64 / r.temporal_count as f64;
        writeln!(w, "{},{},{},{:.6},{:.6}", r.graph, r.motif, r.delta, ratio, r.speedup())?;
    }
    Ok(())
}

fn display_name(spec: &str) -> String {
    match spec.strip_prefix("builtin:") {
        Some(n) => n.to_owned(),
        None if builtin_motif(spec).is_ok() => spec.to_owned(),
        None => Path::new(spec)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_owned()),
    }
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if a.deltas.is_empty() || a.motifs.is_empty() {
        bail!("bench needs at least one motif and one delta");
    }
    let g = load_graph(&a.graph)?;
    let motifs = a
        .motifs
        .iter()
        .map(|spec| {
            // Bare names in --motifs are builtins unless they name a file.
            let full = if spec.starts_with("builtin:") || Path::new(spec).exists() {
                spec.clone()
            } else {
                format!("builtin:{spec}")
            };
            Ok((display_name(spec), load_motif(&full)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let name = a
        .name
        .clone()
        .unwrap_or_else(|| display_name(&a.graph.graph.to_string_lossy()));
    if let Some(cap) = a.time_cap {
        if !(cap.is_finite() && cap >= 0.0) {
            bail!("--time-cap must be a non-negative number of seconds");
        }
    }
    let cfg = BenchConfig {
        time_cap: a.time_cap.map(Duration::from_secs_f64),
        warmup: true,
        parallel_cells: a.parallel_cells,
    };
    let rows = run_bench(&g, &name, &motifs, &a.deltas, &cfg);
    write_bench_csv(&rows, open_out(&a.out, out)?)?;
    if let Some(p) = &a.plot_data {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        write_plot_data(&rows, BufWriter::new(f))?;
    }
    writeln!(err, "bench: {} rows", rows.len())?;
    Ok(())
}
