//! Temporal edge-list readers for SNAP, KONECT and CSV files.
//!
//! * SNAP: `<src> <dst> <time>`, whitespace separated; further columns are
//!   ignored.
//! * KONECT: `<src> <dst> <weight> <time>`; the weight is ignored.
//! * CSV: `src,dst,time`, with an optional header row.
//!
//! Lines starting with `#` or `%` and blank lines are skipped. Labels are
//! kept as strings, so sparse numeric ids need no remapping.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use log::info;
use thiserror::Error;

use crate::graph::{GraphBuilder, GraphError, TemporalGraph, Timestamp};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot open {path}")]
    Open { path: String, source: io::Error },
    #[error("line {line}: read failed")]
    Io { line: usize, source: io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: invalid edge")]
    Graph { line: usize, source: GraphError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delimiter {
    Whitespace,
    Comma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeListFormat {
    pub delimiter: Delimiter,
    /// Zero-based column holding the timestamp. Columns 0 and 1 are always
    /// source and destination.
    pub time_column: usize,
}

impl EdgeListFormat {
    pub const SNAP: EdgeListFormat = EdgeListFormat {
        delimiter: Delimiter::Whitespace,
        time_column: 2,
    };
    pub const KONECT: EdgeListFormat = EdgeListFormat {
        delimiter: Delimiter::Whitespace,
        time_column: 3,
    };
    pub const CSV: EdgeListFormat = EdgeListFormat {
        delimiter: Delimiter::Comma,
        time_column: 2,
    };

    /// Guesses the format from the first data line: whitespace first, then
    /// comma. Four or more whitespace columns mean KONECT.
    pub fn detect(line: &str) -> EdgeListFormat {
        match line.split_whitespace().count() {
            n if n >= 4 => EdgeListFormat::KONECT,
            3 => EdgeListFormat::SNAP,
            _ if line.contains(',') => EdgeListFormat::CSV,
            _ => EdgeListFormat::SNAP,
        }
    }

    fn fields<'l>(&self, line: &'l str) -> Vec<&'l str> {
        match self.delimiter {
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    /// 1-based source line.
    pub line: usize,
    pub src: String,
    pub dst: String,
    pub time: Timestamp,
}

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

/// Streams records from `reader`; `format = None` autodetects.
fn for_each_record<R, F>(reader: R, format: Option<EdgeListFormat>, mut f: F) -> Result<(), IngestError>
where
    R: BufRead,
    F: FnMut(usize, &str, &str, Timestamp) -> Result<(), IngestError>,
{
    let mut format = format;
    let mut first_data = true;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| IngestError::Io { line: line_no, source })?;
        if is_comment(&line) {
            continue;
        }
        let fmt = *format.get_or_insert_with(|| EdgeListFormat::detect(&line));
        let fields = fmt.fields(&line);
        let header = std::mem::replace(&mut first_data, false) && fmt.delimiter == Delimiter::Comma;
        if fields.len() <= fmt.time_column || fields.len() < 3 {
            return Err(IngestError::Parse {
                line: line_no,
                msg: format!(
                    "expected at least {} columns, found {}",
                    fmt.time_column + 1,
                    fields.len()
                ),
            });
        }
        let raw_time = fields[fmt.time_column];
        let time = match raw_time.parse::<Timestamp>() {
            Ok(t) => t,
            Err(_) if header => continue,
            Err(_) => {
                return Err(IngestError::Parse {
                    line: line_no,
                    msg: format!("time `{raw_time}` is not an integer"),
                })
            }
        };
        f(line_no, fields[0], fields[1], time)?;
    }
    Ok(())
}

pub fn parse_edge_list<R: BufRead>(reader: R, format: Option<EdgeListFormat>) -> Result<Vec<EdgeRecord>, IngestError> {
    let mut out = Vec::new();
    for_each_record(reader, format, |line, src, dst, time| {
        out.push(EdgeRecord {
            line,
            src: src.to_owned(),
            dst: dst.to_owned(),
            time,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Parses and builds in one pass, without an intermediate record list.
pub fn read_graph<R: BufRead>(reader: R, format: Option<EdgeListFormat>) -> Result<TemporalGraph, IngestError> {
    let mut builder = GraphBuilder::new();
    for_each_record(reader, format, |line, src, dst, time| {
        builder
            .add_edge(src, dst, time)
            .map_err(|source| IngestError::Graph { line, source })
    })?;
    Ok(builder.build())
}

pub fn load_dataset(path: impl AsRef<Path>, format: Option<EdgeListFormat>) -> Result<TemporalGraph, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Open {
        path: path.display().to_string(),
        source,
    })?;
    let g = read_graph(BufReader::with_capacity(1 << 20, file), format)?;
    info!(
        "loaded {}: {} nodes, {} temporal edges, {} static edges",
        path.display(),
        g.node_count(),
        g.edge_count(),
        g.merge_parallel_edges().edge_count()
    );
    Ok(g)
}

/// Writes `graph` in the canonical whitespace format, in edge order.
pub fn write_edge_list<W: Write>(graph: &TemporalGraph, mut out: W) -> io::Result<()> {
    for e in graph.edges() {
        writeln!(out, "{} {} {}", graph.label(e.src), graph.label(e.dst), e.time)?;
    }
    Ok(())
}
