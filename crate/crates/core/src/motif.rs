//! Temporal query graphs.
//!
//! A motif is a small multi-digraph whose edges are totally ordered by rank
//! `1..=m`. Ranks are pure order; the time window is a query parameter.
//!
//! Text format, one edge per line:
//!
//! ```text
//! # comment
//! a b 1
//! b c 2 17        # optional integer edge attribute
//! node a 3        # optional integer node attribute
//! ```

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::Attr;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotifError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: rank {rank} used twice")]
    DuplicateRank { line: usize, rank: usize },
    #[error("rank {0} is missing; ranks must be exactly 1..=m")]
    MissingRank(usize),
    #[error("line {line}: unknown node `{label}`")]
    UnknownNode { line: usize, label: String },
    #[error("node label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("invalid node label `{0}`")]
    InvalidLabel(String),
    #[error("node `{0}` is not an endpoint of any edge")]
    IsolatedNode(String),
    #[error("motif has no edges")]
    Empty,
    #[error("edge endpoint {0} is out of range")]
    EndpointOutOfRange(usize),
    #[error("unknown builtin motif `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MotifEdge {
    pub src: usize,
    pub dst: usize,
    pub attr: Option<Attr>,
}

impl MotifEdge {
    pub fn new(src: usize, dst: usize) -> Self {
        MotifEdge { src, dst, attr: None }
    }

    #[inline]
    pub fn touches(&self, node: usize) -> bool {
        self.src == node || self.dst == node
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Src,
    Dst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    labels: Vec<String>,
    node_attrs: Vec<Option<Attr>>,
    edges: Vec<MotifEdge>,
    /// For each node, the earliest (0-based) rank touching it.
    first_touch: Vec<(usize, Endpoint)>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && label != "node" && !label.starts_with('#') && !label.chars().any(char::is_whitespace)
}

impl Motif {
    /// Builds a motif from node labels and edges listed in rank order.
    pub fn new(labels: Vec<String>, node_attrs: Vec<Option<Attr>>, edges: Vec<MotifEdge>) -> Result<Self, MotifError> {
        assert_eq!(labels.len(), node_attrs.len());
        if edges.is_empty() {
            return Err(MotifError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if !valid_label(l) {
                return Err(MotifError::InvalidLabel(l.clone()));
            }
            if seen.insert(l.as_str(), i).is_some() {
                return Err(MotifError::DuplicateLabel(l.clone()));
            }
        }
        let mut first_touch = vec![None; labels.len()];
        for (rank, e) in edges.iter().enumerate() {
            for (node, end) in [(e.src, Endpoint::Src), (e.dst, Endpoint::Dst)] {
                let slot = first_touch.get_mut(node).ok_or(MotifError::EndpointOutOfRange(node))?;
                slot.get_or_insert((rank, end));
            }
        }
        let first_touch = first_touch
            .into_iter()
            .enumerate()
            .map(|(n, t)| t.ok_or_else(|| MotifError::IsolatedNode(labels[n].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Motif {
            labels,
            node_attrs,
            edges,
            first_touch,
        })
    }

    /// A motif over `a, b, c, ...` whose edges follow slice order as rank.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self, MotifError> {
        let nodes = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let labels = (0..nodes).map(default_label).collect();
        let edges = pairs.iter().map(|&(u, v)| MotifEdge::new(u, v)).collect();
        Motif::new(labels, vec![None; nodes], edges)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in rank order; rank `r` (1-based) is `edges()[r - 1]`.
    pub fn edges(&self) -> &[MotifEdge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, rank0: usize) -> &MotifEdge {
        &self.edges[rank0]
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn node_attr(&self, node: usize) -> Option<Attr> {
        self.node_attrs[node]
    }

    pub fn has_attributes(&self) -> bool {
        self.node_attrs.iter().any(Option::is_some) || self.edges.iter().any(|e| e.attr.is_some())
    }

    /// Earliest 0-based rank whose edge touches `node`, and which end.
    #[inline]
    pub fn first_touch(&self, node: usize) -> (usize, Endpoint) {
        self.first_touch[node]
    }

    pub fn with_node_attr(mut self, node: usize, attr: Option<Attr>) -> Self {
        self.node_attrs[node] = attr;
        self
    }

    pub fn with_edge_attr(mut self, rank0: usize, attr: Option<Attr>) -> Self {
        self.edges[rank0].attr = attr;
        self
    }

    /// Text form accepted by [`parse_motif`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (r, e) in self.edges.iter().enumerate() {
            out.push_str(&format!("{} {} {}", self.labels[e.src], self.labels[e.dst], r + 1));
            if let Some(a) = e.attr {
                out.push_str(&format!(" {a}"));
            }
            out.push('\n');
        }
        for (n, attr) in self.node_attrs.iter().enumerate() {
            if let Some(a) = attr {
                out.push_str(&format!("node {} {a}\n", self.labels[n]));
            }
        }
        out
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

pub fn parse_motif(text: &str) -> Result<Motif, MotifError> {
    struct RawEdge<'a> {
        src: &'a str,
        dst: &'a str,
        attr: Option<Attr>,
    }
    let mut by_rank: HashMap<usize, RawEdge> = HashMap::new();
    let mut node_lines: Vec<(usize, &str, Attr)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let syntax = |msg: &str| MotifError::Syntax {
            line,
            msg: msg.to_owned(),
        };
        if tokens[0] == "node" {
            let [_, label, attr] = tokens[..] else {
                return Err(syntax("expected `node <label> <attr>`"));
            };
            let attr = attr.parse().map_err(|_| syntax("node attribute must be an integer"))?;
            node_lines.push((line, label, attr));
            continue;
        }
        if !(3..=4).contains(&tokens.len()) {
            return Err(syntax("expected `<src> <dst> <rank> [attr]`"));
        }
        let rank: usize = tokens[2]
            .parse()
            .ok()
            .filter(|&r| r >= 1)
            .ok_or_else(|| syntax("rank must be a positive integer"))?;
        let attr = match tokens.get(3) {
            Some(a) => Some(a.parse().map_err(|_| syntax("edge attribute must be an integer"))?),
            None => None,
        };
        for label in &tokens[..2] {
            if !valid_label(label) {
                return Err(MotifError::InvalidLabel((*label).to_owned()));
            }
        }
        let edge = RawEdge {
            src: tokens[0],
            dst: tokens[1],
            attr,
        };
        if by_rank.insert(rank, edge).is_some() {
            return Err(MotifError::DuplicateRank { line, rank });
        }
    }

    if by_rank.is_empty() {
        return Err(MotifError::Empty);
    }
    let m = by_rank.len();
    if let Some(missing) = (1..=m).find(|r| !by_rank.contains_key(r)) {
        return Err(MotifError::MissingRank(missing));
    }

    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(m);
    for rank in 1..=m {
        let raw = &by_rank[&rank];
        let mut ends = [0usize; 2];
        for (slot, l) in ends.iter_mut().zip([raw.src, raw.dst]) {
            *slot = *index.entry(l).or_insert_with(|| {
                labels.push(l.to_owned());
                labels.len() - 1
            });
        }
        let [src, dst] = ends;
        edges.push(MotifEdge {
            src,
            dst,
            attr: raw.attr,
        });
    }
    // `index` borrows from `text`; resolve node lines before it goes away.
    let mut node_attrs = vec![None; labels.len()];
    for (line, label, attr) in node_lines {
        let node = *index.get(label).ok_or_else(|| MotifError::UnknownNode {
            line,
            label: label.to_owned(),
        })?;
        node_attrs[node] = Some(attr);
    }
    Motif::new(labels, node_attrs, edges)
}

/// Names accepted by [`builtin_motif`], for help text.
pub const BUILTIN_NAMES: &str = "M1..M6, cert, cycle<k> / cycle(<k>), path<k> / path(<k>)";

/// The predefined motifs.
///
/// `M1`..`M6` are the six four- and five-node benchmark shapes, `cert` is the
/// logon/open/attach/send/logoff exfiltration query over (employee, pc,
/// file, email), `cycle<k>` is a sequential directed k-cycle and `path<k>` a
/// sequential directed path through k nodes.
pub fn builtin_motif(name: &str) -> Result<Motif, MotifError> {
    let key = name.trim().to_ascii_lowercase();
    let pairs: Vec<(usize, usize)> = match key.as_str() {
        // a=0 b=1 c=2 d=3 e=4
        "m1" => vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        "m2" => vec![(0, 1), (1, 2), (2, 3)],
        "m3" => vec![(0, 1), (1, 2), (2, 3), (3, 1)],
        "m4" => vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 2)],
        "m5" => vec![(0, 1), (1, 2), (1, 3), (1, 4)],
        "m6" => vec![(0, 1), (2, 1), (2, 3), (4, 3)],
        // employee=a pc=b file=c email=d
        "cert" => vec![(0, 1), (1, 2), (2, 3), (1, 3), (0, 1)],
        _ => {
            let unknown = || MotifError::UnknownBuiltin(name.to_owned());
            let (kind, k) = split_param(&key).ok_or_else(unknown)?;
            match kind {
                "cycle" if k >= 2 => (0..k).map(|i| (i, (i + 1) % k)).collect(),
                "path" if k >= 2 => (0..k - 1).map(|i| (i, i + 1)).collect(),
                _ => return Err(unknown()),
            }
        }
    };
    Motif::from_pairs(&pairs)
}

fn split_param(key: &str) -> Option<(&str, usize)> {
    let (kind, rest) = key.split_at(key.find(|c: char| c.is_ascii_digit() || c == '(')?);
    let digits = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    Some((kind, digits.parse().ok()?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifWarning {
    /// 1-based rank of the offending edge.
    pub rank: usize,
    pub message: String,
}

/// Flags edges that share no endpoint with any earlier-ranked edge. Such an
/// edge cannot use adjacency narrowing and forces a scan of the whole edge
/// window.
pub fn validate_motif(m: &Motif) -> Vec<MotifWarning> {
    let mut seen = vec![false; m.node_count()];
    let mut warnings = Vec::new();
    for (r, e) in m.edges().iter().enumerate() {
        if r > 0 && !seen[e.src] && !seen[e.dst] {
            warnings.push(MotifWarning {
                rank: r + 1,
                message: format!(
                    "edge {} -> {} at rank {} shares no node with earlier edges; \
                     it will be matched by a full edge scan",
                    m.label(e.src),
                    m.label(e.dst),
                    r + 1
                ),
            });
        }
        seen[e.src] = true;
        seen[e.dst] = true;
    }
    warnings
}
