//! Immutable temporal multi-digraph.
//!
//! Edges are kept in one globally sorted sequence (stable on timestamp, so
//! equal times keep ingestion order). The position of an edge in that
//! sequence is its [`EdgeIdx`], and "chronological order" everywhere in this
//! crate means ascending edge index.
//!
//! Three index families support candidate narrowing during search:
//! per-node outgoing edges, per-node incoming edges and per-(src, dst) pair
//! edges. All of them are CSR arrays whose rows are strictly increasing in
//! edge index, so seeking to a scan floor is a binary search.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

/// Integer timestamp, seconds or abstract ticks.
pub type Timestamp = i64;

/// Position of an edge in the chronologically sorted edge sequence.
pub type EdgeIdx = usize;

/// Optional integer attribute attached to nodes and edges.
pub type Attr = i64;

/// Dense node identifier assigned at ingestion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemporalEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub time: Timestamp,
    pub attr: Option<Attr>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("record {record}: empty node label")]
    EmptyLabel { record: usize },
    #[error("record {record}: node count exceeds {max}", max = u32::MAX)]
    TooManyNodes { record: usize },
}

/// Collects raw edge records and produces a [`TemporalGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
    node_attrs: Vec<Option<Attr>>,
    edges: Vec<TemporalEdge>,
    records: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(edges: usize) -> Self {
        GraphBuilder {
            edges: Vec::with_capacity(edges),
            ..Self::default()
        }
    }

    fn intern(&mut self, label: &str) -> Result<NodeId, GraphError> {
        if label.is_empty() {
            return Err(GraphError::EmptyLabel { record: self.records });
        }
        if let Some(&id) = self.ids.get(label) {
            return Ok(id);
        }
        let raw = u32::try_from(self.labels.len()).map_err(|_| GraphError::TooManyNodes { record: self.records })?;
        let id = NodeId(raw);
        self.labels.push(label.to_owned());
        self.node_attrs.push(None);
        self.ids.insert(label.to_owned(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, time: Timestamp) -> Result<(), GraphError> {
        self.push(src, dst, time, None)
    }

    pub fn add_labeled_edge(&mut self, src: &str, dst: &str, time: Timestamp, attr: Attr) -> Result<(), GraphError> {
        self.push(src, dst, time, Some(attr))
    }

    fn push(&mut self, src: &str, dst: &str, time: Timestamp, attr: Option<Attr>) -> Result<(), GraphError> {
        let src = self.intern(src)?;
        let dst = self.intern(dst)?;
        self.edges.push(TemporalEdge { src, dst, time, attr });
        self.records += 1;
        Ok(())
    }

    /// Sets a node attribute, interning the node if it has not been seen.
    pub fn set_node_attr(&mut self, label: &str, attr: Attr) -> Result<(), GraphError> {
        let id = self.intern(label)?;
        self.node_attrs[id.index()] = Some(attr);
        Ok(())
    }

    pub fn build(self) -> TemporalGraph {
        let GraphBuilder {
            labels,
            ids,
            node_attrs,
            mut edges,
            ..
        } = self;
        // sort_by_key is stable: equal timestamps keep ingestion order.
        edges.sort_by_key(|e| e.time);
        TemporalGraph::from_sorted(labels, ids, node_attrs, edges)
    }
}

/// Compressed rows of edge indices keyed by a dense integer.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<usize>,
    values: Vec<EdgeIdx>,
}

impl Csr {
    fn build(rows: usize, edges: &[TemporalEdge], key: impl Fn(&TemporalEdge) -> usize) -> Self {
        let mut offsets = vec![0usize; rows + 1];
        for e in edges {
            offsets[key(e) + 1] += 1;
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut values = vec![0; edges.len()];
        for (idx, e) in edges.iter().enumerate() {
            let k = key(e);
            values[cursor[k]] = idx;
            cursor[k] += 1;
        }
        Csr { offsets, values }
    }

    #[inline]
    fn row(&self, i: usize) -> &[EdgeIdx] {
        match (self.offsets.get(i), self.offsets.get(i + 1)) {
            (Some(&a), Some(&b)) => &self.values[a..b],
            _ => &[],
        }
    }
}

/// Per-(src, dst) edge lists. Row `src` of `dsts` holds the distinct
/// destinations of `src` in ascending order; `spans` maps each distinct pair
/// to its run in `edges`.
#[derive(Clone, Debug, Default)]
struct PairIndex {
    src_offsets: Vec<usize>,
    dsts: Vec<NodeId>,
    spans: Vec<usize>,
    edges: Vec<EdgeIdx>,
}

impl PairIndex {
    fn build(nodes: usize, edges: &[TemporalEdge]) -> Self {
        let mut order: Vec<EdgeIdx> = (0..edges.len()).collect();
        // Stable, so indices inside one pair stay ascending.
        order.sort_by_key(|&i| (edges[i].src, edges[i].dst));

        let mut src_offsets = vec![0usize; nodes + 1];
        let mut dsts = Vec::new();
        let mut spans = vec![0usize];
        let mut last: Option<(NodeId, NodeId)> = None;
        for (pos, &i) in order.iter().enumerate() {
            let key = (edges[i].src, edges[i].dst);
            if last != Some(key) {
                if last.is_some() {
                    spans.push(pos);
                }
                dsts.push(key.1);
                src_offsets[key.0.index() + 1] += 1;
                last = Some(key);
            }
        }
        if last.is_some() {
            spans.push(order.len());
        }
        for i in 0..nodes {
            src_offsets[i + 1] += src_offsets[i];
        }
        PairIndex {
            src_offsets,
            dsts,
            spans,
            edges: order,
        }
    }

    fn get(&self, src: NodeId, dst: NodeId) -> &[EdgeIdx] {
        let (Some(&lo), Some(&hi)) = (self.src_offsets.get(src.index()), self.src_offsets.get(src.index() + 1)) else {
            return &[];
        };
        match self.dsts[lo..hi].binary_search(&dst) {
            Ok(k) => &self.edges[self.spans[lo + k]..self.spans[lo + k + 1]],
            Err(_) => &[],
        }
    }
}

/// Structural filter for [`TemporalGraph::candidate_edges`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeConstraint {
    Pair(NodeId, NodeId),
    From(NodeId),
    Into(NodeId),
    Any,
}

#[derive(Clone, Debug)]
pub struct TemporalGraph {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
    node_attrs: Vec<Option<Attr>>,
    edges: Vec<TemporalEdge>,
    out_index: Csr,
    in_index: Csr,
    pair_index: PairIndex,
}

impl Default for TemporalGraph {
    fn default() -> Self {
        GraphBuilder::new().build()
    }
}

impl TemporalGraph {
    fn from_sorted(
        labels: Vec<String>,
        ids: HashMap<String, NodeId>,
        node_attrs: Vec<Option<Attr>>,
        edges: Vec<TemporalEdge>,
    ) -> Self {
        let n = labels.len();
        let out_index = Csr::build(n, &edges, |e| e.src.index());
        let in_index = Csr::build(n, &edges, |e| e.dst.index());
        let pair_index = PairIndex::build(n, &edges);
        TemporalGraph {
            labels,
            ids,
            node_attrs,
            edges,
            out_index,
            in_index,
            pair_index,
        }
    }

    /// Builds a graph from `(src, dst, time)` records.
    pub fn from_triples<I, S>(triples: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (S, S, Timestamp)>,
        S: AsRef<str>,
    {
        let mut builder = GraphBuilder::new();
        for (src, dst, time) in triples {
            builder.add_edge(src.as_ref(), dst.as_ref(), time)?;
        }
        Ok(builder.build())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    #[inline]
    pub fn edge(&self, idx: EdgeIdx) -> &TemporalEdge {
        &self.edges[idx]
    }

    #[inline]
    pub fn time(&self, idx: EdgeIdx) -> Timestamp {
        self.edges[idx].time
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    #[inline]
    pub fn node_attr(&self, node: NodeId) -> Option<Attr> {
        self.node_attrs[node.index()]
    }

    /// Outgoing edge indices of `node`, ascending.
    #[inline]
    pub fn out_edges(&self, node: NodeId) -> &[EdgeIdx] {
        self.out_index.row(node.index())
    }

    /// Incoming edge indices of `node`, ascending.
    #[inline]
    pub fn in_edges(&self, node: NodeId) -> &[EdgeIdx] {
        self.in_index.row(node.index())
    }

    /// Edge indices of all `src -> dst` edges, ascending.
    #[inline]
    pub fn pair_edges(&self, src: NodeId, dst: NodeId) -> &[EdgeIdx] {
        self.pair_index.get(src, dst)
    }

    /// First and last timestamp, or `None` for an edgeless graph.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        Some((self.edges.first()?.time, self.edges.last()?.time))
    }

    /// Edges matching `constraint` with index `>= min_index` and
    /// `time <= max_time`, in ascending index order.
    pub fn candidate_edges(
        &self,
        constraint: EdgeConstraint,
        min_index: EdgeIdx,
        max_time: Timestamp,
    ) -> Candidates<'_> {
        let rows = match constraint {
            EdgeConstraint::Pair(u, v) => Some(self.pair_edges(u, v)),
            EdgeConstraint::From(u) => Some(self.out_edges(u)),
            EdgeConstraint::Into(v) => Some(self.in_edges(v)),
            EdgeConstraint::Any => None,
        };
        let source = match rows {
            Some(row) => {
                let start = row.partition_point(|&i| i < min_index);
                Source::Row(row[start..].iter())
            }
            None => Source::Range(min_index.min(self.edges.len())..self.edges.len()),
        };
        Candidates {
            edges: &self.edges,
            source,
            max_time,
        }
    }

    /// The sub-graph made of a contiguous run of edges. Labels and node
    /// attributes carry over; edge order is preserved.
    pub fn slice_edges(&self, range: Range<EdgeIdx>) -> TemporalGraph {
        let mut builder = GraphBuilder::with_capacity(range.len());
        for e in &self.edges[range] {
            let src = self.label(e.src);
            let dst = self.label(e.dst);
            // Labels come from an existing graph, so they are valid.
            builder
                .push(src, dst, e.time, e.attr)
                .expect("labels of an existing graph are valid");
        }
        for (id, attr) in self.node_attrs.iter().enumerate() {
            if let Some(a) = attr {
                if builder.ids.contains_key(&self.labels[id]) {
                    builder
                        .set_node_attr(&self.labels[id], *a)
                        .expect("labels of an existing graph are valid");
                }
            }
        }
        builder.build()
    }

    /// Collapses parallel temporal edges into one static edge per ordered pair.
    pub fn merge_parallel_edges(&self) -> StaticGraph {
        let pairs = self.edges.iter().map(|e| (e.src.index(), e.dst.index()));
        StaticGraph::from_pairs(self.node_count(), pairs)
    }
}

enum Source<'g> {
    Row(std::slice::Iter<'g, EdgeIdx>),
    Range(Range<EdgeIdx>),
}

/// Iterator returned by [`TemporalGraph::candidate_edges`].
pub struct Candidates<'g> {
    edges: &'g [TemporalEdge],
    source: Source<'g>,
    max_time: Timestamp,
}

impl Iterator for Candidates<'_> {
    type Item = EdgeIdx;

    #[inline]
    fn next(&mut self) -> Option<EdgeIdx> {
        let idx = match &mut self.source {
            Source::Row(it) => *it.next()?,
            Source::Range(r) => r.next()?,
        };
        // Rows are ascending in index, hence non-decreasing in time.
        if self.edges[idx].time > self.max_time {
            self.source = Source::Range(0..0);
            return None;
        }
        Some(idx)
    }
}

/// Directed graph with multiplicity collapsed, sharing the node id space of
/// the temporal graph it came from.
#[derive(Clone, Debug, Default)]
pub struct StaticGraph {
    nodes: usize,
    out_offsets: Vec<usize>,
    out_nbrs: Vec<u32>,
    in_offsets: Vec<usize>,
    in_nbrs: Vec<u32>,
}

impl StaticGraph {
    pub fn from_pairs(nodes: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut list: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(u, v)| {
                assert!(u < nodes && v < nodes, "edge ({u}, {v}) out of range");
                (u as u32, v as u32)
            })
            .collect();
        list.sort_unstable();
        list.dedup();

        let mut out_offsets = vec![0usize; nodes + 1];
        let mut in_offsets = vec![0usize; nodes + 1];
        for &(u, v) in &list {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..nodes {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_nbrs = list.iter().map(|&(_, v)| v).collect();
        let mut in_nbrs = vec![0u32; list.len()];
        let mut cursor = in_offsets.clone();
        // `list` is sorted by (u, v), so each in-row fills in ascending u.
        for &(u, v) in &list {
            in_nbrs[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        StaticGraph {
            nodes,
            out_offsets,
            out_nbrs,
            in_offsets,
            in_nbrs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.out_nbrs.len()
    }

    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &[u32] {
        &self.out_nbrs[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_nbrs[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// All static edges in ascending `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.nodes).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn idx_of(g: &TemporalGraph, src: &str, dst: &str, time: Timestamp) -> EdgeIdx {
        g.edges()
            .iter()
            .position(|e| g.label(e.src) == src && g.label(e.dst) == dst && e.time == time)
            .unwrap()
    }

    #[test]
    fn fig1_sorted_order() {
        let g = fixtures::sequential_cycle_graph();
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.node_count(), 6);
        let first = g.edge(0);
        assert_eq!((g.label(first.src), g.label(first.dst), first.time), ("D", "E", 1));
        let last = g.edge(8);
        assert_eq!((g.label(last.src), g.label(last.dst), last.time), ("E", "F", 9));
    }

    #[test]
    fn empty_input() {
        let g = TemporalGraph::from_triples(Vec::<(&str, &str, i64)>::new()).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.time_span(), None);
        assert_eq!(g.candidate_edges(EdgeConstraint::Any, 0, i64::MAX).count(), 0);
    }

    #[test]
    fn equal_times_keep_input_order() {
        let g = TemporalGraph::from_triples([("x", "y", 5), ("p", "q", 5)]).unwrap();
        assert_eq!(g.label(g.edge(0).src), "x");
        assert_eq!(g.label(g.edge(1).src), "p");
    }

    #[test]
    fn empty_label_is_rejected() {
        let err = TemporalGraph::from_triples([("a", "b", 1), ("", "b", 2)]).unwrap_err();
        assert_eq!(err, GraphError::EmptyLabel { record: 1 });
    }

    #[test]
    fn candidate_edges_fig1() {
        let g = fixtures::sequential_cycle_graph();
        let c = g.node_id("C").unwrap();
        let e = g.node_id("E").unwrap();
        let b = g.node_id("B").unwrap();
        let got: Vec<_> = g.candidate_edges(EdgeConstraint::Pair(c, e), 0, i64::MAX).collect();
        assert_eq!(got, vec![idx_of(&g, "C", "E", 4)]);

        // B->C sits at index 1 and is below the floor; only B->D remains.
        let got: Vec<_> = g.candidate_edges(EdgeConstraint::From(b), 2, i64::MAX).collect();
        assert_eq!(got, vec![idx_of(&g, "B", "D", 6)]);

        let got: Vec<_> = g.candidate_edges(EdgeConstraint::Into(b), 0, 6).collect();
        assert_eq!(got, vec![idx_of(&g, "A", "B", 3)]);
    }

    #[test]
    fn candidate_edges_exhausted_and_unknown() {
        let g = fixtures::sequential_cycle_graph();
        let n = g.edge_count();
        for c in [
            EdgeConstraint::Any,
            EdgeConstraint::From(NodeId(0)),
            EdgeConstraint::Into(NodeId(1)),
            EdgeConstraint::Pair(NodeId(0), NodeId(1)),
        ] {
            assert_eq!(g.candidate_edges(c, n, i64::MAX).count(), 0);
        }
        assert_eq!(
            g.candidate_edges(EdgeConstraint::From(NodeId(99)), 0, i64::MAX).count(),
            0
        );
        assert_eq!(
            g.candidate_edges(EdgeConstraint::Pair(NodeId(99), NodeId(0)), 0, i64::MAX)
                .count(),
            0
        );
    }

    #[test]
    fn merge_fig1_and_collapse() {
        let g = fixtures::sequential_cycle_graph();
        assert_eq!(g.merge_parallel_edges().edge_count(), 9);

        let g = TemporalGraph::from_triples([("u", "v", 1), ("u", "v", 2), ("v", "u", 3)]).unwrap();
        let s = g.merge_parallel_edges();
        assert_eq!(s.edge_count(), 2);
        assert!(s.has_edge(0, 1) && s.has_edge(1, 0));
        assert_eq!(s.in_neighbors(1), &[0]);
    }

    #[test]
    fn slice_keeps_order_and_attrs() {
        let mut b = GraphBuilder::new();
        b.add_edge("a", "b", 1).unwrap();
        b.add_labeled_edge("b", "c", 2, 7).unwrap();
        b.add_edge("c", "d", 3).unwrap();
        b.set_node_attr("c", 3).unwrap();
        let g = b.build();
        let s = g.slice_edges(1..3);
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.edge(0).attr, Some(7));
        assert_eq!(s.label(s.edge(0).src), "b");
        assert_eq!(s.node_attr(s.node_id("c").unwrap()), Some(3));
        assert_eq!(s.node_id("a"), None);
    }
}
