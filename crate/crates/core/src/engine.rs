//! Chronological edge-driven temporal subgraph matching.
//!
//! The search walks the globally time-sorted edge sequence and assigns motif
//! edges strictly in rank order. A partial match is therefore always
//! chronologically valid, and the first matched edge fixes a deadline
//! `t' = t_first + delta` beyond which no later edge may be used.
//!
//! [`Matcher`] holds the bookkeeping of one search:
//!
//! * `graph_to_motif` / `motif_to_graph`: mutually inverse partial maps
//!   between graph nodes and motif nodes;
//! * `edge_count`: how many stacked edges touch each graph node; a node is
//!   released once this drops to zero;
//! * `stack`: graph edges currently matched to ranks `1..=stack.len()`;
//! * `deadline`: `t'`, unbounded while the stack is empty.
//!
//! A full match is reported as the stack plus the edge that satisfied the
//! last rank. That final edge is never pushed: the search moves straight on
//! to alternative final edges.

use std::fmt;
use std::ops::{ControlFlow, Range};
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{EdgeConstraint, EdgeIdx, NodeId, TemporalGraph, Timestamp};
use crate::motif::{Endpoint, Motif};

const UNASSIGNED: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown motif node `{0}`")]
    UnknownRole(String),
}

/// Maximum span between the first and last edge of a match.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Delta {
    Finite(Timestamp),
    Infinite,
}

impl Delta {
    /// # Panics
    /// If `d` is negative.
    pub fn finite(d: Timestamp) -> Self {
        assert!(d >= 0, "delta must be non-negative, got {d}");
        Delta::Finite(d)
    }

    /// Latest admissible timestamp for a match starting at `start`.
    #[inline]
    pub fn deadline(self, start: Timestamp) -> Timestamp {
        match self {
            Delta::Finite(d) => start.saturating_add(d),
            Delta::Infinite => Timestamp::MAX,
        }
    }

    pub fn admits(self, span: Timestamp) -> bool {
        match self {
            Delta::Finite(d) => span <= d,
            Delta::Infinite => true,
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Finite(d) => write!(f, "{d}"),
            Delta::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid delta `{0}`: expected seconds, <n>s/m/h/d/w, or `inf`")]
pub struct DeltaParseError(String);

impl FromStr for Delta {
    type Err = DeltaParseError;

    /// Plain integers are seconds; `s`, `m`, `h`, `d`, `w` suffixes scale.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "∞") {
            return Ok(Delta::Infinite);
        }
        let err = || DeltaParseError(s.to_owned());
        let (digits, unit) = match t.char_indices().last() {
            Some((i, c)) if c.is_ascii_alphabetic() => (&t[..i], c),
            _ => (t.as_str(), 's'),
        };
        let scale: i64 = match unit {
            's' => 1,
            'm' => 60,
            'h' => 3_600,
            'd' => 86_400,
            'w' => 604_800,
            _ => return Err(err()),
        };
        let n: i64 = digits.parse().map_err(|_| err())?;
        if n < 0 {
            return Err(err());
        }
        n.checked_mul(scale).map(Delta::Finite).ok_or_else(err)
    }
}

#[derive(Clone, Debug)]
pub struct MatchQuery {
    pub motif: Motif,
    pub delta: Delta,
    /// Stop after this many matches.
    pub limit: Option<u64>,
    /// Compare optional node and edge attributes. Motif slots without an
    /// attribute match anything.
    pub use_attributes: bool,
}

impl MatchQuery {
    pub fn new(motif: Motif, delta: Delta) -> Self {
        MatchQuery {
            motif,
            delta,
            limit: None,
            use_attributes: true,
        }
    }

    pub fn with_limit(mut self, limit: Option<u64>) -> Self {
        self.limit = limit;
        self
    }

    pub fn with_attributes(mut self, on: bool) -> Self {
        self.use_attributes = on;
        self
    }
}

/// Search bookkeeping; see the module docs.
#[derive(Clone, Debug)]
pub struct MatchState {
    graph_to_motif: Vec<u32>,
    motif_to_graph: Vec<u32>,
    edge_count: Vec<u32>,
    stack: Vec<EdgeIdx>,
    deadline: Option<Timestamp>,
    motif_edge: usize,
}

impl MatchState {
    fn new(graph_nodes: usize, motif_nodes: usize, motif_edges: usize) -> Self {
        MatchState {
            graph_to_motif: vec![UNASSIGNED; graph_nodes],
            motif_to_graph: vec![UNASSIGNED; motif_nodes],
            edge_count: vec![0; graph_nodes],
            stack: Vec::with_capacity(motif_edges),
            deadline: None,
            motif_edge: 0,
        }
    }

    pub fn motif_node_of(&self, node: NodeId) -> Option<usize> {
        let m = self.graph_to_motif[node.index()];
        (m != UNASSIGNED).then_some(m as usize)
    }

    pub fn graph_node_of(&self, motif_node: usize) -> Option<NodeId> {
        let g = self.motif_to_graph[motif_node];
        (g != UNASSIGNED).then_some(NodeId(g))
    }

    pub fn edge_count(&self, node: NodeId) -> u32 {
        self.edge_count[node.index()]
    }

    pub fn stack(&self) -> &[EdgeIdx] {
        &self.stack
    }

    /// `None` while no edge is stacked.
    pub fn deadline(&self) -> Option<Timestamp> {
        self.deadline
    }

    /// 0-based rank the search is currently trying to satisfy.
    pub fn motif_edge(&self) -> usize {
        self.motif_edge
    }

    /// True when every mapping is cleared, every count is zero and the
    /// stack is empty.
    pub fn is_reset(&self) -> bool {
        self.graph_to_motif.iter().all(|&m| m == UNASSIGNED)
            && self.motif_to_graph.iter().all(|&g| g == UNASSIGNED)
            && self.edge_count.iter().all(|&c| c == 0)
            && self.stack.is_empty()
            && self.deadline.is_none()
            && self.motif_edge == 0
    }

    /// Checks the structural invariants: inverse maps, counts that agree
    /// with the stack, ascending stack within the deadline.
    pub fn check_invariants(&self, graph: &TemporalGraph) -> Result<(), String> {
        for (g, &m) in self.graph_to_motif.iter().enumerate() {
            if m != UNASSIGNED && self.motif_to_graph[m as usize] != g as u32 {
                return Err(format!("graph node {g} -> motif {m} is not inverted"));
            }
        }
        for (m, &g) in self.motif_to_graph.iter().enumerate() {
            if g != UNASSIGNED && self.graph_to_motif[g as usize] != m as u32 {
                return Err(format!("motif node {m} -> graph {g} is not inverted"));
            }
        }
        let mut counts = vec![0u32; self.edge_count.len()];
        for &e in &self.stack {
            counts[graph.edge(e).src.index()] += 1;
            counts[graph.edge(e).dst.index()] += 1;
        }
        if counts != self.edge_count {
            return Err("edge counts disagree with the stack".into());
        }
        for (g, &c) in counts.iter().enumerate() {
            if (c > 0) != (self.graph_to_motif[g] != UNASSIGNED) {
                return Err(format!("graph node {g}: count {c} vs assignment"));
            }
        }
        if self.stack.windows(2).any(|w| w[0] >= w[1]) {
            return Err("stack is not strictly ascending".into());
        }
        if let Some(t) = self.deadline {
            if self.stack.iter().any(|&e| graph.time(e) > t) {
                return Err("stacked edge beyond the deadline".into());
            }
        }
        if self.stack.len() != self.motif_edge {
            return Err("stack size differs from the current rank".into());
        }
        Ok(())
    }
}

/// One complete match, owned.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Match {
    /// Graph edge for each rank, strictly ascending.
    pub edges: Vec<EdgeIdx>,
    /// Graph node for each motif node.
    pub nodes: Vec<NodeId>,
    pub t_start: Timestamp,
    pub t_end: Timestamp,
}

/// A match as seen by a sink, borrowed from the running search.
pub struct MatchRef<'a> {
    graph: &'a TemporalGraph,
    motif: &'a Motif,
    edges: &'a [EdgeIdx],
}

impl<'a> MatchRef<'a> {
    #[inline]
    pub fn edges(&self) -> &'a [EdgeIdx] {
        self.edges
    }

    /// Graph node playing `motif_node`.
    #[inline]
    pub fn node(&self, motif_node: usize) -> NodeId {
        let (rank, end) = self.motif.first_touch(motif_node);
        let e = self.graph.edge(self.edges[rank]);
        match end {
            Endpoint::Src => e.src,
            Endpoint::Dst => e.dst,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.motif.node_count()).map(|n| self.node(n))
    }

    pub fn t_start(&self) -> Timestamp {
        self.graph.time(self.edges[0])
    }

    pub fn t_end(&self) -> Timestamp {
        self.graph.time(*self.edges.last().expect("matches are non-empty"))
    }

    pub fn to_match(&self) -> Match {
        Match {
            edges: self.edges.to_vec(),
            nodes: self.nodes().collect(),
            t_start: self.t_start(),
            t_end: self.t_end(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatchSummary {
    pub matches: u64,
    /// Candidate edges examined while looking for the next match.
    pub edges_scanned: u64,
    /// The search stopped early because of the limit or the sink.
    pub truncated: bool,
}

impl MatchSummary {
    pub fn merge(self, other: MatchSummary) -> MatchSummary {
        MatchSummary {
            matches: self.matches + other.matches,
            edges_scanned: self.edges_scanned + other.edges_scanned,
            truncated: self.truncated || other.truncated,
        }
    }
}

/// One search over one graph. Reusable: after [`Matcher::run`] returns the
/// state is reset and another range of root edges may be searched.
pub struct Matcher<'a> {
    graph: &'a TemporalGraph,
    query: &'a MatchQuery,
    state: MatchState,
    scanned: u64,
}

impl<'a> Matcher<'a> {
    pub fn new(graph: &'a TemporalGraph, query: &'a MatchQuery) -> Self {
        let motif = &query.motif;
        Matcher {
            graph,
            query,
            state: MatchState::new(graph.node_count(), motif.node_count(), motif.edge_count()),
            scanned: 0,
        }
    }

    pub fn state(&self) -> &MatchState {
        &self.state
    }

    /// Smallest edge index `>= floor` that can satisfy the current rank:
    /// within the deadline, consistent with the current node mapping,
    /// injective on newly bound nodes, and attribute-compatible.
    pub fn find_next_match(&mut self, floor: EdgeIdx) -> Option<EdgeIdx> {
        self.find_next(floor, self.graph.edge_count())
    }

    fn find_next(&mut self, floor: EdgeIdx, ceiling: EdgeIdx) -> Option<EdgeIdx> {
        let graph = self.graph;
        let motif = &self.query.motif;
        let st = &self.state;
        let me = motif.edge(st.motif_edge);
        let ug = st.motif_to_graph[me.src];
        let vg = st.motif_to_graph[me.dst];
        let deadline = st.deadline.unwrap_or(Timestamp::MAX);
        let loop_edge = me.src == me.dst;
        let attrs = self.query.use_attributes;

        let constraint = match (ug != UNASSIGNED, vg != UNASSIGNED) {
            (true, true) => EdgeConstraint::Pair(NodeId(ug), NodeId(vg)),
            (true, false) => EdgeConstraint::From(NodeId(ug)),
            (false, true) => EdgeConstraint::Into(NodeId(vg)),
            (false, false) => EdgeConstraint::Any,
        };
        let mut scanned = 0;
        let mut found = None;
        for cand in graph.candidate_edges(constraint, floor, deadline) {
            if cand >= ceiling {
                break;
            }
            scanned += 1;
            let e = graph.edge(cand);
            let src_ok = if ug != UNASSIGNED {
                e.src.0 == ug
            } else {
                st.graph_to_motif[e.src.index()] == UNASSIGNED
            };
            let dst_ok = if vg != UNASSIGNED {
                e.dst.0 == vg
            } else {
                st.graph_to_motif[e.dst.index()] == UNASSIGNED
            };
            // Two unbound motif nodes may not land on one graph node, and a
            // motif loop needs a graph loop.
            if !src_ok || !dst_ok || loop_edge != (e.src == e.dst) {
                continue;
            }
            if attrs
                && !(matches_attr(me.attr, e.attr)
                    && matches_attr(motif.node_attr(me.src), graph.node_attr(e.src))
                    && matches_attr(motif.node_attr(me.dst), graph.node_attr(e.dst)))
            {
                continue;
            }
            found = Some(cand);
            break;
        }
        self.scanned += scanned;
        found
    }

    /// Binds edge `e` to the current rank and advances to the next rank.
    /// The caller guarantees `e` came from [`Matcher::find_next_match`].
    pub fn push(&mut self, e: EdgeIdx) {
        let me = *self.query.motif.edge(self.state.motif_edge);
        let ge = *self.graph.edge(e);
        let st = &mut self.state;
        debug_assert!(st.stack.last().is_none_or(|&top| top < e));
        for (g, m) in [(ge.src, me.src), (ge.dst, me.dst)] {
            st.graph_to_motif[g.index()] = m as u32;
            st.motif_to_graph[m] = g.0;
            st.edge_count[g.index()] += 1;
        }
        if st.stack.is_empty() {
            st.deadline = Some(self.query.delta.deadline(ge.time));
        }
        st.stack.push(e);
        st.motif_edge += 1;
    }

    /// Unbinds the most recent edge, releasing nodes no stacked edge still
    /// touches. Returns the popped edge.
    pub fn pop(&mut self) -> Option<EdgeIdx> {
        let st = &mut self.state;
        let top = st.stack.pop()?;
        if st.stack.is_empty() {
            st.deadline = None;
        }
        let ge = self.graph.edge(top);
        // Endpoints are read back from the popped edge itself; a loop edge
        // decrements its node twice.
        for g in [ge.src, ge.dst] {
            let c = &mut st.edge_count[g.index()];
            *c -= 1;
            if *c == 0 {
                let m = st.graph_to_motif[g.index()];
                st.motif_to_graph[m as usize] = UNASSIGNED;
                st.graph_to_motif[g.index()] = UNASSIGNED;
            }
        }
        st.motif_edge -= 1;
        Some(top)
    }

    fn unwind(&mut self) {
        while self.pop().is_some() {}
    }

    /// Runs the search with rank 1 restricted to edges in `roots`, handing
    /// every match to `sink` in lexicographic order of edge indices.
    pub fn run<F>(&mut self, roots: Range<EdgeIdx>, mut sink: F) -> MatchSummary
    where
        F: FnMut(&MatchRef<'_>) -> ControlFlow<()>,
    {
        let n = self.graph.edge_count();
        let m = self.query.motif.edge_count();
        let roots = roots.start.min(n)..roots.end.min(n);
        let scanned_before = self.scanned;
        let mut summary = MatchSummary::default();
        if roots.is_empty() {
            return summary;
        }
        debug_assert!(self.state.is_reset());
        let graph = self.graph;
        let motif = &self.query.motif;
        let limit = self.query.limit;

        let mut e_g = roots.start;
        'search: loop {
            let ceiling = if self.state.stack.is_empty() { roots.end } else { n };
            match self.find_next(e_g, ceiling) {
                Some(found) => {
                    e_g = found;
                    if self.state.motif_edge == m - 1 {
                        summary.matches += 1;
                        self.state.stack.push(found);
                        let flow = sink(&MatchRef {
                            graph,
                            motif,
                            edges: &self.state.stack,
                        });
                        self.state.stack.pop();
                        if flow.is_break() || limit.is_some_and(|l| summary.matches >= l) {
                            summary.truncated = true;
                            self.unwind();
                            break 'search;
                        }
                    } else {
                        self.push(found);
                    }
                    e_g += 1;
                }
                None => e_g = n,
            }
            // Back up while the scan has run off the end or past t'.
            loop {
                let deadline = self.state.deadline.unwrap_or(Timestamp::MAX);
                if e_g < n && graph.time(e_g) <= deadline {
                    break;
                }
                match self.pop() {
                    Some(top) => e_g = top + 1,
                    None => break 'search,
                }
            }
        }
        summary.edges_scanned = self.scanned - scanned_before;
        summary
    }
}

#[inline]
fn matches_attr(want: Option<i64>, have: Option<i64>) -> bool {
    want.is_none() || want == have
}

/// Streams every match of `query` in `graph` to `sink`.
pub fn temporal_match<F>(graph: &TemporalGraph, query: &MatchQuery, sink: F) -> MatchSummary
where
    F: FnMut(&MatchRef<'_>) -> ControlFlow<()>,
{
    Matcher::new(graph, query).run(0..graph.edge_count(), sink)
}

pub fn count_matches(graph: &TemporalGraph, query: &MatchQuery) -> u64 {
    temporal_match(graph, query, |_| ControlFlow::Continue(())).matches
}

pub fn collect_matches(graph: &TemporalGraph, query: &MatchQuery) -> Vec<Match> {
    let mut out = Vec::new();
    temporal_match(graph, query, |m| {
        out.push(m.to_match());
        ControlFlow::Continue(())
    });
    out
}

/// Resolves an optional role label to a motif node index.
pub fn resolve_role(motif: &Motif, role: Option<&str>) -> Result<Option<usize>, EngineError> {
    role.map(|r| {
        motif
            .node_index(r)
            .ok_or_else(|| EngineError::UnknownRole(r.to_owned()))
    })
    .transpose()
}

/// Adds one to every node of `m` (or only the node playing `role`).
#[inline]
pub(crate) fn tally(counts: &mut [u64], m: &MatchRef<'_>, role: Option<usize>) {
    match role {
        Some(r) => counts[m.node(r).index()] += 1,
        None => {
            for n in m.nodes() {
                counts[n.index()] += 1;
            }
        }
    }
}

/// Number of matches each graph node takes part in, indexed by [`NodeId`].
pub fn node_participation(
    graph: &TemporalGraph,
    query: &MatchQuery,
    role: Option<&str>,
) -> Result<Vec<u64>, EngineError> {
    let role = resolve_role(&query.motif, role)?;
    let mut counts = vec![0u64; graph.node_count()];
    temporal_match(graph, query, |m| {
        tally(&mut counts, m, role);
        ControlFlow::Continue(())
    });
    Ok(counts)
}

/// Mean number of edges in the window `[t_i, t_i + delta]` opened by each
/// edge `i`, counting edge `i` itself and only edges at or after it.
pub fn mean_window_size(graph: &TemporalGraph, delta: Delta) -> f64 {
    let n = graph.edge_count();
    if n == 0 {
        return 0.0;
    }
    let mut hi = 0usize;
    let mut total = 0u128;
    for i in 0..n {
        let deadline = delta.deadline(graph.time(i));
        hi = hi.max(i);
        while hi < n && graph.time(hi) <= deadline {
            hi += 1;
        }
        total += (hi - i) as u128;
    }
    total as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::motif::{builtin_motif, Motif};

    fn labelled(g: &TemporalGraph, m: &Match) -> Vec<(String, String, Timestamp)> {
        m.edges
            .iter()
            .map(|&e| {
                let e = g.edge(e);
                (g.label(e.src).to_owned(), g.label(e.dst).to_owned(), e.time)
            })
            .collect()
    }

    #[test]
    fn sequential_cycle_single_match() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::Infinite);
        let all = collect_matches(&g, &q);
        assert_eq!(all.len(), 1);
        let want: Vec<(String, String, i64)> = [("B", "C", 2), ("C", "E", 4), ("E", "B", 7)]
            .iter()
            .map(|&(a, b, t)| (a.into(), b.into(), t))
            .collect();
        assert_eq!(labelled(&g, &all[0]), want);
        let names: Vec<&str> = all[0].nodes.iter().map(|&n| g.label(n)).collect();
        assert_eq!(names, ["B", "C", "E"]);
        assert_eq!((all[0].t_start, all[0].t_end), (2, 7));
    }

    #[test]
    fn windowed_cycle() {
        let g = fixtures::windowed_cycle_graph();
        let motif = builtin_motif("cycle3").unwrap();
        let hour = collect_matches(&g, &MatchQuery::new(motif.clone(), Delta::finite(60)));
        assert_eq!(hour.len(), 1);
        let names: Vec<&str> = hour[0].nodes.iter().map(|&n| g.label(n)).collect();
        assert_eq!(names, ["B", "C", "D"]);
        let all = collect_matches(&g, &MatchQuery::new(motif, Delta::Infinite));
        assert_eq!(all.len(), 2);
        let names: Vec<&str> = all[0].nodes.iter().map(|&n| g.label(n)).collect();
        assert_eq!(names, ["A", "B", "C"]);
    }

    #[test]
    fn delta_boundary_is_inclusive() {
        let g = fixtures::windowed_cycle_graph();
        let motif = builtin_motif("cycle3").unwrap();
        // B->C at 245 and D->B at 255: span 10.
        assert_eq!(count_matches(&g, &MatchQuery::new(motif.clone(), Delta::finite(10))), 1);
        assert_eq!(count_matches(&g, &MatchQuery::new(motif, Delta::finite(9))), 0);
    }

    #[test]
    fn single_edge_motif_matches_every_edge() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(Motif::from_pairs(&[(0, 1)]).unwrap(), Delta::finite(0));
        assert_eq!(count_matches(&g, &q), g.edge_count() as u64);
    }

    #[test]
    fn find_next_match_hand_trace() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::Infinite);
        let mut mt = Matcher::new(&g, &q);
        // Rank 1 (a->b) with nothing bound: D->E@1 is the first edge.
        assert_eq!(mt.find_next_match(0), Some(0));
        // Bind rank 1 to B->C@2 (index 1).
        assert_eq!(mt.find_next_match(1), Some(1));
        mt.push(1);
        assert_eq!(mt.state().deadline(), Some(Timestamp::MAX));
        // Rank 2 (b->c) scans out-edges of C above index 1: C->E@4 (3) comes
        // before C->A@5 (4).
        assert_eq!(mt.find_next_match(2), Some(3));
        assert_eq!(mt.find_next_match(4), Some(4));
        mt.push(3);
        mt.state().check_invariants(&g).unwrap();
        // Rank 3 (c->a) needs E->B: only E->B@7.
        assert_eq!(mt.find_next_match(4), Some(6));
        assert_eq!(mt.find_next_match(7), None);
        mt.pop();
        mt.pop();
        assert!(mt.state().is_reset());
    }

    #[test]
    fn loops_are_not_bound_to_two_motif_nodes() {
        let g = TemporalGraph::from_triples([("x", "x", 1), ("x", "y", 2)]).unwrap();
        let q = MatchQuery::new(Motif::from_pairs(&[(0, 1)]).unwrap(), Delta::Infinite);
        let all = collect_matches(&g, &q);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges, vec![1]);

        let looped = Motif::from_pairs(&[(0, 0), (0, 1)]).unwrap();
        let all = collect_matches(&g, &MatchQuery::new(looped, Delta::Infinite));
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges, vec![0, 1]);
    }

    #[test]
    fn attributes_filter_matches() {
        let mut b = crate::graph::GraphBuilder::new();
        b.add_labeled_edge("u", "v", 1, 1).unwrap();
        b.add_labeled_edge("u", "w", 2, 2).unwrap();
        b.set_node_attr("w", 9).unwrap();
        let g = b.build();
        let base = Motif::from_pairs(&[(0, 1)]).unwrap();
        let q = MatchQuery::new(base.clone().with_edge_attr(0, Some(2)), Delta::Infinite);
        assert_eq!(collect_matches(&g, &q)[0].edges, vec![1]);
        let q = MatchQuery::new(base.clone().with_node_attr(1, Some(9)), Delta::Infinite);
        assert_eq!(collect_matches(&g, &q)[0].edges, vec![1]);
        let q = q.with_attributes(false);
        assert_eq!(count_matches(&g, &q), 2);
        let q = MatchQuery::new(base.with_node_attr(0, Some(5)), Delta::Infinite);
        assert_eq!(count_matches(&g, &q), 0);
    }

    #[test]
    fn limit_truncates_and_resets() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("path3").unwrap(), Delta::Infinite).with_limit(Some(2));
        let mut mt = Matcher::new(&g, &q);
        let s = mt.run(0..g.edge_count(), |_| ControlFlow::Continue(()));
        assert_eq!(s.matches, 2);
        assert!(s.truncated);
        assert!(mt.state().is_reset());

        let q = q.with_limit(None);
        let mut mt = Matcher::new(&g, &q);
        let s = mt.run(0..g.edge_count(), |_| ControlFlow::Continue(()));
        assert!(!s.truncated);
        assert!(s.matches > 2);
        assert!(mt.state().is_reset());
    }

    #[test]
    fn sink_break_stops() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(Motif::from_pairs(&[(0, 1)]).unwrap(), Delta::Infinite);
        let s = temporal_match(&g, &q, |_| ControlFlow::Break(()));
        assert_eq!((s.matches, s.truncated), (1, true));
    }

    #[test]
    fn participation() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::Infinite);
        let counts = node_participation(&g, &q, None).unwrap();
        for (id, &c) in counts.iter().enumerate() {
            let label = g.label(NodeId(id as u32));
            let want = u64::from(matches!(label, "B" | "C" | "E"));
            assert_eq!(c, want, "{label}");
        }
        assert_eq!(
            node_participation(&g, &q, Some("z")),
            Err(EngineError::UnknownRole("z".into()))
        );

        let g = fixtures::windowed_cycle_graph();
        let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::finite(60));
        let counts = node_participation(&g, &q, Some("a")).unwrap();
        assert_eq!(counts[g.node_id("B").unwrap().index()], 1);
        assert_eq!(counts.iter().sum::<u64>(), 1);

        let empty = TemporalGraph::default();
        assert!(node_participation(&empty, &q, None).unwrap().is_empty());
    }

    #[test]
    fn roots_partition_the_search() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("path3").unwrap(), Delta::Infinite);
        let whole = collect_matches(&g, &q);
        let mut parts = Vec::new();
        let mut mt = Matcher::new(&g, &q);
        for lo in (0..g.edge_count()).step_by(2) {
            mt.run(lo..lo + 2, |m| {
                parts.push(m.to_match());
                ControlFlow::Continue(())
            });
            assert!(mt.state().is_reset());
        }
        assert_eq!(parts, whole);
    }

    #[test]
    fn delta_parsing() {
        assert_eq!("3600".parse(), Ok(Delta::Finite(3600)));
        assert_eq!("1h".parse(), Ok(Delta::Finite(3600)));
        assert_eq!("1d".parse(), Ok(Delta::Finite(86_400)));
        assert_eq!("1w".parse(), Ok(Delta::Finite(604_800)));
        assert_eq!("90m".parse(), Ok(Delta::Finite(5400)));
        assert_eq!("inf".parse(), Ok(Delta::Infinite));
        assert!("-5".parse::<Delta>().is_err());
        assert!("1y".parse::<Delta>().is_err());
        assert!("".parse::<Delta>().is_err());
        assert!(Delta::Finite(5) < Delta::Finite(6) && Delta::Finite(i64::MAX) < Delta::Infinite);
    }

    #[test]
    fn window_size() {
        let g = TemporalGraph::from_triples([("a", "b", 0), ("a", "b", 1), ("a", "b", 2), ("a", "b", 10)]).unwrap();
        // windows: {0,1,2} {1,2} {2} {10}
        assert_eq!(mean_window_size(&g, Delta::finite(2)), 7.0 / 4.0);
        assert_eq!(mean_window_size(&g, Delta::Infinite), 10.0 / 4.0);
        assert_eq!(mean_window_size(&TemporalGraph::default(), Delta::Infinite), 0.0);
    }
}
