//! Static directed subgraph monomorphism over a merged graph.
//!
//! This is the comparison baseline: timestamps and edge multiplicity are
//! dropped and every injective node mapping that preserves the motif's
//! (distinct) directed edges is enumerated. Extra edges among matched nodes
//! are allowed, i.e. the matching is non-induced.
//!
//! Pattern nodes are visited most-constrained first. Each node after the
//! first draws candidates from the shortest adjacency row of an already
//! placed neighbour and checks the remaining edges by binary search.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use crate::graph::StaticGraph;
use crate::motif::Motif;

/// Structure of a motif with ranks and multiplicity erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticPattern {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl StaticPattern {
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().collect();
        assert!(edges.iter().all(|&(u, v)| u < nodes && v < nodes));
        edges.sort_unstable();
        edges.dedup();
        StaticPattern { nodes, edges }
    }

    /// `n` nodes and no edges.
    pub fn isolated(n: usize) -> Self {
        StaticPattern::new(n, [])
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn as_graph(&self) -> StaticGraph {
        StaticGraph::from_pairs(self.nodes, self.edges.iter().copied())
    }
}

impl From<&Motif> for StaticPattern {
    fn from(m: &Motif) -> Self {
        StaticPattern::new(m.node_count(), m.edges().iter().map(|e| (e.src, e.dst)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    /// pattern edge placed -> node
    FromPlaced,
    /// pattern edge node -> placed
    ToPlaced,
}

#[derive(Clone, Debug)]
struct Step {
    node: usize,
    /// Edges to nodes placed earlier, as (earlier node, direction).
    links: Vec<(usize, Dir)>,
    self_loop: bool,
}

fn plan(p: &StaticPattern) -> Vec<Step> {
    let n = p.nodes;
    let degree = |v: usize| p.edges.iter().filter(|&&(a, b)| a == v || b == v).count();
    let mut placed = vec![false; n];
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let links_to_placed = |v: usize| {
            p.edges
                .iter()
                .filter(|&&(a, b)| (a == v && b != v && placed[b]) || (b == v && a != v && placed[a]))
                .count()
        };
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links_to_placed(v), degree(v), std::cmp::Reverse(v)))
            .expect("an unplaced node remains");
        let mut links = Vec::new();
        for &(a, b) in &p.edges {
            if a == next && b != next && placed[b] {
                links.push((b, Dir::ToPlaced));
            } else if b == next && a != next && placed[a] {
                links.push((a, Dir::FromPlaced));
            }
        }
        steps.push(Step {
            node: next,
            links,
            self_loop: p.edges.contains(&(next, next)),
        });
        placed[next] = true;
    }
    steps
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StaticSummary {
    pub embeddings: u64,
    /// The time cap expired; `embeddings` is a lower bound.
    pub timed_out: bool,
}

/// Reusable static search over one graph and pattern.
pub struct StaticMatcher<'a> {
    graph: &'a StaticGraph,
    steps: Vec<Step>,
    time_cap: Option<Duration>,
}

struct Search<'s, F> {
    graph: &'s StaticGraph,
    steps: &'s [Step],
    map: Vec<u32>,
    used: Vec<bool>,
    sink: F,
    deadline: Option<Instant>,
    ticks: u32,
    summary: StaticSummary,
}

impl<F: FnMut(&[u32]) -> ControlFlow<()>> Search<'_, F> {
    fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.summary.timed_out = true;
                }
            }
        }
        self.summary.timed_out
    }

    fn feasible(&self, step: &Step, cand: u32) -> bool {
        if self.used[cand as usize] {
            return false;
        }
        if step.self_loop && !self.graph.has_edge(cand as usize, cand as usize) {
            return false;
        }
        step.links.iter().all(|&(other, dir)| {
            let o = self.map[other] as usize;
            match dir {
                Dir::FromPlaced => self.graph.has_edge(o, cand as usize),
                Dir::ToPlaced => self.graph.has_edge(cand as usize, o),
            }
        })
    }

    fn descend(&mut self, depth: usize) -> ControlFlow<()> {
        if depth == self.steps.len() {
            self.summary.embeddings += 1;
            return (self.sink)(&self.map);
        }
        if self.expired() {
            return ControlFlow::Break(());
        }
        let steps = self.steps;
        let graph = self.graph;
        let step = &steps[depth];
        // Shortest adjacency row among placed neighbours.
        let row = step
            .links
            .iter()
            .map(|&(other, dir)| {
                let o = self.map[other] as usize;
                match dir {
                    Dir::FromPlaced => graph.out_neighbors(o),
                    Dir::ToPlaced => graph.in_neighbors(o),
                }
            })
            .min_by_key(|r| r.len());
        match row {
            Some(row) => {
                for &cand in row {
                    self.try_candidate(depth, step, cand)?;
                }
            }
            None => {
                for cand in 0..graph.node_count() as u32 {
                    self.try_candidate(depth, step, cand)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    #[inline]
    fn try_candidate(&mut self, depth: usize, step: &Step, cand: u32) -> ControlFlow<()> {
        if !self.feasible(step, cand) {
            return ControlFlow::Continue(());
        }
        self.map[step.node] = cand;
        self.used[cand as usize] = true;
        let flow = self.descend(depth + 1);
        self.used[cand as usize] = false;
        flow
    }
}

impl<'a> StaticMatcher<'a> {
    pub fn new(graph: &'a StaticGraph, pattern: &StaticPattern) -> Self {
        StaticMatcher {
            graph,
            steps: plan(pattern),
            time_cap: None,
        }
    }

    pub fn with_time_cap(mut self, cap: Option<Duration>) -> Self {
        self.time_cap = cap;
        self
    }

    /// Streams every embedding (graph node per pattern node) to `sink`.
    pub fn run<F>(&self, sink: F) -> StaticSummary
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let n = self.steps.len();
        let mut search = Search {
            graph: self.graph,
            steps: &self.steps,
            map: vec![u32::MAX; n],
            used: vec![false; self.graph.node_count()],
            sink,
            deadline: self.time_cap.map(|c| Instant::now() + c),
            ticks: 0,
            summary: StaticSummary::default(),
        };
        if n <= self.graph.node_count() {
            let _ = search.descend(0);
        }
        search.summary
    }

    pub fn count(&self) -> StaticSummary {
        self.run(|_| ControlFlow::Continue(()))
    }
}

/// Streams every static embedding of `motif` in `graph` and returns how many
/// there were.
pub fn static_match<F>(graph: &StaticGraph, motif: &Motif, sink: F) -> u64
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    StaticMatcher::new(graph, &StaticPattern::from(motif))
        .run(sink)
        .embeddings
}

/// Number of distinct static edge sets covered by `embeddings`.
pub fn dedup_by_edge_set<I, E>(pattern: &StaticPattern, embeddings: I) -> u64
where
    I: IntoIterator<Item = E>,
    E: AsRef<[u32]>,
{
    let mut seen: HashSet<Vec<(u32, u32)>> = HashSet::new();
    for emb in embeddings {
        let emb = emb.as_ref();
        let mut set: Vec<(u32, u32)> = pattern.edges.iter().map(|&(u, v)| (emb[u], emb[v])).collect();
        set.sort_unstable();
        seen.insert(set);
    }
    seen.len() as u64
}

/// Distinct static edge sets isomorphic to `pattern` in `graph`.
pub fn count_edge_sets(graph: &StaticGraph, pattern: &StaticPattern) -> u64 {
    let mut all = Vec::new();
    StaticMatcher::new(graph, pattern).run(|m| {
        all.push(m.to_vec());
        ControlFlow::Continue(())
    });
    dedup_by_edge_set(pattern, &all)
}

/// Size of the automorphism group of `pattern`.
pub fn automorphism_count(pattern: &StaticPattern) -> u64 {
    StaticMatcher::new(&pattern.as_graph(), pattern).count().embeddings
}
