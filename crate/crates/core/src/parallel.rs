//! Root-partitioned search.
//!
//! Every match is owned by the edge bound to rank 1, so splitting the root
//! range into chunks yields independent searches. Each worker keeps one
//! [`Matcher`] and reuses it across chunks. Without the `parallel` feature
//! the same chunks run in order on the calling thread.

use std::ops::{ControlFlow, Range};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::{resolve_role, tally, EngineError, MatchQuery, MatchSummary, Matcher};
use crate::graph::{EdgeIdx, TemporalGraph};

/// Splits `0..edges` into at most `chunks` contiguous, non-empty ranges.
pub fn root_chunks(edges: usize, chunks: usize) -> Vec<Range<EdgeIdx>> {
    let chunks = chunks.clamp(1, edges.max(1));
    let step = edges.div_ceil(chunks).max(1);
    (0..edges).step_by(step).map(|lo| lo..(lo + step).min(edges)).collect()
}

fn default_chunks(edges: usize) -> Vec<Range<EdgeIdx>> {
    #[cfg(feature = "parallel")]
    let workers = rayon::current_num_threads();
    #[cfg(not(feature = "parallel"))]
    let workers = 1;
    root_chunks(edges, workers * 32)
}

fn fold_chunks<T, F, R>(graph: &TemporalGraph, query: &MatchQuery, identity: T, run: F, reduce: R) -> T
where
    T: Send + Sync + Clone,
    F: Fn(&mut Matcher<'_>, Range<EdgeIdx>, &mut T) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let chunks = default_chunks(graph.edge_count());
    #[cfg(feature = "parallel")]
    {
        chunks
            .into_par_iter()
            .fold(
                || (Matcher::new(graph, query), identity.clone()),
                |(mut mt, mut acc), range| {
                    run(&mut mt, range, &mut acc);
                    (mt, acc)
                },
            )
            .map(|(_, acc)| acc)
            .reduce(|| identity.clone(), &reduce)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &reduce;
        let mut mt = Matcher::new(graph, query);
        let mut acc = identity;
        for range in chunks {
            run(&mut mt, range, &mut acc);
        }
        acc
    }
}

/// Counts matches across all workers. A query limit caps the reported count
/// but does not stop workers early.
pub fn par_count_matches(graph: &TemporalGraph, query: &MatchQuery) -> MatchSummary {
    let unlimited = query.clone().with_limit(None);
    let mut summary = fold_chunks(
        graph,
        &unlimited,
        MatchSummary::default(),
        |mt, range, acc| {
            let s = mt.run(range, |_| ControlFlow::Continue(()));
            *acc = acc.merge(s);
        },
        MatchSummary::merge,
    );
    if let Some(limit) = query.limit {
        if summary.matches > limit {
            summary.matches = limit;
            summary.truncated = true;
        }
    }
    summary
}

/// Parallel [`crate::engine::node_participation`]; ignores the query limit.
pub fn par_node_participation(
    graph: &TemporalGraph,
    query: &MatchQuery,
    role: Option<&str>,
) -> Result<Vec<u64>, EngineError> {
    let role = resolve_role(&query.motif, role)?;
    let unlimited = query.clone().with_limit(None);
    Ok(fold_chunks(
        graph,
        &unlimited,
        vec![0u64; graph.node_count()],
        |mt, range, acc| {
            mt.run(range, |m| {
                tally(acc, m, role);
                ControlFlow::Continue(())
            });
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    ))
}
