//! Brute-force temporal match enumeration.
//!
//! Works straight from the definition: a strictly ascending tuple of edge
//! indices, one per rank, is a match iff its time span fits in delta, the
//! induced node mapping is consistent and injective, and attributes agree.
//! Every condition holds for a tuple only if it holds for each prefix, so
//! prefixes that already fail are not extended. Nothing here touches the
//! graph indexes or the engine.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::engine::{Match, MatchQuery};
use crate::graph::{EdgeIdx, NodeId, TemporalGraph};

/// Largest graph the oracle accepts.
pub const MAX_EDGES: usize = 500;
/// Largest motif the oracle accepts.
pub const MAX_MOTIF_EDGES: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("oracle refuses {edges} graph edges x {motif_edges} motif edges (limits {MAX_EDGES} x {MAX_MOTIF_EDGES})")]
pub struct OracleError {
    pub edges: usize,
    pub motif_edges: usize,
}

/// Node mapping induced by `tuple`, or `None` if it is inconsistent,
/// non-injective, out of window or attribute-incompatible.
fn induced_mapping(g: &TemporalGraph, q: &MatchQuery, tuple: &[EdgeIdx]) -> Option<Vec<NodeId>> {
    let motif = &q.motif;
    let first = g.edge(tuple[0]).time;
    let last = g.edge(*tuple.last()?).time;
    if !q.delta.admits(last - first) {
        return None;
    }
    let mut forward: HashMap<usize, NodeId> = HashMap::new();
    let mut backward: HashMap<NodeId, usize> = HashMap::new();
    for (rank, &idx) in tuple.iter().enumerate() {
        let me = motif.edge(rank);
        let ge = g.edge(idx);
        if q.use_attributes && me.attr.is_some() && me.attr != ge.attr {
            return None;
        }
        for (mn, gn) in [(me.src, ge.src), (me.dst, ge.dst)] {
            if *forward.entry(mn).or_insert(gn) != gn {
                return None;
            }
            if *backward.entry(gn).or_insert(mn) != mn {
                return None;
            }
            let want = motif.node_attr(mn);
            if q.use_attributes && want.is_some() && want != g.node_attr(gn) {
                return None;
            }
        }
    }
    let mut nodes: Vec<(usize, NodeId)> = forward.into_iter().collect();
    nodes.sort_unstable();
    Some(nodes.into_iter().map(|(_, g)| g).collect())
}

/// Every match of `q` in `g`, ignoring `q.limit`.
pub fn brute_force_temporal_match(g: &TemporalGraph, q: &MatchQuery) -> Result<BTreeSet<Match>, OracleError> {
    let m = q.motif.edge_count();
    if g.edge_count() > MAX_EDGES || m > MAX_MOTIF_EDGES {
        return Err(OracleError {
            edges: g.edge_count(),
            motif_edges: m,
        });
    }
    let mut out = BTreeSet::new();
    let mut tuple = Vec::with_capacity(m);
    extend(g, q, m, &mut tuple, &mut out);
    Ok(out)
}

fn extend(g: &TemporalGraph, q: &MatchQuery, m: usize, tuple: &mut Vec<EdgeIdx>, out: &mut BTreeSet<Match>) {
    let start = tuple.last().map_or(0, |&e| e + 1);
    for idx in start..g.edge_count() {
        tuple.push(idx);
        if let Some(nodes) = induced_mapping(g, q, tuple) {
            if tuple.len() == m {
                out.insert(Match {
                    edges: tuple.clone(),
                    nodes,
                    t_start: g.edge(tuple[0]).time,
                    t_end: g.edge(idx).time,
                });
            } else {
                extend(g, q, m, tuple, out);
            }
        }
        tuple.pop();
    }
}

/// Number of matches whose first edge lies in `roots`, computed by running
/// the oracle on the slice of edges those matches can reach.
///
/// Used to spot-check counts on graphs far too large for the oracle: only
/// edges within `delta` of the root range matter, so a short root range on
/// a large graph still yields an oracle-sized slice.
pub fn count_rooted(g: &TemporalGraph, q: &MatchQuery, roots: std::ops::Range<EdgeIdx>) -> Result<u64, OracleError> {
    let roots = roots.start.min(g.edge_count())..roots.end.min(g.edge_count());
    if roots.is_empty() {
        return Ok(0);
    }
    let deadline = q.delta.deadline(g.time(roots.end - 1));
    let end = (roots.end..g.edge_count())
        .find(|&i| g.time(i) > deadline)
        .unwrap_or(g.edge_count());
    let slice = g.slice_edges(roots.start..end);
    let all = brute_force_temporal_match(&slice, q)?;
    let cut = roots.len();
    Ok(all.iter().filter(|m| m.edges[0] < cut).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Delta;
    use crate::fixtures;
    use crate::motif::{builtin_motif, Motif};

    #[test]
    fn sequential_cycle() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::Infinite);
        let all = brute_force_temporal_match(&g, &q).unwrap();
        assert_eq!(all.len(), 1);
        let m = all.first().unwrap();
        let times: Vec<i64> = m.edges.iter().map(|&e| g.time(e)).collect();
        assert_eq!(times, [2, 4, 7]);
    }

    #[test]
    fn windowed_cycle() {
        let g = fixtures::windowed_cycle_graph();
        let motif = builtin_motif("cycle3").unwrap();
        let q = MatchQuery::new(motif.clone(), Delta::finite(60));
        assert_eq!(brute_force_temporal_match(&g, &q).unwrap().len(), 1);
        let q = MatchQuery::new(motif, Delta::Infinite);
        assert_eq!(brute_force_temporal_match(&g, &q).unwrap().len(), 2);
    }

    #[test]
    fn motif_larger_than_graph() {
        let g = TemporalGraph::from_triples([("a", "b", 1), ("b", "c", 2)]).unwrap();
        let q = MatchQuery::new(builtin_motif("M2").unwrap(), Delta::Infinite);
        assert!(brute_force_temporal_match(&g, &q).unwrap().is_empty());
    }

    #[test]
    fn guard() {
        let triples: Vec<_> = (0..MAX_EDGES as i64 + 1).map(|t| ("a", "b", t)).collect();
        let g = TemporalGraph::from_triples(triples).unwrap();
        let q = MatchQuery::new(Motif::from_pairs(&[(0, 1)]).unwrap(), Delta::Infinite);
        assert_eq!(
            brute_force_temporal_match(&g, &q),
            Err(OracleError {
                edges: MAX_EDGES + 1,
                motif_edges: 1
            })
        );
    }

    #[test]
    fn rooted_counts_sum_to_total() {
        let g = fixtures::sequential_cycle_graph();
        let q = MatchQuery::new(builtin_motif("path3").unwrap(), Delta::finite(3));
        let total = brute_force_temporal_match(&g, &q).unwrap().len() as u64;
        let parts: u64 = (0..g.edge_count())
            .map(|i| count_rooted(&g, &q, i..i + 1).unwrap())
            .sum();
        assert_eq!(parts, total);
    }
}
