//! Ranking nodes by how many matches they take part in.
//!
//! Ties use competition ranking ("1224"): tied nodes share the best rank
//! and the next distinct count skips past them.

use crate::graph::{NodeId, TemporalGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRow {
    pub label: String,
    pub count: u64,
    pub rank: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankTable {
    /// Count descending, then label ascending. Zero counts are omitted.
    pub rows: Vec<RankRow>,
    /// Rank of the requested target, `None` when absent from the table.
    pub target_rank: Option<usize>,
}

impl RankTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.rows.iter().find(|r| r.label == label).map(|r| r.rank)
    }
}

pub fn rank_nodes<I, S>(participation: I, target: Option<&str>) -> RankTable
where
    I: IntoIterator<Item = (S, u64)>,
    S: Into<String>,
{
    let mut rows: Vec<RankRow> = participation
        .into_iter()
        .filter(|(_, c)| *c > 0)
        .map(|(label, count)| RankRow {
            label: label.into(),
            count,
            rank: 0,
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    for i in 0..rows.len() {
        rows[i].rank = if i > 0 && rows[i].count == rows[i - 1].count {
            rows[i - 1].rank
        } else {
            i + 1
        };
    }
    let mut table = RankTable {
        rows,
        target_rank: None,
    };
    table.target_rank = target.and_then(|t| table.rank_of(t));
    table
}

/// [`rank_nodes`] over a per-node count vector, labelled from `graph`.
pub fn rank_graph_nodes(graph: &TemporalGraph, counts: &[u64], target: Option<&str>) -> RankTable {
    rank_nodes(
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (graph.label(NodeId(i as u32)), c)),
        target,
    )
}
