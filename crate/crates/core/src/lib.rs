//! Temporal subgraph matching on timestamped multi-digraphs.
//!
//! Given a motif whose edges carry a strict order and a window `delta`,
//! [`engine::temporal_match`] finds every set of graph edges that realizes
//! the motif in that order within `delta` time units. The search walks the
//! chronologically sorted edge list directly rather than filtering static
//! matches, so it only ever extends chronologically valid partial matches.
//!
//! ```
//! use chronomatch::prelude::*;
//!
//! let g = chronomatch::fixtures::sequential_cycle_graph();
//! let q = MatchQuery::new(builtin_motif("cycle3").unwrap(), Delta::Infinite);
//! assert_eq!(count_matches(&g, &q), 1);
//! ```

pub mod analytics;
pub mod baseline;
pub mod engine;
pub mod fixtures;
pub mod graph;
pub mod ingest;
pub mod motif;
pub mod oracle;
pub mod parallel;
pub mod synth;

pub mod prelude {
    pub use crate::analytics::{rank_graph_nodes, rank_nodes, RankTable};
    pub use crate::baseline::{static_match, StaticMatcher, StaticPattern};
    pub use crate::engine::{
        collect_matches, count_matches, node_participation, temporal_match, Delta, Match, MatchQuery, MatchRef,
        MatchSummary, Matcher,
    };
    pub use crate::graph::{EdgeIdx, NodeId, StaticGraph, TemporalGraph, Timestamp};
    pub use crate::ingest::{load_dataset, EdgeListFormat};
    pub use crate::motif::{builtin_motif, parse_motif, Motif};
    pub use crate::parallel::{par_count_matches, par_node_participation};
}
