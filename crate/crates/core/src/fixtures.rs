//! Small hand-checked graphs used throughout the tests and examples.

use crate::graph::TemporalGraph;

/// Six nodes, nine edges, four directed 3-cycles of which only B->C->E->B
/// is chronologically sequential.
pub const SEQUENTIAL_CYCLE_EDGES: &str = "\
# src dst time
A B 3
C A 5
B C 2
C E 4
E B 7
D E 1
B D 6
F C 8
E F 9
";

/// Two sequential 3-cycles, times in minutes. Only B->C->D->B spans less
/// than an hour; A->B->C->A takes seven and a half.
pub const WINDOWED_CYCLE_EDGES: &str = "\
# src dst minutes
A B 240
B C 245
C A 690
C D 250
D B 255
";

fn parse(text: &str) -> TemporalGraph {
    let triples = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let src = it.next().unwrap();
            let dst = it.next().unwrap();
            let time = it.next().unwrap().parse().unwrap();
            (src, dst, time)
        });
    TemporalGraph::from_triples(triples).expect("fixture is well formed")
}

pub fn sequential_cycle_graph() -> TemporalGraph {
    parse(SEQUENTIAL_CYCLE_EDGES)
}

pub fn windowed_cycle_graph() -> TemporalGraph {
    parse(WINDOWED_CYCLE_EDGES)
}
