//! Seeded synthetic temporal graphs and motifs for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, TemporalGraph, Timestamp};
use crate::motif::Motif;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label(i: usize) -> String {
    format!("n{i}")
}

/// `edges` edges with uniform random endpoints (loops allowed) and uniform
/// random times in `0..span`.
pub fn uniform(nodes: usize, edges: usize, span: Timestamp, seed: u64) -> TemporalGraph {
    assert!(nodes > 0 && span > 0);
    let mut r = rng(seed);
    let mut b = GraphBuilder::with_capacity(edges);
    for _ in 0..edges {
        let u = r.gen_range(0..nodes);
        let v = r.gen_range(0..nodes);
        let t = r.gen_range(0..span);
        b.add_edge(&label(u), &label(v), t).expect("generated labels are valid");
    }
    b.build()
}

/// One edge per time tick with uniform random endpoints and no loops. A
/// window of `k` ticks then holds exactly `k` edges on average anywhere in
/// the stream, independent of its length.
pub fn steady_stream(nodes: usize, edges: usize, seed: u64) -> TemporalGraph {
    assert!(nodes > 1);
    let mut r = rng(seed);
    let mut b = GraphBuilder::with_capacity(edges);
    for t in 0..edges {
        let u = r.gen_range(0..nodes);
        let mut v = r.gen_range(0..nodes - 1);
        if v >= u {
            v += 1;
        }
        b.add_edge(&label(u), &label(v), t as Timestamp)
            .expect("generated labels are valid");
    }
    b.build()
}

/// Message-log style graph: a fixed set of sender/receiver relationships
/// with heavy-tailed activity, replayed many times in short conversation
/// bursts. Produces many parallel edges per pair, like email data.
pub fn message_log(nodes: usize, pairs: usize, edges: usize, span: Timestamp, seed: u64) -> TemporalGraph {
    assert!(nodes > 1 && pairs > 0 && span > 0);
    let mut r = rng(seed);
    // Zipf-like node activity: node i has weight 1 / (i + 1).
    let weights: Vec<f64> = (0..nodes).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(nodes);
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }
    let pick = |r: &mut ChaCha8Rng| {
        let x: f64 = r.gen();
        cumulative.partition_point(|&c| c < x).min(nodes - 1)
    };
    let mut rel = Vec::with_capacity(pairs);
    while rel.len() < pairs {
        let u = pick(&mut r);
        let v = r.gen_range(0..nodes);
        if u != v {
            rel.push((u, v));
        }
    }
    let mut b = GraphBuilder::with_capacity(edges);
    let mut made = 0;
    while made < edges {
        // A burst: a few related messages within a few minutes.
        let start = r.gen_range(0..span);
        let &(u, v) = rel.choose(&mut r).expect("pairs > 0");
        let burst = r.gen_range(1..=4).min(edges - made);
        let mut t = start;
        let mut cur = (u, v);
        for _ in 0..burst {
            b.add_edge(&label(cur.0), &label(cur.1), t)
                .expect("generated labels are valid");
            made += 1;
            t += r.gen_range(0..600);
            // Replies and forwards keep the conversation on nearby pairs.
            cur = match r.gen_range(0..3) {
                0 => (cur.1, cur.0),
                1 => *rel.choose(&mut r).expect("pairs > 0"),
                _ => (cur.1, pick(&mut r)),
            };
            if cur.0 == cur.1 {
                cur = (u, v);
            }
        }
    }
    b.build()
}

/// A random motif with `1..=max_edges` edges over at most `max_nodes`
/// nodes. Loops appear only when `loops` is set.
pub fn random_motif(max_nodes: usize, max_edges: usize, loops: bool, seed: u64) -> Motif {
    assert!(max_nodes >= 2 && max_edges >= 1);
    let mut r = rng(seed);
    loop {
        let m = r.gen_range(1..=max_edges);
        let k = r.gen_range(2..=max_nodes.min(2 * m));
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            let u = r.gen_range(0..k);
            let v = if loops && r.gen_bool(0.1) {
                u
            } else {
                let mut v = r.gen_range(0..k - 1);
                if v >= u {
                    v += 1;
                }
                v
            };
            pairs.push((u, v));
        }
        // Relabel nodes by first use so every index in 0..k' is touched.
        let mut order: Vec<usize> = Vec::new();
        for &(u, v) in &pairs {
            for x in [u, v] {
                if !order.contains(&x) {
                    order.push(x);
                }
            }
        }
        let pos = |x: usize| order.iter().position(|&y| y == x).expect("recorded above");
        let pairs: Vec<(usize, usize)> = pairs.iter().map(|&(u, v)| (pos(u), pos(v))).collect();
        if let Ok(motif) = Motif::from_pairs(&pairs) {
            return motif;
        }
    }
}
