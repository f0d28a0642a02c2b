use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SEQUENTIAL_CYCLE: &str = "A B 3\nC A 5\nB C 2\nC E 4\nE B 7\nD E 1\nB D 6\nF C 8\nE F 9\n";

fn chronomatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chronomatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn match_writes_one_row_per_match() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycles.txt", SEQUENTIAL_CYCLE);
    let o = chronomatch(&["match", "--graph", s(&g), "--motif", "builtin:cycle3", "--delta", "inf"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "match_id,edge_index_1,src_1,dst_1,time_1,edge_index_2,src_2,dst_2,time_2,\
         edge_index_3,src_3,dst_3,time_3,node_a,node_b,node_c,t_start,t_end"
    );
    assert_eq!(lines[1], "1,1,B,C,2,3,C,E,4,6,E,B,7,B,C,E,2,7");
    assert!(stderr(&o).contains("matches: 1"));
}

#[test]
fn single_edge_motif_matches_every_edge() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycles.txt", SEQUENTIAL_CYCLE);
    let m = write(&dir, "edge.motif", "# one edge\nx y 1\n");
    let out = dir.path().join("out.csv");
    let o = chronomatch(&[
        "match",
        "--graph",
        s(&g),
        "--motif",
        s(&m),
        "--delta",
        "0",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let csv = fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9);
}

#[test]
fn limit_truncates_output() {
    let dir = TempDir::new().unwrap();
    let edges: String = (0..50).map(|t| format!("u{} u{} {t}\n", t % 7, (t + 1) % 7)).collect();
    let g = write(&dir, "g.txt", &edges);
    let o = chronomatch(&[
        "match",
        "--graph",
        s(&g),
        "--motif",
        "builtin:path2",
        "--delta",
        "inf",
        "--limit",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 11);
    assert!(stderr(&o).contains("truncated"));
}

#[test]
fn count_and_parallel_count_agree() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "windowed.txt", "A B 240\nB C 245\nC A 690\nC D 250\nD B 255\n");
    for (delta, want) in [("60", "1"), ("449", "1"), ("450", "2"), ("inf", "2")] {
        for extra in [None, Some("--parallel")] {
            let mut args = vec!["count", "--graph", s(&g), "--motif", "builtin:cycle3", "--delta", delta];
            args.extend(extra);
            let o = chronomatch(&args);
            assert!(o.status.success(), "{}", stderr(&o));
            assert_eq!(stdout(&o).trim(), want, "delta {delta}");
        }
    }
}

#[test]
fn csv_and_konect_inputs() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "g.csv", "src,dst,time\nB,C,2\nC,E,4\nE,B,7\n");
    let konect = write(&dir, "g.tsv", "% sym\nB C 1 2\nC E 1 4\nE B 1 7\n");
    for (path, fmt) in [(&csv, "auto"), (&csv, "csv"), (&konect, "auto"), (&konect, "konect")] {
        let o = chronomatch(&[
            "count",
            "--graph",
            s(path),
            "--format",
            fmt,
            "--motif",
            "builtin:cycle3",
            "--delta",
            "5",
        ]);
        assert!(o.status.success(), "{fmt}: {}", stderr(&o));
        assert_eq!(stdout(&o).trim(), "1", "{fmt}");
    }
}

#[test]
fn rank_reports_target() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycles.txt", SEQUENTIAL_CYCLE);
    let o = chronomatch(&[
        "rank",
        "--graph",
        s(&g),
        "--motif",
        "builtin:cycle3",
        "--delta",
        "inf",
        "--role",
        "a",
        "--target",
        "B",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "rank,node,count\n1,B,1\n");
    assert!(stderr(&o).contains("target: 1"));

    let o = chronomatch(&[
        "rank",
        "--graph",
        s(&g),
        "--motif",
        "builtin:cycle3",
        "--delta",
        "inf",
        "--target",
        "D",
    ]);
    assert!(stderr(&o).contains("target: absent"));
}

#[test]
fn bench_report_and_plot_data() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycles.txt", SEQUENTIAL_CYCLE);
    let plot = dir.path().join("plot.csv");
    let o = chronomatch(&[
        "bench",
        "--graph",
        s(&g),
        "--motifs",
        "cycle3,M2",
        "--deltas",
        "5,inf",
        "--time-cap",
        "10",
        "--plot-data",
        s(&plot),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "graph,motif,delta,temporal_count,temporal_sec,static_count,static_sec,speedup,k_window"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("cycles,cycle3,5,1,"));
    assert!(lines[2].starts_with("cycles,cycle3,inf,1,"));
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[5], "12");
    let plot = fs::read_to_string(plot).unwrap();
    assert!(plot.starts_with("graph,motif,delta,count_ratio,speedup\n"));
    assert!(plot.contains("cycles,cycle3,5,12.000000,"));
}

#[test]
fn errors_exit_with_status_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cycles.txt", SEQUENTIAL_CYCLE);
    let bad_graph = write(&dir, "bad.txt", "A B x\n");
    let bad_motif = write(&dir, "bad.motif", "a b 1\nb c 1\n");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "count",
            "--graph",
            "/nonexistent/graph",
            "--motif",
            "builtin:M1",
            "--delta",
            "1",
        ],
        vec![
            "count",
            "--graph",
            s(&bad_graph),
            "--motif",
            "builtin:M1",
            "--delta",
            "1",
        ],
        vec!["count", "--graph", s(&g), "--motif", s(&bad_motif), "--delta", "1"],
        vec!["count", "--graph", s(&g), "--motif", "builtin:nope", "--delta", "1"],
        vec!["count", "--graph", s(&g), "--motif", "builtin:M1", "--delta", "soon"],
        vec![
            "rank",
            "--graph",
            s(&g),
            "--motif",
            "builtin:M1",
            "--delta",
            "1",
            "--role",
            "zz",
        ],
    ];
    for args in cases {
        let o = chronomatch(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}
