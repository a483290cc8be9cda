use std::process::{Command, Output};

use expander_core::planner::Certificate;

fn expander(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expander")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn certify_writes_a_complete_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k4.edges");
    let cert = dir.path().join("k4.json");
    std::fs::write(&graph, K4).unwrap();
    let o = expander(&["certify", "--graph", graph.to_str().unwrap(), "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let c = Certificate::load(&cert).unwrap();
    assert_eq!((c.k, c.n), (3, 4));
    assert!((c.lambda2 + 1.0).abs() < 1e-10 && c.ramanujan);
    let e = c.expansion.unwrap();
    assert_eq!((e.h, e.witness), (2.0, vec![0, 1]));
    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(raw["bounds"].as_array().unwrap().is_empty());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p3.edges");
    std::fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
    let cert = dir.path().join("c.json");
    let o = expander(&["certify", "--graph", path.to_str().unwrap(), "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!cert.exists());

    std::fs::write(&path, "3 1\n1 1\n").unwrap();
    assert_eq!(expander(&["expansion", "--graph", path.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(expander(&["bounds", "--k", "7", "--model", "nope"]).status.code(), Some(1));
    assert_eq!(expander(&["bounds", "--k", "7", "--model", "rh", "--rh-constant", "-1"]).status.code(), Some(1));
    assert_eq!(expander(&["delta-table", "--ranges", "10-100"]).status.code(), Some(1));
    assert_eq!(expander(&["construct", "--k", "7"]).status.code(), Some(1));
    assert_eq!(expander(&["compare", "--p", "5", "--q", "13", "--target-k", "4"]).status.code(), Some(1));
    assert_eq!(expander(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn expansion_enforces_the_size_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c25.edges");
    let mut text = String::from("25 25\n");
    let mut edges: Vec<(usize, usize)> = (0..25).map(|i| (i.min((i + 1) % 25), i.max((i + 1) % 25))).collect();
    edges.sort();
    for (u, v) in edges {
        text.push_str(&format!("{u} {v}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let o = expander(&["expansion", "--graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("24"));

    std::fs::write(&path, K4).unwrap();
    let o = expander(&["expansion", "--graph", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h"], 2.0);
}

#[test]
fn bounds_prints_one_line_per_model() {
    let o = expander(&["bounds", "--k", "7"]);
    let out = stdout(&o);
    let names: Vec<&str> = out.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["chain", "delta", "trudgian", "bhp", "rh"]);
    assert!(out.lines().next().unwrap().contains("lambda2<=5.47213595499958"));

    let o = expander(&["bounds", "--k", "7", "--model", "chain"]);
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = expander(&["bounds", "--k", "3000000", "--model", "trudgian"]);
    assert!(stdout(&o).contains("valid=true"));
    let o = expander(&["bounds", "--k", "1000000", "--model", "rh", "--rh-constant", "2"]);
    assert!(stdout(&o).contains("conditional=true"));
}

#[test]
fn delta_table_custom_ranges() {
    let o = expander(&["delta-table", "--ranges", "10:100,100:1000"]);
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][..6], ["10:100", "1.5118578920", "1.52", "10", "7", "11"]);
    assert_eq!(rows[1][2..6], ["1.32", "114", "113", "127"]);
}

#[test]
fn construct_small_k_is_rejected_and_edge_list_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.edges");
    let c = dir.path().join("c.json");
    let (gs, cs) = (g.to_str().unwrap(), c.to_str().unwrap());
    let o = expander(&["construct", "--k", "5", "--min-vertices", "10", "--strategy", "matching", "--graph-out", gs, "--cert-out", cs]);
    assert_eq!(o.status.code(), Some(1));

    let o = expander(&["construct", "--k", "6", "--min-vertices", "100", "--strategy", "k2product", "--graph-out", gs, "--cert-out", cs]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&g).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("2184 6552"));
    let pairs: Vec<(usize, usize)> = lines
        .map(|l| {
            let mut it = l.split(' ').map(|x| x.parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(pairs.len(), 6552);
    assert!(pairs.iter().all(|&(u, v)| u < v && v < 2184));
    assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    assert!(text.ends_with('\n'));
    let cert = Certificate::load(&c).unwrap();
    assert!(cert.ramanujan && cert.bipartite && cert.expansion.is_none());
}
