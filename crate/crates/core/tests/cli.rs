use std::process::{Command, Output};

fn sgdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgdecomp")).args(args).output().unwrap()
}

#[test]
fn records_do_not_depend_on_worker_count() {
    let base = ["verify", "sarkozy", "--pmax", "17", "--lambda-scope", "all", "--no-timing"];
    let one = sgdecomp(&[&base[..], &["--workers", "1"]].concat());
    let four = sgdecomp(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(four.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn every_line_is_a_record() {
    let out = sgdecomp(&["census", "lambda-not-in-g", "--pmax", "19", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut found_f11 = false;
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        let keys = ["task", "p", "subgroup_order", "params", "witnesses", "exhaustive", "nodes", "elapsed_ms"];
        assert_eq!(rec.as_object().unwrap().len(), keys.len());
        let positions: Vec<usize> = keys.iter().map(|k| line.find(&format!("\"{k}\":")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{line}");
        assert_eq!(rec["elapsed_ms"], 0);
        found_f11 |= rec["p"] == 11
            && rec["witnesses"].as_array().unwrap().iter().any(|w| w["A"] == serde_json::json!([1, 7]));
    }
    assert!(found_f11);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("sgdecomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("levsonn.jsonl");
    let out = sgdecomp(&["verify", "levsonn", "--pmax", "13", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() > 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(sgdecomp(&["verify", "sarkozy", "--pmax", "2"]).status.code(), Some(1));
    assert_eq!(sgdecomp(&["verify", "nothing"]).status.code(), Some(1));
    assert_eq!(sgdecomp(&["--version"]).status.code(), Some(0));
    assert_eq!(sgdecomp(&["reproduce", "counterexamples"]).status.code(), Some(0));
    // p = 41 carries a 5-clique in the Paley graph.
    let clique = sgdecomp(&["verify", "clique", "--pmin", "41", "--pmax", "41"]);
    assert_eq!(clique.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&clique.stderr).contains("p=41"));
}

#[test]
fn suites_report_through_cli() {
    let out = sgdecomp(&["unity", "audit", "--mmax", "12", "--search-max", "10", "--classify-max", "5", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let tasks: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["task"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(tasks, ["unity/xk-product-claim", "unity/2x2-decomposition", "unity/circle-preserving-maps"]);
}
