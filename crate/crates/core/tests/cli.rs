use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regnet::generators::karate_club;
use regnet::io::{format_edge_list, Delimiter, EdgeListFormat};
use tempfile::TempDir;

fn regnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn karate_file(dir: &Path, fmt: EdgeListFormat) -> PathBuf {
    let path = dir.join("karate.txt");
    fs::write(&path, format_edge_list(&karate_club(), &fmt)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reconstruct_writes_ranked_candidates() {
    let dir = TempDir::new().unwrap();
    let input = karate_file(dir.path(), EdgeListFormat::default());
    let out = dir.path().join("r.csv");
    let res = regnet(&["reconstruct", "--input", s(&input), "--method", "lfnr", "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("list,i,j,score,rank"));
    let missing = text.lines().filter(|l| l.starts_with("missing,")).count();
    let spurious = text.lines().filter(|l| l.starts_with("spurious,")).count();
    assert_eq!(missing, 34 * 33 / 2 - 78);
    assert_eq!(spurious, 78);
    assert!(!dir.path().join("r.csv.labels.csv").exists());
}

#[test]
fn evaluate_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = karate_file(dir.path(), EdgeListFormat::default());
    for format in ["csv", "json"] {
        let outputs: Vec<String> = (0..2)
            .map(|k| {
                let out = dir.path().join(format!("e{k}.{format}"));
                let res = regnet(&[
                    "evaluate", "--input", s(&input), "--runs", "20", "--miss-fraction", "0.1",
                    "--method", "lfnr", "--seed", "7", "--out", s(&out), "--out-format", format,
                ]);
                assert_eq!(res.status.code(), Some(0));
                fs::read_to_string(&out).unwrap()
            })
            .collect();
        assert_eq!(outputs[0], outputs[1]);
    }
}

#[test]
fn missing_input_prints_usage_and_exits_1() {
    let res = regnet(&["reconstruct", "--method", "lfnr"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_and_subcommand_exit_1() {
    for args in [&["reconstruct", "--input", "x", "--bogus"][..], &["frobnicate"][..], &[][..]] {
        let res = regnet(args);
        assert_eq!(res.status.code(), Some(1), "{args:?}");
        assert!(!res.stderr.is_empty());
    }
}

#[test]
fn malformed_edge_list_exits_1_with_line() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "0 1\n1 x\n").unwrap();
    let res = regnet(&["baseline", "--input", s(&input)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
}

#[test]
fn one_based_input_gets_label_sidecar() {
    let dir = TempDir::new().unwrap();
    let fmt = EdgeListFormat {
        delimiter: Delimiter::Comma,
        index_base: 1,
        ..EdgeListFormat::default()
    };
    let input = karate_file(dir.path(), fmt);
    let out = dir.path().join("b.json");
    let res = regnet(&[
        "baseline", "--input", s(&input), "--format", "comma", "--index-base", "1", "--method", "ra",
        "--out", s(&out), "--out-format", "json",
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["source"], "ra");
    let labels = fs::read_to_string(dir.path().join("b.json.labels.csv")).unwrap();
    assert_eq!(labels.lines().count(), 35);
    assert_eq!(labels.lines().nth(1), Some("0,1"));
}

#[test]
fn regularity_and_regulate_produce_reports() {
    let dir = TempDir::new().unwrap();
    let input = karate_file(dir.path(), EdgeListFormat::default());
    let reg = dir.path().join("reg.json");
    let res = regnet(&["regularity", "--input", s(&input), "--out", s(&reg), "--out-format", "json"]);
    assert_eq!(res.status.code(), Some(0));
    let summary: regnet::io::RegularitySummary = serde_json::from_str(&fs::read_to_string(&reg).unwrap()).unwrap();
    assert_eq!(summary.node_importance.len(), 34);
    assert_eq!(summary.link_importance.len(), 78);

    let traj = dir.path().join("traj.csv");
    let graph = dir.path().join("final.txt");
    let res = regnet(&[
        "regulate", "--input", s(&input), "--lambda", "0.3", "--out", s(&traj), "--graph-out", s(&graph),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = fs::read_to_string(&traj).unwrap();
    assert_eq!(text.lines().next(), Some("step,removed_count,sigma_r,converged"));
    assert!(text.lines().count() >= 3);
    assert!(fs::read_to_string(&graph).unwrap().lines().count() <= 78);
}

#[test]
fn sweep_reports_every_strategy() {
    let dir = TempDir::new().unwrap();
    let input = karate_file(dir.path(), EdgeListFormat::default());
    let res = regnet(&[
        "sweep", "--input", s(&input), "--runs", "2", "--max-remove-fraction", "0.03", "--method", "cn",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("strategy,fraction,removed,sigma_r,accuracy_mean,accuracy_std"));
    // baseline plus three fractions, for each of three strategies
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}

#[test]
fn degenerate_representation_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("loops.txt");
    // self-loops only: nodes exist but the adjacency matrix is zero
    fs::write(&input, "0 0\n2 2\n").unwrap();
    let res = regnet(&["regularity", "--input", s(&input)]);
    assert_eq!(res.status.code(), Some(2));
}
