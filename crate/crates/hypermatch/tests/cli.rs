use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hypermatch::io::{family_to_json, instance_from_json, instance_to_json, load_instance};
use hypermatch_core::constructions::{complete, space_barrier};
use hypermatch_core::rainbow::HypergraphFamily;
use hypermatch_core::DegreeProfile;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermatch"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend(["--out", s(&out)]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stderr.is_empty());
    out
}

#[test]
fn version_prints_format() {
    let o = run(&["--version"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("format 1"));
}

#[test]
fn gen_examples_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = gen(
        &dir,
        "d.json",
        &["--construction", "divisibility", "--k", "3", "--n", "4"],
    );
    let text = std::fs::read_to_string(&d).unwrap();
    let h = instance_from_json(&text).unwrap();
    assert_eq!(h.edge_count(), 32);
    // A sets are [0], [0, 1], [0, 1]: every edge meets an even number of them.
    let limits = [1, 2, 2];
    assert!(h
        .edges()
        .iter()
        .all(|e| e.iter().zip(limits).filter(|&(&p, l)| p < l).count() % 2 == 0));
    assert_eq!(instance_to_json(&h), text);

    let meta: Value = serde_json::from_str(&std::fs::read_to_string(path(&dir, "d.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["construction"], "divisibility");
    assert_eq!(meta["a_sets"], serde_json::json!([[0], [0, 1], [0, 1]]));

    let c = gen(&dir, "c.json", &["--construction", "complete", "--k", "3", "--n", "2"]);
    assert_eq!(load_instance(&c).unwrap().edge_count(), 8);

    let sp = gen(
        &dir,
        "s.json",
        &["--construction", "space", "--k", "3", "--n", "3", "--profile", "1,1,1"],
    );
    let h = load_instance(&sp).unwrap();
    assert_eq!(
        h,
        space_barrier(3, 3, &DegreeProfile::new(vec![1, 1, 1])).unwrap().graph
    );
    assert_eq!(h.edge_count(), 27 - 8);

    let r1 = gen(
        &dir,
        "r1.json",
        &[
            "--construction",
            "random",
            "--k",
            "3",
            "--n",
            "4",
            "--density",
            "1/3",
            "--seed",
            "7",
        ],
    );
    let r2 = gen(
        &dir,
        "r2.json",
        &[
            "--construction",
            "random",
            "--k",
            "3",
            "--n",
            "4",
            "--density",
            "1/3",
            "--seed",
            "7",
        ],
    );
    assert_eq!(std::fs::read(r1).unwrap(), std::fs::read(r2).unwrap());
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "x.json");
    for args in [
        vec!["--construction", "space", "--k", "3", "--n", "3", "--profile", "4,0,0"],
        vec!["--construction", "space", "--k", "3", "--n", "3", "--profile", "1,0"],
        vec!["--construction", "random", "--k", "3", "--n", "3", "--density", "3/2"],
        vec![
            "--construction",
            "divisibility",
            "--k",
            "3",
            "--n",
            "2",
            "--sizes",
            "1,1,0",
        ],
    ] {
        let mut full = vec!["gen"];
        full.extend(args.iter().copied());
        full.extend(["--out", s(&out)]);
        let o = run(&full);
        assert_ne!(code(&o), 0, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert!(!out.exists());
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = gen(
        &dir,
        "d.json",
        &["--construction", "divisibility", "--k", "3", "--n", "4"],
    );
    let o = run(&["solve", "--instance", s(&d), "--algorithm", "oracle"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["nu"], 3);
    assert_eq!(r["witness"].as_array().unwrap().len(), 3);

    let sp = gen(
        &dir,
        "s.json",
        &["--construction", "space", "--k", "3", "--n", "4", "--profile", "1,1,1"],
    );
    let o = run(&["solve", "--instance", s(&sp), "--algorithm", "fact15"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["size"], 3);

    let c = gen(&dir, "c.json", &["--construction", "complete", "--k", "3", "--n", "5"]);
    let o = run(&[
        "solve",
        "--instance",
        s(&c),
        "--algorithm",
        "thm17",
        "--profile",
        "5,0,0",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["status"], "success");
    assert_eq!(r["matching"].as_array().unwrap().len(), 5);

    for branch in ["large-q", "small-q"] {
        let o = run(&["solve", "--instance", s(&c), "--algorithm", "thm17", "--branch", branch]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["forced"], true);
    }
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = gen(
        &dir,
        "d.json",
        &["--construction", "divisibility", "--k", "3", "--n", "4"],
    );

    let o = run(&[
        "solve",
        "--instance",
        s(&d),
        "--algorithm",
        "oracle",
        "--check",
        "fact15",
    ]);
    assert_eq!((code(&o), json(&o)["status"].clone()), (0, "pass".into()));
    assert!(o.stderr.is_empty());

    // The barrier sits below the n >= n_0 regime, so a miss is not a failure.
    let o = run(&[
        "solve",
        "--instance",
        s(&d),
        "--algorithm",
        "oracle",
        "--check",
        "thm17",
    ]);
    assert_eq!((code(&o), json(&o)["status"].clone()), (0, "below_threshold".into()));

    let o = run(&[
        "solve",
        "--instance",
        s(&d),
        "--algorithm",
        "oracle",
        "--check",
        "fact15",
        "--profile",
        "4,4,4",
    ]);
    assert_eq!((code(&o), json(&o)["status"].clone()), (2, "hypothesis_unmet".into()));

    let o = run(&[
        "solve",
        "--instance",
        s(&d),
        "--algorithm",
        "thm17",
        "--mode",
        "guaranteed",
    ]);
    assert_eq!(code(&o), 2);

    let o = run(&[
        "solve",
        "--instance",
        s(&d),
        "--algorithm",
        "oracle",
        "--budget-nodes",
        "1",
    ]);
    assert_eq!(code(&o), 3);

    let o = run(&["solve", "--instance", s(&d), "--algorithm", "thm17"]);
    assert_eq!((code(&o), json(&o)["status"].clone()), (3, "shortfall".into()));

    let bad = path(&dir, "bad.json");
    for text in ["{", r#"{"k":2,"class_sizes":[2,2],"edges":[[0,5]]}"#] {
        std::fs::write(&bad, text).unwrap();
        let o = run(&["solve", "--instance", s(&bad), "--algorithm", "oracle"]);
        assert_eq!(code(&o), 1);
        assert!(o.stdout.is_empty());
    }
    let o = run(&[
        "solve",
        "--instance",
        s(&path(&dir, "missing.json")),
        "--algorithm",
        "oracle",
    ]);
    assert_eq!(code(&o), 1);
}

fn family(dir: &TempDir, name: &str, f: &HypergraphFamily) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, family_to_json(f)).unwrap();
    p
}

#[test]
fn rainbow_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = complete(3, 3).unwrap();
    let three = family(
        &dir,
        "c.json",
        &HypergraphFamily::new(vec![c.clone(), c.clone(), c]).unwrap(),
    );
    let o = run(&["rainbow", "--family", s(&three), "--algorithm", "oracle"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["size"], 3);

    let b = space_barrier(3, 6, &DegreeProfile::new(vec![2, 0, 0])).unwrap().graph;
    let barrier = family(&dir, "b.json", &HypergraphFamily::new(vec![b.clone(), b]).unwrap());
    let o = run(&["rainbow", "--family", s(&barrier), "--algorithm", "lemma22"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outcome"]["dominated_colours"]["colours"], serde_json::json!([0, 1]));

    let c = complete(3, 6).unwrap();
    let five = family(&dir, "c5.json", &HypergraphFamily::new(vec![c; 5]).unwrap());
    let o = run(&[
        "rainbow",
        "--family",
        s(&five),
        "--algorithm",
        "lemma21",
        "--profile",
        "1,0,0",
        "--colours",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let colours: Vec<u64> = json(&o)["matching"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["colour"].as_u64().unwrap())
        .collect();
    assert!(colours.contains(&4));

    for algorithm in ["lemma25", "pokrovskiy"] {
        let o = run(&[
            "rainbow",
            "--family",
            s(&five),
            "--algorithm",
            algorithm,
            "--profile",
            "1,0,0",
            "--slack",
            "0",
        ]);
        assert_eq!(code(&o), 0, "{algorithm}: {}", String::from_utf8_lossy(&o.stderr));
    }

    let o = run(&[
        "rainbow",
        "--family",
        s(&five),
        "--algorithm",
        "pokrovskiy",
        "--mode",
        "guaranteed",
        "--profile",
        "1,0,0",
    ]);
    assert_eq!(code(&o), 2);

    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, r#"{"k":3,"class_sizes":[2,2],"members":[]}"#).unwrap();
    assert_eq!(
        code(&run(&["rainbow", "--family", s(&bad), "--algorithm", "oracle"])),
        1
    );
}

fn sweep(dir: &TempDir, spec: &str, workers: &str, out: &str) -> (Output, PathBuf) {
    let spec_path = path(dir, &format!("{out}.spec.json"));
    std::fs::write(&spec_path, spec).unwrap();
    let out = path(dir, out);
    let o = run(&["sweep", "--spec", s(&spec_path), "--workers", workers, "--out", s(&out)]);
    (o, out)
}

#[test]
fn sweep_exhaustive_n2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = sweep(&dir, r#"{"grid":[{"generator":"exhaustive","k":3,"n":2}]}"#, "4", "ex");
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 256);
    assert!(rows.iter().all(|r| r.split(',').nth(8) == Some("pass")));
    let jsonl = std::fs::read_to_string(out.join("reports.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 256);
}

#[test]
fn sweep_barriers_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = sweep(
        &dir,
        r#"{"grid":[{"generator":"divisibility","k":3,"n":[2,4]}]}"#,
        "2",
        "div",
    );
    assert_eq!(code(&o), 0);
    for line in std::fs::read_to_string(out.join("reports.jsonl")).unwrap().lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["nu"].as_u64().unwrap() + 1, r["n"].as_u64().unwrap());
    }

    let (o, out) = sweep(&dir, "{}", "1", "empty");
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(out.join("reports.jsonl")).unwrap(), "");
    assert_eq!(
        std::fs::read_to_string(out.join("summary.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );

    let (o, _) = sweep(&dir, r#"{"grid":[{"generator":"nope"}]}"#, "1", "bad");
    assert_eq!(code(&o), 1);
}
