use std::path::PathBuf;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("atomwork").chain(args.iter().copied());
    let code = atomwork_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let parsed: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}\n{err}"));
    (code, parsed.as_array().expect("top level is an array").clone())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("atomwork-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn additivity_witness_passes_in_json() {
    let (code, reports) = run_json(&["witness", "additivity"]);
    assert_eq!(code, 0);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["check"], "additivity-failure");
    assert_eq!(reports[0]["status"], "pass");
    assert_eq!(reports[0]["details"]["accepted_as_witness"], true);
}

#[test]
fn alpha_of_an_interval_graph_checks_clean() {
    let (code, reports) = run_json(&["alpha", "check", "--graph", "interval", "--m", "20", "--N", "3", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(reports[0]["details"]["atoms"], 61);
}

#[test]
fn matrices_of_k2_three_colours() {
    let (code, reports) = run_json(&["matrices", "--graph", "complete", "--m", "2", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(reports[0]["details"]["matrices"], 229);
    assert_eq!(reports[1]["status"], "pass");
}

#[test]
fn builder_trace_round_trips_through_replay() {
    let trace = scratch("trace.jsonl");
    let t = trace.to_str().unwrap();
    let (code, reports) = run_json(&["builder", "run", "--steps", "200", "--n", "3", "--verify", "--trace", t]);
    assert_eq!(code, 0, "{reports:?}");
    assert!(reports.iter().all(|r| r["status"] == "pass"));
    let built = reports[0]["details"]["tuples"].clone();
    assert!(built.as_u64().unwrap() > 0);
    let (code, replayed) = run_json(&["builder", "replay", "--trace", t, "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(replayed[0]["details"]["tuples"], built);

    let text = std::fs::read_to_string(&trace).unwrap();
    let tampered = text.replacen("\"r\":", "\"r\":1", 1);
    assert_ne!(tampered, text);
    let bad = scratch("tampered.jsonl");
    std::fs::write(&bad, tampered).unwrap();
    let (code, _, _) = run(&["builder", "replay", "--trace", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn graph_file_without_kind_is_a_usage_error() {
    let path = scratch("nokind.json");
    std::fs::write(&path, "{\n  \"m\": 3,\n  \"edges\": [[0, 1]]\n}\n").unwrap();
    let (code, out, err) = run(&["alpha", "check", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line"), "{err}");
}

#[test]
fn malformed_graph_json_reports_position() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"kind\": \"explicit\",\n \"m\": 3,\n \"edges\": [[0, 1],]\n}").unwrap();
    let (code, _, err) = run(&["alpha", "check", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn duplicate_edges_warn_but_succeed() {
    let path = scratch("dup.json");
    std::fs::write(&path, r#"{"kind": "explicit", "m": 3, "edges": [[0, 1], [1, 0], [1, 2]]}"#).unwrap();
    let (code, out, err) = run(&["alpha", "check", "--graph", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(err.contains("warning: duplicate edge"), "{err}");
    assert!(out.starts_with("PASS alpha-check"));
}

#[test]
fn unknown_subcommand_and_missing_flags_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["alpha", "check", "--graph", "interval", "--m", "5"]).0, 2);
    assert_eq!(run(&["game", "fresh", "--a-size", "many", "--b-size", "2"]).0, 2);
}

#[test]
fn failing_check_exits_one() {
    let (code, reports) = run_json(&["check", "crpa", "--u", "2", "--variant", "literal"]);
    assert_eq!(code, 1);
    assert_eq!(reports[0]["status"], "fail");
    assert!(reports[0]["witness"].is_array());
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["--format", "json", "witness", "recovery"][..],
        &["--format", "json", "witness", "neat", "--seed", "7"],
        &["--format", "json", "game", "fresh", "--a-size", "inf", "--b-size", "3", "--rounds", "3"],
    ] {
        assert_eq!(run(args).1, run(args).1);
    }
}

#[test]
fn sampled_witnesses_hold_for_several_seeds() {
    for seed in ["1", "2", "3"] {
        for cmd in ["closure", "recovery", "neat"] {
            let (code, r) = run_json(&["witness", cmd, "--seed", seed]);
            assert_eq!(code, 0, "{cmd} seed {seed}: {r:?}");
            assert_eq!(r[0]["details"]["seed"].to_string(), seed);
        }
    }
}

#[test]
fn game_spec_files_drive_each_game() {
    let ef = scratch("ef.json");
    std::fs::write(
        &ef,
        r#"{"game": "ef", "rounds": 2,
            "a": [{"name": "u", "size": {"finite": 2}}, {"name": "t", "size": "unbounded", "swap": true}],
            "b": [{"name": "u", "size": {"finite": 2}}, {"name": "t", "size": {"finite": 1}, "swap": true}]}"#,
    )
    .unwrap();
    let (code, reports) = run_json(&["game", "spec", ef.to_str().unwrap()]);
    assert_eq!(code, 0, "{reports:?}");
    assert_eq!(reports[0]["details"]["winner"], "forall");

    let sq = scratch("square.json");
    std::fs::write(
        &sq,
        r#"{"game": "square", "graph": {"kind": "explicit", "m": 1}, "colours": 3, "clique_bound": 4, "rounds": 1}"#,
    )
    .unwrap();
    let (code, reports) = run_json(&["game", "spec", sq.to_str().unwrap()]);
    assert_eq!(code, 0, "{reports:?}");
    assert_eq!(reports[0]["check"], "square-game");
}

#[test]
fn axioms_on_a_fixture_and_its_corruption() {
    let full = atomwork_core::bao::FiniteAtomStructure::full_set_algebra(2, 2).unwrap().to_json();
    let good = scratch("atoms.json");
    std::fs::write(&good, serde_json::to_string(&full).unwrap()).unwrap();
    let (code, reports) = run_json(&["check", "axioms", good.to_str().unwrap()]);
    assert_eq!(code, 0, "{reports:?}");
    assert_eq!(reports[0]["details"]["atoms"], 4);

    let mut broken = full.clone();
    let cylinder = &mut broken.cyl[0][0];
    cylinder.retain(|&a| a == 0);
    let bad = scratch("atoms-bad.json");
    std::fs::write(&bad, serde_json::to_string(&broken).unwrap()).unwrap();
    let (code, reports) = run_json(&["check", "axioms", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!reports[0]["witness"].as_array().unwrap().is_empty());
}

#[test]
fn text_mode_prints_one_line_per_check() {
    let (code, out, _) = run(&["builder", "run", "--steps", "20", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}
