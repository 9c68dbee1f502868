use std::path::{Path, PathBuf};
use std::process::Command;

use qutrit_slocc::cli::{run, EXIT_INPUT, EXIT_OK};
use qutrit_slocc::states::{catalog, read_state, write_state, Family, PureState};

fn qslocc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qslocc")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, Vec<u8>) {
    let mut full = vec!["qslocc"];
    full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut out, &mut err);
    (code, out)
}

fn write(dir: &Path, name: &str, s: &PureState) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_state(s)).unwrap();
    p
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn classify_ghz_text() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ghz.json", &PureState::from_kets(&["000", "111"]).unwrap());
    let (code, out, _) = qslocc(&["classify", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.lines().next().unwrap(),
        "family=P0P0 variant=3, genuinely-tripartite"
    );
}

#[test]
fn classify_bipartite_text() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bell.json", &PureState::from_kets(&["00", "11"]).unwrap());
    let (code, out, _) = qslocc(&["classify", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next().unwrap(), "bipartite rank 2 (Ψ₁)");
}

#[test]
fn empty_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    std::fs::write(&p, "").unwrap();
    let (code, out, err) = qslocc(&["classify", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
}

#[test]
fn count_and_verify() {
    assert_eq!(qslocc(&["count", "3"]).1, "12\n");
    assert_eq!(qslocc(&["count", "2"]).1, "2\n");
    let (code, out, _) = qslocc(&["verify", &fixture("state_ii.json"), &fixture("state_iii.json")]);
    assert_eq!((code, out.trim()), (EXIT_OK, "SameClass"));
    let (_, out, _) = qslocc(&["verify", &fixture("state_i.json"), &fixture("state_ii.json")]);
    assert_eq!(out.trim(), "DifferentClass");
}

#[test]
fn json_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "w.json",
        &PureState::from_kets(&["001", "010", "100"]).unwrap(),
    );
    let args = ["classify", p.to_str().unwrap(), "--json", "--seed", "5"];
    let (code, first, _) = qslocc(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, qslocc(&args).1);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool"]["name"], "qslocc");
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["kind"], "tripartite");
    assert!(v["tolerances"].is_object() && v["budget"].is_object());
    assert_eq!(v["result"]["rank_triple"], serde_json::json!([2, 2, 2]));
}

#[test]
fn gen_orbit_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("o.json");
    let (code, _, _) = qslocc(&[
        "gen",
        "--orbit",
        "dim1-P2",
        "--seed",
        "7",
        "--verify",
        "-o",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let s = read_state(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 27);
}

#[test]
fn gen_then_classify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for e in catalog() {
        let id = e.id.to_string();
        let mut runs: Vec<Vec<String>> = vec![vec!["gen".into(), "--canonical".into(), id.clone()]];
        for seed in 0..20 {
            runs.push(vec![
                "gen".into(),
                "--orbit".into(),
                id.clone(),
                "--seed".into(),
                seed.to_string(),
            ]);
        }
        for mut args in runs {
            if e.id.family == Family::P0P0P1 {
                args.extend(["--params".into(), "representative".into()]);
            }
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, state) = in_process(&args);
            assert_eq!(code, EXIT_OK, "{args:?}");
            let p = dir.path().join("s.json");
            std::fs::write(&p, &state).unwrap();
            let (code, report) = in_process(&["classify", p.to_str().unwrap(), "--json"]);
            assert_eq!(code, EXIT_OK, "{args:?}");
            let v: serde_json::Value = serde_json::from_slice(&report).unwrap();
            assert_eq!(v["result"]["family"], e.id.family.to_string(), "{args:?}");
        }
    }
}
