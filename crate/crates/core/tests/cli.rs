use std::process::Command;

fn geocur() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geocur"))
}

#[test]
fn flatmountain_level_one_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("fm.json");
    let out = geocur()
        .args(["flatmountain", "--level", "1", "--verify-lipschitz", "all-consecutive", "--report"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let entries = rep["lipschitz"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|e| e["ok"] == true && e["value"] == "1/4"));
    assert!(dir.path().join("fm.manifest.json").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let seg = dir.path().join("seg.json");
    std::fs::write(
        &seg,
        r#"{"complex": {"ambient_dim": 1, "vertices": [["0"], ["1"]], "cells": {"1": [[0, 1]]}}, "k": 1, "entries": [[0, 1, 1]]}"#,
    )
    .unwrap();
    let code = |args: &[&str]| geocur().args(args).output().unwrap().status.code();
    assert_eq!(code(&["flatnorm", "--current", seg.to_str().unwrap(), "--kind", "homogeneous"]), Some(3));
    assert_eq!(code(&["flatnorm", "--current", seg.to_str().unwrap(), "--kind", "whitney"]), Some(0));
    assert_eq!(code(&["flatnorm", "--current", seg.to_str().unwrap(), "--kind", "sideways"]), Some(2));
    assert_eq!(code(&["flatnorm", "--current", "/no/such/file.json"]), Some(4));
    assert_eq!(code(&["flatnorm", "--frobnicate"]), Some(64));
    assert_eq!(code(&["--version"]), Some(0));
}

#[test]
fn exact_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| -> Vec<Vec<u8>> {
        let d = dir.path().join(tag);
        std::fs::create_dir(&d).unwrap();
        let st = geocur()
            .args(["flatmountain", "--level", "2"])
            .arg("--emit")
            .arg(d.join("u.csv"))
            .arg("--emit-spacetime")
            .arg(d.join("s.json"))
            .output()
            .unwrap();
        assert!(st.status.success());
        let st = geocur().args(["diagnose", "--depth", "3", "--spacetime"]).arg(d.join("s.json")).arg("--report").arg(d.join("r.json")).output().unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
        ["u.csv", "s.json", "r.json", "r.csv", "r_ev.csv"].iter().map(|f| std::fs::read(d.join(f)).unwrap()).collect()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn emitted_spacetime_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    assert!(geocur().args(["flatmountain", "--level", "2", "--emit-spacetime"]).arg(&p).output().unwrap().status.success());
    let s = geocur::io::read_spacetime(&p).unwrap();
    let again = geocur::io::to_json(&geocur::io::spacetime_file(&s).unwrap()).unwrap();
    assert_eq!(again, std::fs::read_to_string(&p).unwrap());
    let u = geocur::mountain::iterate_u(2).unwrap();
    assert_eq!(s.current().to_cell_map(), geocur::mountain::graph_current(&u).unwrap().current().to_cell_map());
}

#[test]
fn glue_and_slice_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("sq.json");
    std::fs::write(
        &sq,
        r#"{"complex": {"ambient_dim": 2, "vertices": [["0","0"],["1","0"],["1","1"],["0","1"]], "cells": {"1": [[0,1],[1,2],[3,2],[0,3]]}}, "k": 1, "entries": [[0,1,1],[1,1,1],[2,-1,1],[3,-1,1]]}"#,
    )
    .unwrap();
    let path = dir.path().join("p.json");
    let st = geocur()
        .env("GEOCUR_ARITH", "exact")
        .args(["transport", "--field", "constant:1,0", "--dt", "1/4", "--current"])
        .arg(&sq)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(st.status.success());
    let glued = dir.path().join("g.json");
    let st = geocur().arg("glue").arg("--path").arg(&path).arg("--out").arg(&glued).output().unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(String::from_utf8_lossy(&st.stdout).contains("boundary formula holds"));
    let st = geocur().arg("slice").arg("--spacetime").arg(&glued).args(["--t", "1/3"]).output().unwrap();
    assert!(String::from_utf8_lossy(&st.stdout).contains("slice mass 4; boundary mass 0"));
}
