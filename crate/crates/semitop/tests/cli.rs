use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn semitop(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_semitop"))
        .args(args)
        .current_dir(data(""))
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let r = semitop(&full);
    let v = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", r.stdout, r.stderr));
    (r.code, v)
}

#[test]
fn so_family_lists_nine_sets() {
    let r = semitop(&["so-family", "e1.json"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(
        lines,
        ["{}", "{a}", "{a,b}", "{a,c}", "{a,b,c}", "{a,d}", "{a,b,d}", "{a,c,d}", "{a,b,c,d}"]
    );
    let (_, v) = json(&["so-family", "e1.json", "--semi-closed"]);
    assert_eq!(v["count"], 9);
    assert_eq!(v["sets"][1], serde_json::json!(["b"]));
}

#[test]
fn classify_identity_on_e1() {
    let (code, v) = json(&["classify", "--map", "id_e1.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["so1"]["holds"], true);
    assert_eq!(v["so2"]["holds"], true);
    assert_eq!(v["so3"]["holds"], false);
    assert_eq!(v["so3"]["witness"]["set"], serde_json::json!(["a", "c"]));
    let (_, closed) = json(&["classify", "--map", "id_e1.json", "--via-closed"]);
    for k in ["continuous", "so1", "so2", "so3"] {
        assert_eq!(v[k]["holds"], closed[k]["holds"], "{k}");
    }
    let (_, at) = json(&["classify", "--map", "id_e1.json", "--point", "c"]);
    assert_eq!(at["so3"]["holds"], false);
    assert_eq!(at["so2"]["holds"], true);
}

#[test]
fn semi_open_exit_codes() {
    assert_eq!(semitop(&["semi-open", "e1.json", "--set", "a,c"]).code, 0);
    assert_eq!(semitop(&["semi-open", "e1.json", "--set", "b"]).code, 1);
    assert_eq!(semitop(&["semi-open", "e1.json", "--set", "b", "--closed"]).code, 0);
    assert_eq!(semitop(&["semi-open", "--interval", "[0,1/2) u [3/4,1]"]).code, 0);
    assert_eq!(semitop(&["semi-open", "--interval", "{1/3}"]).code, 1);
    assert_eq!(semitop(&["semi-open", "e1.json", "--set", "zz"]).code, 2);
}

#[test]
fn search_finds_so1_counterexample_and_it_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, v) = json(&["search", "--query", "so1-compose-closed", "--max-points", "3", "--out", out]);
    assert_eq!(code, 1);
    assert_eq!(v["found"], true);
    let f = dir.path().join("f.json");
    let g = dir.path().join("g.json");
    let gf = dir.path().join("gf.json");
    for m in [&f, &g] {
        let (_, r) = json(&["classify", "--map", m.to_str().unwrap()]);
        assert_eq!(r["so1"]["holds"], true);
    }
    let (_, r) = json(&["classify", "--map", gf.to_str().unwrap()]);
    assert_eq!(r["so1"]["holds"], false);

    let r = semitop(&["search", "--query", "so2-compose-closed", "--max-points", "2", "--jobs", "2"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(semitop(&["search", "--query", "bogus"]).code, 2);
}

#[test]
fn paths_and_connectivity() {
    assert_eq!(semitop(&["check-path", "spike.json", "--mode", "2"]).code, 0);
    assert_eq!(semitop(&["check-path", "spike.json", "--mode", "1"]).code, 0);
    assert_eq!(semitop(&["check-path", "g.json", "--mode", "3"]).code, 1);
    assert_eq!(semitop(&["check-path", "g.json", "--mode", "4"]).code, 2);

    let composed = semitop(&["compose", "g.json", "h.json"]);
    assert_eq!(composed.stdout, "[0,1/4)->a, [1/4,3/8)->b, [3/8,2/3)->a, [2/3,5/6)->b, [5/6,1]->a\n");
    assert_eq!(semitop(&["invert", "ab.json"]).stdout, "[0,1/2]->b, (1/2,1]->a\n");

    let (code, v) = json(&["connect", "s2.json", "b", "a", "--mode", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["connected"], true);
}

#[test]
fn emitted_paths_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["compose", "g.json", "h.json"]);
    // The inline space keeps the file self-contained.
    let file = dir.path().join("gh.json");
    std::fs::write(&file, serde_json::to_string(&v).unwrap()).unwrap();
    let r = semitop(&["invert", file.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let back = dir.path().join("back.json");
    let (_, inv) = json(&["invert", file.to_str().unwrap()]);
    std::fs::write(&back, serde_json::to_string(&inv).unwrap()).unwrap();
    let (_, twice) = json(&["invert", back.to_str().unwrap()]);
    assert_eq!(twice, v);

    let (_, c) = json(&["connect", "s2.json", "a", "b", "--mode", "1"]);
    let witness = dir.path().join("w.json");
    std::fs::write(&witness, serde_json::to_string(&c["witness"]).unwrap()).unwrap();
    assert_eq!(semitop(&["check-path", witness.to_str().unwrap(), "--mode", "1"]).code, 0);
}

#[test]
fn certificates() {
    let (code, v) = json(&["cert", "verify", "bundle_assoc.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["mode"], 2);

    let (code, v) = json(&["cert", "verify", "bundle_bad.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["node"], "root.trans[1]");
    assert_eq!(v["rule"], "reparam");
    assert_eq!(v["hypothesis"], "reparam-endpoints");

    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.txt");
    std::fs::write(&cert, "(trans (refl p)\n   (refl nope))").unwrap();
    let r = semitop(&["cert", "verify", "bundle_assoc.json", cert.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("c.txt") && r.stderr.contains("2:10"), "{}", r.stderr);
}

#[test]
fn slice_families() {
    let (code, v) = json(&["slices", "verify", "family_cancel.json", "--mode", "2", "--grid", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["slices_hold"], true);
    assert_eq!(v["joint"]["candidate"], Value::Null);
    assert_eq!(v["end"], "[0,1/2)->a, {1/2}->b, (1/2,1]->a");
}

#[test]
fn loop_tables() {
    let r = semitop(&["pi1", "mul", "table_s2.json", "g", "g^-1"]);
    assert_eq!((r.code, r.stdout.lines().next()), (0, Some("1")));
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let r = semitop(&["pi1", "mul", "table_s2.json", "g h", "h^-1 g", "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(r.stdout.lines().next(), Some("g g"));
    // The exported certificate checks on its own.
    assert_eq!(semitop(&["cert", "verify", cert.to_str().unwrap()]).code, 0);

    assert_eq!(semitop(&["pi1", "inv", "table_s2.json", "g h"]).stdout, "h^-1 g^-1\n");
    assert_eq!(semitop(&["pi1", "equiv", "table_s2.json", "g h", "h h", "--depth", "1"]).code, 0);
    assert_eq!(semitop(&["pi1", "equiv", "table_s2.json", "g", "g h", "--depth", "1"]).code, 1);
    assert_eq!(semitop(&["pi1", "mul", "table_s2.json", "g", "k"]).code, 2);

    let spike = semitop(&["pi1", "register", "table_s2.json", "s", "ab.json"]);
    assert_eq!(spike.code, 1);
    let out = dir.path().join("t.json");
    let r = semitop(&["pi1", "register", "table_s2.json", "s", "spike.json", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let (_, t) = json(&["pi1", "realize", out.to_str().unwrap(), "s g"]);
    assert_eq!(t["pieces"][0]["interval"], "[0,1/4)");

    assert_eq!(semitop(&["pi1", "push", "table_s2.json", "--map", "swap_s2.json"]).code, 1);
    let (code, pushed) = json(&["pi1", "push", "table_s2.json", "--map", "id_s2.json"]);
    assert_eq!(code, 0);
    for (k, file) in ["g.json", "h.json"].into_iter().enumerate() {
        let original: Value = serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        assert_eq!(pushed["generators"][k]["pieces"], original["pieces"], "{file}");
    }

    let r = semitop(&["pi1", "rebase", "table_s2.json", "ab.json"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("table at b"));
}

#[test]
fn input_errors_name_file_and_position() {
    let r = semitop(&["so-family", "broken.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("broken.json:3:23"), "{}", r.stderr);
    assert_eq!(semitop(&["so-family", "missing.json"]).code, 2);
    assert_eq!(semitop(&["frobnicate"]).code, 2);
    assert_eq!(semitop(&["--help"]).code, 0);
}

#[test]
fn output_is_byte_identical() {
    let args = ["--format", "json", "search", "--query", "so1-compose-closed", "--max-points", "3"];
    let a = semitop(&args);
    let b = semitop(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = semitop(&["pi1", "mul", "table_s2.json", "g h", "h^-1"]);
    let b = semitop(&["pi1", "mul", "table_s2.json", "g h", "h^-1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn in_process_runner_matches_binary() {
    let dir = data("");
    let e1 = dir.join("e1.json");
    let out = semitop::cli::run(["semitop", "so-family", e1.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, semitop(&["so-family", "e1.json"]).stdout);
}
