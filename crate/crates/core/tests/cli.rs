use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodge-homotopy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hodge-homotopy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", "--fixture", "elliptic-h1"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "--fixture", "s-truncation"]).status.code(), Some(1));
    assert_eq!(run(&["split-mhs", "--fixture", "s-truncation"]).status.code(), Some(1));
    assert_eq!(run(&["pi3", "/nonexistent/input.json"]).status.code(), Some(2));
    assert_eq!(run(&["unknown-command", "--fixture", "k3"]).status.code(), Some(2));
    assert_eq!(run(&["homotopy", "--fixture", "tate(1)"]).status.code(), Some(2));
    assert_eq!(run(&["archimedean", "--fixture", "k3", "--window", "x"]).status.code(), Some(2));

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"kind":"diamond","n":1,"entries":[[0,0,1]],"colour":"red"}"#).unwrap();
    let out = run(&["deligne", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema violation"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["monodromy", "--fixture", "twisted-extension", "--n-max", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["provenance"]["options"]["n_max"], 3);
    assert_eq!(r["provenance"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn out_flag_writes_the_report() {
    let path = scratch("deligne.json");
    let out = run(&["deligne", "--fixture", "elliptic", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = r["payload"]["rows"].as_array().unwrap();
    let row = rows.iter().find(|x| x["m"] == 2 && x["a"] == 1).unwrap();
    assert_eq!(row["seq"], 1);
    assert_eq!(row["split"], 1);
}

#[test]
fn homotopy_of_k3_from_a_file() {
    let path = scratch("k3.json");
    let out = run(&["fixture", "k3", "--kind", "algebra", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["homotopy", path.to_str().unwrap(), "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let pi3 = r["payload"]["groups"].as_array().unwrap().iter().find(|g| g["n"] == 3).unwrap().clone();
    assert_eq!(pi3["dim"], 252);
    // The same document through the fixture route hashes identically.
    let direct = report(&run(&["homotopy", "--fixture", "k3", "--n-max", "3"]));
    assert_eq!(direct["provenance"]["input_sha256"], r["provenance"]["input_sha256"]);
}

#[test]
fn generated_fixtures_pass_their_validator() {
    let names = [
        "point",
        "sphere2",
        "proj-plane",
        "k3",
        "elliptic",
        "acyclic-square",
        "twisted-extension",
        "formal(1;0,0;0,1,0)",
        "tensor(elliptic,elliptic)",
        "tensor(sphere2,acyclic-square(1))",
        "elliptic-h1",
        "tate-stack",
        "mts(elliptic-h1)",
        "nilpotent-interval",
    ];
    for name in names {
        let path = scratch(&format!("{}.json", name.replace(|c: char| !c.is_alphanumeric(), "_")));
        assert_eq!(run(&["fixture", name, "--out", path.to_str().unwrap()]).status.code(), Some(0), "{name}");
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    for name in ["sphere2", "k3"] {
        let path = scratch(&format!("{name}-diamond.json"));
        run(&["fixture", name, "--kind", "diamond", "--out", path.to_str().unwrap()]);
        assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
    }
    let acyclic = report(&run(&["kahler-validate", "--fixture", "acyclic-square"]));
    assert_eq!(acyclic["payload"]["green_nonzero"], true);
}

#[test]
fn formality_with_extra_points() {
    let out = run(&["formality", "--fixture", "elliptic", "--points", "1,-1,0,1;-1,0,0,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let labels: Vec<&str> = r["payload"]["points"].as_array().unwrap().iter().map(|p| p["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"(1, -1, 0, 1)"), "{labels:?}");
    assert_eq!(run(&["formality", "--fixture", "elliptic", "--points", "2,0,0,2"]).status.code(), Some(2));
}
