use std::path::Path;
use std::process::{Command, Output};

use cubetool_core::complex::CubicalMap;
use cubetool_core::corpus;
use serde_json::Value;

fn cubetool(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubetool"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn emit(dir: &Path, name: &str) {
    let out = cubetool(dir, &["corpus", "emit", name]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn torus_is_npc() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "torus");
    assert_eq!(cubetool(dir.path(), &["check-npc", "torus.json"]).status.code(), Some(0));
    emit(dir.path(), "cube3-skeleton");
    assert_eq!(cubetool(dir.path(), &["check-npc", "cube3-skeleton.json"]).status.code(), Some(1));
}

#[test]
fn klein_bottle_names_one_sided_wall() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "klein");
    let out = cubetool(dir.path(), &["special", "klein.json", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "negative");
    let walls = report["payload"]["walls"].as_array().unwrap();
    assert!(walls.iter().any(|w| w["one_sided"] == true));
}

#[test]
fn hexagon_completion() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "hexagon-pair");
    for f in ["A.json", "B.json", "f.json"] {
        assert!(dir.path().join(f).exists());
    }
    let out = cubetool(
        dir.path(),
        &["complete", "f.json", "--out", "C.json", "--emit", "j.json", "r.json", "p.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["completion"]["degree"], 2);
    assert_eq!(v["completion"]["counts"], serde_json::json!([6, 6]));
    assert_eq!(v["completion"]["components"], 1);
    assert!(dir.path().join("p.json").exists());
}

#[test]
fn identity_square_is_functorial() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "hexagon-pair");
    let f = corpus::hexagon_pair();
    std::fs::write(dir.path().join("idA.json"), CubicalMap::identity(f.domain().clone()).to_json()).unwrap();
    std::fs::write(dir.path().join("idB.json"), CubicalMap::identity(f.codomain().clone()).to_json()).unwrap();
    std::fs::write(
        dir.path().join("square.json"),
        r#"{"f": "f.json", "s": "idA.json", "g": "f.json", "t": "idB.json"}"#,
    )
    .unwrap();
    let out = cubetool(dir.path(), &["functorial", "square.json", "--out", "that.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["local_isometry"], true);
}

#[test]
fn corpus_list_and_stable_emission() {
    let dir = tempfile::tempdir().unwrap();
    let out = cubetool(dir.path(), &["corpus", "list"]);
    assert!(stdout_json(&out).as_array().unwrap().len() >= 10);
    emit(dir.path(), "torus");
    let first = std::fs::read(dir.path().join("torus.json")).unwrap();
    emit(dir.path(), "torus");
    assert_eq!(first, std::fs::read(dir.path().join("torus.json")).unwrap());
    assert_eq!(cubetool(dir.path(), &["corpus", "emit", "nope"]).status.code(), Some(2));
}

#[test]
fn ledgers() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "ledger-balanced");
    emit(dir.path(), "ledger-unbalanced");
    let out = cubetool(dir.path(), &["gluing-check", "ledger-balanced.json", "--modify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["matched_pairs"], 4);
    let out = cubetool(dir.path(), &["gluing-check", "ledger-unbalanced.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn free_product_presentation() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "gog-free-product");
    let out = cubetool(
        dir.path(),
        &["gog", "pi1", "gog-free-product.json", "--base", "u", "--tree", "e", "--simplify"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["presentation"], "< x, y | x^2, y^3 >");
    let out = cubetool(dir.path(), &["gog", "pi1", "gog-free-product.json", "--base", "u"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_gives_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "torus");
    let text = std::fs::read_to_string(dir.path().join("torus.json")).unwrap();
    std::fs::write(dir.path().join("bad.json"), text.replace("\"faces\"", "\"fces\"")).unwrap();
    let out = cubetool(dir.path(), &["check-npc", "bad.json", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "error");
    assert!(report["error"].as_str().is_some());
    assert_eq!(cubetool(dir.path(), &["check-npc", "missing.json"]).status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "cusped-z3");
    let args = |r: &'static str| {
        vec!["cusped", "cusped-z3.json", "--rho", "2", "--depth", "2", "--probe", "--samples", "50", "--report", r]
    };
    cubetool(dir.path(), &args("a.json"));
    cubetool(dir.path(), &args("b.json"));
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    assert!(!String::from_utf8(a).unwrap().contains("timing"));
}

#[test]
fn grid_tools() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "grid2x2");
    let out = cubetool(dir.path(), &["wall-graph", "grid2x2.json", "--R", "1", "--color", "--dot", "g.dot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("g.dot")).unwrap().contains("--"));
    let out = cubetool(dir.path(), &["subdivide", "grid2x2.json", "--out", "s.json"]);
    assert_eq!(stdout_json(&out)["counts"], serde_json::json!([25, 40, 16]));
    let out = cubetool(dir.path(), &["hyperplanes", "grid2x2.json", "--dot", "w.dot"]);
    assert_eq!(stdout_json(&out)["walls"].as_array().unwrap().len(), 4);
    let out = cubetool(dir.path(), &["cover-ball", "grid2x2.json", "--base", "p0_0", "--radius", "2", "--out", "ball.json"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(dir.path().join("reg.json"), r#"{"basepoint": "o", "halfspaces": [{"wall": 0, "side": "+"}]}"#).unwrap();
    let out = cubetool(dir.path(), &["gate", "ball.json", "--region", "reg.json", "--vertex", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["distance"], 1);
}
