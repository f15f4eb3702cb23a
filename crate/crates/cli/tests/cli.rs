use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ssg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn ssg")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssg-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn generate_solve_verify_round_trip() {
    let dir = workdir("solve");
    let out = ssg(&["generate", "--n-max", "3", "--n-min", "2", "-r", "3", "--seed", "5", "--out", "g.json"], &dir);
    assert!(out.status.success());
    let hash = json(&out)["game_hash"].as_str().unwrap().to_string();

    let mut values = None;
    for alg in ["hk-all", "gh", "cfb", "opt:R", "fas", "ijma", "hybrid"] {
        let out = ssg(&["solve", "--game", "g.json", "--algorithm", alg], &dir);
        assert!(out.status.success(), "{alg}");
        let v = json(&out);
        assert_eq!(v["game_hash"], hash.as_str());
        assert_eq!(v["algorithm"], alg);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        let vals = v["values"].clone();
        assert_eq!(values.get_or_insert(vals.clone()), &vals, "{alg}");
        if alg == "hk-all" {
            std::fs::write(dir.join("sigma.json"), v["sigma"].to_string()).unwrap();
            std::fs::write(dir.join("tau.json"), v["tau"].to_string()).unwrap();
        }
    }

    let out = ssg(&["verify", "--game", "g.json", "--sigma", "sigma.json", "--tau", "tau.json"], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["optimal"], true);

    let out = ssg(&["oracle", "--game", "g.json", "--cross-check"], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["values"], values.unwrap());
}

#[test]
fn verify_rejects_a_suboptimal_pair() {
    let dir = workdir("verify");
    assert!(ssg(&["generate", "--family", "fig1", "--out", "f1.json"], &dir).status.success());
    std::fs::write(dir.join("s.json"), r#"{"owner":"max","choices":[[0,2],[1,2]]}"#).unwrap();
    std::fs::write(dir.join("t.json"), r#"{"owner":"min","choices":[]}"#).unwrap();
    let out = ssg(&["verify", "--game", "f1.json", "--sigma", "s.json", "--tau", "t.json"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["optimal"], false);

    let out = ssg(&["solve", "--game", "f1.json", "--best-response", "--sigma", "s.json"], &dir);
    assert!(out.status.success());
    assert_eq!(json(&out)["values"][1], "1/2");
}

#[test]
fn bad_input_exits_with_two() {
    let dir = workdir("errors");
    std::fs::write(dir.join("bad.json"), "{bad").unwrap();
    assert_eq!(ssg(&["solve", "--game", "bad.json"], &dir).status.code(), Some(2));
    assert_eq!(ssg(&["solve", "--game", "missing.json"], &dir).status.code(), Some(2));
    assert_eq!(ssg(&["solve", "--no-such-flag"], &dir).status.code(), Some(2));
    assert!(ssg(&["generate", "--family", "coin", "--out", "c.json"], &dir).status.success());
    let out = ssg(&["solve", "--game", "c.json", "--algorithm", "nope"], &dir);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(
        dir.join("invalid.json"),
        r#"{"vertices":[{"id":0,"kind":"max","succ":[]}]}"#,
    )
    .unwrap();
    assert_eq!(ssg(&["solve", "--game", "invalid.json"], &dir).status.code(), Some(2));
}

#[test]
fn bench_csv_has_expected_columns() {
    let dir = workdir("bench");
    let out = ssg(&["bench", "--suite", "small", "--algorithms", "hk-all,ijma"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,family,n,r,q,algorithm,k_fixed_arcs,iterations,bound_nqr,bound_fstrat,ijma_steps,values_hash,wall_ms,seed"
    );
    assert_eq!(lines.count(), 40);
}

#[test]
fn simulate_and_audit_report_json() {
    let dir = workdir("sim");
    assert!(ssg(&["generate", "--family", "chain", "-q", "2", "-r", "3", "--out", "c.json"], &dir).status.success());
    let out = ssg(&["simulate", "--game", "c.json", "--start", "2", "--plays", "4000", "--seed", "3"], &dir);
    assert!(out.status.success());
    let v = json(&out);
    let mean = v["mean"].as_f64().unwrap();
    let se = v["stderr"].as_f64().unwrap();
    assert!((mean - 0.125).abs() <= 5.0 * se.max(1e-3), "{mean} ± {se}");

    let out = ssg(&["audit-denominators", "--game", "c.json", "--samples", "10"], &dir);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["bound"], "8");
    assert_eq!(v["max_lcm"], "8");
}

#[test]
fn transform_writes_a_valid_game() {
    let dir = workdir("transform");
    assert!(ssg(&["generate", "--family", "fig2", "--out", "f2.json"], &dir).status.success());
    let out = ssg(&["transform", "--game", "f2.json", "--arcs", "R", "--out", "t.json"], &dir);
    assert!(out.status.success());
    let out = ssg(&["analyze", "--game", "t.json"], &dir);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["r"], 4);
    assert!(v["vertices"].as_u64().unwrap() > 11);
}
