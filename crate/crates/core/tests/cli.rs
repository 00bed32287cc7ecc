use std::path::Path;
use std::process::Command;

fn iobt(args: &[&str], dir: &Path) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iobt"))
        .args(args)
        .env("IOBT_OUTPUT_DIR", dir.join("env"))
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.success(), text)
}

fn spec(dir: &Path, body: &str) -> String {
    let p = dir.join("spec.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_writes_state_table() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(dir.path(), "[game]\ndevices = 3\n");
    let out = dir.path().join("o");
    let (ok, text) = iobt(
        &[
            "solve",
            "--spec",
            &s,
            "--mode",
            "ne",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(ok, "{text}");
    let csv = std::fs::read_to_string(out.join("solve_ne.csv")).unwrap();
    assert!(csv.starts_with("step,connections,attacks,connect_prob,jam_prob"));
    assert_eq!(csv.lines().count(), 1 + 9);
}

#[test]
fn learn_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(
        dir.path(),
        "[game]\ndevices = 3\n[learning]\nmax_iterations = 300\n",
    );
    let (ok, text) = iobt(
        &["learn", "--spec", &s, "--seed", "4", "--format", "json"],
        dir.path(),
    );
    assert!(ok, "{text}");
    let trace = dir.path().join("env/trace_seed4.json");
    assert!(dir.path().join("env/learn_seed4.json").exists());
    let (ok, text) = iobt(&["replay", "--trace", trace.to_str().unwrap()], dir.path());
    assert!(ok && text.contains("identical"), "{text}");
}

#[test]
fn tampered_trace_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(
        dir.path(),
        "[game]\ndevices = 2\n[learning]\nmax_iterations = 50\n",
    );
    assert!(iobt(&["learn", "--spec", &s, "--seed", "1"], dir.path()).0);
    let trace = dir.path().join("env/trace_seed1.json");
    let text =
        std::fs::read_to_string(&trace)
            .unwrap()
            .replacen("\"rng_seed\":1", "\"rng_seed\":2", 1);
    std::fs::write(&trace, text).unwrap();
    let (ok, text) = iobt(&["replay", "--trace", trace.to_str().unwrap()], dir.path());
    assert!(!ok && text.contains("MISMATCH"), "{text}");
}

#[test]
fn sweep_json_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(
        dir.path(),
        "[game]\ndevices = 3\n[sweep]\ndelay_weight = [0.3, 0.7]\n",
    );
    let (ok, text) = iobt(&["sweep", "--spec", &s, "--format", "json"], dir.path());
    assert!(ok, "{text}");
    let rows: Vec<serde_json::Value> = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("env/results.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["error"].is_null()));
    let geometry = std::fs::read_to_string(dir.path().join("env/geometry.json")).unwrap();
    assert!(geometry.contains("soldier_distances_m"));
    let (ok, text) = iobt(&["check", "--spec", &s], dir.path());
    assert!(
        ok && text.contains("NE: ok") && text.contains("PE: ok"),
        "{text}"
    );
}

#[test]
fn bad_spec_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(
        dir.path(),
        "[game]\ndelay_weight = 0.7\npower_weight = 0.7\n",
    );
    let (ok, text) = iobt(&["check", "--spec", &s], dir.path());
    assert!(!ok && text.contains("power_weight"), "{text}");
    let s = spec(dir.path(), "[game]\ndevices = [\n");
    let (ok, text) = iobt(&["check", "--spec", &s], dir.path());
    assert!(!ok && text.contains("spec.toml:line"), "{text}");
}

#[test]
fn templates_all_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../templates");
    for n in 4..=11 {
        let spec = iobt_psygame::experiment::load_spec(dir.join(format!("fig{n}.toml"))).unwrap();
        assert!(!spec.points().unwrap().is_empty());
    }
}
