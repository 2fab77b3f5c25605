//! The `twrc` binary end to end.

use std::path::Path;
use std::process::{Command, Output};
use twrc::cli::RunManifest;
use twrc::region::parse_region_csv;

fn twrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twrc")).args(args).output().expect("binary runs")
}

fn out_dir(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn region_writes_layers_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = out_dir(tmp.path(), "xor");
    let o = twrc(&["region", "builtin:xor+noiseless", "--out", "csv", "--out", "svg", "--out-dir", &dir]);
    assert!(o.status.success(), "{}", stderr(&o));
    let cap = parse_region_csv(&std::fs::read_to_string(Path::new(&dir).join("capacity.csv")).unwrap()).unwrap();
    let best = cap.max_sum_vertex().unwrap().point;
    assert!((best.r1 - 1.0).abs() <= 0.01 && (best.r2 - 1.0).abs() <= 0.01);
    for f in ["conv_r1.csv", "r2_frontier.csv", "region.svg", "region.manifest.json"] {
        assert!(Path::new(&dir).join(f).exists(), "{f}");
    }
    let m = RunManifest::read(&Path::new(&dir).join("region.manifest.json")).unwrap();
    assert_eq!(m.command, "region");
    assert_eq!(m.outputs.len(), 4);
    assert_eq!(m.inputs[0].path, "builtin:xor+noiseless");
}

#[test]
fn multiplier_region_has_symmetric_point() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = out_dir(tmp.path(), "m");
    let o = twrc(&["region", "builtin:multiplier", "--out-dir", &dir]);
    assert!(o.status.success());
    let cap = parse_region_csv(&std::fs::read_to_string(Path::new(&dir).join("capacity.csv")).unwrap()).unwrap();
    assert!(cap
        .points()
        .iter()
        .any(|p| (p.r1 - 0.6170).abs() <= 2e-3 && (p.r2 - 0.6170).abs() <= 2e-3));
}

#[test]
fn stochastic_uplink_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("noisy.json");
    std::fs::write(
        &spec,
        r#"{"name": "noisy",
 "uplink": {"type": "stochastic", "p": [[[0.9, 0.1], [0, 1]], [[0, 1], [1, 0]]]},
 "downlink": {"x0_size": 2, "y1_size": 2, "y2_size": 2, "p": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}}"#,
    )
    .unwrap();
    let o = twrc(&["region", spec.to_str().unwrap(), "--out-dir", &out_dir(tmp.path(), "o")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("deterministic uplink"));
    let o = twrc(&["simulate", spec.to_str().unwrap(), "--rates", "0.1,0.1", "--n-list", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("bad.json");
    std::fs::write(&spec, "{\"name\": \"x\",\n\"uplink\": [}\n").unwrap();
    let o = twrc(&["region", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(twrc(&["region", "builtin:no-such"]).status.code(), Some(3));
    assert_eq!(twrc(&["decompose", "builtin:xor", "--point", "a,b"]).status.code(), Some(3));
    assert_eq!(twrc(&["bogus"]).status.code(), Some(3));
}

#[test]
fn decompose_listing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = out_dir(tmp.path(), "d");
    let o = twrc(&["decompose", "builtin:multiplier", "--point", "0.3,0.2", "--out-dir", &dir]);
    assert!(o.status.success());
    let text = stdout(&o);
    let comps = text.lines().filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit())).count();
    assert!((1..=3).contains(&comps), "{text}");
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("residual,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual <= 1e-6);

    let o = twrc(&["decompose", "builtin:xor", "--point", "1,1", "--out-dir", &dir]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("0,")).count(), 1);
    assert!(!stdout(&o).lines().any(|l| l.starts_with("1,")));

    let o = twrc(&["decompose", "builtin:xor", "--point", "2,2", "--out-dir", &dir]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("outside"));
}

#[test]
fn cf_check_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = tmp.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let dir = out_dir(tmp.path(), "cf");
    let identity = write(
        "id.json",
        r#"{"q_pmf": [1], "x1_given_q": [[0.5, 0.5]], "x2_given_q": [[0.5, 0.5]],
            "y0hat_given_y0": [[1, 0], [0, 1]], "x0_pmf": [0.5, 0.5]}"#,
    );
    let o = twrc(&["cf-check", "builtin:xor", "--cf-input", &identity, "--out-dir", &dir]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("rates,1,1") && text.contains("margins,0,0") && text.contains("feasible,false"), "{text}");

    let constant = write(
        "const.json",
        r#"{"q_pmf": [1], "x1_given_q": [[0.5, 0.5]], "x2_given_q": [[0.5, 0.5]],
            "y0hat_given_y0": [[1], [1]], "x0_pmf": [0.5, 0.5]}"#,
    );
    let o = twrc(&["cf-check", "builtin:xor", "--cf-input", &constant, "--out-dir", &dir]);
    assert!(stdout(&o).contains("rates,0,0") && stdout(&o).contains("feasible,true"));

    let five = write(
        "q5.json",
        r#"{"q_pmf": [0.2, 0.2, 0.2, 0.2, 0.2],
            "x1_given_q": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
            "x2_given_q": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
            "y0hat_given_y0": [[1, 0], [0, 1]], "x0_pmf": [0.5, 0.5]}"#,
    );
    let o = twrc(&["cf-check", "builtin:xor", "--cf-input", &five, "--out-dir", &dir]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains('4'), "{}", stderr(&o));
}

#[test]
fn simulate_is_seeded_and_replays() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let dir = out_dir(tmp.path(), name);
        let o = twrc(&[
            "simulate",
            "builtin:xor+bsc-broadcast(0.1)",
            "--rates",
            "0.25,0.25",
            "--n-list",
            "16,32",
            "--trials",
            "300",
            "--epsilon",
            "0.15",
            "--seed",
            "5",
            "--B",
            "10",
            "--out-dir",
            &dir,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        dir
    };
    let (a, b) = (run("a"), run("b"));
    let csv = |d: &str| std::fs::read(Path::new(d).join("sim.csv")).unwrap();
    assert_eq!(csv(&a), csv(&b));
    assert_eq!(String::from_utf8(csv(&a)).unwrap().lines().count(), 3);

    let manifest = Path::new(&a).join("simulate.manifest.json");
    let o = twrc(&["replay", manifest.to_str().unwrap(), "--out-dir", &out_dir(tmp.path(), "r")]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("identical sim.csv"));
    assert_eq!(csv(&out_dir(tmp.path(), "r")), csv(&a));
}

#[test]
fn replay_detects_changed_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = out_dir(tmp.path(), "x");
    assert!(twrc(&["region", "builtin:multiplier", "--resolution", "16", "--out-dir", &dir]).status.success());
    let path = Path::new(&dir).join("region.manifest.json");
    let mut m = RunManifest::read(&path).unwrap();
    m.outputs[0].sha256 = "0".repeat(64);
    std::fs::write(&path, m.to_json()).unwrap();
    let o = twrc(&["replay", path.to_str().unwrap(), "--out-dir", &out_dir(tmp.path(), "y")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("differs"));
}

#[test]
fn simulate_budget_guidance() {
    let o = twrc(&[
        "simulate",
        "builtin:xor",
        "--rates",
        "0.8,0.8",
        "--n-list",
        "100",
        "--mode",
        "explicit",
        "--out-dir",
        tempfile::tempdir().unwrap().path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("implicit"));
}
