use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dualent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualent")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Data rows of a CSV file, skipping the `#` metadata block.
fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn metadata_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| l.starts_with('#')).map(String::from).collect()
}

fn assert_metadata_csv(path: &Path) {
    let meta = metadata_lines(path);
    for key in ["command_line", "seed", "norm", "tool_version"] {
        assert!(meta.iter().any(|l| l.starts_with(&format!("# {key}: "))), "{key} missing in {path:?}");
    }
}

fn binary_entropy(x: f64) -> f64 {
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

#[test]
fn maximally_mixed_total_entropy() {
    let o = dualent(&["entropy", "--preset", "maximally-mixed", "--dim", "6", "-e", "s-total"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r6 = 6.0 * 6f64.log2() - 5.0 * 5f64.log2();
    assert!((r6 - 3.900135).abs() < 5e-7);
    assert!(stdout(&o).contains("s_total = 3.900135"), "{}", stdout(&o));
}

#[test]
fn bell_marginal_von_neumann_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bell.csv");
    let o = dualent(&["entropy", "--preset", "bell", "-e", "von-neumann", "--out", s(&out), "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("von_neumann = 1.000000"));
    assert_metadata_csv(&out);
    assert!(metadata_lines(&out).contains(&"# seed: 11".to_string()));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["entropy", "q", "value"]);
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
    assert!(rows[0][2].contains('.') && !rows[0][2].contains(','));
}

#[test]
fn tsallis_at_q_one_is_a_domain_error() {
    let o = dualent(&["entropy", "--preset", "bell", "-e", "tsallis", "-q", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("q = 1"), "{}", stderr(&o));
}

#[test]
fn invalid_state_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("truncated.json", r#"{"dims": [2], "re": [1, 0]"#),
        ("length.json", r#"{"dims": [2, 2], "re": [1, 0, 0]}"#),
        ("norm.json", r#"{"dims": [2], "re": [1, 1]}"#),
        ("hermitian.json", r#"{"dims": [2], "re": [0.5, 0.5, 0, 0.5]}"#),
    ];
    for (name, body) in cases {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        let o = dualent(&["entropy", "--state", s(&p)]);
        assert_eq!(code(&o), 2, "{name}: {}", stderr(&o));
    }
    let o = dualent(&["entropy", "--state", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn complex_state_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("psi.json");
    // (|00> + i|11>)/sqrt 2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(&p, format!(r#"{{"dims": [2, 2], "re": [{h}, 0, 0, 0], "im": [0, 0, 0, {h}]}}"#)).unwrap();
    let o = dualent(&["entropy", "--state", s(&p), "-e", "s-total"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("s_total = 2.000000"));
}

#[test]
fn reproduce_example4_headline() {
    let dir = tempfile::tempdir().unwrap();
    let o = dualent(&["reproduce", "4", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("E_t(A|BC)=1.000000"), "{text}");
    assert!(text.contains("pairwise=0.951965"), "{text}");
    assert!(text.contains("crossover α=15"), "{text}");
    assert_eq!(text.lines().last(), Some("PASS"));
    assert_metadata_csv(&dir.path().join("example4.csv"));
    assert_metadata_csv(&dir.path().join("reproduce_4_checks.csv"));
}

#[test]
fn reproduce_fig1_writes_simplex_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = dualent(&["reproduce", "fig1", "--grid", "10", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let path = dir.path().join("fig1_simplex.csv");
    assert_metadata_csv(&path);
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, ["p1", "p2", "H", "H^t"]);
    assert_eq!(rows.len(), 66);
    for r in &rows {
        let v: Vec<f64> = r.iter().map(|x| x.parse().unwrap()).collect();
        let p3 = (1.0 - v[0] - v[1]).max(0.0);
        let shannon: f64 = [v[0], v[1], p3].iter().filter(|&&p| p > 0.0).map(|p| -p * p.log2()).sum();
        assert!((shannon - v[2]).abs() < 1e-12);
        assert!(v[2] <= v[3] + 1e-12);
    }
}

#[test]
fn reproduce_example2_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let o = dualent(&["reproduce", "2", "--grid", "25", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS H5: S <= S^t <= 2S"));
    assert!(stdout(&o).contains("PASS H6: S <= S^t <= 2S"));
    for n in [5, 6] {
        let path = dir.path().join(format!("fig2_h{n}.csv"));
        assert_metadata_csv(&path);
        let (header, rows) = csv_rows(&path);
        assert_eq!(rows.len(), 25);
        // t, (S, S^t) per cut, norm, energy
        assert_eq!(header.len(), 1 + 2 * (n + 1) + 2);
    }
}

#[test]
fn reproduce_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = dualent(&["reproduce", "2", "--grid", "12", "--seed", "3", "--out", s(d.path())]);
        assert_eq!(code(&o), 0);
    }
    let strip = |p: &Path| {
        fs::read_to_string(p).unwrap().lines().filter(|l| !l.starts_with("# command_line")).collect::<Vec<_>>().join("\n")
    };
    for f in ["fig2_h5.csv", "fig2_h6.csv"] {
        assert_eq!(strip(&a.path().join(f)), strip(&b.path().join(f)));
    }
}

#[test]
fn reproduce_writes_leave_no_temporaries() {
    let dir = tempfile::tempdir().unwrap();
    let o = dualent(&["reproduce", "5", "--grid", "11", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["fig6_chain.csv", "reproduce_5_checks.csv"]);
}

#[test]
fn tolerance_miss_exits_4() {
    // the sign claim for the Tsallis-total family fails from spectra
    let dir = tempfile::tempdir().unwrap();
    let o = dualent(&["reproduce", "6", "--grid", "11", "--out", s(dir.path())]);
    assert_eq!(code(&o), 4, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL tau takes both signs"));
    assert!(dir.path().join("fig7_tsallis.csv").exists());
}

#[test]
fn network_polygon_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("net.json");
    let o = dualent(&["network", "-n", "3", "--seed", "7", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let meta = &doc["metadata"];
    assert_eq!(meta["seed"], 7);
    for key in ["command_line", "norm", "tool_version"] {
        assert!(meta[key].is_string(), "{key}");
    }
    let taus: Vec<f64> = doc["report"]["taus"].as_array().unwrap().iter().map(|t| t.as_f64().unwrap()).collect();
    assert_eq!(taus.len(), 3);
    assert!(taus.iter().all(|&t| t <= 0.0), "{taus:?}");

    // the report feeds back in as a topology
    let again = dir.path().join("again.json");
    let o = dualent(&["network", "--topology", s(&out), "--out", s(&again)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc2: Value = serde_json::from_str(&fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(doc["report"]["values"], doc2["report"]["values"]);
}

#[test]
fn roof_matches_two_qubit_formula() {
    // 0.6 |Phi+><Phi+| + 0.4 |01><01| has concurrence 0.6, so E_t = h(0.6) = H2(0.9)
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.json");
    fs::write(&rho, r#"{"dims": [2, 2], "re": [0.3, 0, 0, 0.3, 0, 0.4, 0, 0, 0, 0, 0, 0, 0.3, 0, 0, 0.3]}"#).unwrap();
    let out = dir.path().join("roof.json");
    let o = dualent(&["roof", "--state", s(&rho), "--restarts", "20", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("analytic"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let roof = &doc["roof"];
    let value = roof["value"].as_f64().unwrap();
    let analytic = roof["analytic"].as_f64().unwrap();
    let exact = binary_entropy(0.9);
    assert!((analytic - exact).abs() < 1e-12);
    assert!((value - exact).abs() < 1e-3, "{value} vs {exact}");
    assert!(value >= exact - 1e-9);
    assert_eq!(roof["rank"], 2);
    let weights: f64 = roof["best_ensemble"]["weights"].as_array().unwrap().iter().map(|w| w.as_f64().unwrap()).sum();
    assert!((weights - 1.0).abs() < 1e-12);
}

#[test]
fn scan_example3_eof_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = dualent(&["scan", "example3", "eof", "--gamma", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_metadata_csv(&out);
    let (header, rows) = csv_rows(&out);
    let ti = header.iter().position(|h| h == "tau").unwrap();
    assert_eq!(rows.len(), 101);
    let worst = rows.iter().map(|r| r[ti].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn scan_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.json");
    let o = dualent(&["scan", "example6", "-q", "2,3", "--grid", "5", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);
    assert!(doc["metadata"]["tool_version"].as_str().unwrap().starts_with("dualent "));
    assert!(doc["rows"][0]["tau"].is_number());
}
