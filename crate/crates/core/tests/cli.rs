use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn markereval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markereval"))
        .args(args)
        .output()
        .expect("run markereval")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn compare_toy(format: &str, markers: &Path) -> Output {
    markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        markers.to_str().unwrap(),
        "--k",
        "2",
        "--tests",
        "top,bottom,movers",
        "--format",
        format,
    ])
}

#[test]
fn toy_reports_match_golden_files() {
    for (format, golden) in [("table", "toy_report.txt"), ("csv", "toy_report.csv"), ("json", "toy_report.json")] {
        let got = stdout(&compare_toy(format, &fixture("toy_markers.csv")));
        let want = std::fs::read_to_string(fixture(golden)).unwrap();
        assert_eq!(got, want, "{format}");
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let csv = stdout(&compare_toy("csv", &fixture("toy_markers.csv")));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&compare_toy("json", &fixture("toy_markers.csv")))).unwrap();
    let mut from_json = Vec::new();
    for result in json["results"].as_array().unwrap() {
        let rows = result["per_marker"]
            .as_array()
            .unwrap()
            .iter()
            .map(|m| (&m["result"], m["verdict"].as_str().unwrap()))
            .chain([(&result["combined"], result["verdict"].as_str().unwrap())]);
        for (r, verdict) in rows {
            let cell = |key: &str| match &r[key] {
                serde_json::Value::Null => f64::NAN,
                serde_json::Value::String(s) => s.parse().unwrap(),
                v => v.as_f64().unwrap(),
            };
            let mut values: Vec<f64> = ["mean_a", "mean_b", "var_a", "var_b", "n_a", "n_b", "t", "df", "p"]
                .iter()
                .map(|k| cell(k))
                .collect();
            values.push(if verdict == "S" { 1.0 } else { 0.0 });
            from_json.push(values);
        }
    }
    let from_csv: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            let mut values: Vec<f64> = cells[3..12].iter().map(|c| c.parse().unwrap()).collect();
            values.push(if cells[12] == "S" { 1.0 } else { 0.0 });
            values
        })
        .collect();
    assert_eq!(from_csv.len(), from_json.len());
    for (a, b) in from_csv.iter().zip(&from_json) {
        for (x, y) in a.iter().zip(b) {
            assert!(x == y || (x.is_nan() && y.is_nan()), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn empty_marker_file_gives_all_undetermined() {
    let out = stdout(&compare_toy("csv", &fixture("empty_markers.csv")));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",U")), "{out}");
}

#[test]
fn oversized_k_fails() {
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        fixture("toy_markers.csv").to_str().unwrap(),
        "--k",
        "10",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("k=10"));
    assert!(out.stdout.is_empty());
}

#[test]
fn movers_needs_half_the_population() {
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        fixture("toy_markers.csv").to_str().unwrap(),
        "--k",
        "4",
        "--tests",
        "movers",
    ]);
    assert!(!out.status.success());
    // Top-K alone accepts the same k
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        fixture("toy_markers.csv").to_str().unwrap(),
        "--k",
        "4",
        "--tests",
        "top",
    ]);
    assert!(out.status.success());
}

#[test]
fn row_order_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let shuffle = |name: &str| {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        lines[1..].reverse();
        lines[1..].rotate_left(2);
        let path = dir.path().join(name);
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();
        path
    };
    let scores = shuffle("toy_scores.csv");
    let markers = shuffle("toy_markers.csv");
    for format in ["table", "csv", "json"] {
        let out = markereval(&[
            "compare",
            "--scores",
            scores.to_str().unwrap(),
            "--markers",
            markers.to_str().unwrap(),
            "--k",
            "2",
            "--format",
            format,
        ]);
        assert_eq!(stdout(&out), stdout(&compare_toy(format, &fixture("toy_markers.csv"))));
    }
}

#[test]
fn jsonl_inputs_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("scores.jsonl");
    let markers = dir.path().join("markers.jsonl");
    let csv = std::fs::read_to_string(fixture("toy_scores.csv")).unwrap();
    let lines: Vec<String> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            format!(r#"{{"sample_id":"{}","score_ref":{},"score_test":{}}}"#, c[0], c[1], c[2])
        })
        .collect();
    std::fs::write(&scores, lines.join("\n")).unwrap();
    let csv = std::fs::read_to_string(fixture("toy_markers.csv")).unwrap();
    let lines: Vec<String> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            format!(r#"{{"sample_id":"{}","marker":"{}","verdict":{}}}"#, c[0], c[1], c[2])
        })
        .collect();
    std::fs::write(&markers, lines.join("\n\n")).unwrap();
    let out = markereval(&[
        "compare",
        "--scores",
        scores.to_str().unwrap(),
        "--markers",
        markers.to_str().unwrap(),
        "--k",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("toy_report.csv")).unwrap());
}

#[test]
fn unmatched_marker_rows() {
    let dir = tempfile::tempdir().unwrap();
    let markers = dir.path().join("markers.csv");
    let mut text = std::fs::read_to_string(fixture("toy_markers.csv")).unwrap();
    text.push_str("s9,trusted_signer,1\n");
    std::fs::write(&markers, &text).unwrap();
    let scores = fixture("toy_scores.csv");
    let base = [
        "compare",
        "--scores",
        scores.to_str().unwrap(),
        "--markers",
        markers.to_str().unwrap(),
        "--k",
        "2",
        "--format",
        "csv",
    ];

    let strict = markereval(&base);
    assert!(!strict.status.success());
    let err = String::from_utf8_lossy(&strict.stderr);
    assert!(err.contains("markers.csv:9:") && err.contains("s9"), "{err}");

    let mut args = base.to_vec();
    args.extend(["--unmatched", "abstain"]);
    let lenient = markereval(&args);
    assert_eq!(stdout(&lenient), std::fs::read_to_string(fixture("toy_report.csv")).unwrap());
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("dropped 1"));
}

#[test]
fn input_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("sample_id,score_ref,score_test\na,0.1,0.2\nb,zero,0.3\n", "scores.csv:3:"),
        ("sample_id,score_ref,score_test\na,0.1,0.2\nb,0.2,0.3\na,0.5,0.5\n", "scores.csv:4:"),
        ("sample_id,score_ref,score_test\na,0.1,0.2\nb,NaN,0.3\n", "b"),
    ];
    for (text, needle) in cases {
        let scores = dir.path().join("scores.csv");
        std::fs::write(&scores, text).unwrap();
        let out = markereval(&[
            "compare",
            "--scores",
            scores.to_str().unwrap(),
            "--markers",
            fixture("empty_markers.csv").to_str().unwrap(),
            "--k",
            "1",
        ]);
        assert!(!out.status.success(), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{text}: {err}");
    }

    let markers = dir.path().join("markers.csv");
    std::fs::write(&markers, "sample_id,marker,verdict\ns1,m,1\ns2,m,2\n").unwrap();
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        markers.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("markers.csv:3:"));
    std::fs::write(&markers, "sample_id,marker,verdict\ns1,m,1\ns1,m,-1\n").unwrap();
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        markers.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("markers.csv:3:"));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = markereval(&[
        "compare",
        "--scores",
        fixture("toy_scores.csv").to_str().unwrap(),
        "--markers",
        fixture("toy_markers.csv").to_str().unwrap(),
        "--k",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        std::fs::read_to_string(fixture("toy_report.json")).unwrap()
    );
}

#[test]
fn simulate_is_deterministic_and_reports_progress_on_stderr() {
    let config = fixture("small_sweep.cfg");
    let first = markereval(&["simulate", "--config", config.to_str().unwrap()]);
    let second = markereval(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    assert_eq!(text.lines().next(), Some("alpha,beta,test,s_count,f_count,u_count"));
    assert_eq!(text.lines().count(), 1 + 3 * 2 * 3);
    for line in text.lines().skip(1) {
        let counts: usize = line.split(',').skip(3).map(|c| c.parse::<usize>().unwrap()).sum();
        assert_eq!(counts, 2, "{line}");
    }
    let progress = String::from_utf8_lossy(&first.stderr);
    assert!(progress.contains("6/6"), "{progress}");
}

#[test]
fn simulate_single_cell() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("one.cfg");
    std::fs::write(&config, "n=2000\nk=50\nseed=3\nalphas=0.9\nbetas=0.9\n").unwrap();
    let out = stdout(&markereval(&["simulate", "--config", config.to_str().unwrap()]));
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().skip(1).all(|l| l.starts_with("0.9,0.9,")));
}

#[test]
fn simulate_config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    for (text, key) in [
        ("alphas=0.5\nbetas=0.5\ngamma=1\n", "gamma"),
        ("alphas=0.5\nbetas=0.5\nrepeats=lots\n", "repeats"),
        ("alphas=0.5\n", "betas"),
    ] {
        std::fs::write(&config, text).unwrap();
        let out = markereval(&["simulate", "--config", config.to_str().unwrap()]);
        assert!(!out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains(key), "{text}");
    }
}

#[test]
fn voting_subcommands() {
    let value = |args: &[&str], column: usize| -> f64 {
        let out = stdout(&markereval(args));
        out.lines().nth(1).unwrap().split(',').nth(column).unwrap().parse().unwrap()
    };
    assert_eq!(value(&["voting", "accuracy", "--k", "1", "--alpha", "0.8"], 2), 0.8);
    assert!((value(&["voting", "accuracy", "--k", "3", "--alpha", "0.6"], 2) - 0.648).abs() < 1e-12);
    assert_eq!(value(&["voting", "coverage", "--betas", "0.5,0.5"], 0), 0.75);
    assert!((value(&["voting", "accuracy", "--alphas", "0.6,0.6,0.6"], 1) - 0.648).abs() < 1e-12);

    let curves = stdout(&markereval(&["voting", "curves", "--ks", "1,3,5", "--alphas", "0.6,0.7"]));
    assert_eq!(curves.lines().count(), 7);
    let marginal = stdout(&markereval(&["voting", "marginal", "--base", "0.6,0.6", "--alphas", "0.9"]));
    assert!(marginal.starts_with("alpha_new,p_correct_with,p_correct_without\n"));

    let bad = markereval(&["voting", "accuracy", "--k", "3", "--alpha", "1.5"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("alpha"));
}
