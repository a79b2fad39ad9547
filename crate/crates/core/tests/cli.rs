use lattice_scatter::analysis::SweepRecord;
use lattice_scatter::cli::{
    self, SolveOutput, EXIT_OK, EXIT_SINGULAR, EXIT_USAGE, EXIT_VERIFY_FAILED,
};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        std::iter::once("scatter").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn solve_json(args: &[&str]) -> SolveOutput {
    let mut all = vec!["solve", "--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = run(&all);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn free_pair_is_transparent() {
    let s = solve_json(&["--model", "pt-pair", "--M", "1", "--x", "0", "--phi", "1.0"]);
    assert!(s.re_r.abs() < 1e-12 && s.im_r.abs() < 1e-12);
    assert!((s.re_t - 1.0).abs() < 1e-12 && s.im_t.abs() < 1e-12);
    assert!((s.prob_sum - 1.0).abs() < 1e-12);
}

#[test]
fn ultralocal_half_coupling_loses_flux() {
    let s = solve_json(&[
        "--model",
        "ultralocal",
        "--a",
        "0.5",
        "--phi",
        "1.5707963268",
    ]);
    assert!((s.prob_sum - 0.346939).abs() < 1e-5);
    assert_eq!(s.model, "ultralocal");
    // --x is accepted as the coupling too
    let t = solve_json(&[
        "--model",
        "ultralocal",
        "--x",
        "-0.5",
        "--phi",
        "1.5707963268",
    ]);
    assert!(t.defect > 0.0);
}

#[test]
fn solve_json_round_trips() {
    let s = solve_json(&[
        "--model", "pt-pair", "--M", "3", "--x", "-0.4", "--phi", "2.2", "--solver", "transfer",
        "--h", "0.5",
    ]);
    let again: SolveOutput = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(again, s);
    assert!((s.energy_shifted - s.energy_unshifted - 8.0).abs() < 1e-12);
    assert!(s.residual < 1e-10);
}

#[test]
fn text_output_lists_every_quantity() {
    let (code, out, _) = run(&[
        "solve", "--model", "pt-pair", "--M", "2", "--x", "0.3", "--phi", "0.8",
    ]);
    assert_eq!(code, EXIT_OK);
    for key in [
        "R ", "T ", "|R|^2", "|T|^2", "prob_sum", "defect", "E ", "residual",
    ] {
        assert!(out.contains(key), "missing {key} in\n{out}");
    }
}

#[test]
fn exit_codes_are_distinct() {
    let (code, _, err) = run(&[
        "solve", "--model", "pt-pair", "--M", "2", "--x", "1.0", "--phi", "1.0",
    ]);
    assert_eq!(code, EXIT_SINGULAR);
    assert!(err.contains("singular"), "{err}");

    assert_eq!(
        run(&["solve", "--model", "pt-pair", "--M", "2", "--x", "0.1", "--phi", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["solve", "--model", "pt-pair", "--x", "0.1", "--phi", "1"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["solve", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);

    assert_eq!(
        run(&[
            "verify",
            "--suite",
            "closed-forms",
            "--M-max",
            "3",
            "--tol",
            "1e-9"
        ])
        .0,
        EXIT_OK
    );
    let (code, out, _) = run(&["verify", "--suite", "all", "--M-max", "3", "--tol", "1e-18"]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.contains("FAIL"));
    assert_eq!(run(&["verify", "--suite", "nonsense"]).0, EXIT_USAGE);
}

#[test]
fn verify_unitarity_to_m8() {
    let (code, out, _) = run(&["verify", "--suite", "unitarity", "--M-max", "8"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn ultralocal_a_range_gives_three_rows() {
    let (code, out, _) = run(&[
        "sweep",
        "--model",
        "ultralocal",
        "--a-range",
        "-0.5:0.5:0.5",
        "--phi-range",
        "1.5707963267948966",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<SweepRecord> = rdr.deserialize().collect::<Result<_, _>>().unwrap();
    let defects: Vec<f64> = rows.iter().map(|r| r.defect).collect();
    assert_eq!(defects.len(), 3);
    for (got, want) in defects.iter().zip([1.959184, 0.0, -0.653061]) {
        assert!((got - want).abs() < 1e-5, "{defects:?}");
    }
}

#[test]
fn sweep_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<Vec<u8>> = ["a.csv", "b.csv"]
        .iter()
        .map(|name| {
            let path = dir.path().join(name);
            let (code, _, err) = run(&[
                "sweep",
                "--model",
                "pt-pair",
                "--M-list",
                "1,2,5",
                "--x-range",
                "-0.5:0.5:0.25",
                "--phi-range",
                "0.1:3.0:0.3",
                "--solver",
                "all",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(code, EXIT_OK, "{err}");
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files[0].clone()).unwrap();
    assert!(text
        .starts_with("model,M,coupling,phi,E,reR,imR,reT,imT,prob_sum,defect,solver,residual\n"));
}

#[test]
fn sweep_json_and_bad_inputs() {
    let (code, out, _) = run(&[
        "sweep",
        "--model",
        "pt-pair",
        "--M-list",
        "2",
        "--x-range",
        "0.2",
        "--phi-range",
        "0.5:1.5:0.5",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    // empty grid
    assert_eq!(
        run(&[
            "sweep",
            "--model",
            "pt-pair",
            "--M-list",
            "1",
            "--x-range",
            "0.5:0.1:0.1",
            "--phi-range",
            "1"
        ])
        .0,
        EXIT_USAGE
    );
    // unwritable path
    let code = run(&[
        "sweep",
        "--model",
        "ultralocal",
        "--a-range",
        "0.1",
        "--phi-range",
        "1",
        "--out",
        "/nonexistent/dir/x.csv",
    ])
    .0;
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn check_pt_reports_first_violation() {
    let (code, out, _) = run(&["check-pt", "--model", "ultralocal", "--a", "0.3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("false") && out.contains("(0, 1)"), "{out}");

    let (code, out, _) = run(&["check-pt", "--model", "pt-pair", "--M", "4", "--x", "0.7"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("true") && !out.contains("violation"));
}

#[test]
fn custom_window_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("w.json");
    std::fs::write(
        &good,
        r#"{"lo": -1, "hi": 1, "entries": [
            {"i": -1, "j": -1, "re": 0.0, "im": 0.4},
            {"i": 1, "j": 1, "re": 0.0, "im": -0.4}]}"#,
    )
    .unwrap();
    let path = good.to_str().unwrap();
    let (code, out, _) = run(&["check-pt", "--model", "custom", "--window", path]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("true"));
    let s = solve_json(&["--model", "custom", "--window", path, "--phi", "1.2"]);
    assert_eq!(s.model, "custom");

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"lo": 0, "hi": 1, "entries": [{"i": 3, "j": 0, "re": 1.0}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&[
            "check-pt",
            "--model",
            "custom",
            "--window",
            bad.to_str().unwrap()
        ])
        .0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&[
            "check-pt",
            "--model",
            "custom",
            "--window",
            "/no/such/file.json"
        ])
        .0,
        EXIT_USAGE
    );
}
