use std::process::Command;

use fracmv_cli::{run, EXIT_COMPUTE, EXIT_OK, EXIT_SELFTEST, EXIT_USAGE};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fracmv").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Data rows of a CSV report, without the header and `#` metadata.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn meta<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("# {key}: ")))
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["fracint", "--f", "t^2", "--alpha", "0.5", "--x", "1"],
        &[
            "fracderiv",
            "--f",
            "t",
            "--alpha",
            "0.5",
            "--x",
            "1",
            "--method",
            "direct",
        ],
        &["meanvalue", "--f", "sin(t)", "--alpha", "0.5", "--x", "2"],
        &["polyxi", "--f", "t^2", "--alpha", "0.5", "--delta", "1"],
        &[
            "critpoints",
            "--f",
            "sin(t)",
            "--alpha",
            "0.5",
            "--b",
            "3.2",
        ],
        &[
            "ralpha",
            "--f",
            "sin(t)",
            "--alpha",
            "0.01:0.99:3",
            "--b",
            "4.7",
            "--x0",
            "1.5708",
            "--eps",
            "0.25",
        ],
        &["dilation", "--scan-n", "8"],
        &[
            "convexity",
            "--f",
            "t^2",
            "--alpha",
            "0.5",
            "--b",
            "2",
            "--delta",
            "0.25",
            "--n",
            "4",
        ],
        &[
            "mono", "--f", "t", "--alpha", "0.5", "--tau", "0.1", "--b", "1",
        ],
        &[
            "periodic",
            "--f",
            "sin(t)",
            "--alpha",
            "0.5",
            "--tau",
            "6.283185307179586",
            "--b",
            "12",
            "--scan-n",
            "4",
        ],
        &["selftest"],
    ];
    for args in cases {
        for format in ["table", "csv"] {
            let mut full = args.to_vec();
            full.extend(["--output", format]);
            let o = invoke(&full);
            assert_eq!(o.code, EXIT_OK, "{full:?}: {}", o.stderr);
            assert!(!o.stdout.is_empty());
        }
    }
}

#[test]
fn csv_numbers_round_trip() {
    let o = invoke(&[
        "fracint", "--f", "t^2", "--alpha", "0.5", "--x", "1", "--output", "csv",
    ]);
    let (header, rows) = csv_rows(&o.stdout);
    assert_eq!(header, ["alpha", "x", "value", "est_error", "backend"]);
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][2].parse().unwrap();
    assert_eq!(fracmv_cli::csv_number(value), rows[0][2]);
    // I^{1/2} t² at 1 is Γ(3)/Γ(3.5).
    assert!((value - 2.0 / statrs::function::gamma::gamma(3.5)).abs() < 1e-6);
    assert_eq!(rows[0][4], "product_trapezoid");
    assert_eq!(meta(&o.stdout, "command"), Some("fracint"));
}

#[test]
fn alpha_sweeps_produce_one_row_per_order() {
    let o = invoke(&[
        "fracint",
        "--f",
        "t",
        "--alpha",
        "0.1:0.9:5",
        "--x",
        "1",
        "--output",
        "csv",
    ]);
    assert_eq!(o.code, EXIT_OK);
    let (_, rows) = csv_rows(&o.stdout);
    let alphas: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(alphas.len(), 5);
    assert!((alphas[2] - 0.5).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["fracint", "--f", "t", "--alpha", "1.5", "--x", "1"][..],
        &["fracint", "--f", "t", "--alpha", "abc", "--x", "1"],
        &["fracint", "--f", "t +", "--alpha", "0.5", "--x", "1"],
        &["fracint", "--f", "tan(t)", "--alpha", "0.5", "--x", "1"],
        &["fracint", "--f", "t", "--alpha", "0.5", "--x", "-1"],
        &["fracint", "--f", "t", "--alpha", "0.5"],
        &["polyxi", "--f", "t", "--alpha", "0.2:0.8:3", "--delta", "1"],
        &[
            "fracint", "--f", "t", "--alpha", "0.5", "--x", "1", "--tol", "2",
        ],
        &["nosuchcommand"],
    ] {
        let o = invoke(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn nonzero_base_is_a_computation_error_unless_allowed() {
    let base = [
        "fracderiv",
        "--f",
        "t + 1",
        "--alpha",
        "0.5",
        "--x",
        "1",
        "--output",
        "csv",
    ];
    let refused = invoke(&base);
    assert_eq!(refused.code, EXIT_COMPUTE);
    assert!(
        refused.stderr.starts_with("fracmv: computation error:"),
        "{}",
        refused.stderr
    );

    let mut allowed = base.to_vec();
    allowed.push("--allow-nonzero-base");
    let o = invoke(&allowed);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains("fracmv: warning:"));
    let (header, rows) = csv_rows(&o.stdout);
    assert_eq!(header.last().unwrap(), "method");
    assert_eq!(rows[0].last().unwrap(), "caputo");
    // Caputo D^{1/2}(t + 1) at 1 is 1/Γ(3/2).
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - 1.0 / statrs::function::gamma::gamma(1.5)).abs() < 1e-8);
}

#[test]
fn hypothesis_failures_exit_two() {
    let o = invoke(&[
        "periodic", "--f", "sin(t)", "--alpha", "0.5", "--tau", "3.14159", "--b", "10",
    ]);
    assert_eq!(o.code, EXIT_COMPUTE, "{}", o.stderr);
}

#[test]
fn selftest_statuses() {
    let o = invoke(&["selftest", "--output", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let (header, rows) = csv_rows(&o.stdout);
    assert_eq!(header, ["check", "status", "error", "tolerance", "floor"]);
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r[1] == "PASS"));

    let coarse = invoke(&["selftest", "--grid-n", "8", "--output", "csv"]);
    assert_eq!(coarse.code, EXIT_SELFTEST);
    assert!(coarse.stderr.contains("selftest failed"));
    assert!(csv_rows(&coarse.stdout).1.iter().any(|r| r[1] == "FAIL"));

    let strict = invoke(&["selftest", "--tol", "1e-15", "--output", "csv"]);
    assert_eq!(strict.code, EXIT_SELFTEST);
    assert!(csv_rows(&strict.stdout)
        .1
        .iter()
        .any(|r| r[1] == "INFEASIBLE"));
}

#[test]
fn help_lists_csv_columns() {
    let o = invoke(&["meanvalue", "--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(
        o.stdout.contains("alpha,x,target_g,xi,residual,is_sup"),
        "{}",
        o.stdout
    );
    let top = invoke(&["--help"]);
    assert_eq!(top.code, EXIT_OK);
    for sub in [
        "fracint",
        "fracderiv",
        "meanvalue",
        "polyxi",
        "critpoints",
        "ralpha",
        "dilation",
        "convexity",
        "mono",
        "periodic",
        "selftest",
    ] {
        assert!(top.stdout.contains(sub), "{sub}");
    }
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_fracmv");
    let args = [
        "convexity",
        "--f",
        "exp(t) - 1 - t",
        "--alpha",
        "0.4",
        "--b",
        "2",
        "--delta",
        "0.2",
        "--n",
        "8",
        "--seed",
        "42",
        "--output",
        "csv",
    ];
    let first = Command::new(bin).args(args).output().unwrap();
    let second = Command::new(bin).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(
        String::from_utf8(first.stdout).unwrap(),
        invoke(&args).stdout
    );

    let failing = Command::new(bin)
        .args(["fracint", "--f", "t", "--alpha", "0", "--x", "1"])
        .output()
        .unwrap();
    assert_eq!(failing.status.code(), Some(EXIT_USAGE));
}
