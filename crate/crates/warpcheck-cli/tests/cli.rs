//! End-to-end tests of the binary: exit codes, report determinism, CSV
//! shape and round-trip, and the flag/config-file layering.

use std::fs;
use std::process::{Command, Output};

fn warpcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_thm13_passes_with_exit_zero() {
    let out = warpcheck(&["verify", "--family", "thm13", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout(&out);
    assert!(json.contains("\"pass\":true"), "{json}");
    assert!(json.contains("\"label\":\"ricci-mixed\""));
}

#[test]
fn injected_lambda_flips_to_failure_exit_one() {
    let out = warpcheck(&["verify", "--family", "thm13", "--n", "4", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"pass\":false"));
}

#[test]
fn usage_errors_exit_two() {
    let out = warpcheck(&["verify", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    let out = warpcheck(&["verify", "--family", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    // a null direction is incompatible with the closed-form families
    let out = warpcheck(&[
        "verify", "--family", "thm13", "--n", "4", "--eps", "-+++", "--alpha", "1,1,0,0",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));

    // report formats are fixed per command
    let out = warpcheck(&["verify", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_custom_constant_profiles_pass() {
    let out = warpcheck(&[
        "verify", "--family", "custom", "--n", "4", "--phi-poly", "1", "--f-poly", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("\"pass\":true"));
}

#[test]
fn custom_profile_domain_violation_fails_with_report() {
    // f crosses zero inside the sampling window
    let out = warpcheck(&[
        "verify", "--family", "custom", "--n", "4", "--phi-poly", "1", "--f-poly", "0.1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"pass\":false"));
    assert!(stderr(&out).contains("not positive"));
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = warpcheck(&[
            "verify",
            "--family",
            "thm14",
            "--n",
            "4",
            "--m",
            "2",
            "--branch",
            "plus",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn sample_grid_produces_191_rows_starting_at_minus_one() {
    let out = warpcheck(&[
        "sample", "--family", "thm13", "--n", "4", "--k", "1", "--k1", "1", "--k2", "2",
        "--grid", "-1,0.9,0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 192, "header plus 191 rows");
    assert_eq!(
        lines[0],
        "xi,phi,dphi,d2phi,f,df,d2f,res1,res2,res3,warning"
    );
    assert!(lines[1].starts_with("-1.0000000000000000e0,"));
    assert!(lines.iter().skip(1).all(|l| !l.contains("clipped")));
}

#[test]
fn sample_round_trip_reproduces_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = warpcheck(&[
        "sample", "--family", "thm13", "--n", "4", "--grid", "-1,0.9,0.01", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let parsed = warpcheck_cli::read_sample_csv(fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(parsed.len(), 191);

    let args = warpcheck_cli::CommonArgs {
        family: Some("thm13".into()),
        n: Some(4),
        grid: Some("-1,0.9,0.01".into()),
        ..Default::default()
    };
    let spec = warpcheck_cli::build_spec(&args, warpcheck_cli::CommandKind::Sample).unwrap();
    let (rows, _) = warpcheck::sample_rows(&spec).unwrap();
    assert_eq!(rows.len(), parsed.len());
    for (a, b) in rows.iter().zip(&parsed) {
        let (x, y) = (a.values.as_ref().unwrap(), b.values.as_ref().unwrap());
        for (u, v) in x.res.iter().zip(&y.res) {
            assert!((u - v).abs() <= 1e-12);
        }
    }
}

#[test]
fn sample_near_boundary_flags_clipped_rows() {
    let out = warpcheck(&[
        "sample", "--family", "thm14", "--n", "4", "--m", "2", "--branch", "plus", "--grid",
        "-2.5,-1.5,0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let clipped: Vec<&str> = text.lines().filter(|l| l.contains("clipped")).collect();
    assert_eq!(clipped.len(), 3, "{text}");
    assert!(stderr(&out).contains("clipped"));
}

#[test]
fn sample_exp_example_residual_column_is_tiny() {
    let out = warpcheck(&[
        "sample", "--family", "exp-example", "--n", "3", "--m", "1", "--A", "1", "--grid",
        "-1,1,0.1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for line in text.trim_end().lines().skip(1) {
        let res1: f64 = line.split(',').nth(7).unwrap().parse().unwrap();
        assert!(res1.abs() < 1e-10, "{line}");
    }
}

#[test]
fn oracle_defaults_pass_and_are_signature_agnostic() {
    for fiber in ["++", "-+"] {
        let out = warpcheck(&["oracle", "--fiber-eps", fiber, "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).contains("\"pass\":true"));
    }
}

#[test]
fn oracle_zero_trials_passes_with_warning() {
    let out = warpcheck(&["oracle", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"perEquation\":[]"));
    assert!(stderr(&out).contains("no trials"));
}

#[test]
fn null_rigidity_through_the_cli() {
    // exact rational null direction; clean run passes
    let base = [
        "verify",
        "--family",
        "exp-example",
        "--n",
        "3",
        "--eps",
        "-++",
        "--alpha",
        "1,1,0",
    ];
    let out = warpcheck(&base);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let mut with_lambda_f = base.to_vec();
    with_lambda_f.extend_from_slice(&["--lambdaF", "1"]);
    let out = warpcheck(&with_lambda_f);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"label\":\"null-lambda-fiber\""));
}

#[test]
fn integrated_family_verifies() {
    let out = warpcheck(&[
        "verify", "--family", "thm15", "--n", "3", "--m", "1", "--A", "1", "--span", "-1,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("\"pass\":true"));
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(
        &path,
        "family = \"thm13\"\nn = 4\nlambda = 1.0\nseed = 9\n",
    )
    .unwrap();

    // config alone: the injected lambda fails
    let out = warpcheck(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // a flag overrides the file
    let out = warpcheck(&[
        "verify",
        "--config",
        path.to_str().unwrap(),
        "--lambda",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // unknown keys are usage errors
    fs::write(&path, "bogus = 1\n").unwrap();
    let out = warpcheck(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
