use std::process::{Command, Output};

fn covosc(args: &[&str], grid_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_covosc"));
    cmd.args(args);
    match grid_env {
        Some(v) => cmd.env("COVOSC_GRID_DEFAULT", v),
        None => cmd.env_remove("COVOSC_GRID_DEFAULT"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn success_writes_to_stdout() {
    let o = covosc(&["parton", "--eta", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ratio"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["parton", "--eta", "1", "--energy", "900"][..],
        &["parton", "--mass", "1"],
        &["wavefunction", "--format", "xml"],
        &["nonsense"],
    ] {
        assert_eq!(covosc(args, None).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["wavefunction", "--grid", "3:-3:11"][..],
        &["wavefunction", "--grid", "-3:3"],
        &["marginal", "--eta", "2", "--grid", "-8:8:101"],
        &["parton", "--energy", "0.5"],
        &["entropy-curve", "--eta-range", "0:1:0"],
    ] {
        let o = covosc(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("covosc: "));
    }
}

#[test]
fn failed_tolerance_exits_3_after_writing() {
    // far too coarse for the sampled density to integrate to one
    let o = covosc(&["wavefunction", "--eta", "1", "--grid", "-6:6:7"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("z,t,psi,density"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2D normalization"));
}

#[test]
fn grid_env_is_fallback_only() {
    let from_env = covosc(&["marginal", "--eta", "0"], Some("-10:10:201"));
    assert_eq!(from_env.status.code(), Some(0));
    assert!(stdout(&from_env).contains("# grid=-10:10:201"));

    let flag_wins = covosc(&["marginal", "--eta", "0", "--grid", "-9:9:181"], Some("-10:10:201"));
    assert!(stdout(&flag_wins).contains("# grid=-9:9:181"));

    let bad_env = covosc(&["marginal", "--eta", "0"], Some("garbage"));
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schmidt.json");
    let o = covosc(&["schmidt", "--nmax", "5", "--format", "json", "--output", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn entropy_curve_reports_match() {
    let o = covosc(&["entropy-curve", "--eta-range", "0:1:2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("schmidt_closed_form"));
}
