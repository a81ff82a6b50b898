use cfoi_irid::output::{FREQ_HEADER, IMPULSE_HEADER};
use cfoi_irid::{irid_fcoi, write_outputs, CfoiParams, CoeffsFile, IridError, IridRequest, IridResult};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

fn result() -> &'static IridResult {
    static RES: OnceLock<IridResult> = OnceLock::new();
    RES.get_or_init(|| {
        let p = CfoiParams::new(1.5, -0.4, 1.0).unwrap();
        let mut req = IridRequest::new(p, 2.0, 0.01, 100.0, 5);
        req.samples = 256;
        req.points = 50;
        irid_fcoi(&req).unwrap()
    })
}

#[test]
fn writes_expected_files_and_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let res = result();
    let files = write_outputs(res, dir.path(), true).unwrap();
    let names: Vec<_> = files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        ["impulse.csv", "freq.csv", "coeffs.json", "summary.txt", "impulse.svg", "freq.svg"]
    );

    let impulse = fs::read_to_string(dir.path().join("impulse.csv")).unwrap();
    let lines: Vec<&str> = impulse.lines().collect();
    assert_eq!(lines[0], IMPULSE_HEADER);
    assert_eq!(lines.len(), res.h_ref.len() + 1);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));

    let freq = fs::read_to_string(dir.path().join("freq.csv")).unwrap();
    let lines: Vec<&str> = freq.lines().collect();
    assert_eq!(lines[0], FREQ_HEADER);
    assert_eq!(lines.len(), res.f_ref.grid().len() + 1);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));

    let svg = fs::read_to_string(dir.path().join("freq.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn svg_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(result(), dir.path(), false).unwrap();
    assert_eq!(files.len(), 4);
    assert!(!dir.path().join("impulse.svg").exists());
}

#[test]
fn coefficient_file_round_trips_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let res = result();
    write_outputs(res, dir.path(), false).unwrap();
    let text = fs::read_to_string(dir.path().join("coeffs.json")).unwrap();
    let parsed: CoeffsFile = serde_json::from_str(&text).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&parsed.discrete.num), bits(res.gd.num().coeffs()));
    assert_eq!(bits(&parsed.discrete.den), bits(res.gd.den().coeffs()));
    assert_eq!(parsed.discrete.ts.to_bits(), res.gd.ts().to_bits());
    assert_eq!(bits(&parsed.continuous.num), bits(res.gc.num().coeffs()));
    assert_eq!(bits(&parsed.continuous.den), bits(res.gc.den().coeffs()));
    assert_eq!(parsed, CoeffsFile::from_result(res));
}

#[test]
fn empty_directory_path_is_an_io_error() {
    let err = write_outputs(result(), Path::new(""), false).unwrap_err();
    assert!(matches!(err, IridError::Io { .. }));
}

#[test]
fn unwritable_target_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let err = write_outputs(result(), &blocker.join("sub"), false).unwrap_err();
    match err {
        IridError::Io { path, .. } => assert!(path.starts_with(&blocker)),
        other => panic!("unexpected error {other}"),
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_irid-cfoi"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn cli_rejects_out_of_range_lambda() {
    let out = cli(&["--lambda", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 2)"));
}

#[test]
fn cli_rejects_bad_mu_and_missing_flags() {
    let out = cli(&["--lambda", "1.5", "--mu", "0.3", "--tm", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["--lambda", "1.5", "--mu", "-0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--tm"));
    let out = cli(&["--lambda", "abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("--lambda") && text.contains("--out-dir"));
}

#[test]
fn cli_runs_reference_case() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = Command::new(env!("CARGO_BIN_EXE_irid-cfoi"))
        .args([
            "--lambda", "1.5", "--mu", "-0.4", "--wgc", "1", "--tm", "2", "--wmin", "0.01",
            "--wmax", "100", "--norder", "5", "--out-dir",
        ])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["impulse.csv", "freq.csv", "coeffs.json", "summary.txt", "impulse.svg", "freq.svg"] {
        assert!(out_dir.join(f).is_file(), "{f} missing");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("rel L2"));
}
