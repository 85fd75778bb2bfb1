use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_overlay-outage"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn preset_list_matches_golden() {
    let o = run(&["preset", "list"]);
    assert!(o.status.success());
    let golden = include_str!("golden/presets.txt");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["sweep", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--preset", "fig9"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "-p", "gain=2"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "-p", "alpha=1.5"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn validate_exit_codes() {
    let ok = run(&[
        "validate",
        "-p",
        "snr_db=10",
        "--trials",
        "200000",
        "--seed",
        "4",
        "--workers",
        "2",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("primary"));

    // With alpha = 1 the secondary always fails: estimate and exact are both 1, z = 0.
    let edge = run(&["validate", "-p", "alpha=1", "--trials", "1000", "--workers", "1"]);
    assert_eq!(edge.status.code(), Some(0), "{}", stdout(&edge));
    let text = stdout(&edge);
    let secondary = text.lines().find(|l| l.starts_with("secondary")).unwrap();
    assert!(secondary.contains(" 0.000 "), "{secondary}");
}

#[test]
fn sweep_csv_shape_and_header() {
    let o = run(&[
        "sweep",
        "--axis",
        "alpha",
        "--start",
        "0.1",
        "--stop",
        "0.3",
        "--step",
        "0.1",
        "--outputs",
        "exact,approx",
        "-p",
        "snr_db=20",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# overlay-outage "));
    assert!(text.contains("# params: snr_db=20 "));
    let lines = data_lines(&text);
    assert_eq!(
        lines[0],
        "alpha,primary_exact,primary_approx,secondary_exact,secondary_approx,error,note"
    );
    let xs: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(xs, ["0.1", "0.2", "0.3"]);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# test\nalpha=0.3\nrho=0.4\naxis=snr_db\nstart=10\nstop=10\n").unwrap();
    let o = bin()
        .args(["sweep", "--outputs", "exact", "--config"])
        .arg(&cfg)
        .args(["-p", "alpha=0.7"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("rho=0.4 alpha=0.7 "), "{text}");
    assert_eq!(data_lines(&text).len(), 2);
}

#[test]
fn singular_secondary_falls_back_with_note() {
    let o = run(&[
        "sweep",
        "--preset",
        "fig4",
        "--curve",
        "alpha0p2_m4_0p6",
        "--outputs",
        "asym",
        "--start",
        "30",
        "--stop",
        "30",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = data_lines(&text)[1];
    assert!(row.contains("approximation used"), "{row}");
}

#[test]
fn several_curves_write_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rho.csv");
    let o = bin()
        .args([
            "sweep",
            "--preset",
            "fig8",
            "--outputs",
            "exact",
            "--step",
            "0.3",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for label in ["snr10dB", "snr20dB", "snr30dB"] {
        let text = fs::read_to_string(dir.path().join(format!("rho_{label}.csv"))).unwrap();
        assert!(text.contains(&format!("curve: {label}")));
        assert_eq!(data_lines(&text).len(), 5);
    }
    assert!(!out.exists());
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "sweep",
        "--outputs",
        "mc",
        "--trials",
        "5000",
        "--seed",
        "9",
        "--stop",
        "10",
        "--step",
        "5",
    ];
    let a = bin().args(args).args(["--workers", "1"]).output().unwrap();
    let b = bin().args(args).args(["--workers", "4"]).output().unwrap();
    let c = bin()
        .args([
            "sweep",
            "--outputs",
            "mc",
            "--trials",
            "5000",
            "--seed",
            "10",
            "--stop",
            "10",
            "--step",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn do_cg_reports_both_systems() {
    let o = run(&["do-cg", "--preset", "fig7", "--curve", "snr30dB"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("primary: regime=PrimaryCase1 DO=2.1"), "{text}");
    assert!(text.contains("secondary: regime="), "{text}");
}
