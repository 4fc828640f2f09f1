use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rindler-teleport-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out_dir: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rindler-teleport"));
    cmd.args(args).env_remove("RINDLER_TELEPORT_OUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("RINDLER_TELEPORT_OUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn fig4_writes_csv_into_environment_directory() {
    let dir = scratch("fig4");
    let out = run(&["fig4", "--a-steps", "4", "--omega0", "1,2"], Some(&dir));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("fig4.csv")).unwrap();
    assert!(text.contains("# command = fig4"));
    assert!(text.contains("# seed = "));
    let rows = body(&text);
    assert_eq!(rows[0], "omega0,a,variance_total,thermal,qnl,status");
    assert_eq!(rows.len(), 1 + 8);
    assert!(rows[1..].iter().all(|r| r.ends_with(",ok")));
}

#[test]
fn fig5_columns_and_oracle() {
    let dir = scratch("fig5");
    let file = dir.join("f5.csv");
    let out = run(
        &[
            "fig5",
            "--a-steps",
            "3",
            "--oracle",
            "--bins",
            "128",
            "--out",
            file.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&file).unwrap();
    let rows = body(&text);
    assert!(rows[0].starts_with(
        "omega0,a,thermal,delta_phi0,delta_phi90,total_phi0,total_phi90,oracle_total_phi0"
    ));
    for row in &rows[1..] {
        let v: Vec<f64> = row.split(',').take(9).map(|x| x.parse().unwrap()).collect();
        assert!((v[5] - v[7]).abs() < 1e-6 * v[5], "{row}");
        assert!((v[6] - v[8]).abs() < 1e-6 * v[6], "{row}");
    }
}

#[test]
fn config_file_with_flag_override_and_warning() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "# sweep settings\nscenario = squeezed\na_steps = 5\nrs = 0.3\ngain = 2\n",
    )
    .unwrap();
    let file = dir.join("sweep.csv");
    let out = run(
        &[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--a-steps",
            "2",
            "--out",
            file.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning: `gain`"), "{stderr}");
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("# scenario = squeezed"));
    assert!(text.contains("# rs = 0.3"));
    assert_eq!(body(&text).len(), 1 + 2);
}

#[test]
fn inertial_sweep_reports_residual() {
    let dir = scratch("inertial");
    let file = dir.join("inertial.csv");
    let out = run(
        &[
            "sweep",
            "--scenario",
            "inertial",
            "--r-omega",
            "0,3",
            "--out",
            file.to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    let rows = body(&text);
    assert_eq!(
        rows[0],
        "r,r_omega,vacuum_variance,residual_coefficient,status"
    );
    let last: Vec<&str> = rows[2].split(',').collect();
    assert!((last[3].parse::<f64>().unwrap() - (-3f64).exp()).abs() < 1e-12);
    assert!((last[2].parse::<f64>().unwrap() - (1.0 + 2.0 * (-6f64).exp())).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(run(&["fig4", "--a-min", "-1"], None).status.code(), Some(2));
    assert_eq!(
        run(&["fig4", "--scenario", "bogus"], None).status.code(),
        Some(2)
    );
    assert_eq!(run(&["nonsense"], None).status.code(), Some(2));
    let dir = scratch("badcfg");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = run(&["fig4", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn verify_passes_on_small_lattice() {
    let dir = scratch("verify-ok");
    let out = run(
        &[
            "verify",
            "--a-steps",
            "2",
            "--omega0",
            "1",
            "--pairs",
            "5",
            "--r-omega",
            "0.5",
            "--bins",
            "128",
        ],
        Some(&dir),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("verify_report.csv")).unwrap();
    let rows = body(&text);
    assert_eq!(rows.len(), 1 + 6);
    assert!(rows[1..].iter().all(|r| r.contains(",pass,")), "{text}");
}

#[test]
fn verify_names_failing_checks() {
    let dir = scratch("verify-fail");
    // 16 bins cannot resolve the wavepacket; cutoff 12 truncates r = r_omega = 1.
    let out = run(
        &[
            "verify",
            "--a-steps",
            "2",
            "--omega0",
            "1",
            "--pairs",
            "5",
            "--bins",
            "16",
            "--fock-cutoff",
            "12",
            "--r-omega",
            "1",
        ],
        Some(&dir),
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("oracle-agreement"), "{stderr}");
    assert!(stderr.contains("fock-inertial"), "{stderr}");
    let text = std::fs::read_to_string(dir.join("verify_report.csv")).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("fock-inertial,") && l.contains(",fail,")));
}
