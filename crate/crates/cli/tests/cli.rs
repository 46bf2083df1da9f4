use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimo-sim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &[&str] = &[
    "ber", "--n", "8", "--u", "8", "--mod", "qpsk", "--snr", "0:2:20", "--det", "mmse:chol",
    "--trials", "100", "--seed", "7",
];

#[test]
fn ber_is_reproducible_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let mut args = SMALL.to_vec();
        args.extend(["--threads", threads, "--out", out.to_str().unwrap()]);
        let o = sim(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        csvs.push(fs::read(out.join("ber_8x8_qpsk.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs[0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,u,mod,detector,params,snr_db,trials,bit_errors,bits,ber,stderr")
    );
    assert_eq!(lines.count(), 11);
    assert!(text.lines().nth(1).unwrap().starts_with("8,8,qpsk,mmse,backend=chol,0,"));
}

#[test]
fn preset_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["ber", "--preset", "fig2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn preset_with_overrides_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(
        &["ber", "--preset", "fig5", "--seed", "3", "--trials", "20", "--snr", "30,35"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("ber_32x32_64qam.csv")).unwrap();
    assert!(csv.contains(",mmse,backend=qr,35,"));
    assert!(csv.contains(",admin,t=5;beta=1*sigma2;backend=ldl,30,"));
    assert!(csv.contains(",simo,mrc,35,"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["ber", "--n", "4", "--u", "8", "--mod", "qpsk", "--snr", "0", "--det", "mmse"], "u:"),
        (&["ber", "--n", "8", "--u", "4", "--mod", "8psk", "--snr", "0", "--det", "mmse"], "mod:"),
        (&["ber", "--n", "8", "--u", "4", "--mod", "qpsk", "--snr", "5:1:0", "--det", "mmse"], "snr:"),
        (&["ber", "--n", "8", "--u", "4", "--mod", "qpsk", "--snr", "0", "--det", "nsa:0"], "det:"),
        (&["ber", "--n", "8", "--u", "4", "--mod", "qpsk", "--snr", "0"], "det:"),
        (&["ber", "--preset", "fig9", "--seed", "1"], "preset:"),
        (&["complexity", "--u", "4,x"], "u:"),
    ];
    for (args, field) in cases {
        let o = sim(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        r#"
out = "results"

[[sweep]]
n = 8
u = 4
mod = "16qam"
snr = "0:10:20"
detectors = ["mmse:ldl", "gs:3", "simo"]
trials = 500
seed = 2

[complexity]
users = [4, 8]
t = 2
"#,
    )
    .unwrap();
    let o = sim(&["ber", "--config", "exp.toml", "--trials", "30"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("results/ber_8x4_16qam.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(6) == Some("30")), "{csv}");
    let cx = fs::read_to_string(dir.path().join("results/complexity.csv")).unwrap();
    assert!(cx.contains("8,NSA,2,"));

    fs::write(&cfg, "[[sweep]]\nantennas = 3\n").unwrap();
    let o = sim(&["ber", "--config", "exp.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("antennas"), "{}", stderr(&o));
}

#[test]
fn complexity_defaults_and_t1_note() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["complexity"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("complexity.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 6);
    assert!(csv.contains("32,CHOLESKY,3,22816,22816\n"));
    assert!(csv.contains("128,QR,3,"));

    let o = sim(&["complexity", "--t", "1", "--u", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("NSA rows are 0"));
    assert!(stdout(&o).contains("8,NSA,1,0,\n"));
}

#[test]
fn selftest_and_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["selftest"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report = stdout(&o);
    let chol8 = report.lines().find(|l| l.starts_with("CHOLESKY U=8")).unwrap();
    assert!(chol8.contains("392") && chol8.ends_with("ok"));

    let o = sim(&["selftest", "--corrupt-convention"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn constellation_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["constellation", "--mod", "16qam"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("label,re,im"));
    assert_eq!(text.lines().count(), 17);
}
