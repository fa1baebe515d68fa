use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use diamond_bounds::sweep::CSV_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diamond-bounds"))
        .args(args)
        .output()
        .unwrap()
}

fn sweep_args<'a>(b: &'a str, c_min: &'a str, c_max: &'a str, step: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        "sweep", "--a", "0.9", "--b", b, "--p1", "10", "--p2", "10", "--c-min", c_min, "--c-max", c_max, "--step",
        step, "--out", out,
    ]
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn sweep_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let first = path(dir.path(), "first.csv");
    let second = path(dir.path(), "second.csv");
    for out in [&first, &second] {
        let res = run(&sweep_args("0.9", "1", "3", "0.05", out));
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let a = fs::read(&first).unwrap();
    assert_eq!(a, fs::read(&second).unwrap());

    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 42);
    let cs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(cs.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(lines[1].split(',').next(), Some("1.000000"));
    assert_eq!(lines[41].split(',').next(), Some("3.000000"));
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 9);
        assert!(
            line.split(',').all(|f| f.split('.').nth(1).map(str::len) == Some(6)),
            "{line}"
        );
    }
}

#[test]
fn oversized_step_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "one.csv");
    let res = run(&sweep_args("-0.9", "1", "1.5", "2", &out));
    assert_eq!(res.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("1.000000,"));
}

#[test]
fn eval_prints_report_and_csv_row() {
    let res = run(&[
        "eval", "--a", "0.9", "--b", "-0.9", "--p1", "10", "--p2", "10", "--c1", "0", "--c2", "0", "--csv",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let out = String::from_utf8(res.stdout).unwrap();
    assert!(out.contains("theorem1"));
    assert!(out.contains(CSV_HEADER));
    assert!(out.contains("0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000"));

    let again = run(&[
        "eval", "--a", "0.9", "--b", "-0.9", "--p1", "10", "--p2", "10", "--c1", "0", "--c2", "0", "--csv",
    ]);
    assert_eq!(out.as_bytes(), again.stdout.as_slice());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["eval", "--a", "0.9"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--a", "x"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    let negative_power = [
        "eval", "--a", "0.9", "--b", "0.9", "--p1", "-1", "--p2", "10", "--c1", "1", "--c2", "1",
    ];
    let res = run(&negative_power);
    assert_eq!(res.status.code(), Some(1));
    assert!(!res.stderr.is_empty());
    let bad_tol = [
        "eval", "--a", "0.9", "--b", "0.9", "--p1", "1", "--p2", "1", "--c1", "1", "--c2", "1", "--tol", "0",
    ];
    assert_eq!(run(&bad_tol).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn invalid_sweeps_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "x.csv");
    assert_eq!(run(&sweep_args("0.9", "3", "1", "0.1", &out)).status.code(), Some(1));
    assert_eq!(run(&sweep_args("0.9", "1", "3", "0", &out)).status.code(), Some(1));
    let unwritable = path(dir.path(), "missing/dir/x.csv");
    assert_eq!(
        run(&sweep_args("0.9", "1", "1", "1", &unwritable)).status.code(),
        Some(1)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = path(dir.path(), "channel.conf");
    fs::write(
        &config,
        "# channel\na = 0.9\nb = 0.9\np1 = 10\np2 = 10\nc1 = 5\nc2 = 0\n",
    )
    .unwrap();

    let from_file = run(&["eval", "--config", &config]);
    assert_eq!(from_file.status.code(), Some(0));
    let text = String::from_utf8(from_file.stdout).unwrap();
    assert!(
        text.contains("a = 0.9, b = 0.9, P1 = 10, P2 = 10, C1 = 5, C2 = 0"),
        "{text}"
    );

    let overridden = run(&["eval", "--config", &config, "--c2", "0.5"]);
    assert_eq!(overridden.status.code(), Some(0));
    let text = String::from_utf8(overridden.stdout).unwrap();
    assert!(text.contains("C2 = 0.5"), "{text}");

    fs::write(&config, "a = 0.9\nbogus = 1\n").unwrap();
    let res = run(&["eval", "--config", &config]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let res = run(&["eval", "--config", &path(dir.path(), "absent.conf")]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn plot_script_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "sweep.csv");
    let script = path(dir.path(), "sweep.gp");
    fs::write(
        &csv,
        format!("{CSV_HEADER}\n1.000000,2.0,2.0,2.0,2.0,2.0,0.0,0.0,0.0\n"),
    )
    .unwrap();
    let res = run(&["plot", "--csv", &csv, "--out", &script]);
    assert_eq!(res.status.code(), Some(0));
    let text = fs::read_to_string(&script).unwrap();
    assert!(text.contains("using 1:2"));
    assert!(text.contains("using 1:3"));
    assert!(text.contains("using 1:4"));
    assert!(text.contains("set datafile separator ','"));

    fs::write(&csv, format!("{CSV_HEADER}\n")).unwrap();
    let res = run(&["plot", "--csv", &csv, "--out", &script]);
    assert_eq!(res.status.code(), Some(0));
    assert!(!fs::read_to_string(&script).unwrap().contains("plot '"));

    fs::write(&csv, "C,simple_cutset,cutset_102\n1,2,3\n").unwrap();
    let res = run(&["plot", "--csv", &csv, "--out", &script]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("theorem1"));

    let res = run(&["plot", "--csv", &path(dir.path(), "absent.csv"), "--out", &script]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn hidden_oracle_commands() {
    let res = run(&[
        "oracle", "n3", "--rho", "-0.5", "--b", "-0.9", "--p1", "10", "--p2", "10",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8(res.stdout)
        .unwrap()
        .starts_with("n3_identity_residual"));

    let res = run(&[
        "oracle",
        "sum-capacity",
        "--a",
        "0.9",
        "--b",
        "0.9",
        "--p1",
        "10",
        "--p2",
        "10",
        "--rho",
        "0.5",
        "--n-theta",
        "33",
        "--n-q",
        "17",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8(res.stdout)
        .unwrap()
        .contains("sum_capacity      2.62927"));

    let help = String::from_utf8(run(&["--help"]).stdout).unwrap();
    assert!(!help.contains("oracle"));
}
