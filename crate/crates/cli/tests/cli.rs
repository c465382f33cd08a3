use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
}

fn workdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("spinlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &Path, args: &[&str]) -> Output {
    exe().current_dir(dir).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn argument_errors_exit_2_with_one_line() {
    let d = workdir("args");
    for args in [
        vec!["oat-sweep"],
        vec!["oat-sweep", "--n", "10", "--chit", "0:1"],
        vec!["oat-sweep", "--n", "10", "--chit", "0:1:0"],
        vec!["nope"],
        vec!["estimate", "--nu", "100", "--reps", "3"],
        vec!["estimate", "--nu", "100", "--reps", "3", "--seed", "1", "--method", "magic"],
        vec!["oat-sweep", "--n", "0"],
        vec!["spin-mixing", "--n", "7", "--mode", "ground", "--q", "0"],
        vec!["tomography", "--n", "4", "--kind", "x"],
    ] {
        let o = run(&d, &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        let e = stderr(&o);
        assert_eq!(e.trim_end().lines().count(), 1, "{args:?}: {e}");
        assert!(e.starts_with("spinlab: "), "{e}");
    }
}

#[test]
fn numerical_failure_exits_1() {
    let d = workdir("num");
    // a window far from the true phase leaves every sample mean out of range
    let o = run(&d, &["estimate", "--method", "moments", "--nu", "200", "--reps", "4", "--seed", "3", "--theta", "0.4", "--window", "0:0.01:11"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn csv_has_header_and_17_digit_cells() {
    let d = workdir("csv");
    let o = run(&d, &["oat-sweep", "--n", "30", "--chit", "0:0.5:6", "--out", "o.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(d.join("o.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "chit,xiR2_numeric,xiR2_closed,fq_numeric,fq_closed,contrast");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for cell in rows.iter().flat_map(|r| r.split(',')) {
        let (mant, _) = cell.split_once('e').expect("scientific notation");
        let digits = mant.chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 17, "{cell}");
    }
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("o.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["subcommand"], "oat-sweep");
    assert_eq!(meta["config"]["n"], 30);
    assert_eq!(meta["config"]["chit"]["count"], 6);
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = workdir("cfg");
    std::fs::write(d.join("run.cfg"), "# floors\nn = 10:20:2\nnu = 100\neta = 0.5\n").unwrap();
    let o = run(&d, &["floors", "--config", "run.cfg", "--eta", "1", "--out", "f.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("f.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["eta"], 1.0);
    assert_eq!(meta["config"]["nu"], 100.0);
    assert_eq!(meta["config_file"], "run.cfg");
    let text = std::fs::read_to_string(d.join("f.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn thread_count_does_not_change_output() {
    let d = workdir("threads");
    let args = ["bjj-ground", "--n", "60", "--lambda", "-3:5:17"];
    let a = exe().current_dir(&d).args(args).args(["--out", "a.csv", "--threads", "1"]).output().unwrap();
    let b = exe().current_dir(&d).args(args).args(["--out", "b.csv"]).env("SPINLAB_THREADS", "3").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(std::fs::read(d.join("a.csv")).unwrap(), std::fs::read(d.join("b.csv")).unwrap());
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("b.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["threads"], 3);
    let bad = exe().current_dir(&d).args(args).env("SPINLAB_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_format_and_every_subcommand_run() {
    let d = workdir("all");
    let cases: Vec<Vec<&str>> = vec![
        vec!["oat-sweep", "--n", "12", "--chit", "0:1:3"],
        vec!["bjj-ground", "--n", "20", "--lambda", "-1:1:3"],
        vec!["spin-mixing", "--n", "40", "--q", "79", "--t", "0:0.01:3"],
        vec!["spin-mixing", "--n", "40", "--mode", "ground", "--q", "-1:1:3"],
        vec!["su11", "--n", "40", "--t-mix", "0.01", "--theta", "3:3.2:3"],
        vec!["estimate", "--method", "bayes", "--nu", "500", "--reps", "3", "--seed", "5"],
        vec!["tomography", "--n", "6", "--kind", "w", "--state", "twin-fock"],
        vec!["witness", "--n", "20", "--chit", "0:0.1:3"],
        vec!["floors", "--n", "10:100:3"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let out = format!("r{i}.json");
        let o = exe().current_dir(&d).args(args).args(["--format", "json", "--out", &out]).output().unwrap();
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join(&out)).unwrap()).unwrap();
        let cols = v["columns"].as_array().unwrap().len();
        assert!(cols >= 3);
        assert!(v["rows"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == cols));
        assert!(d.join(format!("r{i}.meta.json")).exists());
    }
}

#[test]
fn spin_mixing_ground_state_qfi_column() {
    let d = workdir("sm");
    let o = run(&d, &["spin-mixing", "--n", "100", "--mode", "ground", "--q", "0", "--out", "g.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(d.join("g.csv")).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[2] - 5050.0).abs() < 1e-6 * 5050.0);
}
