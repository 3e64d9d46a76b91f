use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn agme(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agme"))
        .args(args)
        .env("AGME_OUTPUT_ROOT", root)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_compare_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "environment = \"color\"\nmode = \"image\"\nalgorithm = \"agme\"\ntrials = 60\n\
         seeds = [1, 2]\nsnapshot_trials = [30]\noutput_dir = \"exp\"\n[eval]\nevery = 30\n",
    );
    let out = agme(&["run", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // relative output_dir lands under the output root variable
    let run_dir = dir.path().join("exp");
    assert!(run_dir.join("seed_1/metrics.csv").is_file());

    let out = agme(&["compare", run_dir.to_str().unwrap(), run_dir.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("trial,mean_perf_a,mean_perf_b,difference\n"));
    assert!(stdout.contains("# final difference 0"));

    let dump = run_dir.join("seed_2/outcomes_t30.csv");
    let out = agme(&["replay", dump.to_str().unwrap(), "all"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("31/31 rows match"));
    let out = agme(&["replay", dump.to_str().unwrap(), "12"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.json",
        r#"{"environment": "arm", "algorithm": "babbling", "trials": 5000}"#,
    );
    let target = dir.path().join("custom");
    let out = agme(
        &["run", &cfg, "--trials", "20", "--eval-every", "10", "--seeds", "4", "--output-dir", target.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics = fs::read_to_string(target.join("seed_4/metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 4);
}

#[test]
fn errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(
        dir.path(),
        "bad.toml",
        "environment = \"arm\"\nalgorithm = \"agme\"\n[agme]\nsigma = [1.0]\n",
    );
    let out = agme(&["run", &bad], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("agme.sigma"));

    let out = agme(&["compare", "/nonexistent/a", "/nonexistent/b"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_dump_row_exits_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "exp.toml",
        "environment = \"arm\"\nalgorithm = \"agme\"\ntrials = 10\nseeds = [0]\noutput_dir = \"r\"\n",
    );
    assert!(agme(&["run", &cfg], dir.path()).status.success());
    let dump = dir.path().join("r/seed_0/outcomes_t10.csv");
    let text = fs::read_to_string(&dump).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[4].split(',').map(String::from).collect();
    let last = fields.len() - 1;
    fields[last] = "0.5".into();
    lines[4] = fields.join(",");
    fs::write(&dump, lines.join("\n") + "\n").unwrap();
    let out = agme(&["replay", dump.to_str().unwrap(), "3"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("row 3: mismatch"));
}
