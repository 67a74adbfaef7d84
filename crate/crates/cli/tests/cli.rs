use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levy-voigt")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn profile_csv_layout() {
    let o = run(&["profile", "--alpha1", "1.5", "--alpha2", "2", "--tau", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# alpha1=1.5,alpha2=2,tau=1,extent="));
    assert_eq!(lines.next().unwrap(), "x,value");
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            // 17 significant digits
            assert_eq!(v.split('e').next().unwrap().trim_start_matches('-').len(), 18);
            (x.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert!(rows.len() >= 4097 && rows.len() % 2 == 1);
    assert_eq!(rows[0].0, -rows[rows.len() - 1].0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["evolve", "--alpha1", "1", "--alpha2", "1.5", "--tau", "0.5", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&a).unwrap().starts_with("# alpha1=1,alpha2=1.5,tau=0.5,extent="));
}

#[test]
fn invalid_parameters_exit_2() {
    assert_eq!(code(&run(&["profile", "--alpha1", "2.5"])), 2);
    assert_eq!(code(&run(&["profile", "--tau", "-1"])), 2);
    assert_eq!(code(&run(&["moments", "--alpha1", "1", "--q", "1.2"])), 2);
    assert_eq!(code(&run(&["moments", "--method", "simpson"])), 2);
    assert_eq!(code(&run(&["scaling", "--low-min", "1e-3", "--low-max", "1e-2"])), 2);
    assert_eq!(code(&run(&["profile", "--bogus"])), 2);
}

#[test]
fn failed_certification_exits_3() {
    // a coarse grid misses the mass check
    let o = run(&["profile", "--grid-extent", "5", "--grid-n", "11"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
    // the asymptotic series cannot reach 1e-12 at tau = 3
    assert_eq!(code(&run(&["moments", "--tau", "3", "--method", "series_large_tau"])), 3);
}

#[test]
fn io_failures_exit_4() {
    let o = run(&["profile", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&o), 4);
    assert_eq!(code(&run(&["--config", "/nonexistent-dir/c.toml", "profile"])), 4);
}

#[test]
fn aborted_write_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(&["profile", "--grid-extent", "5", "--grid-n", "11", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "alpha1 = 1.0\nalpha2 = 2.0\nq = 0.5\ntau = 0.001\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["--config", c, "moments"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "tau,q,value,method,error_estimate");
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 0.001);
    assert_eq!(row[3], "series_small_tau");

    let o = run(&["--config", c, "moments", "--tau", "1", "--method", "quadrature"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
    assert_eq!(row[3], "quadrature");

    fs::write(&cfg, "alpah1 = 1.0\n").unwrap();
    assert_eq!(code(&run(&["--config", c, "profile"])), 2);
}

#[test]
fn scaling_report() {
    let o = run(&["scaling", "--alpha1", "2", "--alpha2", "2", "--q", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!((f[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-9, "{line}");
        assert_eq!(f[4].parse::<f64>().unwrap(), 0.5);
    }
}

#[test]
fn fig1_writes_twelve_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fig1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 12);
    assert!(names.contains(&"fig1_a0.01_voigt.csv".to_string()));
    assert!(Path::new(&dir.path().join("fig1_a2_lorentz.csv")).exists());
    assert!(run(&["fig1"]).status.code() == Some(2));
}
