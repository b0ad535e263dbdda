use std::path::Path;
use std::process::{Command, Output};

fn cutcouple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutcouple"))
        .args(args)
        .env_remove("CUTCOUPLE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = cutcouple(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bounds_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout_ok(&["bounds", "--out", d]);
    let t2a = std::fs::read_to_string(dir.path().join("table2a.csv")).unwrap();
    assert!(t2a.contains("\n0.95,0.89,0.71"));
    let t2b = std::fs::read_to_string(dir.path().join("table2b.csv")).unwrap();
    assert!(t2b.contains("Sycamore,53,62,9"));
    let t3 = std::fs::read_to_string(dir.path().join("table3.csv")).unwrap();
    assert!(t3.contains("delusional device,1024,1079,55"));

    let again = tempfile::tempdir().unwrap();
    stdout_ok(&["bounds", "--out", again.path().to_str().unwrap()]);
    for name in ["table2a.csv", "table2b.csv", "table2b_alpha0.97_beta0.91.csv", "table3.csv"] {
        assert_eq!(
            std::fs::read(dir.path().join(name)).unwrap(),
            std::fs::read(again.path().join(name)).unwrap()
        );
    }
}

#[test]
fn run_methods_on_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.txt", "3 3\n0 1\n0 2\n1 2\n");
    let c4 = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");

    let r = stdout_ok(&["run", "--method", "brute", "--graph", &k3]);
    assert_eq!(field(&r, "value"), "2");
    assert_eq!(field(&r, "method"), "brute");

    let r = stdout_ok(&["run", "--method", "local", "--graph", &c4]);
    assert_eq!(field(&r, "value"), "4");
    assert_eq!(field(&r, "ratio"), "1");

    let r = stdout_ok(&["run", "--method", "coupled", "--exact-inner", "--n0", "2", "--graph", &c4]);
    assert_eq!(field(&r, "value"), "4");

    let r = stdout_ok(&["run", "--method", "multi-qaoa", "--exact-inner", "--n0", "2", "--graph", &c4]);
    assert_eq!(field(&r, "value"), "4");

    let r = stdout_ok(&["run", "--method", "gw", "--graph", &c4]);
    assert_eq!(field(&r, "value"), "4");

    for m in ["naive", "qaoa-full"] {
        let r = stdout_ok(&["run", "--method", m, "--graph", &k3, "--seed", "3"]);
        let v: f64 = field(&r, "value").parse().unwrap();
        assert!((0.0..=2.0).contains(&v));
    }
}

#[test]
fn run_rejects_bad_input() {
    assert!(!cutcouple(&["run", "--method", "annealing"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 1\n0 3\n");
    let out = cutcouple(&["run", "--method", "brute", "--graph", &bad]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let a = stdout_ok(&["gen", "--n", "9", "--prob", "0.5", "--seed", "4"]);
    let b = stdout_ok(&["gen", "--n", "9", "--prob", "0.5", "--seed", "4"]);
    assert_eq!(a, b);
    assert!(a.starts_with("9 "));
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", &a);
    stdout_ok(&["run", "--method", "brute", "--graph", &g]);
}

#[test]
fn growth_csv_is_byte_stable_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for k in 0..2 {
        let csv = dir.path().join(format!("tg{k}.csv"));
        let svg = dir.path().join(format!("tg{k}.svg"));
        stdout_ok(&[
            "tg-growth", "--n", "9", "--n0", "5", "--instances", "2", "--perms", "2", "--seed", "5",
            "--threads", "1", "--out", csv.to_str().unwrap(), "--plot", svg.to_str().unwrap(),
        ]);
        outs.push(std::fs::read_to_string(&csv).unwrap());
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
    }
    assert_eq!(outs[0], outs[1]);
    let lines: Vec<&str> = outs[0].lines().collect();
    assert_eq!(lines[0], "graph_seed,perm_seed,u0_size,tg_size");
    assert_eq!(lines.len(), 1 + 2 * 2 * 6);
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        if cols[2] == "1" {
            assert_eq!(cols[3], "1");
        }
    }
}

#[test]
fn fig3_small_run() {
    let args = [
        "fig3", "--n", "8", "--n0", "5", "--instances", "2", "--p", "2", "--max-iters", "15",
        "--threads", "1", "--seed", "2",
    ];
    let a = stdout_ok(&args);
    assert_eq!(a, stdout_ok(&args));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "instance_seed,n,n0,method,value,optimum,ratio");
    assert_eq!(lines.len(), 1 + 2 * 6);
    for row in &lines[1..] {
        let ratio: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&ratio));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# small instance\nn = 7\nprob = 0.5\nseed = 9\n");
    let r = stdout_ok(&["run", "--method", "brute", "--config", &cfg]);
    assert_eq!(field(&r, "n"), "7");
    let r = stdout_ok(&["run", "--method", "brute", "--config", &cfg, "--n", "6"]);
    assert_eq!(field(&r, "n"), "6");
    let bad = write(dir.path(), "bad.cfg", "colour = blue\n");
    assert!(!cutcouple(&["run", "--method", "brute", "--config", &bad]).status.success());
}

#[test]
fn threads_env_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_cutcouple"));
        c.args(["run", "--method", "brute", "--n", "6"]).args(extra);
        match env {
            Some(v) => c.env("CUTCOUPLE_THREADS", v),
            None => c.env_remove("CUTCOUPLE_THREADS"),
        };
        c.output().unwrap().status.success()
    };
    assert!(run(Some("1"), &[]));
    assert!(!run(Some("0"), &[]));
    assert!(run(Some("0"), &["--threads", "1"]));
}
