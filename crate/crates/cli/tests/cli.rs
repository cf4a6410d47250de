use std::path::Path;
use std::process::{Command, Output};

fn aaqaoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aaqaoa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend(["--out", path_str(&out)]);
    let o = aaqaoa(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_string()
}

#[test]
fn gen_and_orbits_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(
        dir.path(),
        "b10.txt",
        &["--kind", "binary", "--nodes", "10"],
    );
    assert!(std::fs::read_to_string(&g).unwrap().starts_with("10 9\n"));
    let o = aaqaoa(&["orbits", "--graph", &g, "--oracle"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["classes"].as_array().unwrap().len(), 7);
}

#[test]
fn balanced_needs_height() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    let o = aaqaoa(&[
        "gen",
        "--kind",
        "balanced",
        "--branching",
        "2",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let g = generate(
        dir.path(),
        "bal.txt",
        &["--kind", "balanced", "--branching", "2", "--height", "3"],
    );
    let o = aaqaoa(&["rcc", "--graph", &g, "--minimal"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "3");
}

#[test]
fn reduce_writes_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "s.txt", &["--kind", "star", "--nodes", "29"]);
    let h = dir.path().join("h.json");
    let o = aaqaoa(&[
        "reduce",
        "--graph",
        &g,
        "--convention",
        "adjacency",
        "--out",
        path_str(&h),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("reduced 3 full 57"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(h).unwrap()).unwrap();
    assert_eq!(json["quadratic"].as_array().unwrap().len(), 1);
}

#[test]
fn rcc_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(
        dir.path(),
        "b29.txt",
        &["--kind", "binary", "--nodes", "29"],
    );
    let o = aaqaoa(&["rcc", "--graph", &g, "--p", "1", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let uncovered: Vec<u64> = json["uncovered"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(uncovered, [9, 10, 17, 18, 19, 20, 21, 22, 25, 26]);
}

#[test]
fn run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "b7.txt", &["--kind", "binary", "--nodes", "7"]);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = aaqaoa(&[
            "run",
            "--graph",
            &g,
            "--seed",
            "5",
            "--max-evals",
            "80",
            "--out",
            path_str(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",,,1.00,1.00,6,5"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n1 1\n").unwrap();
    let o = aaqaoa(&["orbits", "--graph", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let big = generate(
        dir.path(),
        "b30.txt",
        &["--kind", "binary", "--nodes", "30"],
    );
    let o = aaqaoa(&["run", "--graph", &big]);
    assert_eq!(o.status.code(), Some(3));
    let o = aaqaoa(&["orbits", "--graph", &big, "--oracle"]);
    assert_eq!(o.status.code(), Some(3));

    let missing = dir.path().join("nope.txt");
    assert_eq!(
        aaqaoa(&["rcc", "--graph", path_str(&missing)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_table2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t2.md");
    let o = aaqaoa(&[
        "bench",
        "--suite",
        "table2",
        "--out",
        path_str(&out),
        "--format",
        "markdown",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let classes: Vec<&str> = text
        .lines()
        .skip(2)
        .map(|l| l.split('|').nth(4).unwrap().trim())
        .collect();
    assert_eq!(classes, ["2", "2", "3", "4"]);
}
