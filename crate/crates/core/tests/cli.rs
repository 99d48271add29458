use std::process::Command;

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_selfadjust"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn run_emits_header_and_rows() {
    let out = cli(&[
        "run",
        "--algo",
        "splay",
        "--workload",
        "uniform",
        "--n",
        "31",
        "--m",
        "20",
        "--seed",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("access_index,key,cost,z,leaves"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn run_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"]
        .iter()
        .map(|f| dir.path().join(f))
        .collect();
    for p in &paths {
        let args = [
            "run",
            "--algo",
            "block3",
            "--workload",
            "zipf",
            "--alpha",
            "1.2",
            "--n",
            "40",
            "--m",
            "50",
        ];
        let out = cli(&[
            &args[..],
            &[
                "--weights",
                "random",
                "--format",
                "json",
                "--out",
                p.to_str().unwrap(),
            ],
        ]
        .concat());
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&paths[0]).unwrap(),
        std::fs::read(&paths[1]).unwrap()
    );
}

#[test]
fn bad_arguments_fail() {
    assert!(!cli(&["run", "--algo", "treap", "--n", "3", "--m", "1"])
        .status
        .success());
    assert!(!cli(&["counterexample", "--family", "fig3", "--n", "8"])
        .status
        .success());
    assert!(!cli(&[
        "experiment",
        "pathbalance-scaling",
        "--nmin",
        "100",
        "--nmax",
        "128"
    ])
    .status
    .success());
}

#[test]
fn counterexample_and_experiments_report_json() {
    let out = cli(&["counterexample", "--family", "fig2-left", "--n", "64"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["before_path"].as_array().unwrap().len(), 64);
    let out = cli(&["experiment", "sequential", "--algo", "splay", "--n", "128"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["total_cost"].as_u64().unwrap() <= 16 * 128);
    let out = cli(&["geometry", "greedy", "--n", "50", "--m", "100"]);
    assert!(out.status.success());
}
