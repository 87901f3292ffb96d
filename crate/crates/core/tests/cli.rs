use std::process::Command;

fn mqlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mqlab"))
        .args(args)
        .output()
        .expect("mqlab runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn learn_row_has_fixed_header() {
    let (code, csv, _) = mqlab(&[
        "--mode",
        "learn",
        "--dim",
        "6",
        "--tstar",
        "1",
        "--epsilon",
        "0.02",
        "--seed",
        "7",
        "--set",
        "eval_samples=20000",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], mq_halfspace::scenario::LEARN_COLUMNS.join(","));
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row.len(), lines[0].split(',').count());
    assert_eq!(row[0], "mqlab-v1");
    assert_eq!(row[11], "learned");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = mqlab(&["--tstar", "1", "--bias", "0.1"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot be used with"));
    let (code, _, err) = mqlab(&["--mode", "learn", "--tstar", "1", "--epsilon", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("epsilon"));
    let (code, _, _) = mqlab(&["--mode", "learn", "--tstar", "1", "--set", "nonsense=1"]);
    assert_eq!(code, 1);
}

#[test]
fn budget_exhaustion_exits_two() {
    let (code, csv, _) = mqlab(&[
        "--mode", "learn", "--dim", "5", "--tstar", "1", "--budget", "500",
    ]);
    assert_eq!(code, 2);
    assert!(csv.lines().nth(1).unwrap().contains(",500,"));
}

#[test]
fn selftest_passes() {
    let (code, csv, _) = mqlab(&["--mode", "selftest"]);
    assert_eq!(code, 0, "{csv}");
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn sweep_file_rows_in_order_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.cfg");
    std::fs::write(
        &sweep,
        "# dimension sweep\ntstar = 1\nepsilon = 0.05\nsweep.dim = 3, 6\neval_samples = 10000\n",
    )
    .unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let (code, _, _) = mqlab(&[
            "--sweep-file",
            sweep.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let a = std::fs::read(&out_a).unwrap();
    assert_eq!(a, std::fs::read(&out_b).unwrap());
    let text = String::from_utf8(a).unwrap();
    let dims: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(dims, vec!["3", "6"]);
}

#[test]
fn lowerbound_mode_reports_statistics() {
    let (code, csv, _) = mqlab(&[
        "--mode",
        "lowerbound",
        "--dim",
        "40",
        "--bias",
        "0.05",
        "--set",
        "lb.m=300",
        "--set",
        "lb.k=5",
        "--set",
        "lb.trials=2000",
        "--set",
        "lb.games=10",
    ]);
    assert_eq!(code, 0);
    assert!(csv.contains("near_isometry_stat"));
    assert!(csv.contains("game_random_median_queries"));
}
