use std::process::{Command, Output};

fn hypercore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercore")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses CSV output into (header, rows).
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], row: &[String], name: &str) -> f64 {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].parse().unwrap()
}

#[test]
fn local_examples() {
    let (h, rows) = table(&stdout(&hypercore(&[
        "local",
        "--u",
        "3",
        "--k",
        "3",
        "--p",
        "0.5",
        "--r",
        "1",
        "--method",
        "connectivity",
    ])));
    assert_eq!(column(&h, &rows[0], "value"), 0.5);
    assert_eq!(column(&h, &rows[0], "valid"), 1.0);

    let (h, rows) = table(&stdout(&hypercore(&[
        "local",
        "--u",
        "1",
        "--k",
        "3",
        "--p",
        "0.9",
        "--method",
        "connectivity",
    ])));
    assert_eq!(column(&h, &rows[0], "value"), 1.0);

    let (h, rows) = table(&stdout(&hypercore(&[
        "local", "--u", "200", "--k", "3", "--e-u", "200", "--r", "1", "--method", "covering",
    ])));
    let c = column(&h, &rows[0], "value");
    assert!((1.98e-4..=2.42e-4).contains(&c), "{c}");
}

#[test]
fn global_examples() {
    let (h, rows) = table(&stdout(&hypercore(&[
        "global", "--v", "3", "--k", "3", "--p", "0.7", "--r", "1", "--method", "mc", "--trials", "100000",
    ])));
    let (mean, se) = (column(&h, &rows[0], "value"), column(&h, &rows[0], "stderr"));
    assert!((mean - 0.7).abs() <= 3.0 * se);

    let (h, rows) = table(&stdout(&hypercore(&["oracle", "--v", "5", "--k", "3", "--p", "0.5", "--r", "2"])));
    let exact = column(&h, &rows[0], "at_least_one");
    let (h, rows) = table(&stdout(&hypercore(&[
        "global", "--v", "5", "--k", "3", "--p", "0.5", "--r", "2", "--method", "mc",
    ])));
    let (mean, se) = (column(&h, &rows[0], "value"), column(&h, &rows[0], "stderr"));
    assert!((mean - exact).abs() <= 3.0 * se, "{mean} vs {exact}");

    let mut args = vec!["global", "--v", "2", "--k", "3", "--p", "0.5"];
    for m in ["connectivity", "covering", "interleaved-lower", "interleaved-upper", "mc"] {
        args.extend(["--method", m]);
    }
    let (h, rows) = table(&stdout(&hypercore(&args)));
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| column(&h, r, "value") == 0.0));
}

const SWEEP: [&str; 17] = [
    "sweep",
    "--k",
    "3",
    "--r",
    "2",
    "--overhead",
    "1.2",
    "--e-from",
    "3",
    "--e-to",
    "12",
    "--method",
    "interleaved-lower",
    "--method",
    "interleaved-upper",
    "--method",
    "mc",
];

#[test]
fn sweep_csv_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let mut args = SWEEP.to_vec();
        args.extend(["--trials", "2000", "--seed", "11", "--out", path.to_str().unwrap()]);
        stdout(&hypercore(&args));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let (h, rows) = table(std::str::from_utf8(&ta).unwrap());
    assert_eq!(
        h,
        [
            "e_v",
            "v",
            "p",
            "interleaved-lower",
            "interleaved-lower_valid",
            "interleaved-lower_breakdown",
            "interleaved-upper",
            "interleaved-upper_valid",
            "interleaved-upper_breakdown",
            "mc_mean",
            "mc_stderr"
        ]
    );
    assert_eq!(rows.len(), 10);
    for row in &rows {
        let (e, v, p) = (column(&h, row, "e_v"), column(&h, row, "v"), column(&h, row, "p"));
        assert_eq!(v, (1.2 * e).round());
        let pairs = v * (v - 1.0) * (v - 2.0) / 6.0;
        assert!((p * pairs - e).abs() <= 1e-12 * e);
        for m in ["interleaved-lower", "interleaved-upper"] {
            assert!(["0", "1"]
                .contains(&row[h.iter().position(|x| *x == format!("{m}_valid")).unwrap()].as_str()));
        }
    }
}

#[test]
fn single_row_sweep_and_json() {
    let out = stdout(&hypercore(&[
        "sweep",
        "--k",
        "3",
        "--overhead",
        "1.2",
        "--e-from",
        "3",
        "--e-to",
        "3",
        "--method",
        "covering",
    ]));
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 1);
    let json = stdout(&hypercore(&[
        "sweep",
        "--k",
        "3",
        "--overhead",
        "1.2",
        "--e-from",
        "3",
        "--e-to",
        "4",
        "--method",
        "covering",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn breakdown_examples() {
    let (h, rows) = table(&stdout(&hypercore(&[
        "breakdown",
        "--scope",
        "local",
        "--k",
        "3",
        "--method",
        "connectivity",
    ])));
    let at = column(&h, &rows[0], "breakdown_at");
    assert!((20.0..=200.0).contains(&at), "{at}");

    let out = stdout(&hypercore(&["breakdown", "--scope", "local", "--k", "3", "--method", "covering"]));
    assert!(out.lines().nth(1).unwrap().ends_with(",none"));

    let out = stdout(&hypercore(&["breakdown", "--k", "3", "--method", "covering", "--cap", "0"]));
    assert!(out.lines().nth(1).unwrap().ends_with(",0,0,none"));
}

#[test]
fn exit_codes() {
    assert_eq!(hypercore(&["local", "--u", "3", "--k", "3", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(hypercore(&["local", "--u", "3", "--k", "3"]).status.code(), Some(2));
    assert_eq!(hypercore(&["breakdown", "--k", "3", "--method", "mc"]).status.code(), Some(2));
    let out = hypercore(&[
        "sweep",
        "--k",
        "3",
        "--overhead",
        "1.2",
        "--e-from",
        "3",
        "--e-to",
        "3",
        "--method",
        "covering",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
