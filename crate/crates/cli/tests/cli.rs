use std::path::Path;
use std::process::{Command, Output};

use mixmetro_core::{phase_uncertainty, qfi_closed, StrategyId};

fn mixmetro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixmetro"))
        .args(args)
        .output()
        .expect("spawn mixmetro")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_table(path: &Path) -> (Vec<String>, Vec<csv::StringRecord>) {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(Result::unwrap).collect();
    (header, rows)
}

fn f(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

#[test]
fn qfi_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qfi.csv");
    let args = [
        "qfi",
        "--n",
        "3,4",
        "--p-steps",
        "10",
        "--out",
        path.to_str().unwrap(),
    ];
    assert!(mixmetro(&args).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .any(|l| l.contains("\"seed\":42")));

    let (header, rows) = read_table(&path);
    assert_eq!(
        header.join(","),
        "strategy,N,p,fisher_closed,fisher_spectral,delta_phi"
    );
    assert_eq!(rows.len(), 4 * 2 * 11);
    for r in &rows {
        let s: StrategyId = r[0].parse().unwrap();
        let n: usize = r[1].parse().unwrap();
        let p = f(r, 2);
        let closed = f(r, 3);
        assert_eq!(closed.to_bits(), qfi_closed(s, n, p).unwrap().to_bits());
        assert_eq!(
            f(r, 5).to_bits(),
            phase_uncertainty(closed).unwrap().to_bits()
        );
        assert!((f(r, 4) - closed).abs() <= 1e-7 * closed.max(1.0));
    }
}

#[test]
fn qfi_pure_q2_and_standard_column() {
    let q2 = stdout(&mixmetro(&[
        "qfi",
        "--strategies",
        "Q2",
        "--n",
        "10",
        "--p-min",
        "1",
        "--p-max",
        "1",
    ]));
    assert_eq!(q2.lines().last().unwrap(), "Q2,10,1,100,,0.1");

    let s = stdout(&mixmetro(&[
        "qfi",
        "--strategies",
        "S",
        "--n",
        "10",
        "--p-steps",
        "20",
    ]));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(s.as_bytes());
    for r in rdr.records().map(Result::unwrap) {
        let p = f(&r, 2);
        assert!((f(&r, 3) - 10.0 * p * p).abs() <= 1e-12, "{r:?}");
        assert!(r[4].is_empty());
    }
}

#[test]
fn qfi_spectral_column_up_to_limit() {
    let text = stdout(&mixmetro(&[
        "qfi",
        "--n",
        "4",
        "--p-steps",
        "20",
        "--spectral-max",
        "4",
    ]));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 84);
    for r in rows {
        assert!((f(&r, 4) - f(&r, 3)).abs() <= 1e-7, "{r:?}");
    }
    let first = text.lines().find(|l| l.starts_with("S,4,0,")).unwrap();
    assert!(first.ends_with(",inf"));
}

#[test]
fn correlations_structure() {
    let text = stdout(&mixmetro(&[
        "correlations",
        "--n",
        "2,5",
        "--p-steps",
        "10",
    ]));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>().join(","),
        "strategy,N,p,discord,classical,total,entangled,min_pt_eig"
    );
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    for r in rows.iter().filter(|r| &r[0] == "Cl" || &r[0] == "S") {
        assert_eq!(f(r, 3), 0.0);
        assert_eq!(&r[6], "false");
    }
    for q1 in rows.iter().filter(|r| &r[0] == "Q1") {
        let q2 = rows
            .iter()
            .find(|r| &r[0] == "Q2" && r[1] == q1[1] && r[2] == q1[2])
            .unwrap();
        assert!((f(q1, 5) - f(q2, 5)).abs() <= 1e-9);
    }
    assert!(rows.iter().any(|r| &r[6] == "true"));
}

#[test]
fn discord_mc_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let args = [
            "discord-mc",
            "--n",
            "2,3",
            "--p-min",
            "0.2",
            "--p-max",
            "0.8",
            "--p-steps",
            "2",
            "--trials",
            "50",
            "--seed",
            "9",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ];
        assert!(mixmetro(&args).status.success());
        let summary = mixmetro_cli::summary_path(&path);
        (
            std::fs::read(&path).unwrap(),
            std::fs::read(summary).unwrap(),
        )
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(a, c);

    let (header, rows) = read_table(&dir.path().join("a.csv"));
    assert_eq!(header.join(","), "strategy,N,p,trial,value_bits");
    assert_eq!(rows.len(), 2 * 2 * 3 * 50);
    let (header, summary) = read_table(&dir.path().join("a.summary.csv"));
    assert_eq!(
        header.join(","),
        "strategy,N,p,min,max,conjectured,upper_bound"
    );
    assert_eq!(summary.len(), 12);
}

#[test]
fn discord_mc_seed_changes_samples() {
    let base = [
        "discord-mc",
        "--n",
        "2",
        "--p-min",
        "0.5",
        "--p-max",
        "0.5",
        "--trials",
        "5",
    ];
    let a = stdout(&mixmetro(&[&base[..], &["--seed", "1"]].concat()));
    let b = stdout(&mixmetro(&[&base[..], &["--seed", "2"]].concat()));
    assert_ne!(a, b);
}

#[test]
fn boundaries_values() {
    let text = stdout(&mixmetro(&["boundaries", "--n", "2,10"]));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    let get = |s: &str, n: &str| f(rows.iter().find(|r| &r[0] == s && &r[1] == n).unwrap(), 2);
    assert!((get("Q1", "10") - 0.118).abs() <= 1e-3);
    assert!((get("Q2", "10") - 0.088).abs() <= 1e-3);
    assert!((get("Q1", "2") - (2f64.sqrt() - 1.0)).abs() <= 1e-5);
    assert!((get("Q2", "2") - (2f64.sqrt() - 1.0)).abs() <= 1e-5);
}

#[test]
fn json_output() {
    let text = stdout(&mixmetro(&["boundaries", "--n", "3", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["metadata"]["command"], "boundaries");
    assert!(v["rows"][0]["p_star"].is_f64());
}

#[test]
fn exit_codes() {
    assert_eq!(
        mixmetro(&["qfi", "--p-min", "0.9", "--p-max", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mixmetro(&["qfi", "--strategies", "Q5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mixmetro(&["correlations", "--strategies", "Cl", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(mixmetro(&["discord-mc", "--n", "7"]).status.code(), Some(3));
    assert_eq!(
        mixmetro(&["qfi", "--spectral-max", "20"]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_quick_exits_zero() {
    let out = mixmetro(&["verify", "--level", "quick"]);
    let text = stdout(&out);
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("[FAIL]"));
}
